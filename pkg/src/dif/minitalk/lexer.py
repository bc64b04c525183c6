"""Tokenizer for MiniTalk source text.

Lexical classes: identifiers and reserved words, decimal integer
literals, double-quoted strings (the only escapes are ``\\"`` and
``\\\\``), structural punctuation, and ``#`` line comments. Whitespace
and comments separate tokens and are otherwise insignificant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from dif.errors import MiniTalkSyntaxError
from dif.minitalk.nodes import Loc

KEYWORDS = frozenset(
    {
        "class",
        "trait",
        "extends",
        "vars",
        "classvars",
        "uses",
        "method",
        "classmethod",
        "self",
        "super",
    }
)

PUNCT = "{}();,=."

_SKIP_RE = re.compile(r"(?:[ \t\r\n]+|#[^\n]*)+")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"[0-9]+")


@dataclass(frozen=True, slots=True)
class Token:
    """One lexeme. `kind` is "name", "number", "string", "eof", a reserved
    word, or a single punctuation character."""

    kind: str
    text: str
    value: object
    loc: Loc
    pos: int
    end: int


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    """Split source text into tokens, ending with an "eof" sentinel.

    Raises MiniTalkSyntaxError on any character that starts no token,
    on malformed escapes, and on unterminated strings.
    """
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)

    while pos < n:
        skipped = _SKIP_RE.match(text, pos)
        if skipped:
            span = skipped.group()
            newlines = span.count("\n")
            if newlines:
                line += newlines
                line_start = pos + span.rindex("\n") + 1
            pos = skipped.end()
            if pos >= n:
                break

        loc = Loc(file, line, pos - line_start + 1)
        ch = text[pos]

        m = _NAME_RE.match(text, pos)
        if m:
            word = m.group()
            kind = word if word in KEYWORDS else "name"
            tokens.append(Token(kind, word, word, loc, pos, m.end()))
            pos = m.end()
            continue

        m = _NUMBER_RE.match(text, pos)
        if m:
            tokens.append(Token("number", m.group(), int(m.group()), loc, pos, m.end()))
            pos = m.end()
            continue

        if ch == '"':
            value, end = _scan_string(text, pos, file, line, line_start)
            tokens.append(Token("string", text[pos:end], value, loc, pos, end))
            pos = end
            continue

        if ch in PUNCT:
            tokens.append(Token(ch, ch, ch, loc, pos, pos + 1))
            pos += 1
            continue

        raise MiniTalkSyntaxError(f"unexpected character {ch!r}", loc)

    eof_loc = Loc(file, line, n - line_start + 1)
    tokens.append(Token("eof", "", None, eof_loc, n, n))
    return tokens


def _scan_string(text: str, pos: int, file: str, line: int, line_start: int) -> tuple[str, int]:
    start_loc = Loc(file, line, pos - line_start + 1)
    chars: list[str] = []
    i = pos + 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == '"':
            return "".join(chars), i + 1
        if ch == "\n":
            break
        if ch == "\\":
            if i + 1 < n and text[i + 1] in ('"', "\\"):
                chars.append(text[i + 1])
                i += 2
                continue
            escaped = text[i + 1] if i + 1 < n else ""
            raise MiniTalkSyntaxError(
                f"invalid escape '\\{escaped}' in string literal",
                Loc(file, line, i - line_start + 1),
            )
        chars.append(ch)
        i += 1
    raise MiniTalkSyntaxError("unterminated string literal", start_loc)
