"""Command-line frontend.

Subcommands: deps, diff, impact, analyze, migrate, bisect. Exit codes
are stable so the tool can gate merges in CI: 0 means clean (or plain
success), 1 means a suspect finding, 2 means an operational error.
stdout carries only the report; diagnostics go to stderr. DIF_COLOR=0|1
overrides ANSI color auto-detection.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from dif.delta import diff, to_json as delta_to_json
from dif.errors import (
    ApplyConflictError,
    DifError,
    ImpactUndefinedError,
    MiniTalkSyntaxError,
)
from dif.impact import (
    bisect,
    delta_impact,
    impact,
    impact_to_json,
    render_report_text,
    report_to_json,
)
from dif.minitalk import Codebase, Severity, merge_sources, parse
from dif.mining import DependencyMiner

EXIT_OK = 0
EXIT_SUSPECT = 1
EXIT_ERROR = 2


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.handler(args)
    except MiniTalkSyntaxError as exc:
        _err(f"error: {exc}")
        return EXIT_ERROR
    except (ApplyConflictError, ImpactUndefinedError) as exc:
        _err(f"error: {exc}")
        for conflict in exc.conflicts:
            _err(f"  {conflict.render()}")
        return EXIT_ERROR
    except DifError as exc:
        _err(f"error: {exc}")
        return EXIT_ERROR
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_ERROR


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dif",
        description=(
            "Detect semantic merge conflicts in MiniTalk codebases by comparing "
            "the dependency impact of a change in its origin and destination "
            "branches."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    deps = sub.add_parser("deps", help="mine and print the dependency set of a snapshot")
    deps.add_argument("file")
    _format_flag(deps)
    deps.set_defaults(handler=_cmd_deps)

    diff_p = sub.add_parser("diff", help="export the delta between two snapshots as JSON")
    diff_p.add_argument("base")
    diff_p.add_argument("head")
    diff_p.add_argument("--format", choices=["json"], default="json")
    diff_p.set_defaults(handler=_cmd_diff)

    impact_p = sub.add_parser("impact", help="signed dependency changes from base to head")
    impact_p.add_argument("base")
    impact_p.add_argument("head")
    _format_flag(impact_p)
    impact_p.set_defaults(handler=_cmd_impact)

    analyze = sub.add_parser(
        "analyze", help="compare the impact of a change in its origin branch and a destination"
    )
    analyze.add_argument("--origin-base", required=True)
    analyze.add_argument("--origin-head", required=True)
    analyze.add_argument("--dest", required=True)
    analyze.add_argument("--fail-on-warnings", action="store_true")
    _format_flag(analyze)
    analyze.set_defaults(handler=_cmd_analyze)

    migrate = sub.add_parser(
        "migrate", help="check a package against a new platform snapshot"
    )
    migrate.add_argument("--package", required=True)
    migrate.add_argument("--from", dest="from_platform", required=True)
    migrate.add_argument("--to", dest="to_platform", required=True)
    _format_flag(migrate)
    migrate.set_defaults(handler=_cmd_migrate)

    bisect_p = sub.add_parser(
        "bisect", help="find the first destination snapshot whose delta-impact is suspect"
    )
    bisect_p.add_argument("--origin-base", required=True)
    bisect_p.add_argument("--origin-head", required=True)
    bisect_p.add_argument("dest", nargs="+")
    _format_flag(bisect_p)
    bisect_p.set_defaults(handler=_cmd_bisect)

    return parser


def _format_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["text", "json"], default="text")


# --- commands ---------------------------------------------------------------


def _cmd_deps(args: argparse.Namespace) -> int:
    codebase = _load(args.file)
    miner = DependencyMiner(codebase)
    deps = miner.mine()
    _emit_diagnostics(miner.diagnostics)
    if args.format == "json":
        doc = {
            "dependencies": [
                {"source": d.source.render(), "kind": d.kind.value, "target": d.target.render()}
                for d in deps
            ]
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in deps.render_lines():
            print(line)
    return EXIT_OK


def _cmd_diff(args: argparse.Namespace) -> int:
    base = _load(args.base)
    head = _load(args.head)
    print(delta_to_json(diff(base, head)))
    return EXIT_OK


def _cmd_impact(args: argparse.Namespace) -> int:
    base = _load(args.base)
    head = _load(args.head)
    result = impact(diff(base, head), base)
    if args.format == "json":
        print(impact_to_json(result))
    else:
        color = _use_color()
        for entry in result:
            line = entry.render()
            if color:
                code = "32" if line.startswith("+") else "31"
                line = f"\x1b[{code}m{line[0]}\x1b[0m{line[1:]}"
            print(line)
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    origin_base = _load(args.origin_base)
    origin_head = _load(args.origin_head)
    dest = _load(args.dest)
    delta = diff(origin_base, origin_head)
    report = delta_impact(
        delta, origin_base, dest, origin_label=args.origin_base, dest_label=args.dest
    )
    rc = _emit_report(report, args.format)
    if args.fail_on_warnings and _has_warnings(origin_base, origin_head, dest, report.diagnostics):
        _err("error: warnings present and --fail-on-warnings is set")
        return EXIT_ERROR
    return rc


def _cmd_migrate(args: argparse.Namespace) -> int:
    platform_text = _read(args.from_platform)
    package_text = _read(args.package)
    origin_base = _checked(parse(platform_text, args.from_platform))
    origin_head = _checked(
        merge_sources([(platform_text, args.from_platform), (package_text, args.package)])
    )
    dest = _load(args.to_platform)
    delta = diff(origin_base, origin_head)
    report = delta_impact(
        delta, origin_base, dest, origin_label=args.from_platform, dest_label=args.to_platform
    )
    return _emit_report(report, args.format)


def _cmd_bisect(args: argparse.Namespace) -> int:
    origin_base = _load(args.origin_base)
    origin_head = _load(args.origin_head)
    destinations = [_load(path) for path in args.dest]
    delta = diff(origin_base, origin_head)
    found = bisect(
        delta,
        origin_base,
        destinations,
        origin_label=args.origin_base,
        dest_labels=list(args.dest),
    )
    if args.format == "json":
        doc: dict = {"firstConflict": None, "report": None}
        if found is not None:
            from dif.impact import report_to_doc

            doc = {"firstConflict": found[0], "report": report_to_doc(found[1])}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        if found is None:
            print("first-conflict: none")
        else:
            index, report = found
            print(f"first-conflict: {index}")
            _emit_diagnostics(report.diagnostics)
            for line in render_report_text(report, _use_color()):
                print(line)
    return EXIT_OK if found is None else EXIT_SUSPECT


# --- shared plumbing --------------------------------------------------------


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load(path: str) -> Codebase:
    return _checked(parse(_read(path), path))


def _checked(codebase: Codebase) -> Codebase:
    _emit_diagnostics(codebase.diagnostics)
    if codebase.has_errors:
        raise DifError("snapshot has errors; analysis aborted")
    return codebase


def _emit_report(report, fmt: str) -> int:
    _emit_diagnostics(report.diagnostics)
    if fmt == "json":
        print(report_to_json(report))
    else:
        for line in render_report_text(report, _use_color()):
            print(line)
    return EXIT_OK if report.is_clean else EXIT_SUSPECT


def _emit_diagnostics(diagnostics) -> None:
    for diag in diagnostics:
        _err(diag.render())


def _has_warnings(*sources) -> bool:
    for source in sources:
        diags = source.diagnostics if isinstance(source, Codebase) else source
        if any(d.severity is Severity.WARNING for d in diags):
            return True
    return False


def _use_color() -> bool:
    env = os.environ.get("DIF_COLOR")
    if env in ("0", "1"):
        return env == "1"
    return sys.stdout.isatty()


def _err(line: str) -> None:
    print(line, file=sys.stderr)
