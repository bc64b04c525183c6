"""Shared fixtures: the fragile-base-class logging scenario.

Branch A is the origin snapshot the filtered-log feature was written
against; the package adds FilteredLog as a subclass overriding log/1;
branch B rewrote Log>>logAll/1 to append directly to `messages` instead
of going through self.log(...). Merging the package into B is textually
clean but silently breaks filtering: that is the conflict the analyses
must surface.
"""

from __future__ import annotations

import pytest

from dif import diff, merge_sources, parse

FIXTURE_A = """\
class Object { }
class Log extends Object {
  vars messages;
  method log(m) { messages = m; }
  method logAll(ms) { self.log(ms); }
}
"""

FILTERED_LOG_PACKAGE = """\
class FilteredLog extends Log {
  vars filterBlock;
  method log(m) { self.accepts(m); super.log(m); }
  method accepts(m) { filterBlock = m; }
}
"""

FIXTURE_B = """\
class Object { }
class Log extends Object {
  vars messages;
  method log(m) { messages = m; }
  method logAll(ms) { messages = ms; }
}
"""


@pytest.fixture
def origin_a():
    return parse(FIXTURE_A, "A.mt")


@pytest.fixture
def dest_b():
    return parse(FIXTURE_B, "B.mt")


@pytest.fixture
def origin_head():
    """Branch A with the FilteredLog package loaded."""
    return merge_sources([(FIXTURE_A, "A.mt"), (FILTERED_LOG_PACKAGE, "filteredlog.mt")])


@pytest.fixture
def delta_f(origin_a, origin_head):
    """The filtered-log change as an entity-level delta."""
    return diff(origin_a, origin_head)


@pytest.fixture
def mt_dir(tmp_path):
    """Directory holding the three fixture files (plus the package) as
    .mt files; returns a dict of paths keyed by short name."""
    files = {
        "A": FIXTURE_A,
        "B": FIXTURE_B,
        "package": FILTERED_LOG_PACKAGE,
        "AF": FIXTURE_A + FILTERED_LOG_PACKAGE,
    }
    paths = {}
    for name, text in files.items():
        path = tmp_path / f"{name}.mt"
        path.write_text(text, encoding="utf-8")
        paths[name] = str(path)
    return paths
