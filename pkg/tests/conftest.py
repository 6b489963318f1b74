import sys
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from pdedim.presets import preset  # noqa: E402
from pdedim.report import AnalysisOptions, analyze  # noqa: E402


@lru_cache(maxsize=None)
def _cached_report(name, frozen_params):
    return analyze(preset(name, dict(frozen_params)).system, AnalysisOptions())


def preset_report(name, params=None):
    """Analysis report for a preset, computed once per session."""
    return _cached_report(name, tuple(sorted((params or {}).items())))


DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


# --- acceptance criteria summary --------------------------------------------

_CRITERIA: dict[int, dict] = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "ok": True, "seconds": 0.0})
    entry["ok"] = entry["ok"] and call.excinfo is None
    entry["seconds"] += call.duration


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        verdict = "PASS" if e["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {e['title']}  ({e['seconds']:.2f} s)")
