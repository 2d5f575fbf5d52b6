import itertools

import numpy as np
import pytest

from stardisc.core import CountingMode, PointSet, count_in_box


def brute_force_star_discrepancy(ps: PointSet) -> float:
    """Sup over genuine half-open boxes, probing each critical corner and the corner nudged up by one ulp."""
    N = ps.N
    axes = []
    for i in range(ps.s):
        vals = sorted(set(ps.coords[:, i].tolist()) | {1.0})
        probes = set(vals)
        probes.update(np.nextafter(v, 2.0) for v in vals if v < 1.0)
        axes.append(sorted(min(p, 1.0) for p in probes))
    best = 0.0
    for a in itertools.product(*axes):
        a = np.array(a)
        c = count_in_box(ps, a, CountingMode.STRICT)
        best = max(best, abs(c / N - float(np.prod(a))))
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    def _record(label: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" :: {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
