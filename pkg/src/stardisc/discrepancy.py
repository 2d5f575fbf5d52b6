"""Star-discrepancy of a point set: exact, cover sandwich, and sampled lower bound.

For half-open boxes [0, a) the supremum of |A(a)/N - vol(a)| is reached on the
critical grid whose axis values are the point coordinates and 1. The
"volume exceeds count" side is evaluated with strict counts at grid corners;
the "count exceeds volume" side is a limit from above, evaluated with
inclusive counts at the same corners.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import CountingMode, PointSet
from .covering import DEFAULT_CORNER_CAP, CornerCapError, DeltaCover, build_grid_cover

__all__ = [
    "Method",
    "DiscrepancyResult",
    "GuardExceededError",
    "DEFAULT_MAX_CELLS",
    "exact_star_discrepancy",
    "exact_grid_cells",
    "cover_bound_discrepancy",
    "sampled_lower_bound",
    "grid_extremes",
]

DEFAULT_MAX_CELLS = 10**8
DEFAULT_MAX_AXIS_LEVELS = 10**6


class GuardExceededError(RuntimeError):
    pass


class Method(enum.Enum):
    EXACT = "exact"
    COVER_SANDWICH = "cover_sandwich"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class DiscrepancyResult:
    lower: float
    upper: float
    method: Method
    work: int
    seed: int | None = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    @property
    def value(self) -> float | None:
        return self.lower if self.method is Method.EXACT else None

    def to_dict(self) -> dict:
        out = {"method": self.method.value, "work": self.work}
        if self.method is Method.EXACT:
            out["value"] = self.lower
        else:
            out["lower"] = self.lower
            out["upper"] = self.upper
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def _axis_indices(column: np.ndarray, levels: np.ndarray, mode: CountingMode) -> np.ndarray:
    # first level index at which the point is counted
    side = "right" if mode is CountingMode.STRICT else "left"
    return np.searchsorted(levels, column, side=side)


def grid_extremes(coords: np.ndarray, axis_levels) -> tuple[float, int]:
    """Max over grid corners of max(vol - strict/N, inclusive/N - vol).

    ``axis_levels[i]`` must be sorted and end at 1. Slabs along axis 0 are
    swept in order with a running histogram over the remaining axes, so memory
    stays at the size of one slab.
    """
    coords = np.asarray(coords, dtype=np.float64)
    N, s = coords.shape
    levels = [np.asarray(lv, dtype=np.float64) for lv in axis_levels]
    if s == 1:
        coords = np.concatenate([coords, np.zeros((N, 1))], axis=1)
        levels.append(np.array([1.0]))
    rest_shape = tuple(lv.size for lv in levels[1:])
    rest_vol = levels[1]
    for lv in levels[2:]:
        rest_vol = np.multiply.outer(rest_vol, lv)

    sweeps = {}
    for mode in CountingMode:
        idx = np.stack([_axis_indices(coords[:, i], levels[i], mode) for i in range(len(levels))], axis=1)
        order = np.argsort(idx[:, 0], kind="stable")
        idx = idx[order]
        bounds = np.searchsorted(idx[:, 0], np.arange(levels[0].size + 1), side="left")
        flat = np.ravel_multi_index(tuple(idx[:, 1:].T), rest_shape) if N else idx[:, 0]
        sweeps[mode] = (flat, bounds)

    size = int(np.prod(rest_shape))
    hist = {mode: np.zeros(size, dtype=np.int64) for mode in CountingMode}
    best = 0.0
    for j, a0 in enumerate(levels[0]):
        cum = {}
        for mode, (flat, bounds) in sweeps.items():
            lo, hi = bounds[j], bounds[j + 1]
            if hi > lo:
                np.add.at(hist[mode], flat[lo:hi], 1)
            c = hist[mode].reshape(rest_shape)
            for ax in range(c.ndim):
                c = np.cumsum(c, axis=ax)
            cum[mode] = c
        vol = a0 * rest_vol
        under = vol - cum[CountingMode.STRICT] / N
        over = cum[CountingMode.INCLUSIVE] / N - vol
        best = max(best, float(under.max()), float(over.max()))
    work = levels[0].size * size
    return min(best, 1.0), work


def _critical_levels(ps: PointSet) -> list[np.ndarray]:
    return [np.union1d(ps.coords[:, i], [1.0]) for i in range(ps.s)]


def exact_grid_cells(ps: PointSet) -> int:
    return math.prod(lv.size for lv in _critical_levels(ps))


def exact_star_discrepancy(ps: PointSet, max_cells: int = DEFAULT_MAX_CELLS,
                           max_axis_levels: int = DEFAULT_MAX_AXIS_LEVELS) -> DiscrepancyResult:
    levels = _critical_levels(ps)
    if max(lv.size for lv in levels) > max_axis_levels:
        raise GuardExceededError("too many critical values on one axis; use cover_bound_discrepancy")
    cells = math.prod(lv.size for lv in levels)
    if cells > max_cells:
        raise GuardExceededError(
            f"critical grid has {cells} cells (cap {max_cells}); use cover_bound_discrepancy"
        )
    value, work = grid_extremes(ps.coords, levels)
    return DiscrepancyResult(value, value, Method.EXACT, work)


def cover_bound_discrepancy(ps: PointSet, delta=None, cover: DeltaCover | None = None,
                            corner_cap: int = DEFAULT_CORNER_CAP) -> DiscrepancyResult:
    """Sandwich [L, L + delta] around D*, with L the largest corner deviation on a delta-cover."""
    if cover is None:
        if delta is None:
            raise ValueError("give delta or a cover")
        cover = build_grid_cover(ps.s, delta, corner_cap=corner_cap)
    if cover.s != ps.s:
        raise ValueError("cover dimension differs from the point set")
    cells = math.prod(lv.size for lv in cover.levels_with_floor)
    if cells > cover.corner_cap:
        raise CornerCapError(f"{cells} cover corners exceed cap {cover.corner_cap}")
    lower, work = grid_extremes(ps.coords, cover.levels_with_floor)
    upper = min(1.0, lower + cover.delta)
    return DiscrepancyResult(lower, upper, Method.COVER_SANDWICH, work)


def sampled_lower_bound(ps: PointSet, trials: int, seed=None, batch: int = 4096) -> DiscrepancyResult:
    """Largest local discrepancy (both counting modes) over uniformly drawn corners."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    best = 0.0
    N = ps.N
    ceiling = max(1, batch * 64 // max(1, N * ps.s))
    step = min(batch, ceiling)
    done = 0
    while done < trials:
        n = min(step, trials - done)
        a = rng.random((n, ps.s))
        vol = a.prod(axis=1)
        strict = (ps.coords[None, :, :] < a[:, None, :]).all(axis=2).sum(axis=1)
        incl = (ps.coords[None, :, :] <= a[:, None, :]).all(axis=2).sum(axis=1)
        best = max(best, float(np.max(np.abs(strict / N - vol))), float(np.max(np.abs(incl / N - vol))))
        done += n
    return DiscrepancyResult(best, 1.0, Method.SAMPLED, 2 * trials, seed=seed)
