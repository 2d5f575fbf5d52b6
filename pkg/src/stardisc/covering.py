"""Grid delta-covers of the anchored boxes and exact bracketing-number bounds.

Three upper bounds for the bracketing number N_[](s, delta) are evaluated
here with :class:`fractions.Fraction` so that comparisons between them carry
no rounding: Gnewuch's closed form, his intermediate sum, and the improved
form with leading factor 2^(s-2). Passing a float ``delta`` evaluates the same
formulas in floating point (reports then mark the value as inexact).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational

import numpy as np

from .core import AnchorBox, DimensionMismatchError

__all__ = [
    "DeltaCover",
    "Bracket",
    "CoverReport",
    "RationalBoundReport",
    "CornerCapError",
    "DEFAULT_CORNER_CAP",
    "build_grid_cover",
    "find_bracket",
    "find_brackets",
    "verify_cover",
    "parse_delta",
    "bound_thm_gnewuch",
    "bound_lemma_sum",
    "bound_prop_improved",
    "cover_number_bound",
    "stirling_factor",
    "bound_report",
]

DEFAULT_CORNER_CAP = 10**7
# Slack for float round-off in volume differences of grid brackets.
WEIGHT_TOL = 1e-12


class CornerCapError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class DeltaCover:
    """Product grid of anchor corners.

    ``axis_levels[i]`` holds the strictly increasing grid values on axis i,
    ending at 1; 0 is an implicit floor level and is not stored.
    """

    s: int
    delta: float
    axis_levels: tuple
    m: int | None = None
    corner_cap: int = DEFAULT_CORNER_CAP
    _floors: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.axis_levels) != self.s:
            raise DimensionMismatchError("need one level list per axis")
        levels = []
        for lv in self.axis_levels:
            lv = np.asarray(lv, dtype=np.float64)
            if lv.ndim != 1 or lv.size == 0:
                raise ValueError("axis levels must be non-empty 1-D sequences")
            if np.any(np.diff(lv) <= 0) or lv[0] <= 0.0 or lv[-1] != 1.0:
                raise ValueError("axis levels must increase strictly within (0, 1] and end at 1")
            lv.setflags(write=False)
            levels.append(lv)
        object.__setattr__(self, "axis_levels", tuple(levels))
        floors = []
        for lv in levels:
            with_floor = np.concatenate(([0.0], lv))
            with_floor.setflags(write=False)
            floors.append(with_floor)
        object.__setattr__(self, "_floors", tuple(floors))

    @property
    def levels_with_floor(self) -> tuple:
        return self._floors

    @property
    def n_corners(self) -> int:
        return math.prod(lv.size for lv in self.axis_levels)

    def corners(self) -> np.ndarray:
        """Materialize all corners (excluding the floor level) as an array."""
        n = self.n_corners
        if n > self.corner_cap:
            raise CornerCapError(f"{n} corners exceed cap {self.corner_cap}")
        grids = np.meshgrid(*self.axis_levels, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def without_level(self, axis: int, index: int) -> "DeltaCover":
        """Copy with one grid level removed (the level 1 cannot be removed)."""
        lv = self.axis_levels[axis]
        if lv[index] == 1.0:
            raise ValueError("cannot remove the top level")
        levels = list(self.axis_levels)
        levels[axis] = np.delete(lv, index)
        return DeltaCover(self.s, self.delta, tuple(levels), m=None, corner_cap=self.corner_cap)


@dataclass(frozen=True)
class Bracket:
    lower: AnchorBox
    upper: AnchorBox

    @property
    def weight(self) -> float:
        return float(np.prod(self.upper.a) - np.prod(self.lower.a))


@dataclass(frozen=True)
class CoverReport:
    max_weight: float
    violations: int
    trials: int
    seed: int | None


def build_grid_cover(s: int, delta, corner_cap: int = DEFAULT_CORNER_CAP) -> DeltaCover:
    """Equidistant grid with spacing 1/m on every axis, m = ceil(s / delta).

    Any bracket (floor, ceil) of a point on this grid has volume difference at
    most s/m <= delta, since the product is 1-Lipschitz in each coordinate.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    d = Fraction(delta) if not isinstance(delta, float) else delta
    if not (0 < d <= 1):
        raise ValueError("delta must lie in (0, 1]")
    m = math.ceil(Fraction(s) / Fraction(d))
    if m > 10**9:
        raise CornerCapError(f"grid resolution m={m} is too large")
    levels = np.arange(1, m + 1, dtype=np.float64) / m
    return DeltaCover(s, float(d), tuple(levels for _ in range(s)), m=m, corner_cap=corner_cap)


def find_brackets(cover: DeltaCover, x) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized bracket lookup: rows of ``x`` -> (lower corners, upper corners)."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != cover.s:
        raise DimensionMismatchError(f"x has dimension {x.shape[1]}, cover has {cover.s}")
    lower = np.empty_like(x)
    upper = np.empty_like(x)
    for i, lv in enumerate(cover.levels_with_floor):
        col = np.clip(x[:, i], 0.0, 1.0)
        hi = np.searchsorted(lv, col, side="left")
        lo = np.searchsorted(lv, col, side="right") - 1
        lower[:, i] = lv[lo]
        upper[:, i] = lv[hi]
    return lower, upper


def find_bracket(cover: DeltaCover, x) -> Bracket:
    x = np.asarray(x, dtype=np.float64).ravel()
    lower, upper = find_brackets(cover, x[None, :])
    return Bracket(AnchorBox(lower[0]), AnchorBox(upper[0]))


def verify_cover(cover: DeltaCover, trials: int, seed=None) -> CoverReport:
    """Sample uniform points and check every bracket is ordered and delta-thin."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    x = rng.random((trials, cover.s))
    lower, upper = find_brackets(cover, x)
    weights = upper.prod(axis=1) - lower.prod(axis=1)
    ordered = np.all(lower <= x, axis=1) & np.all(x <= upper, axis=1)
    bad = (~ordered) | (weights > cover.delta + WEIGHT_TOL)
    return CoverReport(float(weights.max()), int(np.count_nonzero(bad)), trials, seed)


# ---------------------------------------------------------------------------
# Bracketing-number bounds


def parse_delta(text) -> Fraction:
    """Parse "p/q", an integer or a finite decimal string into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse {text!r} as a fraction") from None
    return value


def _check(s: int, delta):
    if not isinstance(s, int) or s < 1:
        raise ValueError("s must be a positive integer")
    if isinstance(delta, float):
        exact = False
    elif isinstance(delta, Rational):
        exact = True
        delta = Fraction(delta)
    else:
        raise TypeError(f"unsupported delta type {type(delta).__name__}")
    if not (0 < delta <= 1):
        raise ValueError("delta must lie in (0, 1]")
    return delta, exact


def _num(value, exact: bool):
    return value if exact else float(value)


def bound_thm_gnewuch(s: int, delta):
    """2^(s-1) (s^s / s!) (1/delta + 1)^s."""
    delta, exact = _check(s, delta)
    coeff = Fraction(2 ** (s - 1) * s**s, math.factorial(s))
    return _num(coeff, exact) * (1 / delta + 1) ** s


def bound_lemma_sum(s: int, delta):
    """Gnewuch's intermediate sum; for s = 1 the empty sum leaves 1/delta + 1."""
    delta, exact = _check(s, delta)
    inv = 1 / delta
    total = inv + 1
    half = Fraction(1, 2) if exact else 0.5
    for k in range(s - 1):
        coeff = Fraction(math.comb(s, k + 1) * 2 ** (s - k) * s**s, 4 * math.factorial(s - k))
        total += _num(coeff, exact) * (inv + half) ** (s - k)
    return total


def bound_prop_improved(s: int, delta):
    """2^(s-2) (s^s / s!) (1/delta + 1)^s + (1/delta + 1)/2, or 1/delta + 1 when s = 1."""
    delta, exact = _check(s, delta)
    base = 1 / delta + 1
    if s == 1:
        return base
    coeff = Fraction(2 ** (s - 2) * s**s, math.factorial(s))
    return _num(coeff, exact) * base**s + base / 2


def cover_number_bound(s: int, delta):
    return 2 * bound_prop_improved(s, delta)


def stirling_factor(s: int) -> float:
    """e^s / sqrt(2 pi s), an upper bound for s^s / s!."""
    if s < 1:
        raise ValueError("s must be >= 1")
    return math.exp(s) / math.sqrt(2 * math.pi * s)


@dataclass(frozen=True)
class RationalBoundReport:
    s: int
    delta: Fraction | float
    thm_value: Fraction | float
    lemma_value: Fraction | float
    prop_value: Fraction | float
    exact: bool = True

    @property
    def cover_value(self):
        return 2 * self.prop_value

    @property
    def improved(self) -> bool:
        return self.prop_value < self.thm_value

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "delta": _fraction_text(self.delta),
            "exact": self.exact,
            "thm": _value_record(self.thm_value),
            "lemma": _value_record(self.lemma_value),
            "prop": _value_record(self.prop_value),
            "cover2x": _value_record(self.cover_value),
            "prop_below_thm": self.improved,
        }


def _fraction_text(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return repr(float(value))


def _decimal_text(value: Fraction, digits: int = 40) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def _value_record(value) -> dict:
    if isinstance(value, Fraction):
        return {
            "fraction": _fraction_text(value),
            "decimal": _decimal_text(value),
            "numerator": str(value.numerator),
            "denominator": str(value.denominator),
        }
    return {"fraction": None, "decimal": repr(float(value)), "numerator": None, "denominator": None}


def bound_report(s: int, delta) -> RationalBoundReport:
    delta, exact = _check(s, delta)
    return RationalBoundReport(
        s=s,
        delta=delta,
        thm_value=bound_thm_gnewuch(s, delta),
        lemma_value=bound_lemma_sum(s, delta),
        prop_value=bound_prop_improved(s, delta),
        exact=exact,
    )
