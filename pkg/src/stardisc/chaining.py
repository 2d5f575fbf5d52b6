"""Numerical skeleton of the probabilistic chaining argument behind D* < 9 sqrt(s/N).

Levels k = 0..K carry deviation thresholds c_k (in units of sqrt(sN)). The two
coarsest levels use Hoeffding's inequality; every finer level k uses a
Bernstein tail and c_k is the positive root of

    c = sqrt(a_k) * sqrt(b_k + d * c),   b_k = 2^(1-k) (1 - 2^-k),   d = (4/3) 2^-K,

which makes the level-k union bound equal to 2^-k. The quadratic has the
closed-form root used by :func:`solve_c`; :func:`solve_c_iterative` runs the
fixed-point map as an independent cross-check.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .core import DimensionMismatchError
from .covering import DeltaCover, build_grid_cover, find_brackets

__all__ = [
    "LN2",
    "C0",
    "C1",
    "SUM_TARGET",
    "PAPER_SUM_K31",
    "PAPER_TAIL_CONSTANT",
    "PAPER_C_32_32",
    "TailVariant",
    "ChainingParams",
    "CoefficientTable",
    "LevelBudget",
    "BudgetReport",
    "SumSweep",
    "ChainDecomposition",
    "ConstantCheckError",
    "compute_K",
    "chaining_params",
    "a_coefficient",
    "bernstein_variance_term",
    "solve_c",
    "solve_c_iterative",
    "coefficient_table",
    "full_sum_extended",
    "verify_sum_all",
    "tail_majorant",
    "cardinality_bound_gamma",
    "cardinality_bound_A",
    "log_cardinality_bound_A",
    "concentration_tail",
    "log_concentration_tail",
    "probability_budget",
    "final_constant",
    "dyadic_covers",
    "chain_decompose",
]

LN2 = math.log(2.0)
C0 = math.sqrt((math.log(6.0) + 1.0) / 2.0)
C1 = math.sqrt((math.log(10.0) + 1.0) / 2.0)

SUM_TARGET = 8.0
PAPER_SUM_K31 = 7.99789995
PAPER_TAIL_CONSTANT = 0.2480726
PAPER_C_32_32 = 5e-9

C0_CAP = 1.19
C1_CAP = 1.29
INTERIOR_CAP = 1.58
LAST_CAP = 1.33


class ConstantCheckError(AssertionError):
    pass


class TailVariant(enum.Enum):
    # second denominator term (4/3) c 2^-K, as in the fixed-point equation
    LINEAR_C = "linear"
    # second denominator term (4/3) c^2 2^-K, as printed with the tail bound
    SQUARED_C = "squared"


def compute_K(s: int, N: int) -> int:
    """ceil((log2 N - log2 s) / 2) in integer arithmetic.

    This is the least integer K with s * 4^K >= N.
    """
    if s < 1 or N < 1:
        raise ValueError("s and N must be positive")
    if s >= N:
        K = 0
        while N * 4 ** (1 - K) <= s:
            K -= 1
        return K
    K = 0
    while s * 4**K < N:
        K += 1
    return K


@dataclass(frozen=True)
class ChainingParams:
    s: int
    N: int
    K: int

    @property
    def trivial(self) -> bool:
        """True when the target bound 9 sqrt(s/N) is at least 1."""
        return 81 * self.s >= self.N


def chaining_params(s: int, N: int) -> ChainingParams:
    """Validated parameters for the non-trivial regime s >= 3, N > 81 s."""
    if s < 3:
        raise ValueError("the chaining argument needs s >= 3")
    if N <= 81 * s:
        raise ValueError(f"N={N} <= 81*s={81 * s}: the bound holds trivially")
    K = compute_K(s, N)
    if K < 3:
        raise ConstantCheckError(f"K={K} < 3 for s={s}, N={N}")
    scale = math.sqrt(s / N)
    step = 2.0**-K
    if not (scale / 2 <= step <= scale):
        raise ConstantCheckError(f"2^-K={step} outside [{scale / 2}, {scale}]")
    return ChainingParams(s, N, K)


def a_coefficient(k: int, K: int) -> float:
    if not 2 <= k <= K:
        raise ValueError(f"a_k defined for 2 <= k <= K, got k={k}, K={K}")
    if k < K:
        return (4.0 / 3.0) * (1 + k) * LN2 + 1.0 + math.log1p(2.0 ** (-k - 1))
    return (4.0 / 3.0) * K * LN2 + 1.0 + math.log1p(2.0**-K)


def bernstein_variance_term(k: int) -> float:
    return 2.0 ** (1 - k) * (1.0 - 2.0**-k)


def _drift(K: int) -> float:
    return (4.0 / 3.0) * 2.0**-K


def solve_c(k: int, K: int) -> float:
    """Positive root of c^2 - a d c - a b = 0."""
    a = a_coefficient(k, K)
    b = bernstein_variance_term(k)
    d = _drift(K)
    ad = a * d
    return (ad + math.sqrt(ad * ad + 4.0 * a * b)) / 2.0


def solve_c_iterative(k: int, K: int, tol: float = 1e-15, max_iter: int = 10_000) -> float:
    a = a_coefficient(k, K)
    b = bernstein_variance_term(k)
    d = _drift(K)
    c = 1.0
    for _ in range(max_iter):
        new = math.sqrt(a) * math.sqrt(b + d * c)
        if abs(new - c) <= tol * new:
            return new
        c = new
    raise RuntimeError(f"fixed-point iteration did not converge for k={k}, K={K}")


def fixed_point_residual(k: int, K: int, c: float) -> float:
    a = a_coefficient(k, K)
    return abs(c - math.sqrt(a) * math.sqrt(bernstein_variance_term(k) + _drift(K) * c))


@dataclass(frozen=True)
class CoefficientTable:
    K: int
    a: dict
    c: tuple

    @property
    def full_sum(self) -> float:
        return math.fsum(self.c)

    @property
    def partial_sum_K_minus_1(self) -> float:
        return math.fsum(self.c[:-1])

    @property
    def max_interior(self) -> float | None:
        interior = self.c[2:-1]
        return max(interior) if interior else None

    def violations(self) -> list[str]:
        out = []
        if not self.full_sum < SUM_TARGET:
            out.append(f"K={self.K}: sum {self.full_sum!r} >= {SUM_TARGET}")
        if self.c[0] > C0_CAP:
            out.append(f"c_0={self.c[0]!r} > {C0_CAP}")
        if self.c[1] > C1_CAP:
            out.append(f"c_1={self.c[1]!r} > {C1_CAP}")
        # The level caps are stated for the regime N > 81 s, where K >= 3.
        if self.K >= 3:
            if self.max_interior is not None and self.max_interior > INTERIOR_CAP:
                out.append(f"K={self.K}: max interior c_k={self.max_interior!r} > {INTERIOR_CAP}")
            if self.c[-1] > LAST_CAP:
                out.append(f"K={self.K}: c_K={self.c[-1]!r} > {LAST_CAP}")
        return out

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "a": {str(k): v for k, v in self.a.items()},
            "c": list(self.c),
            "partial_sum_K_minus_1": self.partial_sum_K_minus_1,
            "full_sum": self.full_sum,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "a_k", "c_k"])
        for k, c in enumerate(self.c):
            a = self.a.get(k)
            writer.writerow([k, "" if a is None else f"{a:.17g}", f"{c:.17g}"])
        return buf.getvalue()


def coefficient_table(K: int, check: bool = True) -> CoefficientTable:
    if K < 2:
        raise ValueError("K must be >= 2")
    a = {k: a_coefficient(k, K) for k in range(2, K + 1)}
    c = (C0, C1) + tuple(solve_c(k, K) for k in range(2, K + 1))
    table = CoefficientTable(K, a, c)
    if check:
        problems = table.violations()
        if problems:
            raise ConstantCheckError("; ".join(problems))
    return table


def full_sum_extended(K: int, dps: int = 40):
    """Recompute sum_{k=0}^K c_{k,K} with mpmath at ``dps`` decimal digits."""
    with mpmath.workdps(dps):
        ln2 = mpmath.log(2)
        two = mpmath.mpf(2)
        total = mpmath.sqrt((mpmath.log(6) + 1) / 2) + mpmath.sqrt((mpmath.log(10) + 1) / 2)
        d = mpmath.mpf(4) / 3 * two**-K
        for k in range(2, K + 1):
            if k < K:
                a = mpmath.mpf(4) / 3 * (1 + k) * ln2 + 1 + mpmath.log(1 + two ** (-k - 1))
            else:
                a = mpmath.mpf(4) / 3 * K * ln2 + 1 + mpmath.log(1 + two**-K)
            b = two ** (1 - k) * (1 - two**-k)
            total += (a * d + mpmath.sqrt(a * a * d * d + 4 * a * b)) / 2
        return +total


@dataclass(frozen=True)
class SumSweep:
    K_max: int
    sums: dict
    caps_hold: bool

    @property
    def max_sum(self) -> float:
        return max(self.sums.values())

    @property
    def argmax_K(self) -> int:
        best = self.max_sum
        return min(K for K, v in self.sums.items() if v == best)

    @property
    def all_below_8(self) -> bool:
        return all(v < SUM_TARGET for v in self.sums.values())

    @property
    def partial(self) -> bool:
        return self.K_max < 31

    def to_dict(self) -> dict:
        return {
            "K_max": self.K_max,
            "max_sum": self.max_sum,
            "argmax_K": self.argmax_K,
            "all_below_8": self.all_below_8,
            "caps_hold": self.caps_hold,
            "partial": self.partial,
            "sums": [{"K": K, "sum": v} for K, v in self.sums.items()],
        }


def verify_sum_all(K_max: int) -> SumSweep:
    """Full sums for every K in [3, K_max].

    K_max below 31 is accepted and marked ``partial``; below 3 is rejected.
    """
    if K_max < 3:
        raise ValueError("K_max must be >= 3")
    sums = {}
    caps_hold = True
    for K in range(3, K_max + 1):
        table = coefficient_table(K, check=False)
        sums[K] = table.full_sum
        caps_hold = caps_hold and not table.violations()
    return SumSweep(K_max, sums, caps_hold)


def tail_majorant(k: int) -> float:
    if k < 32:
        raise ValueError("the majorant is only claimed for k >= 32")
    return PAPER_TAIL_CONSTANT * k * 2.0 ** (-k / 2)


def _log_cardinality(s: int, power2: int, base: int, additive: float) -> float:
    # log( 2^power2 e^s base^s / sqrt(2 pi s) + additive )
    main = power2 * LN2 + s + s * math.log(base) - 0.5 * math.log(2 * math.pi * s)
    return main + math.log1p(additive * math.exp(-main))


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def cardinality_bound_gamma(k: int, s: int, delta_mode: bool = False) -> float:
    """Stirling-simplified bound on |Gamma_k|, or on |Delta_K| with ``delta_mode``."""
    if k < 1 or s < 1:
        raise ValueError("k and s must be >= 1")
    base = 2**k + 1
    power2 = s - 2 if delta_mode else s - 1
    return _safe_exp(_log_cardinality(s, power2, base, base))


def log_cardinality_bound_A(k: int, s: int, K: int) -> float:
    if not 0 <= k <= K:
        raise ValueError("need 0 <= k <= K")
    if k < K:
        base = 2 ** (k + 1) + 1
        return _log_cardinality(s, s - 1, base, base)
    base = 2**K + 1
    return _log_cardinality(s, s - 2, base, base / 2)


def cardinality_bound_A(k: int, s: int, K: int) -> float:
    return _safe_exp(log_cardinality_bound_A(k, s, K))


def log_concentration_tail(k: int, K: int, s: int, c: float,
                           variant: TailVariant = TailVariant.LINEAR_C) -> float:
    if not 0 <= k <= K:
        raise ValueError("need 0 <= k <= K")
    if c <= 0 or s < 1:
        raise ValueError("need c > 0 and s >= 1")
    if k <= 1:
        return LN2 - 2.0 * c * c * s
    drift = c if variant is TailVariant.LINEAR_C else c * c
    denom = bernstein_variance_term(k) + (4.0 / 3.0) * drift * 2.0**-K
    return LN2 - c * c * s / denom


def concentration_tail(k: int, K: int, s: int, c: float,
                       variant: TailVariant = TailVariant.LINEAR_C) -> float:
    """Hoeffding tail for k in {0, 1}, Bernstein tail otherwise."""
    return math.exp(log_concentration_tail(k, K, s, c, variant))


@dataclass(frozen=True)
class LevelBudget:
    k: int
    cardinality: float
    tail: float
    product: float
    cap: float

    @property
    def ok(self) -> bool:
        return self.product <= self.cap


@dataclass(frozen=True)
class BudgetReport:
    s: int
    N: int
    K: int
    levels: tuple

    @property
    def total(self) -> float:
        return math.fsum(lv.product for lv in self.levels)

    @property
    def cap_total(self) -> float:
        return math.fsum(lv.cap for lv in self.levels)

    @property
    def ok(self) -> bool:
        return all(lv.ok for lv in self.levels) and self.total < 1.0

    def to_dict(self) -> dict:
        return {
            "s": self.s, "N": self.N, "K": self.K,
            "total": self.total, "cap_total": self.cap_total, "ok": self.ok,
            "levels": [
                {"k": lv.k, "cardinality": lv.cardinality, "tail": lv.tail,
                 "product": lv.product, "cap": lv.cap, "ok": lv.ok}
                for lv in self.levels
            ],
        }


def probability_budget(s: int, N: int) -> BudgetReport:
    params = chaining_params(s, N)
    table = coefficient_table(params.K)
    levels = []
    for k, c in enumerate(table.c):
        log_card = log_cardinality_bound_A(k, s, params.K)
        log_tail = log_concentration_tail(k, params.K, s, c)
        cap = 0.25 if k <= 1 else 2.0**-k
        levels.append(LevelBudget(
            k=k,
            cardinality=_safe_exp(log_card),
            tail=math.exp(log_tail),
            product=math.exp(log_card + log_tail),
            cap=cap,
        ))
    report = BudgetReport(s, N, params.K, tuple(levels))
    if not report.ok:
        bad = [lv.k for lv in report.levels if not lv.ok]
        raise ConstantCheckError(f"budget exceeded at levels {bad}, total {report.total}")
    return report


def final_constant(s: int, N: int) -> float:
    """sum_{k<K} c_k + 1, the constant multiplying sqrt(s/N) in the final bound."""
    params = chaining_params(s, N)
    value = coefficient_table(params.K).partial_sum_K_minus_1 + 1.0
    if not value < 9.0:
        raise ConstantCheckError(f"final constant {value} >= 9")
    return value


# ---------------------------------------------------------------------------
# Chaining decomposition over grid covers


def dyadic_covers(s: int, K: int) -> tuple[list, DeltaCover]:
    """Grid covers at scales 2^-1 .. 2^-(K-1) plus the finest bracketing cover 2^-K."""
    covers = [build_grid_cover(s, 2.0**-k) for k in range(1, K)]
    return covers, build_grid_cover(s, 2.0**-K)


@dataclass(frozen=True)
class ChainDecomposition:
    corners: np.ndarray  # (..., K+1, s): p_0 = 0, ..., p_K
    upper: np.ndarray  # (..., s): w_K

    @property
    def K(self) -> int:
        return self.corners.shape[-2] - 1

    def ring_measures(self) -> np.ndarray:
        """volume(p_{k+1}) - volume(p_k) for k < K, then volume(w_K) - volume(p_K)."""
        vols = self.corners.prod(axis=-1)
        steps = np.diff(vols, axis=-1)
        last = self.upper.prod(axis=-1) - vols[..., -1]
        return np.concatenate([steps, last[..., None]], axis=-1)

    def is_monotone(self) -> np.ndarray:
        return np.all(np.diff(self.corners, axis=-2) >= 0, axis=(-2, -1))


def chain_decompose(x, covers, bracket_cover: DeltaCover) -> ChainDecomposition:
    """Telescoping chain 0 = p_0 <= p_1 <= ... <= p_K <= x <= w_K.

    ``covers[k-1]`` is the level-k cover (scale 2^-k) for 1 <= k <= K-1. Works
    on a single vector or on a batch of row vectors.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    s = X.shape[1]
    for cov in list(covers) + [bracket_cover]:
        if cov.s != s:
            raise DimensionMismatchError("cover dimension differs from x")
    K = len(covers) + 1
    corners = np.zeros((X.shape[0], K + 1, s))
    lower, upper = find_brackets(bracket_cover, X)
    corners[:, K] = lower
    for k in range(K - 1, 0, -1):
        corners[:, k], _ = find_brackets(covers[k - 1], corners[:, k + 1])
    if single:
        return ChainDecomposition(corners[0], upper[0])
    return ChainDecomposition(corners, upper)
