"""Point sets, anchored boxes and the counting primitives built on them."""

from __future__ import annotations

import csv
import enum
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "CountingMode",
    "PointSet",
    "AnchorBox",
    "DimensionMismatchError",
    "PointSetFileError",
    "PointSetFormatError",
    "CoordinateRangeError",
    "EmptyPointSetError",
    "volume",
    "count_in_box",
    "local_discrepancy",
    "load_pointset",
    "save_pointset",
    "atomic_write_text",
]


class DimensionMismatchError(ValueError):
    pass


class PointSetFileError(ValueError):
    """Base class for problems reading a point-set file."""


class PointSetFormatError(PointSetFileError):
    pass


class CoordinateRangeError(PointSetFileError):
    pass


class EmptyPointSetError(PointSetFileError):
    pass


class CountingMode(enum.Enum):
    STRICT = "strict"
    INCLUSIVE = "inclusive"


@dataclass(frozen=True, eq=False)
class PointSet:
    """N points in the half-open unit cube [0,1)^s, stored as an (N, s) array."""

    coords: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coords, dtype=np.float64)
        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
        if coords.ndim != 2:
            raise ValueError("coords must be a 2-D array of shape (N, s)")
        if coords.shape[0] < 1 or coords.shape[1] < 1:
            raise ValueError("a point set needs N >= 1 and s >= 1")
        if not np.all(np.isfinite(coords)):
            raise ValueError("coordinates must be finite")
        if np.any(coords < 0.0) or np.any(coords >= 1.0):
            raise ValueError("coordinates must lie in [0, 1)")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @property
    def N(self) -> int:
        return self.coords.shape[0]

    @property
    def s(self) -> int:
        return self.coords.shape[1]

    def __len__(self):
        return self.N

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    def __repr__(self):
        return f"PointSet(N={self.N}, s={self.s})"


@dataclass(frozen=True, eq=False)
class AnchorBox:
    """The box [0, a_1) x ... x [0, a_s), identified by its upper corner."""

    a: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.array(self.a, dtype=np.float64))
        if a.ndim != 1 or a.size < 1:
            raise ValueError("corner must be a non-empty vector")
        if np.any(~np.isfinite(a)) or np.any(a < 0.0) or np.any(a > 1.0):
            raise ValueError("corner coordinates must lie in [0, 1]")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def s(self) -> int:
        return self.a.size

    def __eq__(self, other):
        if not isinstance(other, AnchorBox):
            return NotImplemented
        return np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash(self.a.tobytes())


def _corner(box) -> np.ndarray:
    return box.a if isinstance(box, AnchorBox) else AnchorBox(box).a


def volume(box) -> float:
    """Lebesgue measure of an anchored box; accepts an AnchorBox or a corner vector."""
    return float(np.prod(_corner(box)))


def count_in_box(ps: PointSet, box, mode: CountingMode = CountingMode.STRICT) -> int:
    a = _corner(box)
    if a.size != ps.s:
        raise DimensionMismatchError(f"box has dimension {a.size}, point set has {ps.s}")
    if mode is CountingMode.STRICT:
        inside = ps.coords < a
    else:
        inside = ps.coords <= a
    return int(np.count_nonzero(inside.all(axis=1)))


def local_discrepancy(ps: PointSet, box, mode: CountingMode = CountingMode.STRICT) -> float:
    count = count_in_box(ps, box, mode)
    return abs(count / ps.N - volume(box))


def _format_row(row) -> list[str]:
    return [f"{x:.17g}" for x in row]


def atomic_write_text(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def pointset_to_csv(ps: PointSet, header: bool = True) -> str:
    lines = []
    if header:
        lines.append(f"# s={ps.s} N={ps.N}")
    lines.extend(",".join(_format_row(row)) for row in ps.coords)
    return "\n".join(lines) + "\n"


def save_pointset(ps: PointSet, path, header: bool = True) -> None:
    atomic_write_text(path, pointset_to_csv(ps, header=header))


def _parse_header(line: str) -> dict[str, int]:
    fields = {}
    for token in line.lstrip("#").split():
        key, sep, value = token.partition("=")
        if not sep:
            continue
        try:
            fields[key.strip()] = int(value)
        except ValueError:
            raise PointSetFormatError(f"bad header field {token!r}") from None
    return fields


def parse_pointset(text: str, source: str = "<string>") -> PointSet:
    header: dict[str, int] = {}
    rows: list[list[float]] = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if not rows and not header:
                header = _parse_header(stripped)
            continue
        fields = next(csv.reader([stripped]))
        try:
            row = [float(f) for f in fields]
        except ValueError:
            raise PointSetFormatError(f"{source}:{lineno}: non-numeric field") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise PointSetFormatError(
                f"{source}:{lineno}: expected {width} columns, got {len(row)}"
            )
        for x in row:
            if not (0.0 <= x < 1.0):
                raise CoordinateRangeError(f"{source}:{lineno}: coordinate {x!r} outside [0, 1)")
        rows.append(row)
    if not rows:
        raise EmptyPointSetError(f"{source}: no points")
    if "s" in header and header["s"] != width:
        raise PointSetFormatError(f"{source}: header says s={header['s']}, rows have {width}")
    if "N" in header and header["N"] != len(rows):
        raise PointSetFormatError(f"{source}: header says N={header['N']}, found {len(rows)}")
    return PointSet(np.array(rows, dtype=np.float64))


def load_pointset(path) -> PointSet:
    path = Path(path)
    return parse_pointset(path.read_text(), source=str(path))
