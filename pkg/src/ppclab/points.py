"""Torus geometry, point sets and deterministic generators.

Every coordinate lives on the unit torus [0, 1) with endpoints identified.
Point sets are multisets: duplicates are kept because difference sets and
degenerate inputs produce them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

__all__ = [
    "PointSet",
    "frac",
    "circle_dist",
    "splitmix64",
    "uniform_stream",
    "gen_equispaced",
    "gen_kronecker",
    "gen_van_der_corput",
    "gen_random",
    "gen_perturbed",
    "difference_set",
    "shift",
    "read_points",
    "write_points",
    "format_points",
    "parse_points",
]

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def _check_finite(x: float) -> None:
    if not math.isfinite(x):
        raise ValueError(f"non-finite coordinate: {x!r}")


def frac(x: float) -> float:
    """Fractional part ``x - floor(x)``, always in [0, 1)."""
    x = float(x)
    _check_finite(x)
    r = x - math.floor(x)
    # tiny negatives round up to exactly 1.0
    return 0.0 if r >= 1.0 else r


def _frac_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite coordinate in input")
    r = x - np.floor(x)
    r[r >= 1.0] = 0.0
    return r


def circle_dist(x: float, y: float) -> float:
    """Torus distance between two coordinates, in [0, 1/2]."""
    x, y = float(x), float(y)
    _check_finite(x)
    _check_finite(y)
    d = abs(frac(x) - frac(y))
    return min(d, 1.0 - d)


def circle_dist_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorised :func:`circle_dist` (inputs already wrapped)."""
    d = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    return np.minimum(d, 1.0 - d)


@dataclass(frozen=True, eq=False)
class PointSet:
    """Finite multiset of torus points.

    Coordinates are wrapped into [0, 1) on construction and the backing
    array is read-only.
    """

    points: np.ndarray
    label: str = ""

    def __post_init__(self):
        arr = _frac_array(np.array(self.points, dtype=float).ravel())
        if arr.size == 0:
            raise ValueError("a point set needs at least one point")
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)

    @property
    def n(self) -> int:
        return int(self.points.size)

    def __len__(self) -> int:
        return self.n

    def sorted(self) -> np.ndarray:
        return np.sort(self.points, kind="stable")

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    def __repr__(self):
        return f"PointSet(n={self.n}, label={self.label!r})"


# -- splitmix64 -------------------------------------------------------------


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of the splitmix64 stream started at ``seed``."""
    if count < 0:
        raise ValueError("count must be non-negative")
    seed = int(seed) & _MASK64
    with np.errstate(over="ignore"):
        idx = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(seed) + idx * np.uint64(_GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return z


def uniform_stream(seed: int, count: int) -> np.ndarray:
    """Doubles in [0, 1) from the top 53 bits of splitmix64."""
    return (splitmix64(seed, count) >> np.uint64(11)).astype(np.float64) * 2.0**-53


# -- generators -------------------------------------------------------------


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"N must be a positive integer, got {n!r}")
    return int(n)


def gen_equispaced(n: int) -> PointSet:
    n = _check_n(n)
    return PointSet(np.arange(n) / n, label=f"equispaced(N={n})")


def gen_kronecker(n: int, alpha: float) -> PointSet:
    """Points ``{n * alpha}`` for n = 1..N."""
    n = _check_n(n)
    alpha = float(alpha)
    _check_finite(alpha)
    return PointSet(np.arange(1, n + 1) * alpha, label=f"kronecker(N={n},alpha={alpha!r})")


def _radical_inverse(n: int, base: int) -> float:
    num, den = 0, 1
    while n:
        n, digit = divmod(n, base)
        num = num * base + digit
        den *= base
    return num / den


def gen_van_der_corput(n: int, base: int = 2) -> PointSet:
    n = _check_n(n)
    if int(base) != base or base < 2:
        raise ValueError(f"base must be an integer >= 2, got {base!r}")
    base = int(base)
    pts = [_radical_inverse(i, base) for i in range(1, n + 1)]
    return PointSet(pts, label=f"vdc(N={n},base={base})")


def gen_random(n: int, seed: int) -> PointSet:
    n = _check_n(n)
    return PointSet(uniform_stream(seed, n), label=f"random(N={n},seed={seed})")


def gen_perturbed(n: int, seed: int, jitter: float) -> PointSet:
    """Lattice ``j/N`` moved by ``u_j * jitter / N`` with ``u_j`` uniform on [-1/2, 1/2]."""
    n = _check_n(n)
    jitter = float(jitter)
    if not math.isfinite(jitter) or jitter < 0:
        raise ValueError(f"jitter must be finite and >= 0, got {jitter!r}")
    u = uniform_stream(seed, n) - 0.5
    pts = np.arange(n) / n + u * jitter / n
    return PointSet(pts, label=f"perturbed(N={n},seed={seed},jitter={jitter!r})")


def difference_set(p: PointSet) -> PointSet:
    """All N^2 values ``{x_i - x_j}`` over ordered pairs, diagonal included."""
    x = p.points
    diffs = (x[:, None] - x[None, :]).ravel()
    return PointSet(diffs, label=f"diff({p.label})")


def shift(p: PointSet, c: float) -> PointSet:
    return PointSet(p.points + float(c), label=f"{p.label}+{c!r}")


# -- text format ------------------------------------------------------------


def parse_points(lines: Iterable[str], label: str = "") -> PointSet:
    """Parse the one-value-per-line format.

    Blank lines and lines starting with ``#`` are skipped; out-of-range
    finite values are wrapped.
    """
    values = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            v = float(line)
        except ValueError:
            raise ValueError(f"line {lineno}: not a number: {line!r}") from None
        if not math.isfinite(v):
            raise ValueError(f"line {lineno}: non-finite value: {line!r}")
        values.append(v)
    if not values:
        raise ValueError("no points found")
    return PointSet(values, label=label)


def format_points(p: PointSet) -> str:
    head = f"# {p.label}\n" if p.label else ""
    return head + "".join(f"{v:.17g}\n" for v in p.points)


def read_points(path) -> PointSet:
    path = Path(path)
    with path.open() as fh:
        return parse_points(fh, label=path.stem)


def write_points(p: PointSet, path) -> None:
    Path(path).write_text(format_points(p))
