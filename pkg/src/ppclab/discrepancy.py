"""Exact discrepancy of point multisets on the torus.

With ``R(x) = #{y < x}/N - x`` the deviation of an arc is a difference of two
values of ``R`` (or its right limits), so the supremum over all arcs, wrapping
or not, is ``sup R - inf R``.  Both extremes sit at point positions, which
gives an exact ``O(N log N)`` evaluation and a witness arc that attains it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .points import PointSet, difference_set

__all__ = [
    "Method",
    "ArcWitness",
    "DiscrepancyResult",
    "CasselsReport",
    "extreme_discrepancy",
    "star_discrepancy",
    "arc_deviation",
    "cassels_report",
]

DEFAULT_CASSELS_CAP = 128


class Method(str, Enum):
    EXTREME_EXACT = "extreme_exact"
    STAR_EXACT = "star_exact"
    STAR_BRACKET = "star_bracket"


@dataclass(frozen=True)
class ArcWitness:
    """The arc from ``start`` to ``end`` (``start <= end``) with endpoint inclusion flags."""

    start: float
    end: float
    closed_start: bool
    closed_end: bool

    @property
    def length(self) -> float:
        return self.end - self.start

    @property
    def degenerate(self) -> bool:
        return self.start == self.end


@dataclass(frozen=True)
class DiscrepancyResult:
    value: float
    witness: ArcWitness
    method: Method


def arc_deviation(p: PointSet, arc: ArcWitness) -> float:
    """``|#(P in arc)/N - length|`` counted directly."""
    y = p.points
    left = y >= arc.start if arc.closed_start else y > arc.start
    right = y <= arc.end if arc.closed_end else y < arc.end
    count = np.count_nonzero(left & right)
    return abs(count / p.n - arc.length)


def extreme_discrepancy(p: PointSet) -> DiscrepancyResult:
    """Supremum over all arcs of the torus (closed, open, wrapping)."""
    y = p.sorted()
    n = y.size
    i = np.arange(1, n + 1)
    # right limits just past y_i, and left limits just before y_i
    upper = i / n - y
    lower = (i - 1) / n - y
    iu, il = int(np.argmax(upper)), int(np.argmin(lower))
    sup_val, sup_pos = (float(upper[iu]), float(y[iu])) if upper[iu] > 0 else (0.0, 0.0)
    inf_val, inf_pos = (float(lower[il]), float(y[il])) if lower[il] < 0 else (0.0, 0.0)
    value = sup_val - inf_val
    if inf_pos <= sup_pos:
        arc = ArcWitness(inf_pos, sup_pos, True, True)
    else:
        arc = ArcWitness(sup_pos, inf_pos, False, False)
    return DiscrepancyResult(min(1.0, value), arc, Method.EXTREME_EXACT)


def star_discrepancy(p: PointSet) -> DiscrepancyResult:
    """Supremum over anchored intervals ``[0, a)`` and ``[0, a]``."""
    y = p.sorted()
    n = y.size
    i = np.arange(1, n + 1)
    over = i / n - y
    under = y - (i - 1) / n
    io, iu = int(np.argmax(over)), int(np.argmax(under))
    if over[io] >= under[iu]:
        arc = ArcWitness(0.0, float(y[io]), True, True)
        return DiscrepancyResult(float(over[io]), arc, Method.STAR_EXACT)
    arc = ArcWitness(0.0, float(y[iu]), True, False)
    return DiscrepancyResult(float(under[iu]), arc, Method.STAR_EXACT)


def _cassels_scale(d: float) -> float:
    return math.sqrt(d) * (1.0 + abs(math.log(d)))


@dataclass(frozen=True)
class CasselsReport:
    D: float
    diff_low: float
    diff_high: float
    method: Method
    ratio_low: float
    ratio_high: float


def cassels_report(p: PointSet, cap: int = DEFAULT_CASSELS_CAP) -> CasselsReport:
    """Compare ``D_N`` with ``sqrt(D') (1 + |log D'|)`` for the difference set.

    ``D'`` is exact when ``N <= cap``; above the cap only the rigorous
    bracket ``[D*, 2 D*]`` from the star discrepancy is used.  The scale
    function is not monotone (it peaks at ``1/e``), so the ratio is reported
    over the whole bracket.
    """
    d = extreme_discrepancy(p).value
    diff = difference_set(p)
    if p.n <= cap:
        lo = hi = extreme_discrepancy(diff).value
        method = Method.EXTREME_EXACT
    else:
        star = star_discrepancy(diff).value
        lo, hi = star, min(1.0, 2.0 * star)
        method = Method.STAR_BRACKET
    probes = [lo, hi] + ([1.0 / math.e] if lo < 1.0 / math.e < hi else [])
    scales = [_cassels_scale(v) for v in probes]
    return CasselsReport(d, lo, hi, method, d / max(scales), d / min(scales))
