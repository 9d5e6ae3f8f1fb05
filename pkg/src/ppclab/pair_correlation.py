"""Pair-correlation counting statistics and the global deviation ``A``.

Distances are torus distances over ordered pairs ``i != j``.  The counting
function ``G(r) = #{(i, j): i != j, dist <= r}`` is a right-continuous step
function, so every integral of it is evaluated piece by piece in closed form.

``A`` is computed in rescaled form, ``A = 2 int_0^{1/2} (G(s)/N - 2 N s)^2 ds``,
which equals ``(2/N) int_0^{N/2} (G(s/N)/N - 2 s)^2 ds``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .points import PointSet, difference_set
from .records import BoundedValue, Kind, Status, VerificationRecord
from .spectral import SpectralProfile, build_profile, diaphony_closed

__all__ = [
    "TIE_ATOL",
    "DistanceMultiset",
    "PPCCurve",
    "HypothesisResult",
    "Theorem2Report",
    "distance_multiset",
    "ppc_curve",
    "pair_count",
    "ppc_statistic",
    "ppc_statistic_alpha",
    "window_average",
    "theorem1_hypothesis_check",
    "A_direct",
    "A_spectral",
    "fourier_coeff_indicator",
    "corollary1_check",
    "corollary2_check",
    "theorem2_report",
    "write_ppc_csv",
]

# Coordinates such as j/N carry binary64 rounding, so a distance that is
# mathematically equal to a threshold can land a few ulps above it.
TIE_ATOL = 4e-15
DEFAULT_DIFF_CAP = 4096
_CHUNK_ELEMS = 1 << 22


@dataclass(frozen=True, eq=False)
class DistanceMultiset:
    """Sorted distinct distances with ordered-pair multiplicities.

    ``max_distance`` is ``None`` when every pair is present; otherwise only
    pairs with distance ``<= max_distance`` were collected.
    """

    n: int
    distances: np.ndarray
    multiplicities: np.ndarray
    max_distance: float | None = None

    @property
    def complete(self) -> bool:
        return self.max_distance is None

    @property
    def total(self) -> int:
        return int(self.multiplicities.sum())

    def jumps(self):
        return list(zip(self.distances.tolist(), self.multiplicities.tolist()))


def _merge(dists: list, n: int, max_distance) -> DistanceMultiset:
    if dists:
        allv = np.concatenate(dists)
    else:
        allv = np.empty(0)
    d, counts = np.unique(allv, return_counts=True)
    d.setflags(write=False)
    m = (2 * counts).astype(np.int64)
    m.setflags(write=False)
    return DistanceMultiset(n=n, distances=d, multiplicities=m, max_distance=max_distance)


def distance_multiset(p: PointSet, max_distance: float | None = None) -> DistanceMultiset:
    """Exact pairwise torus distances, merged on exact equality.

    Each unordered pair is evaluated once as ``min(d, 1 - d)`` with
    ``d = |x_i - x_j|`` and counted twice.  Passing ``max_distance < 1/2``
    collects only the short distances in roughly ``O(N * neighbours)``.
    """
    n = p.n
    if n < 2:
        raise ValueError("distance multiset needs N >= 2")
    x = p.sorted()
    chunks = []
    if max_distance is None or max_distance >= 0.5:
        step = max(1, _CHUNK_ELEMS // n)
        for lo in range(0, n - 1, step):
            hi = min(n - 1, lo + step)
            for i in range(lo, hi):
                d = x[i + 1 :] - x[i]
                chunks.append(np.minimum(d, 1.0 - d))
        return _merge(chunks, n, None)

    r = float(max_distance)
    if r < 0:
        raise ValueError("max_distance must be >= 0")
    # gaps x[i+o] - x[i] grow with the offset o, so scan short gaps from o = 1
    # upward and wrap-around gaps (d close to 1) from o = n-1 downward
    for o in range(1, n):
        d = x[o:] - x[:-o]
        if d.min() > r:
            break
        sel = d[d <= r]
        chunks.append(sel)
    for o in range(n - 1, 0, -1):
        d = x[o:] - x[:-o]
        if d.max() < 1.0 - r:
            break
        w = 1.0 - d[d >= 1.0 - r]
        chunks.append(w[w <= r])
    return _merge(chunks, n, r)


@dataclass(frozen=True, eq=False)
class PPCCurve:
    """The counting function ``G`` backed by a :class:`DistanceMultiset`."""

    multiset: DistanceMultiset
    cumulative: np.ndarray = field(init=False)

    def __post_init__(self):
        cum = np.cumsum(self.multiset.multiplicities)
        cum.setflags(write=False)
        object.__setattr__(self, "cumulative", cum)

    @property
    def n(self) -> int:
        return self.multiset.n

    def _covers(self, r: float) -> None:
        md = self.multiset.max_distance
        if md is not None and md < r < 0.5:
            raise ValueError(f"curve only covers distances <= {md}, asked for {r}")

    def count(self, r):
        """``G(r)`` for scalar or array ``r`` (closed threshold, ulp ties included)."""
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ValueError("radius must be >= 0")
        if r.size:
            self._covers(float(np.max(np.where(r >= 0.5, 0.0, r))))
        idx = np.searchsorted(self.multiset.distances, r + TIE_ATOL, side="right")
        cum = np.concatenate([[0], self.cumulative])
        out = cum[idx]
        out = np.where(r >= 0.5, self.n * (self.n - 1), out)
        return int(out) if out.ndim == 0 else out.astype(np.int64)


def ppc_curve(p: PointSet, max_distance: float | None = None) -> PPCCurve:
    return PPCCurve(distance_multiset(p, max_distance))


def pair_count(curve: PPCCurve, r: float) -> int:
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r!r}")
    return curve.count(r)


def ppc_statistic(curve: PPCCurve, s: float) -> float:
    """``G(s/N) / N``; equals ``2s`` on average for uniform random points."""
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s!r}")
    return pair_count(curve, s / curve.n) / curve.n


def ppc_statistic_alpha(curve: PPCCurve, s: float, alpha: float) -> float:
    """``G(s / N^alpha) / N^(2 - alpha)``; ``alpha = 1`` is :func:`ppc_statistic`."""
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s!r}")
    if alpha == 1:
        return ppc_statistic(curve, s)
    n = curve.n
    return pair_count(curve, s / n**alpha) / n ** (2.0 - alpha)


def window_average(curve: PPCCurve, s: float, u: float) -> float:
    """``(1/2u) int_{s-u}^{s+u} ppc_statistic(t) dt``, integrated exactly."""
    if not u > 0:
        raise ValueError(f"u must be positive, got {u!r}")
    a, b = s - u, s + u
    if a < 0:
        raise ValueError(f"window [{a}, {b}] starts below 0")
    n = curve.n
    ms = curve.multiset
    curve._covers(min(b / n, 0.5) if b / n < 0.5 else 0.0)
    if not ms.complete and b / n >= 0.5:
        raise ValueError("window reaches distance 1/2; needs a complete multiset")
    starts = np.maximum(a, n * ms.distances)
    lengths = np.clip(b - starts, 0.0, None)
    return float(np.sum(ms.multiplicities * lengths)) / n / (2.0 * u)


@dataclass(frozen=True)
class HypothesisResult:
    holds: bool
    s_max: float
    delta: float
    worst_s: float | None = None
    worst_statistic: float | None = None
    worst_bound: float | None = None
    vacuous: bool = False
    checked: int = 0

    @property
    def worst(self):
        if self.worst_s is None:
            return None
        return (self.worst_s, self.worst_statistic, self.worst_bound)


def theorem1_hypothesis_check(
    curve: PPCCurve, delta: float, integer_only: bool = False
) -> HypothesisResult:
    """Check ``ppc_statistic(s) <= (1 + delta) 2 s`` for all ``1 <= s <= s_max``.

    ``s_max = (8/delta) sqrt(log N)``.  The statistic is a nondecreasing step
    function and the bound increases, so the real-``s`` condition reduces to
    ``s = 1`` plus every jump in ``(1, s_max]``.  ``integer_only`` checks the
    integers ``1..floor(s_max)`` instead.
    """
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    n = curve.n
    s_max = (8.0 / delta) * math.sqrt(math.log(n)) if n > 1 else 0.0
    if s_max < 1.0:
        return HypothesisResult(True, s_max, delta, vacuous=True)
    md = curve.multiset.max_distance
    if md is not None and md < min(s_max / n, 0.5):
        raise ValueError(f"curve covers distances <= {md}, hypothesis needs {s_max / n}")
    if integer_only:
        s = np.arange(1, math.floor(s_max) + 1, dtype=float)
        radii = s / n
    else:
        d = curve.multiset.distances
        sel = (n * d > 1.0) & (n * d <= s_max)
        s = np.concatenate([[1.0], n * d[sel]])
        radii = np.concatenate([[1.0 / n], d[sel]])
    radii = np.minimum(radii, 0.5)
    stat = curve.count(radii) / n
    bound = (1.0 + delta) * 2.0 * s
    slack = bound - stat
    i = int(np.argmin(slack))
    return HypothesisResult(
        holds=bool(slack[i] >= 0),
        s_max=s_max,
        delta=delta,
        worst_s=float(s[i]),
        worst_statistic=float(stat[i]),
        worst_bound=float(bound[i]),
        checked=int(s.size),
    )


def A_direct(p: PointSet) -> float:
    """Squared global deviation from Poissonian pair correlation, exactly.

    Between consecutive jump distances the integrand is ``(c/N - 2 N t)^2``,
    integrated as ``(b - a)(g_a^2 + g_a g_b + g_b^2)/3``.
    """
    n = p.n
    if n == 1:
        return 1.0 / 3.0
    ms = distance_multiset(p)
    d = ms.distances
    cum = np.cumsum(ms.multiplicities)
    # pieces [edges[i], edges[i+1]) carry count counts[i]
    edges = np.concatenate([[0.0], d, [0.5]])
    counts = np.concatenate([[0], cum])
    a, b = edges[:-1], edges[1:]
    keep = b > a
    a, b, c = a[keep], b[keep], counts[keep]
    ga = c / n - 2.0 * n * a
    gb = c / n - 2.0 * n * b
    return float(2.0 * np.sum((b - a) * (ga * ga + ga * gb + gb * gb) / 3.0))


def _a_spectral_parts(profile: SpectralProfile):
    ks = profile.ks.astype(float)
    p2 = profile.power2
    quartic = float(np.sum(p2**2 / ks**2))
    odd = float(np.sum(p2[::2] / ks[::2] ** 2))
    return quartic, odd


def A_spectral(profile: SpectralProfile) -> BoundedValue:
    """``A`` from exponential sums.

    ``A = 2/(pi^2 N^2) sum |S_k|^4/k^2 - 8/(pi^2 N) sum_{k odd} |S_k|^2/k^2 + 1``.
    Omitted terms of the first series can only raise the value (by at most
    ``2 N^2 / (pi^2 K)``) and those of the second only lower it (by at most
    ``8 N / (pi^2 K)``).
    """
    n, K = profile.n, profile.K
    quartic, odd = _a_spectral_parts(profile)
    pi2 = math.pi**2
    est = 2.0 / (pi2 * n**2) * quartic - 8.0 / (pi2 * n) * odd + 1.0
    return BoundedValue(est, 8.0 * n / (pi2 * K), 2.0 * n**2 / (pi2 * K))


def fourier_coeff_indicator(k: int, s: float) -> float:
    """Fourier coefficient of the indicator of ``[-s, s]`` at frequency ``k != 0``."""
    if k == 0:
        raise ValueError("k must be nonzero")
    if not 0 <= s <= 0.5:
        raise ValueError(f"s must lie in [0, 1/2], got {s!r}")
    return math.sin(2.0 * k * math.pi * s) / (k * math.pi)


def corollary2_check(profile: SpectralProfile) -> VerificationRecord:
    """Odd-frequency energy against the quartic energy plus ``pi^2 N^2``.

    The truncated right side is already a lower bound; the left side gets
    its worst-case tail ``8 N^3 / K`` added.
    """
    n, K = profile.n, profile.K
    quartic, odd = _a_spectral_parts(profile)
    lhs = 8.0 * n * odd
    lhs_high = lhs + 8.0 * n**3 / K
    rhs = 2.0 * quartic + math.pi**2 * n**2
    rhs_high = rhs + 2.0 * n**4 / K
    params = {"N": n, "K": K}
    details = {"lhs_upper": lhs_high, "rhs_upper": rhs_high}
    if lhs_high <= rhs:
        status = Status.PASS
    elif lhs > rhs_high:
        status = Status.FAIL
    else:
        status = Status.INCONCLUSIVE
        gap = rhs - lhs
        details["required_K"] = math.ceil(8.0 * n**3 / gap) if gap > 0 else None
    return VerificationRecord("corollary2", lhs, rhs, rhs - lhs_high, status, params, details=details)


_NORMALIZATION_POWERS = {"none": 0, "1/M": 1, "1/M^2": 2}


def corollary1_check(
    p: PointSet, K: int, cap: int = DEFAULT_DIFF_CAP, profile: SpectralProfile | None = None
) -> VerificationRecord:
    """``A`` against the diaphony of the difference set.

    The proof-line bound ``2/(pi^2 N^2) sum |S_k|^4/k^2 + 1`` is evaluated
    twice: exactly from the closed-form diaphony of the ``M = N^2``
    differences and as a truncated spectral enclosure.  Each candidate
    normalization of ``F_M^2`` (``none``, ``1/M``, ``1/M^2``) is reported with
    whether it satisfies the inequality and whether it reproduces the
    proof-line value.
    """
    n = p.n
    m = n * n
    if m > cap:
        raise ValueError(f"difference set of size {m} exceeds cap {cap}")
    if profile is None or profile.K < K:
        profile = build_profile(p, K)
    a = A_direct(p)
    f_classical = diaphony_closed(difference_set(p))
    quartic, _ = _a_spectral_parts(profile)
    pi2 = math.pi**2
    line = BoundedValue(2.0 / (pi2 * n**2) * quartic + 1.0, 0.0, 2.0 * n**2 / (pi2 * profile.K))
    tol = 1e-9 * max(1.0, abs(a))
    candidates = {}
    for label, power in _NORMALIZATION_POWERS.items():
        value = f_classical**2 * m ** (2 - power) / pi2 + 1.0
        candidates[label] = {
            "bound": value,
            "satisfies": value >= a - tol,
            "matches_proof_line": line.contains(value, atol=1e-9 * max(1.0, value)),
        }
    exact_line = candidates["1/M"]["bound"]
    ok = exact_line >= a - tol and line.upper >= a - tol
    return VerificationRecord(
        "corollary1",
        a,
        exact_line,
        exact_line - a,
        Status.PASS if ok else Status.FAIL,
        {"N": n, "K": profile.K},
        details={
            "candidates": candidates,
            "matching_normalizations": [k for k, v in candidates.items() if v["matches_proof_line"]],
            "proof_line_spectral": {"estimate": line.estimate, "upper": line.upper},
        },
    )


@dataclass(frozen=True)
class Theorem2Report:
    n: int
    A: float
    D: float
    r_upper: float
    r_lower: float
    irregular: bool
    A_spectral: BoundedValue | None = None


def theorem2_report(p: PointSet, K: int | None = None) -> Theorem2Report:
    """Empirical constants ``A / (N^2 D^2)`` and ``A / (N^2 D^5)``.

    ``irregular`` flags ``D >= N^(-1/3)``, the regime of the lower bound.
    """
    from .discrepancy import extreme_discrepancy

    n = p.n
    if n < 2:
        raise ValueError("theorem2_report needs N >= 2")
    a = A_direct(p)
    d = extreme_discrepancy(p).value
    spec = A_spectral(build_profile(p, K)) if K else None
    return Theorem2Report(
        n=n,
        A=a,
        D=d,
        r_upper=a / (n**2 * d**2),
        r_lower=a / (n**2 * d**5),
        irregular=d >= n ** (-1.0 / 3.0),
        A_spectral=spec,
    )


def write_ppc_csv(curve: PPCCurve, s_grid, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["s", "statistic", "poisson_reference"])
    for s in s_grid:
        w.writerow([repr(float(s)), repr(ppc_statistic(curve, s)), repr(2.0 * float(s))])
