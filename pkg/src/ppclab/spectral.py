"""Exponential sums and the spectral statistics built on them.

All infinite series over frequencies are truncated at the profile's ``K``
and returned as :class:`~ppclab.records.BoundedValue` enclosures, using only
the worst case ``|S_k| <= N`` and ``sum_{k>K} k^-2 <= 1/K`` for the tails.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InsufficientProfileError, check_work
from .points import PointSet
from .records import BoundedValue

__all__ = [
    "SpectralProfile",
    "Normalization",
    "ErdosTuranResult",
    "exp_sum",
    "build_profile",
    "energy_window",
    "weighted_energy",
    "diaphony",
    "diaphony_closed",
    "leveque_bound",
    "erdos_turan_bound",
    "logsin_kernel",
    "logsin_partial_sum",
    "logsin_statistic",
    "write_profile_csv",
]

TWO_PI = 2.0 * math.pi
_CHUNK_ELEMS = 1 << 22


def _exp_sums(x: np.ndarray, ks: np.ndarray) -> np.ndarray:
    # phase reduced mod 1 before scaling so large k*x keep their fractional accuracy
    out = np.empty(ks.size, dtype=complex)
    step = max(1, _CHUNK_ELEMS // max(1, x.size))
    for lo in range(0, ks.size, step):
        kk = ks[lo : lo + step].astype(float)
        phase = np.outer(kk, x)
        phase -= np.floor(phase)
        phase *= TWO_PI
        out[lo : lo + step] = np.cos(phase).sum(axis=1) + 1j * np.sin(phase).sum(axis=1)
    return out


def exp_sum(p: PointSet, k: int) -> complex:
    """``S_k = sum_n exp(2 pi i k x_n)``."""
    if k == 0:
        return complex(p.n)
    if k < 0:
        return exp_sum(p, -k).conjugate()
    return complex(_exp_sums(p.points, np.array([k]))[0])


@dataclass(frozen=True, eq=False)
class SpectralProfile:
    """Exponential sums ``S_1 .. S_K`` of one point set."""

    n: int
    K: int
    sums: np.ndarray

    @property
    def power2(self) -> np.ndarray:
        return np.abs(self.sums) ** 2

    @property
    def ks(self) -> np.ndarray:
        return np.arange(1, self.K + 1)

    def __getitem__(self, k: int) -> complex:
        """``S_k`` for ``1 <= k <= K`` (1-based, like the frequency)."""
        if not 1 <= k <= self.K:
            raise InsufficientProfileError(f"frequency {k} outside profile range 1..{self.K}")
        return complex(self.sums[k - 1])


def build_profile(p: PointSet, K: int) -> SpectralProfile:
    if int(K) != K or K < 1:
        raise ValueError(f"K must be a positive integer, got {K!r}")
    K = int(K)
    check_work(float(p.n) * K, f"spectral profile (N={p.n}, K={K})")
    sums = _exp_sums(p.points, np.arange(1, K + 1))
    sums.setflags(write=False)
    return SpectralProfile(n=p.n, K=K, sums=sums)


def energy_window(profile: SpectralProfile, k_window: int) -> float:
    """``sum_{0 < |k| <= k_window} |S_k|^2`` (twice the one-sided sum)."""
    if k_window < 0:
        raise ValueError("k_window must be >= 0")
    if k_window > profile.K:
        raise InsufficientProfileError(
            f"window {k_window} exceeds profile truncation K={profile.K}"
        )
    return float(2.0 * profile.power2[:k_window].sum())


def weighted_energy(profile: SpectralProfile, power: int) -> BoundedValue:
    """``sum_{k>=1} |S_k|^power / k^2`` with tail ``N^power / K``."""
    if power not in (2, 4):
        raise ValueError(f"power must be 2 or 4, got {power!r}")
    ks = profile.ks.astype(float)
    est = float(np.sum(profile.power2 ** (power // 2) / ks**2))
    return BoundedValue(est, 0.0, float(profile.n) ** power / profile.K)


class Normalization(str, Enum):
    CLASSICAL = "classical"
    UNNORMALIZED = "unnormalized"


def diaphony(profile: SpectralProfile, normalization=Normalization.CLASSICAL) -> BoundedValue:
    """Diaphony from the spectral side.

    ``UNNORMALIZED`` is ``sqrt(2 * sum |S_k|^2 / k^2)``; ``CLASSICAL`` divides
    that by ``N`` so that it agrees with :func:`diaphony_closed`.
    """
    normalization = Normalization(normalization)
    scale = 1.0 / profile.n if normalization is Normalization.CLASSICAL else 1.0
    energy = weighted_energy(profile, 2)
    return energy.map_monotone(lambda v: scale * math.sqrt(2.0 * max(v, 0.0)))


def diaphony_closed(p: PointSet) -> float:
    """Classical diaphony from the pairwise closed form, O(N^2)."""
    x = p.points
    total = 0.0
    step = max(1, _CHUNK_ELEMS // x.size)
    for lo in range(0, x.size, step):
        d = x[lo : lo + step, None] - x[None, :]
        d -= np.floor(d)
        total += float(np.sum((1.0 - 2.0 * d) ** 2 - 1.0 / 3.0))
    return math.sqrt(max(0.0, math.pi**2 / (2.0 * p.n**2) * total))


def leveque_bound(profile: SpectralProfile) -> BoundedValue:
    """LeVeque's upper bound ``(6/pi^2 * N^-2 * sum |S_k|^2/k^2)^(1/3)`` on D_N.

    Use ``.upper`` for a rigorous bound; the estimate alone comes from the
    truncated series and can sit below the true value.
    """
    scale = 6.0 / (math.pi**2 * profile.n**2)
    return weighted_energy(profile, 2).map_monotone(lambda v: (scale * max(v, 0.0)) ** (1.0 / 3.0))


@dataclass(frozen=True)
class ErdosTuranResult:
    bound: float
    k_star: int
    k_cap: int

    @property
    def capped(self) -> bool:
        return self.k_star == self.k_cap


def erdos_turan_bound(profile: SpectralProfile) -> ErdosTuranResult:
    """Minimise ``N/(K+1) + 3 sum_{k<=K} |S_k|/k`` over ``K <= profile.K``.

    The returned ``bound`` is that minimum divided by ``N`` (a bound on D_N);
    ties go to the smallest ``K``.
    """
    ks = profile.ks.astype(float)
    f = profile.n / (ks + 1.0) + 3.0 * np.cumsum(np.abs(profile.sums) / ks)
    i = int(np.argmin(f))
    return ErdosTuranResult(bound=float(f[i]) / profile.n, k_star=i + 1, k_cap=profile.K)


def logsin_kernel(x):
    """``log(1 / (4 sin^2(pi x)))``; +inf at integers."""
    s2 = 4.0 * np.sin(np.pi * np.asarray(x, dtype=float)) ** 2
    with np.errstate(divide="ignore"):
        return -np.log(s2)


def logsin_partial_sum(x: float, K: int) -> float:
    """``sum_{k=1}^K cos(2 pi k x) / k``."""
    ks = np.arange(1, K + 1, dtype=float)
    phase = ks * x
    phase -= np.floor(phase)
    return float(np.sum(np.cos(TWO_PI * phase) / ks))


def logsin_statistic(p: PointSet) -> float:
    """``sqrt(log N)/N * sum_{m,n} min(log N, log(1/(4 sin^2(pi(x_m - x_n)))))``.

    The kernel is capped at ``log N`` wherever ``4 sin^2 < 1/N``, which also
    covers the diagonal.
    """
    n = p.n
    if n < 2:
        raise ValueError("logsin statistic needs N >= 2")
    log_n = math.log(n)
    x = p.points
    total = 0.0
    step = max(1, _CHUNK_ELEMS // n)
    for lo in range(0, n, step):
        d = x[lo : lo + step, None] - x[None, :]
        s2 = 4.0 * np.sin(np.pi * d) ** 2
        vals = np.full(s2.shape, log_n)
        ok = s2 >= 1.0 / n
        vals[ok] = np.minimum(log_n, -np.log(s2[ok]))
        total += float(vals.sum())
    return math.sqrt(log_n) / n * total


def write_profile_csv(profile: SpectralProfile, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["k", "re", "im", "abs2"])
    for k, s in zip(profile.ks, profile.sums):
        w.writerow([int(k), repr(float(s.real)), repr(float(s.imag)), repr(float(abs(s) ** 2))])
