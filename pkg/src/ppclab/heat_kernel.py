"""Jacobi theta kernel on the torus and the heat-kernel smoothing checks.

``theta(t, x) = sum_k exp(-4 pi^2 k^2 t) exp(2 pi i k x)`` is evaluated by its
Fourier series for large ``t`` and by Gaussian images for small ``t``; the
switch happens at ``4 pi^2 t = 1`` where both need only a handful of terms.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import NumericalFailure
from .pair_correlation import distance_multiset, ppc_curve, theorem1_hypothesis_check
from .points import PointSet
from .records import BoundedValue, Kind, Status, VerificationRecord
from .spectral import SpectralProfile, build_profile, energy_window

__all__ = [
    "DEFAULT_TOL",
    "ThetaParams",
    "Theorem1Params",
    "theta",
    "theta_fourier",
    "theta_images",
    "theta_integral",
    "theta_pair_sum",
    "theta_pair_sum_spectral",
    "smoothing_domination_check",
    "rearrangement_bound",
]

DEFAULT_TOL = 1e-14
FOUR_PI2 = 4.0 * math.pi**2
_CHUNK_ELEMS = 1 << 21


@dataclass(frozen=True)
class ThetaParams:
    t: float
    eval_tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        if not (self.t > 0 and math.isfinite(self.t)):
            raise ValueError(f"heat time must be positive, got {self.t!r}")
        if not self.eval_tolerance > 0:
            raise ValueError("eval_tolerance must be positive")


def _check_t(t: float) -> float:
    t = float(t)
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"heat time must be positive and finite, got {t!r}")
    return t


def theta_fourier(t: float, x, tol: float = DEFAULT_TOL):
    """Fourier side: ``1 + 2 sum_{k>=1} q^(k^2) cos(2 pi k x)``, ``q = exp(-4 pi^2 t)``."""
    t = _check_t(t)
    x = np.asarray(x, dtype=float)
    xr = x - np.floor(x)
    out = np.ones_like(xr)
    k = 1
    while True:
        amp = 2.0 * math.exp(-FOUR_PI2 * k * k * t)
        if amp < tol:
            break
        out = out + amp * np.cos(2.0 * math.pi * k * xr)
        k += 1
    return out if out.ndim else float(out)


def theta_images(t: float, x, tol: float = DEFAULT_TOL):
    """Image side: ``sum_m (4 pi t)^(-1/2) exp(-(x+m)^2 / (4t))`` with ``x`` in [-1/2, 1/2]."""
    t = _check_t(t)
    x = np.asarray(x, dtype=float)
    xr = x - np.round(x)
    pref = 1.0 / math.sqrt(4.0 * math.pi * t)
    out = pref * np.exp(-(xr**2) / (4.0 * t))
    m = 1
    # |x + m| >= m - 1/2 bounds every term at image index +-m
    while pref * math.exp(-((m - 0.5) ** 2) / (4.0 * t)) >= tol:
        out = out + pref * (np.exp(-((xr + m) ** 2) / (4.0 * t)) + np.exp(-((xr - m) ** 2) / (4.0 * t)))
        m += 1
    return out if out.ndim else float(out)


def theta(t, x, tol: float | None = None):
    """Heat kernel on the torus at time ``t`` (a float or :class:`ThetaParams`)."""
    if isinstance(t, ThetaParams):
        tol = t.eval_tolerance if tol is None else tol
        t = t.t
    tol = DEFAULT_TOL if tol is None else tol
    t = _check_t(t)
    if FOUR_PI2 * t >= 1.0:
        return theta_fourier(t, x, tol)
    return theta_images(t, x, tol)


def theta_integral(t: float, a: float, b: float, rel_tol: float = 1e-10) -> float:
    """``int_a^b theta_t(x) dx`` by adaptive Gauss-Kronrod quadrature.

    Whole periods contribute exactly 1 each; the remainder is split at
    integers, where the kernel peaks.
    """
    t = _check_t(t)
    if b < a:
        return -theta_integral(t, b, a, rel_tol)
    periods = math.floor(b - a)
    lo = a + periods
    total = float(periods)
    if b > lo:
        cuts = [lo] + [float(z) for z in range(math.ceil(lo), math.floor(b) + 1) if lo < z < b] + [b]
        for u, v in zip(cuts[:-1], cuts[1:]):
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                try:
                    val, _err = integrate.quad(
                        lambda z: theta(t, z), u, v, epsabs=1e-15, epsrel=rel_tol, limit=500
                    )
                except integrate.IntegrationWarning as exc:
                    raise NumericalFailure(f"theta quadrature on [{u}, {v}] failed: {exc}") from None
            total += val
    return total


def theta_pair_sum(p: PointSet, t: float) -> float:
    """``sum_{m,n} theta_t(x_m - x_n)`` over all ordered pairs, diagonal included."""
    t = _check_t(t)
    x = p.points
    total = 0.0
    step = max(1, _CHUNK_ELEMS // x.size)
    for lo in range(0, x.size, step):
        total += float(np.sum(theta(t, x[lo : lo + step, None] - x[None, :])))
    return total


def theta_pair_sum_spectral(profile: SpectralProfile, t: float) -> BoundedValue:
    """Fourier side of :func:`theta_pair_sum`: ``sum_k exp(-4 pi^2 k^2 t) |S_k|^2``."""
    t = _check_t(t)
    a = FOUR_PI2 * t
    ks = profile.ks.astype(float)
    est = profile.n**2 + 2.0 * float(np.sum(np.exp(-a * ks**2) * profile.power2))
    K = profile.K
    # consecutive-term ratio beyond K is at most exp(-a (2K+3))
    first = math.exp(-a * (K + 1) ** 2)
    tail = 2.0 * profile.n**2 * first / (1.0 - math.exp(-a * (2 * K + 3)))
    return BoundedValue(est, 0.0, tail)


@dataclass(frozen=True)
class Theorem1Params:
    delta: float
    n: int

    def __post_init__(self):
        if not 0 < self.delta < 0.5:
            raise ValueError(f"delta must lie in (0, 1/2), got {self.delta!r}")
        if self.n < 1:
            raise ValueError("N must be positive")

    @property
    def s_max(self) -> float:
        return (8.0 / self.delta) * math.sqrt(math.log(self.n))

    @property
    def k_window(self) -> int:
        return math.floor(self.delta**1.5 * self.n)

    @property
    def heat_time(self) -> float:
        return 1.0 / (self.delta * self.n) ** 2

    def as_dict(self) -> dict:
        return {
            "delta": self.delta,
            "N": self.n,
            "s_max": self.s_max,
            "k_window": self.k_window,
            "heat_time": self.heat_time,
        }


def _status(lhs: float, rhs: float) -> str:
    return Status.PASS if rhs - lhs >= -1e-9 * abs(rhs) else Status.FAIL


def smoothing_domination_check(
    p: PointSet, params: Theorem1Params, profile: SpectralProfile | None = None
) -> VerificationRecord:
    """Windowed energy (with ``k = 0``) against the theta-smoothed pair sum.

    For ``|k| <= delta^(3/2) N`` every Gaussian weight is at least
    ``exp(-4 pi^2 delta)``, so the inequality holds for every input.
    """
    kw = params.k_window
    if kw < 1:
        return VerificationRecord(
            "theorem1.smoothing_domination", 0.0, 0.0, 0.0, Status.VACUOUS, params.as_dict()
        )
    if profile is None or profile.K < kw:
        profile = build_profile(p, kw)
    lhs = p.n**2 + energy_window(profile, kw)
    rhs = math.exp(FOUR_PI2 * params.delta) * theta_pair_sum(p, params.heat_time)
    return VerificationRecord(
        "theorem1.smoothing_domination", lhs, rhs, rhs - lhs, _status(lhs, rhs), params.as_dict()
    )


def rearrangement_bound(p: PointSet, params: Theorem1Params, curve=None) -> VerificationRecord:
    """Rearrangement bound on the off-diagonal theta pair sum.

    Valid when the pair-correlation hypothesis holds at level ``delta``;
    otherwise the record is ``not-applicable``.  The bound uses
    ``phi(x) = (1+delta) 2 x N^2`` on ``[1/N, s_max/N]`` and charges the far
    tail with ``theta_t(s_max/N) * N^2``.
    """
    name = "theorem1.rearrangement"
    info = params.as_dict()
    n, delta, t = p.n, params.delta, params.heat_time
    if n < 2 or params.s_max <= 1.0:
        return VerificationRecord(name, 0.0, 0.0, 0.0, Status.VACUOUS, info, kind=Kind.INEQUALITY)
    if curve is None:
        curve = ppc_curve(p, max_distance=min(0.5, params.s_max / n))
    hyp = theorem1_hypothesis_check(curve, delta)
    details = {"hypothesis_holds": hyp.holds, "hypothesis_worst": hyp.worst}
    if not hyp.holds:
        return VerificationRecord(
            name, float("nan"), float("nan"), float("nan"), Status.NOT_APPLICABLE, info,
            details=details,
        )
    ms = distance_multiset(p)
    lhs = float(np.sum(ms.multiplicities * theta(t, ms.distances)))
    alpha, beta = 1.0 / n, params.s_max / n
    window_mass = theta_integral(t, alpha, beta)
    rhs = (
        theta(t, 0.0) * (1.0 + delta) * 2.0 * n
        + (1.0 + delta) * 2.0 * n**2 * window_mass
        + theta(t, beta) * n**2
    )
    details["window_mass"] = window_mass
    # the proof bounds window_mass by 1/2; recorded, not relied upon
    details["window_mass_at_most_half"] = window_mass <= 0.5
    return VerificationRecord(name, lhs, rhs, rhs - lhs, _status(lhs, rhs), info, details=details)
