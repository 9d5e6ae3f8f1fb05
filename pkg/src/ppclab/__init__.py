"""Pair correlation, discrepancy, diaphony and heat-kernel statistics on the torus."""

from .discrepancy import cassels_report, extreme_discrepancy, star_discrepancy
from .heat_kernel import (
    Theorem1Params,
    ThetaParams,
    rearrangement_bound,
    smoothing_domination_check,
    theta,
    theta_pair_sum,
)
from .pair_correlation import (
    A_direct,
    A_spectral,
    corollary1_check,
    corollary2_check,
    distance_multiset,
    pair_count,
    ppc_curve,
    ppc_statistic,
    ppc_statistic_alpha,
    theorem1_hypothesis_check,
    theorem2_report,
    window_average,
)
from .points import (
    PointSet,
    circle_dist,
    difference_set,
    frac,
    gen_equispaced,
    gen_kronecker,
    gen_perturbed,
    gen_random,
    gen_van_der_corput,
    read_points,
    write_points,
)
from .records import BoundedValue, VerificationRecord
from .spectral import (
    build_profile,
    diaphony,
    diaphony_closed,
    energy_window,
    erdos_turan_bound,
    exp_sum,
    leveque_bound,
    logsin_statistic,
    weighted_energy,
)

__version__ = "0.1.0"
