import numpy as np
import pytest

from ppclab import points as pts


def suite_sets():
    """Standard test sets used across modules."""
    return [
        pts.PointSet([0.0, 0.5], label="two"),
        pts.PointSet([0.3], label="single"),
        pts.PointSet([0.7] * 10, label="cluster10"),
        pts.PointSet([0.0, 0.0, 0.5], label="dup"),
        pts.gen_equispaced(8),
        pts.gen_equispaced(16),
        pts.gen_equispaced(64),
        pts.gen_random(16, 4),
        pts.gen_random(32, 9),
        pts.gen_kronecker(50, (5**0.5 - 1) / 2),
        pts.gen_van_der_corput(32, 2),
        pts.gen_perturbed(64, 3, 1.0),
        pts.gen_random(128, 2),
    ]


@pytest.fixture(scope="session")
def sets():
    return suite_sets()


def brute_pair_distances(x):
    """All ordered-pair torus distances (i != j), straight from the definition."""
    x = np.asarray(x, dtype=float)
    d = np.abs(x[:, None] - x[None, :])
    d = np.minimum(d, 1.0 - d)
    mask = ~np.eye(x.size, dtype=bool)
    return np.sort(d[mask])
