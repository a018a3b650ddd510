"""Vectorized numpy implementation of the batch kernels.

Always available; the compiled module mirrors these signatures exactly.
"""
import numpy as np

from ..geometry import row_norm
from ..means import ARITHMETIC, GEOMETRIC, LOGARITHMIC, MAX, MIN, mean, power

BACKEND = "numpy"

_MEANS = {0: ARITHMETIC, 2: LOGARITHMIC, 3: MIN, 4: MAX, 5: GEOMETRIC}


def boundary_distance(kind, X):
    if kind == 0:
        return np.ascontiguousarray(X[:, -1])
    r = row_norm(X)
    return 1.0 - r if kind == 1 else r


def _mean(mean_code, d, a, b):
    kind = power(d) if mean_code == 1 else _MEANS[mean_code]
    return np.asarray(mean(kind, a, b), dtype=float)


def _metric(mean_code, d, c, form, X, Y, dx, dy):
    diff = X - Y
    dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    m = _mean(mean_code, d, dx, dy)
    if form == 0:
        out = dist / (c * m)
    elif form == 1:
        out = np.log1p(dist / (c * m))
    else:
        out = dist / (dist + 2.0 * c * m)
    out[dist == 0.0] = 0.0
    return out


def pair_metric(kind, mean_code, d, c, form, X, Y):
    dx = boundary_distance(kind, X)
    dy = boundary_distance(kind, Y)
    return _metric(mean_code, d, c, form, X, Y, dx, dy)


def triangle_defect(kind, mean_code, d, c, form, X, Y, Z):
    dx = boundary_distance(kind, X)
    dy = boundary_distance(kind, Y)
    dz = boundary_distance(kind, Z)
    xz = _metric(mean_code, d, c, form, X, Z, dx, dz)
    zy = _metric(mean_code, d, c, form, Z, Y, dz, dy)
    xy = _metric(mean_code, d, c, form, X, Y, dx, dy)
    return xz + zy - xy
