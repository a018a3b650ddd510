"""Batch kernels for metric evaluation and triangle defects.

The compiled Cython module is used when it was built; otherwise the numpy
fallback is loaded. Set ``MEANMETRICS_BACKEND=numpy`` to force the fallback.

Integer codes: domain 0 half-space, 1 ball, 2 punctured; mean 0 arithmetic,
1 power, 2 logarithmic, 3 min, 4 max, 5 geometric; form 0 raw, 1 log, 2 th.
"""
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

if _ckernels is not None and os.environ.get("MEANMETRICS_BACKEND", "").lower() != "numpy":
    _impl = _ckernels
else:
    _impl = _pykernels

BACKEND = _impl.BACKEND
boundary_distance = _impl.boundary_distance
pair_metric = _impl.pair_metric
triangle_defect = _impl.triangle_defect

__all__ = ["BACKEND", "boundary_distance", "pair_metric", "triangle_defect",
           "available_backends", "get_backend"]


def available_backends():
    return {"numpy": _pykernels, **({"cython": _ckernels} if _ckernels is not None else {})}


def get_backend(name):
    return available_backends()[name]
