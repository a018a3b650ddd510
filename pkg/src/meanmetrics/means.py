"""Two-argument means used as the denominator of the mean-value metrics.

All functions accept scalars or numpy arrays and broadcast.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MeanKind",
    "ARITHMETIC",
    "LOGARITHMIC",
    "MIN",
    "MAX",
    "GEOMETRIC",
    "power",
    "mean",
    "log_mean",
    "power_mean",
]

_NAMES = ("arithmetic", "power", "logarithmic", "min", "max", "geometric")

# |b/a - 1| below this switches the logarithmic mean to its series.
LOG_MEAN_SERIES_CUTOFF = 1e-4

# Gregory coefficients of u / log(1 + u), through u**5.
_GREGORY = (1.0, 1.0 / 2.0, -1.0 / 12.0, 1.0 / 24.0, -19.0 / 720.0, 3.0 / 160.0)


@dataclass(frozen=True)
class MeanKind:
    """Selector for a two-argument mean. ``d`` is used only by ``power``."""

    name: str
    d: float | None = None

    def __post_init__(self):
        if self.name not in _NAMES:
            raise ValueError(f"unknown mean {self.name!r}; expected one of {_NAMES}")
        if self.name == "power":
            if self.d is None or not math.isfinite(self.d) or self.d <= 0:
                raise ValueError(f"power mean exponent must be positive and finite, got {self.d!r}")
        elif self.d is not None:
            raise ValueError(f"{self.name} mean takes no exponent")

    def __str__(self) -> str:
        return f"power({self.d:g})" if self.name == "power" else self.name


ARITHMETIC = MeanKind("arithmetic")
LOGARITHMIC = MeanKind("logarithmic")
MIN = MeanKind("min")
MAX = MeanKind("max")
GEOMETRIC = MeanKind("geometric")


def power(d: float) -> MeanKind:
    return MeanKind("power", float(d))


def _check_positive(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("mean arguments must be finite")
    if not (np.all(a > 0) and np.all(b > 0)):
        raise ValueError("mean arguments must be positive")
    return a, b


def _scalar_or_array(out):
    return float(out) if np.ndim(out) == 0 else out


def log_mean(a, b):
    r"""Logarithmic mean :math:`(a-b)/(\log a - \log b)`, with ``L(a, a) = a``.

    Close arguments (``|b/a - 1| < 1e-4``) go through the series
    ``a * u / log1p(u)`` expanded to fifth order in ``u = b/a - 1``; ratios in
    ``[1/2, 2]`` use ``log1p`` for the denominator and the rest use
    ``log(a/b)``. This keeps the result homogeneous to ~1e-15 relative.
    """
    a, b = _check_positive(a, b)
    a, b = np.broadcast_arrays(a, b)
    u = b / a - 1.0
    out = np.empty(a.shape)
    near = np.abs(u) < LOG_MEAN_SERIES_CUTOFF
    mid = ~near & (u > -0.5) & (u < 1.0)
    far = ~near & ~mid
    if near.any():
        un = u[near]
        acc = np.full(un.shape, _GREGORY[-1])
        for coef in _GREGORY[-2::-1]:
            acc = acc * un + coef
        out[near] = a[near] * acc
    if mid.any():
        am, bm = a[mid], b[mid]
        out[mid] = (bm - am) / np.log1p((bm - am) / am)
    if far.any():
        af, bf = a[far], b[far]
        out[far] = (af - bf) / np.log(af / bf)
    return _scalar_or_array(out)


def power_mean(a, b, d: float):
    """Power mean ``((a**d + b**d)/2)**(1/d)``; the larger argument is factored out."""
    a, b = _check_positive(a, b)
    hi = np.maximum(a, b)
    lo = np.minimum(a, b)
    out = hi * ((1.0 + (lo / hi) ** d) / 2.0) ** (1.0 / d)
    return _scalar_or_array(out)


def mean(kind: MeanKind, a, b):
    """Evaluate the mean selected by ``kind`` on positive ``a`` and ``b``.

    >>> mean(ARITHMETIC, 3.0, 4.0)
    3.5
    >>> mean(LOGARITHMIC, 2.0, 2.0)
    2.0
    """
    name = kind.name
    if name == "logarithmic":
        return log_mean(a, b)
    if name == "power":
        if kind.d == 1.0:
            return mean(ARITHMETIC, a, b)
        return power_mean(a, b, kind.d)
    a, b = _check_positive(a, b)
    if name == "arithmetic":
        out = 0.5 * a + 0.5 * b
    elif name == "min":
        out = np.minimum(a, b)
    elif name == "max":
        out = np.maximum(a, b)
    else:
        out = np.where(a == b, a, np.sqrt(a) * np.sqrt(b))
    return _scalar_or_array(out)
