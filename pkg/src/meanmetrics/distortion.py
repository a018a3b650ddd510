"""Quasiregular self-maps of the half-plane and the disk, and Schwarz-type bounds.

For a ``K``-quasiregular ``f`` between half-planes or disks, with
``alpha = K**(1/(1-n)) = 1/K`` in the plane and ``lambda_2 = 4``::

    th(rho(f x, f y)/2) <= lambda**(1-alpha) * th(rho(x, y)/2)**alpha      (1)
    th(rho(f x, f y)/2) <= K * (th(rho(x, y)) + log 4)                     (2)

and the corollary bounds for the th-form mean metrics follow from combining
(1) with the comparison constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import sampling
from .geometry import Domain, DomainError, DomainKind, dist_to_boundary, hyperbolic_dist, hyperbolic_th_half
from .metrics import evaluate, phi, phi_log

__all__ = [
    "MobiusBall",
    "AnalyticPowerBall",
    "VerticalStretchHalf",
    "RadialStretchBall",
    "UnsupportedDimensionError",
    "apply",
    "lambda_constant",
    "schwarz_check",
    "corollary_check",
    "FAMILIES",
]

CHECK_TOL = 1e-9


class UnsupportedDimensionError(ValueError):
    """``lambda_n`` has no closed form for ``n > 2``; carries the known bracket."""

    def __init__(self, n: int, bracket: tuple[float, float] | None):
        self.n = n
        self.bracket = bracket
        msg = f"lambda_{n} is only available for n = 2"
        if bracket is not None:
            msg += f"; known bracket [{bracket[0]:g}, {bracket[1]:g})"
        super().__init__(msg)


def lambda_constant(n: int) -> float:
    if n == 2:
        return 4.0
    if n >= 3:
        raise UnsupportedDimensionError(n, (4.0, 2.0 * math.e ** (n - 1)))
    raise UnsupportedDimensionError(n, None)


def _complex(x):
    x = np.asarray(x, dtype=float)
    return x[..., 0] + 1j * x[..., 1]


def _real(z):
    return np.stack([z.real, z.imag], axis=-1)


@dataclass(frozen=True)
class MobiusBall:
    """Disk automorphism ``z -> (z - a) / (1 - conj(a) z)``."""

    a: complex = 0j

    def __post_init__(self):
        a = complex(*self.a) if isinstance(self.a, (tuple, list, np.ndarray)) else complex(self.a)
        if abs(a) >= 1:
            raise ValueError("Mobius parameter must lie in the open unit disk")
        object.__setattr__(self, "a", a)

    domain = Domain.ball(2)
    K = 1.0

    def __call__(self, z):
        return (z - self.a) / (1 - np.conj(self.a) * z)


@dataclass(frozen=True)
class AnalyticPowerBall:
    """``z -> z**m`` on the disk."""

    m: int = 2

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError("m must be a positive integer")

    domain = Domain.ball(2)
    K = 1.0

    def __call__(self, z):
        return z ** int(self.m)


@dataclass(frozen=True)
class VerticalStretchHalf:
    """``(x1, x2) -> (x1, K x2)`` on the upper half-plane."""

    K: float = 2.0

    def __post_init__(self):
        if not self.K >= 1:
            raise ValueError("K must be >= 1")

    domain = Domain.half_space(2)

    def __call__(self, z):
        return z.real + 1j * (self.K * z.imag)


@dataclass(frozen=True)
class RadialStretchBall:
    """``z -> z |z|**(1/K - 1)`` on the disk."""

    K: float = 2.0

    def __post_init__(self):
        if not self.K >= 1:
            raise ValueError("K must be >= 1")

    domain = Domain.ball(2)

    def __call__(self, z):
        r = np.abs(z)
        scale = np.where(r > 0, np.power(np.where(r > 0, r, 1.0), 1.0 / self.K - 1.0), 0.0)
        return z * scale


QRMap = MobiusBall | AnalyticPowerBall | VerticalStretchHalf | RadialStretchBall


def alpha(qr: QRMap) -> float:
    return 1.0 / qr.K


def apply(qr: QRMap, x):
    """Image of the planar point(s) ``x`` under ``qr``."""
    dist_to_boundary(qr.domain, x)
    return _real(qr(_complex(x)))


def _pairs(qr: QRMap, n: int, seed: int):
    return sampling.sample_pairs(qr.domain, n, seed, stream=4)


@dataclass
class SchwarzRecord:
    max_ratio_1: float
    min_ratio_1: float
    holds_1: bool
    holds_2: bool
    holds_2_standard: bool
    max_excess_2_standard: float
    pairs: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def schwarz_check(qr: QRMap, pairs: int, seed: int) -> SchwarzRecord:
    """Evaluate both distortion inequalities on sampled pairs.

    (2) is checked as printed. ``holds_2_standard`` additionally reports
    ``rho(f x, f y) <= K (rho(x, y) + log 4)``, the usual form of that bound.
    """
    if pairs < 1:
        raise ValueError("need at least one pair")
    dom = qr.domain
    lam = lambda_constant(2)
    a = alpha(qr)
    x, y = _pairs(qr, pairs, seed)
    fx, fy = apply(qr, x), apply(qr, y)
    th = hyperbolic_th_half(dom, x, y)
    th_img = hyperbolic_th_half(dom, fx, fy)
    rho = hyperbolic_dist(dom, x, y)
    rho_img = hyperbolic_dist(dom, fx, fy)
    rhs1 = lam ** (1 - a) * th ** a
    ok = rhs1 > 0
    ratio = np.where(ok, th_img / np.where(ok, rhs1, 1.0), 0.0)
    rhs2 = qr.K * (np.tanh(rho) + math.log(4.0))
    excess_std = rho_img - qr.K * (rho + math.log(4.0))
    return SchwarzRecord(
        max_ratio_1=float(ratio.max()),
        min_ratio_1=float(ratio[ok].min()) if ok.any() else 0.0,
        holds_1=bool(np.all(th_img <= rhs1 + CHECK_TOL)),
        holds_2=bool(np.all(th_img <= rhs2 + CHECK_TOL)),
        holds_2_standard=bool(np.all(excess_std <= CHECK_TOL)),
        max_excess_2_standard=float(excess_std.max()),
        pairs=pairs,
    )


def isometry_defect(qr: QRMap, pairs: int, seed: int) -> float:
    """max |th(rho(f x, f y)/2) - th(rho(x, y)/2)| over sampled pairs."""
    x, y = _pairs(qr, pairs, seed)
    dom = qr.domain
    return float(np.max(np.abs(hyperbolic_th_half(dom, apply(qr, x), apply(qr, y))
                               - hyperbolic_th_half(dom, x, y))))


def degradation_ratio(qr: QRMap, pairs: int, seed: int) -> float:
    """max of th(rho(f x, f y)/2) / th(rho(x, y)/2)**(1/K) over sampled pairs."""
    x, y = _pairs(qr, pairs, seed)
    dom = qr.domain
    return float(np.max(hyperbolic_th_half(dom, apply(qr, x), apply(qr, y))
                        / hyperbolic_th_half(dom, x, y) ** alpha(qr)))


FAMILIES = ("arith", "log-mean")


def corollary_check(qr: QRMap, c: float, family: str, pairs: int, seed: int,
                    inequality: int | None = None) -> dict:
    """Check the distortion bound for a th-form mean metric under ``qr``.

    The bound is ``m(f x, f y) <= 4**(1 - a) max(1, 1/c) (F m(x, y))**a``
    with ``a = 1/K``. It is numbered 1 (arith) and 2 (log-mean) on the
    half-plane, where ``F = 1 + c``, and 3 and 4 on the disk, where
    ``F = max(2c, 1 + c)``.
    """
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}")
    on_half = qr.domain.kind is DomainKind.HALF_SPACE
    number = (1 if family == "arith" else 2) + (0 if on_half else 2)
    if inequality is not None and inequality != number:
        raise DomainError(f"inequality ({inequality}) does not apply to a map of {qr.domain} "
                          f"with the {family} family; expected ({number})")
    dom = qr.domain
    spec = phi(c) if family == "arith" else phi_log(c)
    factor = (1 + c) if on_half else max(2 * c, 1 + c)
    a = alpha(qr)
    x, y = _pairs(qr, pairs, seed)
    lhs = evaluate(spec, dom, apply(qr, x), apply(qr, y))
    rhs = (lambda_constant(2) ** (1 - a) * max(1.0, 1.0 / c)
           * (factor * evaluate(spec, dom, x, y)) ** a)
    slack = lhs - rhs
    return {
        "inequality": number,
        "c": c,
        "family": family,
        "pairs": pairs,
        "max_slack": float(slack.max()),
        "holds": bool(np.all(slack <= CHECK_TOL)),
    }
