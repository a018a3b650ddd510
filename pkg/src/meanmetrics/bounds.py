"""Comparison of the th-form mean metrics with ``th(rho/2)``.

Both the metrics and ``th(rho/2)`` depend only on ``|x - y|``, ``d(x)`` and
``d(y)``, so every ratio reduces to a planar configuration:

* half-plane: ``y = i``, ``x = k + h i`` with ``k >= 0``, ``0 < h <= 1``;
* disk: ``x = r1`` on the real axis, ``y = r2 e^{i theta}`` with
  ``0 <= r2 <= r1 < 1`` and ``t = cos(theta)``.

The quotient functions below are those ratios in closed form; their values on
the diagonal ``x = y`` are the (direction independent) limits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import sampling
from .geometry import Domain, DomainKind, hyperbolic_th_half
from .means import LOGARITHMIC, log_mean
from .metrics import MetricForm, MetricSpec, evaluate, phi, phi_log

__all__ = [
    "quotient_H_arith",
    "quotient_B_arith",
    "quotient_H_log",
    "quotient_B_log",
    "QUOTIENTS",
    "find_extrema",
    "verify_theorem_bounds",
    "comparison_check",
    "envelope_check",
    "BoundReport",
    "THEOREMS",
]

BOX_MARGIN = 1e-6
K_MAX = 1e6
GOLDEN_TOL = 1e-10
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _check_c(c):
    if not (c > 0 and math.isfinite(c)):
        raise ValueError(f"c must be positive and finite, got {c!r}")


def _half_args(c, k, h, h_max=1.0):
    _check_c(c)
    k = np.asarray(k, dtype=float)
    h = np.asarray(h, dtype=float)
    if np.any(k < 0) or not np.all(np.isfinite(k)):
        raise ValueError("k must be finite and >= 0")
    if np.any(h <= 0) or np.any(h > h_max):
        raise ValueError(f"h must lie in (0, {h_max}]")
    return k, h


def _disk_args(c, r1, r2, t):
    _check_c(c)
    r1, r2, t = (np.asarray(v, dtype=float) for v in (r1, r2, t))
    if np.any(r1 < 0) or np.any(r1 >= 1):
        raise ValueError("r1 must lie in [0, 1)")
    if np.any(r2 < 0) or np.any(r2 > r1):
        raise ValueError("r2 must lie in [0, r1]")
    if np.any(np.abs(t) > 1):
        raise ValueError("t must lie in [-1, 1]")
    return r1, r2, t


def _ret(v):
    return float(v) if np.ndim(v) == 0 else v


def _disk_lengths(r1, r2, t):
    # |1 - x conj(y)| and |x - y|, arranged to avoid cancellation near t = 1.
    p = r1 * r2
    gap = 2.0 * p * (1.0 - t)
    return np.sqrt((1.0 - p) ** 2 + gap), np.sqrt((r1 - r2) ** 2 + gap)


def quotient_H_arith(c, k, h):
    """Arithmetic th-form over ``th(rho/2)`` at ``x = k + h i``, ``y = i``."""
    k, h = _half_args(c, k, h)
    return _ret(np.hypot(k, h + 1) / (np.hypot(k, h - 1) + c * (h + 1)))


def quotient_H_log(c, k, h):
    """Logarithmic-mean th-form over ``th(rho/2)`` at ``x = k + h i``, ``y = i``."""
    k, h = _half_args(c, k, h)
    return _ret(np.hypot(k, h + 1) / (np.hypot(k, h - 1) + 2 * c * log_mean(h, np.ones_like(h))))


def quotient_B_arith(c, r1, r2, t):
    """Arithmetic th-form over ``th(rho/2)`` at ``x = r1``, ``y = r2 e^{i theta}``."""
    r1, r2, t = _disk_args(c, r1, r2, t)
    num, dist = _disk_lengths(r1, r2, t)
    return _ret(num / (dist + c * (2.0 - r1 - r2)))


def quotient_B_log(c, r1, r2, t):
    """Logarithmic-mean th-form over ``th(rho/2)`` at ``x = r1``, ``y = r2 e^{i theta}``."""
    r1, r2, t = _disk_args(c, r1, r2, t)
    num, dist = _disk_lengths(r1, r2, t)
    return _ret(num / (dist + 2 * c * log_mean(1.0 - r1, 1.0 - r2)))


def planar_points(quotient: str, params: dict):
    """Points ``(x, y)`` realising a quotient parameter record."""
    if quotient.startswith("H"):
        return np.array([params["k"], params["h"]]), np.array([0.0, 1.0])
    t = params["t"]
    return (np.array([params["r1"], 0.0]),
            params["r2"] * np.array([t, math.sqrt(max(0.0, 1.0 - t * t))]))


@dataclass(frozen=True)
class _Axis:
    name: str
    lo: float
    hi: float
    log: bool = False
    extra: tuple = ()

    def grid(self, resolution: int, box=None) -> np.ndarray:
        lo, hi = (self.lo, self.hi) if box is None else box
        if lo == hi:
            return np.array([float(lo)])
        if self.log:
            pts = np.geomspace(lo, hi, resolution)
        else:
            pts = np.linspace(lo, hi, resolution)
        if box is None and self.extra:
            pts = np.concatenate([np.asarray(self.extra, dtype=float), pts])
        return pts


@dataclass(frozen=True)
class _Quotient:
    name: str
    func: object
    axes: tuple
    domain: DomainKind
    mean: str

    def params(self, coords) -> dict:
        vals = dict(zip((a.name for a in self.axes), coords))
        if "s" in vals:
            vals["r2"] = vals.pop("s") * vals["r1"]
        return {k: float(v) for k, v in vals.items()}

    def __call__(self, c, *coords):
        if len(self.axes) == 3:
            r1, s, t = coords
            return self.func(c, r1, np.clip(s, 0.0, 1.0) * r1, t)
        return self.func(c, *coords)


_H_AXES = (_Axis("k", BOX_MARGIN, K_MAX, log=True, extra=(0.0,)),
           _Axis("h", BOX_MARGIN, 1.0 - BOX_MARGIN))
# r2 = s * r1 keeps the disk parameter box rectangular.
_B_AXES = (_Axis("r1", 0.0, 1.0 - BOX_MARGIN), _Axis("s", 0.0, 1.0), _Axis("t", -1.0, 1.0))

QUOTIENTS = {
    "H_arith": _Quotient("H_arith", quotient_H_arith, _H_AXES, DomainKind.HALF_SPACE, "arithmetic"),
    "H_log": _Quotient("H_log", quotient_H_log, _H_AXES, DomainKind.HALF_SPACE, "logarithmic"),
    "B_arith": _Quotient("B_arith", quotient_B_arith, _B_AXES, DomainKind.UNIT_BALL, "arithmetic"),
    "B_log": _Quotient("B_log", quotient_B_log, _B_AXES, DomainKind.UNIT_BALL, "logarithmic"),
}


def _grid_values(q: _Quotient, c: float, grids):
    if len(grids) == 2:
        a, b = np.meshgrid(*grids, indexing="ij")
        return q(c, a, b)
    g0, g1, g2 = grids
    out = np.empty((len(g0), len(g1), len(g2)))
    b, t = np.meshgrid(g1, g2, indexing="ij")
    for i, r1 in enumerate(g0):
        out[i] = q(c, np.full_like(b, r1), b, t)
    return out


def _golden(f, a, b, tol):
    """Minimise ``f`` on ``[a, b]``; returns (argmin, value) incl. the end points."""
    best_x, best_v = (a, f(a)) if f(a) <= f(b) else (b, f(b))
    c1, c2 = b - _INVPHI * (b - a), a + _INVPHI * (b - a)
    f1, f2 = f(c1), f(c2)
    while b - a > tol * max(1.0, abs(a), abs(b)):
        if f1 < f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - _INVPHI * (b - a)
            f1 = f(c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + _INVPHI * (b - a)
            f2 = f(c2)
    x = 0.5 * (a + b)
    v = f(x)
    for cand, val in ((c1, f1), (c2, f2), (best_x, best_v)):
        if val < v:
            x, v = cand, val
    return x, v


def _refine(q, c, grids, idx, sign, bounds, sweeps=6):
    x = [float(g[i]) for g, i in zip(grids, idx)]
    brackets = []
    for g, i, (lo, hi) in zip(grids, idx, bounds):
        brackets.append((float(g[max(i - 1, 0)]), float(g[min(i + 1, len(g) - 1)])))
    value = sign * float(q(c, *x))
    for _ in range(sweeps):
        for j, (a, b) in enumerate(brackets):
            if a == b:
                continue

            def f(v, j=j):
                pt = list(x)
                pt[j] = v
                return sign * float(q(c, *pt))

            xj, vj = _golden(f, a, b, GOLDEN_TOL)
            if vj <= value:
                x[j], value = xj, vj
    return x, sign * value


def find_extrema(quotient, c: float, resolution: int = 1024, refine: bool = True,
                 box: dict | None = None, candidates: int = 4) -> dict:
    """Infimum and supremum of a quotient over its clamped parameter box.

    A grid with ``resolution`` points per axis (log-spaced ``k`` plus
    ``k = 0``) is followed, when ``refine``, by coordinate-wise golden-section
    descent and ascent from the best ``candidates`` cells of each kind.
    ``box`` overrides axis ranges, e.g. ``{"k": (1, 1), "h": (0.5, 0.5)}``.
    """
    q = QUOTIENTS[quotient] if isinstance(quotient, str) else quotient
    if resolution < 1:
        raise ValueError("resolution must be positive")
    box = box or {}
    grids = [ax.grid(resolution, box.get(ax.name)) for ax in q.axes]
    bounds = [box.get(ax.name, (ax.lo, ax.hi)) for ax in q.axes]
    vals = _grid_values(q, c, grids)
    flat = vals.ravel()
    out = {}
    for key, sign in (("inf", 1.0), ("sup", -1.0)):
        order = np.argsort(sign * flat, kind="stable")[:candidates]
        best_x = [float(g[i]) for g, i in zip(grids, np.unravel_index(order[0], vals.shape))]
        best_v = float(flat[order[0]])
        if refine:
            for cell in order:
                idx = np.unravel_index(cell, vals.shape)
                x, v = _refine(q, c, grids, idx, sign, bounds)
                if sign * v < sign * best_v:
                    best_x, best_v = x, v
        out[key] = best_v
        out["arg_" + key] = q.params(best_x)
    return out


# ---------------------------------------------------------------- theorem checks

THEOREMS = {
    # quotient, lower constant, whether the lower constant is claimed sharp
    "T5.2": ("H_arith", lambda c: 1 / (1 + c), True),
    "T5.3": ("B_arith", lambda c: min(1 / (2 * c), 1 / (1 + c)), True),
    "T5.5": ("H_log", lambda c: 1 / (1 + c), False),
    "T5.6": ("B_log", lambda c: min(1 / (2 * c), 1 / (1 + c)), False),
}

DEFAULT_RESOLUTION = {2: 1024, 3: 128}


def upper_constant(c: float) -> float:
    return max(1.0, 1.0 / c)


@dataclass
class BoundReport:
    theorem: str
    c: float
    inf_found: float
    sup_found: float
    inf_expected: float
    sup_expected: float
    arg_inf: dict
    arg_sup: dict
    tol: float
    lower_sharp_asserted: bool
    tolerance_met: bool = field(init=False)

    def __post_init__(self):
        ok = (self.inf_found >= self.inf_expected - self.tol
              and self.sup_found <= self.sup_expected + self.tol
              and abs(self.sup_found - self.sup_expected) <= self.tol)
        if self.lower_sharp_asserted:
            ok = ok and abs(self.inf_found - self.inf_expected) <= self.tol
        self.tolerance_met = bool(ok)

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "c": self.c,
            "inf_found": self.inf_found,
            "sup_found": self.sup_found,
            "inf_expected": self.inf_expected,
            "sup_expected": self.sup_expected,
            "arg_inf": self.arg_inf,
            "arg_sup": self.arg_sup,
            "tol": self.tol,
            "lower_sharp_asserted": self.lower_sharp_asserted,
            "tolerance_met": self.tolerance_met,
        }


def verify_theorem_bounds(theorem: str, c: float, tol: float = 5e-3,
                          resolution: int | None = None, refine: bool = True) -> BoundReport:
    """Run :func:`find_extrema` for a comparison theorem and test its constants."""
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; expected one of {tuple(THEOREMS)}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    name, lower, sharp = THEOREMS[theorem]
    q = QUOTIENTS[name]
    res = resolution or DEFAULT_RESOLUTION[len(q.axes)]
    ext = find_extrema(q, c, res, refine)
    return BoundReport(theorem=theorem, c=c, inf_found=ext["inf"], sup_found=ext["sup"],
                       inf_expected=lower(c), sup_expected=upper_constant(c),
                       arg_inf=ext["arg_inf"], arg_sup=ext["arg_sup"], tol=tol,
                       lower_sharp_asserted=sharp)


def theorem_spec(theorem: str, c: float) -> tuple[MetricSpec, Domain]:
    q = QUOTIENTS[THEOREMS[theorem][0]]
    spec = phi(c) if q.mean == "arithmetic" else phi_log(c)
    return spec, Domain(q.domain, 2)


def envelope_check(theorem: str, c: float, n: int, seed: int, tol: float = 1e-9) -> dict:
    """Count sampled pairs breaking ``lower th(rho/2) <= metric <= upper th(rho/2)``."""
    spec, dom = theorem_spec(theorem, c)
    lower = THEOREMS[theorem][1](c)
    upper = upper_constant(c)

    def run(block, size):
        x, y = sampling.sample_tuple_block(dom, seed, block, size, 2, stream=2)
        m = evaluate(spec, dom, x, y)
        th = hyperbolic_th_half(dom, x, y)
        return (int(np.count_nonzero(m < lower * th - tol)),
                int(np.count_nonzero(m > upper * th + tol)),
                float(np.min(m - lower * th)), float(np.min(upper * th - m)))

    parts = sampling.map_blocks(run, n)
    return {
        "theorem": theorem, "c": c, "pairs": n, "seed": seed,
        "lower_violations": sum(p[0] for p in parts),
        "upper_violations": sum(p[1] for p in parts),
        "lower_slack_min": min(p[2] for p in parts),
        "upper_slack_min": min(p[3] for p in parts),
    }


def comparison_check(domain: Domain, c: float, n: int, seed: int, tol: float = 1e-12) -> int:
    """Pairs where the logarithmic-mean th form falls below the arithmetic one."""
    if n < 1:
        raise ValueError("need at least one pair")
    log_spec = MetricSpec(LOGARITHMIC, c, MetricForm.TH)
    arith_spec = phi(c)

    def run(block, size):
        x, y = sampling.sample_tuple_block(domain, seed, block, size, 2, stream=3)
        return int(np.count_nonzero(evaluate(log_spec, domain, x, y)
                                    < evaluate(arith_spec, domain, x, y) - tol))

    return sum(sampling.map_blocks(run, n))


def stationary_k(c: float, h):
    """Minimising ``k`` of the half-plane arithmetic quotient for fixed ``h``.

    Only real for ``h >= (sqrt(4 + c^2) - 2) / c``.
    """
    h = np.asarray(h, dtype=float)
    return _ret(np.sqrt(16 * h**2 / (c**2 * (h + 1) ** 2) - (h - 1) ** 2))


def stationary_value(c: float, h):
    """Quotient value at :func:`stationary_k`."""
    h = np.asarray(h, dtype=float)
    return _ret(2 * np.sqrt(h / (4 * h + c**2 * (h + 1) ** 2)))


def quotient_grid(quotient: str, c: float, resolution: int):
    """Rows ``(params..., value)`` of the raw grid, for external plotting."""
    q = QUOTIENTS[quotient]
    grids = [ax.grid(resolution) for ax in q.axes]
    vals = _grid_values(q, c, grids)
    for idx in np.ndindex(vals.shape):
        params = q.params([g[i] for g, i in zip(grids, idx)])
        yield {**params, "value": float(vals[idx])}
