"""Points, the three model domains and the hyperbolic-type distances on them.

Points are plain float arrays. A single point has shape ``(n,)`` and a batch
has shape ``(N, n)``; every function here broadcasts over the leading axes.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainKind",
    "Domain",
    "DomainError",
    "as_points",
    "contains",
    "dist_to_boundary",
    "hyperbolic_th_half",
    "hyperbolic_th_half_planar",
    "hyperbolic_dist",
    "triangular_ratio",
    "reduce_to_plane",
    "row_norm",
]

# Boundary distances below this are rejected to keep quotients finite.
BOUNDARY_GUARD = 1e-300

_BALL_SCAN = 1024
_GOLDEN_TOL = 1e-10
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class DomainError(ValueError):
    """A point lies outside its domain or has the wrong dimension."""


class DomainKind(str, enum.Enum):
    HALF_SPACE = "half-space"
    UNIT_BALL = "ball"
    PUNCTURED = "punctured"


_ALIASES = {
    "half": DomainKind.HALF_SPACE,
    "half-space": DomainKind.HALF_SPACE,
    "halfspace": DomainKind.HALF_SPACE,
    "h": DomainKind.HALF_SPACE,
    "ball": DomainKind.UNIT_BALL,
    "b": DomainKind.UNIT_BALL,
    "punctured": DomainKind.PUNCTURED,
    "r0": DomainKind.PUNCTURED,
}


@dataclass(frozen=True)
class Domain:
    kind: DomainKind
    dim: int = 2

    def __post_init__(self):
        object.__setattr__(self, "kind", DomainKind(self.kind))
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"domain dimension must be an integer >= 2, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))

    @classmethod
    def half_space(cls, n: int = 2) -> "Domain":
        return cls(DomainKind.HALF_SPACE, n)

    @classmethod
    def ball(cls, n: int = 2) -> "Domain":
        return cls(DomainKind.UNIT_BALL, n)

    @classmethod
    def punctured(cls, n: int = 2) -> "Domain":
        return cls(DomainKind.PUNCTURED, n)

    @classmethod
    def parse(cls, text: str, dim: int = 2) -> "Domain":
        """Parse ``"ball"``, ``"half"``, ``"punctured"`` (optionally ``"ball3"``)."""
        key = text.strip().lower()
        digits = key[len(key.rstrip("0123456789")):]
        if digits and key[: -len(digits)] in _ALIASES:
            key, dim = key[: -len(digits)], int(digits)
        try:
            return cls(_ALIASES[key], dim)
        except KeyError:
            raise ValueError(f"unknown domain {text!r}") from None

    @property
    def is_hyperbolic(self) -> bool:
        return self.kind is not DomainKind.PUNCTURED

    def __str__(self) -> str:
        n = self.dim
        return {
            DomainKind.HALF_SPACE: f"H^{n}",
            DomainKind.UNIT_BALL: f"B^{n}",
            DomainKind.PUNCTURED: f"R^{n}\\{{0}}",
        }[self.kind]


def as_points(x, domain: Domain | None = None) -> np.ndarray:
    """Convert to a float array of points, checking finiteness and dimension."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] < 2:
        raise DomainError(f"points need at least 2 coordinates, got shape {arr.shape}")
    if domain is not None and arr.shape[-1] != domain.dim:
        raise DomainError(f"dimension mismatch: {arr.shape[-1]}-dimensional point in {domain}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("point coordinates must be finite")
    return arr


def _ret(out):
    return out.item() if np.ndim(out) == 0 else out


def row_norm(x: np.ndarray) -> np.ndarray:
    """Euclidean norm over the last axis, summed left to right.

    Matches the compiled kernels bit for bit, unlike ``np.linalg.norm`` whose
    rounding depends on array layout.
    """
    s = x[..., 0] * x[..., 0]
    for j in range(1, x.shape[-1]):
        s = s + x[..., j] * x[..., j]
    return np.sqrt(s)


def _raw_boundary_distance(domain: Domain, x: np.ndarray) -> np.ndarray:
    if domain.kind is DomainKind.HALF_SPACE:
        return x[..., -1]
    r = row_norm(x)
    if domain.kind is DomainKind.UNIT_BALL:
        return 1.0 - r
    return r


def contains(domain: Domain, x):
    """True where ``x`` lies in the open domain."""
    x = as_points(x, domain)
    return _ret(_raw_boundary_distance(domain, x) > 0)


def dist_to_boundary(domain: Domain, x):
    """Euclidean distance from ``x`` to the boundary of ``domain``."""
    x = as_points(x, domain)
    d = _raw_boundary_distance(domain, x)
    if not np.all(d > 0):
        raise DomainError(f"point outside {domain}")
    if np.any(d < BOUNDARY_GUARD):
        raise DomainError(f"point too close to the boundary of {domain}")
    return _ret(d)


def _pair(domain: Domain, x, y):
    x = as_points(x, domain)
    y = as_points(y, domain)
    return x, y, dist_to_boundary(domain, x), dist_to_boundary(domain, y)


def _hyperbolic_only(domain: Domain):
    if not domain.is_hyperbolic:
        raise ValueError(f"the hyperbolic metric is defined here only on H^n and B^n, not {domain}")


def _sinh_half_parts(domain: Domain, x, y):
    # sh(rho/2) = dist / sqrt(w): w = 4 x_n y_n (half-space), (1-|x|^2)(1-|y|^2) (ball).
    x, y, dx, dy = _pair(domain, x, y)
    dist = np.linalg.norm(x - y, axis=-1)
    if domain.kind is DomainKind.HALF_SPACE:
        w = 4.0 * dx * dy
    else:
        w = (dx * (2.0 - dx)) * (dy * (2.0 - dy))
    return dist, w


def hyperbolic_th_half(domain: Domain, x, y):
    """``th(rho(x, y)/2)`` from the ch / sh^2 formulas, valid in any dimension."""
    _hyperbolic_only(domain)
    dist, w = _sinh_half_parts(domain, x, y)
    # th^2(rho/2) = A/(A+2) on H^n, S/(1+S) on B^n; both equal dist^2/(dist^2 + w).
    return _ret(dist / np.sqrt(dist * dist + w))


def hyperbolic_th_half_planar(domain: Domain, x, y):
    """``th(rho/2)`` through the complex-variable formulas of the plane.

    ``|x - y| / |x - conj(y)|`` on the upper half-plane and
    ``|x - y| / |1 - x conj(y)|`` on the disk. Only for ``dim == 2``.
    """
    _hyperbolic_only(domain)
    if domain.dim != 2:
        raise DomainError("the complex-variable formulas need dim == 2")
    x, y, _, _ = _pair(domain, x, y)
    zx = x[..., 0] + 1j * x[..., 1]
    zy = y[..., 0] + 1j * y[..., 1]
    if domain.kind is DomainKind.HALF_SPACE:
        den = np.abs(zx - np.conj(zy))
    else:
        den = np.abs(1.0 - zx * np.conj(zy))
    return _ret(np.abs(zx - zy) / den)


def hyperbolic_dist(domain: Domain, x, y):
    r"""Hyperbolic distance ``rho(x, y)`` on ``H^n`` or ``B^n``.

    Computed as ``2 asinh(sh(rho/2))``, which equals ``2 artanh(th(rho/2))``
    but keeps full precision for far-apart points.
    """
    _hyperbolic_only(domain)
    dist, w = _sinh_half_parts(domain, x, y)
    return _ret(2.0 * np.arcsinh(dist / np.sqrt(w)))


def _ball_path_infimum(x2: np.ndarray, y2: np.ndarray) -> np.ndarray:
    """min over |z| = 1 of |x - z| + |z - y| for planar batches ``(N, 2)``."""
    n = x2.shape[0]
    out = np.empty(n)
    theta = np.linspace(-np.pi, np.pi, _BALL_SCAN, endpoint=False)
    cz, sz = np.cos(theta), np.sin(theta)
    step = 2.0 * np.pi / _BALL_SCAN
    chunk = max(1, 2**21 // _BALL_SCAN)
    for lo in range(0, n, chunk):
        xs = x2[lo:lo + chunk, :, None]
        ys = y2[lo:lo + chunk, :, None]

        def path(t):
            zc, zs = np.cos(t), np.sin(t)
            return (np.hypot(xs[:, 0] - zc, xs[:, 1] - zs)
                    + np.hypot(ys[:, 0] - zc, ys[:, 1] - zs))

        vals = (np.hypot(xs[:, 0] - cz, xs[:, 1] - sz)
                + np.hypot(ys[:, 0] - cz, ys[:, 1] - sz))
        best = np.argmin(vals, axis=1)
        a = (theta[best] - step)[:, None]
        b = (theta[best] + step)[:, None]
        while True:
            width = b - a
            if width.max() <= _GOLDEN_TOL:
                break
            c1 = b - _INVPHI * width
            c2 = a + _INVPHI * width
            left = path(c1) < path(c2)
            b = np.where(left, c2, b)
            a = np.where(left, a, c1)
        mid = 0.5 * (a + b)
        out[lo:lo + chunk] = np.minimum(path(mid)[:, 0], vals.min(axis=1))
    return out


def triangular_ratio(domain: Domain, x, y):
    """Triangular ratio metric ``|x - y| / inf_{z in boundary}(|x - z| + |z - y|)``."""
    x, y, dx, dy = _pair(domain, x, y)
    x, y = np.broadcast_arrays(x, y)
    dist = np.linalg.norm(x - y, axis=-1)
    if domain.kind is DomainKind.PUNCTURED:
        den = np.linalg.norm(x, axis=-1) + np.linalg.norm(y, axis=-1)
    elif domain.kind is DomainKind.HALF_SPACE:
        ybar = y.copy()
        ybar[..., -1] = -ybar[..., -1]
        den = np.linalg.norm(x - ybar, axis=-1)
    else:
        xp, yp = reduce_to_plane(domain, x, y)
        shape = dist.shape
        den = _ball_path_infimum(np.reshape(xp, (-1, 2)), np.reshape(yp, (-1, 2))).reshape(shape)
    out = np.where(dist == 0, 0.0, dist / np.where(dist == 0, 1.0, den))
    return _ret(np.minimum(out, 1.0))


def reduce_to_plane(domain: Domain, x, y):
    """Planar pair with the same ``|x - y|``, ``d(x)`` and ``d(y)``.

    For the half-space the plane contains ``x, y`` and is perpendicular to the
    boundary; for the ball it contains ``x, y`` and the origin. The planar
    half-space pair keeps ``x'`` on the second axis. In the ball the point
    nearer the sphere lands on the positive first axis and the other in the
    closed upper half-plane; boundary distances come out bit-identical
    whenever the ulp search in ``_match_norm`` succeeds.
    """
    _hyperbolic_only(domain)
    x, y, _, _ = _pair(domain, x, y)
    x, y = np.broadcast_arrays(x, y)
    if domain.kind is DomainKind.HALF_SPACE:
        horiz = np.linalg.norm(x[..., :-1] - y[..., :-1], axis=-1)
        xp = np.stack([np.zeros_like(horiz), x[..., -1]], axis=-1)
        yp = np.stack([horiz, y[..., -1]], axis=-1)
        return xp, yp
    # The point nearer the sphere goes on the first axis, where its norm, and
    # hence d, is reproduced exactly; the other is placed by the angle between them.
    swap = row_norm(y) > row_norm(x)
    near = np.where(swap[..., None], y, x)
    far = np.where(swap[..., None], x, y)
    rn = row_norm(near)
    safe = np.where(rn > 0, rn, 1.0)[..., None]
    unit = np.where(rn[..., None] > 0, near / safe, 0.0)
    along = np.where(rn > 0, np.sum(far * unit, axis=-1), row_norm(far))
    perp = np.where(rn > 0, row_norm(far - along[..., None] * unit), 0.0)
    near_p = np.stack([rn, np.zeros_like(rn)], axis=-1)
    far_p = _match_norm(np.stack([along, perp], axis=-1), row_norm(far))
    xp = np.where(swap[..., None], far_p, near_p)
    yp = np.where(swap[..., None], near_p, far_p)
    return xp, yp


def _match_norm(v: np.ndarray, target: np.ndarray, reach: int = 8) -> np.ndarray:
    # Near the sphere 1 - |y| is tiny, so a one-ulp drift in |y'| would be a
    # large relative error in d(y'). Rescale, then search nearby ulp offsets
    # of both coordinates for one whose norm rounds exactly to |y|.
    r = row_norm(v)
    v = np.where((r > 0)[..., None], v * (target / np.where(r > 0, r, 1.0))[..., None], v)
    off = row_norm(v) != target
    if not off.any():
        return v
    w = v[off]
    t = target[off]
    best = w.copy()
    cost = np.full(t.shape, np.inf)
    ulp = np.spacing(np.abs(w))
    steps = range(-reach, reach + 1)
    for i in steps:
        for j in steps:
            cand = w + np.array([i, j]) * ulp
            hit = (row_norm(cand) == t) & (abs(i) + abs(j) < cost)
            best[hit] = cand[hit]
            cost[hit] = abs(i) + abs(j)
    v = v.copy()
    v[off] = best
    return v
