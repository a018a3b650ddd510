import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanmetrics import sampling
from meanmetrics.geometry import (
    Domain, DomainError, DomainKind, contains, dist_to_boundary, hyperbolic_dist,
    hyperbolic_th_half, hyperbolic_th_half_planar, reduce_to_plane, triangular_ratio,
)

H2, B2, R2 = Domain.half_space(2), Domain.ball(2), Domain.punctured(2)


def test_parse_and_str():
    assert Domain.parse("half") == H2
    assert Domain.parse("ball3") == Domain.ball(3)
    assert Domain.parse("punctured", 3) == Domain.punctured(3)
    assert str(H2) == "H^2" and str(B2) == "B^2" and str(R2) == "R^2\\{0}"
    with pytest.raises(ValueError):
        Domain.parse("torus")
    with pytest.raises(ValueError):
        Domain(DomainKind.UNIT_BALL, 1)


def test_boundary_distance():
    assert dist_to_boundary(H2, (3.0, 0.25)) == 0.25
    assert dist_to_boundary(B2, (0.6, 0.0)) == pytest.approx(0.4)
    assert dist_to_boundary(R2, (3.0, 4.0)) == 5.0
    assert np.allclose(dist_to_boundary(B2, [[0.0, 0.0], [0.0, 0.5]]), [1.0, 0.5])


@pytest.mark.parametrize("domain,point", [
    (H2, (0.0, 0.0)), (H2, (1.0, -1.0)), (B2, (1.0, 0.0)), (B2, (0.8, 0.8)), (R2, (0.0, 0.0)),
])
def test_outside_points_rejected(domain, point):
    assert not contains(domain, point)
    with pytest.raises(DomainError):
        dist_to_boundary(domain, point)


def test_guard_and_shape_errors():
    with pytest.raises(DomainError):
        dist_to_boundary(H2, (0.0, 1e-301))
    with pytest.raises(DomainError):
        dist_to_boundary(H2, (0.0, 1.0, 2.0))
    with pytest.raises(DomainError):
        dist_to_boundary(B2, (math.nan, 0.0))


def test_hyperbolic_values():
    # rho((0,1), (0,e)) = 1 in H^2; rho(0, r e1) = 2 artanh r in B^2.
    assert hyperbolic_dist(H2, (0.0, 1.0), (0.0, math.e)) == pytest.approx(1.0, rel=1e-15)
    assert hyperbolic_dist(B2, (0.0, 0.0), (0.5, 0.0)) == pytest.approx(2 * math.atanh(0.5), rel=1e-15)
    assert hyperbolic_th_half(B2, (0.0, 0.0), (0.5, 0.0)) == pytest.approx(0.5, rel=1e-15)
    with pytest.raises(ValueError):
        hyperbolic_dist(R2, (1.0, 0.0), (0.0, 1.0))


@pytest.mark.parametrize("domain", [H2, B2])
def test_dual_formulas_agree(domain):
    x, y = sampling.sample_pairs(domain, 20000, seed=3)
    a = hyperbolic_th_half(domain, x, y)
    b = hyperbolic_th_half_planar(domain, x, y)
    assert np.max(np.abs(a - b) / np.maximum(b, 1e-300)) < 1e-12


def test_far_points_keep_precision():
    rho = hyperbolic_dist(H2, (0.0, 1e-8), (0.0, 1.0))
    assert rho == pytest.approx(math.log(1e8), rel=1e-14)


def test_triangular_ratio_values():
    assert triangular_ratio(R2, (1.0, 0.0), (-1.0, 0.0)) == pytest.approx(1.0)
    assert triangular_ratio(R2, (1.0, 0.0), (2.0, 0.0)) == pytest.approx(1.0 / 3.0)
    # H^2: |x - y| / |x - ybar|.
    assert triangular_ratio(H2, (0.0, 1.0), (0.0, 3.0)) == pytest.approx(0.5)
    # Symmetric about the origin: the shortest broken path touches (1, 0).
    assert triangular_ratio(B2, (0.5, 0.0), (-0.5, 0.0)) == pytest.approx(0.5, rel=1e-12)
    # Same ray from the origin: the path touches the circle at the nearest point.
    assert triangular_ratio(B2, (0.2, 0.0), (0.6, 0.0)) == pytest.approx(0.4 / 1.2, rel=1e-10)
    assert triangular_ratio(B2, (0.3, 0.1), (0.3, 0.1)) == 0.0


def test_triangular_ratio_ball_matches_brute_force(rng):
    x, y = sampling.sample_pairs(B2, 200, seed=9)
    def path(theta, xi, yi):
        z = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        return np.linalg.norm(z - xi, axis=1) + np.linalg.norm(z - yi, axis=1)

    coarse = np.linspace(0, 2 * np.pi, 100001)
    step = coarse[1]
    for xi, yi in zip(x[:20], y[:20]):
        best = coarse[np.argmin(path(coarse, xi, yi))]
        fine = np.linspace(best - step, best + step, 200001)
        den = np.min(path(fine, xi, yi))
        assert triangular_ratio(B2, xi, yi) == pytest.approx(np.linalg.norm(xi - yi) / den, rel=1e-9)


@pytest.mark.parametrize("domain", [H2, B2, R2], ids=str)
def test_triangular_ratio_is_a_metric(domain):
    n = 100_000
    x, y, z = sampling.sample_tuple_block(domain, seed=42, block=0, size=n, arity=3)
    sxy = triangular_ratio(domain, x, y)
    sxz = triangular_ratio(domain, x, z)
    szy = triangular_ratio(domain, z, y)
    assert np.min(sxz + szy - sxy) >= -1e-9


@pytest.mark.parametrize("domain", [Domain.half_space(3), Domain.ball(3), Domain.ball(4)], ids=str)
def test_reduce_to_plane_preserves_invariants(domain):
    x, y = sampling.sample_pairs(domain, 100_000, seed=5)
    xp, yp = reduce_to_plane(domain, x, y)
    plane = Domain(domain.kind, 2)
    rel = lambda a, b: np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300))
    assert rel(np.linalg.norm(xp - yp, axis=1), np.linalg.norm(x - y, axis=1)) < 1e-12
    assert rel(dist_to_boundary(plane, xp), dist_to_boundary(domain, x)) < 1e-12
    assert rel(dist_to_boundary(plane, yp), dist_to_boundary(domain, y)) < 1e-12


coord = st.floats(min_value=-5, max_value=5, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(x1=coord, y1=coord, x2=st.floats(1e-3, 5), y2=st.floats(1e-3, 5))
def test_hyperbolic_metric_symmetric_and_positive(x1, y1, x2, y2):
    x, y = (x1, x2), (y1, y2)
    a = hyperbolic_dist(H2, x, y)
    assert a >= 0
    assert a == pytest.approx(hyperbolic_dist(H2, y, x), rel=1e-12, abs=1e-300)
    t = hyperbolic_th_half(H2, x, y)
    assert 0 <= t < 1
    assert t == pytest.approx(math.tanh(a / 2), rel=1e-12, abs=1e-15)
