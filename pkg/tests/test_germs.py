"""Germ algebra, fixed points, Koenigs linearization."""

import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foliationlab import Germ, compose, find_fixed_point, koenigs_chart
from foliationlab.errors import NonHyperbolicMultiplier, NonIsolated


def quad_germ(mu, c, radius=1.0):
    return Germ.from_function(
        lambda z: mu * z + c * z * z, lambda z: mu + 2 * c * z, radius, mu
    )


def test_linear_germ_roundtrip():
    g = Germ.linear(0.3 + 0.4j)
    z = 0.7 - 0.2j
    assert abs(g.inverse()(g(z)) - z) < 1e-14
    assert abs(g.iterate(3)(z) - (0.3 + 0.4j) ** 3 * z) < 1e-14


def test_compose_order():
    # compose(f, g)(z) = f(g(z)): apply the rightmost germ first
    f = quad_germ(2.0, 0.0)
    g = Germ.from_function(lambda z: z + 0.1, lambda z: 1.0, 10.0)
    assert abs(compose(f, g)(0.0) - 0.2) < 1e-15
    assert abs(compose(g, f)(0.0) - 0.1) < 1e-15


def test_compose_multiplier_product():
    f, g = quad_germ(0.5, 0.2), quad_germ(3.0, -0.1)
    assert abs(compose(f, g).multiplier - 1.5) < 1e-14


def test_newton_inverse_of_nonlinear_germ():
    g = quad_germ(2.0, 0.3)
    inv = g.inverse()
    for z in (0.1, 0.2 - 0.1j, -0.15j):
        assert abs(inv(g(z)) - z) < 1e-10
    assert abs(inv.multiplier - 0.5) < 1e-14


def test_iterate_negative():
    g = quad_germ(1.7, 0.05)
    z = 0.08 + 0.02j
    w = g.iterate(3)(z)
    back = g.iterate(-3)(w)
    assert abs(back - z) < 1e-9


def test_find_fixed_point_quadratic():
    # mu z + z^2 fixes 0 and z* = 1 - mu; the nontrivial point has
    # multiplier 2 - mu (derivative mu + 2 z* evaluated at z* = 1 - mu)
    mu = 0.5
    g = quad_germ(mu, 1.0, radius=2.0)
    fp = find_fixed_point(g, 0.4)
    assert abs(fp.z_star - (1 - mu)) < 1e-10
    assert abs(fp.multiplier - (2 - mu)) < 1e-10
    assert fp.hyperbolic
    assert fp.basin_radius_est > 0


def test_find_fixed_point_origin_branch():
    g = quad_germ(0.5, 1.0, radius=2.0)
    fp = find_fixed_point(g, 0.01)
    assert abs(fp.z_star) < 1e-10
    assert abs(fp.multiplier - 0.5) < 1e-10


def test_find_fixed_point_parabolic_rejected():
    g = quad_germ(1.0, 0.0, radius=1.0)  # identity: every point fixed
    with pytest.raises(NonIsolated):
        find_fixed_point(g, 0.3)


@given(
    st.floats(0.1, 0.8),
    st.floats(0.0, 2 * np.pi),
    st.floats(-0.3, 0.3),
)
@settings(max_examples=20, deadline=None)
def test_koenigs_conjugacy_residual(mod, arg, c):
    mu = mod * cmath.exp(1j * arg)
    g = quad_germ(mu, c, radius=1.0)
    chart = koenigs_chart(g)
    assert chart.residual < 1e-8
    # phi'(0) = 1 normalization
    z = 1e-6
    assert abs(chart(z) / z - 1.0) < 1e-3


def test_koenigs_expanding_case():
    g = quad_germ(2.5, 0.4, radius=1.0)
    chart = koenigs_chart(g)
    z = 0.05 + 0.02j
    lhs = chart(g(z))
    rhs = 2.5 * chart(z)
    assert abs(lhs - rhs) < 1e-9
    assert abs(chart.pull_back(chart(z)) - z) < 1e-9


def test_koenigs_rejects_neutral():
    g = quad_germ(cmath.exp(0.3j), 0.1)
    with pytest.raises(NonHyperbolicMultiplier):
        koenigs_chart(g)
