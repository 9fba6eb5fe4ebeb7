"""Chart at infinity, spectral relations, classification, perturbations."""

import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foliationlab import (
    PolyFoliation,
    classify,
    extend_to_infinity,
    finite_singularities,
    infinite_singularities,
    is_symmetric,
    perturb_symmetric,
)
from foliationlab.errors import MultipleRoot, NotSingularPoint, NotSymmetric

from conftest import random_foliation


def test_h_polynomial_example():
    # P = x^2, Q = y^2: Pt = u^0? no -- Pt(0,v) = coeff of (x^2) -> 1,
    # Qt(0,v) = v^2, so h(v) = v - v^2.
    F = PolyFoliation({(2, 0): 1.0}, {(0, 2): 1.0})
    data = extend_to_infinity(F)
    assert not data.dicritical
    np.testing.assert_allclose(data.h_coeffs, [0.0, 1.0, -1.0])
    roots = sorted((s.a for s in data.sing_points), key=abs)
    np.testing.assert_allclose(roots, [0.0, 1.0], atol=1e-12)


def test_dicritical_radial_field():
    # the radial field x d/dx + y d/dy has h == 0: every direction is a leaf
    F = PolyFoliation({(1, 0): 1.0}, {(0, 1): 1.0})
    data = extend_to_infinity(F)
    assert data.dicritical
    with pytest.raises(ValueError):
        infinite_singularities(data)


def test_spectral_relations_random(rng):
    # sum of characteristic numbers 1, product of multipliers 1 (index theorem
    # on the infinite line); holds for every non-dicritical generic foliation
    for n in (2, 3):
        for _ in range(10):
            F = random_foliation(rng, n)
            data = extend_to_infinity(F)
            if not classify(F).in_An_prime:
                continue
            assert abs(data.lambda_sum() - 1.0) < 1e-9
            assert abs(data.mu_product() - 1.0) < 1e-9


def test_root_order_deterministic(rng):
    F = random_foliation(rng, 3)
    ref = [s.a for s in extend_to_infinity(F).sing_points]
    for _ in range(3):
        again = [s.a for s in extend_to_infinity(F).sing_points]
        np.testing.assert_array_equal(ref, again)
    # lexicographic by (re, im)
    keys = [(round(a.real, 9), round(a.imag, 9)) for a in ref]
    assert keys == sorted(keys)


def test_multiple_root_detected():
    # P = xy, Q = y^2 - x^2 + x y? choose h with a double root:
    # h(v) = v*Pt(0,v) - Qt(0,v); with P = x y (Pt(0,v) = v) and
    # Q = -x^2 (Qt(0,v) = -1): h = v^2 + 1 has simple roots, so instead
    # take Q = -x^2 + 2 x y giving h = v^2 - 2 v + 1 = (v-1)^2.
    F = PolyFoliation({(1, 1): 1.0}, {(2, 0): -1.0, (1, 1): 2.0})
    data = extend_to_infinity(F)
    assert any(not s.simple for s in data.sing_points)
    with pytest.raises(MultipleRoot):
        infinite_singularities(data)


def test_classify_flags():
    homog = PolyFoliation({(0, 2): 1.0}, {(2, 0): 1.0})
    flags = classify(homog)
    assert flags.is_homogeneous and not flags.is_symmetric

    sym = PolyFoliation({(0, 1): 1.0, (1, 1): 0.3}, {(2, 0): 1.0, (0, 2): 0.5})
    assert is_symmetric(sym)
    assert classify(sym).is_symmetric


@given(st.integers(0, 3), st.integers(0, 3))
def test_symmetry_is_coefficient_parity(i, j):
    F = PolyFoliation({(i, j): 1.0, (0, 1): 1.0}, {(0, 0): 1.0})
    assert is_symmetric(F) == (j % 2 == 1)


def test_finite_singularities_linear_saddle():
    F = PolyFoliation({(1, 0): 1.0, (0, 1): 2.0}, {(0, 1): -1.0})
    sings = finite_singularities(F, search_box=2.0, grid=5)
    assert len(sings) == 1
    (x, y) = sings[0].location
    assert abs(x) + abs(y) < 1e-10
    assert abs(sings[0].trace - 0.0) < 1e-10
    assert abs(sings[0].det + 1.0) < 1e-10


SYM = PolyFoliation(
    {(0, 1): 1.0, (2, 1): -0.5},
    {(2, 0): 1.0, (0, 2): -1.0, (0, 0): -0.25},
)


def test_perturb_symmetric_keeps_point_singular():
    # (x0, y0) = (0.5, 0.5): P = y(1 - x^2/2)... pick a singular point of SYM
    sings = finite_singularities(SYM, search_box=3.0, grid=7)
    on_axis = [s for s in sings if abs(s.location[1]) > 1e-6]
    assert on_axis
    x0, y0 = on_axis[0].location
    G = perturb_symmetric(SYM, (x0, y0), eps=1e-3, delta=2e-3j)
    assert is_symmetric(G)
    assert abs(G.P(x0, y0)) + abs(G.Q(x0, y0)) < 1e-8


def test_perturb_symmetric_rejects_regular_point():
    with pytest.raises(NotSingularPoint):
        perturb_symmetric(SYM, (0.123, 0.456), 1e-3, 1e-3)


def test_perturb_symmetric_requires_symmetry():
    F = PolyFoliation({(0, 2): 1.0}, {(2, 0): 1.0})
    with pytest.raises(NotSymmetric):
        perturb_symmetric(F, (0.0, 0.0), 1e-3, 1e-3)
