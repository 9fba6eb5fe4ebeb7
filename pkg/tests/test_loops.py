"""Loop words and their geometric realizations."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foliationlab import LoopGeometry, LoopWord, generator_loop, extend_to_infinity
from foliationlab.errors import GeometryInfeasible

from conftest import random_foliation

letters = st.lists(
    st.tuples(st.integers(1, 3), st.integers(-4, 4)), min_size=0, max_size=8
)


@given(letters)
def test_word_normalization(ls):
    w = LoopWord(tuple(ls))
    # no zero exponents, no adjacent repeats
    assert all(e != 0 for _, e in w.letters)
    assert all(a[0] != b[0] for a, b in zip(w.letters, w.letters[1:]))


@given(letters)
def test_word_inverse_cancels(ls):
    w = LoopWord(tuple(ls))
    assert (w * w.inverse()).is_identity
    assert (w.inverse() * w).is_identity


@given(letters, letters)
def test_abelianization_additive(l1, l2):
    w1, w2 = LoopWord(tuple(l1)), LoopWord(tuple(l2))
    np.testing.assert_array_equal(
        (w1 * w2).abelianized(3), w1.abelianized(3) + w2.abelianized(3)
    )


def test_word_parse_roundtrip():
    w = LoopWord.parse("g2 g1^5 g2^-3 g3")
    assert w.letters == ((2, 1), (1, 5), (2, -3), (3, 1))
    assert LoopWord.parse(str(w)) == w


def test_generator_loop_winding(rng):
    # the realized path winds exponent times around its root, 0 around others
    F = random_foliation(rng, 2)
    data = extend_to_infinity(F)
    roots = [s.a for s in data.sing_points]
    for j in range(1, len(roots) + 1):
        for e in (1, -2, 3):
            path = generator_loop(data, j, exponent=e)
            winds = path.winding_numbers(roots)
            expect = [e if k == j - 1 else 0 for k in range(len(roots))]
            assert winds == expect


def test_generator_loop_clearance(rng):
    F = random_foliation(rng, 2)
    data = extend_to_infinity(F)
    path = generator_loop(data, 1)
    assert path.clearance > 0.0


def test_basepoint_inside_circle_rejected():
    from foliationlab import PolyFoliation

    F = PolyFoliation({(2, 0): 1.0}, {(0, 2): 1.0})  # roots 0, 1
    data = extend_to_infinity(F)
    geo = LoopGeometry(basepoint=0.05 + 0.0j, radius_factor=0.35)
    with pytest.raises(GeometryInfeasible):
        generator_loop(data, 1, geo)


def test_reversed_path_is_reverse():
    from foliationlab import PolyFoliation

    F = PolyFoliation({(2, 0): 1.0}, {(0, 2): 1.0})
    data = extend_to_infinity(F)
    path = generator_loop(data, 2)
    rev = path.reversed()
    fwd = path.sample(32)
    bwd = rev.sample(32)
    np.testing.assert_allclose(fwd[0], bwd[-1], atol=1e-12)
    np.testing.assert_allclose(fwd[-1], bwd[0], atol=1e-12)
