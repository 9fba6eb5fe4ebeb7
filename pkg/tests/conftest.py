"""Shared builders for the test suite."""

import numpy as np
import pytest

from foliationlab import PolyFoliation


def random_foliation(rng, n, scale=1.0):
    """Dense random foliation of degree n with O(scale) complex coefficients."""
    monos = [(i, j) for i in range(n + 1) for j in range(n + 1 - i)]
    P = {m: scale * complex(rng.standard_normal(), rng.standard_normal()) for m in monos}
    Q = {m: scale * complex(rng.standard_normal(), rng.standard_normal()) for m in monos}
    return PolyFoliation(P, Q)


def prescribed_roots_foliation(roots, lams, Qlow=None, Plow=None):
    """Quadratic foliation whose infinite-line polynomial has the given roots
    with the given characteristic numbers (sum must be 1).

    Solves the Vandermonde system A(a_j) = lam_j h'(a_j) for the homogeneous
    top parts, then B = v A - h; optional low-order terms perturb the germs
    without moving the singular points at infinity.
    """
    a = np.array(roots, dtype=complex)
    h = np.poly(a)
    dh = np.polyder(h)
    V = np.vander(a, 3, increasing=True)
    rhs = np.array([lam * np.polyval(dh, aj) for lam, aj in zip(lams, a)])
    A = np.linalg.solve(V, rhs)
    B = np.zeros(4, dtype=complex)
    B[1:] += A
    B -= h[::-1]
    assert abs(B[3]) < 1e-9, "characteristic numbers must sum to 1"
    P = {(2 - j, j): complex(A[j]) for j in range(3)}
    Q = {(2 - j, j): complex(B[j]) for j in range(3)}
    if Qlow:
        Q.update(Qlow)
    if Plow:
        P.update(Plow)
    return PolyFoliation(P, Q)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
