"""Polynomial foliations of C^2 and their behaviour at the infinite line.

A foliation is the pair of polynomials (P, Q) of the system

    dx/dt = P(x, y),    dy/dt = Q(x, y),    n = max(deg P, deg Q).

The chart change u = 1/x, v = y/x extends the foliation to the projective
plane.  After a polynomial time change, the transformed field is

    du/dt = u * Pt(u, v),    dv/dt = v * Pt(u, v) - Qt(u, v),

with Pt(u, v) = u^n P(1/u, v/u) and Qt(u, v) = u^n Q(1/u, v/u).  Restricted
to the infinite line {u = 0}, the v-component is the univariate polynomial
h(v) = v Pt(0, v) - Qt(0, v) whose roots carry the singular points at
infinity.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSystem, MultipleRoot, NotSingularPoint, NotSymmetric
from .polynomials import (
    clean,
    poly_add,
    poly_diff,
    poly_eval,
    total_degree,
    univariate_diff,
    univariate_eval,
    univariate_roots,
)

TWO_PI_I = 2j * cmath.pi

#: pairwise separation (relative to max |root|) below which roots count as multiple
ROOT_SEPARATION = 1e-7
#: |h'(a)| relative to the coefficient norm of h below which a root counts as multiple
ROOT_DERIVATIVE_FLOOR = 1e-9


@dataclass(frozen=True)
class PolyFoliation:
    """Pair of bivariate polynomials with degree metadata."""

    P_coeffs: dict
    Q_coeffs: dict
    degree_n: int = field(init=False)

    def __post_init__(self):
        P = clean(self.P_coeffs)
        Q = clean(self.Q_coeffs)
        if not P and not Q:
            raise ValueError("P and Q must not both vanish identically")
        n = max(total_degree(P), total_degree(Q))
        if n < 1:
            raise ValueError("degree must be at least 1")
        object.__setattr__(self, "P_coeffs", P)
        object.__setattr__(self, "Q_coeffs", Q)
        object.__setattr__(self, "degree_n", n)

    def P(self, x: complex, y: complex) -> complex:
        return poly_eval(self.P_coeffs, x, y)

    def Q(self, x: complex, y: complex) -> complex:
        return poly_eval(self.Q_coeffs, x, y)


@dataclass(frozen=True)
class SingularPointAtInfinity:
    """Root of h with its characteristic number and multiplier."""

    a: complex
    lam: complex | None
    mu: complex | None
    multiplicity: int = 1

    @property
    def simple(self) -> bool:
        return self.multiplicity == 1


@dataclass(frozen=True)
class InfinityData:
    """Transformed polynomials, h, and the singular points on {u = 0}."""

    Ptilde_coeffs: dict
    Qtilde_coeffs: dict
    h_coeffs: np.ndarray
    dicritical: bool
    sing_points: tuple = ()
    root_condition: float = 0.0

    @property
    def simple_points(self) -> list:
        return [s for s in self.sing_points if s.simple]

    def lambda_sum(self) -> complex:
        return sum(s.lam for s in self.simple_points)

    def mu_product(self) -> complex:
        out = 1 + 0j
        for s in self.simple_points:
            out *= s.mu
        return out


@dataclass(frozen=True)
class ClassFlags:
    in_An_prime: bool
    is_dicritical: bool
    is_symmetric: bool
    is_homogeneous: bool


@dataclass(frozen=True)
class FiniteSingularity:
    """Common zero of (P, Q) with its linearization data."""

    location: tuple
    lin_matrix: np.ndarray
    trace: complex
    det: complex
    complex_hyperbolic: bool


def _chart_transform(coeffs: dict, n: int) -> dict:
    """Exact exponent relabeling x^i y^j -> u^(n-i-j) v^j of u^n P(1/u, v/u)."""
    out = {}
    for (i, j), c in coeffs.items():
        key = (n - i - j, j)
        out[key] = out.get(key, 0) + c
    return clean(out)


def _h_coeffs_exact(Pt: dict, Qt: dict) -> dict:
    """Coefficients of h(v) = v*Pt(0,v) - Qt(0,v), kept exact, keyed by power of v."""
    out = {}
    for (i, j), c in Pt.items():
        if i == 0:
            out[j + 1] = out.get(j + 1, 0) + c
    for (i, j), c in Qt.items():
        if i == 0:
            out[j] = out.get(j, 0) - c
    return {k: c for k, c in out.items() if c != 0}


def extend_to_infinity(F: PolyFoliation) -> InfinityData:
    """Chart change to infinity with singular data on {u = 0}.

    The dicritical test is exact coefficient cancellation; roots of h are
    found numerically (companion matrix plus Newton polish) only in the
    non-dicritical case.
    """
    n = F.degree_n
    Pt = _chart_transform(F.P_coeffs, n)
    Qt = _chart_transform(F.Q_coeffs, n)
    h_exact = _h_coeffs_exact(Pt, Qt)
    if not h_exact:
        return InfinityData(Pt, Qt, np.zeros(1, dtype=complex), True)

    deg = max(h_exact)
    h = np.zeros(deg + 1, dtype=complex)
    for k, c in h_exact.items():
        h[k] = complex(c)

    roots = univariate_roots(h)
    # companion-matrix eigenvalue order is sensitive to coefficient rounding;
    # sort lexicographically (keys rounded past the polish accuracy) so
    # generator indices are reproducible
    roots = np.array(
        sorted(roots, key=lambda z: (round(z.real, 9), round(z.imag, 9))),
        dtype=complex,
    )
    dh = univariate_diff(h)
    hnorm = float(np.max(np.abs(h)))
    scale = max(float(np.max(np.abs(roots))), 1.0) if len(roots) else 1.0

    sing = []
    cond = 0.0
    for k, a in enumerate(roots):
        sep = min(
            (abs(a - b) for m, b in enumerate(roots) if m != k),
            default=np.inf,
        )
        dha = univariate_eval(dh, a)
        simple = sep > ROOT_SEPARATION * scale and abs(dha) > ROOT_DERIVATIVE_FLOOR * hnorm
        if simple:
            lam = poly_eval(Pt, 0.0, a) / dha
            mu = cmath.exp(TWO_PI_I * lam)
            cond = max(cond, hnorm / abs(dha))
            sing.append(SingularPointAtInfinity(a, lam, mu, 1))
        else:
            sing.append(SingularPointAtInfinity(a, None, None, 0))
    # merge clustered roots into one point with the cluster size as multiplicity
    merged, used = [], set()
    for k, s in enumerate(sing):
        if k in used:
            continue
        if s.simple:
            merged.append(s)
            continue
        cluster = [m for m, b in enumerate(roots)
                   if m not in used and abs(b - roots[k]) <= ROOT_SEPARATION * scale]
        for m in cluster:
            used.add(m)
        merged.append(SingularPointAtInfinity(roots[k], None, None, max(len(cluster), 2)))
    return InfinityData(Pt, Qt, h, False, tuple(merged), cond)


def infinite_singularities(data: InfinityData) -> list:
    """Singular points at infinity with characteristic numbers.

    Raises MultipleRoot if any root of h is non-simple; the simple points are
    attached to the exception so callers may continue with a partial list.
    """
    if data.dicritical:
        raise ValueError("no isolated singular points at infinity in the dicritical case")
    bad = [s for s in data.sing_points if not s.simple]
    if bad:
        err = MultipleRoot(
            f"{len(bad)} non-simple root(s) of h; lambda undefined there"
        )
        err.simple_points = data.simple_points
        raise err
    return list(data.sing_points)


def _y_parity_ok(coeffs: dict, parity: int) -> bool:
    return all(j % 2 == parity for (_, j) in clean(coeffs))


def is_symmetric(F: PolyFoliation) -> bool:
    """P(x,-y) = -P(x,y) and Q(x,-y) = Q(x,y), checked coefficient-wise."""
    return _y_parity_ok(F.P_coeffs, 1) and _y_parity_ok(F.Q_coeffs, 0)


def classify(F: PolyFoliation) -> ClassFlags:
    data = extend_to_infinity(F)
    if data.dicritical:
        in_prime = False
    else:
        simple = [s for s in data.sing_points if s.simple]
        in_prime = (
            len(data.h_coeffs) - 1 == F.degree_n + 1
            and len(simple) == F.degree_n + 1
        )
    n = F.degree_n
    homog = all(i + j == n for (i, j) in clean(F.P_coeffs)) and all(
        i + j == n for (i, j) in clean(F.Q_coeffs)
    )
    return ClassFlags(
        in_An_prime=in_prime,
        is_dicritical=data.dicritical,
        is_symmetric=is_symmetric(F),
        is_homogeneous=homog,
    )


def linearization(F: PolyFoliation, x0: complex, y0: complex) -> np.ndarray:
    """2x2 matrix of first partials of (P, Q) at a point."""
    return np.array(
        [
            [poly_eval(poly_diff(F.P_coeffs, 0), x0, y0), poly_eval(poly_diff(F.P_coeffs, 1), x0, y0)],
            [poly_eval(poly_diff(F.Q_coeffs, 0), x0, y0), poly_eval(poly_diff(F.Q_coeffs, 1), x0, y0)],
        ],
        dtype=complex,
    )


def _complex_hyperbolic(A: np.ndarray, margin: float = 1e-9) -> bool:
    """True if the eigenvalue ratio is not real (a complex hyperbolic point)."""
    ev = np.linalg.eigvals(A)
    if abs(ev[1]) < 1e-14 or abs(ev[0]) < 1e-14:
        return False
    ratio = ev[0] / ev[1]
    return abs(ratio.imag) > margin * max(abs(ratio), 1.0)


def _newton_zero(F: PolyFoliation, x: complex, y: complex, tol: float, max_iter: int = 60):
    for _ in range(max_iter):
        fx, fy = F.P(x, y), F.Q(x, y)
        if abs(fx) + abs(fy) < tol:
            return x, y
        A = linearization(F, x, y)
        try:
            dx, dy = np.linalg.solve(A, [-fx, -fy])
        except np.linalg.LinAlgError:
            return None
        x, y = x + dx, y + dy
        if abs(x) + abs(y) > 1e8:
            return None
    return None


def finite_singularities(
    F: PolyFoliation,
    search_box: float = 5.0,
    grid: int = 9,
    tol: float = 1e-12,
) -> list:
    """Common zeros of (P, Q) with |x|, |y| <= search_box.

    Multi-start Newton from a deterministic grid of complex seeds; results
    are deduplicated and re-verified.  Raises DegenerateSystem when the
    number of isolated solutions found keeps growing with the grid, which
    signals a shared factor.
    """
    res_x = _resultant_eliminating_y(F)
    if res_x is not None and not np.any(np.abs(res_x) > 0):
        raise DegenerateSystem("P and Q share a nontrivial common factor")

    seeds = np.linspace(-search_box, search_box, grid)
    offsets = [0.0, 0.37j * search_box, -0.29j * search_box]
    found = []
    for xr in seeds:
        for yr in seeds:
            for ox in offsets:
                for oy in offsets:
                    got = _newton_zero(F, xr + ox, yr + oy, tol)
                    if got is None:
                        continue
                    x, y = got
                    if abs(x) > search_box * 1.01 or abs(y) > search_box * 1.01:
                        continue
                    if any(abs(x - a) + abs(y - b) < 1e-7 * max(1.0, search_box) for a, b in found):
                        continue
                    found.append((x, y))
    out = []
    for x, y in sorted(found, key=lambda p: (p[0].real, p[0].imag, p[1].real, p[1].imag)):
        A = linearization(F, x, y)
        out.append(
            FiniteSingularity(
                location=(x, y),
                lin_matrix=A,
                trace=A[0, 0] + A[1, 1],
                det=A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0],
                complex_hyperbolic=_complex_hyperbolic(A),
            )
        )
    return out


def _resultant_eliminating_y(F: PolyFoliation):
    """Resultant of P and Q in y (coefficient arrays in x), or None if degenerate shapes.

    Used only as a cheap degeneracy screen; the value is the resultant
    evaluated on a sample grid of x values.
    """
    def as_y_poly(coeffs, x):
        deg = max((j for (_, j) in clean(coeffs)), default=0)
        c = np.zeros(deg + 1, dtype=complex)
        for (i, j), v in coeffs.items():
            c[j] += complex(v) * x**i
        return np.trim_zeros(c, "b")

    vals = []
    for x in np.linspace(-1.3, 1.7, 7):
        a = as_y_poly(F.P_coeffs, x)
        b = as_y_poly(F.Q_coeffs, x)
        if len(a) == 0 or len(b) == 0:
            return None
        m, n = len(a) - 1, len(b) - 1
        if m == 0 and n == 0:
            vals.append(1.0)
            continue
        S = np.zeros((m + n, m + n), dtype=complex)
        for k in range(n):
            S[k, k : k + m + 1] = a[::-1]
        for k in range(m):
            S[n + k, k : k + n + 1] = b[::-1]
        vals.append(np.linalg.det(S))
    return np.array(vals)


def perturb_symmetric(
    F: PolyFoliation,
    x0y0: tuple,
    eps: complex,
    delta: complex,
    tol: float = 1e-9,
) -> PolyFoliation:
    """Two-parameter symmetric perturbation keeping (x0, y0) singular.

    P -> P + y (x - x0) eps,  Q -> Q + (y^2 - y0^2) delta.
    """
    if not is_symmetric(F):
        raise NotSymmetric("perturb_symmetric requires a symmetric foliation")
    x0, y0 = x0y0
    if abs(F.P(x0, y0)) + abs(F.Q(x0, y0)) > tol:
        raise NotSingularPoint(f"({x0}, {y0}) is not a singular point")
    dP = {(1, 1): eps, (0, 1): -x0 * eps} if eps != 0 else {}
    dQ = {(0, 2): delta, (0, 0): -(y0**2) * delta} if delta != 0 else {}
    return PolyFoliation(poly_add(F.P_coeffs, dP), poly_add(F.Q_coeffs, dQ))


def conjugate_foliation(F: PolyFoliation) -> PolyFoliation:
    """Foliation with all coefficients conjugated (the (x̄, ȳ) coordinates)."""
    conj = lambda c: {k: complex(v).conjugate() for k, v in c.items()}
    return PolyFoliation(conj(F.P_coeffs), conj(F.Q_coeffs))
