"""Genus lower bounds for symmetric foliations via the double cover (x, y) -> (x, y^2).

A foliation with P odd and Q even in y pushes forward to dz/dt = p(z, w),
dw/dt = q(z, w) with P(x, y) = y p(x, y^2) and Q(x, y) = q(x, y^2).  Over a
non-algebraic leaf the squaring map is a ramified double covering, branched
at the transverse intersections of the leaf with {y = 0}; counting those in
a disc gives Euler characteristic 2 - N and from the boundary parity a
genus lower bound.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExhausted, HitSingularity, NotSymmetric, ToleranceNotMet
from .foliation import PolyFoliation, is_symmetric
from .integrate import integrate
from .polynomials import clean, poly_eval, univariate_roots


@dataclass(frozen=True)
class PushforwardFoliation:
    p_coeffs: dict
    q_coeffs: dict
    regular_at_w0: bool


@dataclass(frozen=True)
class RamificationPoint:
    x: complex
    transversality: float  # |q(x, 0)|
    w_residual: float
    walk_step: int


@dataclass(frozen=True)
class RamificationReport:
    points: tuple
    N_in_disc: int
    chi: int
    boundary_components: int
    genus_lower_bound: int


def pushforward(F: PolyFoliation) -> PushforwardFoliation:
    """Exact coefficient extraction of (p, q) with the regularity test on {w = 0}."""
    if not is_symmetric(F):
        raise NotSymmetric("pushforward requires P odd and Q even in y")
    p = {}
    for (i, j), c in clean(F.P_coeffs).items():
        p[(i, (j - 1) // 2)] = c
    q = {}
    for (i, j), c in clean(F.Q_coeffs).items():
        q[(i, j // 2)] = c
    return PushforwardFoliation(p, q, _regular_at_w0(p, q, F.degree_n))


def _restrict_w0(coeffs: dict) -> np.ndarray:
    deg = max((i for (i, j) in clean(coeffs) if j == 0), default=-1)
    out = np.zeros(deg + 1 if deg >= 0 else 1, dtype=complex)
    for (i, j), c in coeffs.items():
        if j == 0:
            out[i] += complex(c)
    return np.trim_zeros(out, "b") if np.any(out) else np.zeros(0, dtype=complex)


def _regular_at_w0(p: dict, q: dict, n: int, tol: float = 1e-9) -> bool:
    p0 = _restrict_w0(p)
    q0 = _restrict_w0(q)
    if len(p0) == 0 or len(q0) == 0:
        return False
    # no singular point at the far end of {w = 0}: q keeps the full degree there
    if len(q0) - 1 < n:
        return False
    rp = univariate_roots(p0)
    rq = univariate_roots(q0)
    if len(rp) == 0 or len(rq) == 0:
        return True
    scale = max(1.0, float(np.max(np.abs(rp))), float(np.max(np.abs(rq))))
    return min(abs(a - b) for a in rp for b in rq) > tol * scale


def _screen_algebraic_leaf(F: PolyFoliation, x0, y0, max_degree, tol=1e-8) -> bool:
    """True if the seed appears to lie on an algebraic curve of low degree.

    Samples a short trajectory and looks for a nonzero polynomial of degree
    at most max_degree vanishing on all samples (smallest singular value of
    the Vandermonde-type matrix).
    """
    n_samples = 4 * (max_degree + 1) * (max_degree + 2)
    states = _trajectory_samples(F, x0, y0, n_samples)
    if states is None:
        return False
    monos = [(i, j) for i in range(max_degree + 1) for j in range(max_degree + 1 - i)]
    A = np.array([[x**i * y**j for (i, j) in monos] for x, y in states])
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = 1.0
    sv = np.linalg.svd(A / norms, compute_uv=False)
    return sv[-1] < tol * sv[0]


def _trajectory_samples(F: PolyFoliation, x0, y0, count):
    def f(t, z):
        return np.array([F.P(z[0], z[1]), F.Q(z[0], z[1])], dtype=complex)

    try:
        res = integrate(
            f, 0.0, 0.5, np.array([x0, y0], dtype=complex), tol=1e-9, record=True
        )
    except Exception:
        return None
    ys = res.ys
    if len(ys) < count:
        try:
            res = integrate(
                f, 0.0, 2.0, np.array([x0, y0], dtype=complex),
                tol=1e-11, record=True,
            )
            ys = res.ys
        except Exception:
            return None
    if len(ys) < 8:
        return None
    idx = np.linspace(0, len(ys) - 1, min(count, len(ys))).astype(int)
    return [(ys[i][0], ys[i][1]) for i in idx]


def track_line_intersections(
    F: PolyFoliation,
    leaf_seed: tuple,
    box: float = 5.0,
    max_count: int = 64,
    tol: float = 1e-10,
    walk_steps: int = 400,
    step_scale: float = 0.8,
    walk_seed: int = 7,
    budget_steps: int = 400_000,
    ode_tol: float = 1e-10,
) -> tuple:
    """Transverse crossings of a leaf with {y = 0}, by continuation over the x-plane.

    Returns (transverse_points, non_transverse_points).  The leaf is followed
    as a graph w(x) of the pushforward coordinate w = y^2, which satisfies
    dw/dx = 2 q(x, w) / p(x, w) and is regular across {y = 0}; a crossing is
    a zero of w.  The x-plane is explored by a seeded random walk of straight
    segments inside |x| <= box (retrying directions whose segment runs into
    p = 0 or lets |w| escape), candidate zeros are local minima of |w| along
    a segment, and each candidate is polished by Newton in x with the exact
    step dx = -w p / (2 q).  A crossing counts as transverse when
    |q(x, 0)| > 1e-8; the multivaluedness of w over the walk is what makes
    repeated visits of the same x-region produce new crossings.
    """
    x0, y0 = complex(leaf_seed[0]), complex(leaf_seed[1])
    if abs(y0) < 1e-12:
        raise HitSingularity("seed lies on the invariant line {y = 0}")
    if abs(F.P(x0, y0)) + abs(F.Q(x0, y0)) < 1e-12:
        raise HitSingularity("seed is a singular point")
    if _screen_algebraic_leaf(F, x0, y0, F.degree_n + 1):
        raise HitSingularity("seed appears to lie on a low-degree algebraic leaf")

    push = pushforward(F)
    p_c, q_c = push.p_coeffs, push.q_coeffs
    q0 = _restrict_w0(q_c)

    def q_at(x):
        acc = 0j
        for k, c in enumerate(q0):
            acc += c * x**k
        return acc

    found: list[RamificationPoint] = []
    non_transverse: list[RamificationPoint] = []
    steps = [0]
    w_escape = 16.0 * max(box, abs(y0)) ** 2

    rng = np.random.default_rng(walk_seed)
    x_cur, w_cur = x0, y0 * y0
    for step in range(walk_steps):
        if steps[0] >= budget_steps:
            if len(found) >= max_count:
                break
            raise BudgetExhausted("tracking budget exhausted", points=tuple(found))
        advanced = False
        for _attempt in range(8):
            theta = rng.uniform(0.0, 2.0 * math.pi)
            length = step_scale * (0.4 + 1.2 * rng.uniform())
            target = x_cur + length * cmath.exp(1j * theta)
            if abs(target) > box:
                continue
            seg = _continue_w(p_c, q_c, x_cur, w_cur, target, ode_tol, w_escape, steps)
            if seg is None:
                continue
            xs_seg, ws_seg = seg
            mags = [abs(w) for w in ws_seg]
            for kk in range(1, len(mags) - 1):
                if not (mags[kk] <= mags[kk - 1] and mags[kk] <= mags[kk + 1] and mags[kk] < 12.0):
                    continue
                pol = _newton_zero_w(p_c, q_c, xs_seg[kk], ws_seg[kk], tol, ode_tol)
                if pol is None:
                    continue
                xc, wc = pol
                if abs(xc) > box:
                    continue
                tv = abs(q_at(xc))
                bucket = found if tv > 1e-8 else non_transverse
                if any(abs(xc - g.x) < 1e-6 * max(1.0, box) for g in bucket):
                    continue
                bucket.append(RamificationPoint(xc, tv, abs(wc), step))
                if len(found) >= max_count:
                    return tuple(found), tuple(non_transverse)
            x_cur, w_cur = target, ws_seg[-1]
            advanced = True
            break
        if not advanced:
            break
    return tuple(found), tuple(non_transverse)


class _Escaped(Exception):
    pass


def _continue_w(p_c, q_c, x_a, w_a, x_b, ode_tol, w_escape, steps):
    """Continue w(x) along the straight segment x_a -> x_b; None if blocked."""
    dx = x_b - x_a

    def f(s, y):
        x = x_a + s * dx
        p = poly_eval(p_c, x, y[0])
        if abs(p) < 1e-10:
            raise _Escaped
        return np.array([2.0 * dx * poly_eval(q_c, x, y[0]) / p], dtype=complex)

    def mon(s, y):
        if abs(y[0]) > w_escape:
            raise _Escaped

    try:
        res = integrate(
            f, 0.0, 1.0, np.array([w_a], dtype=complex), tol=ode_tol,
            monitor=mon, record=True, max_steps=20_000,
        )
    except (_Escaped, ToleranceNotMet):
        steps[0] += 64
        return None
    steps[0] += res.steps + res.rejected
    xs = [x_a + s * dx for s in res.ts]
    ws = [y[0] for y in res.ys]
    return xs, ws


def _newton_zero_w(p_c, q_c, x_here, w_here, tol, ode_tol, max_iter=30):
    """Newton in x on w(x) = 0 with dw/dx = 2q/p, re-continuing w between iterates."""
    x, w = complex(x_here), complex(w_here)
    scale = max(1.0, abs(x))
    for _ in range(max_iter):
        if abs(w) < tol:
            return x, w
        p = poly_eval(p_c, x, w)
        q = poly_eval(q_c, x, w)
        if abs(q) < 1e-14 or abs(p) < 1e-12:
            return None
        dx = -w * p / (2.0 * q)
        if abs(dx) > 0.5 * scale:
            return None
        seg = _continue_w(p_c, q_c, x, w, x + dx, ode_tol, 1e6, [0])
        if seg is None:
            return None
        x, w = x + dx, seg[1][-1]
    return None


def riemann_hurwitz(N: int) -> tuple:
    """(chi, boundary_components, genus_lower_bound) of a double cover of a disc
    branched at N interior points: chi = 2 - N, one boundary circle for odd N,
    two for even N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    chi = 2 - N
    b = 1 if N % 2 else 2
    g = max((N - b) // 2, 0)
    return chi, b, g


def ramification_report(points, disc_center: complex, disc_radius: float) -> RamificationReport:
    inside = tuple(p for p in points if abs(p.x - disc_center) <= disc_radius)
    N = len(inside)
    chi, b, g = riemann_hurwitz(N)
    return RamificationReport(inside, N, chi, b, g)


@dataclass(frozen=True)
class GenusReport:
    per_disc: tuple  # RamificationReport per disc
    total_handles: int
    jouanolou_bound: int  # max count of algebraic invariant curves without a first integral


def genus_report(F: PolyFoliation, points, discs) -> GenusReport:
    """Aggregate per-disc genus lower bounds over pairwise disjoint discs."""
    discs = [(complex(c), float(r)) for c, r in discs]
    for a in range(len(discs)):
        for b in range(a + 1, len(discs)):
            (ca, ra), (cb, rb) = discs[a], discs[b]
            if abs(ca - cb) <= ra + rb:
                raise ValueError("discs must be pairwise disjoint")
    reports = tuple(ramification_report(points, c, r) for c, r in discs)
    n = F.degree_n
    return GenusReport(
        per_disc=reports,
        total_handles=sum(r.genus_lower_bound for r in reports),
        jouanolou_bound=n * (n + 1) // 2 + 2,
    )
