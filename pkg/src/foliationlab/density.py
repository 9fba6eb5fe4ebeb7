"""Density of two-multiplier semigroups and exponent searches.

Everything here is quantitative: "dense" means an epsilon-net of a
fundamental window in (log modulus, argument) space is covered by semigroup
points with exponents below a stated bound.  That certified, the searches
realize a prescribed linear map by words mu^-s g^t (mu^(r+s) z) and produce
hyperbolic fixed points of composed germs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundsExhausted,
    CommutingPair,
    ResonanceDetected,
)
from .germs import (
    DEFAULT_HYPERBOLICITY_MARGIN,
    FixedPoint,
    Germ,
    compose,
    find_fixed_point,
    koenigs_chart,
)
from .loops import LoopWord

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SemigroupCertificate:
    mu1: complex
    mu2: complex
    dense_verdict: bool
    witness_grid: float  # achieved epsilon-net resolution
    exponent_bound: int
    max_exponent_used: int = 0
    failure_reason: str | None = None


@dataclass(frozen=True)
class ApproxTriple:
    r: int
    s: int
    t: int
    achieved_sup_error: float
    nu: complex


def _find_resonance(mu1: complex, mu2: complex, max_coeff: int = 24, tol: float = 1e-9):
    """Small integer relation m1*Log(mu1) + m2*Log(mu2) + m3*2*pi*i = 0, if any."""
    l1 = cmath.log(mu1)
    l2 = cmath.log(mu2)
    scale = max(abs(l1), abs(l2), 1.0)
    # radius-ordered search returns the smallest relation
    for radius in range(1, max_coeff + 1):
        for m1 in range(-radius, radius + 1):
            for m2 in range(-radius, radius + 1):
                if max(abs(m1), abs(m2)) != radius:
                    continue
                z = m1 * l1 + m2 * l2
                m3 = round(-z.imag / TWO_PI)
                if abs(z.real) < tol * scale and abs(z.imag + m3 * TWO_PI) < tol * scale:
                    return (m1, m2, m3)
    return None


def _moduli_dependent(mu1: complex, mu2: complex, max_coeff: int = 24, tol: float = 1e-9):
    """Small relation q*log|mu1| + p*log|mu2| = 0, if any (moduli-only degeneracy)."""
    x1, x2 = math.log(abs(mu1)), math.log(abs(mu2))
    scale = max(abs(x1), abs(x2), 1.0)
    for radius in range(1, max_coeff + 1):
        for q in range(-radius, radius + 1):
            for p in range(-radius, radius + 1):
                if (q, p) == (0, 0) or max(abs(q), abs(p)) != radius:
                    continue
                if abs(q * x1 + p * x2) < tol * scale:
                    return (q, p)
    return None


def semigroup_density_check(
    mu1: complex,
    mu2: complex,
    resolution: float = 0.05,
    exponent_bound: int = 10_000,
) -> SemigroupCertificate:
    """Certify that {mu1^a mu2^b : 0 <= a, b <= bound} is an eps-net of C*.

    The window is one fundamental strip [0, log|mu2|) in log modulus times a
    full turn in argument.  Raises ResonanceDetected when the two logs and
    2*pi*i satisfy a small integer relation, which rules out density.
    """
    if mu1 == 0 or mu2 == 0:
        raise ValueError("multipliers must be nonzero")
    relation = _find_resonance(mu1, mu2)
    if relation is not None:
        raise ResonanceDetected(
            f"rational relation {relation} between log mu1, log mu2 and 2*pi*i",
            relation=relation,
        )
    x1, x2 = math.log(abs(mu1)), math.log(abs(mu2))
    if not (x1 < 0.0 < x2):
        return SemigroupCertificate(
            mu1, mu2, False, math.inf, exponent_bound,
            failure_reason="log moduli do not straddle zero; window unreachable",
        )
    dep = _moduli_dependent(mu1, mu2)
    if dep is not None:
        return SemigroupCertificate(
            mu1, mu2, False, math.inf, exponent_bound,
            failure_reason=(
                f"moduli multiplicatively dependent ({dep}); achievable moduli "
                "form a discrete set, the semigroup is dense only in a union of circles"
            ),
        )
    p1, p2 = cmath.phase(mu1), cmath.phase(mu2)
    width = x2
    n_mod = max(1, math.ceil(width / resolution))
    n_arg = max(1, math.ceil(TWO_PI / resolution))
    covered = np.zeros((n_mod, n_arg), dtype=bool)
    remaining = n_mod * n_arg
    max_used = 0
    for b in range(exponent_bound + 1):
        base = b * x2
        a_lo = max(0, math.ceil((base - width) / (-x1) - 1e-12))
        a_hi = math.floor(base / (-x1) + 1e-12)
        for a in range(a_lo, min(a_hi, exponent_bound) + 1):
            m = a * x1 + base
            if not (0.0 <= m < width):
                continue
            ang = (a * p1 + b * p2) % TWO_PI
            i = min(int(m / width * n_mod), n_mod - 1)
            jj = min(int(ang / TWO_PI * n_arg), n_arg - 1)
            if not covered[i, jj]:
                covered[i, jj] = True
                remaining -= 1
                max_used = max(max_used, a, b)
                if remaining == 0:
                    return SemigroupCertificate(
                        mu1, mu2, True, resolution, exponent_bound, max_used
                    )
    return SemigroupCertificate(
        mu1, mu2, False, resolution, exponent_bound, max_used,
        failure_reason=f"{remaining} of {n_mod * n_arg} cells uncovered",
    )


def measure_sup_error(
    mu: complex, g: Germ, nu: complex, r: int, s: int, t: int,
    disc_radius: float, n_points: int = 64,
) -> float:
    """Sup distance of z -> mu^-s g^t (mu^(r+s) z) from z -> nu z on the disc boundary."""
    worst = 0.0
    for k in range(n_points):
        z = disc_radius * cmath.exp(2j * math.pi * k / n_points)
        w = mu ** (r + s) * z
        for _ in range(t):
            w = g(w)
        val = mu ** (-s) * w
        worst = max(worst, abs(val - nu * z))
    return worst


def approx_linear(
    mu: complex,
    g: Germ,
    nu: complex,
    disc_radius: float,
    eps: float,
    exponent_bound: int = 10_000,
    boundary_points: int = 64,
    mult_tol: float | None = None,
) -> ApproxTriple:
    """Realize z -> nu z by z -> mu^-s g^t (mu^(r+s) z) up to eps on a disc.

    The (t, r) pair targets the multiplier g'(0)^t mu^r ~ nu on the log
    lattice (smallest t that brings the multiplier within budget); s then
    grows until the measured sup error on >= boundary_points boundary
    samples drops below eps.

    With mult_tol given, the multiplier search accepts any realized
    multiplier within mult_tol of nu, and the sup error is measured (and
    eps enforced) against that realized multiplier, which is returned in
    the triple's nu field.  Callers that can absorb a multiplier offset
    elsewhere (a hyperbolic fixed point shifts along the transversal
    instead of disappearing) get exponents smaller by orders of magnitude,
    since demanding both log-modulus and argument coincidences scales like
    the inverse square of the tolerance.
    """
    g0 = g.multiplier
    if g0 is None:
        raise ValueError("g must fix the origin")
    if not (abs(mu) < 1.0 < abs(g0)):
        raise ValueError("need |mu| < 1 < |g'(0)|")
    lx_mu, lx_g = math.log(abs(mu)), math.log(abs(g0))
    p_mu, p_g = cmath.phase(mu), cmath.phase(g0)
    # multiplier error below half the linear budget leaves room for the
    # nonlinear tail that s controls
    exact_nu = mult_tol is not None
    target_mult_err = (
        mult_tol if exact_nu else 0.5 * eps / max(disc_radius, 1e-300)
    )
    best = None
    for t in range(exponent_bound + 1):
        r_real = (math.log(abs(nu)) - t * lx_g) / lx_mu
        for r in (math.floor(r_real), math.ceil(r_real)):
            if r < 0 or r > exponent_bound:
                continue
            dlog = t * lx_g + r * lx_mu - math.log(abs(nu))
            darg = (t * p_g + r * p_mu - cmath.phase(nu) + math.pi) % TWO_PI - math.pi
            err = abs(cmath.exp(complex(dlog, darg)) - 1.0) * abs(nu)
            if best is None or err < best[0]:
                best = (err, t, r)
        if best is not None and best[0] < target_mult_err:
            break
    if best is None or best[0] > target_mult_err:
        raise BoundsExhausted(
            f"no (t, r) within bound {exponent_bound} reaches the multiplier target"
        )
    _, t, r = best
    if exact_nu:
        # exp keeps the realized multiplier finite even when g0**t overflows
        nu = cmath.exp(t * cmath.log(g0) + r * cmath.log(mu))
    for s in range(exponent_bound + 1):
        sup = measure_sup_error(mu, g, nu, r, s, t, disc_radius, boundary_points)
        if sup < eps:
            return ApproxTriple(r, s, t, sup, nu)
        if abs(mu) ** (r + s) * disc_radius < 1e-290:
            break
    raise BoundsExhausted("s exhausted without meeting the sup-error target")


def composed_word(r: int, s: int, t: int, gen_contract: int = 1, gen_expand: int = 2) -> LoopWord:
    """Loop word whose monodromy is M1^-s o M2^t o M1^(r+s) o M2.

    Loop concatenation reverses composition order, so the first letter is
    the innermost map.
    """
    return LoopWord(
        (
            (gen_expand, 1),
            (gen_contract, r + s),
            (gen_expand, t),
            (gen_contract, -s),
        )
    )


@dataclass
class CycleGermResult:
    exponents: tuple  # (r, s, t)
    fixed_point: FixedPoint  # in the linearizing chart of M1
    u_star: complex  # pulled back to the transversal coordinate
    word: LoopWord
    certificate: SemigroupCertificate


def lemma7_cycle_germ(
    M1: Germ,
    M2: Germ,
    z0: complex,
    eps: float,
    margin: float = DEFAULT_HYPERBOLICITY_MARGIN,
    exponent_bound: int = 10_000,
    density_resolution: float = 0.2,
    density_bound: int = 200_000,
) -> CycleGermResult:
    """Hyperbolic fixed point of M1^-s M2^t M1^(r+s) M2 near z0.

    Works in the linearizing chart of M1, where M1 is exactly linear; M2 is
    conjugated into the chart, the target linear map z -> (z0/M2(z0)) z is
    realized by approx_linear, and Newton polishes the fixed point of the
    full composition.
    """
    mu1, mu2 = M1.multiplier, M2.multiplier
    if mu1 is None or mu2 is None:
        raise ValueError("germs must fix the origin")
    if not (abs(mu1) < 1.0 < abs(mu2)):
        raise ValueError("need |mu1| < 1 < |mu2|")
    _require_non_commuting(M1, M2, abs(z0))
    cert = semigroup_density_check(
        mu1, mu2, resolution=density_resolution, exponent_bound=density_bound
    )
    if not cert.dense_verdict:
        raise BoundsExhausted(
            f"density certificate failed: {cert.failure_reason}"
        )

    chart = koenigs_chart(M1)
    phi = chart.forward
    phi_inv = chart.inverse

    def n2_ev(z):
        w = phi_inv(z)
        val, der = M2.eval(w)
        ph_w = phi(w)[1]
        ph_val = phi(val)
        return ph_val[0], ph_val[1] * der / ph_w

    N2 = Germ(n2_ev, min(chart.valid_radius, M2.domain_radius), mu2)

    # deterministic spiral scan until the proof's inequality holds
    z = complex(z0)
    for k in range(200):
        zk = z0 * (1.0 + k * 1e-3 * cmath.exp(1j * k))
        val, der = N2.eval(zk)
        if abs(abs(der) - abs(val / zk)) > 1e-3 * abs(der):
            z = zk
            break
    else:
        raise CommutingPair(
            "could not separate |M2'(z0)| from |M2(z0)/z0|; germs act linearly"
        )
    nu = z / N2(z)
    # a multiplier offset dnu moves the hyperbolic fixed point by roughly
    # |dnu/nu| / |1 - N2'(z) z / N2(z)|, so a tolerance well below that
    # separation keeps the shifted fixed point inside the working disc
    val, der = N2.eval(z)
    sep = abs(1.0 - der * z / val)
    triple = approx_linear(
        mu1,
        N2,
        nu,
        disc_radius=2.0 * abs(z),
        eps=eps,
        exponent_bound=exponent_bound,
        mult_tol=0.9 * sep * abs(nu),
    )
    r, s, t = triple.r, triple.s, triple.t

    # pre-solve nu_exact * N2(z) / z = 1 so Newton on the full composition
    # starts inside the basin of the shifted nontrivial fixed point; the
    # ratio form excludes the spurious root at the origin
    nu_exact = triple.nu
    for _ in range(60):
        val, der = N2.eval(z)
        g_val = nu_exact * val / z - 1.0
        g_der = nu_exact * (der - val / z) / z
        step = g_val / g_der
        if abs(step) > 0.5 * abs(z):
            step *= 0.5 * abs(z) / abs(step)
        z = z - step
        if abs(step) < 1e-13 * abs(z):
            break

    lin1 = Germ.linear(mu1, N2.domain_radius / min(abs(mu1) ** (r + s), 1.0))

    comp = compose(lin1.iterate(-s), N2.iterate(t), lin1.iterate(r + s), N2)
    fp = find_fixed_point(comp, z, margin=margin)
    u_star = phi_inv(fp.z_star)
    return CycleGermResult(
        exponents=(r, s, t),
        fixed_point=fp,
        u_star=u_star,
        word=composed_word(r, s, t),
        certificate=cert,
    )


def _require_non_commuting(M1: Germ, M2: Germ, scale: float, rel_tol: float = 1e-9):
    worst = 0.0
    for k in range(5):
        z = 0.5 * scale * cmath.exp(2j * math.pi * k / 5)
        try:
            a = M1(M2(z))
            b = M2(M1(z))
        except Exception:
            continue
        worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1e-300))
    if worst < rel_tol:
        raise CommutingPair("M1 and M2 commute to working precision")
