"""Homogeneous foliations: exact linear monodromy and commutator handles.

For homogeneous P and Q the chart system at infinity splits as
u' = u * Pt(v), v' = h(v), so the monodromy generators are exactly linear,
M_j(u) = mu_j * u with mu_j = exp(2 pi i lambda_j).  This supplies a closed
form oracle for the path-lifting machinery and the simplest handle
construction: commutator words have identity monodromy, so their lifts close
at any height, and for generic multipliers the two lifts only meet above the
basepoint.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .cycles import Cycle, ExclusionCheck, HandleCertificate, _trace_coincidences
from .errors import CommutingPair, GenericityFailure, MultipleRoot
from .foliation import PolyFoliation, classify, extend_to_infinity, infinite_singularities
from .lifting import Lifter
from .loops import LoopWord

COMMUTATOR_C1 = LoopWord(((2, 1), (1, 1), (2, -1), (1, -1)))
COMMUTATOR_C2 = LoopWord(((3, 1), (2, -1), (3, -1), (2, 1)))

GENERICITY_THRESHOLD = 1e-6


@dataclass(frozen=True)
class HomogMonodromy:
    mus: tuple
    lams: tuple
    roots: tuple
    numeric_max_error: float | None


def exact_monodromy(F: PolyFoliation, verify: bool = True, verify_tol: float = 1e-8) -> HomogMonodromy:
    """Closed-form multipliers mu_j = exp(2 pi i P(1, a_j)/h'(a_j)).

    With verify=True each generator is also lifted numerically and the lift
    must reproduce the linear map within verify_tol (relative).
    """
    flags = classify(F)
    if not flags.is_homogeneous:
        raise ValueError("exact_monodromy requires a homogeneous foliation")
    data = extend_to_infinity(F)
    sing = infinite_singularities(data)  # raises MultipleRoot when h degenerates
    lams = tuple(s.lam for s in sing)
    mus = tuple(s.mu for s in sing)
    err = None
    if verify:
        lifter = Lifter(F, data)
        u0 = 1e-3
        err = 0.0
        for j in range(1, len(sing) + 1):
            res = lifter.lift_word(LoopWord.generator(j), u0)
            err = max(err, abs(res.u_end - mus[j - 1] * u0) / abs(mus[j - 1] * u0))
        if err > verify_tol:
            raise ValueError(
                f"numeric generator lift deviates from closed form by {err:.3g}"
            )
    return HomogMonodromy(mus, lams, tuple(s.a for s in sing), err)


def _exclusion_words(mus):
    """The seven maps whose non-triviality keeps the commutator lifts apart."""
    mu1, mu2, mu3 = mus[0], mus[1], mus[2]
    return {
        "M3": mu3,
        "M2": mu2,
        "M2^-1 o M3": mu3 / mu2,
        "M2^-1 o M1^-1 o M3": mu3 / (mu1 * mu2),
        "M1 o M2": mu1 * mu2,
        "M1^-1 o M3": mu3 / mu1,
        "M1": mu1,
    }


def commutator_handle(
    F: PolyFoliation,
    p_u: complex,
    tol: float = 1e-11,
    coincidence_tol_factor: float = 1e-7,
) -> HandleCertificate:
    """Handle certificate from the commutator lifts [g2,g1] and [g3,g2^-1] at height p_u.

    Both words have identity monodromy (the linear generators commute up to
    the multiplier product, which cancels in a commutator), so the lifts are
    closed loops through p_u.  The seven exclusion multipliers must stay away
    from 1 so the two loops meet only above the basepoint.
    """
    if abs(p_u) == 0.0:
        raise ValueError("p_u must be nonzero (the zero section is the infinite line)")
    mono = exact_monodromy(F, verify=False)
    if len(mono.mus) < 3:
        raise MultipleRoot("need at least three singular points on the infinite line")
    checks = {}
    for name, mu_w in _exclusion_words(mono.mus).items():
        resid = abs(mu_w - 1.0)
        checks[name] = ExclusionCheck(resid > GENERICITY_THRESHOLD, resid, GENERICITY_THRESHOLD)
        if not checks[name].passed:
            raise GenericityFailure(
                f"exclusion map {name} is numerically the identity "
                f"(|mu - 1| = {resid:.3g})",
                word=name,
            )

    data = extend_to_infinity(F)
    lifter = Lifter(F, data, tol=tol)
    cycles = []
    for word in (COMMUTATOR_C1, COMMUTATOR_C2):
        res = lifter.lift_word(word, p_u)
        cycles.append(
            Cycle(
                word=word,
                basepoint_u=complex(p_u),
                lift_trace=res.trace,
                multiplier=res.derivative,
                max_abs_u=res.max_abs_u,
                closure_residual=abs(res.u_end - p_u),
                letter_spans=res.letter_spans,
            )
        )
    c1, c2 = cycles
    for lbl, c in (("c1 closure", c1), ("c2 closure", c2)):
        checks[lbl] = ExclusionCheck(
            c.closure_residual < 1e-10 * max(1.0, abs(p_u)),
            c.closure_residual,
            1e-10 * max(1.0, abs(p_u)),
        )

    inter = _trace_coincidences(c1, c2, u_tol=coincidence_tol_factor * max(c1.max_abs_u, c2.max_abs_u))

    d1 = c1.lift_trace[1][0] - c1.lift_trace[0][0]
    d2 = c2.lift_trace[1][0] - c2.lift_trace[0][0]
    angle = abs(cmath.phase(d1 / d2)) % np.pi
    angle = min(angle, np.pi - angle)
    transversal = angle > 1e-2

    valid = transversal and len(inter) == 1 and all(c.passed for c in checks.values())
    return HandleCertificate(
        c1=c1,
        c2=c2,
        intersection_points=inter,
        transversal=transversal,
        exclusion_checks=checks,
        eps_closeness=max(c1.max_abs_u, c2.max_abs_u),
        valid=valid,
    )


@dataclass(frozen=True)
class ScaledHandles:
    certificates: tuple
    scales: tuple
    disjoint: bool


def handles_at_scales(F: PolyFoliation, scales=(1e-2, 1e-3), tol: float = 1e-11) -> ScaledHandles:
    """Commutator handles at several heights; checks the traces are nested disjointly."""
    scales = tuple(sorted((abs(s) for s in scales), reverse=True))
    certs = tuple(commutator_handle(F, s, tol=tol) for s in scales)
    disjoint = True
    for outer, inner in zip(certs, certs[1:]):
        outer_min = min(c.min_abs_u for c in (outer.c1, outer.c2))
        inner_max = max(c.max_abs_u for c in (inner.c1, inner.c2))
        if inner_max >= outer_min:
            disjoint = False
    return ScaledHandles(certs, scales, disjoint)
