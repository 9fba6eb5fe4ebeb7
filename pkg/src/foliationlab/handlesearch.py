"""End-to-end handle search: first cycle, family solve, second cycle, certificate.

Ties together the cycle construction pieces for the CLI: build the
hyperbolic first cycle from the figure word, solve the connection equation
over a one-parameter deformation of the foliation (by default a shift of the
constant term of Q), lift the second cycle at the solved parameter, and
certify the pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import RunConfig
from .cycles import (
    Cycle,
    HandleCertificate,
    build_first_cycle,
    build_second_cycle,
    certify_handle,
    first_cycle_word,
    refind_basepoint,
)
from .errors import NoRootInDisc
from .foliation import PolyFoliation, extend_to_infinity
from .lifting import Lifter


@dataclass
class HandleSearchOutcome:
    certificate: HandleCertificate
    parameter_value: complex
    failing_arcs: list
    roots: list
    q_choice: int


def constant_term_family(F: PolyFoliation, tol: float):
    """theta -> Lifter for the foliation with Q shifted by theta."""

    def family(theta: complex) -> Lifter:
        Q = dict(F.Q_coeffs)
        Q[(0, 0)] = Q.get((0, 0), 0.0) + theta
        F_theta = PolyFoliation(F.P_coeffs, Q)
        return Lifter(F_theta, extend_to_infinity(F_theta), tol=tol)

    return family


def run_figure_search(
    foliation_path: str | None = None,
    F: PolyFoliation | None = None,
    k: int = 2,
    l: int = 3,
    m: int = 6,
    p: int = 2,
    q: int = 1,
    r: int = 1,
    s: int = 2,
    t: int = 5,
    config: RunConfig | None = None,
    seed: complex | None = None,
    family=None,
    search_radius: float = 0.05,
    connection_tol: float = 1e-9,
) -> HandleSearchOutcome:
    config = config or RunConfig()
    if F is None:
        from .cli import load_foliation

        F = load_foliation(foliation_path)
    data = extend_to_infinity(F)
    lifter = Lifter(F, data, tol=config.ode_tol)
    if seed is None:
        seed = 0.3 * lifter.domain_radius(first_cycle_word(k, l, m))
        if seed == 0.0:
            seed = 1e-3
    c1 = build_first_cycle(lifter, k, l, m, seed=seed, margin=config.hyperbolicity_margin)

    if family is None:
        family = constant_term_family(F, config.ode_tol)

    # the middle generator exponent q of the second-cycle word may collapse;
    # when the solve finds no root with the requested q, retry with q = 0
    last_exc = None
    for q_try in ([q, 0] if q != 0 else [0]):
        try:
            c2, solve, lifter2 = build_second_cycle(
                family,
                c1,
                (2, p, q_try, r, s, t),
                tol=connection_tol,
                search_radius=search_radius,
                margin=config.hyperbolicity_margin,
            )
            q_used = q_try
            break
        except NoRootInDisc as exc:
            last_exc = exc
    else:
        raise last_exc

    fp1 = refind_basepoint(lifter2, c1.word, c1.basepoint_u, config.hyperbolicity_margin)
    res1 = lifter2.lift_word(c1.word, fp1.z_star)
    c1_at = Cycle(
        word=c1.word,
        basepoint_u=fp1.z_star,
        lift_trace=res1.trace,
        multiplier=res1.derivative,
        max_abs_u=res1.max_abs_u,
        closure_residual=abs(res1.u_end - fp1.z_star),
        letter_spans=res1.letter_spans,
    )
    cert = certify_handle(c1_at, c2, lifter2, k, l, m, q_choice=q_used)
    failing = [
        name
        for name, check in cert.exclusion_checks.items()
        if name.startswith("arc") and not check.passed
    ]
    return HandleSearchOutcome(
        certificate=cert,
        parameter_value=solve.parameter_value,
        failing_arcs=failing,
        roots=[sp.a for sp in data.sing_points],
        q_choice=q_used,
    )
