"""Command-line interface.

Subcommands: analyze, monodromy, approx-linear, limit-cycle, handle-search,
sym-genus, homog.  Each writes a schema-versioned JSON report (and optional
CSV/SVG artifacts) and exits 0 on success, 2 on a certified negative result
(for example an invalid handle certificate), 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .config import RunConfig
from .errors import FoliationLabError
from .foliation import PolyFoliation, classify, extend_to_infinity, infinite_singularities
from .lifting import Lifter, monodromy_germ
from .loops import LoopWord
from .report import build_report, write_report


def _parse_complex(text: str) -> complex:
    """Accept 1.0+0.5i, 1.0+0.5j, or "re,im"."""
    text = text.strip()
    if "," in text:
        re_s, im_s = text.split(",", 1)
        return complex(float(re_s), float(im_s))
    return complex(text.replace("i", "j"))


def load_foliation(path: str) -> PolyFoliation:
    with open(path) as fh:
        data = json.load(fh)
    for fld in ("P", "Q"):
        if fld not in data:
            raise ValueError(f"foliation file missing field {fld!r}")

    def coeffs(rows, fld):
        out = {}
        for row in rows:
            if len(row) != 4:
                raise ValueError(f"{fld}: each entry must be [i, j, re, im]")
            i, j, re_c, im_c = row
            out[(int(i), int(j))] = complex(float(re_c), float(im_c))
        return out

    return PolyFoliation(coeffs(data["P"], "P"), coeffs(data["Q"], "Q"))


def _out_path(config: RunConfig, name: str) -> str:
    os.makedirs(config.output_dir, exist_ok=True)
    return os.path.join(config.output_dir, name)


def cmd_analyze(args, config: RunConfig) -> int:
    F = load_foliation(args.foliation)
    data = extend_to_infinity(F)
    flags = classify(F)
    payload = {
        "degree": F.degree_n,
        "h_coeffs": list(data.h_coeffs),
        "flags": flags,
        "dicritical": data.dicritical,
    }
    if not data.dicritical:
        sing = infinite_singularities(data)
        payload["singular_points"] = sing
        payload["lambda_sum_residual"] = abs(sum(s.lam for s in sing) - 1.0)
        mu_prod = 1.0 + 0j
        for s in sing:
            mu_prod *= s.mu
        payload["mu_product_residual"] = abs(mu_prod - 1.0)
    write_report(_out_path(config, "analyze.json"), build_report("analyze", payload, config))
    return 0


def cmd_monodromy(args, config: RunConfig) -> int:
    F = load_foliation(args.foliation)
    data = extend_to_infinity(F)
    word = LoopWord.parse(args.word)
    radii = [args.radius * f for f in (0.5, 1.0)]
    germ = monodromy_germ(F, data, word, radii, tol=args.tol)
    payload = {
        "word": str(word),
        "basepoint_v": germ.basepoint,
        "multiplier_at_0": germ.multiplier_at_0,
        "samples": [list(s) for s in germ.samples],
    }
    write_report(_out_path(config, "monodromy.json"), build_report("monodromy", payload, config))
    if config.write_csv or config.write_svg:
        lifter = Lifter(F, data, tol=args.tol)
        res = lifter.lift_word(word, args.radius)
        if config.write_csv:
            from .figures import trace_csv

            trace_csv(_out_path(config, "monodromy_trace.csv"), res.trace)
        if config.write_svg:
            from .figures import trace_figure

            trace_figure(
                _out_path(config, "monodromy.svg"),
                [res.trace],
                roots=[s.a for s in data.sing_points],
                basepoint=lifter.basepoint,
            )
    return 0


def cmd_approx_linear(args, config: RunConfig) -> int:
    from .density import approx_linear
    from .germs import Germ

    mu = _parse_complex(args.mu)
    gp = _parse_complex(args.gprime)
    nu = _parse_complex(args.target)
    g = Germ.linear(gp)
    triple = approx_linear(mu, g, nu, eps=args.eps, disc_radius=args.disc_radius,
                           exponent_bound=config.exponent_bound)
    write_report(
        _out_path(config, "approx_linear.json"),
        build_report("approx-linear", triple, config),
    )
    return 0


def cmd_limit_cycle(args, config: RunConfig) -> int:
    from .cycles import build_first_cycle
    from .errors import ConditionUnsatisfiable, NoHyperbolicPoint

    F = load_foliation(args.foliation)
    data = extend_to_infinity(F)
    lifter = Lifter(F, data, tol=config.ode_tol)
    try:
        cycle = build_first_cycle(lifter, args.k, args.l, args.m,
                                  seed=_parse_complex(args.seed),
                                  margin=config.hyperbolicity_margin)
    except (ConditionUnsatisfiable, NoHyperbolicPoint) as exc:
        payload = {"found": False, "reason": str(exc)}
        write_report(_out_path(config, "limit_cycle.json"),
                     build_report("limit-cycle", payload, config))
        return 2
    payload = {
        "found": True,
        "word": str(cycle.word),
        "basepoint_u": cycle.basepoint_u,
        "multiplier": cycle.multiplier,
        "closure_residual": cycle.closure_residual,
        "max_abs_u": cycle.max_abs_u,
    }
    write_report(_out_path(config, "limit_cycle.json"),
                 build_report("limit-cycle", payload, config))
    if config.write_svg:
        from .figures import trace_figure

        trace_figure(_out_path(config, "limit_cycle.svg"), [cycle.lift_trace],
                     roots=[s.a for s in data.sing_points], basepoint=lifter.basepoint)
    return 0


def _certificate_payload(cert) -> dict:
    return {
        "valid": cert.valid,
        "transversal": cert.transversal,
        "intersection_points": cert.intersection_points,
        "eps_closeness": cert.eps_closeness,
        "exclusion_checks": {
            name: {"passed": c.passed, "residual": c.residual, "threshold": c.threshold}
            for name, c in cert.exclusion_checks.items()
        },
        "c1_word": str(cert.c1.word),
        "c2_word": str(cert.c2.word),
        "c1_closure_residual": cert.c1.closure_residual,
        "c2_closure_residual": cert.c2.closure_residual,
    }


def cmd_handle_search(args, config: RunConfig) -> int:
    from . import handlesearch

    outcome = handlesearch.run_figure_search(
        foliation_path=args.foliation,
        k=args.k, l=args.l, m=args.m,
        p=args.p, q=args.q, r=args.r, s=args.s, t=args.t,
        config=config,
        seed=_parse_complex(args.seed) if args.seed else None,
    )
    payload = _certificate_payload(outcome.certificate)
    payload["parameter_value"] = outcome.parameter_value
    payload["failing_arcs"] = outcome.failing_arcs
    write_report(_out_path(config, "handle_search.json"),
                 build_report("handle-search", payload, config))
    if config.write_svg:
        from .figures import trace_figure

        trace_figure(
            _out_path(config, "handle_search.svg"),
            [outcome.certificate.c1.lift_trace, outcome.certificate.c2.lift_trace],
            roots=outcome.roots,
        )
    return 0 if outcome.certificate.valid else 2


def cmd_sym_genus(args, config: RunConfig) -> int:
    from .symgenus import genus_report, pushforward, track_line_intersections

    F = load_foliation(args.foliation)
    seed_x, seed_y = (s.strip() for s in args.seed.rsplit(",", 1))
    push = pushforward(F)
    pts, non_tv = track_line_intersections(
        F,
        (_parse_complex(seed_x), _parse_complex(seed_y)),
        box=args.box,
        walk_seed=config.walk_seed,
        ode_tol=config.ode_tol,
    )
    payload = {
        "regular_at_w0": push.regular_at_w0,
        "transverse_points": pts,
        "non_transverse_points": non_tv,
    }
    if args.discs:
        with open(args.discs) as fh:
            discs = [(complex(c[0], c[1]), float(c[2])) for c in json.load(fh)]
        rep = genus_report(F, pts, discs)
        payload["per_disc"] = rep.per_disc
        payload["total_handles"] = rep.total_handles
        payload["jouanolou_bound"] = rep.jouanolou_bound
    write_report(_out_path(config, "sym_genus.json"),
                 build_report("sym-genus", payload, config))
    return 0


def cmd_homog(args, config: RunConfig) -> int:
    from .homog import exact_monodromy, handles_at_scales

    F = load_foliation(args.foliation)
    scales = [float(s) for s in args.scales.split(",")]
    mono = exact_monodromy(F)
    result = handles_at_scales(F, scales, tol=config.ode_tol)
    payload = {
        "mus": list(mono.mus),
        "lams": list(mono.lams),
        "numeric_max_error": mono.numeric_max_error,
        "scales": list(result.scales),
        "disjoint": result.disjoint,
        "certificates": [_certificate_payload(c) for c in result.certificates],
    }
    write_report(_out_path(config, "homog.json"), build_report("homog", payload, config))
    if config.write_svg:
        from .figures import trace_figure

        data = extend_to_infinity(F)
        cert = result.certificates[0]
        trace_figure(
            _out_path(config, "homog.svg"),
            [cert.c1.lift_trace, cert.c2.lift_trace],
            roots=[s.a for s in data.sing_points],
        )
    ok = result.disjoint and all(c.valid for c in result.certificates)
    return 0 if ok else 2


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foliationlab",
        description="numerical monodromy, limit cycles, and genus bounds "
        "for polynomial foliations of C^2",
    )
    parser.add_argument("--config", help="path to a JSON run configuration")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("analyze", help="singular points and multipliers at infinity")
    p.add_argument("--foliation", required=True)

    p = sub.add_parser("monodromy", help="monodromy germ of a loop word")
    p.add_argument("--foliation", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--radius", type=float, default=1e-3)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("approx-linear", help="exponent triple approximating a linear map")
    p.add_argument("--mu", required=True)
    p.add_argument("--gprime", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--disc-radius", type=float, default=1e-2)

    p = sub.add_parser("limit-cycle", help="hyperbolic limit cycle over the first-cycle word")
    p.add_argument("--foliation", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", default="0.01,0.0")

    p = sub.add_parser("handle-search", help="two-cycle handle certificate")
    p.add_argument("--foliation", required=True)
    for flag in ("k", "l", "m", "p", "q", "r", "s", "t"):
        p.add_argument(f"--{flag}", type=int, required=True)
    p.add_argument("--seed", default=None)

    p = sub.add_parser("sym-genus", help="ramification tracking and genus lower bounds")
    p.add_argument("--foliation", required=True)
    p.add_argument("--seed", required=True, help="leaf seed as 'x,y' (complex entries)")
    p.add_argument("--box", type=float, default=5.0)
    p.add_argument("--discs", default=None, help="JSON list of [re, im, radius]")

    p = sub.add_parser("homog", help="commutator handles of a homogeneous foliation")
    p.add_argument("--foliation", required=True)
    p.add_argument("--scales", default="1e-2,1e-3")

    return parser


_COMMANDS = {
    "analyze": cmd_analyze,
    "monodromy": cmd_monodromy,
    "approx-linear": cmd_approx_linear,
    "limit-cycle": cmd_limit_cycle,
    "handle-search": cmd_handle_search,
    "sym-genus": cmd_sym_genus,
    "homog": cmd_homog,
}


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    if not args.command:
        parser.print_usage(sys.stderr)
        return 1
    try:
        config = RunConfig.load(args.config)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args, config)
    except FoliationLabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
