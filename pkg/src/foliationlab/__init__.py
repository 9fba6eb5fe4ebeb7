"""Numerical laboratory for polynomial foliations of the complex plane.

The package studies degree-n polynomial vector fields dx/dt = P(x, y),
dy/dt = Q(x, y) through their behaviour at the infinite line: monodromy
germs of the leaves near infinity, hyperbolic limit cycles built from
monodromy words, and genus lower bounds for leaves via branched double
covers.
"""

__version__ = "0.1.0"

from .foliation import (
    PolyFoliation,
    classify,
    extend_to_infinity,
    finite_singularities,
    infinite_singularities,
    is_symmetric,
    perturb_symmetric,
)
from .loops import LoopGeometry, LoopPath, LoopWord, generator_loop
from .germs import Germ, compose, find_fixed_point, koenigs_chart
from .lifting import Lifter, lift_path, monodromy_germ
from .density import approx_linear, lemma7_cycle_germ, semigroup_density_check
from .cycles import build_first_cycle, build_second_cycle, certify_handle, connection_solve
from .symgenus import genus_report, pushforward, riemann_hurwitz, track_line_intersections
from .homog import commutator_handle, exact_monodromy, handles_at_scales

__all__ = [
    "PolyFoliation",
    "classify",
    "extend_to_infinity",
    "finite_singularities",
    "infinite_singularities",
    "is_symmetric",
    "perturb_symmetric",
    "LoopGeometry",
    "LoopPath",
    "LoopWord",
    "generator_loop",
    "Germ",
    "compose",
    "find_fixed_point",
    "koenigs_chart",
    "Lifter",
    "lift_path",
    "monodromy_germ",
    "approx_linear",
    "lemma7_cycle_germ",
    "semigroup_density_check",
    "build_first_cycle",
    "build_second_cycle",
    "certify_handle",
    "connection_solve",
    "genus_report",
    "pushforward",
    "riemann_hurwitz",
    "track_line_intersections",
    "commutator_handle",
    "exact_monodromy",
    "handles_at_scales",
    "__version__",
]
