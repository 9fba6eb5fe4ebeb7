"""One-dimensional holomorphic germs: composition, fixed points, linearization.

A Germ is a closure z -> (value, derivative) valid on a disc, not a
truncated power series; compositions of high iterates stay accurate because
each evaluation re-runs the underlying machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DomainEscape,
    NoConvergence,
    NonHyperbolicMultiplier,
    NonIsolated,
    SlowConvergence,
)

DEFAULT_HYPERBOLICITY_MARGIN = 1e-3


@dataclass
class Germ:
    """Holomorphic germ on a disc |z| < domain_radius.

    evaluator(z) must return (value, derivative).  multiplier is the
    derivative at the origin when the germ fixes 0, else None.
    inverse_evaluator, when present, is used for exact inversion; otherwise
    the inverse is computed by Newton iteration on the evaluator.
    """

    evaluator: object
    domain_radius: float
    multiplier: complex | None = None
    inverse_evaluator: object | None = None

    def eval(self, z: complex):
        if abs(z) > self.domain_radius * (1 + 1e-12):
            raise DomainEscape(
                f"|z|={abs(z):.3g} outside germ domain radius {self.domain_radius:.3g}"
            )
        return self.evaluator(z)

    def __call__(self, z: complex) -> complex:
        return self.eval(z)[0]

    def derivative(self, z: complex) -> complex:
        return self.eval(z)[1]

    def inverse(self) -> "Germ":
        if self.inverse_evaluator is not None:
            inv_mult = None if self.multiplier is None else 1.0 / self.multiplier
            return Germ(self.inverse_evaluator, self.domain_radius, inv_mult, self.evaluator)
        return Germ(
            _newton_inverse(self),
            self.domain_radius * _inverse_radius_factor(self),
            None if self.multiplier is None else 1.0 / self.multiplier,
            self.evaluator,
        )

    def iterate(self, t: int) -> "Germ":
        """t-fold composition; negative t iterates the inverse."""
        base = self if t >= 0 else self.inverse()
        k = abs(t)

        def ev(z):
            w, dw = z, 1.0 + 0j
            for _ in range(k):
                w, d = base.eval(w)
                dw *= d
            return w, dw

        mult = None if self.multiplier is None else self.multiplier**t
        return Germ(ev, base.domain_radius, mult)

    @staticmethod
    def identity(radius: float = np.inf) -> "Germ":
        return Germ(lambda z: (z, 1.0 + 0j), radius, 1.0 + 0j, lambda z: (z, 1.0 + 0j))

    @staticmethod
    def linear(mu: complex, radius: float = np.inf) -> "Germ":
        mu = complex(mu)
        return Germ(
            lambda z: (mu * z, mu),
            radius,
            mu,
            lambda z: (z / mu, 1.0 / mu),
        )

    @staticmethod
    def from_function(f, df, radius: float, multiplier: complex | None = None) -> "Germ":
        return Germ(lambda z: (f(z), df(z)), radius, multiplier)


def _inverse_radius_factor(g: Germ) -> float:
    if g.multiplier is None or abs(g.multiplier) <= 1.0:
        return 1.0
    # expanding germ: the inverse contracts, a full-radius domain is safe
    return 1.0


def _newton_inverse(g: Germ, tol: float = 1e-13, max_iter: int = 60):
    def inv(z):
        w = z if g.multiplier is None else z / g.multiplier
        w = min(1.0, g.domain_radius / max(abs(w), 1e-300) * 0.99) * w
        for _ in range(max_iter):
            val, der = g.eval(w)
            if abs(der) < 1e-300:
                raise NoConvergence("degenerate derivative while inverting germ")
            step = (val - z) / der
            w = w - step
            if abs(step) < tol * max(abs(w), 1e-30):
                val, der = g.eval(w)
                return w, 1.0 / der
        raise NoConvergence("germ inversion did not converge")

    return inv


def compose(*gs: Germ) -> Germ:
    """Function composition: compose(f, g)(z) = f(g(z)).

    Also accepts a single list.  Domain chaining is checked lazily at
    evaluation time (the inner germs raise DomainEscape).
    """
    if len(gs) == 1 and isinstance(gs[0], (list, tuple)):
        gs = tuple(gs[0])
    if not gs:
        return Germ.identity()

    def ev(z):
        w, dw = z, 1.0 + 0j
        for g in reversed(gs):
            w, d = g.eval(w)
            dw *= d
        return w, dw

    mult = 1.0 + 0j
    for g in gs:
        if g.multiplier is None:
            mult = None
            break
        mult *= g.multiplier
    return Germ(ev, gs[-1].domain_radius, mult)


@dataclass(frozen=True)
class FixedPoint:
    z_star: complex
    multiplier: complex
    hyperbolic: bool
    basin_radius_est: float


def find_fixed_point(
    M: Germ,
    seed: complex,
    tol: float = 1e-12,
    margin: float = DEFAULT_HYPERBOLICITY_MARGIN,
    max_iter: int = 50,
) -> FixedPoint:
    """Newton iteration on M(z) - z with the transported derivative."""
    z = complex(seed)
    for _ in range(max_iter):
        val, der = M.eval(z)
        g = val - z
        dg = der - 1.0
        if abs(g) < tol:
            if abs(dg) < 1e-12:
                raise NonIsolated("fixed point is not isolated to working precision")
            mult = der
            basin = _basin_estimate(M, z, mult)
            return FixedPoint(z, mult, abs(abs(mult) - 1.0) > margin, basin)
        if abs(dg) < 1e-12:
            raise NonIsolated("derivative of M(z) - z vanished during iteration")
        z = z - g / dg
        if abs(z) > M.domain_radius:
            raise NoConvergence("Newton iterate escaped the germ domain")
    raise NoConvergence(f"no fixed point after {max_iter} Newton iterations")


def _basin_estimate(M: Germ, z_star: complex, mult: complex) -> float:
    h = max(abs(z_star), M.domain_radius * 1e-3) * 1e-3
    try:
        d_plus = M.eval(z_star + h)[1]
        d_minus = M.eval(z_star - h)[1]
    except DomainEscape:
        return 0.1 * M.domain_radius
    second = abs(d_plus - d_minus) / (2 * h)
    if second < 1e-300:
        return 0.5 * M.domain_radius
    return min(0.5 * M.domain_radius, abs(abs(mult) - 1.0) / (2 * second))


@dataclass
class SchroderChart:
    """Koenigs linearizing coordinate: phi(M(z)) = mu * phi(z), phi'(0) = 1."""

    forward: object  # z -> (phi, phi')
    inverse: object  # zeta -> z
    valid_radius: float
    multiplier: complex
    residual: float

    def __call__(self, z: complex) -> complex:
        return self.forward(z)[0]

    def pull_back(self, zeta: complex) -> complex:
        return self.inverse(zeta)


def koenigs_chart(
    M: Germ,
    margin: float = 0.05,
    tol: float = 1e-12,
    working_radius: float | None = None,
    max_iter: int = 400,
) -> SchroderChart:
    """Linearizing chart of a hyperbolic germ fixing 0.

    Contracting case: phi = lim mu^-k M^k, iterated until successive
    iterates differ by less than tol.  Expanding germs are handled through
    their inverse (same phi, multiplier 1/mu for the inverse).
    """
    if M.multiplier is None:
        raise NonHyperbolicMultiplier("germ does not fix the origin")
    mu = complex(M.multiplier)
    if abs(abs(mu) - 1.0) <= margin:
        raise NonHyperbolicMultiplier(
            f"| |mu| - 1 | = {abs(abs(mu) - 1.0):.3g} below margin {margin:.3g}"
        )
    base = M if abs(mu) < 1.0 else M.inverse()
    mu_c = complex(base.multiplier)

    radius = working_radius if working_radius is not None else 0.5 * base.domain_radius

    def forward(z):
        if abs(z) > base.domain_radius * (1 + 1e-9):
            raise DomainEscape(f"|z|={abs(z):.3g} outside chart domain {base.domain_radius:.3g}")
        w, dw = z, 1.0 + 0j
        prev = w
        for k in range(1, max_iter + 1):
            w, d = base.eval(w)
            dw *= d
            phi = w / mu_c**k
            dphi = dw / mu_c**k
            if abs(phi - prev) < tol * max(abs(phi), 1e-30):
                return phi, dphi
            prev = phi
        raise SlowConvergence("Koenigs iteration did not stabilize")

    def inverse(zeta):
        z = zeta
        for _ in range(60):
            phi, dphi = forward(z)
            step = (phi - zeta) / dphi
            z = z - step
            if abs(step) < tol * max(abs(z), 1e-30):
                return z
        raise NoConvergence("chart inversion did not converge")

    # certify the conjugacy residual on a sample circle inside the disc
    residual = 0.0
    rr = 0.5 * radius
    for z in rr * np.exp(2j * np.pi * np.arange(16) / 16):
        lhs = forward(M.eval(z)[0])[0]
        rhs = mu * forward(z)[0]
        residual = max(residual, abs(lhs - rhs))
    return SchroderChart(forward, inverse, radius, mu, residual)
