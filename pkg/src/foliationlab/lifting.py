"""Numerical continuation of leaves over loops in the infinite line.

A loop in the v-plane with clearance from the roots of h lifts to nearby
leaves by integrating the graph form

    du/dv = u * Pt(u, v) / (v * Pt(u, v) - Qt(u, v))

along the path parameter.  The derivative of the endpoint with respect to
the starting point rides along via the variational equation, so monodromy
maps come back with analytically transported derivatives instead of finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LeftDomain, SingularDenominator
from .germs import Germ
from .integrate import integrate
from .loops import LoopGeometry, LoopPath, LoopWord, generator_loop
from .polynomials import poly_diff, poly_eval, univariate_eval

DEFAULT_CHART_BOUND = 0.5
DEFAULT_TOL = 1e-11


@dataclass
class LiftResult:
    u_end: complex
    derivative: complex
    trace: list  # [(v, u), ...] at accepted integrator steps
    max_abs_u: float
    steps_taken: int
    est_error: float
    letter_spans: list | None = None  # [((j, e), start_idx, end_idx), ...] into trace


@dataclass
class SampledGerm:
    word: LoopWord
    basepoint: complex
    samples: list  # [(z, M(z), M'(z)), ...]
    domain_radius: float
    multiplier_at_0: complex


class Lifter:
    """Caches loop geometry and lifts words over a fixed foliation."""

    def __init__(
        self,
        F,
        data,
        geometry: LoopGeometry | None = None,
        chart_bound: float = DEFAULT_CHART_BOUND,
        tol: float = DEFAULT_TOL,
    ):
        self.F = F
        self.data = data
        self.geometry = geometry or LoopGeometry()
        self.chart_bound = chart_bound
        self.tol = tol
        self._paths: dict = {}
        self._Pt = data.Ptilde_coeffs
        self._Qt = data.Qtilde_coeffs
        self._Pt_u = poly_diff(self._Pt, 0)
        self._Qt_u = poly_diff(self._Qt, 0)
        self._h = data.h_coeffs

    @property
    def basepoint(self) -> complex:
        return self.path_for(1, 1).basepoint

    def path_for(self, j: int, exponent: int) -> LoopPath:
        key = (j, exponent)
        if key not in self._paths:
            self._paths[key] = generator_loop(self.data, j, self.geometry, exponent)
        return self._paths[key]

    def _field(self, seg):
        Pt, Qt = self._Pt, self._Qt
        Pt_u, Qt_u = self._Pt_u, self._Qt_u

        def f(s, y):
            u, w = y
            v = seg.point(s)
            dv = seg.velocity(s)
            p = poly_eval(Pt, u, v)
            q = poly_eval(Qt, u, v)
            denom = v * p - q
            num = u * p
            # d/du of the direction field, for the variational equation
            p_u = poly_eval(Pt_u, u, v)
            q_u = poly_eval(Qt_u, u, v)
            denom_u = v * p_u - q_u
            dfdu = (p + u * p_u) / denom - num * denom_u / denom**2
            return np.array([dv * num / denom, dv * dfdu * w], dtype=complex)

        return f

    def _monitor(self, seg):
        bound = self.chart_bound
        h = self._h
        Pt, Qt = self._Pt, self._Qt

        def check(s, y):
            u = y[0]
            if abs(u) > bound:
                raise LeftDomain(f"|u|={abs(u):.3g} exceeded chart bound {bound:.3g}")
            v = seg.point(s)
            denom = v * poly_eval(Pt, u, v) - poly_eval(Qt, u, v)
            href = univariate_eval(h, v)
            if abs(denom) < 0.02 * abs(href):
                raise SingularDenominator(
                    f"direction field denominator collapsed near v={v:.4g}"
                )
            return None

        return check

    def lift_path(self, path: LoopPath, u_start: complex, tol: float | None = None) -> LiftResult:
        tol = tol if tol is not None else self.tol
        u, w = complex(u_start), 1.0 + 0j
        trace = [(path.segments[0].point(0.0), u)]
        max_u = abs(u)
        steps = 0
        err = 0.0
        for seg in path.segments:
            res = integrate(
                self._field(seg),
                0.0,
                1.0,
                np.array([u, w], dtype=complex),
                tol=tol,
                monitor=self._monitor(seg),
                record=True,
                # u = 0 is the infinite-line leaf, an exact invariant of the
                # lift equation, so relative control stays well-posed however
                # deep a contracting word drives |u|
                atol_scale=1e-290,
            )
            u, w = res.y
            steps += res.steps
            err += res.est_error
            for t, y in zip(res.ts[1:], res.ys[1:]):
                trace.append((seg.point(t), y[0]))
                max_u = max(max_u, abs(y[0]))
        return LiftResult(u, w, trace, max_u, steps, err)

    def lift_word(self, word: LoopWord, u_start: complex, tol: float | None = None) -> LiftResult:
        """Continue the leaf over the concatenation of generator loops.

        Traversal order equals letter order, so the resulting map is
        automatically M_{last} o ... o M_{first} (loop concatenation reverses
        composition order).
        """
        u, w = complex(u_start), 1.0 + 0j
        trace = []
        spans = []
        max_u = abs(u)
        steps = 0
        err = 0.0
        for j, e in word.letters:
            res = self.lift_path(self.path_for(j, e), u, tol)
            u = res.u_end
            w *= res.derivative
            start = len(trace)
            trace.extend(res.trace if not trace else res.trace[1:])
            spans.append(((j, e), max(start - 1, 0), len(trace) - 1))
            max_u = max(max_u, res.max_abs_u)
            steps += res.steps_taken
            err += res.est_error
        if not trace:
            v0 = self.basepoint
            trace = [(v0, u)]
        return LiftResult(u, w, trace, max_u, steps, err, spans)

    def domain_radius(self, word: LoopWord, start: float | None = None, bisect_steps: int = 18) -> float:
        """Largest |u_start| (up to bisection accuracy) for which the lift stays in the chart."""
        hi = start if start is not None else 0.5 * self.chart_bound
        lo = 0.0
        if self._word_ok(word, hi):
            return hi
        for _ in range(bisect_steps):
            mid = 0.5 * (lo + hi)
            if mid == 0.0:
                break
            if self._word_ok(word, mid):
                lo = mid
            else:
                hi = mid
        return 0.8 * lo

    def _word_ok(self, word: LoopWord, r: float) -> bool:
        try:
            self.lift_word(word, r, tol=max(self.tol, 1e-9))
            self.lift_word(word, -r, tol=max(self.tol, 1e-9))
            return True
        except (LeftDomain, SingularDenominator):
            return False

    def germ(self, word: LoopWord, domain_radius: float | None = None, tol: float | None = None) -> Germ:
        """Monodromy germ of a word as a closure over the lifting machinery."""
        if domain_radius is None:
            domain_radius = self.domain_radius(word)
        mult = self.lift_word(word, 0.0, tol).derivative
        inv_word = word.inverse()

        def ev(z):
            res = self.lift_word(word, z, tol)
            return res.u_end, res.derivative

        def inv_ev(z):
            res = self.lift_word(inv_word, z, tol)
            return res.u_end, res.derivative

        return Germ(ev, domain_radius, mult, inv_ev)

    def generator_germ(self, j: int, domain_radius: float | None = None) -> Germ:
        return self.germ(LoopWord.generator(j), domain_radius)

    def polynomial_germ(
        self,
        word: LoopWord,
        sample_radius: float,
        degree: int = 32,
        n_samples: int = 128,
        tol: float | None = None,
    ) -> Germ:
        """Taylor-polynomial proxy of a word germ, fitted from circle samples.

        The germ is sampled on |z| = sample_radius and the Taylor
        coefficients are recovered by FFT.  Evaluations of the proxy are
        closed-form, so compositions with large iteration counts (Koenigs
        charts, long word searches) cost microseconds instead of an ODE
        solve each.  Aliasing decays like (|z| / R_analytic)^n_samples, so
        keep sample_radius a few times larger than the working disc.
        """
        degree = min(degree, n_samples - 1)
        zs = sample_radius * np.exp(2j * np.pi * np.arange(n_samples) / n_samples)
        vals = np.array([self.lift_word(word, z, tol).u_end for z in zs])
        coeffs = np.fft.fft(vals) / n_samples
        coeffs = coeffs[: degree + 1] / sample_radius ** np.arange(degree + 1)
        coeffs[0] = 0.0  # the word germ fixes the origin exactly
        dcoeffs = coeffs[1:] * np.arange(1, degree + 1)

        def ev(z):
            return (
                complex(np.polyval(coeffs[::-1], z)),
                complex(np.polyval(dcoeffs[::-1], z)),
            )

        # trust the fit only well inside the sampling circle
        return Germ(ev, 0.5 * sample_radius, complex(coeffs[1]))


def lift_path(F, data, path: LoopPath, u_start: complex, tol: float = DEFAULT_TOL,
              chart_bound: float = DEFAULT_CHART_BOUND) -> LiftResult:
    return Lifter(F, data, chart_bound=chart_bound, tol=tol).lift_path(path, u_start)


def monodromy_germ(
    F,
    data,
    word: LoopWord,
    sample_radii,
    tol: float = DEFAULT_TOL,
    geometry: LoopGeometry | None = None,
    points_per_circle: int = 8,
) -> SampledGerm:
    """Sample a monodromy germ on concentric circles around the origin.

    multiplier_at_0 comes from circle averages of M(z)/z on the two smallest
    radii, Richardson-extrapolated in the radius.
    """
    lifter = Lifter(F, data, geometry=geometry, tol=tol)
    radii = sorted(float(r) for r in sample_radii)
    samples = []
    means = {}
    for r in radii:
        ratios = []
        for k in range(points_per_circle):
            z = r * np.exp(2j * np.pi * k / points_per_circle)
            res = lifter.lift_word(word, z)
            samples.append((z, res.u_end, res.derivative))
            ratios.append(res.u_end / z)
        means[r] = np.mean(ratios)
    if word.is_identity:
        mult = 1.0 + 0j
    elif len(radii) >= 2:
        r0, r1 = radii[0], radii[1]
        m0, m1 = means[r0], means[r1]
        # circle averages differ from the multiplier by c*r^N (N points per
        # circle); eliminate that term using the two smallest radii
        N = points_per_circle
        mult = m0 - (m1 - m0) * r0**N / (r1**N - r0**N)
    else:
        mult = means[radii[0]]
    return SampledGerm(word, lifter.basepoint, samples, radii[-1], mult)
