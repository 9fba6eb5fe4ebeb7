"""Loop words and their geometric realizations in the v-plane.

A LoopWord is the combinatorial side of monodromy: a word in the generators
g_1 ... g_{n+1} with integer exponents.  A LoopPath realizes one generator
letter as a concrete closed path: straight run from the basepoint towards
the root, a number of full circles, straight return.  Approach segments that
pass too close to another root are re-routed around it with a small arc,
which does not change the homotopy class.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryInfeasible


@dataclass(frozen=True)
class LoopWord:
    """Word in the monodromy generators, normalized so that adjacent letters differ."""

    letters: tuple  # ((generator_index, exponent), ...)

    def __post_init__(self):
        norm = []
        for j, e in self.letters:
            if e == 0:
                continue
            if norm and norm[-1][0] == j:
                merged = norm[-1][1] + e
                norm.pop()
                if merged != 0:
                    norm.append((j, merged))
            else:
                norm.append((int(j), int(e)))
        object.__setattr__(self, "letters", tuple(norm))

    def __mul__(self, other: "LoopWord") -> "LoopWord":
        return LoopWord(self.letters + other.letters)

    def inverse(self) -> "LoopWord":
        return LoopWord(tuple((j, -e) for j, e in reversed(self.letters)))

    def abelianized(self, n_gens: int) -> np.ndarray:
        out = np.zeros(n_gens, dtype=int)
        for j, e in self.letters:
            out[j - 1] += e
        return out

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @staticmethod
    def generator(j: int, exponent: int = 1) -> "LoopWord":
        return LoopWord(((j, exponent),))

    @staticmethod
    def parse(text: str) -> "LoopWord":
        """Parse words like "g2 g1^5 g2^-3"."""
        letters = []
        for tok in text.split():
            m = re.fullmatch(r"g(\d+)(?:\^(-?\d+))?", tok)
            if not m:
                raise ValueError(f"cannot parse loop letter {tok!r}")
            letters.append((int(m.group(1)), int(m.group(2) or 1)))
        return LoopWord(tuple(letters))

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(
            f"g{j}" if e == 1 else f"g{j}^{e}" for j, e in self.letters
        )


@dataclass(frozen=True)
class Line:
    start: complex
    end: complex

    def point(self, s: float) -> complex:
        return self.start + s * (self.end - self.start)

    def velocity(self, s: float) -> complex:
        return self.end - self.start

    def length(self) -> float:
        return abs(self.end - self.start)


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float  # may differ by several turns; sign gives orientation

    def point(self, s: float) -> complex:
        th = self.theta0 + s * (self.theta1 - self.theta0)
        return self.center + self.radius * cmath.exp(1j * th)

    def velocity(self, s: float) -> complex:
        th = self.theta0 + s * (self.theta1 - self.theta0)
        return self.radius * 1j * (self.theta1 - self.theta0) * cmath.exp(1j * th)

    def length(self) -> float:
        return self.radius * abs(self.theta1 - self.theta0)


@dataclass(frozen=True)
class LoopPath:
    """Closed path in the v-plane realized as line segments and circular arcs."""

    segments: tuple
    basepoint: complex
    clearance: float

    def reversed(self) -> "LoopPath":
        segs = []
        for seg in reversed(self.segments):
            if isinstance(seg, Line):
                segs.append(Line(seg.end, seg.start))
            else:
                segs.append(Arc(seg.center, seg.radius, seg.theta1, seg.theta0))
        return LoopPath(tuple(segs), self.basepoint, self.clearance)

    def sample(self, per_segment: int = 64) -> np.ndarray:
        pts = []
        for seg in self.segments:
            pts.extend(seg.point(s) for s in np.linspace(0.0, 1.0, per_segment, endpoint=False))
        pts.append(self.segments[-1].point(1.0))
        return np.array(pts)

    def winding_numbers(self, points, per_segment: int = 256) -> list:
        """Winding of the closed path around each query point, by argument tracking."""
        samples = self.sample(per_segment)
        out = []
        for a in points:
            dphi = np.angle((samples[1:] - a) / (samples[:-1] - a))
            out.append(int(round(float(np.sum(dphi)) / (2 * math.pi))))
        return out


@dataclass(frozen=True)
class LoopGeometry:
    """Knobs for generator-loop construction."""

    basepoint: complex | None = None
    radius_factor: float = 0.35  # circle radius as a fraction of min root separation
    detour_factor: float = 0.5   # detour clearance as a fraction of each root's radius
    gap_angle: float = 0.3       # angular offset between the entry and exit chords


def default_basepoint(roots) -> complex:
    """2x the largest |a_j|, on a ray whose argument stays away from all arg(a_j)."""
    roots = np.asarray(roots, dtype=complex)
    scale = 2.0 * max(float(np.max(np.abs(roots))), 1e-6)
    args = sorted(float(cmath.phase(a)) for a in roots if abs(a) > 1e-12)
    if not args:
        return complex(scale)
    # largest angular gap between consecutive root directions
    gaps = []
    for k in range(len(args)):
        a0 = args[k]
        a1 = args[(k + 1) % len(args)] + (2 * math.pi if k + 1 == len(args) else 0.0)
        gaps.append((a1 - a0, 0.5 * (a0 + a1)))
    _, mid = max(gaps)
    return scale * cmath.exp(1j * mid)


def _segment_with_detours(start: complex, end: complex, roots, radii, skip, detour_factor):
    """Straight run start->end, arcing around any other root that is too close."""
    segs = []
    cur = start
    direction = end - start
    if abs(direction) < 1e-15:
        return segs
    # find offending roots ordered along the segment
    offenders = []
    for i, (a, r) in enumerate(zip(roots, radii)):
        if i == skip:
            continue
        t = ((a - start).real * direction.real + (a - start).imag * direction.imag) / abs(direction) ** 2
        if t <= 1e-9 or t >= 1 - 1e-9:
            continue
        d = abs(start + t * direction - a)
        safe = detour_factor * r
        if d < safe:
            offenders.append((t, a, safe))
    offenders.sort()
    for t, a, safe in offenders:
        # chord of the circle |v - a| = safe cut by the segment line
        foot = start + t * direction
        d = abs(foot - a)
        half = math.sqrt(max(safe**2 - d**2, 0.0)) / abs(direction)
        t_in, t_out = t - half, t + half
        p_in = start + max(t_in, 0.0) * direction
        p_out = start + min(t_out, 1.0) * direction
        p_in = a + safe * (p_in - a) / abs(p_in - a)
        p_out = a + safe * (p_out - a) / abs(p_out - a)
        th0 = cmath.phase(p_in - a)
        th1 = cmath.phase(p_out - a)
        # shorter side; |th1-th0| stays below pi so the detour adds no winding
        while th1 - th0 > math.pi:
            th1 -= 2 * math.pi
        while th1 - th0 < -math.pi:
            th1 += 2 * math.pi
        if abs(p_in - cur) > 1e-14:
            segs.append(Line(cur, p_in))
        segs.append(Arc(a, safe, th0, th1))
        cur = p_out
    if abs(end - cur) > 1e-14:
        segs.append(Line(cur, end))
    return segs


def _path_clearance(segments, roots, per_segment: int = 256) -> float:
    pts = []
    for seg in segments:
        pts.extend(seg.point(s) for s in np.linspace(0.0, 1.0, per_segment))
    pts = np.array(pts)
    return float(min(np.min(np.abs(pts - a)) for a in roots))


def generator_loop(data, j: int, geometry: LoopGeometry | None = None, exponent: int = 1) -> LoopPath:
    """Closed path realizing g_j^exponent around the j-th singular point.

    j is 1-based in the order of data.sing_points.  The circle radius is a
    fixed fraction of the distance to the nearest other root, so distinct
    generator circles never meet.
    """
    geometry = geometry or LoopGeometry()
    points = [s.a for s in data.sing_points]
    if not 1 <= j <= len(points):
        raise ValueError(f"generator index {j} out of range 1..{len(points)}")
    roots = np.array(points, dtype=complex)
    n = len(roots)
    if n == 1:
        seps = np.array([max(1.0, abs(roots[0]))])
    else:
        seps = np.array(
            [min(abs(roots[k] - roots[m]) for m in range(n) if m != k) for k in range(n)]
        )
    radii = geometry.radius_factor * seps
    if np.min(radii) < 1e-12:
        raise GeometryInfeasible("roots at infinity are numerically coincident")
    v0 = geometry.basepoint if geometry.basepoint is not None else default_basepoint(roots)
    a = roots[j - 1]
    r = float(radii[j - 1])
    if abs(v0 - a) <= r:
        raise GeometryInfeasible("basepoint inside the generator circle")
    entry = a + r * (v0 - a) / abs(v0 - a)
    th0 = cmath.phase(entry - a)
    # the arc stops gap_angle short of a full multiple of 2 pi, so the exit
    # chord differs from the entry chord and the loop never retraces itself
    # (two traversals of the same segment would let distinct lifted cycles
    # overlap along whole arcs); the short gap faces the basepoint, so the
    # winding number around a stays equal to the exponent
    sgn = 1 if exponent > 0 else -1
    th1 = th0 + 2 * math.pi * exponent - sgn * geometry.gap_angle
    exit_pt = a + r * cmath.exp(1j * th1)
    segs = []
    segs.extend(_segment_with_detours(v0, entry, roots, radii, j - 1, geometry.detour_factor))
    segs.append(Arc(a, r, th0, th1))
    back = _segment_with_detours(exit_pt, v0, roots, radii, j - 1, geometry.detour_factor)
    segs.extend(back)
    clearance = _path_clearance(segs, roots)
    if clearance <= 0.0:
        raise GeometryInfeasible("path touches a singular point")
    return LoopPath(tuple(segs), v0, clearance)
