"""Combinatorial oracle for double covers of a disc branched at N points.

Builds an explicit triangulated model: a rectangular strip triangulation
with the branch points as interior grid vertices on the middle line, and
branch cuts along grid edges pairing consecutive branch points (the last
cut runs to the boundary when N is odd).  The double cover is assembled
cell by cell: each triangle lifts to two copies, glued across shared edges
with a sheet swap exactly on cut edges.  Euler characteristic, boundary
circles, connected components and genus are then counted directly from
the glued complex with union-find, independently of any cover formula.
"""

from __future__ import annotations


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _strip_triangulation(N):
    """Triangles, edge->triangles map, cut edges and boundary loop for the strip."""
    width = N + 1
    triangles = []
    for x in range(width):
        for y in (-1, 0):
            a, b = (x, y), (x + 1, y)
            c, d = (x, y + 1), (x + 1, y + 1)
            triangles.append((a, b, d))
            triangles.append((a, d, c))

    edge_tris = {}
    for idx, tri in enumerate(triangles):
        for i in range(3):
            e = frozenset((tri[i], tri[(i + 1) % 3]))
            edge_tris.setdefault(e, []).append(idx)

    cuts = set()
    i = 1
    while i + 1 <= N:
        cuts.add(frozenset(((i, 0), (i + 1, 0))))
        i += 2
    if N % 2 == 1:
        cuts.add(frozenset(((N, 0), (N + 1, 0))))

    boundary_loop = (
        [(x, -1) for x in range(width + 1)]
        + [(width, 0), (width, 1)]
        + [(x, 1) for x in range(width - 1, -1, -1)]
        + [(0, 0)]
    )
    return triangles, edge_tris, cuts, boundary_loop


def glued_double_cover(N):
    """[(chi, boundary_circles, genus), ...] per connected cover component."""
    triangles, edge_tris, cuts, boundary_loop = _strip_triangulation(N)

    def lifts_of(e, s_first):
        """Lifted edge as the pair of lifted triangles it belongs to."""
        tris = edge_tris[e]
        flip = 1 if e in cuts else 0
        if len(tris) == 1:
            return ((tris[0], s_first),)
        return ((tris[0], s_first), (tris[1], s_first ^ flip))

    surface = _UnionFind()
    for e, tris in edge_tris.items():
        if len(tris) == 2:
            for s in (0, 1):
                a, b = lifts_of(e, s)
                surface.union(a, b)
    for idx in range(len(triangles)):
        for s in (0, 1):
            surface.find((idx, s))

    # lifted vertices: components of the lifted link graph at each vertex
    vertex_lift_count = {}  # component -> count contribution
    all_vertices = {v for tri in triangles for v in tri}
    for v in all_vertices:
        link = _UnionFind()
        star = [i for i, tri in enumerate(triangles) if v in tri]
        for idx in star:
            for s in (0, 1):
                link.find((idx, s))
        for e, tris in edge_tris.items():
            if v in e and len(tris) == 2:
                flip = 1 if e in cuts else 0
                for s in (0, 1):
                    link.union((tris[0], s), (tris[1], s ^ flip))
        classes = {}
        for idx in star:
            for s in (0, 1):
                classes.setdefault(link.find((idx, s)), (idx, s))
        for rep in classes.values():
            comp = surface.find(rep)
            vertex_lift_count[comp] = vertex_lift_count.get(comp, 0) + 1

    # lifted edges and faces per component
    edge_lift_count = {}
    for e, tris in edge_tris.items():
        for s in (0, 1):
            comp = surface.find((tris[0], s))
            edge_lift_count[comp] = edge_lift_count.get(comp, 0) + 1
    face_lift_count = {}
    for idx in range(len(triangles)):
        for s in (0, 1):
            comp = surface.find((idx, s))
            face_lift_count[comp] = face_lift_count.get(comp, 0) + 1

    # boundary circles: successor structure on lifted boundary edges
    n_loop = len(boundary_loop)
    boundary_edges = [
        frozenset((boundary_loop[k], boundary_loop[(k + 1) % n_loop]))
        for k in range(n_loop)
    ]
    cycles = _UnionFind()
    for k, e in enumerate(boundary_edges):
        e_next = boundary_edges[(k + 1) % n_loop]
        v = boundary_loop[(k + 1) % n_loop]  # shared corner
        link = _UnionFind()
        for ee, tris in edge_tris.items():
            if v in ee and len(tris) == 2:
                flip = 1 if ee in cuts else 0
                for s in (0, 1):
                    link.union((tris[0], s), (tris[1], s ^ flip))
        for s in (0, 1):
            (t_cur, s_cur) = lifts_of(e, s)[0]
            for s2 in (0, 1):
                (t_nxt, s_nxt) = lifts_of(e_next, s2)[0]
                if link.find((t_cur, s_cur)) == link.find((t_nxt, s_nxt)):
                    cycles.union((k, s), ((k + 1) % len(boundary_edges), s2))
    cycle_reps = {}
    for k, e in enumerate(boundary_edges):
        for s in (0, 1):
            comp = surface.find(lifts_of(e, s)[0])
            cycle_reps.setdefault(cycles.find((k, s)), comp)
    boundary_count = {}
    for comp in cycle_reps.values():
        boundary_count[comp] = boundary_count.get(comp, 0) + 1

    out = []
    for comp in sorted({surface.find((i, s)) for i in range(len(triangles)) for s in (0, 1)}):
        chi = (
            vertex_lift_count.get(comp, 0)
            - edge_lift_count.get(comp, 0)
            + face_lift_count.get(comp, 0)
        )
        b = boundary_count.get(comp, 0)
        g = (2 - b - chi) // 2
        out.append((chi, b, g))
    return out
