"""Admissibility, Haken sums and the compact core of a spun-normal surface.

The core is built from the quads of N together with finitely many triangles
at every tet corner.  Triangle counts come from propagating arc counts over a
spanning tree of each link's dual graph; along the remaining link edges the
counts may disagree (this is the spinning), and the unmatched arcs nearest
the vertex become boundary.
"""
import random
from dataclasses import dataclass
from typing import Optional

from . import linalg
from .boundary import qmodulus
from .links import build_link, standard_cycle
from .qmatch import in_q
from .triangulation import edge_pair, pair_edges


class SurfaceError(ValueError):
    pass


def is_admissible(N):
    if len(N) % 3:
        return False
    if any(x < 0 for x in N):
        return False
    return all(sum(1 for x in N[i:i + 3] if x) <= 1 for i in range(0, len(N), 3))


def haken_sum(tri, N, L):
    for X in (N, L):
        if not in_q(tri, X):
            raise SurfaceError("not in Q(T)")
        if not is_admissible(X):
            raise SurfaceError("not admissible")
    S = tuple(a + b for a, b in zip(N, L))
    if not is_admissible(S):
        raise SurfaceError("incompatible supports")
    return S


def kneser_haken_bounds(tri):
    if tri.size < 1:
        raise SurfaceError("empty triangulation")
    return 12 * tri.size, 6 * tri.size


def _check_solution(tri, N):
    if len(N) != 3 * tri.size or not in_q(tri, N):
        raise SurfaceError("not in Q(T)")
    if any(int(x) != x for x in N):
        raise SurfaceError("not integral")
    if not is_admissible(N):
        raise SurfaceError("not admissible")
    return tuple(int(x) for x in N)


@dataclass(frozen=True)
class TriangleFill:
    counts: dict          # (tet, corner) -> number of triangles
    padding: int
    relative: dict        # (tet, corner) -> tree-propagated value (root = 0)
    discrepancies: tuple  # (vertex, (k, side), value) on non-tree link edges

    @property
    def spin_set(self):
        return tuple(sorted({v for v, _, val in self.discrepancies if val}))


def _tree(link, rng):
    """Spanning tree of the dual graph: BFS from triangle 0, or a random one."""
    n = len(link.triangles)
    if rng is None:
        return dict(link.dual_tree), 0
    root = rng.randrange(n)
    parent = {root: None}
    frontier = [root]
    while frontier:
        k = frontier.pop(rng.randrange(len(frontier)))
        sides = list(link.sides(k))
        rng.shuffle(sides)
        for s in sides:
            k2, _ = link.neighbor(k, s)
            if k2 not in parent:
                parent[k2] = (k, s)
                frontier.append(k2)
    return parent, root


def _propagate(link, N, parent, root):
    rel = {root: 0}
    order = [root]
    children = {}
    for k, ps in parent.items():
        if ps:
            children.setdefault(ps[0], []).append((k, ps[1]))
    for k in order:
        for k2, s in children.get(k, []):
            _, s2 = link.neighbor(k, s)
            rel[k2] = rel[k] + N[qmodulus(link, k, s)] - N[qmodulus(link, k2, s2)]
            order.append(k2)
    return rel


def padding_minimum(tri, N, seed=None):
    N = _check_solution(tri, N)
    rng = None if seed is None else random.Random(seed)
    best = 0
    for vc in tri.vertices:
        link = build_link(tri, vc.index)
        parent, root = _tree(link, rng)
        rel = _propagate(link, N, parent, root)
        best = max(best, max(abs(x) for x in rel.values()))
    return best + 1


def triangle_fill(tri, N, K, seed=None):
    N = _check_solution(tri, N)
    if K < 1:
        raise SurfaceError("padding must be positive")
    rng = None if seed is None else random.Random(seed)
    counts, relative, disc = {}, {}, []
    for vc in tri.vertices:
        link = build_link(tri, vc.index)
        parent, root = _tree(link, rng)
        rel = _propagate(link, N, parent, root)
        low = min(rel.values())
        tree = {(ps, k) for k, ps in parent.items() if ps}
        for k, corner in enumerate(link.triangles):
            counts[corner] = rel[k] - low + K
            relative[corner] = rel[k]
        for a, b in link.edges:
            if (a, b[0]) in tree or (b, a[0]) in tree:
                continue
            (k, s), (k2, s2) = a, b
            # arc count on side a minus arc count on side b
            val = (rel[k] + N[qmodulus(link, k, s)]) - (rel[k2] + N[qmodulus(link, k2, s2)])
            disc.append((vc.index, a, val))
    return TriangleFill(counts, K, relative, tuple(disc))


@dataclass(frozen=True)
class CoreSurface:
    chi: Optional[int]
    orientable: bool
    boundary_circles: dict     # vertex -> count (None where withheld)
    spin_set: tuple
    quads: int
    triangles: int
    components: int
    euler_cells: int           # V - E + F, even when chi is withheld
    padding: int

    def report(self):
        chi = "n/a" if self.chi is None else str(self.chi)
        bd = "[" + ", ".join(f"({v},{'n/a' if c is None else c})"
                             for v, c in sorted(self.boundary_circles.items())) + "]"
        spins = "[" + ", ".join(str(v) for v in self.spin_set) + "]"
        return f"surface: chi={chi} orientable={self.orientable} boundary={bd} spins_into={spins}"


class _UF:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def _quad_corners(k):
    """Cyclic corner order of a type-k quad, as tet edges (a_i, b_j)."""
    (a1, a2), (b1, b2) = pair_edges(k)
    return ((a1, b1), (a1, b2), (a2, b2), (a2, b1))


def build_discs(tri, N, counts):
    """Discs and their face slots.

    Returns (discs, slots) where discs maps a disc id to its cyclic list of
    corner edges, and slots maps (tet, face, arc type) to the disc ids whose
    arcs lie there, ordered from the far side of the arc-type vertex inwards.
    """
    discs = {}
    slots = {}
    for tet in range(tri.size):
        for k in range(3):
            n = N[3 * tet + k]
            for i in range(n):
                discs[("q", tet, k, i)] = tuple(tuple(sorted(e)) for e in _quad_corners(k))
        for x in range(4):
            cyc = standard_cycle(x)
            for j in range(counts.get((tet, x), 0)):
                discs[("t", tet, x, j)] = tuple(tuple(sorted((x, w))) for w in cyc)
        for f in range(4):
            for x in range(4):
                if x == f:
                    continue
                k = edge_pair(x, f)
                n = N[3 * tet + k]
                side_a = x in pair_edges(k)[0]
                qs = [("q", tet, k, i) for i in range(n)]
                if side_a:
                    qs.reverse()
                ts = [("t", tet, x, j) for j in range(counts.get((tet, x), 0))]
                slots[(tet, f, x)] = qs + ts
    return discs, slots


def _arc_corners(face, x):
    """The two corner edges of an x-type arc on the given face."""
    ws = [w for w in range(4) if w not in (face, x)]
    return tuple(sorted((x, ws[0]))), tuple(sorted((x, ws[1])))


def assemble(tri, N, counts):
    """Glue the discs; return cell data of the resulting surface."""
    discs, slots = build_discs(tri, N, counts)
    verts = _UF()
    glued = {}     # (disc, face) -> (disc, face, corner map)
    arcs = []
    for (tet, f, x), lst in slots.items():
        for d in lst:
            arcs.append((d, f))
    for (tet, f, x), lst in slots.items():
        g = tri.tets[tet][f]
        f2, y = g.perm[f], g.perm[x]
        if (tet, f, x) > (g.tet, f2, y):
            continue
        other = slots[(g.tet, f2, y)]
        for d1, d2 in zip(lst, other):
            cmap = {}
            for c in _arc_corners(f, x):
                c2 = tuple(sorted((g.perm[c[0]], g.perm[c[1]])))
                cmap[c] = c2
                verts.union((d1, c), (d2, c2))
            glued[(d1, f)] = (d2, f2, cmap)
            glued[(d2, f2)] = (d1, f, {v: k for k, v in cmap.items()})
    for d, corners in discs.items():
        for c in corners:
            verts.find((d, c))
    V = len({verts.find(x) for x in list(verts.parent)})
    E = len(arcs) - len(glued) // 2
    F = len(discs)
    return discs, slots, glued, verts, V - E + F


def _arc_direction(disc_corners, a, b):
    n = len(disc_corners)
    i = disc_corners.index(a)
    return 1 if disc_corners[(i + 1) % n] == b else -1


def _orientation_and_components(tri, discs, glued):
    sign = {}
    orientable = True
    comps = 0
    for start in sorted(discs, key=str):
        if start in sign:
            continue
        comps += 1
        sign[start] = 1
        stack = [start]
        while stack:
            d = stack.pop()
            tet = d[1]
            for f in range(4):
                key = (d, f)
                if key not in glued:
                    continue
                d2, f2, cmap = glued[key]
                x = _arc_type(d, f)
                c1, c2 = _arc_corners(f, x)
                dir1 = _arc_direction(discs[d], c1, c2)
                dir2 = _arc_direction(discs[d2], cmap[c1], cmap[c2])
                want = -sign[d] * dir1 * dir2
                if d2 not in sign:
                    sign[d2] = want
                    stack.append(d2)
                elif sign[d2] != want:
                    orientable = False
    return orientable, comps


def _arc_type(d, f):
    if d[0] == "t":
        return d[2]
    k = d[2]
    (a1, a2), (b1, b2) = pair_edges(k)
    for side in ((a1, a2), (b1, b2)):
        if f in side:
            return side[0] if side[1] == f else side[1]
    raise AssertionError


def reconstruct_core(tri, N, K=None, seed=None):
    N = _check_solution(tri, N)
    if K is None:
        K = padding_minimum(tri, N, seed)
    fill = triangle_fill(tri, N, K, seed)
    spin = fill.spin_set
    for v in spin:
        if build_link(tri, v).chi > 0:
            raise SurfaceError("positive-chi link spin")
    discs, slots, glued, verts, chi = assemble(tri, N, fill.counts)
    orientable, comps = _orientation_and_components(tri, discs, glued)
    circles = _boundary_circles(tri, discs, glued, verts)
    # at a spun link of negative chi the truncation is not canonical, so
    # neither chi nor the circle count there is an invariant of N
    hidden = [v for v in spin if build_link(tri, v).chi < 0]
    for v in hidden:
        circles[v] = None
    withheld = bool(hidden)
    return CoreSurface(
        chi=None if withheld else chi,
        orientable=orientable,
        boundary_circles=circles,
        spin_set=spin,
        quads=sum(N),
        triangles=sum(fill.counts.values()),
        components=comps,
        euler_cells=chi,
        padding=K,
    )


def _boundary_circles(tri, discs, glued, verts):
    uf = _UF()
    owner = {}
    ends = {}
    for d in discs:
        for f in range(4):
            if d[0] == "t" and f == d[2]:
                continue
            if (d, f) in glued:
                continue
            x = _arc_type(d, f)
            arc = (d, f)
            owner[arc] = tri.vertex_index[(d[1], x)]
            for c in _arc_corners(f, x):
                ends.setdefault(verts.find((d, c)), []).append(arc)
            uf.find(arc)
    for arcs in ends.values():
        for a in arcs[1:]:
            uf.union(arcs[0], a)
    out = {}
    seen = set()
    for arc, v in sorted(owner.items(), key=str):
        r = uf.find(arc)
        if r not in seen:
            seen.add(r)
            out[v] = out.get(v, 0) + 1
    return out


def normal_euler_characteristic(tri, x):
    """V - E + F of a closed normal surface given in traditional coordinates."""
    F = sum(x)
    sides = 0
    for tet in range(tri.size):
        sides += 3 * sum(x[7 * tet + v] for v in range(4))
        sides += 4 * sum(x[7 * tet + 4 + k] for k in range(3))
    E = sides // 2
    V = 0
    for edge in tri.edges:
        inc = edge.incidences[0]
        a, b = inc.vertices
        k = edge_pair(a, b)
        base = 7 * inc.tet
        V += x[base + a] + x[base + b] + sum(x[base + 4 + j] for j in range(3) if j != k)
    return V - E + F
