"""Vertex-linking surfaces, their dual graphs and homology bases.

The link of a vertex class has one triangle per tetrahedron corner
``(tet, v)``.  The corners of that triangle sit on the tet edges ``v-w`` and
are labelled by ``w``; the side lying in face ``u`` of the tet is called side
``u`` (it is opposite the corner labelled ``u``).
"""
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

from .linalg import nullspace, primitive, solve_unimodular
from .triangulation import (TriangulationError, double_cover, perm_sign)


class LinkError(ValueError):
    pass


@lru_cache(maxsize=None)
def standard_cycle(v):
    """Cyclic corner order (w1, w2, w3) of the link triangle at vertex v.

    Chosen so that (w1, w2, w3, v) is an even permutation; with the tet
    positively oriented this is the orientation whose normal points at v.
    """
    w = [x for x in range(4) if x != v]
    if perm_sign((w[0], w[1], w[2], v)) < 0:
        w[1], w[2] = w[2], w[1]
    return tuple(w)


@lru_cache(maxsize=None)
def forward(v, x, y):
    """+1 if corner y follows corner x in the standard cycle at v, else -1."""
    cyc = standard_cycle(v)
    i = cyc.index(x)
    return 1 if cyc[(i + 1) % 3] == y else -1


@dataclass(frozen=True)
class DualCycle:
    steps: tuple        # ((triangle, exit side), ...)
    closed: bool = True

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True, eq=False)
class LinkSurface:
    triangulation: object
    vertex: int
    triangles: tuple

    @cached_property
    def index(self):
        return {c: k for k, c in enumerate(self.triangles)}

    def sides(self, k):
        v = self.triangles[k][1]
        return tuple(u for u in range(4) if u != v)

    def endpoints(self, k, side):
        v = self.triangles[k][1]
        return tuple(x for x in range(4) if x not in (v, side))

    def neighbor(self, k, side):
        """Triangle across the given side, and the side it is entered by."""
        tet, v = self.triangles[k]
        g = self.triangulation.tets[tet][side]
        return self.index[(g.tet, g.perm[v])], g.perm[side]

    def label_map(self, k, side):
        tet, _ = self.triangles[k]
        return self.triangulation.tets[tet][side].perm

    # -- cell structure ---------------------------------------------------

    @cached_property
    def edges(self):
        """Side pairs, each as ((k, s), (k2, s2)) with the smaller side first."""
        out = []
        for k in range(len(self.triangles)):
            for s in self.sides(k):
                other = self.neighbor(k, s)
                if (k, s) < other:
                    out.append(((k, s), other))
        return tuple(out)

    @cached_property
    def edge_of(self):
        out = {}
        for i, (a, b) in enumerate(self.edges):
            out[a] = i
            out[b] = i
        return out

    @cached_property
    def corner_vertex(self):
        """(k, label) -> link vertex index."""
        parent = {}
        for k in range(len(self.triangles)):
            for w in self.sides(k):
                parent[(k, w)] = (k, w)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for k in range(len(self.triangles)):
            for s in self.sides(k):
                k2, _ = self.neighbor(k, s)
                p = self.label_map(k, s)
                for w in self.endpoints(k, s):
                    a, b = find((k, w)), find((k2, p[w]))
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        roots = sorted({find(x) for x in parent})
        num = {r: i for i, r in enumerate(roots)}
        return {x: num[find(x)] for x in parent}

    @property
    def num_vertices(self):
        return len(set(self.corner_vertex.values()))

    @property
    def chi(self):
        return self.num_vertices - len(self.edges) + len(self.triangles)

    @cached_property
    def orientation(self):
        """Per-triangle signs relative to the standard cycles, or None."""
        n = len(self.triangles)
        eps = [0] * n
        base = self.triangulation.orientation
        for start in range(n):
            if eps[start]:
                continue
            eps[start] = base[self.triangles[start][0]] if base else 1
            stack = [start]
            while stack:
                k = stack.pop()
                v = self.triangles[k][1]
                for s in self.sides(k):
                    k2, _ = self.neighbor(k, s)
                    x, y = self.endpoints(k, s)
                    p = self.label_map(k, s)
                    v2 = self.triangles[k2][1]
                    want = -eps[k] * forward(v, x, y) * forward(v2, p[x], p[y])
                    if eps[k2] == 0:
                        eps[k2] = want
                        stack.append(k2)
                    elif eps[k2] != want:
                        return None
        return tuple(eps)

    @property
    def orientable(self):
        return self.orientation is not None

    @property
    def genus(self):
        """Genus if orientable, else the number of crosscaps."""
        return (2 - self.chi) // 2 if self.orientable else 2 - self.chi

    # -- oriented edge data used for intersection numbers ----------------

    @cached_property
    def edge_reference(self):
        """(k, s) -> the edge's reference direction in triangle k's labels."""
        out = {}
        for (k, s), (k2, s2) in self.edges:
            v = self.triangles[k][1]
            x, y = self.endpoints(k, s)
            if forward(v, x, y) < 0:
                x, y = y, x
            out[(k, s)] = (x, y)
            p = self.label_map(k, s)
            out[(k2, s2)] = (p[x], p[y])
        return out

    def crossing_sign(self, k, s):
        v = self.triangles[k][1]
        x, y = self.edge_reference[(k, s)]
        return self.orientation[k] * forward(v, x, y)

    # -- dual graph ---------------------------------------------------------

    @cached_property
    def dual_tree(self):
        """BFS spanning tree from triangle 0: child -> (parent, parent's side)."""
        parent = {0: None}
        queue = [0]
        for k in queue:
            for s in self.sides(k):
                k2, _ = self.neighbor(k, s)
                if k2 not in parent:
                    parent[k2] = (k, s)
                    queue.append(k2)
        return parent

    @cached_property
    def tree_edges(self):
        return frozenset(self.edge_of[ps] for ps in self.dual_tree.values() if ps)

    def path_from_root(self, k):
        steps = []
        while self.dual_tree[k] is not None:
            pk, ps = self.dual_tree[k]
            steps.append((pk, ps))
            k = pk
        return steps[::-1]

    def path_to_root(self, k):
        return reverse_steps(self, self.path_from_root(k))

    def fundamental_cycle(self, edge):
        (k, s), (k2, _) = self.edges[edge]
        steps = self.path_from_root(k) + [(k, s)] + self.path_to_root(k2)
        return reduce_cycle(self, DualCycle(tuple(steps)))

    @cached_property
    def cotree_leftover(self):
        """Edges outside the dual tree and outside a primal spanning tree."""
        seen = {0}
        used = set()
        adj = {}
        for i, (a, b) in enumerate(self.edges):
            if i in self.tree_edges:
                continue
            k, s = a
            x, y = self.endpoints(k, s)
            vx, vy = self.corner_vertex[(k, x)], self.corner_vertex[(k, y)]
            adj.setdefault(vx, []).append((i, vy))
            adj.setdefault(vy, []).append((i, vx))
        queue = [0]
        for u in queue:
            for i, w in adj.get(u, []):
                if w not in seen:
                    seen.add(w)
                    used.add(i)
                    queue.append(w)
        return tuple(i for i in range(len(self.edges))
                     if i not in self.tree_edges and i not in used)


def build_link(tri, v):
    corners = tuple(sorted(tri.vertices[v].corners))
    return LinkSurface(tri, v, corners)


def link_invariants(link):
    return link.chi, link.orientable, link.genus


# -- dual cycles ------------------------------------------------------------

def reverse_steps(link, steps):
    out = []
    for k, s in reversed(steps):
        out.append(link.neighbor(k, s))
    return out


def reverse_cycle(link, cycle):
    return DualCycle(tuple(reverse_steps(link, list(cycle.steps))), cycle.closed)


def check_cycle(link, cycle):
    steps = cycle.steps
    for i, (k, s) in enumerate(steps):
        if not 0 <= k < len(link.triangles) or s not in link.sides(k):
            raise LinkError(f"step {i}: ({k}, {s}) is not a side of the link")
        k2, _ = link.neighbor(k, s)
        if i + 1 < len(steps):
            if steps[i + 1][0] != k2:
                raise LinkError(f"step {i}: does not lead to triangle {steps[i + 1][0]}")
        elif cycle.closed and steps and k2 != steps[0][0]:
            raise LinkError("cycle does not close up")
    return cycle


def reduce_cycle(link, cycle):
    """Cancel immediate backtracks, cyclically."""
    out = []
    for k, s in cycle.steps:
        if out and link.neighbor(*out[-1]) == (k, s):
            out.pop()
        else:
            out.append((k, s))
    while len(out) >= 2 and link.neighbor(*out[-1]) == out[0]:
        out = out[1:-1]
    return DualCycle(tuple(out), cycle.closed)


def crossing_vector(link, cycle):
    vec = [0] * len(link.edges)
    for k, s in cycle.steps:
        vec[link.edge_of[(k, s)]] += link.crossing_sign(k, s)
    return vec


def primal_vector(link, cycle):
    """The cycle pushed off to its left into the 1-skeleton, as an edge chain."""
    cycle = reduce_cycle(link, cycle)
    vec = [0] * len(link.edges)
    steps = cycle.steps
    n = len(steps)
    for i in range(n):
        k_in, a = link.neighbor(*steps[i])
        k, b = steps[(i + 1) % n]
        v = link.triangles[k][1]
        if link.orientation[k] * forward(v, a, b) > 0:
            c = ({0, 1, 2, 3} - {v, a, b}).pop()
            ref = link.edge_reference[(k, c)]
            vec[link.edge_of[(k, c)]] += 1 if ref == (b, a) else -1
    return vec


def intersection(link, c1, c2):
    """Algebraic intersection number of two closed dual cycles."""
    if not link.orientable:
        raise LinkError("non-orientable link")
    x = crossing_vector(link, c1)
    y = primal_vector(link, c2)
    return sum(a * b for a, b in zip(x, y))


def h1_cycle_basis(link):
    """Dual cycles forming a Z-basis of H1 of an orientable link.

    Tree-cotree construction: the dual edges outside both the dual spanning
    tree and a primal spanning tree of the remaining edges close 2g cycles.
    """
    if not link.orientable:
        raise LinkError("non-orientable link")
    return [link.fundamental_cycle(i) for i in link.cotree_leftover]


def gram_matrix(link, cycles):
    return [[intersection(link, a, b) for b in cycles] for a in cycles]


def homology_coordinates(link, basis, cycle, gram=None):
    gram = gram or gram_matrix(link, basis)
    rhs = [intersection(link, b, cycle) for b in basis]
    return solve_unimodular(gram, rhs)


def symplectic_pairs(gram):
    """Integral change of basis bringing a unimodular skew form to standard form.

    Returns a list of (a, b) coefficient-vector pairs with form(a, b) = 1 and
    all other pairings zero.
    """
    n = len(gram)

    def form(u, w):
        return sum(u[i] * gram[i][j] * w[j] for i in range(n) for j in range(n) if u[i] and w[j])

    basis = [[int(i == j) for j in range(n)] for i in range(n)]
    pairs = []
    while basis:
        a = basis.pop(0)
        rest = basis
        while True:
            nz = [i for i, r in enumerate(rest) if form(a, r)]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(form(a, rest[i])))
            j = nz[0]
            vj = form(a, rest[j])
            for i in nz[1:]:
                q = form(a, rest[i]) // vj
                rest[i] = [x - q * y for x, y in zip(rest[i], rest[j])]
        if not nz:
            raise LinkError("degenerate intersection form")
        b = rest.pop(nz[0])
        val = form(a, b)
        if abs(val) != 1:
            raise LinkError("intersection form is not unimodular")
        if val < 0:
            b = [-x for x in b]
        basis = []
        for r in rest:
            ra, rb = form(r, a), form(r, b)
            basis.append([x - rb * y + ra * z for x, y, z in zip(r, a, b)])
        pairs.append((tuple(a), tuple(b)))
    return pairs


@dataclass(frozen=True)
class CurveSystem:
    """Homology classes (lambda_i, mu_i) on an oriented surface.

    Each class is an integer combination of the generating ``cycles``.
    ``canonical`` is False for the tool's own deterministic basis.
    """
    link: LinkSurface
    cycles: tuple
    lambdas: tuple
    mus: tuple
    canonical: bool = False


def default_curves(link):
    """Deterministic symplectic basis with intersection(lambda_i, mu_i) = +1."""
    cycles = h1_cycle_basis(link)
    gram = gram_matrix(link, cycles)
    pairs = symplectic_pairs(gram)
    return CurveSystem(link, tuple(cycles), tuple(a for a, _ in pairs),
                       tuple(b for _, b in pairs))


def framing_curves(link, lam, mu):
    """A user framing given by two closed dual cycles."""
    check_cycle(link, lam)
    check_cycle(link, mu)
    if abs(intersection(link, lam, mu)) != 1:
        raise LinkError("degenerate framing: curves must meet algebraically once")
    return CurveSystem(link, (lam, mu), ((1, 0),), ((0, 1),), canonical=True)


# -- orientable double cover of a non-orientable link ------------------------

@dataclass(frozen=True, eq=False)
class CoverLink:
    base: LinkSurface
    cover: object           # triangulation Cover
    surface: LinkSurface    # the link upstairs
    sigma: tuple            # triangle -> triangle
    projection: tuple       # triangle -> base triangle

    def sigma_cycle(self, cycle):
        return DualCycle(tuple((self.sigma[k], s) for k, s in cycle.steps), cycle.closed)

    @cached_property
    def sigma_matrix(self):
        """Action of sigma on H1 in the coordinates of h1_cycle_basis."""
        basis = h1_cycle_basis(self.surface)
        gram = gram_matrix(self.surface, basis)
        cols = [homology_coordinates(self.surface, basis, self.sigma_cycle(c), gram)
                for c in basis]
        return [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]

    @cached_property
    def curves(self):
        """Basis adapted to sigma.

        For a torus cover this is a symplectic basis with sigma(lambda) =
        lambda and sigma(mu) = -mu.  In higher genus the lambdas span the
        +1 eigenlattice and the mus the -1 eigenlattice (not symplectic).
        """
        link = self.surface
        basis = h1_cycle_basis(link)
        S = self.sigma_matrix
        n = len(basis)
        plus = nullspace([[S[i][j] - (i == j) for j in range(n)] for i in range(n)], n)
        minus = nullspace([[S[i][j] + (i == j) for j in range(n)] for i in range(n)], n)
        if n == 2:
            gram = gram_matrix(link, basis)
            lam, mu = plus[0], minus[0]
            val = sum(lam[i] * gram[i][j] * mu[j] for i in range(2) for j in range(2))
            if abs(val) != 1:
                raise LinkError("cover involution is not of Klein-bottle deck type")
            if val < 0:
                mu = tuple(-x for x in mu)
            return CurveSystem(link, tuple(basis), (tuple(lam),), (tuple(mu),))
        return CurveSystem(link, tuple(basis), tuple(map(tuple, plus)), tuple(map(tuple, minus)))


def lift_link(tri, v):
    base = build_link(tri, v)
    if base.orientable:
        raise LinkError("orientable link")
    cov = double_cover(tri)
    up = cov.triangulation
    first = base.triangles[0]
    uv = up.vertex_index[first]
    surface = build_link(up, uv)
    if len(surface.triangles) != 2 * len(base.triangles):
        raise TriangulationError("lifted link is not a connected double cover")
    sigma = tuple(surface.index[(cov.deck(tet), x)] for tet, x in surface.triangles)
    proj = tuple(base.index[cov.project_corner(c)] for c in surface.triangles)
    return CoverLink(base, cov, surface, sigma, proj)
