"""Q-matching equations, the solution space Q(T), and traditional coordinates.

Quad coordinates are tet-major with three entries per tet in the reference
labeling: entry ``k`` is the quad type disjoint from opposite-edge pair ``k``
(pair 0 = {0,1}/{2,3}, pair 1 = {0,2}/{1,3}, pair 2 = {0,3}/{1,2}).
Traditional coordinates use seven entries per tet: triangles at vertices
0..3, then the three quads.
"""
from dataclasses import dataclass

from . import linalg
from .triangulation import edge_pair

# Cyclic order (q, q', q'') of the reference quad indices that is
# right-handed for a positively oriented tet.
RIGHT_HANDED = (0, 1, 2)


class NotInCT(ValueError):
    pass


@dataclass(frozen=True)
class TetLabeling:
    """Per-tet ordering of reference quad indices as (q, q', q'').

    For oriented triangulations the order is right-handed with respect to the
    global orientation; otherwise every tet uses the right-handed order of
    its own vertex labels.
    """
    order: tuple

    def aligned(self, vec):
        out = []
        for i, o in enumerate(self.order):
            out.extend(vec[3 * i + k] for k in o)
        return tuple(out)

    def reference(self, vec):
        out = [0] * len(vec)
        for i, o in enumerate(self.order):
            for j, k in enumerate(o):
                out[3 * i + k] = vec[3 * i + j]
        return tuple(out)


def tet_labeling(tri):
    par = tri.orientation or (1,) * tri.size
    rev = (RIGHT_HANDED[0], RIGHT_HANDED[2], RIGHT_HANDED[1])
    return TetLabeling(tuple(RIGHT_HANDED if p > 0 else rev for p in par))


def quad_slopes(tet_parity):
    """{pair k: (quad getting +1, quad getting -1)} for a given local parity."""
    out = {}
    cyc = RIGHT_HANDED if tet_parity > 0 else RIGHT_HANDED[::-1]
    for k in range(3):
        i = cyc.index(k)
        out[k] = (cyc[(i + 1) % 3], cyc[(i + 2) % 3])
    return out


def edge_slope_row(tri, edge):
    row = [0] * (3 * tri.size)
    for inc in edge.incidences:
        k = edge_pair(*inc.vertices)
        plus, minus = quad_slopes(inc.parity)[k]
        row[3 * inc.tet + plus] += 1
        row[3 * inc.tet + minus] -= 1
    return tuple(row)


@dataclass(frozen=True)
class QMatrix:
    rows: tuple
    edges: tuple   # edge class id of each row
    ncols: int


def qmatching_matrix(tri):
    rows = tuple(edge_slope_row(tri, e) for e in tri.edges)
    return QMatrix(rows, tuple(e.index for e in tri.edges), 3 * tri.size)


def kernel_basis(B):
    if isinstance(B, QMatrix):
        return linalg.nullspace(list(B.rows), B.ncols)
    rows, ncols = B
    return linalg.nullspace(list(rows), ncols)


def in_q(tri, vec):
    B = qmatching_matrix(tri)
    return len(vec) == B.ncols and not any(linalg.mat_vec(B.rows, vec))


@dataclass(frozen=True)
class DimensionReport:
    rank_B: int
    dim_Q: int
    by_vertices: int     # v_o - e + 3t
    by_chi: int          # chi(P) + 2t - v_n
    e_minus_v_o: int

    @property
    def rank_ok(self):
        return self.rank_B == self.e_minus_v_o

    @property
    def dim_ok(self):
        return self.dim_Q == self.by_vertices == self.by_chi


def dimension_report(tri):
    from .triangulation import skeleton_summary

    s = skeleton_summary(tri)
    B = qmatching_matrix(tri)
    r = linalg.rank(B.rows, B.ncols)
    return DimensionReport(
        rank_B=r,
        dim_Q=len(kernel_basis(B)),
        by_vertices=s.v_o - s.e + 3 * s.t,
        by_chi=s.chi + 2 * s.t - s.v_n,
        e_minus_v_o=s.e - s.v_o,
    )


# -- traditional coordinates -------------------------------------------------

def tri_col(tet, v):
    return 7 * tet + v


def quad_col(tet, k):
    return 7 * tet + 4 + k


def compatibility_matrix(tri):
    """One row per (face pairing, arc type): arc counts agree across the face."""
    rows = []
    n = 7 * tri.size
    for a, tet in enumerate(tri.tets):
        for f, g in enumerate(tet):
            if (a, f) > (g.tet, g.perm[f]):
                continue
            for x in range(4):
                if x == f:
                    continue
                row = [0] * n
                y = g.perm[x]
                row[tri_col(a, x)] += 1
                row[quad_col(a, edge_pair(x, f))] += 1
                row[tri_col(g.tet, y)] -= 1
                row[quad_col(g.tet, edge_pair(y, g.perm[f]))] -= 1
                rows.append(tuple(row))
    return rows


def tetrahedral_solution(tri, tet):
    vec = [0] * (7 * tri.size)
    for v in range(4):
        vec[tri_col(tet, v)] = 1
    for k in range(3):
        vec[quad_col(tet, k)] = -1
    return tuple(vec)


def edge_solution(tri, edge):
    vec = [0] * (7 * tri.size)
    for inc in edge.incidences:
        a, b = inc.vertices
        vec[tri_col(inc.tet, a)] += 1
        vec[tri_col(inc.tet, b)] += 1
        vec[quad_col(inc.tet, edge_pair(a, b))] -= 1
    return tuple(vec)


def canonical_c_basis(tri):
    return ([tetrahedral_solution(tri, i) for i in range(tri.size)]
            + [edge_solution(tri, e) for e in tri.edges])


def vertex_link_vector(tri, v):
    vec = [0] * (7 * tri.size)
    for tet, x in tri.vertices[v].corners:
        vec[tri_col(tet, x)] += 1
    return tuple(vec)


def project_pr(tri, x):
    if len(x) != 7 * tri.size or any(linalg.mat_vec(compatibility_matrix(tri), x)):
        raise NotInCT("not in C(T)")
    return tuple(x[7 * i + 4 + k] for i in range(tri.size) for k in range(3))
