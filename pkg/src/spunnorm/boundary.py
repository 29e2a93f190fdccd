"""The nu functional on link curves, boundary classes, slopes and pairings."""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from . import linalg
from .links import (CoverLink, CurveSystem, LinkError, build_link, check_cycle,
                    default_curves, lift_link)
from .qmatch import in_q, kernel_basis, qmatching_matrix, tet_labeling
from .triangulation import edge_pair


class BoundaryError(ValueError):
    pass


def qmodulus(link, k, side):
    """Quad coordinate sharing the arc type of side ``side`` of triangle k."""
    tet, v = link.triangles[k]
    return 3 * tet + edge_pair(v, side)


def nu_functional(link, cycle, ncols=None, closed=True):
    """Integer vector f with f . N = nu_N(cycle).

    ``ncols`` folds the columns of a cover triangulation onto the base
    (cover tet i + s*t lies over tet i).
    """
    if closed:
        if not cycle.closed:
            raise BoundaryError("open path has no homotopy-invariant nu")
        check_cycle(link, cycle)
    n = 3 * link.triangulation.size
    vec = [0] * n
    for k, s in cycle.steps:
        k2, s2 = link.neighbor(k, s)
        vec[qmodulus(link, k2, s2)] += 1
        vec[qmodulus(link, k, s)] -= 1
    if ncols is not None and ncols != n:
        folded = [0] * ncols
        for i, x in enumerate(vec):
            folded[i % ncols] += x
        vec = folded
    return tuple(vec)


def combine(functionals, coeffs):
    n = len(functionals[0])
    return tuple(sum(c * f[i] for c, f in zip(coeffs, functionals)) for i in range(n))


@dataclass(frozen=True)
class VertexCurves:
    """Curve system on the (cover of the) link of one vertex, with nu values."""
    vertex: int
    orientable: bool
    curves: CurveSystem
    lambdas: tuple     # nu functionals of lambda_i
    mus: tuple         # nu functionals of mu_i


def vertex_curves(tri, v, curves=None):
    base = build_link(tri, v)
    if base.orientable:
        cs = curves or default_curves(base)
        ncols = None
    else:
        cov = lift_link(tri, v)
        cs = curves or cov.curves
        ncols = 3 * tri.size
    if not cs.cycles:
        return VertexCurves(v, base.orientable, cs, (), ())
    funcs = [nu_functional(cs.link, c, ncols) for c in cs.cycles]
    lam = tuple(combine(funcs, a) for a in cs.lambdas)
    mu = tuple(combine(funcs, b) for b in cs.mus)
    return VertexCurves(v, base.orientable, cs, lam, mu)


@dataclass(frozen=True)
class NuMatrix:
    rows: tuple
    labels: tuple      # (vertex, name)
    per_vertex: tuple  # VertexCurves


def nu_matrix(tri, framings=None):
    framings = framings or {}
    rows, labels, per = [], [], []
    for vc in tri.vertices:
        cur = vertex_curves(tri, vc.index, framings.get(vc.index))
        per.append(cur)
        for i, (lam, mu) in enumerate(zip(cur.lambdas, cur.mus)):
            rows.append(lam)
            labels.append((vc.index, f"lambda_{i + 1}"))
            rows.append(mu)
            labels.append((vc.index, f"mu_{i + 1}"))
    return NuMatrix(tuple(rows), tuple(labels), tuple(per))


def rank_on_q(tri, rows):
    """Rank of the functionals restricted to Q(T)."""
    K = kernel_basis(qmatching_matrix(tri))
    if not rows or not K:
        return 0
    restricted = [[linalg.dot(r, k) for k in K] for r in rows]
    return linalg.rank(restricted, len(K))


def kernel_of_nu(tri, framings=None):
    """Basis of ker(nu) inside Q(T), as primitive integer vectors."""
    K = kernel_basis(qmatching_matrix(tri))
    rows = nu_matrix(tri, framings).rows
    if not rows:
        return K
    restricted = [[linalg.dot(r, k) for k in K] for r in rows]
    coeffs = linalg.nullspace(restricted, len(K))
    out = []
    for c in coeffs:
        vec = [sum(ci * k[j] for ci, k in zip(c, K)) for j in range(3 * tri.size)]
        out.append(linalg.primitive(vec))
    return sorted(out)


def _require_q(tri, N):
    if not in_q(tri, N):
        raise BoundaryError("N not in Q(T)")


@dataclass(frozen=True)
class BoundaryClass:
    vertex: int
    orientable: bool
    coords: tuple                       # (-nu(lambda_1), nu(mu_1), ...)
    free_coefficient: Optional[int]     # non-orientable links only

    @property
    def zero(self):
        return not any(self.coords)


def boundary_class(tri, N, v, curves=None):
    _require_q(tri, N)
    cur = vertex_curves(tri, v, curves)
    coords = []
    for lam, mu in zip(cur.lambdas, cur.mus):
        coords += [-linalg.dot(lam, N), linalg.dot(mu, N)]
    free = None
    if not cur.orientable:
        cov = lift_link(tri, v)
        _check_sigma_symmetry(tri, cov, N)
        # nu vanishes on the sigma-anti-invariant classes; the remaining
        # value is the coefficient of the free generator downstairs.
        vals = [linalg.dot(f, N) for f in cur.lambdas + cur.mus]
        sig = _sigma_signs(cov, cur.curves)
        plus = [x for x, s in zip(vals, sig) if s > 0]
        free = plus[0] if len(plus) == 1 else None
    return BoundaryClass(v, cur.orientable, tuple(coords), free)


def _sigma_signs(cov, cs):
    """+1/-1 for each class of cs (lambdas then mus) as a sigma eigenvector."""
    from .links import h1_cycle_basis, homology_coordinates, gram_matrix

    basis = list(cs.cycles)
    gram = gram_matrix(cs.link, basis)
    images = [homology_coordinates(cs.link, basis, cov.sigma_cycle(c), gram) for c in basis]
    out = []
    for vec in cs.lambdas + cs.mus:
        img = [sum(vec[j] * images[j][i] for j in range(len(basis))) for i in range(len(basis))]
        if list(img) == list(vec):
            out.append(1)
        elif list(img) == [-x for x in vec]:
            out.append(-1)
        else:
            out.append(0)
    return out


def _check_sigma_symmetry(tri, cov, N):
    for c in cov.curves.cycles:
        a = nu_functional(cov.surface, c, 3 * tri.size)
        b = nu_functional(cov.surface, cov.sigma_cycle(c), 3 * tri.size)
        if linalg.dot(a, N) != linalg.dot(b, N):
            raise BoundaryError("sigma symmetry of nu violated")


@dataclass(frozen=True)
class SlopeResult:
    p: int
    q: int
    d: int

    def __str__(self):
        return f"slope {self.p}/{self.q} (p={self.p}, q={self.q}), curves d={self.d}"


def torus_slope(tri, N, v, curves=None):
    """Boundary slope at a torus link, or None if S misses the cusp."""
    link = build_link(tri, v)
    if not (link.orientable and link.chi == 0):
        raise BoundaryError("non-torus link")
    _require_q(tri, N)
    cur = vertex_curves(tri, v, curves)
    nl = linalg.dot(cur.lambdas[0], N)
    nm = linalg.dot(cur.mus[0], N)
    if nl == 0 and nm == 0:
        return None
    d = gcd(abs(nm), abs(nl))
    return SlopeResult(-nl // d, nm // d, d)


# -- pairings ------------------------------------------------------------------

PAIRING_BLOCK = ((0, 1, -1), (-1, 0, 1), (1, -1, 0))


def pairing(tri, N, L, labeling=None):
    """Block-diagonal skew form on orientation-aligned quad coordinates."""
    if not tri.orientable:
        raise BoundaryError("non-orientable: apply double_cover first")
    labeling = labeling or tet_labeling(tri)
    a, b = labeling.aligned(N), labeling.aligned(L)
    total = 0
    for i in range(tri.size):
        for r in range(3):
            for c in range(3):
                total += a[3 * i + r] * PAIRING_BLOCK[r][c] * b[3 * i + c]
    return Fraction(total)


def pairing_via_boundary(tri, N, L, framings=None):
    """Half the sum over links of nu_N(mu_i) nu_L(lambda_i) - nu_N(lambda_i) nu_L(mu_i)."""
    if not tri.orientable:
        raise BoundaryError("non-orientable: apply double_cover first")
    framings = framings or {}
    total = 0
    for vc in tri.vertices:
        cur = vertex_curves(tri, vc.index, framings.get(vc.index))
        for lam, mu in zip(cur.lambdas, cur.mus):
            total += linalg.dot(mu, N) * linalg.dot(lam, L) - linalg.dot(lam, N) * linalg.dot(mu, L)
    return Fraction(total, 2)
