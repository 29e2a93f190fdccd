"""Extreme rays of solution cones, admissible components and their dimensions."""
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Optional

from . import linalg
from .qmatch import qmatching_matrix


@dataclass(frozen=True)
class RationalCone:
    """{x : equalities . x = 0, x >= 0, x_i = 0 for i outside support}."""
    dim: int
    equalities: tuple
    support: Optional[frozenset] = None

    def zero_coords(self):
        if self.support is None:
            return []
        return [i for i in range(self.dim) if i not in self.support]

    def free_coords(self):
        return [i for i in range(self.dim) if self.support is None or i in self.support]

    def all_equalities(self):
        rows = [tuple(r) for r in self.equalities]
        rows += [tuple(int(j == i) for j in range(self.dim)) for i in self.zero_coords()]
        return rows


def solution_cone(tri, support=None, extra=()):
    B = qmatching_matrix(tri)
    return RationalCone(B.ncols, tuple(B.rows) + tuple(extra),
                        None if support is None else frozenset(support))


def _normalize(rays):
    out = set()
    for r in rays:
        if any(r):
            out.add(linalg.primitive(r))
    return sorted(out)


def extreme_rays(cone):
    """Double description: start from the linear space cut out by the
    equalities, then add the inequalities x_i >= 0 one at a time."""
    n = cone.dim
    lineal = [list(v) for v in linalg.nullspace(cone.all_equalities(), n)]
    rays = []
    zero_sets = []
    done = []
    # all inequalities are coordinate ones, so "fewest nonzeros" is a tie
    for i in cone.free_coords():
        piv = next((l for l in lineal if l[i] != 0), None)
        if piv is not None:
            lineal.remove(piv)
            if piv[i] < 0:
                piv = [-x for x in piv]
            lineal = [_eliminate(l, piv, i) for l in lineal]
            rays = [_eliminate(r, piv, i) for r in rays]
            rays.append(piv)
            done.append(i)
            zero_sets = [frozenset(j for j in done if r[j] == 0) for r in rays]
            continue
        pos = [k for k, r in enumerate(rays) if r[i] > 0]
        neg = [k for k, r in enumerate(rays) if r[i] < 0]
        zer = [k for k, r in enumerate(rays) if r[i] == 0]
        new = [rays[k] for k in pos + zer]
        for a in pos:
            for b in neg:
                common = zero_sets[a] & zero_sets[b]
                if any(common <= zero_sets[c] for c in range(len(rays)) if c not in (a, b)):
                    continue
                ra, rb = rays[a], rays[b]
                comb = [ra[i] * y - rb[i] * x for x, y in zip(ra, rb)]
                new.append(list(linalg.primitive(comb)))
        rays = new
        done.append(i)
        zero_sets = [frozenset(j for j in done if r[j] == 0) for r in rays]
    if lineal:
        raise ValueError("cone is not pointed")
    return _normalize(rays)


def _eliminate(vec, piv, i):
    """Add a multiple of the lineality vector piv to clear coordinate i."""
    if vec[i] == 0:
        return vec
    comb = [piv[i] * x - vec[i] * y for x, y in zip(vec, piv)]
    return list(linalg.primitive(comb)) if any(comb) else comb


def brute_force_extreme_rays(cone):
    """Oracle: x is extreme iff the constraints tight at x have rank dim - 1."""
    n = cone.dim
    eqs = cone.all_equalities()
    free = cone.free_coords()
    found = set()
    # fewer tight coordinates than this cannot cut the kernel down to a line
    least = max(0, n - 1 - linalg.rank(eqs, n)) if eqs else n - 1
    for r in range(least, len(free) + 1):
        for zeros in combinations(free, r):
            rows = eqs + [tuple(int(j == i) for j in range(n)) for i in zeros]
            ker = linalg.nullspace(rows, n)
            if len(ker) != 1:
                continue
            x = ker[0]
            if all(v <= 0 for v in x):
                x = tuple(-v for v in x)
            if all(v >= 0 for v in x) and any(x):
                found.add(x)
    return sorted(found)


def minimal_representative(ray):
    if not any(ray):
        raise ValueError("zero vector")
    if any(x < 0 for x in ray):
        raise ValueError("ray must be nonnegative")
    return linalg.primitive(ray)


@dataclass(frozen=True)
class PFComponent:
    support: tuple          # chosen quad index per tet
    rays: tuple
    dim: int
    dim_kernel: int         # dim(R cap ker boundary)
    maximal: bool = True
    dim_span_kernel: int = -1   # dim(span R cap ker boundary), projectively

    def to_json(self):
        return {"support": list(self.support), "dim": self.dim,
                "rays": [list(r) for r in self.rays], "maximal": self.maximal}


def projective_dim(rays):
    return linalg.rank(list(rays), len(rays[0])) - 1 if rays else -1


def _support_coords(choice):
    return frozenset(3 * i + k for i, k in enumerate(choice))


def pf_components(tri, nu_rows=None):
    """Admissible components: one candidate per choice of quad type per tet."""
    if nu_rows is None:
        from .boundary import nu_matrix
        nu_rows = nu_matrix(tri).rows
    raw = {}
    for choice in product(range(3), repeat=tri.size):
        rays = tuple(extreme_rays(solution_cone(tri, _support_coords(choice))))
        if rays and rays not in raw.values():
            raw[choice] = rays
    comps = []
    for choice, rays in raw.items():
        rs = set(rays)
        contained = any(
            other != choice and set(orays) != rs
            and all(_support_within(r, other) for r in rays)
            for other, orays in raw.items()
        )
        kern = extreme_rays(solution_cone(tri, _support_coords(choice), nu_rows))
        dim = projective_dim(rays)
        image = [linalg.mat_vec(nu_rows, r) for r in rays]
        span_kern = dim - (linalg.rank(image, len(nu_rows)) if nu_rows else 0)
        comps.append(PFComponent(choice, rays, dim, projective_dim(kern),
                                 not contained, span_kern))
    comps.sort(key=lambda c: c.rays)
    return comps


def _support_within(ray, choice):
    return all(ray[3 * i + k] == 0 for i in range(len(choice)) for k in range(3) if k != choice[i])


def admissible_vertices(tri):
    """Distinct admissible vertex solutions (minimal integer representatives)."""
    out = set()
    for comp in pf_components(tri):
        out.update(comp.rays)
    return sorted(out)


@dataclass(frozen=True)
class BoundCheck:
    support: tuple
    dim: int
    lower: int
    upper: int        # uses dim(span R cap ker)
    cap: int          # t - 1
    literal_upper: int = None   # uses dim(R cap ker)

    @property
    def ok(self):
        return self.lower <= self.dim <= self.upper and self.dim <= self.cap

    @property
    def literal_ok(self):
        upper = self.upper if self.literal_upper is None else self.literal_upper
        return self.lower <= self.dim <= upper and self.dim <= self.cap

    @property
    def at_lower_bound(self):
        return self.dim == self.lower


@dataclass(frozen=True)
class Theorem2Report:
    orientable: bool
    checks: tuple
    empty: bool

    @property
    def violations(self):
        return [c for c in self.checks if not c.ok]

    @property
    def literal_violations(self):
        # the kernel term read as the polytope R cap ker rather than its span;
        # the two agree unless ker meets span R away from the interior of R
        return [c for c in self.checks if not c.literal_ok]


def theorem2_report(tri, comps=None):
    from .triangulation import skeleton_summary

    s = skeleton_summary(tri)
    comps = pf_components(tri) if comps is None else comps
    maximal = [c for c in comps if c.maximal]
    chi = s.chi
    checks = []
    if s.orientable:
        lo, hi = chi - 1, chi
    else:
        lo, hi = chi - s.v_n - 1, 2 * chi - s.v_n
    for c in maximal:
        checks.append(BoundCheck(c.support, c.dim, lo, hi + c.dim_span_kernel, s.t - 1,
                                 hi + c.dim_kernel))
    if not maximal:
        # the empty set, with dim = -1 and dim(R cap ker) = -1
        checks.append(BoundCheck((), -1, lo, hi - 1, s.t - 1, hi - 1))
    return Theorem2Report(s.orientable, tuple(checks), not maximal)
