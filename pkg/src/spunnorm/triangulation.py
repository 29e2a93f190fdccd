"""Closed triangulated 3-pseudo-manifolds given by face-pairing tables.

A tetrahedron has vertices 0..3 and face ``i`` is the face opposite vertex
``i``.  A gluing of face ``f`` of tet ``A`` is a pair ``(B, perm)`` where
``perm`` sends the vertex labels of ``A`` to those of ``B``; the target face is
``perm[f]``.
"""
import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from typing import NamedTuple, Optional


class TriangulationError(ValueError):
    pass


class ParseError(TriangulationError):
    pass


PERMS = tuple(permutations(range(4)))
EDGES = tuple(combinations(range(4), 2))


def perm_sign(p):
    return _SIGNS[tuple(p)] if len(p) == 4 else _sign(p)


def _sign(p):
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


_SIGNS = {p: _sign(p) for p in PERMS}


def perm_inverse(p):
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def perm_compose(p, q):
    """(p o q)(i) = p[q[i]]."""
    return tuple(p[x] for x in q)


def edge_pair(a, b):
    """Index k of the opposite-edge pair containing edge {a, b}.

    Pair 0 is {0,1}/{2,3}, pair 1 is {0,2}/{1,3}, pair 2 is {0,3}/{1,2}.
    """
    if a == 0 or b == 0:
        return a + b - 1
    return ({1, 2, 3} - {a, b}).pop() - 1


def pair_edges(k):
    """The two edges of opposite-edge pair k, the one through vertex 0 first."""
    a = (0, k + 1)
    return a, tuple(sorted({1, 2, 3} - {k + 1}))


class Gluing(NamedTuple):
    tet: int
    perm: tuple


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def __str__(self):
        return f"{self.code}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def valid(self):
        return not self.violations

    def __str__(self):
        if self.valid:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class EdgeIncidence:
    tet: int
    vertices: tuple   # (a, b) in walk direction
    parity: int       # sign of the walk state (a, b, c, d)
    exit_face: int    # face (opposite vertex d) the walk leaves through

    @property
    def state(self):
        a, b = self.vertices
        c = ({0, 1, 2, 3} - {a, b, self.exit_face}).pop()
        return (self.tet, a, b, c, self.exit_face)


@dataclass(frozen=True)
class EdgeClass:
    index: int
    incidences: tuple

    @property
    def degree(self):
        return len(self.incidences)


@dataclass(frozen=True)
class VertexClass:
    index: int
    corners: tuple


@dataclass(frozen=True)
class SkeletonSummary:
    t: int
    e: int
    v: int
    f: int
    v_o: int
    v_n: int
    chi: int
    orientable: bool
    orientation: Optional[tuple]


@dataclass(frozen=True, eq=False)
class Triangulation:
    tets: tuple
    name: str = ""

    @property
    def size(self):
        return len(self.tets)

    def gluing(self, tet, face):
        return self.tets[tet][face]

    # -- derived skeleton -------------------------------------------------

    @cached_property
    def edges(self):
        return _walk_edges(self)

    @cached_property
    def edge_index(self):
        """(tet, frozenset{a, b}) -> edge class index."""
        out = {}
        for ec in self.edges:
            for inc in ec.incidences:
                out[(inc.tet, frozenset(inc.vertices))] = ec.index
        return out

    @cached_property
    def vertices(self):
        parent = {(i, v): (i, v) for i in range(self.size) for v in range(4)}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, tet in enumerate(self.tets):
            for f, g in enumerate(tet):
                for v in range(4):
                    if v != f:
                        a, b = find((i, v)), find((g.tet, g.perm[v]))
                        if a != b:
                            parent[max(a, b)] = min(a, b)
        groups = {}
        for c in sorted(parent):
            groups.setdefault(find(c), []).append(c)
        ordered = sorted(groups.values())
        return tuple(VertexClass(k, tuple(cs)) for k, cs in enumerate(ordered))

    @cached_property
    def vertex_index(self):
        return {c: vc.index for vc in self.vertices for c in vc.corners}

    @cached_property
    def orientation(self):
        """Per-tet parities (+1/-1) making every gluing orientation reversing,
        or None if the triangulation is non-orientable."""
        par = [0] * self.size
        for start in range(self.size):
            if par[start]:
                continue
            par[start] = 1
            stack = [start]
            while stack:
                i = stack.pop()
                for g in self.tets[i]:
                    want = par[i] if perm_sign(g.perm) < 0 else -par[i]
                    if par[g.tet] == 0:
                        par[g.tet] = want
                        stack.append(g.tet)
                    elif par[g.tet] != want:
                        return None
        return tuple(par)

    @property
    def orientable(self):
        return self.orientation is not None

    @property
    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + self.size

    def to_json(self):
        return {
            "name": self.name,
            "tetrahedra": [
                {"gluings": [{"tet": g.tet, "perm": list(g.perm)} for g in tet]}
                for tet in self.tets
            ],
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=1)


def from_gluings(gluings, name=""):
    """Build a Triangulation from nested lists [[(tet, perm) x4], ...]."""
    tets = tuple(
        tuple(None if g is None else Gluing(int(g[0]), tuple(g[1])) for g in tet)
        for tet in gluings
    )
    return Triangulation(tets, name)


def parse_triangulation(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict) or not isinstance(doc.get("tetrahedra"), list):
        raise ParseError("missing 'tetrahedra' list")
    raw = doc["tetrahedra"]
    n = len(raw)
    tets = []
    for i, tet in enumerate(raw):
        gl = tet.get("gluings") if isinstance(tet, dict) else None
        if not isinstance(gl, list) or len(gl) != 4:
            raise ParseError(f"tet {i}: wrong arity (expected 4 gluing entries)")
        row = []
        for f, g in enumerate(gl):
            if g is None:
                row.append(None)
                continue
            target, perm = g.get("tet"), g.get("perm")
            if not isinstance(target, int) or not 0 <= target < n:
                raise ParseError(f"tet {i} face {f}: out-of-range tet index {target!r}")
            if not isinstance(perm, list) or sorted(perm) != [0, 1, 2, 3]:
                raise ParseError(f"tet {i} face {f}: non-permutation perm {perm!r}")
            row.append(Gluing(target, tuple(perm)))
        tets.append(tuple(row))
    return Triangulation(tuple(tets), str(doc.get("name", "")))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse_triangulation(fh.read())


def validate(tri):
    bad = []
    for i, tet in enumerate(tri.tets):
        for f, g in enumerate(tet):
            if g is None:
                bad.append(Violation("unglued face", f"tet {i} face {f}"))
                continue
            f2 = g.perm[f]
            if g.tet == i and f2 == f:
                bad.append(Violation("self-glued face", f"tet {i} face {f}"))
                continue
            back = tri.tets[g.tet][f2]
            if back is None or back.tet != i or back.perm != perm_inverse(g.perm):
                bad.append(Violation("not an involution", f"tet {i} face {f}"))
    if not bad:
        try:
            _walk_edges(tri)
        except TriangulationError as exc:
            bad.append(Violation("edge reversal", str(exc)))
    return ValidationReport(tuple(bad))


def require_valid(tri):
    report = validate(tri)
    if not report.valid:
        raise TriangulationError(str(report))
    return tri


def _walk_edges(tri):
    seen = set()
    classes = []
    for i in range(tri.size):
        for a, b in EDGES:
            if (i, frozenset((a, b))) in seen:
                continue
            c, d = sorted({0, 1, 2, 3} - {a, b})
            if perm_sign((a, b, c, d)) < 0:
                c, d = d, c
            start = (i, a, b, c, d)
            state = start
            incs = []
            while True:
                tet, a1, b1, c1, d1 = state
                key = (tet, frozenset((a1, b1)))
                if key in seen:
                    raise TriangulationError(f"edge reversal at tet {tet} edge {a1}{b1}")
                seen.add(key)
                incs.append(EdgeIncidence(tet, (a1, b1), perm_sign((a1, b1, c1, d1)), d1))
                g = tri.tets[tet][d1]
                p = g.perm
                state = (g.tet, p[a1], p[b1], p[d1], p[c1])
                if state[0] == start[0] and {state[1], state[2]} == {a, b}:
                    if state != start:
                        raise TriangulationError(f"edge reversal at tet {i} edge {a}{b}")
                    break
            classes.append(EdgeClass(len(classes), tuple(incs)))
    return tuple(classes)


def edge_classes(tri):
    return list(tri.edges)


def vertex_classes(tri):
    return list(tri.vertices)


def skeleton_summary(tri):
    from .links import build_link

    links = [build_link(tri, vc.index) for vc in tri.vertices]
    v_o = sum(1 for L in links if L.orientable)
    return SkeletonSummary(
        t=tri.size,
        e=len(tri.edges),
        v=len(tri.vertices),
        f=2 * tri.size,
        v_o=v_o,
        v_n=len(links) - v_o,
        chi=tri.euler_characteristic,
        orientable=tri.orientable,
        orientation=tri.orientation,
    )


@dataclass(frozen=True)
class Cover:
    """Orientable double cover: cover tet ``i + s*t`` lies over base tet ``i``."""
    triangulation: Triangulation
    base: Triangulation

    def project_tet(self, tet):
        return tet % self.base.size

    def sheet(self, tet):
        return tet // self.base.size

    def deck(self, tet):
        t = self.base.size
        return (tet + t) % (2 * t)

    def project_corner(self, corner):
        return (corner[0] % self.base.size, corner[1])


def double_cover(tri):
    if tri.orientable:
        raise TriangulationError("already orientable")
    t = tri.size
    tets = []
    for s in (0, 1):
        for i in range(t):
            row = []
            for g in tri.tets[i]:
                s2 = s if perm_sign(g.perm) < 0 else 1 - s
                row.append(Gluing(g.tet + s2 * t, g.perm))
            tets.append(tuple(row))
    name = f"double cover of {tri.name}" if tri.name else "double cover"
    return Cover(Triangulation(tuple(tets), name), tri)


@dataclass(frozen=True)
class Isomorphism:
    tet_map: tuple
    perms: tuple

    def corner(self, corner):
        tet, v = corner
        return (self.tet_map[tet], self.perms[tet][v])


def find_isomorphism(t1, t2):
    """A combinatorial isomorphism t1 -> t2 or None (brute force)."""
    if t1.size != t2.size:
        return None
    n = t1.size
    comps = _components(t1)

    def extend(tet_map, perms, seed, target, perm):
        tet_map, perms = dict(tet_map), dict(perms)
        used = set(tet_map.values())
        if target in used:
            return None
        tet_map[seed], perms[seed] = target, perm
        used.add(target)
        stack = [seed]
        while stack:
            a = stack.pop()
            b, sig = tet_map[a], perms[a]
            for f in range(4):
                g1 = t1.tets[a][f]
                g2 = t2.tets[b][sig[f]]
                want = perm_compose(g2.perm, perm_compose(sig, perm_inverse(g1.perm)))
                if g1.tet in tet_map:
                    if tet_map[g1.tet] != g2.tet or perms[g1.tet] != want:
                        return None
                else:
                    if g2.tet in used:
                        return None
                    tet_map[g1.tet], perms[g1.tet] = g2.tet, want
                    used.add(g2.tet)
                    stack.append(g1.tet)
        return tet_map, perms

    def search(k, tet_map, perms):
        if k == len(comps):
            return Isomorphism(tuple(tet_map[i] for i in range(n)),
                               tuple(perms[i] for i in range(n)))
        seed = comps[k][0]
        for target in range(n):
            for perm in PERMS:
                got = extend(tet_map, perms, seed, target, perm)
                if got is not None:
                    res = search(k + 1, *got)
                    if res is not None:
                        return res
        return None

    return search(0, {}, {})


def are_isomorphic(t1, t2):
    return find_isomorphism(t1, t2) is not None


def _components(tri):
    seen = set()
    comps = []
    for i in range(tri.size):
        if i in seen:
            continue
        comp, stack = [], [i]
        seen.add(i)
        while stack:
            a = stack.pop()
            comp.append(a)
            for g in tri.tets[a]:
                if g.tet not in seen:
                    seen.add(g.tet)
                    stack.append(g.tet)
        comps.append(sorted(comp))
    return comps


def disjoint_union(t1, t2):
    shift = t1.size
    tets = list(t1.tets) + [
        tuple(Gluing(g.tet + shift, g.perm) for g in tet) for tet in t2.tets
    ]
    return Triangulation(tuple(tets), f"{t1.name} + {t2.name}")


def relabel(tri, tet_map, perms):
    """Apply an isomorphism given by a tet bijection and per-tet vertex perms."""
    n = tri.size
    new = [None] * n
    for a in range(n):
        row = [None] * 4
        sig = perms[a]
        for f in range(4):
            g = tri.tets[a][f]
            p = perm_compose(perms[g.tet], perm_compose(g.perm, perm_inverse(sig)))
            row[sig[f]] = Gluing(tet_map[g.tet], p)
        new[tet_map[a]] = tuple(row)
    return Triangulation(tuple(new), tri.name)
