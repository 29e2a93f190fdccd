"""Bundled example triangulations and the search that produces them.

Nothing here is transcribed from pictures: the Gieseking triangulation is
found by exhaustive search, the figure-eight triangulation is its orientable
double cover, and the figure-eight framing curves are found by searching
short dual cycles whose nu functionals match the reference ones below.
"""
import json
from importlib import resources
from itertools import permutations, product
from pathlib import Path

from . import linalg
from .boundary import nu_functional
from .links import DualCycle, build_link, intersection
from .polytope import admissible_vertices
from .qmatch import kernel_basis, qmatching_matrix, tet_labeling
from .triangulation import (PERMS, Triangulation, double_cover, from_gluings,
                            parse_triangulation, perm_inverse, validate)

# Reference data for the figure-eight knot complement, in the coordinates
# (p, p', p'', q, q', q'') where p and q are the quad types of the two tets.
REFERENCE_FIG8_ROW = (-1, -1, 2, -1, -1, 2)
REFERENCE_FIG8_NU = {
    "lambda": (2, 2, -4, 0, 0, 0),
    "mu": (0, -1, 1, -1, 0, 1),
}
# (solution, nu(mu), nu(lambda), slope)
REFERENCE_FIG8_TABLE = (
    ((2, 0, 0, 0, 0, 1), 1, 4, -4),
    ((0, 2, 0, 0, 0, 1), -1, 4, 4),
    ((0, 0, 1, 2, 0, 0), -1, -4, -4),
    ((0, 0, 1, 0, 2, 0), 1, -4, 4),
)
# Gieseking reference: equation r + r' - 2r'' = 0, nu(mu) = -2r' + 2r''.
REFERENCE_GIESEKING_ROW = (1, 1, -2)
REFERENCE_GIESEKING_NU_MU = (0, -2, 2)


class SearchFailure(RuntimeError):
    pass


def one_tet_gluings():
    """All closed one-tetrahedron gluing tables (faces paired among themselves)."""
    out = []
    for m in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        choices = [[p for p in PERMS if p[f] == g] for f, g in m]
        for p1, p2 in product(*choices):
            rows = [None] * 4
            for (f, g), p in zip(m, (p1, p2)):
                rows[f] = (0, p)
                rows[g] = (0, perm_inverse(p))
            out.append(from_gluings([rows]))
    return out


def search_gieseking():
    for tri in one_tet_gluings():
        if not validate(tri).valid or len(tri.edges) != 1:
            continue
        link = build_link(tri, 0)
        if not link.orientable and link.chi == 0:
            return Triangulation(tri.tets, "gieseking")
    raise SearchFailure("no one-tetrahedron triangulation with a Klein bottle link")


def figure_eight_from(gieseking):
    return Triangulation(double_cover(gieseking).triangulation.tets, "figure-eight")


# -- matching the reference coordinates -------------------------------------

def candidate_columns(tri):
    """Column maps that permute tets and cyclically rotate each tet's
    orientation-aligned (q, q', q''); ``cols[j]`` is our coordinate holding
    reference coordinate j."""
    lab = tet_labeling(tri)
    t = tri.size
    for tets in permutations(range(t)):
        for rot in product(range(3), repeat=t):
            cols = []
            for a in range(t):
                order = lab.order[tets[a]]
                cols += [3 * tets[a] + order[(j + rot[a]) % 3] for j in range(3)]
            yield tuple(cols)


def matches_up_to_relabeling(tri, vec, ref, scale=False):
    """True if some candidate column map carries vec to +-ref (or a multiple)."""
    target = linalg.primitive(ref) if scale else tuple(ref)
    for cols in candidate_columns(tri):
        r = to_reference(cols, vec)
        if scale and any(r):
            r = linalg.primitive(r)
        if r == target or tuple(-x for x in r) == target:
            return True
    return False


def reference_relabelings(tri, row=REFERENCE_FIG8_ROW, solutions=None):
    """Column maps carrying the reference Q-matching row to one of ours (up to
    sign) and the reference admissible solutions onto ours."""
    if solutions is None:
        solutions = [r[0] for r in REFERENCE_FIG8_TABLE]
    rows = qmatching_matrix(tri).rows
    ours = set(admissible_vertices(tri))
    out = []
    for cols in candidate_columns(tri):
        if {to_ours(cols, s) for s in solutions} != ours:
            continue
        r = to_ours(cols, row)
        neg = tuple(-x for x in r)
        if any(tuple(x) in (r, neg) for x in rows):
            out.append(cols)
    return out


def to_ours(cols, vec):
    out = [0] * len(cols)
    for j, c in enumerate(cols):
        out[c] = vec[j]
    return tuple(out)


def to_reference(cols, vec):
    return tuple(vec[c] for c in cols)


def same_on_q(tri, f, g):
    """True if two functionals agree on Q(T)."""
    K = kernel_basis(qmatching_matrix(tri))
    return all(linalg.dot(f, k) == linalg.dot(g, k) for k in K)


def simple_cycles(link, max_len):
    """Closed dual paths without repeated triangles, shortest first."""
    n = len(link.triangles)
    found = []
    # each cycle is enumerated from its smallest triangle only
    for start in range(n):
        stack = [(start, (), frozenset([start]))]
        while stack:
            k, steps, seen = stack.pop()
            if len(steps) >= max_len:
                continue
            for s in link.sides(k):
                k2, _ = link.neighbor(k, s)
                st = steps + ((k, s),)
                if k2 == start and st:
                    found.append(DualCycle(st))
                elif k2 > start and k2 not in seen:
                    stack.append((k2, st, seen | {k2}))
    found.sort(key=lambda c: (len(c.steps), c.steps))
    return found


def search_framing(tri, cols, max_len=8):
    """Shortest dual cycles whose nu matches the reference lambda and mu."""
    link = build_link(tri, 0)
    targets = {name: to_ours(cols, f) for name, f in REFERENCE_FIG8_NU.items()}
    hits = {}
    for cyc in simple_cycles(link, max_len):
        f = nu_functional(link, cyc)
        for name, g in targets.items():
            if name not in hits and same_on_q(tri, f, g):
                hits[name] = cyc
        if len(hits) == 2:
            break
    if len(hits) < 2:
        return None
    return hits["lambda"], hits["mu"]


def find_reference_framing(tri):
    """(cols, lambda, mu) with lambda, mu positively oriented."""
    link = build_link(tri, 0)
    for cols in reference_relabelings(tri):
        got = search_framing(tri, cols)
        if got and intersection(link, *got) == 1:
            return cols, got[0], got[1]
    raise SearchFailure("no framing reproduces the reference functionals")


def curves_document(vertex, lam, mu, cols=None):
    doc = {"vertex": vertex, "curves": [
        {"name": "mu", "steps": [list(s) for s in mu.steps]},
        {"name": "lambda", "steps": [list(s) for s in lam.steps]},
    ]}
    if cols is not None:
        doc["reference_columns"] = list(cols)
    return doc


def load_curves(doc):
    """Parse a curve file into (vertex, {name: DualCycle}, extra)."""
    if isinstance(doc, (str, Path)):
        doc = json.loads(Path(doc).read_text(encoding="utf-8"))
    curves = {c["name"]: DualCycle(tuple(tuple(s) for s in c["steps"])) for c in doc["curves"]}
    return int(doc["vertex"]), curves, doc


def generate(outdir):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    g = search_gieseking()
    f = figure_eight_from(g)
    cols, lam, mu = find_reference_framing(f)
    (outdir / "gieseking.json").write_text(g.dumps() + "\n", encoding="utf-8")
    (outdir / "fig8.json").write_text(f.dumps() + "\n", encoding="utf-8")
    (outdir / "fig8_curves.json").write_text(
        json.dumps(curves_document(0, lam, mu, cols)) + "\n", encoding="utf-8")
    return [outdir / n for n in ("gieseking.json", "fig8.json", "fig8_curves.json")]


BUNDLED = {"gieseking": "gieseking.json", "fig8": "fig8.json",
           "figure-eight": "fig8.json", "fig8_curves": "fig8_curves.json"}


def bundled_path(name):
    return resources.files("spunnorm") / "data" / BUNDLED.get(name, name)


def load_bundled(name):
    return parse_triangulation(bundled_path(name).read_text(encoding="utf-8"))


def bundled_curves():
    return load_curves(json.loads(bundled_path("fig8_curves").read_text(encoding="utf-8")))
