"""Checks on the bundled figure-eight and Gieseking examples.

Each check returns ``(ok, detail)``; ``run_all`` is what ``spunnorm selftest``
executes.  The pytest acceptance suite covers the same ground with its own
oracles and with random triangulations.
"""
import random
from itertools import product
from math import gcd

from . import linalg
from .boundary import (kernel_of_nu, nu_matrix, pairing, pairing_via_boundary,
                       rank_on_q, torus_slope, vertex_curves)
from .examples import (REFERENCE_FIG8_ROW, REFERENCE_FIG8_TABLE,
                       REFERENCE_GIESEKING_NU_MU, REFERENCE_GIESEKING_ROW,
                       bundled_curves, candidate_columns, load_bundled,
                       matches_up_to_relabeling, same_on_q, to_ours, to_reference)
from .links import build_link, framing_curves, lift_link
from .polytope import (brute_force_extreme_rays, extreme_rays, pf_components,
                       solution_cone, theorem2_report)
from .qmatch import (canonical_c_basis, compatibility_matrix, dimension_report,
                     in_q, kernel_basis, project_pr, qmatching_matrix)
from .surface import padding_minimum, reconstruct_core
from .triangulation import are_isomorphic, double_cover, skeleton_summary


def fig8_framing(tri=None):
    tri = tri or load_bundled("fig8")
    v, cur, doc = bundled_curves()
    link = build_link(tri, v)
    return v, framing_curves(link, cur["lambda"], cur["mu"]), tuple(doc["reference_columns"])


def check_fig8_qmatch():
    f = load_bundled("fig8")
    B = qmatching_matrix(f)
    rep = dimension_report(f)
    rows_ok = all(matches_up_to_relabeling(f, r, REFERENCE_FIG8_ROW) for r in B.rows)
    ok = rows_ok and rep.rank_B == 1 and rep.dim_Q == 5
    return ok, f"rank B={rep.rank_B} dim Q={rep.dim_Q} dim PQ={rep.dim_Q - 1} rows={list(B.rows)}"


def check_fig8_admissible():
    f = load_bundled("fig8")
    v, cs, cols = fig8_framing(f)
    comps = pf_components(f)
    ours = sorted({r for c in comps for r in c.rays})
    ok = len(ours) == 4
    slopes = []
    for ref, _, _, slope in REFERENCE_FIG8_TABLE:
        N = to_ours(cols, ref)
        if N not in ours:
            ok = False
            continue
        s = torus_slope(f, N, v, cs)
        slopes.append(None if s is None else (s.p, s.q, s.d))
        # p/q with |q| = 1, so the slope is p*q
        ok = ok and s is not None and s.d == 1 and abs(s.q) == 1 and s.p * s.q == slope
    return ok, f"classes={len(ours)} slopes(p,q,d)={slopes}"


def check_fig8_surfaces():
    f = load_bundled("fig8")
    out = []
    ok = True
    for comp in pf_components(f):
        for N in comp.rays:
            k0 = padding_minimum(f, N)
            reps = {(s.chi, s.orientable, tuple(sorted(s.boundary_circles.items())))
                    for s in (reconstruct_core(f, N, k0 + d) for d in (0, 1, 3))}
            out.append(sorted(reps))
            ok = ok and reps == {(-1, False, ((0, 1),))}
    return ok, f"{len(out)} surfaces: {out[0] if out else None}"


def check_fig8_closed():
    f = load_bundled("fig8")
    rows = nu_matrix(f).rows
    found = []
    for choice in product(range(3), repeat=f.size):
        support = [3 * i + k for i, k in enumerate(choice)]
        found += extreme_rays(solution_cone(f, support, rows))
    return not found, f"admissible nonzero points of ker nu: {len(found)}"


def check_gieseking():
    g = load_bundled("gieseking")
    f = load_bundled("fig8")
    B = qmatching_matrix(g)
    rep = dimension_report(g)
    comps = pf_components(g)
    _, cur, _ = bundled_curves()
    cov = lift_link(g, 0)
    cs = framing_curves(cov.surface, cur["lambda"], cur["mu"])
    vc = vertex_curves(g, 0, cs)
    lam, mu = vc.lambdas[0], vc.mus[0]
    lam_zero = all(linalg.dot(lam, k) == 0 for k in kernel_basis(B))
    mu_ok = False
    for cols in candidate_columns(g):
        r = to_reference(cols, B.rows[0])
        if linalg.primitive(r) not in (REFERENCE_GIESEKING_ROW, tuple(-x for x in REFERENCE_GIESEKING_ROW)):
            continue
        for sign in (1, -1):
            if same_on_q(g, mu, to_ours(cols, [sign * x for x in REFERENCE_GIESEKING_NU_MU])):
                mu_ok = True
    K = kernel_basis(B)
    index = 0
    for k in K:
        index = gcd(index, linalg.dot(mu, k))
    ok = (len(B.rows) == 1 and matches_up_to_relabeling(g, B.rows[0], REFERENCE_GIESEKING_ROW, scale=True)
          and rep.dim_Q - 1 == 1 and not comps and lam_zero and mu_ok
          and linalg.minor_gcd(K) == 1 and abs(index) == 2
          and cov.cover.triangulation.tets == f.tets)
    return ok, (f"row={list(B.rows[0])} dim PQ={rep.dim_Q - 1} PF components={len(comps)} "
                f"nu(lambda)=0 on Q: {lam_zero} nu(mu)={list(mu)} index={abs(index)}")


def check_double_cover():
    g = load_bundled("gieseking")
    f = load_bundled("fig8")
    d = double_cover(g).triangulation
    s = skeleton_summary(d)
    link = build_link(d, 0)
    rep = dimension_report(d)
    ok = (s.orientable and (s.t, s.e, s.v) == (2, 2, 1) and link.orientable and link.chi == 0
          and rep.dim_Q == 5 and are_isomorphic(d, f))
    return ok, f"t={s.t} e={s.e} v={s.v} orientable={s.orientable} dim Q={rep.dim_Q}"


def dimension_formulas_hold(tri):
    rep = dimension_report(tri)
    B = qmatching_matrix(tri)
    ones = [1] * B.ncols
    return (rep.rank_ok and rep.dim_ok and not any(linalg.mat_vec(B.rows, ones))
            and all(sum(r) == 0 for r in B.rows))


def check_dimension_formulas():
    ok = all(dimension_formulas_hold(load_bundled(n)) for n in ("fig8", "gieseking"))
    return ok, "bundled examples"


def linear_map_report(tri):
    s = skeleton_summary(tri)
    C = compatibility_matrix(tri)
    dim_c = len(linalg.nullspace(C, 7 * tri.size))
    basis = canonical_c_basis(tri)
    indep = linalg.rank(basis, 7 * tri.size) == len(basis)
    images = [project_pr(tri, x) for x in basis]
    dim_pr = linalg.rank(images, 3 * tri.size)
    in_ker = all(in_q(tri, x) for x in images)
    ker = kernel_of_nu(tri)
    ker_ok = len(ker) == dim_pr and all(linalg.in_span(ker, x) for x in images)
    dim_nu = rank_on_q(tri, nu_matrix(tri).rows)
    return {
        "dim_C": dim_c, "t_plus_e": s.t + s.e, "basis_independent": indep,
        "dim_im_pr": dim_pr, "t_plus_e_minus_v": s.t + s.e - s.v,
        "im_pr_in_Q": in_ker, "ker_nu_equals_im_pr": ker_ok,
        "dim_im_nu": dim_nu, "two_chi_minus_v_n": 2 * s.chi - s.v_n,
    }


def linear_map_ok(r):
    return (r["dim_C"] == r["t_plus_e"] and r["basis_independent"]
            and r["dim_im_pr"] == r["t_plus_e_minus_v"] and r["im_pr_in_Q"]
            and r["ker_nu_equals_im_pr"] and r["dim_im_nu"] == r["two_chi_minus_v_n"])


def check_linear_maps():
    reps = {n: linear_map_report(load_bundled(n)) for n in ("fig8", "gieseking")}
    return all(linear_map_ok(r) for r in reps.values()), str(reps)


def random_q_points(tri, n, rng, bound=3):
    K = kernel_basis(qmatching_matrix(tri))
    out = []
    for _ in range(n):
        c = [rng.randint(-bound, bound) for _ in K]
        out.append(tuple(sum(ci * k[j] for ci, k in zip(c, K)) for j in range(3 * tri.size)))
    return out


def check_pairing(seed=0):
    f = load_bundled("fig8")
    v, cs, cols = fig8_framing(f)
    pts = random_q_points(f, 20, random.Random(seed))
    bad = 0
    for N in pts:
        for L in pts:
            if pairing(f, N, L) != pairing_via_boundary(f, N, L):
                bad += 1
            if pairing(f, N, L) != pairing_via_boundary(f, N, L, {v: cs}):
                bad += 1
    n1, n2 = (to_ours(cols, r[0]) for r in REFERENCE_FIG8_TABLE[:2])
    val = pairing(f, n1, n2)
    return bad == 0 and val == 4, f"mismatches={bad} <N1,N2>={val}"


def check_dimension_bounds():
    out = []
    ok = True
    for name in ("fig8", "gieseking"):
        rep = theorem2_report(load_bundled(name))
        ok = ok and not rep.violations and not rep.literal_violations \
            and all(c.at_lower_bound for c in rep.checks)
        out.append(f"{name}: " + ", ".join(f"{c.lower}<={c.dim}<={c.upper}" for c in rep.checks))
    return ok, "; ".join(out)


def oracle_agrees(tri):
    cones = [solution_cone(tri)]
    for choice in product(range(3), repeat=tri.size):
        cones.append(solution_cone(tri, [3 * i + k for i, k in enumerate(choice)]))
    return all(extreme_rays(c) == brute_force_extreme_rays(c) for c in cones)


def check_oracle():
    return all(oracle_agrees(load_bundled(n)) for n in ("fig8", "gieseking")), "bundled examples"


CHECKS = (
    ("1 figure-eight Q-matching", check_fig8_qmatch),
    ("2 figure-eight admissible classes and slopes", check_fig8_admissible),
    ("3 figure-eight surface reconstruction", check_fig8_surfaces),
    ("4 figure-eight closed surfaces are vertex linking", check_fig8_closed),
    ("5 Gieseking", check_gieseking),
    ("6 double cover", check_double_cover),
    ("7 dimension formulas", check_dimension_formulas),
    ("8 linear maps", check_linear_maps),
    ("9 pairing consistency", check_pairing),
    ("10 component dimension bounds", check_dimension_bounds),
    ("11 extreme-ray oracle", check_oracle),
)


def run_all():
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed selftest
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, ok, detail))
    return results
