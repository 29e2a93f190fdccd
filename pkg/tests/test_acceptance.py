"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import random
from itertools import product
from math import gcd

import pytest
import sympy

from spunnorm import linalg
from spunnorm.boundary import (kernel_of_nu, nu_matrix, pairing, pairing_via_boundary,
                               rank_on_q, torus_slope, vertex_curves)
from spunnorm.examples import (REFERENCE_FIG8_ROW, REFERENCE_FIG8_TABLE,
                               REFERENCE_GIESEKING_NU_MU, REFERENCE_GIESEKING_ROW,
                               bundled_curves, candidate_columns, load_bundled,
                               matches_up_to_relabeling, same_on_q, to_ours, to_reference)
from spunnorm.links import build_link, framing_curves, lift_link
from spunnorm.polytope import (brute_force_extreme_rays, extreme_rays, pf_components,
                               solution_cone, theorem2_report)
from spunnorm.qmatch import (canonical_c_basis, compatibility_matrix, in_q, kernel_basis,
                             project_pr, qmatching_matrix)
from spunnorm.selftest import fig8_framing
from spunnorm.surface import padding_minimum, reconstruct_core
from spunnorm.triangulation import double_cover, find_isomorphism, perm_compose, skeleton_summary

from conftest import SEED, random_corpus

CORPUS_SIZE = 60


@pytest.fixture(scope="module")
def corpus():
    return random_corpus(CORPUS_SIZE)


@pytest.fixture
def verdict(capsys):
    def report(number, title, checks):
        failed = [k for k, ok in checks.items() if not ok]
        line = f"criterion {number:>2} {title}: {'PASS' if not failed else 'FAIL'}"
        if failed:
            line += "  (failed: " + ", ".join(failed) + ")"
        with capsys.disabled():
            print("\n" + line)
        assert not failed, line
    return report


def q_dim(tri):
    B = qmatching_matrix(tri)
    return B.ncols - sympy.Matrix(B.rows).rank()


def test_criterion_01_fig8_qmatching(fig8, verdict):
    B = qmatching_matrix(fig8)
    M = sympy.Matrix(B.rows)
    verdict(1, "figure-eight Q-matching", {
        "rows equal the reference equation up to relabeling and sign":
            all(matches_up_to_relabeling(fig8, r, REFERENCE_FIG8_ROW) for r in B.rows),
        "rank B = 1": M.rank() == 1 and linalg.rank(B.rows, 6) == 1,
        "dim Q = 5": len(M.nullspace()) == 5 == len(kernel_basis(B)),
        "dim PQ = 4": q_dim(fig8) - 1 == 4,
    })


def test_criterion_02_fig8_admissible(fig8, verdict):
    v, cs, cols = fig8_framing(fig8)
    classes = sorted({r for c in pf_components(fig8) for r in c.rays})
    table = [r[0] for r in REFERENCE_FIG8_TABLE]
    # the reference vectors reappear under some relabeling found afresh here
    relabeled = any({to_ours(c, t) for t in table} == set(classes) for c in candidate_columns(fig8))
    slopes, ds = [], []
    for ref, _, _, _ in REFERENCE_FIG8_TABLE:
        s = torus_slope(fig8, to_ours(cols, ref), v, cs)
        ds.append(s.d)
        slopes.append(sympy.Rational(s.p, s.q))
    verdict(2, "figure-eight admissible classes and slopes", {
        "exactly 4 projective classes": len(classes) == 4,
        "minimal representatives match the table up to relabeling": relabeled,
        "recorded relabeling maps the table onto the classes": {to_ours(cols, t) for t in table} == set(classes),
        "one boundary curve each": ds == [1, 1, 1, 1],
        "slopes -4, 4, -4, 4 row-wise": slopes == [-4, 4, -4, 4]
                                          == [r[3] for r in REFERENCE_FIG8_TABLE],
    })


def test_criterion_03_fig8_surfaces(fig8, verdict):
    checks = {}
    for N in sorted({r for c in pf_components(fig8) for r in c.rays}):
        k0 = padding_minimum(fig8, N)
        got = {(s.chi, s.orientable, tuple(sorted(s.boundary_circles.items())))
               for s in (reconstruct_core(fig8, N, k0 + d) for d in (0, 1, 3))}
        checks[f"{N}: once-punctured Klein bottle at K_min, +1, +3"] = got == {(-1, False, ((0, 1),))}
    verdict(3, "figure-eight surface reconstruction", checks)


def test_criterion_04_fig8_closed(fig8, verdict):
    rows = nu_matrix(fig8).rows
    nonzero = []
    for choice in product(range(3), repeat=fig8.size):
        support = [3 * i + k for i, k in enumerate(choice)]
        nonzero += extreme_rays(solution_cone(fig8, support, rows))
    # independent route: brute-force search of small admissible integer points
    K = kernel_of_nu(fig8)
    small = [x for x in product(range(4), repeat=6)
             if any(x) and in_q(fig8, x) and linalg.in_span(K, x)
             and all(sum(1 for y in x[i:i + 3] if y) <= 1 for i in (0, 3))]
    verdict(4, "figure-eight closed surfaces are vertex linking", {
        "no admissible nonzero ray in ker nu": not nonzero,
        "no small admissible integer point in ker nu": not small,
    })


def test_criterion_05_gieseking(gieseking, fig8, verdict):
    B = qmatching_matrix(gieseking)
    _, cur, _ = bundled_curves()
    cov = lift_link(gieseking, 0)
    cs = framing_curves(cov.surface, cur["lambda"], cur["mu"])
    vc = vertex_curves(gieseking, 0, cs)
    lam, mu = vc.lambdas[0], vc.mus[0]
    K = kernel_basis(B)
    matched = False
    for cols in candidate_columns(gieseking):
        if linalg.primitive(to_reference(cols, B.rows[0])) not in (
                REFERENCE_GIESEKING_ROW, tuple(-x for x in REFERENCE_GIESEKING_ROW)):
            continue
        matched = matched or any(
            same_on_q(gieseking, mu, to_ours(cols, [s * x for x in REFERENCE_GIESEKING_NU_MU]))
            for s in (1, -1))
    # brute force over integer points of Q in a box: the values of nu(mu)
    values = [linalg.dot(mu, x) for x in product(range(-4, 5), repeat=3) if in_q(gieseking, x)]
    g = 0
    for x in values:
        g = gcd(g, x)
    verdict(5, "Gieseking", {
        "single equation r + r' - 2r'' = 0 up to relabeling and sign":
            len(B.rows) == 1 and matches_up_to_relabeling(gieseking, B.rows[0], REFERENCE_GIESEKING_ROW, scale=True),
        "dim PQ = 1": q_dim(gieseking) - 1 == 1,
        "PF empty": pf_components(gieseking) == [],
        "nu(lambda) vanishes on Q": all(linalg.dot(lam, k) == 0 for k in K),
        "nu(mu) = -2r' + 2r'' in the matched labeling": matched,
        "image of boundary map has index two": g == 2,
        "the framing lives on the cover": cov.cover.triangulation.tets == fig8.tets,
    })


def test_criterion_06_double_cover(gieseking, fig8, verdict):
    d = double_cover(gieseking).triangulation
    s = skeleton_summary(d)
    link = build_link(d, 0)
    iso = find_isomorphism(d, fig8)
    carried = iso is not None and all(
        fig8.tets[iso.tet_map[a]][iso.perms[a][f]].tet == iso.tet_map[g.tet]
        and perm_compose(fig8.tets[iso.tet_map[a]][iso.perms[a][f]].perm, iso.perms[a])
        == perm_compose(iso.perms[g.tet], g.perm)
        for a in range(d.size) for f, g in enumerate(d.tets[a]))
    verdict(6, "double cover of Gieseking", {
        "orientable": s.orientable,
        "t=2, e=2, v=1": (s.t, s.e, s.v) == (2, 2, 1),
        "torus link": link.orientable and link.chi == 0,
        "dim Q = 5": q_dim(d) == 5,
        "isomorphic to the bundled figure-eight": carried,
    })


def dimension_formula_checks(tri):
    s = skeleton_summary(tri)
    B = qmatching_matrix(tri)
    r = sympy.Matrix(B.rows).rank()
    return (r == s.e - s.v_o
            and B.ncols - r == 3 * s.t - s.e + s.v_o == s.chi + 2 * s.t - s.v_n
            and not any(linalg.mat_vec(B.rows, [1] * B.ncols))
            and all(sum(row) == 0 for row in B.rows))


def test_criterion_07_dimension_formulas(fig8, gieseking, corpus, verdict):
    verdict(7, f"dimension formulas on bundled examples and {len(corpus)} random triangulations", {
        "corpus has at least 50 random triangulations with t <= 4":
            len(corpus) >= 50 and all(t.size <= 4 for t in corpus),
        "bundled": dimension_formula_checks(fig8) and dimension_formula_checks(gieseking),
        "random": all(dimension_formula_checks(t) for t in corpus),
    })


def linear_map_checks(tri):
    s = skeleton_summary(tri)
    basis = canonical_c_basis(tri)
    images = [project_pr(tri, x) for x in basis]
    dim_pr = sympy.Matrix(images).rank()
    ker = kernel_of_nu(tri)
    return {
        "dim C(T) = t + e": len(sympy.Matrix(compatibility_matrix(tri)).nullspace()) == s.t + s.e,
        "canonical basis independent": sympy.Matrix(basis).rank() == len(basis) == s.t + s.e,
        "dim im pr = t + e - v": dim_pr == s.t + s.e - s.v,
        "im pr inside Q": all(in_q(tri, x) for x in images),
        "ker nu = im pr": len(ker) == dim_pr and all(linalg.in_span(ker, x) for x in images),
        "dim im nu = 2 chi - v_n": rank_on_q(tri, nu_matrix(tri).rows) == 2 * s.chi - s.v_n,
    }


def test_criterion_08_linear_maps(fig8, gieseking, verdict):
    checks = {}
    for name, tri in (("fig8", fig8), ("gieseking", gieseking)):
        for k, ok in linear_map_checks(tri).items():
            checks[f"{name}: {k}"] = ok
    verdict(8, "linear maps", checks)


def test_criterion_09_pairing(fig8, verdict):
    v, cs, cols = fig8_framing(fig8)
    rng = random.Random(SEED)
    K = kernel_basis(qmatching_matrix(fig8))
    sample = []
    for _ in range(20):
        c = [rng.randint(-3, 3) for _ in K]
        sample.append(tuple(sum(ci * k[j] for ci, k in zip(c, K)) for j in range(6)))
    agree = all(pairing(fig8, N, L) == pairing_via_boundary(fig8, N, L, {v: cs})
                == pairing_via_boundary(fig8, N, L) for N in sample for L in sample)
    n1, n2 = (to_ours(cols, r[0]) for r in REFERENCE_FIG8_TABLE[:2])
    verdict(9, "pairing consistency", {
        "20-point sample lies in Q": all(in_q(fig8, x) for x in sample),
        "block formula equals boundary formula on all pairs": agree,
        "<N1, N2> = 4": pairing(fig8, n1, n2) == 4 == pairing_via_boundary(fig8, n1, n2, {v: cs}),
    })


def test_criterion_10_dimension_bounds(fig8, gieseking, kernel_gap, corpus, verdict):
    fr, gr = theorem2_report(fig8), theorem2_report(gieseking)
    reports = [theorem2_report(t) for t in corpus]
    gap = theorem2_report(kernel_gap)
    verdict(10, "component dimension bounds", {
        "bundled components within bounds, both kernel readings":
            not (fr.violations or gr.violations or fr.literal_violations or gr.literal_violations),
        "random corpus components within bounds": not any(r.violations for r in reports),
        # reading the kernel term as dim(R cap ker) instead of dim(span R cap ker)
        # breaks the upper bound; this pinned instance shows it
        "polytope-kernel reading fails on the pinned instance, span reading holds":
            not gap.violations and len(gap.literal_violations) == 1,
        "figure-eight at lower bound chi - 1 = 0":
            all(c.lower == 0 and c.dim == 0 for c in fr.checks) and len(fr.checks) == 4,
        "Gieseking at chi - v_n - 1 = -1 = dim of empty set":
            gr.empty and [(c.lower, c.dim) for c in gr.checks] == [(-1, -1)],
    })


def test_criterion_11_oracle(fig8, gieseking, corpus, verdict):
    checked = 0
    ok = True
    for tri in [fig8, gieseking] + [t for t in corpus if 3 * t.size <= 9]:
        cones = [solution_cone(tri)] + [
            solution_cone(tri, [3 * i + k for i, k in enumerate(ch)])
            for ch in product(range(3), repeat=tri.size)]
        for cone in cones:
            ok = ok and extreme_rays(cone) == brute_force_extreme_rays(cone)
            checked += 1
    verdict(11, f"double description equals brute force on {checked} cones", {
        "all instances with 3t <= 9 agree": ok,
    })
