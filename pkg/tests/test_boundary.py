import random

import pytest
from hypothesis import given

from spunnorm import linalg
from spunnorm.boundary import (BoundaryError, boundary_class, kernel_of_nu, nu_functional,
                               nu_matrix, pairing, pairing_via_boundary, rank_on_q,
                               torus_slope, vertex_curves)
from spunnorm.links import DualCycle, build_link, reduce_cycle
from spunnorm.qmatch import canonical_c_basis, kernel_basis, project_pr, qmatching_matrix
from spunnorm.selftest import fig8_framing, random_q_points
from spunnorm.triangulation import skeleton_summary

from conftest import SEED, triangulations


def loop_around(link, k, w):
    """Dual cycle circling the link vertex at corner w of triangle k."""
    v = link.triangles[k][1]
    side = next(u for u in range(4) if u not in (v, w))
    start = (k, side, w)
    steps = []
    while True:
        steps.append((k, side))
        k2, s2 = link.neighbor(k, side)
        w = link.label_map(k, side)[w]
        v2 = link.triangles[k2][1]
        side = next(u for u in range(4) if u not in (v2, w, s2))
        k = k2
        if (k, side, w) == start:
            return DualCycle(tuple(steps))


@given(triangulations())
def test_nu_around_link_vertices_vanishes_on_q(tri):
    K = kernel_basis(qmatching_matrix(tri))
    for vc in tri.vertices:
        link = build_link(tri, vc.index)
        for k in range(len(link.triangles)):
            for w in link.sides(k):
                f = nu_functional(link, loop_around(link, k, w))
                assert all(linalg.dot(f, x) == 0 for x in K)


@given(triangulations())
def test_nu_kills_vertex_linking_and_edge_solutions(tri):
    images = [project_pr(tri, x) for x in canonical_c_basis(tri)]
    for row in nu_matrix(tri).rows:
        assert all(linalg.dot(row, x) == 0 for x in images)


@given(triangulations())
def test_dim_image_of_nu(tri):
    s = skeleton_summary(tri)
    rows = nu_matrix(tri).rows
    assert rank_on_q(tri, rows) == 2 * s.chi - s.v_n
    dim_q = len(kernel_basis(qmatching_matrix(tri)))
    assert len(kernel_of_nu(tri)) == dim_q - rank_on_q(tri, rows)


@given(triangulations())
def test_pairing_matches_boundary_formula(tri):
    if not tri.orientable:
        with pytest.raises(BoundaryError, match="double_cover"):
            pairing(tri, (0,) * (3 * tri.size), (0,) * (3 * tri.size))
        return
    pts = random_q_points(tri, 6, random.Random(SEED + tri.size))
    for N in pts:
        for L in pts:
            a = pairing(tri, N, L)
            assert a == pairing_via_boundary(tri, N, L)
            assert a == -pairing(tri, L, N)


@given(triangulations())
def test_sigma_symmetry_and_free_coefficient(tri):
    for vc in tri.vertices:
        if build_link(tri, vc.index).orientable:
            continue
        for N in random_q_points(tri, 3, random.Random(SEED)):
            bc = boundary_class(tri, N, vc.index)
            assert not bc.orientable


def test_homologous_cycles_give_same_nu_on_q(fig8):
    link = build_link(fig8, 0)
    v, cs, _ = fig8_framing(fig8)
    mu = cs.cycles[1]
    K = kernel_basis(qmatching_matrix(fig8))
    base = nu_functional(link, mu)
    # insert a loop around a link vertex at the start of mu
    k, s = mu.steps[0]
    w = next(u for u in link.endpoints(k, s))
    loop = loop_around(link, k, w)
    i = next(i for i, st in enumerate(loop.steps) if st[0] == k)
    rotated = loop.steps[i:] + loop.steps[:i]
    combined = DualCycle(rotated + mu.steps)
    combined = reduce_cycle(link, combined)
    f = nu_functional(link, combined)
    assert all(linalg.dot(f, x) == linalg.dot(base, x) for x in K)


def test_open_path_rejected(fig8):
    link = build_link(fig8, 0)
    with pytest.raises(BoundaryError):
        nu_functional(link, DualCycle(((0, 1),), closed=False))


def test_fig8_slopes_and_no_boundary(fig8):
    v, cs, _ = fig8_framing(fig8)
    assert str(torus_slope(fig8, (2, 0, 0, 0, 0, 1), v, cs)) == "slope -4/1 (p=-4, q=1), curves d=1"
    # the image of an edge solution has no boundary
    N = project_pr(fig8, canonical_c_basis(fig8)[-1])
    assert any(N) and torus_slope(fig8, N, v, cs) is None
    with pytest.raises(BoundaryError, match="not in Q"):
        torus_slope(fig8, (1, 0, 0, 0, 0, 0), v, cs)


def test_torus_slope_needs_torus(gieseking):
    with pytest.raises(BoundaryError, match="non-torus"):
        torus_slope(gieseking, (2, 0, 1), 0)


def test_gieseking_free_coefficient(gieseking):
    bc = boundary_class(gieseking, (2, 0, 1), 0)
    assert bc.free_coefficient in (2, -2)
    cur = vertex_curves(gieseking, 0)
    # the sigma-anti-invariant class carries no boundary
    assert all(linalg.dot(cur.mus[0], k) == 0 for k in kernel_basis(qmatching_matrix(gieseking)))
