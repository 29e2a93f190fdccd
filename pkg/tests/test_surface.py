from itertools import product

import pytest
from hypothesis import given, strategies as st

from spunnorm import linalg
from spunnorm.links import build_link
from spunnorm.polytope import RationalCone, admissible_vertices, extreme_rays
from spunnorm.qmatch import (compatibility_matrix, project_pr, quad_col, tri_col,
                             vertex_link_vector)
from spunnorm.surface import (SurfaceError, haken_sum, is_admissible, kneser_haken_bounds,
                              normal_euler_characteristic, padding_minimum, reconstruct_core,
                              triangle_fill)

from conftest import seeds, triangulations


def closed_normal_surfaces(tri):
    """Admissible extreme rays of the traditional-coordinate cone."""
    n = 7 * tri.size
    rays = extreme_rays(RationalCone(n, tuple(compatibility_matrix(tri))))
    return [x for x in rays if is_admissible(project_pr(tri, x))]


def traditional_vector(tri, N, fill):
    x = [0] * (7 * tri.size)
    for (tet, v), c in fill.counts.items():
        x[tri_col(tet, v)] = c
    for tet in range(tri.size):
        for k in range(3):
            x[quad_col(tet, k)] = N[3 * tet + k]
    return tuple(x)


def shape(s):
    return (s.chi, s.orientable, tuple(sorted(s.boundary_circles.items())), s.spin_set)


def test_is_admissible():
    assert is_admissible((1, 0, 0, 0, 0, 2))
    assert not is_admissible((1, 1, 0))
    assert not is_admissible((-1, 0, 0))
    assert not is_admissible((1, 0))


def test_kneser_haken_bounds(fig8):
    assert kneser_haken_bounds(fig8) == (24, 12)


def test_haken_sum_supports(fig8):
    a, b = (2, 0, 0, 0, 0, 1), (0, 2, 0, 0, 0, 1)
    with pytest.raises(SurfaceError, match="incompatible supports"):
        haken_sum(fig8, a, b)
    assert haken_sum(fig8, a, a) == (4, 0, 0, 0, 0, 2)
    with pytest.raises(SurfaceError, match="not in Q"):
        haken_sum(fig8, (1, 0, 0, 0, 0, 0), a)


def test_reconstruct_rejects_bad_input(fig8):
    with pytest.raises(SurfaceError, match="not in Q"):
        reconstruct_core(fig8, (1, 0, 0, 0, 0, 0))
    with pytest.raises(SurfaceError, match="not admissible"):
        reconstruct_core(fig8, (-2, 0, 0, 0, 0, -1))
    with pytest.raises(SurfaceError, match="padding"):
        triangle_fill(fig8, (2, 0, 0, 0, 0, 1), 0)


def test_fig8_vertex_surfaces(fig8):
    for N in admissible_vertices(fig8):
        k0 = padding_minimum(fig8, N)
        for K in (k0, k0 + 1, k0 + 3, k0 + 10):
            s = reconstruct_core(fig8, N, K)
            assert shape(s) == (-1, False, ((0, 1),), (0,))
            assert s.components == 1
        for seed in range(4):
            assert shape(reconstruct_core(fig8, N, seed=seed)) == (-1, False, ((0, 1),), (0,))


def test_fig8_report_line(fig8):
    s = reconstruct_core(fig8, (0, 0, 1, 2, 0, 0))
    assert s.report() == "surface: chi=-1 orientable=False boundary=[(0,1)] spins_into=[0]"


def test_vertex_linking_tori(fig8):
    s = reconstruct_core(fig8, (0,) * 6, 3)
    assert shape(s) == (0, True, (), ())
    assert s.components == 3


@given(triangulations(max_t=3))
def test_closed_surfaces_match_cell_count(tri):
    for x in closed_normal_surfaces(tri)[:6]:
        N = project_pr(tri, x)
        K = padding_minimum(tri, N)
        fill = triangle_fill(tri, N, K)
        assert fill.spin_set == ()
        s = reconstruct_core(tri, N, K)
        assert s.boundary_circles == {} and s.spin_set == ()
        y = traditional_vector(tri, N, fill)
        assert not any(linalg.mat_vec(compatibility_matrix(tri), y))
        assert s.chi == normal_euler_characteristic(tri, y)
        # the fill differs from x by whole vertex-linking surfaces
        links = [vertex_link_vector(tri, vc.index) for vc in tri.vertices]
        diff = [a - b for a, b in zip(y, x)]
        assert linalg.in_span(links, diff)


@given(triangulations(max_t=3))
def test_euler_characteristic_is_additive_on_closed_sums(tri):
    surfaces = closed_normal_surfaces(tri)[:4]
    chis = [v.index for v in tri.vertices]
    link_chi = [build_link(tri, v).chi for v in chis]
    for x, y in product(surfaces, repeat=2):
        N = tuple(a + b for a, b in zip(project_pr(tri, x), project_pr(tri, y)))
        if not is_admissible(N):
            continue
        fill = triangle_fill(tri, N, padding_minimum(tri, N))
        s = reconstruct_core(tri, N, fill.padding)
        z = traditional_vector(tri, N, fill)
        # z - x - y is a combination of vertex links; its multiplicity at v
        # is the count difference at any corner of v
        extra = 0
        for vc, lc in zip(tri.vertices, link_chi):
            tet, v = vc.corners[0]
            i = tri_col(tet, v)
            extra += (z[i] - x[i] - y[i]) * lc
        assert s.chi == normal_euler_characteristic(tri, x) + normal_euler_characteristic(tri, y) + extra


@given(triangulations(), seeds)
def test_reconstruction_independent_of_tree(tri, seed):
    for N in admissible_vertices(tri)[:4]:
        # the minimal padding depends on the tree, so compare at a common one
        K = max(padding_minimum(tri, N), padding_minimum(tri, N, seed))
        base = reconstruct_core(tri, N, K)
        other = reconstruct_core(tri, N, K, seed=seed)
        assert (base.orientable, base.boundary_circles, base.spin_set) == \
            (other.orientable, other.boundary_circles, other.spin_set)
        assert base.chi == other.chi
        hidden = {v for v in base.spin_set if build_link(tri, v).chi < 0}
        assert (base.chi is None) == bool(hidden)
        assert {v for v, c in base.boundary_circles.items() if c is None} == hidden


@given(triangulations(), st.integers(1, 4))
def test_padding_invariance_at_torus_and_klein_cusps(tri, extra):
    for N in admissible_vertices(tri)[:4]:
        k0 = padding_minimum(tri, N)
        a, b = reconstruct_core(tri, N, k0), reconstruct_core(tri, N, k0 + extra)
        if a.chi is None:
            continue
        # padding adds vertex-linking layers, which change chi only at sphere links
        layers = sum(build_link(tri, vc.index).chi for vc in tri.vertices) * extra
        assert b.chi == a.chi + layers
        assert b.boundary_circles == a.boundary_circles
