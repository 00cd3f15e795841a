import pytest
from hypothesis import given, settings

from quillen_gl3 import modp
from quillen_gl3.graph import build_parabolic_graph
from quillen_gl3.spectral import (
    D1Complex,
    SpectralSequenceError,
    apply_d2,
    build_d1,
    chern_torsion_witness,
    cokernel_bound_series,
    d1_dims,
    d1_kills_d2,
    e2_column0_series,
    e2_page,
    extended_transition_matrices,
    sanity_identity,
    steinberg_dim,
    total_cohomology,
    transition_kernel,
    transition_matrices,
)

from test_curve import curves

ELL = 5


@pytest.mark.parametrize("t", range(0, 5))
def test_structured_rank_matches_dense_matrix(ref_graph, t):
    cx = D1Complex(ref_graph, t)
    assert cx.rank == modp.rank(cx.matrix(), ELL)


@pytest.mark.parametrize("t", range(0, 4))
def test_structured_rank_matches_dense_matrix_rank_one(rank_one_graph, t):
    cx = D1Complex(rank_one_graph, t)
    assert cx.rank == modp.rank(cx.matrix(), ELL)


def test_degree_zero_kernel_is_components(ref_graph):
    A, _ = build_d1(ref_graph, 0)
    assert A.shape == (len(ref_graph.edges), ref_graph.n_stable + len(ref_graph.splits))
    assert A.shape[1] - modp.rank(A, ELL) == ref_graph.components() == 1


def test_full_kernel_matches_column_zero(ref_graph):
    """ker of the differential on whole algebras equals E_2^{0,t}."""
    page = e2_page(ref_graph, 4, check=False)
    for t in range(5):
        A, _ = build_d1(ref_graph, t)
        assert A.shape[1] - modp.rank(A, ELL) == page.dims[0][t]


def test_degree_one_printed_matrices():
    Ta, Tb = transition_matrices(ELL)["A1-A2"]
    assert Ta.tolist() == [[0, 1], [1, -1], [-1, 0]]
    assert Tb.tolist() == [[2], [-1]]


def test_extended_matrices_full_rank():
    Ta, Tb = extended_transition_matrices(ELL)
    assert Ta.tolist() == [[0, 1, 1], [1, -1, 1], [-1, 0, 1]]
    assert Tb.tolist() == [[2, 1], [-1, 1]]
    assert modp.rank(Ta % ELL, ELL) == 3 and modp.rank(Tb % ELL, ELL) == 2


@pytest.mark.parametrize("graph_name", ["ref_graph", "rank_one_graph"])
def test_degree_one_kernel_and_transitions(graph_name, request):
    g = request.getfixturevalue(graph_name)
    cx = D1Complex(g, 1)
    assert cx.kernel_dim == g.rank_ell
    assert cx.cokernel_dim == g.counts.n_a + g.rank_ell
    for Ta, Tb in transition_matrices(ELL).values():
        assert transition_kernel(g, Ta, Tb) == g.rank_ell


@pytest.mark.parametrize("t", range(1, 6))
def test_d1_kills_d2(ref_graph, t):
    assert d1_kills_d2(ref_graph, t)


def test_cokernel_bound(ref_graph, rank_one_graph):
    for g in (ref_graph, rank_one_graph):
        _, coker = d1_dims(g, 8)
        bound = cokernel_bound_series(g.counts).expand(8)
        assert all(x <= b for x, b in zip(coker, bound))


def test_two_paths_agree_through_degree_four(ref_graph):
    page = e2_page(ref_graph, 4)
    assert page.dims[0] == e2_column0_series(ref_graph.counts, 0).expand(4)


def test_page_examples(ref_graph):
    page = e2_page(ref_graph, 4, check=False)
    assert page.dims[2] == [1331] * 5
    assert page.layers["gr1"][1][1] == 4
    assert page.dims[0][0] == 1
    assert apply_d2(page, 0).dims == page.dims


def test_apply_d2_rank_one(rank_one_graph):
    page = e2_page(rank_one_graph, 4, check=False)
    einf = apply_d2(page, 1)
    assert einf.dims[2][0] == 11**3 - 1
    assert einf.dims[0][1] == 1
    assert einf.dims[1] == page.dims[1]
    with pytest.raises(SpectralSequenceError):
        apply_d2(page, 10**6)


def test_total_cohomology(ref_graph, rank_one_graph):
    for g in (ref_graph, rank_one_graph):
        einf = apply_d2(e2_page(g, 4, check=False), g.rank_ell)
        H = total_cohomology(einf)
        c = g.counts
        assert H[0] == 1 and H[1] == 1
        assert H[2] == g.q**3 + 2 * c.n_a + g.rank_ell + 1


def test_steinberg_dimension():
    assert steinberg_dim(11) == 1331 and steinberg_dim(7, 2) == 7


def test_chern_torsion_witness():
    from quillen_gl3.algebra import models

    d, w = chern_torsion_witness(ELL, "center", 6)
    assert d == 4
    R = models(ELL).chern
    target = R["c1"] * R["c1"] - 3 * R["c2"]
    ratio = [target.terms.get(m, 0) * pow(c, -1, ELL) % ELL for m, c in w.terms.items()]
    assert len(set(ratio)) == 1 and len(w.terms) == len(target.terms)
    d, w = chern_torsion_witness(ELL, "edge", 12)
    assert d == 12 and not w.is_zero()
    assert models(ELL).chern_to["edge"](w).is_zero()


@settings(max_examples=25, deadline=None)
@given(curves(primes=[11, 31, 41, 61, 71]))
def test_sanity_identity_random_curves(E):
    g = build_parabolic_graph(E, ELL)
    assert sanity_identity(g.counts, g.rank_ell, g.q, g.n_stable)
    cx = D1Complex(g, 1)
    assert cx.kernel_dim == g.rank_ell
    assert cx.kernel_dim + cx.rank == cx.vertex_dim
