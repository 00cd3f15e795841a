from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings, strategies as st

from quillen_gl3.abelian import FiniteAbelianGroup
from quillen_gl3.curve import EllipticCurve, point_count_ext, torsion_rank
from quillen_gl3.graph import (
    CountRecord,
    build_parabolic_graph,
    classify_triple,
    hhat1,
    hhat1_formula,
    quadratic_attachment,
)

from test_curve import curves


def multiset_counts(E: EllipticCurve) -> Counter:
    """Subtype census over all 3-multisets of points summing to O, using only
    the curve addition law."""
    out = Counter()
    for L1, L2, L3 in combinations_with_replacement(E.points, 3):
        if E.add(E.add(L1, L2), L3) is None:
            out[classify_triple(E, L1, L2, L3)] += 1
    return out


def test_classify_examples(ref_curve):
    E = ref_curve
    O = None
    assert classify_triple(E, O, O, O) == "c"
    P = E.points[1]
    assert E.mul(3, P) is not None
    assert classify_triple(E, P, P, E.neg(E.mul(2, P))) == "b"
    G = E.structure
    gen = G.gen_n
    assert classify_triple(E, gen, E.mul(2, gen), E.mul(3, gen)) == "a"
    with pytest.raises(ValueError):
        classify_triple(E, P, O, O)


def test_reference_counts(ref_graph):
    c = ref_graph.counts
    assert (c.n_a, c.n_b, c.n_c, c.n_d, c.n_e) == (4, 3, 3, 51, 72)
    assert c.edges_rational == 21 and c.chi_prime == -5
    assert multiset_counts(ref_graph.curve) == Counter({"a": 4, "b": 3, "c": 3})
    assert c.edges_rational + c.n_d == 12 * 6


def test_reference_stable_targets(ref_graph):
    """Each edge's stable end is the sum of its pair."""
    E = ref_graph.curve
    pts = E.points
    for e in ref_graph.edges:
        i, j = e.pair
        assert pts[e.stable] == E.add(pts[i], pts[j])


def test_determinism(ref_curve):
    g1 = build_parabolic_graph(ref_curve, 5)
    g2 = build_parabolic_graph(ref_curve, 5)
    assert g1.dump() == g2.dump()


def test_reference_hhat1(ref_graph):
    assert str(hhat1(ref_graph, "pruned")) == "Z/2 + Z/10"
    assert hhat1(ref_graph, "pruned") == hhat1_formula(ref_graph, "pruned")
    unpruned = hhat1(ref_graph, "unpruned", "o")
    assert unpruned == hhat1(ref_graph, "pruned") + FiniteAbelianGroup.from_cyclic([12] * 51)
    assert unpruned == hhat1_formula(ref_graph, "unpruned")


def test_attachment_dependence_is_two_primary(ref_graph):
    """Moving quadratic leaves off Stable(O) changes only the 2-part."""
    rr = hhat1(ref_graph, "unpruned", "roundrobin")
    o = hhat1(ref_graph, "unpruned", "o")
    assert rr.order == o.order
    odd = lambda G: sorted(o for o in (d // (d & -d) for d in G.factors) if o > 1)  # noqa: E731
    assert odd(rr) == odd(o)


@dataclass
class _StubGraph:
    q: int
    n_stable: int
    splits: tuple = ()
    edges: tuple = ()
    counts: CountRecord = CountRecord(0, 0, 0, 0, 0, 0, 0)


def test_single_stable_vertex():
    assert hhat1(_StubGraph(11, 1)).factors == (10, 10)


@settings(max_examples=40, deadline=None)
@given(curves())
def test_count_identities(E):
    g = build_parabolic_graph(E)
    c = g.counts
    N = E.order
    assert multiset_counts(E) == Counter({k: v for k, v in {"a": c.n_a, "b": c.n_b, "c": c.n_c}.items() if v})
    assert 6 * c.n_a + 3 * c.n_b + c.n_c == N * N
    assert c.n_c == 3 ** torsion_rank(E, 3)
    assert c.n_d == (point_count_ext(E, 2) - N) // 2
    assert c.n_a + c.n_b + c.n_c + c.n_d + c.n_e == E.q**2 + E.q + 1
    assert g.components() == 1
    assert c.chi_prime == N + len(g.splits) - len(g.edges)


@settings(max_examples=30, deadline=None)
@given(curves(primes=[5, 7, 11, 13, 17, 19, 23]))
def test_hhat1_pruned_formula(E):
    g = build_parabolic_graph(E)
    assert hhat1(g, "pruned") == hhat1_formula(g, "pruned")


@settings(max_examples=12, deadline=None)
@given(curves(primes=[5, 7, 11, 13]))
def test_hhat1_unpruned_formula(E):
    g = build_parabolic_graph(E)
    assert hhat1(g, "unpruned", "o") == hhat1_formula(g, "unpruned")


@settings(max_examples=12, deadline=None)
@given(curves(primes=[5, 7, 11, 13]))
def test_attachments_agree_for_odd_order(E):
    if E.order % 2 == 0:
        return
    g = build_parabolic_graph(E)
    want = hhat1_formula(g, "unpruned")
    for how in ("o", "roundrobin", "norm"):
        assert hhat1(g, "unpruned", how) == want


@settings(max_examples=30, deadline=None)
@given(curves())
def test_norm_attachment_fibres(E):
    g = build_parabolic_graph(E)
    att = quadratic_attachment(g, "norm")
    assert len(att) == g.counts.n_d and all(0 <= a < g.n_stable for a in att)


@given(st.lists(st.integers(2, 60), max_size=6))
def test_abelian_canonical_form(orders):
    G = FiniteAbelianGroup.from_cyclic(orders)
    prod = 1
    for m in orders:
        prod *= m
    assert G.order == prod
    assert all(b % a == 0 for a, b in zip(G.factors, G.factors[1:]))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=5))
def test_cokernel_against_sympy(cols):
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    gens = 3
    rels = [[12, 0, 0], [0, 12, 0], [0, 0, 12]] + cols
    got = FiniteAbelianGroup.cokernel(gens, rels, exponent=12)
    M = Matrix([[r[i] for r in rels] for i in range(gens)])
    S = smith_normal_form(M, domain=ZZ)
    want = FiniteAbelianGroup.from_cyclic([abs(S[i, i]) for i in range(gens) if abs(S[i, i]) > 1])
    assert got == want
