import pytest
from hypothesis import given, settings, strategies as st

from quillen_gl3.detection import detection_filtration, reference_series
from quillen_gl3.graph import CountRecord
from quillen_gl3.series import (
    CanonicalizationError,
    HPRational,
    T,
    freeness_certificate,
    poly,
    poly_mul,
    series_equal,
    total_rank,
    truncated_numerator,
)
from quillen_gl3.spectral import (
    central_series,
    d2_layer_series,
    gl3_d1_series,
    kernel_series,
    theorem_series,
)

CHERN = (2, 4, 6)


def naive_expand(s: HPRational, D: int) -> list[int]:
    """Power series by repeated multiplication with 1 + T^d + T^2d + ..."""
    c = list(s.num) + [0] * (D + 1)
    c = c[: D + 1]
    for d in s.den:
        geo = [1 if k % d == 0 else 0 for k in range(D + 1)]
        c = [sum(c[i] * geo[k - i] for i in range(k + 1)) for k in range(D + 1)]
    return c


def series_st():
    return st.builds(
        HPRational.of,
        st.lists(st.integers(-5, 5), max_size=7),
        st.lists(st.integers(1, 6), max_size=3),
    )


def test_arithmetic_examples():
    a = HPRational.of((1,), (2,))
    b = HPRational.of((0, 1), (2,))
    assert series_equal(a + b, HPRational.of((1, 1), (2,)))
    assert (a + b).expand(9) == [1] * 10
    chern = HPRational.of((1,), CHERN)
    assert chern.expand(6) == [1, 0, 1, 0, 2, 0, 3]
    assert chern.shift(4).expand(8) == [0, 0, 0, 0] + chern.expand(4)


def test_expand_examples():
    edge_d1 = reference_series()["edge"]["D1"]
    # (T + 2T^2 + 2T^3 + ...) / (1 - T^2): T^3 picks up 2 + 1
    assert edge_d1.expand(3) == [0, 1, 2, 3]
    assert detection_filtration(5, "edge", 3).dims()["D1"] == [0, 1, 2, 3]
    c = CountRecord(4, 3, 3, 51, 72, 21, -5)
    assert d2_layer_series(c).expand(2)[2] == c.n_a


def test_canonicalize_examples():
    assert HPRational.of((1, 1), (2,)).canonicalize((2,)) == (1, 1)
    lemma_num = gl3_d1_series().canonicalize(CHERN)
    assert lemma_num == (0, 0, 0, 1, 2, 2, 2, 1, 1, 1, -1, -1)
    a_d2 = reference_series()["a"]["D2"]
    assert a_d2.canonicalize((2, 2, 2)) == poly_mul(T(2), poly(1, 2, 1, 1, 2, 1))
    with pytest.raises(CanonicalizationError):
        HPRational.of((1,), (2,)).canonicalize(())


def test_freeness_examples():
    v = freeness_certificate(gl3_d1_series(), CHERN)
    assert not v.free_compatible and v.witness == (10, 11)
    v = freeness_certificate(HPRational.of((1,), CHERN), CHERN)
    assert v.free_compatible and v.witness == (0,)
    alt3 = HPRational.of(poly(0, 0, 1, 2, 1, 1, 2, 1), CHERN)
    v = freeness_certificate(alt3, CHERN)
    assert v.free_compatible and v.witness == (2, 3, 3, 4, 5, 6, 6, 7)
    v = freeness_certificate(HPRational.of((1,), (2,)), ())
    assert not v.free_compatible and v.reason


def test_total_rank_examples():
    c = CountRecord(4, 3, 3, 51, 72, 21, -5)
    assert total_rank(d2_layer_series(c), CHERN) == 288
    assert total_rank(kernel_series(c, 0), (2, 4)) == 4 * (c.n_a + 0) + 8 * 6
    assert total_rank(HPRational.of(()), CHERN) == 0


def test_pole_order_examples():
    assert HPRational.of((1, 1), (2,)).pole_order_at_1() == 1
    c = CountRecord(4, 3, 3, 51, 72, 21, -5)
    assert kernel_series(c, 0).pole_order_at_1() == 2
    assert HPRational.of((1, 0, -1), (2,)).pole_order_at_1() == 0
    assert HPRational.of(()).pole_order_at_1() == 0


def test_theorem_series_zero_counts():
    tab = theorem_series(CountRecord(0, 0, 0, 0, 0, 0, 0), 0, 0)
    assert tab["d1_kernel"]["series"]["num"] == []
    assert tab["d1_cokernel"]["series"]["num"] == []
    assert tab["image_d2_layer"]["series"]["num"] == []
    assert tab["image_top_layer"]["series"] == central_series().to_json()


def test_theorem_series_shift():
    c = CountRecord(4, 3, 3, 51, 72, 21, -5)
    tab = theorem_series(c, 0, 11)
    r = tab["kernel_r2_over_r1"]
    assert r["series"] == tab["d1_cokernel"]["series"]
    got = HPRational.of(r["total"]["num"], r["total"]["den"])
    assert series_equal(got, HPRational.of(poly_mul(T(1, 4), poly(1, 2, 1)), (2, 4)).shift(1))


@given(series_st(), series_st())
def test_add_mul_expand(a, b):
    D = 12
    ea, eb = a.expand(D), b.expand(D)
    assert (a + b).expand(D) == [x + y for x, y in zip(ea, eb)]
    conv = [sum(ea[i] * eb[k - i] for i in range(k + 1)) for k in range(D + 1)]
    assert (a * b).expand(D) == conv
    assert a.expand(D) == naive_expand(a, D)


@given(series_st(), st.lists(st.integers(1, 6), max_size=3))
def test_canonicalize_round_trip(s, extra):
    target = tuple(s.den) + tuple(extra)
    num = s.canonicalize(target)
    assert HPRational.of(num, target).expand(15) == s.expand(15)


@settings(max_examples=50)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=8))
def test_truncated_numerator_recovers_free_series(num):
    s = HPRational.of(num, CHERN)
    D = len(num) + 3
    assert truncated_numerator(s.expand(D), CHERN)[: len(num)] == tuple(num)
