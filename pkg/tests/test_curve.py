import pytest
from hypothesis import given, settings, strategies as st

from quillen_gl3.curve import (
    EllipticCurve,
    HypothesisError,
    SingularCurveError,
    check_hypotheses,
    enumerate_points,
    parse_curve,
    point_count_ext,
    torsion_rank,
)

SMALL_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def brute_force_count_quadratic(curve: EllipticCurve) -> int:
    """#E(F_{q^2}) by sweeping F_{q^2} = F_q[s]/(s^2 - r), r a non-residue."""
    q = curve.q
    r = next(a for a in range(2, q) if pow(a, (q - 1) // 2, q) == q - 1)

    def mul(u, v):
        return ((u[0] * v[0] + r * u[1] * v[1]) % q, (u[0] * v[1] + u[1] * v[0]) % q)

    def power(u, e):
        out = (1, 0)
        while e:
            if e & 1:
                out = mul(out, u)
            u = mul(u, u)
            e >>= 1
        return out

    a1, a2, a3, a4, a6 = curve.coefficients
    assert (a1, a2, a3) == (0, 0, 0)
    half = (q * q - 1) // 2
    count = 1
    for x0 in range(q):
        for x1 in range(q):
            x = (x0, x1)
            x2 = mul(x, x)
            f = mul(x2, x)
            f = ((f[0] + a4 * x[0] + a6) % q, (f[1] + a4 * x[1]) % q)
            if f == (0, 0):
                count += 1
            elif power(f, half) == (1, 0):
                count += 2
    return count


def short_curves(q):
    return [(a, b) for a in range(q) for b in range(q) if (4 * a**3 + 27 * b * b) % q]


@st.composite
def curves(draw, primes=SMALL_PRIMES):
    q = draw(st.sampled_from(primes))
    a4, a6 = draw(st.sampled_from(short_curves(q)))
    return EllipticCurve.from_coefficients(q, (a4, a6))


def test_reference_points(ref_curve):
    pts = enumerate_points(ref_curve)
    assert pts == [None, (3, 4), (3, 7), (8, 0), (9, 3), (9, 8)]


def test_reference_group(ref_curve):
    assert ref_curve.order == 6
    assert ref_curve.trace == 6
    assert ref_curve.structure.describe() == "Z/6"
    assert torsion_rank(ref_curve, 5) == 0
    assert torsion_rank(ref_curve, 3) == 1


def test_reference_extension_counts(ref_curve):
    assert point_count_ext(ref_curve, 1) == 6
    assert point_count_ext(ref_curve, 2) == 108
    assert point_count_ext(ref_curve, 3) == 1314
    assert brute_force_count_quadratic(ref_curve) == 108


def test_hasse_only_example():
    E = EllipticCurve.from_coefficients(5, (-1, 0))
    assert 2 <= E.order <= 10
    assert None in enumerate_points(E)


def test_prime_order_is_cyclic():
    for a4, a6 in short_curves(13):
        E = EllipticCurve.from_coefficients(13, (a4, a6))
        if E.order in (5, 7, 11, 13, 17, 19):
            assert E.structure.m == 1 and E.structure.n == E.order
            return
    pytest.fail("no prime-order curve over F_13")


def test_long_form_matches_short_form():
    E1 = EllipticCurve.from_coefficients(11, (1, 8))
    E2 = EllipticCurve.from_coefficients(11, (0, 0, 0, 1, 8))
    assert E1.points == E2.points


def test_general_weierstrass_group_law():
    E = EllipticCurve.from_coefficients(13, (1, 2, 3, 4, 5))
    pts = E.points
    for P in pts:
        assert E.add(P, E.neg(P)) is None
        for Q in pts:
            assert E.add(P, Q) == E.add(Q, P)
            assert E.contains(E.add(P, Q))


def test_rejections():
    with pytest.raises(SingularCurveError):
        EllipticCurve.from_coefficients(11, (0, 0))
    with pytest.raises(HypothesisError):
        check_hypotheses(11, 7)
    with pytest.raises(HypothesisError):
        check_hypotheses(3)
    with pytest.raises(HypothesisError):
        check_hypotheses(15)
    with pytest.raises(HypothesisError):
        check_hypotheses(31, 3)
    with pytest.raises(HypothesisError):
        parse_curve("1,2,3")


@settings(max_examples=60, deadline=None)
@given(curves())
def test_hasse_and_structure(E):
    q, N = E.q, E.order
    assert (N - q - 1) ** 2 <= 4 * q
    G = E.structure
    assert G.m * G.n == N and G.n % G.m == 0 and (q - 1) % G.m == 0
    for r in (r for r in (2, 3, 5, 7) if r != q):
        k = torsion_rank(E, r)
        assert k in (0, 1, 2) and N % r**k == 0
        assert r**k == sum(1 for P in E.points if E.mul(r, P) is None)


@settings(max_examples=40, deadline=None)
@given(curves())
def test_group_law_exhaustive(E):
    pts = E.points
    for P in pts[:8]:
        for Q in pts[:8]:
            for R in pts[:4]:
                assert E.add(E.add(P, Q), R) == E.add(P, E.add(Q, R))


@settings(max_examples=25, deadline=None)
@given(curves(primes=[5, 7, 11, 13, 17, 19]))
def test_quadratic_count_matches_brute_force(E):
    assert point_count_ext(E, 2) == brute_force_count_quadratic(E)


@settings(max_examples=40, deadline=None)
@given(curves(), st.integers(1, 5))
def test_extension_counts_hasse(E, n):
    N = point_count_ext(E, n)
    Q = E.q**n
    assert (N - Q - 1) ** 2 <= 4 * Q
    assert N % E.order == 0
