"""Prime fields, Weierstrass curves and the finite group E(F_q)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from sympy import isprime
from sympy.ntheory import sqrt_mod

# Affine points are (x, y) tuples; the point at infinity is None.
Point = Optional[tuple[int, int]]
O: Point = None


class HypothesisError(ValueError):
    """Raised when (q, ell, curve) fall outside the supported range."""


class SingularCurveError(HypothesisError):
    pass


def check_hypotheses(q: int, ell: int | None = None) -> None:
    """Validate the standing assumptions on q and ell.

    Args:
        q: Size of the base field; must be a prime other than 2 and 3.
        ell: Coefficient prime; must satisfy ell >= 5 and ell | q - 1.

    Raises:
        HypothesisError: naming the violated assumption.
    """
    if not isprime(q):
        raise HypothesisError(f"q = {q} is not prime (only prime fields are supported)")
    if q in (2, 3):
        raise HypothesisError(f"q = {q}: characteristic 2 and 3 are excluded")
    if ell is None:
        return
    if not isprime(ell):
        raise HypothesisError(f"ell = {ell} is not prime")
    if ell < 5:
        raise HypothesisError(f"ell = {ell}: hypothesis ell >= 5 violated")
    if (q - 1) % ell:
        raise HypothesisError(f"ell = {ell} does not divide q - 1 = {q - 1}")


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        check_hypotheses(self.p)

    def __call__(self, a: int) -> int:
        return a % self.p

    def inv(self, a: int) -> int:
        return pow(a % self.p, -1, self.p)

    def is_square(self, a: int) -> bool:
        """Euler criterion; zero counts as a square."""
        a %= self.p
        return a == 0 or pow(a, (self.p - 1) // 2, self.p) == 1

    def sqrts(self, a: int) -> list[int]:
        a %= self.p
        if not self.is_square(a):
            return []
        return sorted(sqrt_mod(a, self.p, all_roots=True))


@dataclass(frozen=True)
class EllipticCurve:
    """Y^2 + a1 XY + a3 Y = X^3 + a2 X^2 + a4 X + a6 over a prime field."""

    field: PrimeField
    a1: int = 0
    a2: int = 0
    a3: int = 0
    a4: int = 0
    a6: int = 0

    def __post_init__(self) -> None:
        p = self.field.p
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, getattr(self, name) % p)
        if self.discriminant == 0:
            raise SingularCurveError(
                f"curve {self.coefficients} over F_{p} is singular (discriminant 0)"
            )

    @classmethod
    def from_coefficients(cls, q: int, coeffs: Sequence[int]) -> "EllipticCurve":
        """Build from `a4,a6` (short form) or `a1,a2,a3,a4,a6`."""
        F = PrimeField(q)
        if len(coeffs) == 2:
            return cls(F, a4=coeffs[0], a6=coeffs[1])
        if len(coeffs) == 5:
            a1, a2, a3, a4, a6 = coeffs
            return cls(F, a1, a2, a3, a4, a6)
        raise HypothesisError(f"expected 2 or 5 curve coefficients, got {len(coeffs)}")

    @property
    def q(self) -> int:
        return self.field.p

    @property
    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return (-b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6) % self.q

    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        a1, a2, a3, a4, a6 = self.coefficients
        lhs = y * y + a1 * x * y + a3 * y
        rhs = x**3 + a2 * x * x + a4 * x + a6
        return (lhs - rhs) % self.q == 0

    # group law -------------------------------------------------------------

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        x, y = P
        return (x, (-y - self.a1 * x - self.a3) % self.q)

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.q
        a1, a2, a3, a4, _ = self.coefficients
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2 + a1 * x2 + a3) % p == 0:
                return None
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * pow(2 * y1 + a1 * x1 + a3, -1, p)
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p)
        lam %= p
        nu = (y1 - lam * x1) % p
        x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
        y3 = (-(lam + a1) * x3 - nu - a3) % p
        return (x3, y3)

    def mul(self, k: int, P: Point) -> Point:
        if k < 0:
            return self.mul(-k, self.neg(P))
        R: Point = None
        while k:
            if k & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            k >>= 1
        return R

    # enumeration -------------------------------------------------------------

    @cached_property
    def points(self) -> tuple[Point, ...]:
        """All F_q-points, O first, then affine points in (x, y) order."""
        return tuple(enumerate_points(self))

    @cached_property
    def order(self) -> int:
        return len(self.points)

    @property
    def trace(self) -> int:
        return self.q + 1 - self.order

    @cached_property
    def structure(self) -> "GroupStructure":
        return group_structure(self)


def point_key(P: Point) -> tuple:
    return (0,) if P is None else (1, P[0], P[1])


def enumerate_points(curve: EllipticCurve) -> list[Point]:
    """x-sweep: complete the square and test the discriminant with Euler."""
    F = curve.field
    p = F.p
    a1, a2, a3, a4, a6 = curve.coefficients
    half = F.inv(2)
    pts: list[Point] = [None]
    for x in range(p):
        # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        lin = (a1 * x + a3) % p
        rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
        disc = (lin * lin + 4 * rhs) % p
        for s in F.sqrts(disc):
            pts.append((x, ((s - lin) * half) % p))
    pts.sort(key=point_key)
    assert all(curve.contains(P) for P in pts)
    if (len(pts) - p - 1) ** 2 > 4 * p:
        raise AssertionError(f"Hasse bound violated: {len(pts)} points over F_{p}")
    return pts


@dataclass(frozen=True)
class GroupStructure:
    """E(F_q) ~ Z/m x Z/n with m | n.

    `coords[i]` gives (u, v) such that points[i] = u*gen_m + v*gen_n, so group
    arithmetic on point indices reduces to integer arithmetic.
    """

    m: int
    n: int
    trace: int
    gen_n: Point
    gen_m: Point
    points: tuple[Point, ...]
    coords: tuple[tuple[int, int], ...] = field(repr=False)

    @property
    def order(self) -> int:
        return self.m * self.n

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in (self.m, self.n) if d > 1)

    @cached_property
    def _index(self) -> dict[tuple[int, int], int]:
        return {c: i for i, c in enumerate(self.coords)}

    def add_idx(self, i: int, j: int) -> int:
        (u1, v1), (u2, v2) = self.coords[i], self.coords[j]
        return self._index[((u1 + u2) % self.m, (v1 + v2) % self.n)]

    def neg_idx(self, i: int) -> int:
        u, v = self.coords[i]
        return self._index[(-u % self.m, -v % self.n)]

    def mul_idx(self, k: int, i: int) -> int:
        u, v = self.coords[i]
        return self._index[(k * u % self.m, k * v % self.n)]

    def torsion_count(self, k: int) -> int:
        return math.gcd(self.m, k) * math.gcd(self.n, k)

    def describe(self) -> str:
        return " x ".join(f"Z/{d}" for d in self.invariant_factors) or "0"


def _point_order(curve: EllipticCurve, P: Point, N: int) -> int:
    order = N
    for r in sorted(_prime_divisors(N)):
        while order % r == 0 and curve.mul(order // r, P) is None:
            order //= r
    return order


def _prime_divisors(N: int) -> set[int]:
    out, r = set(), 2
    while r * r <= N:
        while N % r == 0:
            out.add(r)
            N //= r
        r += 1
    if N > 1:
        out.add(N)
    return out


def group_structure(curve: EllipticCurve) -> GroupStructure:
    """Invariant factors and generators from an exhaustive order census."""
    pts = curve.points
    N = len(pts)
    orders = [_point_order(curve, P, N) for P in pts]
    n = max(orders)  # exponent of a finite abelian group
    m = N // n
    gen_n = pts[orders.index(n)]
    cyc: list[Point] = []
    R: Point = None
    for _ in range(n):
        cyc.append(R)
        R = curve.add(R, gen_n)
    in_cyc = set(cyc)
    gen_m: Point = None
    if m > 1:
        for P, o in zip(pts, orders):
            if o != m:
                continue
            multiples = [curve.mul(j, P) for j in range(1, m)]
            if not any(M in in_cyc for M in multiples):
                gen_m = P
                break
        else:
            raise AssertionError("no complementary generator found")
    index = {P: i for i, P in enumerate(pts)}
    coords: list[tuple[int, int] | None] = [None] * N
    S: Point = None
    for u in range(m):
        for v in range(n):
            coords[index[curve.add(S, cyc[v])]] = (u, v)
        S = curve.add(S, gen_m)
    if any(c is None for c in coords):
        raise AssertionError("generators do not generate E(F_q)")
    gs = GroupStructure(m, n, curve.q + 1 - N, gen_n, gen_m, pts, tuple(coords))  # type: ignore[arg-type]
    if n % m or (curve.q - 1) % m:
        raise AssertionError(f"structure Z/{m} x Z/{n} violates m | n, m | q-1")
    census: dict[int, int] = {}
    for o in orders:
        census[o] = census.get(o, 0) + 1
    for k in set(orders):
        expected = sum(c for o, c in census.items() if k % o == 0)
        if gs.torsion_count(k) != expected:
            raise AssertionError(f"{k}-torsion census disagrees with Z/{m} x Z/{n}")
    return gs


def torsion_rank(curve: EllipticCurve, r: int) -> int:
    """F_r-dimension of E(F_q)[r] for a prime r."""
    if r == curve.q:
        raise ValueError("r must differ from the characteristic")
    count = curve.structure.torsion_count(r)
    rank = round(math.log(count, r)) if count > 1 else 0
    assert r**rank == count
    return rank


def point_count_ext(curve: EllipticCurve, n: int) -> int:
    """#E(F_{q^n}) from the Frobenius trace recurrence."""
    if n < 1:
        raise ValueError("n must be positive")
    q, a = curve.q, curve.trace
    s_prev, s = 2, a
    for _ in range(n - 1):
        s_prev, s = s, a * s - q * s_prev
    return q**n + 1 - s


def parse_curve(spec: str) -> tuple[int, ...]:
    try:
        coeffs = tuple(int(c) for c in spec.replace(" ", "").split(","))
    except ValueError as exc:
        raise HypothesisError(f"cannot parse curve coefficients {spec!r}") from exc
    if len(coeffs) not in (2, 5):
        raise HypothesisError(f"expected 'a4,a6' or 'a1,a2,a3,a4,a6', got {spec!r}")
    return coeffs
