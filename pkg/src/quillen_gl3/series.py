"""Rational generating functions N(T) / prod(1 - T^d) with integer numerators."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence


class CanonicalizationError(ValueError):
    """The series is not a polynomial over the requested denominator."""


def _trim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def one_minus(d: int) -> tuple[int, ...]:
    return (1,) + (0,) * (d - 1) + (-1,)


def divide_one_minus(a: Sequence[int], d: int) -> tuple[int, ...]:
    """Exact division by (1 - T^d); raises if there is a remainder."""
    a = list(a)
    if not a:
        return ()
    # a = (1 - T^d) b  =>  b_k = a_k + b_{k-d}
    n = len(a) - d
    if n <= 0:
        raise CanonicalizationError(f"not divisible by (1 - T^{d})")
    b = [0] * n
    for k in range(n):
        b[k] = a[k] + (b[k - d] if k >= d else 0)
    for k in range(n, len(a)):
        if a[k] != -(b[k - d] if 0 <= k - d < n else 0):
            raise CanonicalizationError(f"not divisible by (1 - T^{d})")
    return _trim(b)


def poly(*coeffs: int) -> tuple[int, ...]:
    return _trim(coeffs)


def T(k: int = 1, c: int = 1) -> tuple[int, ...]:
    """The monomial c T^k."""
    return _trim((0,) * k + (c,))


@dataclass(frozen=True)
class HPRational:
    num: tuple[int, ...]
    den: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        num = _trim(self.num)
        den = tuple(sorted(self.den)) if num else ()
        if any(d <= 0 for d in den):
            raise ValueError("denominator degrees must be positive")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def of(cls, num: Iterable[int], den: Iterable[int] = ()) -> "HPRational":
        return cls(tuple(num), tuple(den))

    # arithmetic ------------------------------------------------------------

    def _lift(self, den: Counter) -> tuple[int, ...]:
        extra = den - Counter(self.den)
        num = self.num
        for d, k in sorted(extra.items()):
            for _ in range(k):
                num = poly_mul(num, one_minus(d))
        return num

    def __add__(self, other: "HPRational") -> "HPRational":
        if not self.num:
            return other
        if not other.num:
            return self
        den = Counter(self.den) | Counter(other.den)
        return HPRational(poly_add(self._lift(den), other._lift(den)), tuple(den.elements()))

    def __neg__(self) -> "HPRational":
        return HPRational(tuple(-c for c in self.num), self.den)

    def __sub__(self, other: "HPRational") -> "HPRational":
        return self + (-other)

    def __mul__(self, other) -> "HPRational":
        if isinstance(other, int):
            return HPRational(tuple(other * c for c in self.num), self.den)
        return HPRational(poly_mul(self.num, other.num), self.den + other.den)

    __rmul__ = __mul__

    def shift(self, k: int) -> "HPRational":
        return HPRational((0,) * k + self.num, self.den)

    # views -----------------------------------------------------------------

    def expand(self, D: int) -> list[int]:
        c = list(self.num[: D + 1]) + [0] * max(0, D + 1 - len(self.num))
        for d in self.den:
            for k in range(d, D + 1):
                c[k] += c[k - d]
        return c

    def canonicalize(self, target: Iterable[int]) -> tuple[int, ...]:
        """Numerator F with self = F / prod_{d in target} (1 - T^d)."""
        if not self.num:
            return ()
        own = Counter(self.den)
        tgt = Counter(target)
        num = self.num
        for d, k in sorted((tgt - own).items()):
            for _ in range(k):
                num = poly_mul(num, one_minus(d))
        for d, k in sorted((own - tgt).items()):
            for _ in range(k):
                num = divide_one_minus(num, d)
        return num

    def value_at_one(self) -> int:
        return sum(self.num)

    def pole_order_at_1(self) -> int:
        if not self.num:
            return 0
        num, mult = self.num, 0
        while sum(num) == 0:
            num = divide_one_minus(num, 1)
            mult += 1
        return max(0, len(self.den) - mult)

    def to_json(self) -> dict:
        return {"num": list(self.num), "den": list(self.den)}

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.num):
            if c:
                mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
                coef = str(c) if (abs(c) != 1 or k == 0) else ("-" if c < 0 else "")
                terms.append(f"{coef}{mono}")
        numer = " + ".join(terms).replace("+ -", "- ") or "0"
        if not self.den:
            return numer
        return f"({numer}) / " + "".join(f"(1-T^{d})" for d in self.den)


def series_equal(a: HPRational, b: HPRational) -> bool:
    return not (a - b).num


@dataclass(frozen=True)
class FreenessVerdict:
    free_compatible: bool
    numerator: tuple[int, ...]
    witness: tuple[int, ...]
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": "free-compatible" if self.free_compatible else "not-free",
            "numerator": list(self.numerator),
            "witness": list(self.witness),
            "reason": self.reason,
        }


def freeness_certificate(series: HPRational, chern_degrees: Iterable[int]) -> FreenessVerdict:
    """Nonnegative canonical numerator is necessary for freeness.

    Witness is the generator-degree multiset when free-compatible, otherwise
    the degrees carrying negative coefficients.
    """
    try:
        num = series.canonicalize(chern_degrees)
    except CanonicalizationError as exc:
        return FreenessVerdict(False, (), (), str(exc))
    neg = tuple(k for k, c in enumerate(num) if c < 0)
    if neg:
        return FreenessVerdict(False, num, neg, "negative numerator coefficient")
    gens = tuple(k for k, c in enumerate(num) for _ in range(c))
    return FreenessVerdict(True, num, gens)


def truncated_numerator(dims: Sequence[int], chern_degrees: Iterable[int]) -> tuple[int, ...]:
    """Numerator coefficients through degree len(dims) - 1 of a series known
    only up to that degree."""
    num = list(dims)
    for d in chern_degrees:
        num = list(poly_mul(num, one_minus(d)))[: len(dims)]
        num += [0] * (len(dims) - len(num))
    return tuple(num)


def total_rank(series: HPRational, chern_degrees: Iterable[int]) -> int:
    num = series.canonicalize(chern_degrees)
    if any(c < 0 for c in num):
        raise CanonicalizationError("numerator has negative coefficients")
    return sum(num)
