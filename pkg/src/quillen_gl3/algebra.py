"""Free graded-commutative algebras over F_ell and their homomorphisms.

Even-degree generators are polynomial, odd-degree generators exterior. A
monomial is the exponent tuple over the generators in declaration order and
stands for the product taken in that order.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

import numpy as np

Monomial = tuple[int, ...]


class FreeGCAlgebra:
    def __init__(self, ell: int, gens: Sequence[tuple[str, int]], name: str = ""):
        if len({g for g, _ in gens}) != len(gens):
            raise ValueError("generator names must be distinct")
        if any(d <= 0 for _, d in gens):
            raise ValueError("generator degrees must be positive")
        self.ell = ell
        self.name = name
        self.names = tuple(g for g, _ in gens)
        self.degrees = tuple(d for _, d in gens)
        self.even = tuple(i for i, d in enumerate(self.degrees) if d % 2 == 0)
        self.odd = tuple(i for i, d in enumerate(self.degrees) if d % 2)
        self._pos = {g: i for i, g in enumerate(self.names)}
        self._basis: dict[int, tuple[Monomial, ...]] = {}
        self._index: dict[int, dict[Monomial, int]] = {}

    def __repr__(self) -> str:
        gens = ", ".join(f"{g}:{d}" for g, d in zip(self.names, self.degrees))
        return f"FreeGCAlgebra({self.name or 'F_%d' % self.ell}; {gens})"

    def order_key(self, m: Monomial) -> tuple[int, ...]:
        return tuple(m[i] for i in self.even) + tuple(m[i] for i in self.odd)

    def mono_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def basis(self, d: int) -> tuple[Monomial, ...]:
        """Monomials of degree d, graded-lex with even generators first."""
        if d in self._basis:
            return self._basis[d]
        n = len(self.names)
        out: list[Monomial] = []

        def rec(k: int, rest: int, acc: list[int]) -> None:
            if k == n:
                if rest == 0:
                    out.append(tuple(acc))
                return
            deg = self.degrees[k]
            top = rest // deg if deg % 2 == 0 else min(1, rest // deg)
            for e in range(top + 1):
                acc.append(e)
                rec(k + 1, rest - e * deg, acc)
                acc.pop()

        if d >= 0:
            rec(0, d, [])
        out.sort(key=self.order_key, reverse=True)
        self._basis[d] = tuple(out)
        self._index[d] = {m: i for i, m in enumerate(out)}
        return self._basis[d]

    def index(self, d: int) -> dict[Monomial, int]:
        self.basis(d)
        return self._index[d]

    def dim(self, d: int) -> int:
        return len(self.basis(d))

    def mono_mul(self, a: Monomial, b: Monomial) -> tuple[int, Monomial]:
        """Product of two monomials as (sign, monomial); sign 0 if it vanishes."""
        sign = 1
        for i in self.odd:
            if b[i]:
                if a[i]:
                    return 0, a
                # b's factor i moves past a's odd factors with larger index
                if sum(a[j] for j in self.odd if j > i) % 2:
                    sign = -sign
        return sign, tuple(x + y for x, y in zip(a, b))

    # element constructors ---------------------------------------------------

    def zero(self) -> "GradedElement":
        return GradedElement(self, {})

    def one(self) -> "GradedElement":
        return GradedElement(self, {(0,) * len(self.names): 1})

    def gen(self, name: str) -> "GradedElement":
        m = [0] * len(self.names)
        m[self._pos[name]] = 1
        return GradedElement(self, {tuple(m): 1})

    def gens(self) -> list["GradedElement"]:
        return [self.gen(g) for g in self.names]

    def __getitem__(self, name: str) -> "GradedElement":
        return self.gen(name)

    def from_vector(self, d: int, v) -> "GradedElement":
        B = self.basis(d)
        return GradedElement(self, {B[i]: int(c) for i, c in enumerate(v) if int(c) % self.ell})


class GradedElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: FreeGCAlgebra, terms: Mapping[Monomial, int]):
        p = alg.ell
        self.alg = alg
        self.terms = {m: c % p for m, c in terms.items() if c % p}

    @property
    def degrees(self) -> set[int]:
        return {self.alg.mono_degree(m) for m in self.terms}

    @property
    def degree(self) -> int | None:
        ds = self.degrees
        if len(ds) > 1:
            raise ValueError("element is not homogeneous")
        return next(iter(ds)) if ds else None

    def is_zero(self) -> bool:
        return not self.terms

    def _coerce(self, other) -> "GradedElement":
        if isinstance(other, GradedElement):
            if other.alg is not self.alg:
                raise ValueError("elements of different algebras")
            return other
        return self.alg.one() * int(other)

    def __add__(self, other) -> "GradedElement":
        other = self._coerce(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return GradedElement(self.alg, t)

    __radd__ = __add__

    def __neg__(self) -> "GradedElement":
        return GradedElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "GradedElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "GradedElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "GradedElement":
        if isinstance(other, int):
            return GradedElement(self.alg, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        t: dict[Monomial, int] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                s, m = self.alg.mono_mul(ma, mb)
                if s:
                    t[m] = t.get(m, 0) + s * ca * cb
        return GradedElement(self.alg, t)

    def __rmul__(self, other: int) -> "GradedElement":
        return self * other

    def __pow__(self, k: int) -> "GradedElement":
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def vector(self, d: int | None = None) -> np.ndarray:
        d = self.degree if d is None else d
        if d is None:
            d = 0
        idx = self.alg.index(d)
        v = np.zeros(len(idx), dtype=np.int64)
        for m, c in self.terms.items():
            if self.alg.mono_degree(m) != d:
                raise ValueError(f"term of degree {self.alg.mono_degree(m)} in degree-{d} vector")
            v[idx[m]] = c
        return v

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (self.alg.mono_degree(m), self.alg.order_key(m)), reverse=True):
            c = self.terms[m]
            word = "*".join(
                (n if e == 1 else f"{n}^{e}") for n, e in zip(self.alg.names, m) if e
            ) or "1"
            parts.append(word if c == 1 else f"{c}*{word}")
        return " + ".join(parts)


class GradedMap:
    """Algebra homomorphism determined by the images of generators."""

    def __init__(self, source: FreeGCAlgebra, target: FreeGCAlgebra, images: Mapping[str, GradedElement]):
        if source.ell != target.ell:
            raise ValueError("coefficient primes differ")
        missing = set(source.names) - set(images)
        if missing:
            raise ValueError(f"no image for generators {sorted(missing)}")
        self.source = source
        self.target = target
        self.images = {}
        for g, d in zip(source.names, source.degrees):
            img = images[g]
            if img.alg is not target:
                raise ValueError(f"image of {g} lies in the wrong algebra")
            if img.degrees - {d}:
                raise ValueError(f"image of {g} is not homogeneous of degree {d}")
            self.images[g] = img
        self._cache: dict[Monomial, GradedElement] = {}

    def on_monomial(self, m: Monomial) -> GradedElement:
        if m not in self._cache:
            out = self.target.one()
            for g, e in zip(self.source.names, m):
                for _ in range(e):
                    out = out * self.images[g]
            self._cache[m] = out
        return self._cache[m]

    def __call__(self, x: GradedElement) -> GradedElement:
        out = self.target.zero()
        for m, c in x.terms.items():
            out = out + self.on_monomial(m) * c
        return out

    @lru_cache(maxsize=None)
    def matrix(self, d: int) -> np.ndarray:
        rows = self.target.index(d)
        src = self.source.basis(d)
        M = np.zeros((len(rows), len(src)), dtype=np.int64)
        for j, m in enumerate(src):
            for mt, c in self.on_monomial(m).terms.items():
                M[rows[mt], j] = c
        M.setflags(write=False)
        return M

    def then(self, g: "GradedMap") -> "GradedMap":
        """The composite g o self."""
        return GradedMap(self.source, g.target, {n: g(self.images[n]) for n in self.source.names})

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other) -> bool:
        return self is other


def map_matrix(f: GradedMap, d: int) -> np.ndarray:
    return f.matrix(d)


def identity_map(A: FreeGCAlgebra) -> GradedMap:
    return GradedMap(A, A, {g: A.gen(g) for g in A.names})


# ---------------------------------------------------------------------------
# concrete algebras


def torus_algebra(ell: int, n: int, even: str = "X", odd: str = "Y") -> FreeGCAlgebra:
    """Cohomology of (k^x)^n: F[X_1..X_n] <Y_1..Y_n>."""
    gens = [(f"{even}{i}", 2) for i in range(1, n + 1)] + [(f"{odd}{i}", 1) for i in range(1, n + 1)]
    return FreeGCAlgebra(ell, gens, name=f"torus{n}")


def chern_ring(ell: int, n: int = 3) -> FreeGCAlgebra:
    return FreeGCAlgebra(ell, [(f"c{j}", 2 * j) for j in range(1, n + 1)], name=f"chern{n}")


def gl_algebra(ell: int, n: int) -> FreeGCAlgebra:
    """H*(GL_n(F_q); F_ell) for ell | q - 1: F[c_1..c_n] <e_1..e_n>."""
    gens = [(f"c{j}", 2 * j) for j in range(1, n + 1)] + [(f"e{j}", 2 * j - 1) for j in range(1, n + 1)]
    return FreeGCAlgebra(ell, gens, name=f"gl{n}")


def symmetric_classes(T: FreeGCAlgebra, n: int) -> dict[str, GradedElement]:
    """Images of c_j, e_j in the rank-n torus algebra T (names X_i, Y_i).

    c_j is the j-th elementary symmetric polynomial of the X_i and e_j its
    polarization: sum over j-subsets S and k in S of prod_{i in S - k} X_i * Y_k.
    """
    X = [T.gen(f"X{i}") for i in range(1, n + 1)]
    Y = [T.gen(f"Y{i}") for i in range(1, n + 1)]
    out: dict[str, GradedElement] = {}
    for j in range(1, n + 1):
        c = T.zero()
        e = T.zero()
        for S in combinations(range(n), j):
            mono = T.one()
            for i in S:
                mono = mono * X[i]
            c = c + mono
            for k in S:
                rest = T.one()
                for i in S:
                    if i != k:
                        rest = rest * X[i]
                e = e + rest * Y[k]
        out[f"c{j}"] = c
        out[f"e{j}"] = e
    return out


def permutation_map(T: FreeGCAlgebra, n: int, sigma: Sequence[int]) -> GradedMap:
    """Diagonal action X_i -> X_sigma(i), Y_i -> Y_sigma(i) (0-based sigma)."""
    images = {}
    for i in range(n):
        images[f"X{i + 1}"] = T.gen(f"X{sigma[i] + 1}")
        images[f"Y{i + 1}"] = T.gen(f"Y{sigma[i] + 1}")
    return GradedMap(T, T, images)


def perm_sign(sigma: Sequence[int]) -> int:
    s = 1
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                s = -s
    return s


def alternating_generators(T: FreeGCAlgebra, n: int) -> list[GradedElement]:
    """Free generators of the alternating module over the symmetric invariants.

    Written with A_i = Y_i (degree 1) and X_i (degree 2).
    """
    X = [T.gen(f"X{i}") for i in range(1, n + 1)]
    A = [T.gen(f"Y{i}") for i in range(1, n + 1)]
    if n == 2:
        return [A[0] - A[1], X[0] - X[1], A[0] * A[1], (X[0] - X[1]) * (A[0] + A[1])]
    if n == 3:
        X1, X2, X3 = X
        A1, A2, A3 = A
        vdm = (X1 - X2) * (X1 - X3) * (X2 - X3)
        return [
            (A1 - A2) * (A2 - A3),
            -A1 * (X2 - X3) + A2 * (X1 - X3) - A3 * (X1 - X2),
            A1 * X1 * (X2 - X3) - A2 * X2 * (X1 - X3) + A3 * X3 * (X1 - X2),
            vdm,
            A1 * A2 * A3,
            -X1 * A2 * A3 + X2 * A1 * A3 - X3 * A1 * A2,
            -X1 * X2 * A1 * A2 + X1 * X3 * A1 * A3 - X2 * X3 * A2 * A3,
            (A1 + A2 + A3) * vdm,
        ]
    raise ValueError("alternating generators are provided for n = 2, 3 only")


def all_permutations(n: int) -> list[tuple[int, ...]]:
    return list(permutations(range(n)))


def monomials_of(alg: FreeGCAlgebra, d: int) -> Iterable[GradedElement]:
    for m in alg.basis(d):
        yield GradedElement(alg, {m: 1})


# ---------------------------------------------------------------------------
# stabilizer models and restriction maps


class StabilizerModels:
    """Cohomology algebras of the cell stabilizers and the maps between them.

    edge / type I : F[X1, X2] <Y1, Y2>; index 1 is the homothety of the rank-2
                    summand, index 2 the line bundle.
    a             : rank-3 torus, coordinates in the order of the triple.
    b             : F[c1, c2, X] <e1, e2, Y>; GL_2 on L + L, torus on M.
    c             : F[c1, c2, c3] <e1, e2, e3>.
    center        : F[Z] <W>.
    """

    def __init__(self, ell: int):
        self.ell = ell
        self.edge = torus_algebra(ell, 2)
        self.center = FreeGCAlgebra(ell, [("Z", 2), ("W", 1)], name="center")
        self.a = torus_algebra(ell, 3)
        self.b = FreeGCAlgebra(
            ell, [("c1", 2), ("c2", 4), ("X", 2), ("e1", 1), ("e2", 3), ("Y", 1)], name="IIb"
        )
        self.c = gl_algebra(ell, 3)
        self.chern = chern_ring(ell, 3)

    def algebra(self, kind: str) -> FreeGCAlgebra:
        return {"edge": self.edge, "a": self.a, "b": self.b, "c": self.c}[kind]

    @cached_property
    def edge_to_center(self) -> GradedMap:
        E, C = self.edge, self.center
        Z, W = C.gen("Z"), C.gen("W")
        return GradedMap(E, C, {"X1": Z, "X2": Z, "Y1": W, "Y2": W})

    def _a_slot(self, slot: int) -> GradedMap:
        E = self.edge
        images = {}
        for pos in range(3):
            k = 2 if pos == slot else 1
            images[f"X{pos + 1}"] = E.gen(f"X{k}")
            images[f"Y{pos + 1}"] = E.gen(f"Y{k}")
        return GradedMap(self.a, E, images)

    @cached_property
    def to_edges(self) -> dict[str, list[GradedMap]]:
        """Restrictions from each split type to its edges, indexed by slot."""
        E = self.edge
        X1, X2, Y1, Y2 = (E.gen(g) for g in ("X1", "X2", "Y1", "Y2"))
        b0 = GradedMap(
            self.b,
            E,
            {"c1": 2 * X1, "c2": X1 * X1, "X": X2, "e1": 2 * Y1, "e2": 2 * X1 * Y1, "Y": Y2},
        )
        b1 = GradedMap(
            self.b,
            E,
            {"c1": X1 + X2, "c2": X1 * X2, "X": X1, "e1": Y1 + Y2, "e2": X1 * Y2 + X2 * Y1, "Y": Y1},
        )
        c0 = GradedMap(
            self.c,
            E,
            {
                "c1": 2 * X1 + X2,
                "c2": X1 * X1 + 2 * X1 * X2,
                "c3": X1 * X1 * X2,
                "e1": 2 * Y1 + Y2,
                "e2": 2 * X1 * Y1 + 2 * X1 * Y2 + 2 * X2 * Y1,
                "e3": X1 * X1 * Y2 + 2 * X1 * X2 * Y1,
            },
        )
        return {"a": [self._a_slot(s) for s in range(3)], "b": [b0, b1], "c": [c0]}

    @cached_property
    def to_center(self) -> dict[str, GradedMap]:
        out = {"edge": self.edge_to_center}
        for kind, maps in self.to_edges.items():
            out[kind] = maps[0].then(self.edge_to_center)
        return out

    @cached_property
    def split_to_torus(self) -> dict[str, GradedMap]:
        """Embeddings of the b and c models into the rank-3 torus algebra."""
        T = self.a
        sym3 = symmetric_classes(T, 3)
        X1, X2, X3 = (T.gen(f"X{i}") for i in (1, 2, 3))
        Y1, Y2, Y3 = (T.gen(f"Y{i}") for i in (1, 2, 3))
        b = GradedMap(
            self.b,
            T,
            {"c1": X1 + X2, "c2": X1 * X2, "X": X3, "e1": Y1 + Y2, "e2": X2 * Y1 + X1 * Y2, "Y": Y3},
        )
        c = GradedMap(self.c, T, sym3)
        return {"b": b, "c": c}

    @cached_property
    def chern_to(self) -> dict[str, GradedMap]:
        """Restriction of the universal c_1, c_2, c_3 to every stabilizer."""
        R = self.chern
        T = self.a
        sym = symmetric_classes(T, 3)
        out = {"a": GradedMap(R, T, {k: sym[k] for k in ("c1", "c2", "c3")})}
        B = self.b
        c1, c2, X = B.gen("c1"), B.gen("c2"), B.gen("X")
        out["b"] = GradedMap(R, B, {"c1": c1 + X, "c2": c2 + c1 * X, "c3": c2 * X})
        C = self.c
        out["c"] = GradedMap(R, C, {k: C.gen(k) for k in ("c1", "c2", "c3")})
        out["edge"] = GradedMap(R, self.edge, {k: self.to_edges["c"][0].images[k] for k in ("c1", "c2", "c3")})
        out["center"] = out["edge"].then(self.edge_to_center)
        return out


@lru_cache(maxsize=None)
def models(ell: int) -> StabilizerModels:
    return StabilizerModels(ell)
