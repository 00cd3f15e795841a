"""Finitely generated abelian groups from integer presentations."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd

from sympy import factorint


def diagonalize(M: list[list[int]], modulus: int = 0) -> list[int]:
    """Diagonal of an integer matrix equivalent to M under unimodular row and
    column operations (Smith form up to the divisibility chain, which
    `FiniteAbelianGroup.from_cyclic` restores).

    Arbitrary-precision Python ints; the matrix is copied. With a nonzero
    `modulus` L the caller promises L * Z^rows lies in the column span; entries
    are then kept reduced mod L (reduction is a column operation against the
    implicit L * I block) and a vanishing pivot is reported as L.
    """
    L = modulus
    A = [[int(a) % L if L else int(a) for a in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                a = A[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    f = A[i][t] // piv
                    if f:
                        Ai, At = A[i], A[t]
                        for j in range(t, cols):
                            Ai[j] -= f * At[j]
                            if L:
                                Ai[j] %= L
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if A[t][j]:
                    f = A[t][j] // piv
                    if f:
                        for row in A[t:]:
                            row[j] -= f * row[t]
                            if L:
                                row[j] %= L
                    if A[t][j]:
                        dirty = True
            if not dirty:
                break
            # move the smallest entry of row/column t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, rows) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, cols) if A[t][j]]
            _, i, j = min(cand)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    if L:
        diag = [gcd(d, L) for d in diag] + [L] * (rows - len(diag))
    return diag


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Invariant factors d1 | d2 | ... with every d > 1."""

    factors: tuple[int, ...]

    def __post_init__(self) -> None:
        fs = tuple(self.factors)
        if any(d <= 1 for d in fs):
            raise ValueError(f"invariant factors must exceed 1: {fs}")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError(f"divisibility chain fails: {fs}")
        object.__setattr__(self, "factors", fs)

    @classmethod
    def from_cyclic(cls, orders) -> "FiniteAbelianGroup":
        """Canonicalize an arbitrary direct sum of cyclic groups."""
        powers: dict[int, list[int]] = {}
        for m in orders:
            if m == 0:
                raise ValueError("infinite cyclic summand")
            for r, e in factorint(abs(m)).items():
                powers.setdefault(r, []).append(r**e)
        width = max((len(v) for v in powers.values()), default=0)
        inv = [1] * width
        for v in powers.values():
            for k, pe in enumerate(sorted(v, reverse=True)):
                inv[width - 1 - k] *= pe
        return cls(tuple(d for d in inv if d > 1))

    @classmethod
    def cokernel(
        cls, gens: int, relations: list[list[int]], exponent: int = 0
    ) -> "FiniteAbelianGroup":
        """Z^gens modulo the columns listed in `relations` (each of length gens).

        `exponent`, when given, must annihilate the cokernel; it lets the
        elimination run modulo that number.
        """
        if gens == 0:
            return cls(())
        M = [[rel[i] for rel in relations] for i in range(gens)]
        diag = diagonalize(M, exponent) if relations else []
        if len(diag) < gens:
            raise ValueError("presentation has a free part")
        return cls.from_cyclic([d for d in diag if d != 1])

    def __add__(self, other: "FiniteAbelianGroup") -> "FiniteAbelianGroup":
        return FiniteAbelianGroup.from_cyclic(self.factors + other.factors)

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        parts = []
        for d, k in sorted(Counter(self.factors).items()):
            parts.append(f"Z/{d}" + (f"^{k}" if k > 1 else ""))
        return " + ".join(parts)


def tensor_cyclic(orders, n: int) -> list[int]:
    """Cyclic orders of (sum Z/m) tensor Z/n."""
    return [gcd(m, n) for m in orders]
