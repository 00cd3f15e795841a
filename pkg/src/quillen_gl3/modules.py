"""Graded subspaces of a free graded-commutative algebra viewed as modules over
a polynomial Chern ring acting through chosen even-degree elements.

Freeness is tested through minimal generators: in degree t these span a
complement of the decomposables sum_i r_i * M(t - deg r_i). A graded module
over a polynomial ring is free exactly when its minimal generators admit no
relation, so a degree where the free prediction exceeds the actual dimension
certifies non-freeness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import modp
from .algebra import (
    FreeGCAlgebra,
    GradedElement,
    all_permutations,
    alternating_generators,
    models,
    perm_sign,
    permutation_map,
    symmetric_classes,
    torus_algebra,
)
from .detection import detection_filtration
from .series import HPRational, poly


class DegeneracyError(AssertionError):
    """Declared free generators are dependent over the Chern ring."""


@dataclass
class GradedSubspaceFamily:
    """Per-degree column bases inside `alg`, degrees 0..D."""

    alg: FreeGCAlgebra
    D: int
    bases: list[np.ndarray] = field(default_factory=list)

    def dims(self) -> list[int]:
        return [b.shape[1] for b in self.bases]

    def contains(self, t: int, vectors: np.ndarray) -> bool:
        if vectors.size == 0:
            return True
        return modp.in_span(self.bases[t], vectors, self.alg.ell)


def multiplication_matrix(x: GradedElement, t: int) -> np.ndarray:
    """Matrix of y -> x * y from degree t to degree t + deg x."""
    alg = x.alg
    d = x.degree or 0
    rows = alg.index(t + d)
    src = alg.basis(t)
    M = np.zeros((len(rows), len(src)), dtype=np.int64)
    for j, m in enumerate(src):
        y = GradedElement(alg, {m: 1})
        for mt, c in (x * y).terms.items():
            M[rows[mt], j] = c
    return M % alg.ell


def ring_dims(degrees: tuple[int, ...], D: int) -> list[int]:
    return HPRational.of(poly(1), degrees).expand(D)


def ring_monomials(ring_gens: list[GradedElement], degrees: tuple[int, ...], d: int) -> list[GradedElement]:
    """Products of the ring generator images of total degree d."""
    alg = ring_gens[0].alg
    out: list[GradedElement] = []

    def rec(k: int, rest: int, acc: GradedElement) -> None:
        if k == len(ring_gens):
            if rest == 0:
                out.append(acc)
            return
        e = 0
        while e * degrees[k] <= rest:
            rec(k + 1, rest - e * degrees[k], acc * (ring_gens[k] ** e))
            e += 1

    rec(0, d, alg.one())
    return out


def generated_family(
    gens: list[GradedElement], ring_gens: list[GradedElement], degrees: tuple[int, ...], D: int
) -> tuple[GradedSubspaceFamily, list[int]]:
    """Span of ring monomials times `gens` in each degree, plus the free
    prediction sum_g dim R(t - deg g)."""
    alg = gens[0].alg
    ell = alg.ell
    rdims = ring_dims(degrees, D)
    fam = GradedSubspaceFamily(alg, D)
    pred = [0] * (D + 1)
    for t in range(D + 1):
        cols = []
        for g in gens:
            k = g.degree
            if k is None or k > t:
                continue
            pred[t] += rdims[t - k]
            for r in ring_monomials(ring_gens, degrees, t - k):
                cols.append((r * g).vector(t))
        n = alg.dim(t)
        A = np.array(cols, dtype=np.int64).T if cols else np.zeros((n, 0), np.int64)
        piv = modp.column_basis(A, ell) if A.size else []
        fam.bases.append(A[:, piv] % ell)
    return fam, pred


@dataclass(frozen=True)
class ModuleProfile:
    """Degreewise dims, minimal generator counts and free prediction."""

    dims: tuple[int, ...]
    generators: tuple[int, ...]
    free_prediction: tuple[int, ...]
    closed: bool

    @property
    def relation_degrees(self) -> tuple[int, ...]:
        return tuple(t for t, (d, p) in enumerate(zip(self.dims, self.free_prediction)) if p != d)

    @property
    def free_up_to_cutoff(self) -> bool:
        return self.closed and not self.relation_degrees

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "generators": list(self.generators),
            "free_prediction": list(self.free_prediction),
            "relation_degrees": list(self.relation_degrees),
            "closed": self.closed,
        }


def module_profile(fam: GradedSubspaceFamily, ring_gens: list[GradedElement], degrees: tuple[int, ...]) -> ModuleProfile:
    ell = fam.alg.ell
    D = fam.D
    dims = fam.dims()
    gens = []
    closed = True
    for t in range(D + 1):
        parts = []
        for r, k in zip(ring_gens, degrees):
            if k <= t and fam.bases[t - k].shape[1]:
                parts.append(multiplication_matrix(r, t - k) @ fam.bases[t - k] % ell)
        dec = np.hstack(parts) if parts else np.zeros((fam.alg.dim(t), 0), np.int64)
        if dec.shape[1] and not fam.contains(t, dec):
            closed = False
        gens.append(dims[t] - (modp.rank(dec, ell) if dec.size else 0))
    rdims = ring_dims(degrees, D)
    pred = [sum(gens[k] * rdims[t - k] for k in range(t + 1)) for t in range(D + 1)]
    return ModuleProfile(tuple(dims), tuple(gens), tuple(pred), closed)


# ---------------------------------------------------------------------------
# alternating modules


def alternating_series(n: int) -> HPRational:
    if n == 2:
        return HPRational.of(poly(0, 1, 2, 1), (2, 4))
    if n == 3:
        return HPRational.of(poly(0, 0, 1, 2, 1, 1, 2, 1), (2, 4, 6))
    raise ValueError("n must be 2 or 3")


def is_alternating(x: GradedElement, n: int) -> bool:
    for sigma in all_permutations(n):
        if permutation_map(x.alg, n, sigma)(x) != x * perm_sign(sigma):
            return False
    return True


@lru_cache(maxsize=None)
def alternating_basis(ell: int, n: int, D: int) -> tuple[GradedSubspaceFamily, list[GradedElement]]:
    """Chern-ring span of the designated alternating generators on [0, D].

    Raises DegeneracyError when the span is smaller than a free module on the
    generators would be.
    """
    T = torus_algebra(ell, n)
    gens = alternating_generators(T, n)
    sym = symmetric_classes(T, n)
    ring = [sym[f"c{j}"] for j in range(1, n + 1)]
    degrees = tuple(2 * j for j in range(1, n + 1))
    fam, pred = generated_family(gens, ring, degrees, D)
    dims = fam.dims()
    bad = [t for t in range(D + 1) if dims[t] != pred[t]]
    if bad:
        raise DegeneracyError(f"alternating generators (n={n}) dependent in degrees {bad}")
    return fam, gens


# ---------------------------------------------------------------------------
# Chern action on the detection filtration


@dataclass(frozen=True)
class ChernActionReport:
    kind: str
    failures: tuple[str, ...]
    profile: ModuleProfile | None = None

    @property
    def passed(self) -> bool:
        return not self.failures


def _chern_images(ell: int, kind: str) -> list[GradedElement]:
    f = models(ell).chern_to[kind]
    return [f.images[c] for c in ("c1", "c2", "c3")]


def detection_family(ell: int, kind: str, D: int, step: str) -> GradedSubspaceFamily:
    det = detection_filtration(ell, kind, D)
    bases = det.d1 if step == "D1" else det.d2
    return GradedSubspaceFamily(models(ell).algebra(kind), D, [b % ell for b in bases])


def chern_action_check(ell: int, kind: str, D: int) -> ChernActionReport:
    """c_i * D^k(t) lies in D^k(t + 2i) for all t + 2i <= D; for type a the
    D^2 module is also profiled against its free prediction."""
    failures = []
    steps = ("D1",) if kind == "edge" else ("D1", "D2")
    chern = _chern_images(ell, kind)
    for step in steps:
        fam = detection_family(ell, kind, D, step)
        for i, c in enumerate(chern, start=1):
            for t in range(D - 2 * i + 1):
                if fam.bases[t].shape[1] == 0:
                    continue
                img = multiplication_matrix(c, t) @ fam.bases[t] % ell
                if not fam.contains(t + 2 * i, img):
                    failures.append(f"{kind}:{step}: c{i} * degree {t} leaves the filtration step")
    profile = None
    if kind == "a":
        profile = module_profile(detection_family(ell, "a", D, "D2"), chern, (2, 4, 6))
        if not profile.free_up_to_cutoff:
            failures.append(f"a:D2: relation among minimal generators in degrees {profile.relation_degrees}")
    return ChernActionReport(kind, tuple(failures), profile)


def gl3_d1_profile(ell: int, D: int = 12) -> ModuleProfile:
    """Chern-module profile of D^1 in the cohomology of GL_3(F_q)."""
    return module_profile(detection_family(ell, "c", D, "D1"), _chern_images(ell, "c"), (2, 4, 6))
