"""The parabolic graph of E: typed vertices, oriented edges, counts and H1-hat."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .abelian import FiniteAbelianGroup
from .curve import EllipticCurve, point_count_ext, torsion_rank


class CountIdentityError(AssertionError):
    """A counting identity that must hold for every curve failed."""


def classify_triple(curve: EllipticCurve, L1, L2, L3) -> str:
    """Splitting pattern of a triple of points summing to O: 'a', 'b' or 'c'."""
    if curve.add(curve.add(L1, L2), L3) is not None:
        raise ValueError("triple does not sum to O")
    distinct = len({L1, L2, L3})
    return {3: "a", 2: "b", 1: "c"}[distinct]


def multiset_census(curve: EllipticCurve) -> dict[str, int]:
    """Subtype counts of 3-multisets of points summing to O, enumerated with
    the curve addition law only (independent of the group-structure indices)."""
    pts = list(curve.points)
    pos = {P: i for i, P in enumerate(pts)}
    out = {"a": 0, "b": 0, "c": 0}
    for i, P in enumerate(pts):
        for j in range(i, len(pts)):
            k = pos[curve.neg(curve.add(P, pts[j]))]
            if k >= j:
                out[classify_triple(curve, P, pts[j], pts[k])] += 1
    return out


@dataclass(frozen=True)
class SplitVertex:
    """Decomposable bundle L1 + L2 + L3 given by sorted point indices.

    For subtype b the triple is stored as (L, L, M) with L the repeated point,
    regardless of index order.
    """

    triple: tuple[int, int, int]
    subtype: str


@dataclass(frozen=True)
class Edge:
    """Elementary transformation from Stable(stable) to the split vertex `split`.

    `slot` tells which restriction applies: for subtype a it is the position
    (0, 1, 2) of the point left out of the pair; for subtype b it is 0 for the
    pair {L, L} and 1 for the pair {L, M}; for subtype c it is 0.
    """

    split: int
    stable: int
    pair: tuple[int, int]
    slot: int


@dataclass(frozen=True)
class CountRecord:
    n_a: int
    n_b: int
    n_c: int
    n_d: int
    n_e: int
    edges_rational: int
    chi_prime: int

    def as_dict(self) -> dict[str, int]:
        return {
            "N_a": self.n_a,
            "N_b": self.n_b,
            "N_c": self.n_c,
            "N_d": self.n_d,
            "N_e": self.n_e,
            "edges_rational": self.edges_rational,
            "chi_prime": self.chi_prime,
        }


@dataclass(frozen=True)
class ParabolicGraph:
    curve: EllipticCurve
    ell: int | None
    splits: tuple[SplitVertex, ...]
    edges: tuple[Edge, ...]
    counts: CountRecord

    @property
    def n_stable(self) -> int:
        return self.curve.order

    @property
    def q(self) -> int:
        return self.curve.q

    @cached_property
    def rank_ell(self) -> int:
        return torsion_rank(self.curve, self.ell) if self.ell else 0

    @cached_property
    def by_subtype(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {"a": [], "b": [], "c": []}
        for i, v in enumerate(self.splits):
            out[v.subtype].append(i)
        return out

    @cached_property
    def edges_of(self) -> list[list[int]]:
        """Edge indices at each split vertex, ordered by slot."""
        out: list[list[int]] = [[] for _ in self.splits]
        for k, e in enumerate(self.edges):
            out[e.split].append(k)
        for lst in out:
            lst.sort(key=lambda k: self.edges[k].slot)
        return out

    def components(self) -> int:
        """Connected components of the pruned graph (stable vertices first)."""
        S = self.n_stable
        n = S + len(self.splits)
        if not self.edges:
            return n
        rows = [e.stable for e in self.edges]
        cols = [S + e.split for e in self.edges]
        adj = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
        return int(connected_components(adj, directed=False)[0])

    def dump(self) -> dict:
        pts = self.curve.points
        label = lambda i: "O" if pts[i] is None else list(pts[i])  # noqa: E731
        vertices = [{"kind": "stable", "index": i, "point": label(i)} for i in range(self.n_stable)]
        vertices += [
            {"kind": "split", "index": self.n_stable + j, "subtype": v.subtype, "triple": list(v.triple)}
            for j, v in enumerate(self.splits)
        ]
        edges = [
            {"from": e.stable, "to": self.n_stable + e.split, "pair": list(e.pair), "slot": e.slot}
            for e in self.edges
        ]
        return {"vertices": vertices, "edges": edges, "counts": self.counts.as_dict()}


def _check(name: str, lhs: int, rhs: int) -> None:
    if lhs != rhs:
        raise CountIdentityError(f"{name}: {lhs} != {rhs}")


def build_parabolic_graph(curve: EllipticCurve, ell: int | None = None) -> ParabolicGraph:
    """Vertices of types I and IIa-c, rational edges, and the count record."""
    G = curve.structure
    N = G.order
    q = curve.q
    splits: list[SplitVertex] = []
    edges: list[Edge] = []
    for i in range(N):
        for j in range(i, N):
            k = G.neg_idx(G.add_idx(i, j))
            if k < j:
                continue
            distinct = len({i, j, k})
            if distinct == 3:
                v = SplitVertex((i, j, k), "a")
                pairs = [((j, k), 0), ((i, k), 1), ((i, j), 2)]
            elif distinct == 2:
                L, M = (i, k) if i == j else (j, i)
                v = SplitVertex((L, L, M), "b")
                pairs = [((L, L), 0), ((L, M), 1)]
            else:
                v = SplitVertex((i, i, i), "c")
                pairs = [((i, i), 0)]
            s = len(splits)
            splits.append(v)
            for pair, slot in pairs:
                edges.append(Edge(s, G.add_idx(*pair), tuple(sorted(pair)), slot))

    n_a = sum(v.subtype == "a" for v in splits)
    n_b = sum(v.subtype == "b" for v in splits)
    n_c = sum(v.subtype == "c" for v in splits)
    n_d = (point_count_ext(curve, 2) - N) // 2
    n_e = q * q + q + 1 - (n_a + n_b + n_c + n_d)
    # second path for N_e: Galois orbits of cubic points in the kernel of the trace
    n_e_cubic, rem = divmod(point_count_ext(curve, 3) // N - G.torsion_count(3), 3)
    counts = CountRecord(n_a, n_b, n_c, n_d, n_e, len(edges), n_c - 2 * n_a)

    _check("6 N_a + 3 N_b + N_c = #E^2", 6 * n_a + 3 * n_b + n_c, N * N)
    _check("N_b + N_c = #E", n_b + n_c, N)
    _check("N_c = #E[3] = 3^rk_3", n_c, 3 ** torsion_rank(curve, 3))
    _check("N_e from the cubic point count", n_e, n_e_cubic)
    _check("cubic orbit count divisible by 3", rem, 0)
    _check("N_a + ... + N_e = q^2 + q + 1", n_a + n_b + n_c + n_d + n_e, q * q + q + 1)
    _check("edges = 3 N_a + 2 N_b + N_c", len(edges), 3 * n_a + 2 * n_b + n_c)
    _check("edges + N_d = (q + 1) #E", len(edges) + n_d, (q + 1) * N)
    _check("chi' = #vertices - #edges", counts.chi_prime, N + len(splits) - len(edges))
    _check("3 N_a + N_b + N_d = q #E", 3 * n_a + n_b + n_d, q * N)
    graph = ParabolicGraph(curve, ell, tuple(splits), tuple(edges), counts)
    _check("connected components", graph.components(), 1)
    return graph


# ---------------------------------------------------------------------------
# H1-hat: cokernel of the abelianized edge-to-vertex map


def hhat1(graph: ParabolicGraph, mode: str = "pruned", iid_attach: str = "o") -> FiniteAbelianGroup:
    """Integral cokernel of (+) edges G(e)^ab -> (+) vertices G(v)^ab.

    Each edge contributes G(stable end) - G(split end) on its two generators
    (x, y), where x is the homothety of the rank-2 summand and y the line.
    """
    if mode not in ("pruned", "unpruned"):
        raise ValueError(f"unknown mode {mode!r}")
    q = graph.q
    u = q - 1
    orders: list[int] = []
    offset_stable = []
    for _ in range(graph.n_stable):
        offset_stable.append(len(orders))
        orders += [u, u]
    offset_split = []
    for v in graph.splits:
        offset_split.append(len(orders))
        orders += {"a": [u, u, u], "b": [u, u], "c": [u]}[v.subtype]
    n_d = graph.counts.n_d if mode == "unpruned" else 0
    offset_quad = []
    for _ in range(n_d):
        offset_quad.append(len(orders))
        orders += [q * q - 1, u]

    gens = len(orders)
    rels: list[list[int]] = []
    for g, m in enumerate(orders):
        col = [0] * gens
        col[g] = m
        rels.append(col)

    def edge_columns(stable_off: int, split_images: list[dict[int, int]]) -> None:
        for gen, image in enumerate(split_images):
            col = [0] * gens
            col[stable_off + gen] += 1
            for g, c in image.items():
                col[g] -= c
            rels.append(col)

    for e in graph.edges:
        v = graph.splits[e.split]
        o = offset_split[e.split]
        if v.subtype == "a":
            pair_slots = [s for s in range(3) if s != e.slot]
            x = {o + pair_slots[0]: 1, o + pair_slots[1]: 1}
            y = {o + e.slot: 1}
        elif v.subtype == "b":
            # generators (det of GL_2 on L+L, unit on M)
            if e.slot == 0:
                x, y = {o: 2}, {o + 1: 1}
            else:
                x, y = {o: 1, o + 1: 1}, {o: 1}
        else:
            x, y = {o: 2}, {o: 1}
        edge_columns(offset_stable[e.stable], [x, y])

    targets = quadratic_attachment(graph, iid_attach)[:n_d]
    for o, target in zip(offset_quad, targets):
        edge_columns(offset_stable[target], [{o: q + 1}, {o + 1: 1}])

    exponent = (q * q - 1) if n_d else u
    return FiniteAbelianGroup.cokernel(gens, rels, exponent=exponent)


def quadratic_attachment(graph: ParabolicGraph, how: str = "o") -> list[int]:
    """Stable vertex index for each of the N_d quadratic leaves.

    "o" hangs every leaf on Stable(O); "roundrobin" cycles through the stable
    vertices; "norm" uses the geometric end Stable(P + Frob(P)). The norm
    fibre sizes need no extension arithmetic: the trace E(F_q^2) -> E(F_q) is
    onto, so a fibre holds #E(F_q^2)/#E points, of which the rational ones are
    the R with 2R = L.
    """
    n_d = graph.counts.n_d
    S = graph.n_stable
    if how == "o":
        return [0] * n_d
    if how == "roundrobin":
        return [k % S for k in range(n_d)]
    if how != "norm":
        raise ValueError(f"unknown attachment {how!r}")
    G = graph.curve.structure
    fibre = point_count_ext(graph.curve, 2) // S
    halves = [0] * S
    for r in range(S):
        halves[G.add_idx(r, r)] += 1
    out: list[int] = []
    for L in range(S):
        out += [L] * ((fibre - halves[L]) // 2)
    assert len(out) == n_d
    return out


def hhat1_formula(graph: ParabolicGraph, mode: str = "pruned") -> FiniteAbelianGroup:
    """Z/(q-1) + E(F_q) (x) Z/(q-1), plus Z/(q+1) per quadratic point if unpruned."""
    q = graph.q
    G = graph.curve.structure
    cyc = [q - 1, gcd(G.m, q - 1), gcd(G.n, q - 1)]
    if mode == "unpruned":
        cyc += [q + 1] * graph.counts.n_d
    return FiniteAbelianGroup.from_cyclic([c for c in cyc if c > 1])
