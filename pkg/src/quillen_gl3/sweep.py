"""Randomized property sweep over (q, ell, curve) triples.

Each triple runs the count, detection, degree-1 and two-path identities and
records one named check per identity, so that a failing identity is reported
by name together with the triple that broke it.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass, field

from sympy import isprime, primefactors

from .curve import EllipticCurve, SingularCurveError, point_count_ext, torsion_rank
from .detection import check_against_reference, detection_filtration
from .graph import CountIdentityError, build_parabolic_graph, multiset_census
from .report import Check, CheckList
from .spectral import D1Complex, d1_dims, e2_column0_series, sanity_identity, steinberg_dim

KINDS = ("edge", "a", "b", "c")


@dataclass
class SweepConfig:
    n_triples: int = 50
    q_max: int = 200
    # share of triples drawn with q <= small_q_max; keeps the sweep fast
    small_share: float = 0.9
    small_q_max: int = 71
    max_degree: int = 8
    seed: int = 0


@dataclass
class TripleResult:
    q: int
    ell: int
    curve: tuple[int, int]
    order: int
    rank_ell: int
    checks: list[Check]
    seconds: float

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "ell": self.ell,
            "curve": list(self.curve),
            "order": self.order,
            "rank_ell": self.rank_ell,
            "failures": self.failures,
            "details": {c.name: c.detail for c in self.checks if not c.ok},
            "seconds": round(self.seconds, 3),
        }


@dataclass
class SweepResult:
    config: SweepConfig
    triples: list[TripleResult] = field(default_factory=list)
    detection: dict[int, list[Check]] = field(default_factory=dict)
    seconds: float = 0.0

    def failure_counts(self) -> dict[str, int]:
        out = Counter(name for r in self.triples for name in r.failures)
        for checks in self.detection.values():
            out.update(c.name for c in checks if not c.ok)
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {
            "n_triples": len(self.triples),
            "seconds": round(self.seconds, 2),
            "failure_counts": self.failure_counts(),
            "detection": {str(e): [c.to_json() for c in cs] for e, cs in sorted(self.detection.items())},
            "triples": [r.to_json() for r in self.triples],
        }


def admissible_pairs(q_max: int) -> list[tuple[int, int]]:
    """All (q, ell) with q <= q_max prime, q > 3, ell >= 5 a prime factor of q - 1."""
    return [(q, ell) for q in range(5, q_max + 1) if isprime(q) for ell in primefactors(q - 1) if ell >= 5]


def draw_triples(cfg: SweepConfig) -> list[tuple[int, int, tuple[int, int]]]:
    rng = random.Random(cfg.seed)
    pairs = admissible_pairs(cfg.q_max)
    small = [p for p in pairs if p[0] <= cfg.small_q_max]
    large = [p for p in pairs if p[0] > cfg.small_q_max]
    n_small = round(cfg.n_triples * cfg.small_share) if large else cfg.n_triples
    out, seen = [], set()
    while len(out) < cfg.n_triples:
        pool = small if len(out) < n_small else large
        q, ell = rng.choice(pool)
        coeffs = (rng.randrange(q), rng.randrange(q))
        if (q, ell, coeffs) in seen or (4 * coeffs[0] ** 3 + 27 * coeffs[1] ** 2) % q == 0:
            continue
        seen.add((q, ell, coeffs))
        out.append((q, ell, coeffs))
    return out


def detection_checks(ell: int, D: int) -> list[Check]:
    cl = CheckList()
    for kind in KINDS:
        def det(kind=kind):
            bad = check_against_reference(detection_filtration(ell, kind, D))
            return not bad, "; ".join(bad)

        cl.run(f"detection.{kind}_matches_series", det)
    return cl.items


def triple_checks(q: int, ell: int, coeffs: tuple[int, int], D: int) -> TripleResult:
    t0 = time.perf_counter()
    E = EllipticCurve.from_coefficients(q, coeffs)
    N = E.order
    rk = torsion_rank(E, ell)
    cl = CheckList()
    try:
        g = build_parabolic_graph(E, ell)
    except CountIdentityError as exc:
        cl.add("counts.identities", False, str(exc))
        return TripleResult(q, ell, coeffs, N, rk, cl.items, time.perf_counter() - t0)
    c = g.counts
    cl.add("counts.identities", True)
    census = multiset_census(E)
    cl.add(
        "counts.multiset_oracle",
        census == {"a": c.n_a, "b": c.n_b, "c": c.n_c},
        f"enumeration {census}, graph {(c.n_a, c.n_b, c.n_c)}",
    )
    n_d_oracle = (point_count_ext(E, 2) - N) // 2
    cl.add("counts.quadratic_from_trace", c.n_d == n_d_oracle, f"{c.n_d} vs {n_d_oracle}")
    cl.add("counts.edge_identity", c.edges_rational + c.n_d == (q + 1) * N, "")
    cl.add("d1.euler_identity", sanity_identity(c, rk, q, g.n_stable), "")
    cx = D1Complex(g, 1)
    cl.add("d1.degree1_kernel_is_rank", cx.kernel_dim == rk, f"kernel {cx.kernel_dim}, rk {rk}")
    cl.add("d1.degree1_cokernel", cx.cokernel_dim == c.n_a + rk, f"cokernel {cx.cokernel_dim}, N_a + rk {c.n_a + rk}")
    ker, _ = d1_dims(g, D)
    gr2 = [sum(n * detection_filtration(ell, k, D).d2[t].shape[1] for k, n in zip("abc", (c.n_a, c.n_b, c.n_c))) for t in range(D + 1)]
    e2_0 = [1 + k + d for k, d in zip(ker, gr2)]
    want = e2_column0_series(c, rk).expand(D)
    bad = [t for t in range(D + 1) if e2_0[t] != want[t]]
    cl.add(
        "e2.two_path_equality",
        not bad,
        f"first mismatch t={bad[0]}: linear algebra {e2_0[bad[0]]}, closed form {want[bad[0]]}" if bad else "",
    )
    cl.add("e2.steinberg_column", steinberg_dim(q) == q**3, "")
    return TripleResult(q, ell, coeffs, N, rk, cl.items, time.perf_counter() - t0)


def run_sweep(cfg: SweepConfig) -> SweepResult:
    t0 = time.perf_counter()
    res = SweepResult(cfg)
    for q, ell, coeffs in draw_triples(cfg):
        if ell not in res.detection:
            res.detection[ell] = detection_checks(ell, cfg.max_degree)
        try:
            res.triples.append(triple_checks(q, ell, coeffs, cfg.max_degree))
        except SingularCurveError:
            continue
    res.seconds = time.perf_counter() - t0
    return res
