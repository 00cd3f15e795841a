"""Seeded sweep of count, detection, degree-1 and two-path identities over
random (q, ell, curve) triples with q <= q_max, ell >= 5, ell | q - 1."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from quillen_gl3.sweep import SweepConfig, run_sweep


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-triples", type=int, default=50)
    p.add_argument("--q-max", type=int, default=200)
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="results/property_sweep.json")
    args = p.parse_args()

    cfg = SweepConfig(n_triples=args.n_triples, q_max=args.q_max, max_degree=args.max_degree, seed=args.seed)
    res = run_sweep(cfg)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(res.to_json(), indent=1, sort_keys=True))
    print(f"{len(res.triples)} triples in {res.seconds:.1f}s")
    counts = res.failure_counts()
    for name, n in counts.items():
        print(f"  {name}: failed on {n} triples")
    first = {}
    for r in res.triples:
        for name, detail in r.to_json()["details"].items():
            first.setdefault(name, f"(q, ell, curve) = ({r.q}, {r.ell}, {r.curve}): {detail}")
    for name, detail in first.items():
        print(f"  first {name}: {detail}")
    return 1 if counts else 0


if __name__ == "__main__":
    raise SystemExit(main())
