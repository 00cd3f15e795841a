"""Chern-module profile of the column-0 E_2 term, computed as the kernel of the
full differential on whole stabilizer algebras.

For each degree the script reports the dimension, the number of minimal
generators over F[c1, c2, c3] and the dimension a free module on those
generators would have. A relation among minimal generators shows up as a
degree where the two dimensions differ. The GL_3 summand is profiled the same
way for comparison.
"""

from __future__ import annotations

import argparse
import json
import time
from pathlib import Path

from quillen_gl3.curve import EllipticCurve
from quillen_gl3.graph import build_parabolic_graph
from quillen_gl3.modules import gl3_d1_profile
from quillen_gl3.spectral import e2_column0_profile, e2_column0_series


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--q", type=int, default=11)
    p.add_argument("--curve", default="1,8")
    p.add_argument("--ell", type=int, default=5)
    p.add_argument("--max-degree", type=int, default=18)
    p.add_argument("--out", default="results/e2_module_profile.json")
    args = p.parse_args()

    E = EllipticCurve.from_coefficients(args.q, tuple(int(x) for x in args.curve.split(",")))
    g = build_parabolic_graph(E, args.ell)
    t0 = time.perf_counter()
    prof = e2_column0_profile(g, args.max_degree)
    gl3 = gl3_d1_profile(args.ell, min(args.max_degree, 14))
    closed = e2_column0_series(g.counts, g.rank_ell)
    result = {
        "curve": {"q": args.q, "coefficients": list(E.coefficients), "ell": args.ell},
        "e2_column0": prof.to_json(),
        "e2_column0_closed_form_expansion": closed.expand(args.max_degree),
        "e2_column0_closed_form_numerator": list(closed.canonicalize((2, 4, 6))),
        "generator_total_through_cutoff": sum(prof.generators),
        "gl3_summand": gl3.to_json(),
        "seconds": round(time.perf_counter() - t0, 2),
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(result, indent=1, sort_keys=True))
    print(f"dims        {list(prof.dims)}")
    print(f"closed form {result['e2_column0_closed_form_expansion']}")
    print(f"generators  {list(prof.generators)} (total {sum(prof.generators)})")
    print(f"relations   {list(prof.relation_degrees) or 'none'}; closed under Chern action {prof.closed}")
    print(f"GL3 summand relations in degrees {list(gl3.relation_degrees)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
