"""Command line: quillen-gl3 <subcommand> --q INT --curve LIST --ell INT ..."""

from __future__ import annotations

import argparse
import sys

from .config import RunConfig, default_max_degree
from .curve import HypothesisError, parse_curve
from .report import parse_want_rank, run, to_json, to_text

COMMANDS = ("curve", "graph", "hhat1", "detect", "ss", "series", "verify", "scan")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quillen-gl3", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--q", type=int)
    p.add_argument("--curve", help="a4,a6 or a1,a2,a3,a4,a6")
    p.add_argument("--ell", type=int)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")
    p.add_argument("--out")
    p.add_argument("--iid-attach", choices=("o", "roundrobin", "norm"), default="o")
    p.add_argument("--seed", type=int)
    p.add_argument("--want-rank", action="append", default=[], metavar="r=k")
    p.add_argument("--limit", type=int)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        q=ns.q,
        curve=parse_curve(ns.curve) if ns.curve else None,
        ell=ns.ell,
        max_degree=ns.max_degree if ns.max_degree is not None else default_max_degree(),
        fmt=ns.fmt,
        out=ns.out,
        iid_attach=ns.iid_attach,
        seed=ns.seed,
        want_rank=parse_want_rank(ns.want_rank, ns.ell),
        limit=ns.limit,
    )


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        report, code = run(cfg)
    except HypothesisError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    text = to_json(report) if cfg.fmt == "json" else to_text(report)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
