"""Run configuration shared by the command line and the scripts."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .curve import EllipticCurve, HypothesisError, check_hypotheses

ENV_MAX_DEGREE = "QUILLEN_GL3_MAX_DEGREE"
DEFAULT_MAX_DEGREE = 8
MAX_SUPPORTED_DEGREE = 16

NEEDS_CURVE = {"curve", "graph", "hhat1", "ss", "series", "verify"}
NEEDS_ELL = {"detect", "ss", "series", "verify", "scan"}


def default_max_degree() -> int:
    raw = os.environ.get(ENV_MAX_DEGREE)
    if raw is None:
        return DEFAULT_MAX_DEGREE
    try:
        return int(raw)
    except ValueError as exc:
        raise HypothesisError(f"{ENV_MAX_DEGREE}={raw!r} is not an integer") from exc


@dataclass
class RunConfig:
    command: str
    q: int | None = None
    curve: tuple[int, ...] | None = None
    ell: int | None = None
    max_degree: int = field(default_factory=default_max_degree)
    fmt: str = "json"
    out: str | None = None
    iid_attach: str = "o"
    seed: int | None = None
    want_rank: tuple[tuple[str, int], ...] = ()
    limit: int | None = None

    def validate(self) -> None:
        """Check every standing hypothesis before any computation."""
        if self.command in NEEDS_CURVE | {"scan"} and self.q is None:
            raise HypothesisError(f"{self.command}: --q is required")
        if self.command in NEEDS_CURVE and self.curve is None:
            raise HypothesisError(f"{self.command}: --curve is required")
        if self.command in NEEDS_ELL and self.ell is None:
            raise HypothesisError(f"{self.command}: --ell is required")
        if self.q is not None:
            check_hypotheses(self.q, self.ell)
        elif self.ell is not None:
            if self.ell < 5:
                raise HypothesisError(f"ell = {self.ell}: hypothesis ell >= 5 violated")
        if self.curve is not None:
            self.build_curve()
        if not 0 <= self.max_degree <= MAX_SUPPORTED_DEGREE:
            raise HypothesisError(f"max degree {self.max_degree} outside [0, {MAX_SUPPORTED_DEGREE}]")
        if self.fmt not in ("json", "text"):
            raise HypothesisError(f"unknown format {self.fmt!r}")
        if self.iid_attach not in ("o", "roundrobin", "norm"):
            raise HypothesisError(f"unknown attachment {self.iid_attach!r}")

    def build_curve(self) -> EllipticCurve:
        return EllipticCurve.from_coefficients(self.q, self.curve)
