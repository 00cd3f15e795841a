"""Detection filtration D^2 <= D^1 on each stabilizer algebra, degree by degree.

D^1(t) is the kernel of restriction to the center; on split vertices D^2(t)
is the joint kernel of the restrictions to all incident edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import modp
from .algebra import StabilizerModels, models
from .series import HPRational, T, poly, poly_mul


class DetectionMismatch(AssertionError):
    pass


def reference_series() -> dict[str, dict[str, HPRational]]:
    """Closed forms for the per-type filtration pieces."""
    one_plus = poly(1, 1)
    cube = poly_mul(poly_mul(one_plus, one_plus), one_plus)
    sq = poly_mul(one_plus, one_plus)
    hex_ = poly(1, -1, 1)
    return {
        "edge": {
            "total": HPRational.of(sq, (2, 2)),
            "D1": HPRational.of(poly_mul(poly(0, 1, 2, 1), poly(1, 0, 1)), (2, 4)),
            "image": HPRational.of(one_plus, (2,)),
        },
        "a": {
            "total": HPRational.of(cube, (2, 2, 2)),
            "D2": HPRational.of(poly_mul(T(2), poly_mul(cube, hex_)), (2, 2, 2)),
            "image": HPRational.of(poly_mul(sq, poly(1, 1, 0, 1)), (2, 2)),
            "D1/D2": HPRational.of(poly_mul(poly(0, 2, 0, 1), sq), (2, 2)),
        },
        "b": {
            "total": HPRational.of(poly_mul(sq, poly(1, 0, 0, 1)), (2, 2, 4)),
            "D2": HPRational.of(poly_mul(T(4), poly(1, 2, 1, 1, 2, 1)), (2, 2, 4)),
            "image": HPRational.of(poly_mul(cube, hex_), (2, 2)),
            "D1/D2": HPRational.of(poly_mul(poly(0, 1, 0, 1), sq), (2, 2)),
        },
        "c": {
            "total": HPRational.of(poly_mul(poly_mul(one_plus, poly(1, 0, 0, 1)), poly(1, 0, 0, 0, 0, 1)), (2, 4, 6)),
            "D2": HPRational.of(poly_mul(T(8), poly(1, 2, 1, 1, 2, 1)), (2, 4, 6)),
            "image": HPRational.of(poly_mul(sq, poly(1, -1, 0, 1)), (2, 2)),
            "D1/D2": HPRational.of(poly_mul(T(3), sq), (2, 2)),
            "D1": HPRational.of(poly(0, 0, 0, 1, 2, 2, 2, 1, 1, 1, -1, -1), (2, 4, 6)),
        },
    }


@dataclass
class DetectionData:
    """Per-degree subspaces for one stabilizer type.

    `d1[t]` and `d2[t]` are column bases inside the degree-t basis of the
    stabilizer algebra; `d2` is absent for the edge type.
    """

    kind: str
    D: int
    d1: list[np.ndarray] = field(default_factory=list)
    d2: list[np.ndarray] = field(default_factory=list)
    image: list[int] = field(default_factory=list)

    def dims(self) -> dict[str, list[int]]:
        out = {
            "total": [b.shape[0] for b in self.d1],
            "D1": [b.shape[1] for b in self.d1],
            "image": list(self.image),
        }
        if self.kind != "edge":
            out["D2"] = [b.shape[1] for b in self.d2]
            out["D1/D2"] = [a - b for a, b in zip(out["D1"], out["D2"])]
        return out


def edge_stack(M: StabilizerModels, kind: str, t: int) -> np.ndarray:
    return np.vstack([f.matrix(t) for f in M.to_edges[kind]])


@lru_cache(maxsize=None)
def _degree_pieces(ell: int, kind: str, t: int) -> tuple[np.ndarray, np.ndarray | None, int]:
    M = models(ell)
    C = M.to_center[kind].matrix(t)
    d1 = modp.nullspace(C, ell)
    if kind == "edge":
        return d1, None, modp.rank(C, ell)
    R = edge_stack(M, kind, t)
    return d1, modp.nullspace(R, ell), modp.rank(R, ell)


def detection_filtration(ell: int, kind: str, D: int) -> DetectionData:
    """Compute D^1, D^2 and image dimensions on [0, D]."""
    data = DetectionData(kind, D)
    for t in range(D + 1):
        d1, d2, image = _degree_pieces(ell, kind, t)
        data.d1.append(d1)
        if d2 is not None:
            data.d2.append(d2)
        data.image.append(image)
    return data


def check_against_reference(data: DetectionData) -> list[str]:
    """Names of mismatching (piece, degree) pairs; empty when all agree."""
    ref = reference_series()[data.kind]
    dims = data.dims()
    bad = []
    for piece, series in ref.items():
        got = dims[piece]
        want = series.expand(data.D)
        for t, (g, w) in enumerate(zip(got, want)):
            if g != w:
                bad.append(f"{data.kind}:{piece} at t={t}: computed {g}, closed form {w}")
    return bad


def verified_filtration(ell: int, kind: str, D: int) -> DetectionData:
    data = detection_filtration(ell, kind, D)
    bad = check_against_reference(data)
    if bad:
        raise DetectionMismatch("; ".join(bad))
    return data
