"""Angle-lemma coercivity certificates and constrained Rayleigh minima."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg as sl

from . import field2d
from .eigen import EigenPair
from .field2d import TensorField
from .operators import DiscreteOperator


class CertificationError(ValueError):
    pass


@dataclass
class SpectralReport:
    operator: str
    grid: dict
    eigenvalues: list[float]
    residuals: list[float]
    parities: list[str]
    angles: dict
    bounds: dict
    verdict: str
    cutoff: float
    value_scale: float = 1.0
    c1_estimate: float | None = None
    certificate: str = "angle_lemma"
    flags: list[str] = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def write(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n")


def angles(pairs: list[EigenPair], Q: TensorField, Qx: TensorField) -> np.ndarray:
    """``|<ref_j / ||ref_j||, phi_i>_w|`` with rows ``(Q, Q_x)``, columns ``phi_i``."""
    w = field2d.interior_weights(Q.grid)
    out = np.zeros((2, len(pairs)))
    for j, ref in enumerate((Q.vec(), Qx.vec())):
        ref = ref / np.sqrt(np.sum(w * ref * ref))
        for i, p in enumerate(pairs):
            out[j, i] = abs(np.sum(w * ref * p.vector))
    return np.minimum(out, 1.0)


def angle_lemma_bound(lambda1: float, lambda_perp: float, cos_beta: float) -> float:
    """Lower bound ``lambda_perp - (lambda_perp - lambda1) sin(beta)**2``."""
    if not lambda_perp > lambda1:
        raise ValueError(f"need lambda_perp > lambda1, got {lambda_perp} <= {lambda1}")
    if abs(cos_beta) > 1.0:
        raise ValueError(f"|cos_beta| = {abs(cos_beta)} > 1")
    return float(lambda_perp - (lambda_perp - lambda1) * (1.0 - cos_beta**2))


def certify_coercivity(Q: TensorField, Qx: TensorField, pairs: list[EigenPair],
                       cutoff: float, operator: str = "A") -> SpectralReport:
    """Per-parity angle-lemma bounds with ``lambda_perp = cutoff``.

    The odd-in-x subspace is constrained against ``Q_x`` and the even one
    against ``Q``.
    """
    grid = Q.grid
    pairs = [p for p in pairs if p.value < cutoff]
    ang = angles(pairs, Q, Qx)
    flags = []
    bounds: dict = {}
    for parity, ref_row, key in (("odd_x", 1, "odd"), ("even_x", 0, "even")):
        idx = [i for i, p in enumerate(pairs) if p.parity == parity]
        if len(idx) == 0:
            bounds[key] = float(cutoff)
        elif len(idx) == 1:
            i = idx[0]
            bounds[key] = angle_lemma_bound(pairs[i].value, cutoff, ang[ref_row, i])
        else:
            flags.append(f"{len(idx)} eigenvalues below cutoff in {parity}")
            bounds[key] = float(min(pairs[i].value for i in idx))
    mixed = [p.value for p in pairs if p.parity == "mixed"]
    if mixed:
        raise CertificationError(f"mixed-parity eigenfunctions at {mixed}")
    bounds["overall"] = min(bounds["odd"], bounds["even"])
    verdict = "positive" if bounds["overall"] > 0 and not flags else "not-certified"
    return SpectralReport(
        operator=operator,
        grid={"N": grid.N, "L": grid.L, "a": grid.a},
        eigenvalues=[p.value for p in pairs],
        residuals=[p.residual for p in pairs],
        parities=[p.parity for p in pairs],
        angles={"Q": ang[0].tolist(), "Qx": ang[1].tolist()},
        bounds=bounds,
        verdict=verdict,
        cutoff=float(cutoff),
        flags=flags,
    )


def constrained_rayleigh_min(op: DiscreteOperator,
                             constraints: list[TensorField] | list[np.ndarray] = ()) -> float:
    """``min <A u, u>_w / <u, u>_w`` over ``u`` w-orthogonal to ``constraints``.

    The weighted quadratic form equals ``s^T S s`` with ``s = W^{1/2} u`` and
    ``S`` the symmetric part of ``W^{1/2} A W^{-1/2}``; the constraint
    directions are deflated by a large shift.
    """
    if not op.symmetric_in_form:
        raise ValueError("constrained minimum needs a self-adjoint-in-form operator")
    w = field2d.interior_weights(op.grid)
    sw = np.sqrt(w)
    S = sw[:, None] * op.matrix / sw[None, :]
    S = 0.5 * (S + S.T)
    n = S.shape[0]
    if constraints is not None and len(constraints):
        C = np.column_stack([c.vec() if isinstance(c, TensorField) else np.asarray(c)
                             for c in constraints])
        if C.shape[1] >= n:
            raise CertificationError("constraints leave no admissible subspace")
        Qc, R = np.linalg.qr(sw[:, None] * C)
        d = np.abs(np.diag(R))
        if d.min() <= 1e-10 * d.max():
            raise CertificationError("constraint set is rank deficient")
        shift = 2.0 * np.max(np.sum(np.abs(S), axis=1)) + 1.0
        PS = S - Qc @ (Qc.T @ S)
        PS = PS - (PS @ Qc) @ Qc.T
        S = PS + shift * (Qc @ Qc.T)
        S = 0.5 * (S + S.T)
    val = sl.eigh(S, eigvals_only=True, subset_by_index=(0, 0), check_finite=False)
    return float(val[0])
