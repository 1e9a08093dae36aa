"""Dense interior-node matrices for the linearized and virial operators.

Homogeneous Dirichlet conditions are imposed by deleting boundary rows and
columns.  See :mod:`virialspec.field2d` for the flattening convention.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import field2d
from .field2d import TensorField
from .spectral_grid import Grid1D

LABELS = ("L_op", "B2", "P2", "P2bar", "M", "M_bar")


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    matrix: np.ndarray
    label: str
    symmetric_in_form: bool
    ess_min: float
    grid: Grid1D

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown operator label {self.label!r}")
        n = (self.grid.N - 1) ** 2
        if self.matrix.shape != (n, n):
            raise ValueError(f"matrix shape {self.matrix.shape} != {(n, n)}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, v):
        return self.matrix @ v


def _interior(A: np.ndarray) -> np.ndarray:
    return A[1:-1, 1:-1]


def assemble_laplacian(grid: Grid1D, cx: float = 1.0, cy: float = 1.0) -> np.ndarray:
    """``cx d_xx + cy d_yy`` on interior nodes."""
    D2 = _interior(grid.D2)
    eye = np.eye(grid.N - 1)
    return cx * np.kron(eye, D2) + cy * np.kron(D2, eye)


def derivatives(Q: TensorField) -> tuple[TensorField, TensorField]:
    return field2d.dx(Q), field2d.dy(Q)


def assemble_L(Q: TensorField) -> DiscreteOperator:
    """``-Delta + 1 - 3 Q**2``."""
    grid = Q.grid
    A = -assemble_laplacian(grid, 1.0, 1.0)
    A[np.diag_indices_from(A)] += field2d.vec(1.0 - 3.0 * Q.values**2)
    return DiscreteOperator(A, "L_op", True, 1.0, grid)


def assemble_B2(Q: TensorField, Qx: TensorField | None = None) -> DiscreteOperator:
    """``2B = -3 d_xx - d_yy + 1 - 3 Q**2 - 6 x Q Q_x``."""
    grid = Q.grid
    if Qx is None:
        Qx = field2d.dx(Q)
    X, _ = field2d.coords(grid)
    A = -assemble_laplacian(grid, 3.0, 1.0)
    pot = 1.0 - 3.0 * Q.values**2 - 6.0 * X * Q.values * Qx.values
    A[np.diag_indices_from(A)] += field2d.vec(pot)
    return DiscreteOperator(A, "B2", True, 1.0, grid)


def assemble_projection(f: TensorField, g: TensorField, grid: Grid1D | None = None,
                        self_adjoint: bool = True) -> DiscreteOperator:
    """Matrix of ``u -> g <u, f>_w`` (or its symmetrization).

    The self-adjoint form is ``(g <u, f> + f <u, g>) / 2``.
    """
    grid = grid or f.grid
    if f.grid is not grid or g.grid is not grid:
        if not (f.grid.N == g.grid.N == grid.N
                and np.array_equal(f.grid.x, grid.x) and np.array_equal(g.grid.x, grid.x)):
            raise ValueError("projection factors live on different grids")
    w = field2d.interior_weights(grid)
    fv, gv = f.vec(), g.vec()
    P = np.outer(gv, w * fv)
    if self_adjoint:
        P = 0.5 * (P + np.outer(fv, w * gv))
    return DiscreteOperator(P, "P2" if self_adjoint else "P2bar", self_adjoint, 0.0, grid)


def virial_factors(Q: TensorField, Qx: TensorField) -> tuple[TensorField, TensorField]:
    """``(x Q / ||Q||**2, 6 Q**2 Q_x)`` so that ``2P = g<., f> + f<., g>``."""
    X, _ = field2d.coords(Q.grid)
    mass = field2d.inner(Q, Q)
    f = TensorField(Q.grid, X * Q.values / mass)
    g = TensorField(Q.grid, 6.0 * Q.values**2 * Qx.values)
    return f, g


def assemble_M(Q: TensorField, grid: Grid1D | None = None,
               Qx: TensorField | None = None) -> DiscreteOperator:
    """``2(B + P)`` with the self-adjoint rank-2 term."""
    grid = grid or Q.grid
    if Qx is None:
        Qx = field2d.dx(Q)
    B2 = assemble_B2(Q, Qx)
    f, g = virial_factors(Q, Qx)
    P = assemble_projection(f, g, grid, self_adjoint=True)
    return DiscreteOperator(B2.matrix + 2.0 * P.matrix, "M", True, 1.0, grid)


def assemble_M_bar(Q: TensorField, grid: Grid1D | None = None,
                   Qx: TensorField | None = None) -> DiscreteOperator:
    """``2B + 2Pbar`` with the one-sided rank-1 term ``2 g <., f>``.

    Same quadratic form as :func:`assemble_M`, but not self-adjoint.
    """
    grid = grid or Q.grid
    if Qx is None:
        Qx = field2d.dx(Q)
    B2 = assemble_B2(Q, Qx)
    f, g = virial_factors(Q, Qx)
    P = assemble_projection(f, g, grid, self_adjoint=False)
    return DiscreteOperator(B2.matrix + 2.0 * P.matrix, "M_bar", False, 1.0, grid)


def dump_matrix(op: DiscreteOperator, path: str | Path) -> None:
    """Row-major float64 with a 16-byte header of two int64 dimensions."""
    A = np.ascontiguousarray(op.matrix, dtype="<f8")
    with Path(path).open("wb") as fh:
        fh.write(struct.pack("<qq", *A.shape))
        fh.write(A.tobytes(order="C"))


def load_matrix(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    rows, cols = struct.unpack("<qq", raw[:16])
    return np.frombuffer(raw[16:], dtype="<f8").reshape(rows, cols).copy()
