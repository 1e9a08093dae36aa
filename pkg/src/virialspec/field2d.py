"""Scalar fields on the square tensor grid ``[-L, L]**2``.

Flattening convention (used by every assembled matrix): only interior nodes
are kept, and the vector is column-major over ``values[1:-1, 1:-1]``, i.e.
the x-index varies fastest::

    k = (i - 1) + (N - 1) * (j - 1),   1 <= i, j <= N - 1

Under this ordering an operator acting along x is ``kron(I, A)`` and one
acting along y is ``kron(A, I)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from .ground_state import RadialProfile
from .spectral_grid import Grid1D


@dataclass(frozen=True, eq=False)
class TensorField:
    grid: Grid1D
    values: np.ndarray  # (N+1, N+1), values[i, j] = f(x_i, y_j)

    def __post_init__(self):
        n = self.grid.N + 1
        if self.values.shape != (n, n):
            raise ValueError(f"field shape {self.values.shape} != {(n, n)}")

    def vec(self) -> np.ndarray:
        return vec(self.values)

    def __add__(self, other):
        return TensorField(self.grid, self.values + _vals(other))

    def __sub__(self, other):
        return TensorField(self.grid, self.values - _vals(other))

    def __mul__(self, other):
        return TensorField(self.grid, self.values * _vals(other))

    __rmul__ = __mul__

    def __neg__(self):
        return TensorField(self.grid, -self.values)

    def __pow__(self, k):
        return TensorField(self.grid, self.values**k)


def _vals(other):
    return other.values if isinstance(other, TensorField) else other


def vec(values: np.ndarray) -> np.ndarray:
    """Interior nodes of a full nodal array, flattened x-fastest."""
    return values[1:-1, 1:-1].ravel(order="F")


def unvec(v: np.ndarray, grid: Grid1D) -> np.ndarray:
    """Inverse of :func:`vec`, padding the boundary with zeros."""
    n = grid.N - 1
    out = np.zeros((grid.N + 1, grid.N + 1), dtype=v.dtype)
    out[1:-1, 1:-1] = v.reshape((n, n), order="F")
    return out


def coords(grid: Grid1D) -> tuple[np.ndarray, np.ndarray]:
    """``X[i, j] = x_i``, ``Y[i, j] = y_j``."""
    return np.meshgrid(grid.x, grid.x, indexing="ij")


def from_function(grid: Grid1D, f) -> TensorField:
    X, Y = coords(grid)
    return TensorField(grid, np.asarray(f(X, Y), dtype=float) * np.ones_like(X))


def radial_to_field(profile: RadialProfile, grid: Grid1D) -> TensorField:
    """Evaluate ``Q(x, y) = R(sqrt(x**2 + y**2))`` by PCHIP interpolation."""
    X, Y = coords(grid)
    r = np.hypot(X, Y)
    if r.max() > profile.nodes[-1] * (1 + 1e-12):
        raise ValueError(
            f"grid radius {r.max():.3f} exceeds profile domain {profile.nodes[-1]:.3f}")
    interp = PchipInterpolator(profile.nodes, profile.values, extrapolate=False)
    vals = interp(np.minimum(r, profile.nodes[-1]))
    return TensorField(grid, np.maximum(vals, 0.0))


def radial_derivative_field(profile: RadialProfile, grid: Grid1D) -> TensorField:
    """``(x / r) R'(r)`` from the profile's own derivative (test oracle).

    ``R'`` is interpolated as a Hermite cubic with ``R''`` taken from the
    equation itself, so the extremum of ``R'`` is not flattened.
    """
    X, Y = coords(grid)
    r = np.hypot(X, Y)
    rn, R, dR = profile.nodes, profile.values, profile.deriv
    d2R = np.empty_like(R)
    d2R[1:] = R[1:] - R[1:] ** 3 - dR[1:] / rn[1:]
    d2R[0] = 0.5 * (R[0] - R[0] ** 3)
    dR_at = CubicHermiteSpline(rn, dR, d2R)(r)
    safe = np.where(r > 0, r, 1.0)
    return TensorField(grid, np.where(r > 0, X / safe * dR_at, 0.0))


def dx(field: TensorField) -> TensorField:
    return TensorField(field.grid, field.grid.D1 @ field.values)


def dy(field: TensorField) -> TensorField:
    return TensorField(field.grid, field.values @ field.grid.D1.T)


def lambda_q(Q: TensorField, Qx: TensorField, Qy: TensorField) -> TensorField:
    """Scaling generator ``Q + x Q_x + y Q_y``."""
    X, Y = coords(Q.grid)
    return TensorField(Q.grid, Q.values + X * Qx.values + Y * Qy.values)


def weights2d(grid: Grid1D) -> np.ndarray:
    """Full (N+1, N+1) tensor weights ``w_i w_j``."""
    return np.outer(grid.w, grid.w)


def interior_weights(grid: Grid1D) -> np.ndarray:
    return vec(weights2d(grid))


def inner(f: TensorField, g: TensorField) -> float:
    return float(np.sum(weights2d(f.grid) * f.values * g.values))


def norm(f: TensorField) -> float:
    return float(np.sqrt(inner(f, f)))


def x_reversal(grid: Grid1D) -> np.ndarray:
    """Permutation matrix of ``x -> -x`` on interior vectors."""
    n = grid.N - 1
    return np.kron(np.eye(n), np.eye(n)[::-1])


def parity_projectors(grid: Grid1D) -> tuple[np.ndarray, np.ndarray]:
    """``(P_even, P_odd)`` in x on interior vectors."""
    J = x_reversal(grid)
    eye = np.eye(J.shape[0])
    return 0.5 * (eye + J), 0.5 * (eye - J)


def parity_split(v: np.ndarray, grid: Grid1D) -> tuple[np.ndarray, np.ndarray]:
    """Even and odd (in x) parts of an interior vector, without forming matrices."""
    n = grid.N - 1
    m = v.reshape((n, n), order="F")
    flipped = m[::-1, :].ravel(order="F")
    return 0.5 * (v + flipped), 0.5 * (v - flipped)


def write_csv(field: TensorField, path: str | Path) -> None:
    """First row: x nodes; first column: y nodes; body: values.

    Row ``j`` of the body holds ``f(x_i, y_j)`` for all ``i``.
    """
    x = field.grid.x
    table = np.empty((len(x) + 1, len(x) + 1))
    table[0, 0] = np.nan
    table[0, 1:] = x
    table[1:, 0] = x
    table[1:, 1:] = field.values.T
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        for k, row in enumerate(table):
            cells = [repr(float(v)) for v in row]
            if k == 0:
                cells[0] = "y\\x"
            fh.write(",".join(cells) + "\n")


def read_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(x, y, values)`` with ``values[i, j] = f(x_i, y_j)``."""
    rows = Path(path).read_text().strip().splitlines()
    x = np.array([float(v) for v in rows[0].split(",")[1:]])
    body = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    return x, body[:, 0], body[:, 1:].T
