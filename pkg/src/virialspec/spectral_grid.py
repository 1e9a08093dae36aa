"""Mapped Chebyshev-Gauss-Lobatto grids on ``[-L, L]``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Collocation grid ``x = L sinh(a xi) / sinh(a)`` over CGL nodes ``xi``.

    Nodes are stored in descending order (``x[0] = L``, ``x[N] = -L``).
    ``D1``/``D2`` act on nodal values and return nodal derivatives in ``x``.
    """

    N: int
    xi: np.ndarray
    x: np.ndarray
    L: float
    a: float
    x_xi: np.ndarray
    x_xixi: np.ndarray
    w: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    D1_ref: np.ndarray
    D2_ref: np.ndarray

    @property
    def interior(self) -> slice:
        return slice(1, self.N)


def cgl_grid(N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Chebyshev nodes ``cos(i pi / N)`` and reference differentiation matrices."""
    if N < 4 or N % 2:
        raise ValueError(f"N must be even and >= 4, got {N}")
    i = np.arange(N + 1)
    # sin form of cos(i pi / N): exactly odd under i -> N - i
    xi = np.sin(np.pi * (N - 2 * i) / (2 * N))
    c = np.ones(N + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** i
    dX = xi[:, None] - xi[None, :]
    D1 = np.outer(c, 1.0 / c) / (dX + np.eye(N + 1))
    D1 -= np.diag(D1.sum(axis=1))
    D2 = D1 @ D1
    np.fill_diagonal(D2, 0.0)
    D2 -= np.diag(D2.sum(axis=1))
    return xi, _antisym(D1), _centrosym(D2)


def _antisym(D: np.ndarray) -> np.ndarray:
    """Enforce ``R D R = -D`` for the node reversal ``R``."""
    return 0.5 * (D - D[::-1, ::-1])


def _centrosym(D: np.ndarray) -> np.ndarray:
    return 0.5 * (D + D[::-1, ::-1])


def map_grid(xi: np.ndarray, L: float = 20.0, a: float = 4.0,
             D1_ref: np.ndarray | None = None,
             D2_ref: np.ndarray | None = None) -> Grid1D:
    if L <= 0 or a <= 0:
        raise ValueError("L and a must be positive")
    N = len(xi) - 1
    if D1_ref is None or D2_ref is None:
        _, D1_ref, D2_ref = cgl_grid(N)
    s = np.sinh(a)
    x = L * np.sinh(a * xi) / s
    x[0], x[-1] = L, -L
    x_xi = a * L * np.cosh(a * xi) / s
    x_xixi = a * a * L * np.sinh(a * xi) / s

    inv = 1.0 / x_xi
    D1 = _antisym(inv[:, None] * D1_ref)
    D2 = (inv**2)[:, None] * D2_ref + ((D1_ref @ inv) * inv)[:, None] * D1_ref
    D2 = _centrosym(D2)

    w = cgl_weights(N) * x_xi
    return Grid1D(N, xi, x, float(L), float(a), x_xi, x_xixi, w, D1, D2,
                  D1_ref, D2_ref)


def cgl_weights(N: int) -> np.ndarray:
    """Reference weights ``pi/N * sqrt(1 - xi**2)`` with halved endpoints."""
    xi = np.sin(np.pi * (N - 2 * np.arange(N + 1)) / (2 * N))
    w = np.pi / N * np.sqrt(np.clip(1.0 - xi**2, 0.0, None))
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def quad_weights(grid: Grid1D) -> np.ndarray:
    """Weights with ``sum(w * f(x)) ~ integral of f over [-L, L]``."""
    return cgl_weights(grid.N) * grid.x_xi


def make_grid(N: int = 48, L: float = 20.0, a: float = 4.0) -> Grid1D:
    xi, D1_ref, D2_ref = cgl_grid(N)
    return map_grid(xi, L, a, D1_ref, D2_ref)
