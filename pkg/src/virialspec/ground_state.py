"""Radial ground state of the 2D cubic equation.

Solves ``R'' + R'/r - R + R**3 = 0`` on ``[0, 3L/2]`` with ``R'(0) = 0`` and
``R(3L/2) = 0``.  Two independent routes are provided:

* :func:`solve_radial` -- spectral renormalization (Petviashvili iteration)
  on a uniform finite-difference grid;
* :func:`shoot_radial` -- bisection on the central amplitude ``R(0)`` with an
  adaptive high-order Runge-Kutta integrator.

The profile cache format is a small text file, see :func:`save_profile`.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import integrate, special
from scipy.linalg import solve_banded


class GroundStateError(RuntimeError):
    """Raised when a radial solve fails to converge or is ill-posed."""


@dataclass(frozen=True)
class RadialProfile:
    r_max: float
    nodes: np.ndarray
    values: np.ndarray
    deriv: np.ndarray
    method: str
    iterations: int
    residual: float

    @property
    def L(self) -> float:
        return 2.0 * self.r_max / 3.0


@dataclass(frozen=True)
class RadialDiagnostics:
    mass: float
    grad_sq: float
    l4_4: float
    energy: float


# Fourth-order central stencils; the grid is extended by even reflection at
# r = 0 and odd reflection at r = r_max.
_D2_STENCIL = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_D1_STENCIL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def _fd_matrices(n: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Dense (n, n) first and second derivative matrices on the unknowns
    ``R_0 .. R_{n-1}`` (``R_n = 0`` eliminated)."""
    D1 = np.zeros((n, n))
    D2 = np.zeros((n, n))
    for i in range(n):
        for k, off in enumerate(range(-2, 3)):
            j = i + off
            sign = 1.0
            if j < 0:
                j = -j
            elif j > n:
                # odd reflection about the Dirichlet node
                j = 2 * n - j
                sign = -1.0
            if j == n:
                continue
            D1[i, j] += sign * _D1_STENCIL[k] / h
            D2[i, j] += sign * _D2_STENCIL[k] / h**2
    return D1, D2


def _radial_operator(n: int, h: float):
    """``K = -Delta_r + 1`` as (banded storage, dense matrix) plus dense D1."""
    D1, D2 = _fd_matrices(n, h)
    r = h * np.arange(n)
    lap = D2.copy()
    lap[1:] += D1[1:] / r[1:, None]
    # axis: R'/r -> R''(0)
    lap[0] += D2[0]
    K = -lap + np.eye(n)
    bands = np.zeros((5, n))
    for d in range(-2, 3):
        diag = np.diagonal(K, offset=d)
        if d >= 0:
            bands[2 - d, d:] = diag
        else:
            bands[2 - d, :d] = diag
    return bands, K, D1


def _radial_quad(r: np.ndarray, f: np.ndarray) -> float:
    return float(integrate.simpson(f * r, x=r))


def solve_radial(L: float = 20.0, n_nodes: int = 2000, tol: float = 1e-10,
                 max_iter: int = 500) -> RadialProfile:
    """Petviashvili fixed point ``R <- m**1.5 * K^{-1} R**3`` with
    ``m = <K R, R> / <R**3, R>`` and ``K = -Delta_r + 1``.

    ``n_nodes`` is the number of grid intervals on ``[0, 3L/2]``.
    """
    if L < 10 or n_nodes < 200 or tol <= 0:
        raise ValueError("need L >= 10, n_nodes >= 200, tol > 0")
    r_max = 1.5 * L
    h = r_max / n_nodes
    r_all = h * np.arange(n_nodes + 1)
    r = r_all[:-1]
    bands, K, D1 = _radial_operator(n_nodes, h)

    R = 2.2 * np.exp(-r**2)
    residual = np.inf
    for it in range(1, max_iter + 1):
        KR = K @ R
        num = _radial_quad(r, KR * R)
        den = _radial_quad(r, R**4)
        if den <= 0 or not np.isfinite(den):
            raise GroundStateError("iteration collapsed to the zero solution")
        m = num / den
        if m < 1e-8:
            raise GroundStateError("normalization factor drifted to zero")
        R = m**1.5 * solve_banded((2, 2), bands, R**3)
        residual = float(np.max(np.abs(K @ R - R**3)))
        if residual <= tol:
            break
    else:
        raise GroundStateError(
            f"renormalization did not converge in {max_iter} iterations "
            f"(residual {residual:.3e})")

    values = np.append(R, 0.0)
    deriv = np.append(D1 @ R, 0.0)
    deriv[0] = 0.0
    # one-sided fourth-order derivative at the outer node
    deriv[-1] = (25 * values[-1] - 48 * values[-2] + 36 * values[-3]
                 - 16 * values[-4] + 3 * values[-5]) / (12 * h)
    return RadialProfile(r_max, r_all, values, deriv, "renormalization", it, residual)


def _rhs(r, y):
    R, dR = y
    if r == 0.0:
        return [dR, 0.5 * (R - R**3)]
    return [dR, R - R**3 - dR / r]


def _crosses_zero(r, y):
    return y[0]


_crosses_zero.terminal = True


def _turns_up(r, y):
    return y[1] if r > 0 else -1.0


_turns_up.terminal = True
_turns_up.direction = 1


def _integrate(amp: float, r_end: float):
    return integrate.solve_ivp(_rhs, (0.0, r_end), [amp, 0.0], method="DOP853",
                               rtol=1e-13, atol=1e-15, dense_output=True,
                               events=(_crosses_zero, _turns_up))


def _overshoots(amp: float, r_end: float) -> bool:
    sol = _integrate(amp, r_end)
    if sol.t_events[0].size:
        return True
    if sol.t_events[1].size:
        return False
    # ran to r_end without deciding; treat the sign of R'' tendency
    return bool(sol.y[1, -1] < 0 and sol.y[0, -1] < 0)


def shoot_radial(L: float = 20.0, amp_lo: float = 1.0, amp_hi: float = 4.0,
                 tol: float = 1e-12, n_nodes: int = 2000) -> RadialProfile:
    """Shooting oracle: bisect on ``R(0)`` between undershoot and overshoot.

    Beyond the radius where the bracket trajectories separate, the profile
    is continued with the linear decaying tail ``K_0(r)`` corrected to vanish
    at ``3L/2``.  Output is sampled on the same uniform grid as
    :func:`solve_radial`.
    """
    r_max = 1.5 * L
    r_probe = r_max
    lo_over = _overshoots(amp_lo, r_probe)
    hi_over = _overshoots(amp_hi, r_probe)
    if lo_over or not hi_over:
        raise GroundStateError(
            f"bracket ({amp_lo}, {amp_hi}) does not straddle the ground state")
    lo, hi = amp_lo, amp_hi
    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _overshoots(mid, r_probe):
            hi = mid
        else:
            lo = mid
        it += 1

    r = np.linspace(0.0, r_max, n_nodes + 1)
    sol_lo = _integrate(lo, r_max)
    sol_hi = _integrate(hi, r_max)
    r_sep = min(sol_lo.t[-1], sol_hi.t[-1])
    # last radius where the two bracketing trajectories still agree closely
    probe = r[r < r_sep]
    gap = np.abs(sol_lo.sol(probe)[0] - sol_hi.sol(probe)[0])
    ok = probe[gap <= 1e-9 * np.maximum(sol_lo.sol(probe)[0], 1e-3 * lo)]
    r_match = float(min(ok[-1] if ok.size else probe[-1], 0.5 * L))

    amp = 0.5 * (lo + hi)
    sol = _integrate(amp, r_match)
    values = np.empty_like(r)
    deriv = np.empty_like(r)
    inner = r <= r_match
    y = sol.sol(r[inner])
    values[inner], deriv[inner] = y
    R_m = float(sol.sol(r_match)[0])

    def tail(s):
        # K_0(s) - K_0(r_max) I_0(s) / I_0(r_max), exponentially scaled
        c = special.k0e(r_max) / special.i0e(r_max) * np.exp(-2 * r_max)
        return special.k0e(s) * np.exp(-s) - c * special.i0e(s) * np.exp(s)

    def dtail(s):
        c = special.k0e(r_max) / special.i0e(r_max) * np.exp(-2 * r_max)
        return -special.k1e(s) * np.exp(-s) - c * special.i1e(s) * np.exp(s)

    scale = R_m / tail(r_match)
    outer = ~inner
    values[outer] = scale * tail(r[outer])
    deriv[outer] = scale * dtail(r[outer])
    values[-1] = 0.0
    residual = _ode_residual(r, values)
    return RadialProfile(r_max, r, values, deriv, "shooting", it, residual)


def _ode_residual(r: np.ndarray, values: np.ndarray) -> float:
    """Max-norm residual of the fourth-order discretized equation."""
    n = len(r) - 1
    _, K, _ = _radial_operator(n, r[1] - r[0])
    R = values[:-1]
    return float(np.max(np.abs(K @ R - R**3)))


def radial_diagnostics(profile: RadialProfile) -> RadialDiagnostics:
    """Mass, Dirichlet energy, L4 norm and energy of ``Q(x, y) = R(|(x, y)|)``."""
    r, R, dR = profile.nodes, profile.values, profile.deriv
    mass = 2 * np.pi * _radial_quad(r, R**2)
    grad_sq = 2 * np.pi * _radial_quad(r, dR**2)
    l4_4 = 2 * np.pi * _radial_quad(r, R**4)
    return RadialDiagnostics(mass, grad_sq, l4_4, 0.5 * grad_sq - 0.25 * l4_4)


def save_profile(profile: RadialProfile, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = len(profile.nodes) - 1
    header = (f"# L={profile.L!r} N={n} method={profile.method} "
              f"residual={profile.residual!r}\n"
              f"# iterations={profile.iterations}\n")
    with path.open("w") as fh:
        fh.write(header)
        for row in zip(profile.nodes, profile.values, profile.deriv):
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_profile(path: str | Path) -> RadialProfile:
    meta = {}
    rows = []
    with Path(path).open() as fh:
        for line in fh:
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    meta[key] = val
            elif line.strip():
                rows.append([float(v) for v in line.split()])
    data = np.asarray(rows)
    L = float(meta["L"])
    return RadialProfile(1.5 * L, data[:, 0], data[:, 1], data[:, 2],
                         meta["method"], int(meta.get("iterations", 0)),
                         float(meta["residual"]))
