"""Discrete eigenpairs below the essential-spectrum cutoff."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sl

from . import field2d
from .operators import DiscreteOperator

RESIDUAL_TOL = 1e-8
IMAG_TOL = 1e-10
ZERO_TOL = 1e-3


class EigenError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: float
    vector: np.ndarray  # interior nodes, ||.||_w = 1
    residual: float
    parity: str  # even_x | odd_x | mixed
    imag: float = 0.0
    near_zero: bool = False


def _parity_bases(grid) -> tuple[np.ndarray, np.ndarray]:
    """Euclidean-orthonormal bases of the x-even and x-odd interior vectors."""
    n = grid.N - 1
    m = n * n
    idx = np.arange(m).reshape((n, n), order="F")
    mirror = idx[::-1, :]
    ev_cols, od_cols = [], []
    for i in range(n):
        for j in range(n):
            k, km = idx[i, j], mirror[i, j]
            if k < km:
                ev_cols.append((k, km))
                od_cols.append((k, km))
            elif k == km:
                ev_cols.append((k, k))
    Ue = np.zeros((m, len(ev_cols)))
    for c, (k, km) in enumerate(ev_cols):
        if k == km:
            Ue[k, c] = 1.0
        else:
            Ue[k, c] = Ue[km, c] = np.sqrt(0.5)
    Uo = np.zeros((m, len(od_cols)))
    for c, (k, km) in enumerate(od_cols):
        Uo[k, c] = np.sqrt(0.5)
        Uo[km, c] = -np.sqrt(0.5)
    return Ue, Uo


def commutes_with_parity(op: DiscreteOperator, tol: float = 1e-12) -> bool:
    A = op.matrix
    n = op.grid.N - 1
    perm = np.arange(n * n).reshape((n, n), order="F")[::-1, :].ravel(order="F")
    JAJ = A[np.ix_(perm, perm)]
    return bool(np.max(np.abs(JAJ - A)) <= tol * np.max(np.abs(A)))


def _w_orthonormalize(V: np.ndarray, w: np.ndarray) -> np.ndarray:
    sw = np.sqrt(w)
    Qm, _ = np.linalg.qr(sw[:, None] * V)
    return Qm / sw[:, None]


def _clusters(values: np.ndarray, tol: float) -> list[list[int]]:
    groups: list[list[int]] = []
    for k in range(len(values)):
        if groups and values[k] - values[groups[-1][-1]] <= tol * (1 + abs(values[k])):
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def _refine(A: np.ndarray, w: np.ndarray, values: np.ndarray, V: np.ndarray,
            rounds: int = 4, sweeps: int = 3) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Block inverse iteration on the raw matrix with Ritz-updated shifts."""
    out_vals, out_vecs, out_imag = [], [], []
    eye = np.eye(A.shape[0])
    for group in _clusters(values, 1e-6):
        sigma = values[group[0]]
        Y = _w_orthonormalize(V[:, group], w)
        for _ in range(rounds):
            shift = sigma - 1e-9 * (1 + abs(sigma))
            lu = sl.lu_factor(A - shift * eye, check_finite=False)
            for _ in range(sweeps):
                Y = _w_orthonormalize(sl.lu_solve(lu, Y, check_finite=False), w)
            H = Y.T @ (w[:, None] * (A @ Y))
            lam, Z = np.linalg.eig(H)
            order = np.argsort(lam.real)
            lam, Z = lam[order], Z[:, order]
            vecs = Y @ Z.real
            R = A @ vecs - vecs * lam.real
            res = np.sqrt(np.sum(w[:, None] * R**2, axis=0))
            if np.all(res <= 1e-10 * (1 + np.abs(lam.real))):
                break
            sigma = float(lam.real.min())
        out_vals.extend(lam.real)
        out_imag.extend(np.abs(lam.imag))
        out_vecs.append(_w_orthonormalize(vecs, w) if len(group) > 1 else vecs)
    return np.array(out_vals), np.hstack(out_vecs), np.array(out_imag)


def _solve_block(A: np.ndarray, w: np.ndarray, symmetric: bool, cutoff: float):
    if symmetric:
        sw = np.sqrt(w)
        S = sw[:, None] * A / sw[None, :]
        S = 0.5 * (S + S.T)
        try:
            vals, Vs = sl.eigh(S, subset_by_value=(-np.inf, cutoff), driver="evr",
                               check_finite=False)
        except sl.LinAlgError as exc:
            raise EigenError(f"symmetric eigensolve failed: {exc}") from exc
        if vals.size == 0:
            return vals, np.zeros((len(w), 0)), vals
        return _refine(A, w, vals, Vs / sw[:, None])
    try:
        lam, V = sl.eig(A, check_finite=False)
    except sl.LinAlgError as exc:
        raise EigenError(f"general eigensolve failed: {exc}") from exc
    keep = np.isfinite(lam) & (lam.real < cutoff)
    lam, V = lam[keep], V[:, keep]
    order = np.argsort(lam.real)
    lam, V = lam[order], V[:, order]
    vecs = V.real if np.all(np.abs(lam.imag) <= IMAG_TOL) else V
    return lam.real, np.real_if_close(vecs), np.abs(lam.imag)


def eig_below(op: DiscreteOperator, cutoff: float | None = None, max_k: int = 20,
              refs: list[np.ndarray] | None = None) -> list[EigenPair]:
    """All eigenpairs of ``op`` strictly below ``cutoff``, ascending.

    Eigenvectors are normalized in the weighted inner product.  When ``refs``
    (interior vectors) is given, each vector's sign is chosen so that its
    largest-magnitude inner product with a reference is nonnegative;
    otherwise its largest-magnitude entry is made positive.
    """
    if cutoff is None:
        cutoff = op.ess_min
    if cutoff > op.ess_min:
        raise ValueError(f"cutoff {cutoff} above essential spectrum {op.ess_min}")
    grid = op.grid
    w = field2d.interior_weights(grid)
    A = op.matrix

    results = []
    if commutes_with_parity(op):
        for U in _parity_bases(grid):
            Ab = U.T @ A @ U
            wb = (U * U).T @ w
            vals, Vb, imag = _solve_block(Ab, wb, op.symmetric_in_form, cutoff)
            results.append((vals, U @ Vb, imag))
    else:
        results.append(_solve_block(A, w, op.symmetric_in_form, cutoff))

    vals = np.concatenate([r[0] for r in results])
    vecs = np.hstack([r[1] for r in results])
    imag = np.concatenate([r[2] for r in results])
    order = np.argsort(vals, kind="stable")[:max_k]

    pairs = []
    for k in order:
        lam, phi = float(vals[k]), vecs[:, k]
        if op.symmetric_in_form and imag[k] > IMAG_TOL:
            raise EigenError(
                f"complex eigenvalue {lam}+{imag[k]}i for a self-adjoint-in-form operator")
        phi = phi / np.sqrt(np.sum(w * np.abs(phi) ** 2))
        phi = _fix_sign(phi, w, refs)
        r = A @ phi - lam * phi
        res = float(np.sqrt(np.sum(w * np.abs(r) ** 2)))
        if op.symmetric_in_form and res > 1e3 * RESIDUAL_TOL * (abs(lam) + 1):
            raise EigenError(f"eigenpair {lam} did not converge (residual {res:.2e}); "
                             "spectrum of the raw matrix is not real")
        pairs.append(EigenPair(lam, phi, res, _parity_of(phi, grid, 1e-8),
                               float(imag[k]), abs(lam) <= ZERO_TOL))
    return pairs


def scale_pairs(pairs: list[EigenPair], factor: float) -> list[EigenPair]:
    """Eigenpairs of ``factor * A`` from those of ``A``."""
    return [EigenPair(factor * p.value, p.vector, abs(factor) * p.residual,
                      p.parity, abs(factor) * p.imag, abs(factor * p.value) <= ZERO_TOL)
            for p in pairs]


def _fix_sign(phi, w, refs):
    if np.iscomplexobj(phi):
        return phi
    if refs:
        ips = [np.sum(w * phi * r) / np.sqrt(np.sum(w * r * r)) for r in refs]
        lead = ips[int(np.argmax(np.abs(ips)))]
    else:
        lead = phi[int(np.argmax(np.abs(phi)))]
    return -phi if lead < 0 else phi


def parity_classify(pair: EigenPair, grid, tol: float = 1e-8) -> str:
    """``even_x`` / ``odd_x`` if the opposite-parity part has w-norm <= tol."""
    return _parity_of(pair.vector, grid, tol)


def _parity_of(vector, grid, tol):
    w = field2d.interior_weights(grid)
    even, odd = field2d.parity_split(vector, grid)
    if np.sqrt(np.sum(w * np.abs(odd) ** 2)) <= tol:
        return "even_x"
    if np.sqrt(np.sum(w * np.abs(even) ** 2)) <= tol:
        return "odd_x"
    return "mixed"
