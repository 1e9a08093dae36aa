import numpy as np
import pytest

from virialspec import field2d, operators
from virialspec.field2d import TensorField
from virialspec.spectral_grid import make_grid


def test_laplacian_dirichlet_mode(grid48):
    X, Y = field2d.coords(grid48)
    u = field2d.vec(np.sin(np.pi * X / 20) * np.sin(np.pi * Y / 20))
    lap = operators.assemble_laplacian(grid48, 1.0, 1.0)
    assert np.max(np.abs(lap @ u + 2 * (np.pi / 20) ** 2 * u)) <= 1e-4


def test_laplacian_direction_convention(grid48):
    # f(x) varies only in x: the x-part must act on it, the y-part must not
    X, Y = field2d.coords(grid48)
    f = np.exp(-X**2 / 4) * np.exp(-Y**2 / 4)
    fx_xx = (X**2 / 4 - 0.5) * f
    Dxx = operators.assemble_laplacian(grid48, 1.0, 0.0)
    assert np.max(np.abs(Dxx @ field2d.vec(f) - field2d.vec(fx_xx))) <= 5e-5


def test_laplacian_zero_coefficients(grid48):
    assert not np.any(operators.assemble_laplacian(grid48, 0.0, 0.0))


def _commutator(A, grid):
    J = field2d.x_reversal(grid)
    return np.max(np.abs(J @ A @ J - A))


def test_laplacian_parity_exact(grid48):
    assert _commutator(operators.assemble_laplacian(grid48, 3.0, 1.0), grid48) == 0.0


@pytest.mark.parametrize("label", ["L_op", "B2", "M", "M_bar"])
def test_operator_parity_commutation(ops48, grid48, label):
    A = ops48[label].matrix
    assert _commutator(A, grid48) <= 1e-12 * np.max(np.abs(A))


@pytest.mark.parametrize("label", ["L_op", "B2", "M"])
def test_operator_shape_and_metadata(ops48, label):
    op = ops48[label]
    assert op.n == 47**2
    assert np.all(np.isfinite(op.matrix))
    assert op.symmetric_in_form
    assert op.ess_min == 1.0


def test_identity_residuals(fields48, ops48):
    f = fields48
    L = ops48["L_op"].matrix
    Q, Q3 = f.Q.vec(), (f.Q**3).vec()
    LQ = field2d.lambda_q(f.Q, f.Qx, f.Qy).vec()
    assert f.wnorm(L @ Q + 2 * Q3) <= 1e-4 * f.wnorm(Q3)
    assert f.wnorm(L @ LQ + 2 * Q) <= 1e-3 * f.wnorm(Q)
    assert f.wnorm(L @ f.Qx.vec()) <= 1e-3 * f.wnorm(f.Qx.vec())
    assert f.wnorm(L @ f.Qy.vec()) <= 1e-3 * f.wnorm(f.Qy.vec())


def _smooth_pair(grid):
    X, Y = field2d.coords(grid)
    u = np.exp(-(X**2 + Y**2) / 4) * (1 + X)
    v = np.exp(-((X - 1) ** 2 + Y**2) / 3) * (1 - 0.5 * Y)
    return field2d.vec(u), field2d.vec(v)


@pytest.mark.parametrize("label", ["L_op", "B2", "M"])
def test_weighted_self_adjoint_smooth(ops48, fields48, label):
    f = fields48
    A = ops48[label].matrix
    u, v = _smooth_pair(f.grid)
    gap = f.winner(A @ u, v) - f.winner(u, A @ v)
    assert abs(gap) <= 1e-8 * np.linalg.norm(A, 2) * f.wnorm(u) * f.wnorm(v)


@pytest.mark.xfail(strict=True, reason="collocation D2 is not symmetric in the CGL inner "
                   "product for unresolved (random) vectors; observed ~5e-5 relative")
def test_weighted_self_adjoint_random(ops48, fields48):
    f = fields48
    A = ops48["M"].matrix
    rng = np.random.default_rng(7)
    u, v = rng.standard_normal(A.shape[0]), rng.standard_normal(A.shape[0])
    gap = f.winner(A @ u, v) - f.winner(u, A @ v)
    assert abs(gap) <= 1e-8 * np.linalg.norm(A, 2) * f.wnorm(u) * f.wnorm(v)


def test_projection_rank_and_kernel(fields48):
    f = fields48
    a, b = operators.virial_factors(f.Q, f.Qx)
    for sa in (True, False):
        P = operators.assemble_projection(a, b, f.grid, self_adjoint=sa).matrix
        s = np.linalg.svd(P, compute_uv=False)
        assert s[2] <= 1e-10 * s[0]
    # u orthogonal (weighted) to both factors is annihilated
    X, Y = field2d.coords(f.grid)
    u = field2d.vec(np.exp(-(X**2 + Y**2)))  # even in x; factors are odd in x
    assert abs(f.winner(u, a.vec())) <= 1e-14 and abs(f.winner(u, b.vec())) <= 1e-12
    P = operators.assemble_projection(a, b, f.grid, self_adjoint=True).matrix
    assert np.max(np.abs(P @ u)) <= 1e-12


def test_projection_formula(fields48):
    f = fields48
    a, b = operators.virial_factors(f.Q, f.Qx)
    X, Y = field2d.coords(f.grid)
    u = field2d.vec(X * np.exp(-(X**2 + Y**2) / 2))
    Pbar = operators.assemble_projection(a, b, f.grid, self_adjoint=False).matrix
    np.testing.assert_allclose(Pbar @ u, b.vec() * f.winner(u, a.vec()), atol=1e-12)
    P = operators.assemble_projection(a, b, f.grid, self_adjoint=True).matrix
    expected = 0.5 * (b.vec() * f.winner(u, a.vec()) + a.vec() * f.winner(u, b.vec()))
    np.testing.assert_allclose(P @ u, expected, atol=1e-12)


def test_projection_grid_mismatch(fields48):
    other = make_grid(32)
    g = TensorField(other, np.ones((33, 33)))
    with pytest.raises(ValueError):
        operators.assemble_projection(fields48.Q, g, fields48.grid)


def test_M_is_B2_plus_2P(ops48, fields48):
    f = fields48
    a, b = operators.virial_factors(f.Q, f.Qx)
    P = operators.assemble_projection(a, b, f.grid, self_adjoint=True).matrix
    np.testing.assert_allclose(ops48["M"].matrix, ops48["B2"].matrix + 2 * P, atol=1e-13)


def test_matrix_dump_roundtrip(tmp_path):
    g = make_grid(8)
    Q = field2d.from_function(g, lambda x, y: np.exp(-(x**2 + y**2)))
    op = operators.assemble_L(Q)
    path = tmp_path / "L.bin"
    operators.dump_matrix(op, path)
    raw = path.read_bytes()
    assert len(raw) == 16 + 8 * op.n**2
    np.testing.assert_array_equal(operators.load_matrix(path), op.matrix)
