import numpy as np
import pytest

from virialspec.ground_state import (GroundStateError, load_profile, radial_diagnostics,
                                     save_profile, shoot_radial, solve_radial)

# R(0) of the ground state, frozen from shoot_radial(20, 1, 4, 1e-12)
# (bisection + DOP853, independent of the finite-difference solver).
R0_ORACLE = 2.2062009
# 2*pi*int R^2 r dr of the oracle profile (Simpson on 2001 nodes).
MASS_ORACLE = 11.700897


def test_oracle_frozen_values(oracle):
    assert oracle.values[0] == pytest.approx(R0_ORACLE, abs=1e-6)
    assert radial_diagnostics(oracle).mass == pytest.approx(MASS_ORACLE, abs=1e-5)


def test_solve_radial_amplitude(profile):
    assert profile.method == "renormalization"
    assert profile.values[0] == pytest.approx(2.2062, abs=5e-5)
    assert profile.values[0] == pytest.approx(R0_ORACLE, abs=1e-6)


def test_solve_radial_boundary_conditions(profile):
    assert profile.deriv[0] == 0.0
    assert profile.values[-1] == 0.0
    assert profile.residual <= 1e-10
    assert profile.nodes[0] == 0.0
    assert np.all(np.diff(profile.nodes) > 0)


def test_tail_decay(profile, oracle):
    for p in (profile, oracle):
        i15 = np.searchsorted(p.nodes, 15.0)
        assert p.values[i15] / p.values[0] < np.exp(-7)
        tail = p.nodes >= 5
        assert np.all(p.values[tail] <= p.values[0] * np.exp(-p.nodes[tail] / 2))


def test_cross_validation(profile, oracle):
    assert np.array_equal(profile.nodes, oracle.nodes)
    inner = profile.nodes <= 20.0
    assert np.max(np.abs(profile.values - oracle.values)[inner]) <= 1e-6


def test_monotone_and_positive(profile, oracle):
    for p in (profile, oracle):
        half = (p.nodes > 0) & (p.nodes < 15.0)
        assert np.all(p.deriv[half] < 0)
        assert np.all(p.values[p.nodes <= 15.0] > 0)
        assert np.all(np.diff(p.values[p.nodes <= 15.0]) < 0)


def test_residual_mid_grid(profile):
    # substitute R into the ODE at interior nodes away from the axis
    r, R, dR = profile.nodes, profile.values, profile.deriv
    h = r[1] - r[0]
    mid = slice(len(r) // 4, len(r) // 2)
    d2 = (R[2:] - 2 * R[1:-1] + R[:-2]) / h**2
    res = d2 + dR[1:-1] / r[1:-1] - R[1:-1] + R[1:-1] ** 3
    # second-difference check is itself O(h^2) accurate
    assert np.max(np.abs(res[mid])) <= 1e-6


def test_bracket_not_straddling():
    with pytest.raises(GroundStateError):
        shoot_radial(20.0, 3.0, 4.0, 1e-12)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        solve_radial(5.0, 2000, 1e-10)
    with pytest.raises(ValueError):
        solve_radial(20.0, 100, 1e-10)
    with pytest.raises(ValueError):
        solve_radial(20.0, 2000, 0.0)


def test_non_convergence():
    with pytest.raises(GroundStateError):
        solve_radial(20.0, 2000, 1e-10, max_iter=3)


@pytest.mark.parametrize("which", ["profile", "oracle"])
def test_diagnostics_identities(which, request):
    d = radial_diagnostics(request.getfixturevalue(which))
    assert abs(d.energy) <= 1e-5 * d.mass
    assert abs(d.mass - d.grad_sq) <= 1e-5 * d.mass
    assert abs(d.l4_4 - 2 * d.mass) <= 1e-5 * d.mass
    assert d.mass == pytest.approx(11.7009, abs=1e-3)


def test_cache_roundtrip(profile, tmp_path):
    path = tmp_path / "prof.txt"
    save_profile(profile, path)
    head = path.read_text().splitlines()[0]
    assert head.startswith("# L=20.0 N=2000 method=renormalization residual=")
    back = load_profile(path)
    assert back.method == profile.method
    assert back.L == pytest.approx(20.0)
    np.testing.assert_array_equal(back.values, profile.values)
    np.testing.assert_array_equal(back.deriv, profile.deriv)
    np.testing.assert_array_equal(back.nodes, profile.nodes)
