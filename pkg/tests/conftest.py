import numpy as np
import pytest

from virialspec import field2d, operators
from virialspec.ground_state import shoot_radial, solve_radial
from virialspec.spectral_grid import make_grid


@pytest.fixture(scope="session")
def profile():
    return solve_radial(20.0, 2000, 1e-10)


@pytest.fixture(scope="session")
def oracle():
    return shoot_radial(20.0, 1.0, 4.0, 1e-12)


@pytest.fixture(scope="session")
def grid48():
    return make_grid(48, 20.0, 4.0)


class Fields:
    def __init__(self, profile, grid):
        self.grid = grid
        self.Q = field2d.radial_to_field(profile, grid)
        self.Qx = field2d.dx(self.Q)
        self.Qy = field2d.dy(self.Q)
        self.w = field2d.interior_weights(grid)

    def wnorm(self, v):
        return float(np.sqrt(np.sum(self.w * v * v)))

    def winner(self, u, v):
        return float(np.sum(self.w * u * v))


@pytest.fixture(scope="session")
def fields48(profile, grid48):
    return Fields(profile, grid48)


@pytest.fixture(scope="session")
def ops48(fields48):
    f = fields48
    return {
        "L_op": operators.assemble_L(f.Q),
        "B2": operators.assemble_B2(f.Q, f.Qx),
        "M": operators.assemble_M(f.Q, f.grid, f.Qx),
        "M_bar": operators.assemble_M_bar(f.Q, f.grid, f.Qx),
    }


@pytest.fixture(scope="session")
def pairs48(fields48, ops48):
    from virialspec.eigen import eig_below

    refs = [fields48.Q.vec(), fields48.Qx.vec()]
    return {k: eig_below(op, 1.0, refs=refs) for k, op in ops48.items()}
