"""One-sided rank-1 correction versus its symmetrization.

Both matrices give the same quadratic form, yet only the symmetric one has
the right spectrum.
"""
import numpy as np

from virialspec import (angles, assemble_M, assemble_M_bar, eig_below, make_grid,
                        radial_to_field, solve_radial)
from virialspec.field2d import dx

prof = solve_radial(20.0, 2000)
grid = make_grid(48, 20.0, 4.0)
Q = radial_to_field(prof, grid)
Qx = dx(Q)
refs = [Q.vec(), Qx.vec()]

M, Mbar = assemble_M(Q, grid, Qx), assemble_M_bar(Q, grid, Qx)

rng = np.random.default_rng(0)
u = rng.standard_normal(M.n)
w = np.outer(grid.w[1:-1], grid.w[1:-1]).ravel(order="F")
print(f"<Mu,u> - <Mbar u,u> = {w @ (u * (M @ u)) - w @ (u * (Mbar @ u)):.1e}")

for name, op in [("symmetric", M), ("one-sided", Mbar)]:
    pairs = eig_below(op, 1.0, refs=refs)
    ang = angles(pairs, Q, Qx)
    vals = ", ".join(f"{p.value:+.4f}" for p in pairs)
    print(f"{name:10s} eigenvalues [{vals}]  |<Q,.>| {np.round(ang[0], 4)}  "
          f"|<Qx,.>| {np.round(ang[1], 4)}")
