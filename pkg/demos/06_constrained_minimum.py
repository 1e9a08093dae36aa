"""Positivity of the linearized operator away from its kernel and Q^3.

The constant C1 in <f, f> <= C1 <Lf, f> is the reciprocal of the
constrained Rayleigh minimum.
"""
from virialspec import (assemble_L, constrained_rayleigh_min, make_grid, radial_to_field,
                        solve_radial)
from virialspec.field2d import dx, dy

prof = solve_radial(20.0, 2000)

for N in (32, 48, 64):
    grid = make_grid(N, 20.0, 4.0)
    Q = radial_to_field(prof, grid)
    L = assemble_L(Q)
    Qx, Qy = dx(Q), dy(Q)
    steps = [("none", []), ("Q^3", [Q**3]), ("Q^3, Qx", [Q**3, Qx]),
             ("Q^3, Qx, Qy", [Q**3, Qx, Qy])]
    line = "  ".join(f"{name}: {constrained_rayleigh_min(L, c):+.6f}" for name, c in steps)
    print(f"N={N}  {line}")

mu = constrained_rayleigh_min(L, [Q**3, Qx, Qy])
print(f"\nC1 ~ {1 / mu:.5f}")
