"""Discrete spectrum of the virial operator 2(B + P) below its continuum.

The rank-2 term couples the scaling direction to the translation mode; we
look at the operator with and without it.
"""

from virialspec import (assemble_B2, assemble_L, assemble_M, eig_below, make_grid,
                        radial_to_field, solve_radial)
from virialspec.field2d import dx, dy

prof = solve_radial(20.0, 2000)
grid = make_grid(48, 20.0, 4.0)
Q = radial_to_field(prof, grid)
Qx, Qy = dx(Q), dy(Q)
refs = [Q.vec(), Qx.vec()]

for name, op in [("L", assemble_L(Q)), ("2B", assemble_B2(Q, Qx)),
                 ("2(B+P)", assemble_M(Q, grid, Qx))]:
    pairs = eig_below(op, 1.0, refs=refs)
    print(f"{name:7s} matrix {op.n}x{op.n}")
    for p in pairs:
        print(f"    {p.value:+.6f}  {p.parity:6s}  residual {p.residual:.1e}")

# Resolution study for the virial operator
print("\nN    lambda1     lambda2")
for N in (32, 40, 48, 56):
    g = make_grid(N, 20.0, 4.0)
    q = radial_to_field(prof, g)
    vals = [p.value for p in eig_below(assemble_M(q), 1.0)]
    print(f"{N:<4d} {vals[0]:+.6f}  {vals[1]:+.6f}")
