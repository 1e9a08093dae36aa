"""Coercivity of B + P on the orthogonal complement of {Q, Q_x}.

Each parity class holds one negative eigenvalue.  Its eigenfunction makes
an angle beta with the constraint function of that class, and
lambda_perp - (lambda_perp - lambda1) sin^2(beta) bounds the quadratic form.
"""
from virialspec import (angle_lemma_bound, angles, assemble_M, certify_coercivity,
                        eig_below, make_grid, radial_to_field, scale_pairs, solve_radial)
from virialspec.field2d import dx

prof = solve_radial(20.0, 2000)
grid = make_grid(48, 20.0, 4.0)
Q = radial_to_field(prof, grid)
Qx = dx(Q)

# eigenpairs of B + P are those of 2(B + P) with halved values
pairs = scale_pairs(eig_below(assemble_M(Q, grid, Qx), 1.0, refs=[Q.vec(), Qx.vec()]), 0.5)
ang = angles(pairs, Q, Qx)
print("            phi1      phi2")
print(f"|<Q,.>|   {ang[0, 0]:.4f}    {ang[0, 1]:.4f}")
print(f"|<Qx,.>|  {ang[1, 0]:.4f}    {ang[1, 1]:.4f}")

rep = certify_coercivity(Q, Qx, pairs, cutoff=0.5, operator="B+P")
print(f"\nodd  bound {rep.bounds['odd']:.4f}")
print(f"even bound {rep.bounds['even']:.4f}")
print(f"verdict: {rep.verdict}")

# How close to failure?  The odd bound vanishes when cos(beta) drops to
lam1 = pairs[0].value
cos_crit = (-lam1 / (0.5 - lam1)) ** 0.5
print(f"\nodd bound hits zero at cos(beta) = {cos_crit:.4f} "
      f"(actual {ang[1, 0]:.4f}); at that angle: {angle_lemma_bound(lam1, 0.5, cos_crit):.1e}")
