"""The sinh-mapped Chebyshev grid on [-L, L].

The map pulls nodes towards the origin, where the ground state varies.
Chebyshev clustering still keeps the last few nodes close to the wall.
"""
import numpy as np

from virialspec import make_grid

g = make_grid(48, L=20.0, a=4.0)
# CGL nodes run from x = L down to x = -L
spacing = np.abs(np.diff(g.x))
print(f"{g.N + 1} nodes, spacing {spacing[0]:.3f} at the edge, "
      f"{spacing[g.N // 2]:.3f} at the centre")
k = np.argmax(spacing)
print(f"coarsest gap {spacing[k]:.3f} near |x| = {abs(g.x[k]):.1f}")
print(f"dx/dxi at 0: {g.x_xi[g.N // 2]:.5f}")

# Spectral differentiation of a smooth decaying function
f = np.exp(-g.x**2 / 4)
err1 = np.max(np.abs(g.D1 @ f + g.x / 2 * f))
err2 = np.max(np.abs(g.D2 @ f - (g.x**2 / 4 - 0.5) * f))
print(f"derivative errors on exp(-x^2/4): D1 {err1:.1e}, D2 {err2:.1e}")

# Quadrature: Gaussian mass
print(f"sum w exp(-x^2) = {g.w @ np.exp(-g.x**2):.12f}  (sqrt(pi) = {np.sqrt(np.pi):.12f})")

# Compare a few stretching parameters
for a in (2.0, 4.0, 5.0):
    ga = make_grid(48, 20.0, a)
    inside = np.sum(np.abs(ga.x) < 5)
    print(f"a = {a}: {inside} of 49 nodes in |x| < 5")
