"""Spectral verification toolkit for the linearized virial operator of the
2D cubic ground state: mapped Chebyshev collocation, dense eigensolves below
the essential spectrum, and angle-lemma coercivity certificates."""

from .certify import (SpectralReport, angle_lemma_bound, angles, certify_coercivity,
                      constrained_rayleigh_min)
from .eigen import EigenPair, eig_below, parity_classify, scale_pairs
from .field2d import TensorField, dx, dy, lambda_q, radial_to_field
from .ground_state import (RadialDiagnostics, RadialProfile, radial_diagnostics,
                           shoot_radial, solve_radial)
from .operators import (DiscreteOperator, assemble_B2, assemble_L, assemble_laplacian,
                        assemble_M, assemble_M_bar, assemble_projection)
from .pipeline import RunConfig, run_pipeline
from .spectral_grid import Grid1D, cgl_grid, make_grid, map_grid, quad_weights

__version__ = "0.1.0"
