"""Bound states of trapezoidal- and square-well potentials.

The problem is controlled by the nondimensional triplet (v1, v2, lam):
well depths v_s = 2mL²V_s/ħ² and ramp ratio lam = l/L.  The analytic
pipeline solves the transcendental eigenvalue equation built from Airy
junction factors, evaluates normalized piecewise eigenfunctions, and is
cross-checked by an independent eigensolver on a truncated grid.  The
lam → 0 limit recovers the textbook square well in closed form, and the
discontinuity module explores (and disqualifies) square-well
eigenfunctions with prescribed jumps.
"""

__version__ = "0.1.0"

from .airy import (AIRY_CONSTANTS, AiryConstants, AiryQuad, ScaledAiryQuad,
                   airy_eval, airy_eval_scaled, f_factor)
from .eigenfunction import (CoefficientSet, EigenSolution, build_solution,
                            eigenbasis, eval_d2phi, eval_dphi, eval_phi,
                            inner_product, junction_mismatches,
                            solve_coefficients)
from .errors import (BasisError, DegenerateCoefficientError,
                     DegenerateFactorError, DomainError, InfeasibleJumpError,
                     IntegrationError, NormalizationError, OverflowRangeError,
                     TrapwellError, UndefinedRatioError, ValidationError)
from .fdsolver import FdGrid, FdOperator, build_grid, build_operator, count_below, fd_eigenvalues
from .spectrum import (EigenvalueRecord, NegativeBetaDiagnostic, ScanCurves,
                       SpectralFactors, ZoneGeometry, absence_condition,
                       d_circ, d_raw, d_star, find_eigenvalues, h_universal,
                       negative_beta_diagnostic, phase_angle, scan_curves,
                       spectral_factors, theta, zone_geometry)
from .swlimit import (SquareWellSolution, SweepRow, absence_landau,
                      absence_messiah, lambda_sweep, reed_residual,
                      swp_d_form, swp_eigenvalues, swp_exists, swp_phase,
                      swp_solution, swp_theta)
from .discontinuity import (DiscontinuousEigenfunction, ObstructionResult,
                            OverlapResult, build_discontinuous,
                            continuous_counterpart, hermiticity_defect,
                            overlap, piecewise_wronskian,
                            uniqueness_obstruction)
from .wavepacket import (ProjectionResult, TimeState, evolve, project,
                         project_triangular, triangular,
                         triangular_coefficients)
from .well import (DimensionalWell, WellSpec, dimensionalize,
                   nondimensionalize, potential_value, well_from_ev, zone_of)
