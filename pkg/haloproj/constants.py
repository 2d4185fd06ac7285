"""
Shared constants.
"""

# Membership slack for "z in H" and primal feasibility of projections.
EPS_FEAS = 1e-9

# Sign tolerance for dual multipliers.
EPS_DUAL = 1e-10

# x and y closer than this (relative to max(1, |x|)) give the whole space.
EPS_DEGENERATE = 1e-12

# Unit normals are accepted within this tolerance.
UNIT_NORMAL_TOL = 1e-12

# Singular values below RANK_RTOL * (largest) are truncated.
RANK_RTOL = 1e-12

# A new constraint normal whose null-space component is shorter than this
# is treated as linearly dependent on the working set.
DEPENDENCE_TOL = 1e-10

# qp_max_iter = QP_ITER_FACTOR * (number of constraints + dimension)
QP_ITER_FACTOR = 50

# The subgradient step length f/|g| may not exceed 1 / STATIONARY_TOL.
STATIONARY_TOL = 1e-14

# ell2_example refuses coordinates outside [-ELL2_BOX, ELL2_BOX].
ELL2_BOX = 10.0

# Membership slack used by check_quasi_firm / check_quasi_nonexpansive.
CHECK_SLACK = 1e-9

DEFAULT_TOL_RESIDUAL = 1e-8
DEFAULT_DIVERGENCE_RADIUS = 1e6
DEFAULT_MAX_ITER = 10000

# x_n violates its own cut H(x_n, T x_n) by half the residual, and the
# projection accepts violations up to eps_feas, so tol_residual must exceed
# TOL_OVER_EPS_FEAS * eps_feas.
TOL_OVER_EPS_FEAS = 2.0

# Full x_n / y_n vectors are kept in a trace while dim * max_iter stays
# below this many scalars.
TRACE_VECTOR_BUDGET = 10 ** 7

BRUTE_FORCE_MAX_CONSTRAINTS = 20

# Coordinates are written to trace CSVs only up to this dimension.
CSV_MAX_COORDS = 16

# Process exit codes for ``haloproj run``.
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_DIVERGING = 3
EXIT_MAX_ITER = 4
