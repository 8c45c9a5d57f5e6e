"""Numerical tolerances, collected in one place.

Every tolerance below is read at call time, so a test or an application can
override any of them by assigning to the module attribute (single knob for
reproducibility experiments).  Values are the package defaults quoted in the
per-operation contracts.
"""

# dense kernel
HERMITICITY_TOL = 1e-8          # ||A - A^dag||_max precondition
UNITARITY_TOL = 1e-8            # ||U^dag U - 1||_max precondition
EIG_RECONSTRUCTION_TOL = 1e-9   # V L V^dag vs A, relative max-norm
UNITARY_RECONSTRUCTION_TOL = 1e-8
PHASE_CLUSTER_GAP = 1e-7        # radians; eigenphase clusters re-orthonormalized

# discrimination data model
PSD_TOL = 1e-9                  # min eigenvalue >= -PSD_TOL
POVM_HERMITICITY_TOL = 1e-8
COMPLETENESS_TOL = 1e-8         # ||sum E - 1||_max
TRACE_TOL = 1e-10               # |tr rho - 1|
PRIOR_SUM_TOL = 1e-12
MARGIN_SLACK = 1e-9             # P_x <= m + MARGIN_SLACK counts as satisfied

# two-unitary geometry
HULL_COLLINEAR_TOL = 1e-12
HULL_BOUNDARY_BAND = 1e-9       # |largest gap - pi| band treated as boundary
SMIN_CERT_TOL = 1e-10
MC_PRIME_DENOM_GUARD = 1e-12

# group machinery
FACTOR_MODULUS_TOL = 1e-10
REP_PRODUCT_TOL = 1e-8
PROPORTIONALITY_TOL = 1e-8
EXHAUSTIVE_GROUP_LIMIT = 64     # full triple/pair checks up to this order
SAMPLED_CHECKS = 10_000
PAIR_CHECK_FLOP_BUDGET = 2e8    # caps matrix product checks on big spaces
CLOSURE_CAP = 10_000
REP_STORAGE_CAP = 8_000_000     # max |G| * D^2 entries for built matrices

# isotypic decomposition
CLUSTER_REL_GAP = 1e-6          # eigenvalue clustering of the commutant draw
CHAR_INT_TOL = 1e-2             # character inner products vs nearest integer
DECOMPOSE_RETRIES = 5
INTERTWINER_TOL = 1e-6
TRANSFORM_TOL = 1e-7            # |U_g basis - basis D(g)|
ORTHOGONALITY_TOL = 1e-6        # projective Schur orthogonality residual
BASIS_UNITARITY_TOL = 1e-8
RECONSTRUCTION_TOL = 1e-6

# group discrimination
WITNESS_TOL = 1e-8
KEY_INEQUALITY_TOL = 1e-8
COVARIANCE_TOL = 1e-8

# catalog
PHASE_SHIFT_DIM_CAP = 4096
COLOR_CODING_DIM_CAP = 4096
PARTITION_N_CAP = 60
