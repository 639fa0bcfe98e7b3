import math

VERSION = "0.1.0"

# numerics
HERMITIAN_TOL = 1e-12
EIGEN_TOL = 1e-10
SVD_TOL = 1e-10
AGM_TOL = 1e-15

# free fermions
QUAD_TOL = 1e-10
QUAD_LIMIT = 400
IMAG_CHECK_MAX_D = 4
SINGULAR_LAMBDA = 1e-14
NU_CLAMP_TOL = 1e-9
NU_FAIL_TOL = 1e-6
SECTOR_TIE_TOL = 1e-10
DENSE_MAX_N = 14
DENSE_EIGH_MAX_DIM = 4096 # above this the oracle switches to eigsh

# bethe
BETHE_RESIDUAL = 1e-5
BETHE_POLISH = 1e-12
BETHE_RELAXATION = 0.5
BETHE_MAX_ITER = 20000
BETHE_STAGNATION = 200 # iterations without improvement before restarting
BETHE_RESTARTS = 8
BETHE_MAX_R = 9
BETHE_MAX_N = 18
HOMOTOPY_STEPS = 20

# lmg
LMG_MAX_N = 5000
LMG_DENSE_MAX_N = 12
LMG_TIE_TOL = 1e-10
# differential entropy constant of the gaussian limit, (1/2)log2(pi*e/2)
LMG_GAUSSIAN_OFFSET = 0.5 * math.log2(math.pi * math.e / 2)

# entanglement
SCHMIDT_CUTOFF = 1e-12
NORM_TOL = 1e-8
PROB_TOL = 1e-10
MAJORIZATION_TOL = 1e-12
WEIGHT_TOL = 1e-10
TRUNCATION_MAX_M = 16

# mpsrg
CANONICAL_TOL = 1e-10
RG_SVD_CUTOFF = 1e-12
FIXED_POINT_TOL = 1e-8
DENSE_BLOCK_MAX_SITES = 6

# cli
CSV_DIGITS = 17
DEFAULT_BLOCK = 100
DEFAULT_XY_GRID = {"gamma": (0.0, 1.0, 30), "lambda": (0.0, 1.5, 30)}
DEFAULT_SCALING_L = [8, 16, 32, 64, 128]
DEFAULT_XXZ_N = 12
DEFAULT_LMG_N = 500
DEFAULT_MODES = 8
DEFAULT_RG_STEPS = 6
SVG_HASHSALT = "spinlab"
DEFAULT_FORMAT = "csv"
DEFAULT_LMG_GRID = {"gamma": (0.0, 1.0, 5), "h": (0.0, 2.0, 21)}
# block sizes of the critical size law, as fractions of N
LMG_SIZE_FRACTIONS = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5)
DEFAULT_RG_PATH = (1.05, 1.5, 11)
DEFAULT_MPS_N = 10
DEFAULT_MPS_BLOCKS = (1, 2, 3, 4)

# law tolerances used by --check
SLOPE_TOL = 0.01
XX_OFFSET_TOL = 0.02
XY_OFFSET_TOL = 0.05
SATURATION_SLOPE = 0.01
LMG_APPROACH_TOL = 0.03
LMG_SIZE_TOL = 0.05
LMG_ANISOTROPY_TOL = 0.05
LMG_CLOSED_FORM_TOL = 0.05
ENERGY_RESIDUAL_TOL = 1e-5
SYMMETRY_TOL = 1e-9
