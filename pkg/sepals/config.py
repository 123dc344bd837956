import os

LOG_LEVEL = os.getenv("SEPALS_LOG_LEVEL", "INFO").upper()
JOBS = int(os.getenv("SEPALS_JOBS", "1"))
SEED = int(os.getenv("SEPALS_SEED", "0"))

# Simulation design defaults
N_SAMPLES = 500
DIMENSION = 30
GAMMA_Y = 0.2
PARETO_SCALE = 2.0
LINK_EXPONENT = 1.0
CLAYTON_THETA = 0.0
SNR = 10.0
THETA_N = 1.0

# Grids of the simulation study
STUDY_KENDALL_TAUS = (-0.8, -0.2, 0.2, 0.8)
STUDY_KAPPA0_GRID = (0.0, 1e-4, 3e-3, 1e-2)
STUDY_LAMBDA_GRID = (0.0, 1e-4, 5e-4, 1e-3)
STUDY_LINK_EXPONENTS = (1.0, 0.5, 0.25)
STUDY_DIMENSIONS = (30, 300)
STUDY_K_RANGE = (1, 100)

# A sweep cell with a larger share of failed fits is reported
FAILURE_FLAG_RATE = 0.10

UNIT_NORM_TOL = 1e-12
DEGENERATE_NORM = 1e-14
