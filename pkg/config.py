"""
Configuration settings for the Marcum Q log-concavity toolkit.
Numeric constants are fixed; only log verbosity and harness parallelism read the environment.
"""

import os

# Evaluation tolerances
DEFAULT_TOL = 1e-10
MIN_TOL = 1e-14
MAX_TOL = 1e-4

# Bessel evaluation
SERIES_SWITCH = 30.0  # series / scaled quotient up to here, beyond: quadrature and continued fraction
SERIES_REL_CUTOFF = 1e-17
SERIES_MAX_TERMS = 500
SMALL_T = 1e-8  # leading-order limits below this
CF_REL_TOL = 1e-15
CF_BASE_ITERATIONS = 500
QUAD_LIMIT = 200
QUAD_EPSREL = 1e-13
QUAD_RETRY_EPSREL = 1e-10  # second attempt when QUADPACK reports roundoff
BESSEL_WINDOW = 60.0  # e^{t(s-1)} is negligible once t(1-s) exceeds this plus 2*order

# Marcum Q evaluation
QUADRATURE_CUTOFF = 50.0  # t_max = max(a, b) + 40 + 10
POISSON_AUTO_MAX_LAMBDA = 5.0e3
POISSON_MAX_TERMS = 200000
POISSON_INITIAL_HALF_WIDTH = 16

# Concavity diagnostics
SHAPE_MIN_POINTS = 64
SHAPE_GRID_POINTS = 512
SHAPE_T_MIN = 1e-3
SHAPE_CURVATURE_SLACK = 1e-6
SCAN_MIN_POINTS = 100
SCAN_XTOL = 1e-12

# Critical order
PUBLISHED_NU0 = 0.78449776
PUBLISHED_NU0_GATE = 5e-8
NU0_MIN_TOL = 1e-13
NU0_SECANT_WIDTH = 1e-3  # bisect until the bracket is this narrow, then secant

# Verification harness
DEFAULT_NU_GRID = [0.3, 0.5, 0.6, 0.9, 1.0, 1.5, 2.0, 3.0, 7.0]  # the solved nu_0 is added by the harness
DEFAULT_A_GRID = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0]
DEFAULT_B_POINTS = 400
BASE_SLACK = 1e-9
TAIL_FLOOR = 1e-300
MONOTONE_SLACK = 1e-12
SMALL_B_RELATIVE_GATE = 0.02
SMALL_B_NU_GRID = [0.3, 0.5, 1.0, 2.0]
SMALL_B_GRID = (0.2, 1e-3, 40)  # geometric, decreasing toward 0
CURVATURE_SLACK = 1e-10
TP2_T1, TP2_T2, TP2_POINTS = 1.0, 2.0, 200
B_RANGE_PAD = 8.0  # default b-grid per cell is [0, a + pad]

# Squared parameterization scans (noncentrality and quantile before square roots)
FR_B_AXIS = (0.0, 40.0, 400)
FR_NU_AXIS = (0.2, 5.0, 97)
FR_A_AXIS = (0.0, 20.0, 201)
FR_FIXED_B = [0.5, 1.0, 3.0, 8.0]

# Parallelism for run_suite and per-cell work
HARNESS_WORKERS = int(os.getenv('MARCUM_WORKERS', "4"))

# Output
CSV_DIGITS = 17
PLAIN_DIGITS = 8

# Logging Configuration
LOG_LEVEL = os.getenv('MARCUM_LOG_LEVEL', "WARNING")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
