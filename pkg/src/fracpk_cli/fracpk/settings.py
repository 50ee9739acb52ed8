"""Global settings for fracpk-cli."""

import os
from pathlib import Path

import psutil


HOME_PATH = Path(os.environ.get("FRACPK_HOME", str(Path.home())))
CURRENT_WORKING_DIRECTORY = Path.cwd()
DEFAULT_OUTPUT_DIRECTORY = CURRENT_WORKING_DIRECTORY / "fracpk-output"

# Pool size for benchmark cells and population patients
WORKERS = int(
    os.environ.get("FRACPK_WORKERS", str(psutil.cpu_count(logical=False) or 1))
)

# Amiodarone model, amounts in ng and time in days
NOMINAL_ALPHA = 0.587
NOMINAL_K10 = 1.4913
NOMINAL_K12 = 2.9522
NOMINAL_K21 = 0.4854
BOLUS_DOSE = 0.1

# Patient population protocol
POPULATION_MULTIPLIER_BOUNDS = (0.85, 1.15)
POPULATION_P_HAT_CHOICES = (17, 18, 20, 21)
POPULATION_Q = 46
NOMINAL_P = 19

# frac-core
ML_MAX_TERMS = int(os.environ.get("FRACPK_ML_MAX_TERMS", "500"))
ML_TOLERANCE = 1e-15
RATIONALIZE_MAX_DENOMINATOR = 100

# rational-approx
PADE_EXPANSION_POINT = 1.0
OUSTALOUP_MAX_N = 50

# inverse-laplace
VALSA_A = 11.0
VALSA_TERM_COUNT = 1000
DEHOOG_TERM_COUNT = 81
DEHOOG_HALF_PERIOD_FACTOR = 4.0
DEHOOG_TOLERANCE = 1e-9

# fde-solvers
FLMM_MIN_GAMMA = 0.1
CONVOLUTION_BLOCK_SIZE = 64
MAX_COMMENSURATE_Q = 1000

# metrics-bench
SIMULATION_HORIZON = 5.0
COMPARISON_GRID_POINTS = 500

# scheduler
CONTROL_SAMPLING_TIME = 1e-2
DOSING_INTERVAL = 0.5
TREATMENT_DURATION = 7.0
GL_HISTORY_DAYS = 5.0
STATE_UPPER_BOUND = 0.5
DOSE_UPPER_BOUND = 0.5
TISSUE_REFERENCE = 0.3
QP_TOLERANCE = 1e-6
QP_MAX_ITERATIONS = 20000
HIFI_STEP = 1e-4
FIDELITY_THRESHOLD = 1e-2
