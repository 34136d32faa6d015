"""
Constants and default values for the sparsemlm package.
"""

# Application metadata
APP_NAME = "sparsemlm"
APP_VERSION = "0.1.0"
LOGGER_NAME = "sparsemlm"

# Solver defaults
DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITER = 10000
DEFAULT_INIT_STEP = 0.01
DEFAULT_GAMMA = 0.5
DEFAULT_MU = 10.0
DEFAULT_TAU = 2.0
DEFAULT_SEED = 0

# Numerical floors
EIGEN_CLAMP = 1e-10          # eigenvalues below this are treated as zero
MIN_BACKTRACK_STEP = 1e-15   # backtracking aborts below this step
ZERO_VARIANCE_RTOL = 1e-12   # sd below this (relative to column scale) is zero variance

# Regularization path
DEFAULT_N_LAMBDA = 50
DEFAULT_LAMBDA_MIN_RATIO = 1e-3
UNPENALIZED_FIT_TOL = 1e-12
UNPENALIZED_FIT_MAX_SWEEPS = 100000
LAMBDA_MAX_MARGIN = 1e-6    # relative nudge so the top entry sits strictly inside the threshold

# Cross-validation
DEFAULT_N_FOLDS = 10

# Oracle guards
ORACLE_MAX_ROWS = 4096       # n*m bound for the explicit Kronecker design
ORACLE_MAX_ELEMENTS = 2**22  # n*m*p*q bound
ORACLE_TOL = 1e-10
ORACLE_MAX_SWEEPS = 200000

# Simulation defaults
DEFAULT_FRAC_MAIN = 0.5
DEFAULT_FRAC_INTER = 0.125
DEFAULT_FRAC_CHEM = 0.25
DEFAULT_EFFECT_SD = 2.0
DEFAULT_NOISE_SD = 3.0
ENVIRO_DEFAULTS = {"n_chem": 100, "n_tissue": 10, "n_subjects": 108, "n_demog": 19}
BENCH_N_LAMBDA = 20

# Output formats
FLOAT_FORMAT = "%.17g"
COEF_AXIS_LABEL = "x\\z"
MANIFEST_NAME = "manifest.json"
NNZ_SUMMARY_NAME = "nnz_per_lambda"
CV_TABLE_NAME = "cv_criterion"
CV_MEAN_NAME = "cv_mean"
REPORT_NAME = "report"
MATRIX_SUFFIXES = [".csv", ".tsv", ".json"]

# Exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_DATA_ERROR = 3
EXIT_NUMERICAL_ERROR = 4

# Environment
WORKERS_ENV_PREFIX = "SPARSEMLM_"

# Viewer
FILE_TREE_WIDTH = 36
NOTIFICATION_DURATION = 2.0  # seconds
TABLE_MAX_ROWS = 500

# HTML templates
HTML_STYLE = """
    body {
        font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', Roboto, Oxygen, Ubuntu, Cantarell, sans-serif;
        line-height: 1.6;
        color: #333;
        max-width: 960px;
        margin: 0 auto;
        padding: 20px;
        background-color: white;
    }
    pre, code {
        background-color: #f0f0f0;
        border-radius: 3px;
        font-family: 'Courier New', Courier, monospace;
    }
    pre {
        padding: 10px;
        overflow-x: auto;
    }
    table {
        border-collapse: collapse;
        margin: 12px 0;
    }
    th, td {
        border: 1px solid #ddd;
        padding: 4px 10px;
        text-align: right;
    }
    th {
        background-color: #f5f5f5;
    }
    h1, h2, h3 {
        color: #111;
        margin-top: 24px;
        margin-bottom: 16px;
    }
    @media print {
        body {
            margin: 0;
            padding: 10mm;
        }
    }
"""

# Default content
DEFAULT_CONTENT = """# sparsemlm run viewer

Open a run directory:

```
sparsemlm view --run_dir <output_dir>
```

Press 'f' to toggle the file tree and select a matrix or table file."""

ERROR_CONTENT_TEMPLATE = "# Error\n\n{message}"
