"""
config/settings.py
Application-wide settings and constants
"""

from pathlib import Path

# ============================================================================
# Application Information
# ============================================================================

APP_NAME = "GradePipe"
APP_VERSION = "1.0.0"
APP_DESCRIPTION = "Date fruit grading pipeline: specular removal, shape and texture features, graders"

# ============================================================================
# Directories
# ============================================================================

# User data directory (created lazily, only when file logging is enabled)
USER_DATA_DIR = Path.home() / ".gradepipe"

# Logs directory
LOGS_DIR = USER_DATA_DIR / "logs"

# Log file path
LOG_FILE = LOGS_DIR / "gradepipe.log"

# ============================================================================
# Environment Variables
# ============================================================================

THREADS_ENV_VAR = "GRADEPIPE_THREADS"
LOG_LEVEL_ENV_VAR = "GRADEPIPE_LOG_LEVEL"

# ============================================================================
# Raster I/O
# ============================================================================

PGM_MAGIC = "P5"
PPM_MAGIC = "P6"
SUPPORTED_MAXVAL = 255

# Rec. 601 luma weights (R, G, B)
GRAY_WEIGHTS = (0.299, 0.587, 0.114)

# to_gray output is rounded to this many decimals
GRAY_DECIMALS = 12

# ============================================================================
# Specular Removal (joint bilateral filter on maximum chromaticity)
# ============================================================================

DEFAULT_SPATIAL_SIGMA = 4.0       # pixels
DEFAULT_RANGE_SIGMA = 0.1         # chromaticity units
DEFAULT_WINDOW_RADIUS = 8         # pixels
DEFAULT_MAX_ITERATIONS = 10
DEFAULT_CONVERGENCE_EPSILON = 1e-4

# sigma_min within this of 1/3 marks a pixel achromatic
ACHROMATIC_TOLERANCE = 1e-9

# sigma_max must rise by more than this for a pixel to count as specular
SIGMA_RISE_TOLERANCE = 1e-12

# ============================================================================
# Shape Features
# ============================================================================

# Pixel-extent correction added to second central moments
PIXEL_MOMENT_CORRECTION = 1.0 / 12.0

# Relative determinant tolerance for collinear foregrounds
COLLINEAR_TOLERANCE = 1e-9

SHAPE_FEATURE_NAMES = ("A", "P", "MAJL", "MINL", "E", "ED")

# ============================================================================
# Texture Features
# ============================================================================

DEFAULT_LBP_POINTS = 8
DEFAULT_LBP_RADIUS = 1.0

# Neighbour differences below this magnitude count as ties
LBP_TIE_TOLERANCE = 1e-9

LBP_MODES = ("plain", "u2", "riu2")

DEFAULT_N_ANGLES_COARSE = 16
MIN_CURVELET_SIZE = 32
MIN_N_SCALES = 2

# Half-width of the angular window transition band (in wedge units)
ANGULAR_TRANSITION = 0.25

TEXTURE_FEATURE_NAMES = ("mu", "sigma")

# ============================================================================
# Classification
# ============================================================================

CLASSIFIER_KINDS = ("knn", "centroid", "lda")
DEFAULT_CLASSIFIER = "knn"
DEFAULT_K = 4
DEFAULT_NORMALIZE = True

# Cholesky plus eigenvalue-ratio check for the pooled covariance
SINGULAR_COVARIANCE_TOLERANCE = 1e-12

MODEL_MAGIC = "gradepipe-model"
MODEL_VERSION = "v1"
MODEL_NUMBER_FORMAT = "%.12g"

# ============================================================================
# Evaluation Harness
# ============================================================================

DEFAULT_SEED = 7
FEATURE_MODES = ("shape", "texture", "fused")
K_SWEEP_VALUES = (1, 2, 3, 4, 5, 6, 7, 8)
REPORT_DECIMALS = 4
DATASET_SYNTHETIC = "synthetic"
DATASET_USER = "user"
SVM_NOTE = (
    "SVM with RBF kernel is not evaluated: its hyperparameters are unspecified, "
    "so no comparable configuration exists"
)

# ============================================================================
# Synthetic Dataset
# ============================================================================

SYNTH_HEIGHT = 160
SYNTH_WIDTH = 256

SYNTH_BACKGROUND_LEVEL = 245
SYNTH_BACKGROUND_SPREAD = 5

# Semi-axes (rows, cols) per size class, before jitter
SYNTH_SEMI_AXES = {
    "Small": (40.0, 70.0),
    "Large": (55.0, 95.0),
}
SYNTH_AXIS_JITTER = 0.05
SYNTH_CENTER_JITTER = 4

# Multiplicative speckle amplitude per surface class
SYNTH_SPECKLE_AMPLITUDE = {
    "Soft": 0.02,
    "Semi_Hard": 0.08,
    "Hard": 0.16,
}
SYNTH_SPECKLE_SMOOTHING = 2.5     # Gaussian sigma of the speckle field, pixels

# Brown base colour is (3q, 2q, q)
SYNTH_BROWN_RATIO = (3, 2, 1)
SYNTH_BASE_LEVEL_RANGE = (30, 35)

SYNTH_HIGHLIGHT_FRACTION = 0.5
SYNTH_HIGHLIGHT_SIGMA = 3.5       # pixels
SYNTH_HIGHLIGHT_PEAK_RANGE = (60, 86)
SYNTH_HIGHLIGHT_OFFSET = 0.35     # fraction of semi-axes from the centre
SYNTH_HIGHLIGHT_MASK_LEVEL = 16.0  # added intensity above which a pixel is "highlight"

SYNTH_IMAGES_DIR = "images"
SYNTH_MANIFEST_NAME = "manifest.csv"

# ============================================================================
# CLI Exit Codes
# ============================================================================

EXIT_SUCCESS = 0
EXIT_USAGE_ERROR = 1
EXIT_PIPELINE_ERROR = 2

# ============================================================================
# Error Messages
# ============================================================================

ERROR_MESSAGES = {
    "file_not_found": "File not found: {path}",
    "bad_magic": "Unsupported magic number {magic!r} (expected P5 or P6)",
    "bad_maxval": "Only 8-bit images are supported (maxval must be 255, got {maxval})",
    "truncated": "Truncated pixel data: expected {expected} bytes, found {found}",
    "duplicate_path": "Duplicate path {path!r} on line {line}",
    "malformed_line": "Malformed manifest line {line}: {text!r}",
    "missing_class": "Training set is missing grades: {grades}",
    "k_too_large": "k={k} exceeds the number of training vectors ({n})",
}

# ============================================================================
# Helper Functions
# ============================================================================

def get_error_message(key: str, **kwargs) -> str:
    """
    Get formatted error message

    Args:
        key: Error message key
        **kwargs: Format arguments

    Returns:
        Formatted error message
    """
    message = ERROR_MESSAGES.get(key, "An error occurred")
    return message.format(**kwargs) if kwargs else message


def get_model_header(kind: str, k: int) -> str:
    """
    Get the first line of a model file

    Example:
        get_model_header("knn", 4)  # "gradepipe-model v1 knn k=4"
    """
    return f"{MODEL_MAGIC} {MODEL_VERSION} {kind} k={k}"
