"""
config/__init__.py
Configuration package initialization
"""

from config.settings import (
    # Application info
    APP_NAME,
    APP_VERSION,
    APP_DESCRIPTION,

    # Environment
    THREADS_ENV_VAR,
    LOG_LEVEL_ENV_VAR,

    # Defaults
    DEFAULT_SPATIAL_SIGMA,
    DEFAULT_RANGE_SIGMA,
    DEFAULT_WINDOW_RADIUS,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_CONVERGENCE_EPSILON,
    DEFAULT_LBP_POINTS,
    DEFAULT_LBP_RADIUS,
    DEFAULT_N_ANGLES_COARSE,
    DEFAULT_CLASSIFIER,
    DEFAULT_K,
    DEFAULT_SEED,

    # Exit codes
    EXIT_SUCCESS,
    EXIT_USAGE_ERROR,
    EXIT_PIPELINE_ERROR,

    # Messages
    ERROR_MESSAGES,

    # Helper Functions
    get_error_message,
    get_model_header,
)

__all__ = [
    'APP_NAME',
    'APP_VERSION',
    'APP_DESCRIPTION',
    'THREADS_ENV_VAR',
    'LOG_LEVEL_ENV_VAR',
    'DEFAULT_SPATIAL_SIGMA',
    'DEFAULT_RANGE_SIGMA',
    'DEFAULT_WINDOW_RADIUS',
    'DEFAULT_MAX_ITERATIONS',
    'DEFAULT_CONVERGENCE_EPSILON',
    'DEFAULT_LBP_POINTS',
    'DEFAULT_LBP_RADIUS',
    'DEFAULT_N_ANGLES_COARSE',
    'DEFAULT_CLASSIFIER',
    'DEFAULT_K',
    'DEFAULT_SEED',
    'EXIT_SUCCESS',
    'EXIT_USAGE_ERROR',
    'EXIT_PIPELINE_ERROR',
    'ERROR_MESSAGES',
    'get_error_message',
    'get_model_header',
]
