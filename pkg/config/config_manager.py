"""
config/config_manager.py
Configuration management: defaults, CLI flags and a plain-text `key = value` file
"""

from copy import deepcopy
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from config.settings import (
    CLASSIFIER_KINDS,
    DEFAULT_CLASSIFIER,
    DEFAULT_CONVERGENCE_EPSILON,
    DEFAULT_K,
    DEFAULT_LBP_POINTS,
    DEFAULT_LBP_RADIUS,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_N_ANGLES_COARSE,
    DEFAULT_NORMALIZE,
    DEFAULT_RANGE_SIGMA,
    DEFAULT_SEED,
    DEFAULT_SPATIAL_SIGMA,
    DEFAULT_WINDOW_RADIUS,
)
from features.extractor import PipelineConfig
from features.texture import TextureConfig
from imaging.specular import BilateralParams
from utils.errors import ConfigError
from utils.file_utils import read_text_file
from utils.logger import get_logger
from utils.parallel import resolve_thread_count
from utils.validators import require, validate_choice, validate_file_path, validate_positive_int

logger = get_logger(__name__)


# Default configuration
DEFAULT_CONFIG = {
    'spatial_sigma': DEFAULT_SPATIAL_SIGMA,
    'range_sigma': DEFAULT_RANGE_SIGMA,
    'window_radius': DEFAULT_WINDOW_RADIUS,
    'max_iterations': DEFAULT_MAX_ITERATIONS,
    'convergence_epsilon': DEFAULT_CONVERGENCE_EPSILON,
    'lbp_points': DEFAULT_LBP_POINTS,
    'lbp_radius': DEFAULT_LBP_RADIUS,
    'n_scales': None,
    'n_angles_coarse': DEFAULT_N_ANGLES_COARSE,
    'normalize': DEFAULT_NORMALIZE,
    'classifier': DEFAULT_CLASSIFIER,
    'k': DEFAULT_K,
    'seed': DEFAULT_SEED,
    'threads': None,
}

# Value type per key; None defaults still coerce to these
CONFIG_TYPES = {
    'spatial_sigma': float,
    'range_sigma': float,
    'window_radius': int,
    'max_iterations': int,
    'convergence_epsilon': float,
    'lbp_points': int,
    'lbp_radius': float,
    'n_scales': int,
    'n_angles_coarse': int,
    'normalize': bool,
    'classifier': str,
    'k': int,
    'seed': int,
    'threads': int,
}

_TRUE_WORDS = {'1', 'true', 'yes', 'on'}
_FALSE_WORDS = {'0', 'false', 'no', 'off'}
_NONE_WORDS = {'', 'auto', 'none'}


def coerce_value(key: str, raw: str) -> Any:
    """
    Convert a text value to the type of the key's default

    Raises:
        ConfigError: Unknown key or unparseable value
    """
    if key not in CONFIG_TYPES:
        raise ConfigError(f"Unknown configuration key: {key!r}")

    kind = CONFIG_TYPES[key]
    text = raw.strip()

    if text.lower() in _NONE_WORDS and DEFAULT_CONFIG[key] is None:
        return None

    if kind is bool:
        if text.lower() in _TRUE_WORDS:
            return True
        if text.lower() in _FALSE_WORDS:
            return False
        raise ConfigError(f"{key} must be a boolean (got {raw!r})")

    try:
        return kind(text)
    except ValueError as e:
        raise ConfigError(f"{key} must be of type {kind.__name__} (got {raw!r})") from e


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, Any]:
    """
    Parse `key = value` lines; `#` starts a comment, blank lines are skipped

    Raises:
        ConfigError: Malformed line, unknown key or bad value
    """
    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split('#', 1)[0].strip()
        if not content:
            continue

        key, sep, raw = content.partition('=')
        if not sep or not key.strip():
            raise ConfigError(f"{source} line {number}: expected 'key = value', got {line.strip()!r}")

        try:
            values[key.strip()] = coerce_value(key.strip(), raw)
        except ConfigError as e:
            raise ConfigError(f"{source} line {number}: {e}") from e

    return values


class ConfigManager:
    """
    Layers configuration: DEFAULT_CONFIG < CLI flags < `--config` file
    """

    def __init__(self, config_path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None):
        """
        Initialize ConfigManager

        Args:
            config_path: Optional `key = value` file; its values win over flags
            overrides: CLI flag values; None entries mean "not given"

        Raises:
            ConfigError: Unreadable file, unknown key or bad value
        """
        self.config_path = Path(config_path) if config_path else None
        self._config = deepcopy(DEFAULT_CONFIG)

        if overrides:
            self.update({key: value for key, value in overrides.items() if value is not None})

        if self.config_path is not None:
            self.update(self._load_file(self.config_path))

        logger.debug(f"ConfigManager initialized: {self._config}")

    def _load_file(self, path: Path) -> Dict[str, Any]:
        is_valid, error = validate_file_path(path, must_exist=True)
        if not is_valid:
            raise ConfigError(f"Config file: {error}")

        text = read_text_file(path)
        if text is None:
            raise ConfigError(f"Failed to read config file: {path}")

        values = parse_config_text(text, str(path))
        logger.info(f"Loaded {len(values)} setting(s) from {path}")
        return values

    # ========================================================================
    # Public API - Config Access
    # ========================================================================

    def get_config(self) -> Dict[str, Any]:
        """Current configuration (copy)"""
        return deepcopy(self._config)

    def get_setting(self, key: str, default: Any = None) -> Any:
        return self._config.get(key, default)

    def update(self, values: Mapping[str, Any]):
        """
        Merge values over the current configuration

        Raises:
            ConfigError: Unknown key
        """
        unknown = sorted(set(values) - set(DEFAULT_CONFIG))
        if unknown:
            raise ConfigError(f"Unknown configuration key(s): {', '.join(unknown)}")
        self._config.update(values)

    # ========================================================================
    # Public API - Typed Views
    # ========================================================================

    def bilateral_params(self) -> BilateralParams:
        """
        Raises:
            InvalidBilateralParamsError: Values violate the filter invariants
        """
        return BilateralParams(
            spatial_sigma=float(self._config['spatial_sigma']),
            range_sigma=float(self._config['range_sigma']),
            window_radius=self._config['window_radius'],
            max_iterations=self._config['max_iterations'],
            convergence_epsilon=float(self._config['convergence_epsilon']),
        ).validate()

    def texture_config(self) -> TextureConfig:
        return TextureConfig(
            lbp_points=self._config['lbp_points'],
            lbp_radius=float(self._config['lbp_radius']),
            n_scales=self._config['n_scales'],
            n_angles_coarse=self._config['n_angles_coarse'],
        )

    def thread_count(self) -> int:
        """Configured threads, else GRADEPIPE_THREADS; 0 means all cores"""
        return resolve_thread_count(self._config['threads'])

    def classifier(self) -> str:
        kind = self._config['classifier']
        require(validate_choice(kind, CLASSIFIER_KINDS, "classifier"), ConfigError)
        return kind

    def k(self) -> int:
        require(validate_positive_int(self._config['k'], "k"), ConfigError)
        return self._config['k']

    def seed(self) -> int:
        return int(self._config['seed'])

    def pipeline_config(self) -> PipelineConfig:
        """Typed per-image pipeline settings"""
        return PipelineConfig(
            bilateral=self.bilateral_params(),
            texture=self.texture_config(),
            normalize=bool(self._config['normalize']),
            threads=self.thread_count(),
        )


__all__ = ['DEFAULT_CONFIG', 'CONFIG_TYPES', 'coerce_value', 'parse_config_text', 'ConfigManager']
