import os
import copy
import logging
from typing import Dict, Optional

from dotenv import load_dotenv
from pydantic import ValidationError as PydanticValidationError

from ..core.data_models import RunConfig
from ..core.exceptions import EnvironmentConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = {
    'seed': 1,
    'samples': 100_000,
    'depth_cap': 10_000,
    'precision': 'double',
    'output': 'text',
    'workers': 1,
    'chunk_size': 10_000,
    'high_precision_dps': 50,
    'tolerances': {
        'sample_margin': 1e-6,
        'witness_margin': 1e-8,
        'tie_relative': 1e-12,
        'vertex_relative': 1e-9,
        'value_limit': 1e300,
        'variety': 1e-10,
    }
}

# environment variable -> (config key, parser)
ENVIRONMENT_OVERRIDES = {
    'MARKOFF_SEED': ('seed', int),
    'MARKOFF_SAMPLES': ('samples', int),
    'MARKOFF_DEPTH_CAP': ('depth_cap', int),
    'MARKOFF_PRECISION': ('precision', str),
    'MARKOFF_OUTPUT': ('output', str),
    'MARKOFF_WORKERS': ('workers', int),
}


def _environment_values() -> Dict:
    values = {}
    for variable, (key, parse) in ENVIRONMENT_OVERRIDES.items():
        raw = os.getenv(variable)
        if raw is None:
            continue
        try:
            values[key] = parse(raw)
        except ValueError:
            raise EnvironmentConfigError(f"{variable}={raw!r} is not a valid {parse.__name__}")
    return values


def load_config(overrides: Optional[Dict] = None, use_environment: bool = True) -> RunConfig:
    """Merge DEFAULT_CONFIG, environment (.env allowed) and explicit overrides"""
    config = copy.deepcopy(DEFAULT_CONFIG)
    if use_environment:
        if not load_dotenv():
            logger.debug("No .env file found, using process environment only")
        config.update(_environment_values())
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == 'tolerances':
            config['tolerances'].update(value)
        else:
            config[key] = value
    try:
        return RunConfig(**config)
    except PydanticValidationError as e:
        raise EnvironmentConfigError(f"Invalid configuration: {e}") from e
