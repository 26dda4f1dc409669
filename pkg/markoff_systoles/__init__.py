"""markoff-systoles - mu-Markoff maps on the Farey tree, sink constants and trace-systole bounds"""

__version__ = "1.0.0"

from .algebra.cubic_roots import dominant_root, largest_real_root, positive_sink_bound, solve_monic_cubic, tau
from .algebra.markoff_map import MarkoffMap
from .characters.character_variety import gt_map, oracle_cross_check
from .config.settings import DEFAULT_CONFIG, load_config
from .core.data_models import RunConfig, VerificationReport
from .core.data_types import MarkoffTriple, MuParams, Slope, Triangle
from .systoles.systole_bounds import tys_n3, tys_sphere, tys_torus
from .verifiers.sink_verifier import SinkVerifier

__all__ = [
    'MarkoffMap',
    'SinkVerifier',
    'MarkoffTriple',
    'MuParams',
    'Slope',
    'Triangle',
    'RunConfig',
    'VerificationReport',
    'dominant_root',
    'largest_real_root',
    'positive_sink_bound',
    'solve_monic_cubic',
    'tau',
    'gt_map',
    'oracle_cross_check',
    'tys_torus',
    'tys_sphere',
    'tys_n3',
    'load_config',
    'DEFAULT_CONFIG'
]
