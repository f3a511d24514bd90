# === Tricolor - Configuration Manager ===
import configparser
import json
import os

from .tricolor_log import get_logger

logger = get_logger(__name__)

CONFIG_ENV_VAR = "TRICOLOR_CONFIG"

DEFAULT_THRESHOLD_SCALES = [0.6, 0.8, 1.0, 1.2, 1.4]


def get_config_path():
    override = os.environ.get(CONFIG_ENV_VAR)
    if override:
        return override
    return os.path.join(os.path.dirname(__file__), 'config.ini')


def get_config_parser(path=None):
    config = configparser.ConfigParser()
    config.read(path or get_config_path())
    return config


def _parse_json_list(config_parser_obj, section, key, fallback):
    raw = config_parser_obj.get(section, key, fallback=None)
    if raw is None or not raw.strip():
        return list(fallback)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        logger.warning(f"[{section}] {key} is not valid JSON ({raw!r}), using default.")
        return list(fallback)
    if not isinstance(value, list) or not value:
        logger.warning(f"[{section}] {key} must be a non-empty JSON list, using default.")
        return list(fallback)
    return [float(v) for v in value]


def load_all_configs(path=None):
    config_parser_obj = get_config_parser(path)

    solver_settings = {
        'epsilon': config_parser_obj.getfloat('Solver', 'epsilon', fallback=1e-3),
        'max_iterations': config_parser_obj.getint('Solver', 'max_iterations', fallback=20000),
        'rank': config_parser_obj.getint('Solver', 'rank', fallback=0),
        'restarts': config_parser_obj.getint('Solver', 'restarts', fallback=5),
        'initial_step': config_parser_obj.getfloat('Solver', 'initial_step', fallback=0.5),
        'step_growth': config_parser_obj.getfloat('Solver', 'step_growth', fallback=1.5),
        'step_shrink': config_parser_obj.getfloat('Solver', 'step_shrink', fallback=0.5),
        'min_step': config_parser_obj.getfloat('Solver', 'min_step', fallback=1e-10),
        'margin': config_parser_obj.getfloat('Solver', 'margin', fallback=0.0),
        'polish_below': config_parser_obj.getfloat('Solver', 'polish_below', fallback=0.2),
        'stall_window': config_parser_obj.getint('Solver', 'stall_window', fallback=500),
    }

    rounding_settings = {
        'trials': config_parser_obj.getint('Rounding', 'trials', fallback=20),
        'threshold_scales': _parse_json_list(config_parser_obj, 'Rounding', 'threshold_scales', DEFAULT_THRESHOLD_SCALES),
        'share_embedding': config_parser_obj.getboolean('Rounding', 'share_embedding', fallback=True),
    }

    branching_settings = {
        'beta': config_parser_obj.getfloat('Branching', 'beta', fallback=1.0),
        'budget': config_parser_obj.getint('Branching', 'budget', fallback=20000),
    }

    pipeline_settings = {
        'repetitions': config_parser_obj.getint('Pipeline', 'repetitions', fallback=0),
        'time_cap_factor': config_parser_obj.getfloat('Pipeline', 'time_cap_factor', fallback=5.0),
        'per_round_calls': config_parser_obj.getint('Pipeline', 'per_round_calls', fallback=0),
        'exact_budget': config_parser_obj.getint('Pipeline', 'exact_budget', fallback=2000000),
    }

    bench_settings = {
        'threads': config_parser_obj.getint('Bench', 'threads', fallback=0),
    }

    logging_settings = {
        'level': config_parser_obj.get('Logging', 'level', fallback='INFO'),
    }

    return {
        'solver': solver_settings,
        'rounding': rounding_settings,
        'branching': branching_settings,
        'pipeline': pipeline_settings,
        'bench': bench_settings,
        'logging': logging_settings,
    }
