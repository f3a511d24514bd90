# === Tricolor - General Utilities ===
import os
import time

import numpy as np
import orjson

try:
    import psutil
except ImportError:
    psutil = None

from .tricolor_log import get_logger

logger = get_logger(__name__)

SEED_MASK = (1 << 64) - 1
THREADS_ENV_VAR = "TRICOLOR_THREADS"

if psutil is None:
    logger.warning("'psutil' library not found! Thread count falls back to os.cpu_count(), memory stats will be 0.")


# --- Seeds and Random Streams ---
def derive_seed(master, *keys):
    """Counter-mode split of a master seed: same (master, keys) -> same 64-bit child seed."""
    spawn_key = tuple(int(k) & SEED_MASK for k in keys)
    sequence = np.random.SeedSequence(int(master) & SEED_MASK, spawn_key=spawn_key)
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed):
    return np.random.default_rng(int(seed) & SEED_MASK)


# --- Host Introspection ---
def default_thread_count():
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if raw:
        try:
            value = int(raw)
            if value > 0:
                return value
        except ValueError:
            pass
        logger.warning(f"Ignoring invalid {THREADS_ENV_VAR}={raw!r}")
    count = None
    if psutil:
        try:
            count = psutil.cpu_count(logical=True)
        except Exception as e:
            logger.warning(f"psutil cpu_count failed: {e}")
    return count or os.cpu_count() or 1


def current_rss_mb():
    if not psutil:
        return 0.0
    try:
        return round(psutil.Process(os.getpid()).memory_info().rss / (1024 ** 2), 2)
    except Exception:
        return 0.0


def elapsed_ms(start):
    return int(round((time.perf_counter() - start) * 1000))


# --- File Helpers ---
def ensure_parent_dir(path):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def write_json(path, payload, indent=True):
    ensure_parent_dir(path)
    option = orjson.OPT_SERIALIZE_NUMPY | (orjson.OPT_INDENT_2 if indent else 0)
    with open(path, "wb") as f:
        f.write(orjson.dumps(payload, option=option))


def read_json(path):
    with open(path, "rb") as f:
        return orjson.loads(f.read())


def dumps_json(payload, indent=False):
    option = orjson.OPT_SERIALIZE_NUMPY | (orjson.OPT_INDENT_2 if indent else 0)
    return orjson.dumps(payload, option=option).decode("utf-8")
