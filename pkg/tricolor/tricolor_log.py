# === Tricolor - Logging ===
import logging
import sys
import threading

ROOT_LOGGER_NAME = "tricolor"

LEVEL_MARKERS = {
    logging.DEBUG: "⚪",
    logging.INFO: "🔵",
    logging.WARNING: "🟡",
    logging.ERROR: "🔴",
    logging.CRITICAL: "🔴",
}

_setup_lock = threading.Lock()
_handler = None


def _tag_for(logger_name):
    """'tricolor.tricolor_branching' -> 'Tricolor-Branching'."""
    leaf = logger_name.rsplit(".", 1)[-1]
    if leaf.startswith("tricolor_"):
        leaf = leaf[len("tricolor_"):]
    if leaf in ("", ROOT_LOGGER_NAME, "__main__"):
        return "Tricolor"
    return "Tricolor-" + "-".join(part.capitalize() for part in leaf.split("_") if part)


class TaggedFormatter(logging.Formatter):
    """Renders records as '<marker> [Tricolor-Subsystem] message'."""

    def format(self, record):
        marker = LEVEL_MARKERS.get(record.levelno, "🔵")
        message = record.getMessage()
        # Success lines carry their own marker.
        if message.startswith("✅"):
            line = f"{message[:1]} [{_tag_for(record.name)}]{message[1:]}"
        else:
            line = f"{marker} [{_tag_for(record.name)}] {message}"
        if record.exc_info:
            line += "\n" + self.formatException(record.exc_info)
        return line


def get_logger(name):
    if name == ROOT_LOGGER_NAME or name.startswith(ROOT_LOGGER_NAME + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")


class _CurrentStderrHandler(logging.StreamHandler):
    """Follows sys.stderr as it is at emit time (it gets swapped under test capture)."""

    def __init__(self):
        super().__init__(sys.stderr)

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def setup_logging(level="INFO", stream=None):
    """Installs the tagged handler on the package logger. Safe to call repeatedly."""
    global _handler
    if isinstance(level, str):
        resolved = logging.getLevelName(level.upper())
        level = resolved if isinstance(resolved, int) else logging.INFO
    root = logging.getLogger(ROOT_LOGGER_NAME)
    with _setup_lock:
        if _handler is None or stream is not None:
            if _handler is not None:
                root.removeHandler(_handler)
            _handler = logging.StreamHandler(stream) if stream is not None else _CurrentStderrHandler()
            _handler.setFormatter(TaggedFormatter())
            root.addHandler(_handler)
            root.propagate = False
        root.setLevel(level)
    return root
