# === Tricolor - Bench Workers ===
import threading
import traceback
from concurrent.futures import ThreadPoolExecutor

from ..tricolor_log import get_logger
from ..tricolor_utils import default_thread_count

logger = get_logger(__name__)

CELL_STATUS_OK = "ok"
CELL_STATUS_ERROR = "error"


class CellRunner:
    """
    Runs bench cells on a thread pool. Rows come back in cell order no matter
    which worker finishes first; a cell that raises becomes an error row
    instead of aborting the suite.
    """

    def __init__(self, threads=0):
        self.threads = threads if threads and threads > 0 else default_thread_count()
        self.stop_event = threading.Event()
        self._done = 0
        self._lock = threading.Lock()

    def _run_one(self, fn, cell, total):
        if self.stop_event.is_set():
            return dict(cell, status="skipped")
        try:
            row = dict(cell)
            row.update(fn(cell))
            row.setdefault("status", CELL_STATUS_OK)
        except Exception as e:
            logger.error(f"bench cell {cell} failed: {e}\n{traceback.format_exc()}")
            row = dict(cell, status=CELL_STATUS_ERROR, error=str(e))
        with self._lock:
            self._done += 1
            done = self._done
        if done == total or done % max(1, total // 10) == 0:
            logger.info(f"{done}/{total} cells done")
        return row

    def run(self, fn, cells):
        cells = list(cells)
        if not cells:
            return []
        self._done = 0
        workers = min(self.threads, len(cells))
        if workers <= 1:
            return [self._run_one(fn, cell, len(cells)) for cell in cells]
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="tricolor-bench") as executor:
            try:
                return list(executor.map(lambda cell: self._run_one(fn, cell, len(cells)), cells))
            except KeyboardInterrupt:
                # queued cells turn into "skipped" rows while running ones finish
                logger.warning("interrupted, waiting for running cells")
                self.stop_event.set()
                raise
