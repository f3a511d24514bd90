# === Tricolor - Run Store ===
import sqlite3
import threading
import time

import orjson

from .tricolor_log import get_logger
from .tricolor_utils import ensure_parent_dir

logger = get_logger(__name__)


class RunStore:
    """SQLite history of pipeline runs: one row per coloring run plus one row per peel round."""

    def __init__(self, db_path):
        self.db_path = str(db_path)
        self._local = threading.local()
        if self.db_path != ":memory:":
            ensure_parent_dir(self.db_path)
        self._init_db()

    def _get_connection(self):
        """Gets or creates a thread-local database connection."""
        if not hasattr(self._local, 'connection') or self._local.connection is None:
            conn = sqlite3.connect(self.db_path, timeout=30)
            conn.row_factory = sqlite3.Row
            conn.execute("PRAGMA foreign_keys=ON;")
            conn.execute("PRAGMA journal_mode=WAL;")
            conn.execute("PRAGMA busy_timeout = 30000;")
            self._local.connection = conn
        return self._local.connection

    def close(self):
        """Closes the calling thread's connection if it exists."""
        if hasattr(self._local, 'connection') and self._local.connection is not None:
            self._local.connection.close()
            self._local.connection = None

    def _init_db(self):
        conn = self._get_connection()
        cursor = conn.cursor()

        # 1. Runs Table
        cursor.execute('''
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                timestamp REAL,
                command TEXT,
                n INTEGER,
                m INTEGER,
                r REAL,
                seed TEXT,
                colors_used INTEGER,
                rounds INTEGER,
                valid INTEGER,
                promise_violation INTEGER,
                wall_ms INTEGER,
                report_json TEXT
            )
        ''')

        # 2. Rounds Table
        cursor.execute('''
            CREATE TABLE IF NOT EXISTS rounds (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                run_id INTEGER,
                round_index INTEGER,
                vertices_before INTEGER,
                size INTEGER,
                calls INTEGER,
                wall_ms INTEGER,
                met_bound INTEGER,
                FOREIGN KEY(run_id) REFERENCES runs(id) ON DELETE CASCADE
            )
        ''')

        conn.commit()

    def create_run(self, report, command="color"):
        """Stores a RunReport (or its dict form) with its per-round records; returns the run id."""
        payload = report.to_dict() if hasattr(report, 'to_dict') else dict(report)
        conn = self._get_connection()
        cursor = conn.cursor()
        cursor.execute(
            """
            INSERT INTO runs (
                timestamp, command, n, m, r, seed, colors_used, rounds,
                valid, promise_violation, wall_ms, report_json
            ) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
            """,
            (
                time.time(), command, payload['n'], payload['m'], payload['r'],
                # 64-bit seeds overflow SQLite INTEGER
                str(payload['seed']),
                payload['colors_used'], payload['rounds'],
                int(bool(payload['valid'])), int(bool(payload['promise_violation'])),
                payload['wall_ms'], orjson.dumps(payload, option=orjson.OPT_SERIALIZE_NUMPY).decode('utf-8'),
            )
        )
        run_id = cursor.lastrowid
        cursor.executemany(
            """
            INSERT INTO rounds (run_id, round_index, vertices_before, size, calls, wall_ms, met_bound)
            VALUES (?, ?, ?, ?, ?, ?, ?)
            """,
            [
                (
                    run_id, rec['round_index'], rec['vertices_before'], rec['size'],
                    rec['calls'], rec['wall_ms'], int(bool(rec['met_bound'])),
                )
                for rec in payload.get('per_round', [])
            ]
        )
        conn.commit()
        logger.debug(f"stored run {run_id} ({command}, n={payload['n']}, colors={payload['colors_used']})")
        return run_id

    def get_run(self, run_id):
        """All columns of one run, with report_json decoded into 'report'."""
        conn = self._get_connection()
        cursor = conn.cursor()
        cursor.execute("SELECT * FROM runs WHERE id=?", (run_id,))
        row = cursor.fetchone()
        if not row:
            return None
        run = dict(row)
        run['report'] = orjson.loads(run.pop('report_json'))
        run['valid'] = bool(run['valid'])
        run['promise_violation'] = bool(run['promise_violation'])
        run['seed'] = int(run['seed'])
        return run

    def get_run_rounds(self, run_id):
        conn = self._get_connection()
        cursor = conn.cursor()
        cursor.execute(
            "SELECT round_index, vertices_before, size, calls, wall_ms, met_bound FROM rounds "
            "WHERE run_id = ? ORDER BY round_index ASC",
            (run_id,)
        )
        rows = [dict(row) for row in cursor.fetchall()]
        for row in rows:
            row['met_bound'] = bool(row['met_bound'])
        return rows

    def list_runs(self, limit=50, offset=0):
        """List runs most recent first, without the stored report."""
        conn = self._get_connection()
        cursor = conn.cursor()
        cursor.execute(
            """
            SELECT id, timestamp, command, n, m, r, seed, colors_used, rounds, valid, promise_violation, wall_ms
            FROM runs
            ORDER BY timestamp DESC, id DESC
            LIMIT ? OFFSET ?
            """,
            (limit, offset)
        )
        runs = [dict(row) for row in cursor.fetchall()]
        for run in runs:
            run['seed'] = int(run['seed'])
            run['valid'] = bool(run['valid'])
            run['promise_violation'] = bool(run['promise_violation'])
        return runs

    def delete_run(self, run_id):
        """Delete a run (and cascade-delete its rounds via foreign key)."""
        conn = self._get_connection()
        cursor = conn.cursor()
        cursor.execute("DELETE FROM runs WHERE id=?", (run_id,))
        conn.commit()
        return cursor.rowcount > 0

    def get_summary(self):
        """Aggregates over all stored runs."""
        conn = self._get_connection()
        cursor = conn.cursor()
        cursor.execute(
            """
            SELECT
                COUNT(*) as run_count,
                SUM(valid) as valid_count,
                SUM(promise_violation) as promise_violations,
                AVG(colors_used) as avg_colors,
                MAX(colors_used) as max_colors,
                AVG(wall_ms) as avg_wall_ms
            FROM runs
            """
        )
        row = cursor.fetchone()
        summary = dict(row) if row else {}
        for key in ('valid_count', 'promise_violations'):
            summary[key] = summary.get(key) or 0
        return summary
