"""
OAM-Holo Simulator - Run Ledger
===============================

Optional SQLite record of CLI runs (enable with OAMHOLO_LEDGER=1).
Each run stores its manifest and an entry hash; the ledger exports to CSV.
"""

import csv
import hashlib
import json
import sqlite3
from pathlib import Path
from typing import Dict, List, Optional

from src.manifest import RunManifest
from src.utils import get_ledger_path


def get_connection(db_path: Optional[Path] = None) -> sqlite3.Connection:
    """Get database connection."""
    db_path = Path(db_path or get_ledger_path())
    db_path.parent.mkdir(parents=True, exist_ok=True)
    conn = sqlite3.connect(str(db_path))
    conn.row_factory = sqlite3.Row
    return conn


def init_ledger(db_path: Optional[Path] = None) -> None:
    """Create the runs table."""
    conn = get_connection(db_path)
    conn.execute("""
        CREATE TABLE IF NOT EXISTS runs (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
            command TEXT NOT NULL,
            output_dir TEXT NOT NULL,
            content_hash TEXT NOT NULL,
            seed INTEGER,
            manifest_json TEXT NOT NULL,
            entry_hash TEXT NOT NULL
        )
    """)
    conn.commit()
    conn.close()


def record_run(manifest: RunManifest, output_dir: Path, db_path: Optional[Path] = None) -> int:
    """Store one run; returns its row id."""
    init_ledger(db_path)
    manifest_json = json.dumps(manifest.to_json(), sort_keys=True, default=str)
    entry_hash = hashlib.sha256(f"{manifest.created_at}{manifest_json}".encode()).hexdigest()[:16]

    conn = get_connection(db_path)
    cursor = conn.cursor()
    cursor.execute(
        """
        INSERT INTO runs (command, output_dir, content_hash, seed, manifest_json, entry_hash)
        VALUES (?, ?, ?, ?, ?, ?)
        """,
        (manifest.command, str(output_dir), manifest.content_hash, manifest.seed, manifest_json, entry_hash),
    )
    conn.commit()
    row_id = cursor.lastrowid
    conn.close()
    return row_id


def get_runs(command: Optional[str] = None, db_path: Optional[Path] = None) -> List[Dict]:
    """All recorded runs, newest first, optionally for one command."""
    init_ledger(db_path)
    conn = get_connection(db_path)
    if command:
        rows = conn.execute("SELECT * FROM runs WHERE command = ? ORDER BY id DESC", (command,)).fetchall()
    else:
        rows = conn.execute("SELECT * FROM runs ORDER BY id DESC").fetchall()
    conn.close()
    return [dict(row) for row in rows]


def export_to_csv(path: Path, db_path: Optional[Path] = None) -> Path:
    """Export the runs table (without manifests) to CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    init_ledger(db_path)
    conn = get_connection(db_path)
    rows = conn.execute(
        "SELECT id, created_at, command, output_dir, content_hash, seed, entry_hash FROM runs ORDER BY id"
    ).fetchall()
    conn.close()
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["ID", "Created At", "Command", "Output Dir", "Content Hash", "Seed", "Entry Hash"])
        writer.writerows(tuple(row) for row in rows)
    return path
