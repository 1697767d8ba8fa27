"""CSV writers for snapshots, diagnostics and relaxation trajectories."""

from __future__ import annotations

import csv
import os

import numpy as np


def _fmt(precision):
    return f"%.{precision}g"


def write_table(path, header, rows, precision=17):
    """Write ``rows`` (2D array-like) under ``header`` with ``%.<precision>g``."""
    fmt = _fmt(precision)
    rows = np.asarray(rows, dtype=float).reshape(-1, len(header))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([fmt % x for x in r])
    return path


def read_table(path):
    """Read a CSV written by :func:`write_table` into ``(header, array)``."""
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        data = [[float(x) for x in row] for row in rd]
    return header, np.array(data, dtype=float).reshape(-1, len(header))


class OutputWriter:
    """Writes ``snapshot_<step>.csv`` every ``snapshot_every`` steps and ``diagnostics.csv``.

    ``snapshot_every = 0`` writes only the initial and final snapshots.
    """

    def __init__(self, directory, snapshot_every, model, precision=17):
        self.directory = directory
        self.snapshot_every = snapshot_every
        self.model = model
        self.precision = precision
        self.files = []
        self._last = None
        os.makedirs(directory, exist_ok=True)

    def snapshot(self, step, time, grid, force=False):
        due = step == 0 or (self.snapshot_every and step % self.snapshot_every == 0)
        if not (due or force) or self._last == step:
            return None
        cols = self.model.snapshot_columns(grid.u)
        header = ["x"] + list(cols)
        data = np.column_stack([grid.x] + [np.asarray(c, dtype=float) for c in cols.values()])
        path = os.path.join(self.directory, f"snapshot_{step}.csv")
        write_table(path, header, data, self.precision)
        self.files.append(path)
        self._last = step
        return path

    def write_diagnostics(self, diags):
        path = os.path.join(self.directory, "diagnostics.csv")
        write_table(path, list(diags.columns), diags.as_array(), self.precision)
        if path not in self.files:
            self.files.append(path)
        return path
