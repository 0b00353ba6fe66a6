"""Deterministic CSV emission: header row, comma-separated, 17 significant digits.

Data files never carry timestamps, so identical runs produce byte-identical
bodies; run metadata lives in the manifest instead.
"""

from __future__ import annotations

import numpy as np


def _format(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def write_csv(path, columns: dict) -> None:
    """Write named columns (equal-length sequences) as a CSV file."""
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    length = arrays[0].shape[0]
    for n, arr in zip(names, arrays):
        if arr.shape[0] != length:
            raise ValueError(f"column {n!r} has length {arr.shape[0]}, expected {length}")
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(names) + "\n")
        for i in range(length):
            fh.write(",".join(_format(arr[i]) for arr in arrays) + "\n")
