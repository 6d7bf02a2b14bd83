"""CSV output helpers: fixed full-precision formatting for reproducible files."""

from __future__ import annotations

import os
from typing import Iterable, Sequence


def fmt(x) -> str:
    """Format a number at full float64 precision (17 significant digits)."""
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), ".17g")


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
