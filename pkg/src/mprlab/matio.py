"""Self-describing text serialization for complex matrices.

Layout: a magic line, a dimensions line, then one line per row holding
re/im pairs in row-major order.  Floats are written with repr precision so
a round trip is bit-exact.
"""

from __future__ import annotations

import numpy as np

MAGIC = "mprlab-matrix 1"


class MatrixFormatError(ValueError):
    """Malformed matrix file."""


def save_matrix(path, a) -> None:
    """Write a 2-D array (any numeric dtype) as a complex text matrix."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError("only 2-D matrices are serializable")
    rows, cols = a.shape
    lines = [MAGIC, f"{rows} {cols}"]
    for r in range(rows):
        parts = []
        for c in range(cols):
            z = a[r, c]
            parts.append(f"{float(z.real)!r} {float(z.imag)!r}")
        lines.append(" ".join(parts))
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_matrix(path) -> np.ndarray:
    """Read a matrix written by save_matrix."""
    if hasattr(path, "read"):
        text = path.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != MAGIC:
        raise MatrixFormatError("missing magic header")
    try:
        rows, cols = (int(tok) for tok in lines[1].split())
    except (IndexError, ValueError):
        raise MatrixFormatError("malformed dimensions line") from None
    if rows < 1 or cols < 1:
        raise MatrixFormatError("dimensions must be positive")
    if len(lines) != 2 + rows:
        raise MatrixFormatError("row count disagrees with dimensions")
    out = np.empty((rows, cols), dtype=complex)
    for r in range(rows):
        toks = lines[2 + r].split()
        if len(toks) != 2 * cols:
            raise MatrixFormatError(f"row {r} holds {len(toks)} values, "
                                    f"expected {2 * cols}")
        try:
            vals = [float(t) for t in toks]
        except ValueError:
            raise MatrixFormatError(f"row {r} holds a non-numeric "
                                    "value") from None
        out[r] = [complex(vals[2 * c], vals[2 * c + 1]) for c in range(cols)]
    return out
