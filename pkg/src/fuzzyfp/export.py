"""CSV traces and key/value certificates."""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

import numpy as np


def fmt(x) -> str:
    """Round-trip decimal text for a float (17 significant digits)."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def trace_csv(
    iterates: Sequence,
    theta_step: Sequence[float],
    *,
    branch_index: Sequence[int] | None = None,
    flags: dict[str, Sequence] | None = None,
) -> str:
    """One row per iterate: ``n``, coordinates, ``theta_step`` and optional columns.

    ``theta_step`` has one entry fewer than ``iterates``; the last row leaves it blank.
    """
    X = np.asarray(iterates, dtype=float)
    dim = X.shape[1]
    header = ["n"] + [f"x{i}" for i in range(dim)] + ["theta_step"]
    if branch_index is not None:
        header.append("branch_index")
    flags = flags or {}
    header += list(flags)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for n, x in enumerate(X):
        row = [str(n)] + [fmt(c) for c in x]
        row.append(fmt(theta_step[n]) if n < len(theta_step) else "")
        if branch_index is not None:
            row.append(str(branch_index[n]) if n < len(branch_index) else "")
        row += [fmt(col[n]) for col in flags.values()]
        w.writerow(row)
    return buf.getvalue()


def sequence_csv(fm, seq, verdict) -> str:
    """Sequence diagnostics: step values and tail flags for the Cauchy and G-Cauchy checks.

    A flag is 1 on rows at or after the tail start of that condition.
    """
    X = np.asarray(seq, dtype=float)
    theta = fm.eval_pairs(X[:-1], X[1:], verdict.rho).tolist()
    n = np.arange(len(X))
    flags = {"g_cauchy": n >= verdict.g_cauchy_N, "cauchy": n >= verdict.cauchy_N}
    return trace_csv(X, theta, flags=flags)


def kv_block(pairs: Iterable[tuple[str, object]]) -> str:
    lines = []
    for k, v in pairs:
        if isinstance(v, (list, tuple, np.ndarray)):
            v = ",".join(fmt(x) for x in np.ravel(v))
        elif isinstance(v, str):
            pass
        else:
            v = fmt(v)
        lines.append(f"{k}={v}")
    return "\n".join(lines) + "\n"
