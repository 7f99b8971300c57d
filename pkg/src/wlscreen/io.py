"""CSV ingestion and result serialization."""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from .core import ScreenConfig, ScreeningResult
from .errors import ColumnNotFound, FormatError, InvalidInput, ParseError

RESULT_SCHEMA = "wlscreen.screening/1"
REPORT_SCHEMA = "wlscreen.report/1"


def _resolve_column(header, response_col):
    if isinstance(response_col, str) and response_col in header:
        return header.index(response_col)
    try:
        idx = int(response_col)
    except (TypeError, ValueError):
        raise ColumnNotFound(f"no column named {response_col!r}") from None
    if not 0 <= idx < len(header):
        raise ColumnNotFound(f"column index {idx} outside [0, {len(header)})")
    return idx


def read_csv(path, response_col):
    """Load a samples-as-rows CSV with a header.

    Returns ``(X, y, names)`` where ``X`` is the raw n x p float matrix in
    file column order, ``y`` is a float array when every response cell parses
    as a number and a string array otherwise, and ``names`` are the predictor
    headers. Data rows are numbered from 1 in error messages; the header is
    line 1 of the file.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows:
        raise FormatError(f"{path}: empty file")
    header, body = [h.strip() for h in rows[0]], rows[1:]
    if len(header) < 2:
        raise FormatError(f"{path}: need a response and at least one predictor column")
    ycol = _resolve_column(header, response_col)
    names = [h for i, h in enumerate(header) if i != ycol]

    X = np.empty((len(body), len(names)))
    y_cells = []
    for r, row in enumerate(body, start=1):
        if len(row) != len(header):
            raise FormatError(
                f"{path}: row {r} (line {r + 1}) has {len(row)} fields, expected {len(header)}"
            )
        y_cells.append(row[ycol].strip())
        cells = row[:ycol] + row[ycol + 1 :]
        for c, cell in enumerate(cells):
            try:
                X[r - 1, c] = float(cell)
            except ValueError:
                raise ParseError(
                    f"{path}: non-numeric value {cell!r} at row {r} (line {r + 1}), "
                    f"column {names[c]!r}",
                    row=r,
                    column=names[c],
                ) from None
    if len(body) < 2:
        raise InvalidInput(f"{path}: need at least 2 data rows")
    if not np.all(np.isfinite(X)):
        raise InvalidInput(f"{path}: predictors contain non-finite values")
    try:
        y = np.array([float(v) for v in y_cells])
        if not np.all(np.isfinite(y)):
            raise ValueError
    except ValueError:
        y = np.array(y_cells, dtype=str)
    return X, y, names


def _fmt(v):
    return format(float(v), ".17g")


def write_csv(path_or_file, X, y, names=None, response_name="y"):
    """Write ``y`` then the predictors, full precision, RFC-4180 quoting."""
    X = np.asarray(X, dtype=float)
    names = names or [f"x{j + 1}" for j in range(X.shape[1])]
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([response_name] + list(names))
        numeric_y = np.asarray(y).dtype.kind in "biuf"
        for yi, row in zip(y, X):
            writer.writerow([_fmt(yi) if numeric_y else yi] + [_fmt(v) for v in row])
    finally:
        if own:
            fh.close()


def _finite_list(a):
    return [float(v) if math.isfinite(v) else None for v in np.asarray(a, dtype=float)]


def result_to_dict(result: ScreeningResult, names, config: ScreenConfig) -> dict:
    """JSON-ready view of a screening result (schema ``wlscreen.screening/1``).

    Fields: ``schema``; ``n``, ``p``; ``config`` (h, c_n1, c_n2, d_mode,
    d_fixed, top_k); ``slices`` (count per slice); ``d_hat``; ``p0_hat``;
    ``selected`` (names, best first); ``ranking`` (all names, best first);
    ``scores`` (name -> score, file order); ``d_trace`` / ``g_trace``
    (criterion values at r = 1, 2, ...; ``g_trace`` is empty when ``top_k``
    overrides the model-size search); ``singular_values``.
    """
    names = list(names)
    return {
        "schema": RESULT_SCHEMA,
        "n": int(result.slicing.assignments.shape[0]),
        "p": len(names),
        "config": {
            "h": config.h,
            "c_n1": config.c_n1,
            "c_n2": config.c_n2,
            "d_mode": config.d_mode,
            "d_fixed": config.d_fixed,
            "top_k": config.top_k,
        },
        "slices": [int(c) for c in result.slicing.counts],
        "d_hat": int(result.d_hat),
        "p0_hat": int(result.p0_hat),
        "selected": [names[j] for j in result.selected],
        "ranking": [names[j] for j in result.ranking],
        "scores": {names[j]: float(result.scores[j]) for j in range(len(names))},
        "d_trace": _finite_list(result.d_trace),
        "g_trace": _finite_list(result.g_trace),
        "singular_values": _finite_list(result.singular_values),
    }


def render_result(result: ScreeningResult, names, config: ScreenConfig, fmt="table") -> str:
    names = list(names)
    if fmt == "json":
        return json.dumps(result_to_dict(result, names, config), indent=2) + "\n"
    chosen = set(int(j) for j in result.selected)
    if fmt == "csv":
        lines = ["rank,predictor,score,selected"]
        for pos, j in enumerate(result.ranking, start=1):
            name = names[j]
            if any(ch in name for ch in ',"\n'):
                name = '"' + name.replace('"', '""') + '"'
            lines.append(f"{pos},{name},{_fmt(result.scores[j])},{int(j in chosen)}")
        return "\n".join(lines) + "\n"
    if fmt != "table":
        raise InvalidInput(f"unknown output format {fmt!r}")
    width = max(len("predictor"), *(len(n) for n in names))
    out = [
        f"samples: {result.slicing.assignments.shape[0]}  predictors: {len(names)}  "
        f"slices: {result.slicing.h}",
        f"spike count d_hat: {result.d_hat}",
        f"selected p0_hat: {result.p0_hat}",
        "selected: " + ", ".join(names[j] for j in result.selected),
        "",
        f"{'rank':>5}  {'predictor':<{width}}  {'score':>14}  sel",
    ]
    for pos, j in enumerate(result.ranking, start=1):
        mark = "*" if j in chosen else ""
        out.append(f"{pos:>5}  {names[j]:<{width}}  {result.scores[j]:>14.6e}  {mark}")
    return "\n".join(out) + "\n"
