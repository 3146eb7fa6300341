"""Ranked-list CSV ingestion and machine-readable report output.

The ranked-list file is comma-separated UTF-8 with a header row:
optional `realization_id`, then `rank` (1-based), `item_id`, and either
one `p_<label>` column per class or a single `score` column.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .alignment import AlignmentVector, ClassSpace, RealizationSet
from .errors import ParseError

_ROW_SUM_TOL = 1e-6
_FLOAT_FMT = "%.12g"


@dataclass(frozen=True)
class RankedListData:
    """Parsed file: the realization set plus per-realization item ids."""

    realizations: RealizationSet
    realization_ids: tuple[str, ...]
    item_ids: tuple[tuple[str, ...], ...]
    had_realization_column: bool

    @property
    def class_space(self) -> ClassSpace:
        return self.realizations.class_space


def _classify_header(header):
    known = {"realization_id", "rank", "item_id"}
    p_cols = [h for h in header if h.startswith("p_")]
    has_score = "score" in header
    extra = [h for h in header if h not in known and not h.startswith("p_") and h != "score"]
    if "rank" not in header or "item_id" not in header:
        raise ParseError("header must contain 'rank' and 'item_id' columns", line=1)
    if extra:
        raise ParseError(f"unrecognized columns: {', '.join(extra)}", line=1)
    if has_score and p_cols:
        raise ParseError("file mixes 'score' and 'p_' columns", line=1)
    if not has_score and not p_cols:
        raise ParseError("need either a 'score' column or 'p_<label>' columns", line=1)
    if p_cols and len(p_cols) < 2:
        raise ParseError("need at least two 'p_<label>' columns", line=1)
    return p_cols, has_score


def _parse_float(text, line, what):
    try:
        return float(text)
    except (TypeError, ValueError):
        raise ParseError(f"{what} is not a number: {text!r}", line=line) from None


def read_ranked_list_file(path, missing_score: str | None = None) -> RankedListData:
    """Parse a ranked-list CSV into a RealizationSet.

    missing_score: None rejects empty score cells; "zero"/"renormalize"
    admit them as NaN for the exposure stage to handle.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError("empty file", line=1)
        header = list(reader.fieldnames)
        p_cols, has_score = _classify_header(header)
        has_realization = "realization_id" in header
        labels = [c[2:] for c in p_cols]
        space = ClassSpace.categorical(labels) if p_cols else ClassSpace.scalar()

        groups: dict[str, list] = {}
        order: list[str] = []
        for line, row in enumerate(reader, start=2):
            if any(row.get(c) is None for c in header):
                raise ParseError("row has fewer fields than the header", line=line)
            rid = row["realization_id"] if has_realization else ""
            if rid not in groups:
                groups[rid] = []
                order.append(rid)
            rank = row["rank"]
            try:
                rank = int(rank)
            except ValueError:
                raise ParseError(f"rank is not an integer: {rank!r}", line=line) from None
            if has_score:
                cell = row["score"].strip()
                if cell == "":
                    if missing_score is None:
                        raise ParseError("empty score cell (see --missing-score)", line=line)
                    values = math.nan
                else:
                    values = _parse_float(cell, line, "score")
                    if abs(values) > 1.0 + _ROW_SUM_TOL:
                        raise ParseError(f"score {values} outside [-1, 1]", line=line)
            else:
                values = [_parse_float(row[c], line, c) for c in p_cols]
                total = sum(values)
                if abs(total - 1.0) > _ROW_SUM_TOL:
                    raise ParseError(
                        f"class probabilities sum to {total:.8g}, not 1", line=line
                    )
            groups[rid].append((line, rank, row["item_id"], values))

    if not order:
        raise ParseError("file contains no data rows", line=2)

    realizations, item_ids = [], []
    for rid in order:
        rows = groups[rid]
        n = len(rows)
        seen = sorted(r[1] for r in rows)
        if seen != list(range(1, n + 1)):
            bad = next(r for r in rows if seen.count(r[1]) > 1 or not 1 <= r[1] <= n)
            raise ParseError(
                f"realization {rid or '<single>'}: ranks are not exactly 1..{n}",
                line=bad[0],
            )
        rows.sort(key=lambda r: r[1])
        item_ids.append(tuple(r[2] for r in rows))
        values = np.array([r[3] for r in rows], dtype=float)
        realizations.append(AlignmentVector(space, values))

    return RankedListData(
        realizations=RealizationSet(tuple(realizations)),
        realization_ids=tuple(order),
        item_ids=tuple(item_ids),
        had_realization_column=has_realization,
    )


def read_pool_file(path) -> tuple[ClassSpace, np.ndarray]:
    """Parse an unordered unique-item pool: same column grammar, but rank
    structure is ignored; every row is one pool item."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError("empty file", line=1)
        header = list(reader.fieldnames)
        p_cols = [h for h in header if h.startswith("p_")]
        has_score = "score" in header
        if not p_cols and not has_score:
            raise ParseError("pool file needs 'p_<label>' or 'score' columns", line=1)
        labels = [c[2:] for c in p_cols]
        space = ClassSpace.categorical(labels) if p_cols else ClassSpace.scalar()
        rows = []
        for line, row in enumerate(reader, start=2):
            if has_score:
                rows.append(_parse_float(row["score"], line, "score"))
            else:
                vals = [_parse_float(row[c], line, c) for c in p_cols]
                if abs(sum(vals) - 1.0) > _ROW_SUM_TOL:
                    raise ParseError("class probabilities do not sum to 1", line=line)
                rows.append(vals)
    if not rows:
        raise ParseError("pool file contains no data rows", line=2)
    return space, np.array(rows, dtype=float)


def _fmt(x) -> str:
    if isinstance(x, float) and math.isnan(x):
        return ""
    return _FLOAT_FMT % x


def _atomic_write(path, write_body, newline=""):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline=newline) as fh:
            write_body(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_ranked_list_file(
    path,
    realizations: RealizationSet,
    realization_ids=None,
    item_ids=None,
    include_realization_column=None,
):
    """Write a RealizationSet back to the CSV format (12 significant
    digits, atomic replace)."""
    space = realizations.class_space
    k, n = realizations.k, realizations.n
    if realization_ids is None:
        realization_ids = tuple(str(i) for i in range(k))
    if include_realization_column is None:
        include_realization_column = k > 1

    def body(fh):
        writer = csv.writer(fh)
        header = (["realization_id"] if include_realization_column else []) + ["rank", "item_id"]
        if space.labels:
            header += [f"p_{label}" for label in space.labels]
        else:
            header += ["score"]
        writer.writerow(header)
        for ri, real in enumerate(realizations.realizations):
            for rank in range(1, n + 1):
                if item_ids is not None:
                    item = item_ids[ri][rank - 1]
                else:
                    item = f"item-{realization_ids[ri]}-{rank}"
                row = ([realization_ids[ri]] if include_realization_column else []) + [rank, item]
                v = real.values[rank - 1]
                if space.labels:
                    row += [_fmt(float(x)) for x in v]
                else:
                    row += [_fmt(float(v))]
                writer.writerow(row)

    _atomic_write(path, body)


def write_report_file(path, report: dict):
    """JSON report, atomic replace."""
    def body(fh):
        json.dump(report, fh, indent=2)
        fh.write("\n")

    _atomic_write(path, body, newline="\n")


def write_curve_file(path, curve):
    """Delimited distance curve: param,distance,signed_deviation rows
    sorted ascending by param."""
    rows = sorted(curve, key=lambda r: r[0])

    def body(fh):
        writer = csv.writer(fh)
        writer.writerow(["param", "distance", "signed_deviation"])
        for p, d, s in rows:
            writer.writerow([_fmt(p), _fmt(d), _fmt(s)])

    _atomic_write(path, body)


def file_digest(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()
