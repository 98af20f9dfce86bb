"""Trust graphs, score tables and complete dense blocks.

Rows of every matrix are trustees (objects) and columns are trustors
(subjects).  Missing ratings are absent, never zero: a zero is a real score.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .exceptions import MissingCellError, TrustDataError

WIDE_CSV = "wide-csv"
LONG_CSV = "long-csv"
JSON = "json"
FORMATS = (WIDE_CSV, LONG_CSV, JSON)
LONG_HEADER = ["trustor", "trustee", "rating"]


def _finite(value, where) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise TrustDataError(f"{where}: not a number: {value!r}") from None
    if not math.isfinite(x):
        raise TrustDataError(f"{where}: non-finite rating {value!r}")
    return x


def _unique(ids, what) -> tuple:
    ids = tuple(ids)
    seen = set()
    for x in ids:
        if x in seen:
            raise TrustDataError(f"duplicate {what} id {x!r}")
        seen.add(x)
    return ids


@dataclass(frozen=True)
class TrustStatement:
    """One edge ``trustor -[concept_label, rating]-> trustee``."""

    trustor: Hashable
    trustee: Hashable
    rating: float
    concept_label: Optional[Hashable] = None

    def __post_init__(self):
        object.__setattr__(
            self, "rating", _finite(self.rating, f"({self.trustee},{self.trustor})")
        )


@dataclass(frozen=True)
class TrustGraph:
    """Bipartite labelled graph of trust statements."""

    subjects: tuple
    objects: tuple
    edges: frozenset

    def __post_init__(self):
        subjects = _unique(self.subjects, "subject")
        objects = _unique(self.objects, "object")
        object.__setattr__(self, "subjects", subjects)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "edges", frozenset(self.edges))
        sset, oset = set(subjects), set(objects)
        keys = set()
        for edge in self.edges:
            if edge.trustor not in sset:
                raise TrustDataError(f"edge trustor {edge.trustor!r} is not a subject")
            if edge.trustee not in oset:
                raise TrustDataError(f"edge trustee {edge.trustee!r} is not an object")
            key = (edge.trustor, edge.trustee, edge.concept_label)
            if key in keys:
                raise TrustDataError(f"duplicate statement {key!r}")
            keys.add(key)

    def to_table(self) -> "ScoreTable":
        """Collapse to a score table; fails if two labels rate the same pair."""
        cells = {}
        for edge in sorted(self.edges, key=lambda e: (str(e.trustee), str(e.trustor))):
            key = (edge.trustee, edge.trustor)
            if key in cells:
                raise TrustDataError(f"duplicate cell ({edge.trustee},{edge.trustor})")
            cells[key] = edge.rating
        return ScoreTable(self.objects, self.subjects, cells)


@dataclass(frozen=True)
class ScoreTable:
    """Partial trustee x trustor rating table (the raw trust graph data)."""

    rows: tuple
    cols: tuple
    cells: Mapping = field(default_factory=dict)

    def __post_init__(self):
        rows = _unique(self.rows, "object")
        cols = _unique(self.cols, "subject")
        rset, cset = set(rows), set(cols)
        cells = {}
        for (r, c), value in dict(self.cells).items():
            if r not in rset or c not in cset:
                raise TrustDataError(f"cell ({r},{c}) references an undeclared id")
            cells[(r, c)] = _finite(value, f"({r},{c})")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "cells", MappingProxyType(cells))

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    def __len__(self):
        return len(self.cells)

    def filled_in_row(self, row) -> int:
        return sum(1 for c in self.cols if (row, c) in self.cells)

    def mask(self) -> np.ndarray:
        """Boolean ``rows x cols`` array, True where a rating exists."""
        out = np.zeros(self.shape, dtype=bool)
        ri = {r: i for i, r in enumerate(self.rows)}
        ci = {c: j for j, c in enumerate(self.cols)}
        for r, c in self.cells:
            out[ri[r], ci[c]] = True
        return out

    def to_graph(self) -> TrustGraph:
        edges = [TrustStatement(c, r, v) for (r, c), v in self.cells.items()]
        return TrustGraph(self.cols, self.rows, frozenset(edges))

    def to_json(self) -> dict:
        cells = [
            {"trustee": r, "trustor": c, "rating": self.cells[(r, c)]}
            for r in self.rows
            for c in self.cols
            if (r, c) in self.cells
        ]
        return {"subjects": list(self.cols), "objects": list(self.rows), "cells": cells}

    def to_wide_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([""] + list(self.cols))
        for r in self.rows:
            writer.writerow(
                [r] + [repr(self.cells[(r, c)]) if (r, c) in self.cells else "" for c in self.cols]
            )
        return buf.getvalue()


@dataclass(frozen=True, eq=False)
class DenseTrustMatrix:
    """Complete trustee x trustor block with labelled rows and columns."""

    rows: tuple
    cols: tuple
    values: np.ndarray

    def __post_init__(self):
        rows = _unique(self.rows, "object")
        cols = _unique(self.cols, "subject")
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape != (len(rows), len(cols)):
            raise TrustDataError(
                f"values shape {values.shape} does not match {len(rows)}x{len(cols)} ids"
            )
        if not np.all(np.isfinite(values)):
            raise TrustDataError("dense block contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, values, rows=None, cols=None) -> "DenseTrustMatrix":
        values = np.asarray(values, dtype=float)
        if values.ndim != 2:
            raise TrustDataError(f"expected a 2-d array, got {values.ndim}-d")
        if rows is None:
            rows = range(values.shape[0])
        if cols is None:
            cols = range(values.shape[1])
        return cls(tuple(rows), tuple(cols), values)

    @property
    def shape(self):
        return self.values.shape

    def __eq__(self, other):
        if not isinstance(other, DenseTrustMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def cell(self, obj, subj) -> float:
        return float(self.values[self.rows.index(obj), self.cols.index(subj)])

    def scaled(self, factor: float) -> "DenseTrustMatrix":
        return DenseTrustMatrix(self.rows, self.cols, self.values * factor)


# -- ingestion ---------------------------------------------------------------


def _read_wide(text: str) -> ScoreTable:
    reader = csv.reader(io.StringIO(text))
    lines = [line for line in reader if line and any(cell.strip() for cell in line)]
    if not lines:
        raise TrustDataError("empty document: missing header row")
    cols = [c.strip() for c in lines[0][1:]]
    rows, cells = [], {}
    for lineno, line in enumerate(lines[1:], start=2):
        if len(line) > len(cols) + 1:
            raise TrustDataError(f"line {lineno}: {len(line) - 1} cells for {len(cols)} columns")
        row = line[0].strip()
        if row in rows:
            raise TrustDataError(f"duplicate cell: row {row!r} appears twice")
        rows.append(row)
        for col, raw in zip(cols, line[1:]):
            raw = raw.strip()
            if raw:
                cells[(row, col)] = _finite(raw, f"line {lineno}, ({row},{col})")
    return ScoreTable(tuple(rows), tuple(cols), cells)


def _read_long(text: str) -> ScoreTable:
    reader = csv.reader(io.StringIO(text))
    lines = [line for line in reader if line and any(cell.strip() for cell in line)]
    if not lines or [h.strip() for h in lines[0]] != LONG_HEADER:
        raise TrustDataError("long CSV must start with header trustor,trustee,rating")
    subjects, objects, cells = {}, {}, {}
    for lineno, line in enumerate(lines[1:], start=2):
        if len(line) != 3:
            raise TrustDataError(f"line {lineno}: expected 3 fields, got {len(line)}")
        trustor, trustee, raw = (x.strip() for x in line)
        if (trustee, trustor) in cells:
            raise TrustDataError(f"duplicate cell ({trustee},{trustor})")
        subjects.setdefault(trustor, None)
        objects.setdefault(trustee, None)
        cells[(trustee, trustor)] = _finite(raw, f"line {lineno}")
    return ScoreTable(tuple(objects), tuple(subjects), cells)


def _read_json(text: str) -> ScoreTable:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TrustDataError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or not {"subjects", "objects", "cells"} <= doc.keys():
        raise TrustDataError("JSON document needs 'subjects', 'objects' and 'cells'")
    cells = {}
    for i, cell in enumerate(doc["cells"]):
        try:
            key = (cell["trustee"], cell["trustor"])
            raw = cell["rating"]
        except (KeyError, TypeError):
            raise TrustDataError(f"cells[{i}]: needs trustee, trustor and rating") from None
        if key in cells:
            raise TrustDataError(f"duplicate cell ({key[0]},{key[1]})")
        if isinstance(raw, bool) or raw is None:
            raise TrustDataError(f"cells[{i}]: not a number: {raw!r}")
        cells[key] = _finite(raw, f"cells[{i}]")
    return ScoreTable(tuple(doc["objects"]), tuple(doc["subjects"]), cells)


_READERS = {WIDE_CSV: _read_wide, LONG_CSV: _read_long, JSON: _read_json}


def guess_format(text: str, path: Optional[str] = None) -> str:
    if path is not None and str(path).lower().endswith(".json"):
        return JSON
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return JSON
    first = stripped.splitlines()[0] if stripped else ""
    if [h.strip() for h in first.split(",")] == LONG_HEADER:
        return LONG_CSV
    return WIDE_CSV


def parse_scores(text: str, fmt: Optional[str] = None) -> ScoreTable:
    """Parse a score-table document given as a string."""
    fmt = fmt or guess_format(text)
    if fmt not in _READERS:
        raise TrustDataError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    return _READERS[fmt](text)


def ingest_scores(source, fmt: Optional[str] = None) -> ScoreTable:
    """Read a score table from a path or a text file object.

    The format is inferred from the extension and header when not given.
    Missing cells stay absent from the returned table.
    """
    if hasattr(source, "read"):
        text, path = source.read(), getattr(source, "name", None)
    else:
        path = os.fspath(source)
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    return parse_scores(text, fmt or guess_format(text, path))


# -- blocks ------------------------------------------------------------------


def extract_block(table: ScoreTable, objs: Sequence, subjs: Sequence) -> DenseTrustMatrix:
    """Return the complete ``objs x subjs`` matrix, in the order given.

    Raises MissingCellError naming the first (row-major) missing cell.
    """
    objs, subjs = tuple(objs), tuple(subjs)
    for o in objs:
        if o not in table.rows:
            raise TrustDataError(f"unknown object {o!r}")
    for s in subjs:
        if s not in table.cols:
            raise TrustDataError(f"unknown subject {s!r}")
    values = np.empty((len(objs), len(subjs)))
    for i, o in enumerate(objs):
        for j, s in enumerate(subjs):
            try:
                values[i, j] = table.cells[(o, s)]
            except KeyError:
                raise MissingCellError(o, s) from None
    return DenseTrustMatrix(objs, subjs, values)


def greedy_complete_block(table: ScoreTable) -> tuple[list, list]:
    """Find a complete block by repeatedly dropping the worst row or column.

    Lines without any rating go first, since they can never be part of a
    block; after that the line with the most missing cells.  Ties drop the
    line with fewer ratings, then columns before rows, then the later line.
    """
    mask = table.mask()
    rows = list(range(mask.shape[0]))
    cols = list(range(mask.shape[1]))
    while rows and cols:
        sub = mask[np.ix_(rows, cols)]
        row_missing = (~sub).sum(axis=1)
        col_missing = (~sub).sum(axis=0)
        if not row_missing.any():
            break
        row_filled = len(cols) - row_missing
        col_filled = len(rows) - col_missing
        candidates = [
            (row_filled[i] == 0, int(row_missing[i]), -int(row_filled[i]), 0, i, "row")
            for i in range(len(rows))
        ] + [
            (col_filled[j] == 0, int(col_missing[j]), -int(col_filled[j]), 1, j, "col")
            for j in range(len(cols))
        ]
        *_, pos, kind = max(candidates)
        if kind == "row":
            del rows[pos]
        else:
            del cols[pos]
    if not rows or not cols:
        raise TrustDataError("no non-empty complete block exists")
    objs = [table.rows[i] for i in rows]
    subjs = [table.cols[j] for j in cols]
    extract_block(table, objs, subjs)
    return objs, subjs


def merge_trustees(m: DenseTrustMatrix, group: Iterable, new_id) -> DenseTrustMatrix:
    """Replace the rows in ``group`` by their mean, labelled ``new_id``.

    The merged row sits where the earliest group member was.
    """
    group = list(group)
    if len(set(group)) != len(group):
        raise TrustDataError("group lists an id twice")
    if len(group) < 2:
        raise TrustDataError("merging needs at least two trustees")
    for g in group:
        if g not in m.rows:
            raise TrustDataError(f"unknown object {g!r}")
    if new_id in m.rows and new_id not in group:
        raise TrustDataError(f"object id {new_id!r} already in use")
    idx = sorted(m.rows.index(g) for g in group)
    merged = m.values[idx].mean(axis=0)
    rows, values = [], []
    for i, r in enumerate(m.rows):
        if i == idx[0]:
            rows.append(new_id)
            values.append(merged)
        elif i not in idx:
            rows.append(r)
            values.append(m.values[i])
    return DenseTrustMatrix(tuple(rows), m.cols, np.array(values))
