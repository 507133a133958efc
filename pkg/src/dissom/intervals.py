"""Interval-valued items and datasets.

An item is a vector of ``p`` closed intervals ``[lower_j, upper_j]``, e.g.
the monthly (min, max) temperatures of a weather station. Datasets are read
from CSV files laid out as::

    label,jan_min,jan_max,feb_min,feb_max,...,lon,lat
    Abag Qi,-24.9,-17,-22.3,-12.8,...,114.95,44.02

Interval columns come in adjacent ``<var>_min,<var>_max`` pairs; the
optional ``lon``/``lat`` columns (or any other declared metadata names) are
kept aside from the intervals so training never sees them.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import DimensionError, ParseError, ValidationError

DEFAULT_METADATA = ("lon", "lat")


@dataclass(frozen=True)
class IntervalVector:
    """An item described by ``p`` intervals."""

    label: str
    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        for j, (a, b) in enumerate(ivs):
            if math.isnan(a) or math.isnan(b):
                raise ValidationError(f"item {self.label!r}: variable {j} is NaN")
            if a > b:
                raise ValidationError(
                    f"item {self.label!r}: variable {j} has lower {a} > upper {b}"
                )

    @property
    def p(self) -> int:
        return len(self.intervals)

    @property
    def lower(self) -> np.ndarray:
        return np.array([a for a, _ in self.intervals], dtype=float)

    @property
    def upper(self) -> np.ndarray:
        return np.array([b for _, b in self.intervals], dtype=float)

    def midpoints(self) -> np.ndarray:
        return (self.lower + self.upper) / 2.0


@dataclass(frozen=True)
class IntervalDataset:
    """An ordered collection of items sharing the same ``p``.

    ``metadata`` maps attribute names (``lon``, ``lat``, ...) to arrays of
    length ``n`` aligned with ``items``. ``variables`` optionally names the
    interval variables (``jan``, ``feb``, ...).
    """

    items: tuple[IntervalVector, ...]
    metadata: dict[str, np.ndarray] = field(default_factory=dict)
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        items = tuple(self.items)
        object.__setattr__(self, "items", items)
        if not items:
            raise ValidationError("dataset must contain at least one item")
        p = items[0].p
        seen = set()
        for it in items:
            if it.p != p:
                raise DimensionError(
                    f"item {it.label!r} has {it.p} intervals, expected {p}"
                )
            if it.label in seen:
                raise ValidationError(f"duplicate item label {it.label!r}")
            seen.add(it.label)
        meta = {}
        for name, values in self.metadata.items():
            arr = np.asarray(values, dtype=float)
            if arr.shape != (len(items),):
                raise ValidationError(
                    f"metadata {name!r} has shape {arr.shape}, expected ({len(items)},)"
                )
            arr.setflags(write=False)
            meta[name] = arr
        object.__setattr__(self, "metadata", meta)
        if self.variables and len(self.variables) != p:
            raise ValidationError(f"{len(self.variables)} variable names for p={p}")
        object.__setattr__(self, "variables", tuple(self.variables))

    def __len__(self):
        return len(self.items)

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def p(self) -> int:
        return self.items[0].p

    @property
    def labels(self) -> list[str]:
        return [it.label for it in self.items]

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(lower, upper)`` as two ``(n, p)`` arrays."""
        lower = np.array([[a for a, _ in it.intervals] for it in self.items], dtype=float)
        upper = np.array([[b for _, b in it.intervals] for it in self.items], dtype=float)
        return lower, upper


def to_midpoints(dataset: IntervalDataset) -> np.ndarray:
    """Reduce every interval to its center; returns an ``(n, p)`` array."""
    lower, upper = dataset.bounds()
    return (lower + upper) / 2.0


def _to_float(cell: str, row: int, col: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(f"non-numeric cell {cell!r} at row {row}, column {col}") from None
    if math.isnan(value):
        raise ParseError(f"missing value at row {row}, column {col}")
    return value


def _skip_comments(lines):
    """Drop ``#`` lines preceding the header."""
    lines = iter(lines)
    for line in lines:
        if not line.startswith("#"):
            yield line
            break
    yield from lines


def parse_interval_csv(
    stream: TextIO | str,
    metadata: Sequence[str] = DEFAULT_METADATA,
) -> IntervalDataset:
    """Parse an interval dataset from CSV text.

    Parameters
    ----------
    stream : file-like or str
        CSV content. The first column holds item labels and the header row
        is mandatory.
    metadata : sequence of str
        Column names treated as per-item real attributes rather than
        interval bounds. Only those actually present in the header are read.

    Returns
    -------
    IntervalDataset

    Raises
    ------
    ParseError
        Ragged rows, non-numeric or empty cells, or an odd number of
        interval columns.
    ValidationError
        An interval with lower bound above its upper bound.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(_skip_comments(stream))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("empty input: header row required") from None
    if len(header) < 2:
        raise ParseError("header must have a label column and at least one more column")

    meta_cols = [k for k, name in enumerate(header) if k > 0 and name in metadata]
    iv_cols = [k for k in range(1, len(header)) if k not in meta_cols]
    if len(iv_cols) % 2:
        raise ParseError(f"{len(iv_cols)} interval columns: expected (min, max) pairs")
    variables = []
    for lo, hi in zip(iv_cols[::2], iv_cols[1::2]):
        lo_name, hi_name = header[lo], header[hi]
        if lo_name.endswith("_min") and hi_name.endswith("_max"):
            variables.append(lo_name[: -len("_min")])
        else:
            variables.append(f"{lo_name}/{hi_name}")

    items = []
    meta_values: dict[str, list[float]] = {header[k]: [] for k in meta_cols}
    for row_idx, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise ParseError(
                f"row {row_idx} has {len(row)} cells, header has {len(header)}"
            )
        label = row[0].strip()
        pairs = [
            (_to_float(row[lo], row_idx, lo), _to_float(row[hi], row_idx, hi))
            for lo, hi in zip(iv_cols[::2], iv_cols[1::2])
        ]
        for j, (a, b) in enumerate(pairs):
            if a > b:
                raise ValidationError(
                    f"item {label!r} (row {row_idx}): variable {variables[j]!r} "
                    f"has lower {a} > upper {b}"
                )
        items.append(IntervalVector(label, tuple(pairs)))
        for k in meta_cols:
            meta_values[header[k]].append(_to_float(row[k], row_idx, k))

    if not items:
        raise ParseError("no data rows")
    return IntervalDataset(tuple(items), meta_values, tuple(variables))


def read_interval_csv(path, metadata: Sequence[str] = DEFAULT_METADATA) -> IntervalDataset:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_interval_csv(fh, metadata)


def format_interval_csv(dataset: IntervalDataset, sink: TextIO | None = None) -> str | None:
    """Serialize ``dataset`` in the layout read by :func:`parse_interval_csv`.

    Reals are rendered with ``repr`` so re-parsing is bit-exact. Returns the
    text when ``sink`` is None.
    """
    out = io.StringIO() if sink is None else sink
    writer = csv.writer(out, lineterminator="\n")
    names = dataset.variables or tuple(f"v{j}" for j in range(dataset.p))
    meta_names = list(dataset.metadata)
    header = ["label"]
    for name in names:
        header += [f"{name}_min", f"{name}_max"]
    writer.writerow(header + meta_names)
    for i, it in enumerate(dataset.items):
        cells: list[str] = [it.label]
        for a, b in it.intervals:
            cells += [repr(a), repr(b)]
        cells += [repr(float(dataset.metadata[k][i])) for k in meta_names]
        writer.writerow(cells)
    if sink is None:
        return out.getvalue()
    return None


def from_arrays(
    lower: np.ndarray,
    upper: np.ndarray,
    labels: Iterable[str] | None = None,
    metadata: dict[str, np.ndarray] | None = None,
    variables: Sequence[str] = (),
) -> IntervalDataset:
    """Build a dataset from ``(n, p)`` arrays of lower and upper bounds."""
    lower = np.atleast_2d(np.asarray(lower, dtype=float))
    upper = np.atleast_2d(np.asarray(upper, dtype=float))
    if lower.shape != upper.shape:
        raise DimensionError(f"bounds shapes differ: {lower.shape} vs {upper.shape}")
    n = lower.shape[0]
    labels = [f"item{i}" for i in range(n)] if labels is None else list(labels)
    items = tuple(
        IntervalVector(labels[i], tuple(zip(lower[i].tolist(), upper[i].tolist())))
        for i in range(n)
    )
    return IntervalDataset(items, metadata or {}, tuple(variables))
