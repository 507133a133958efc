"""Dissimilarities between interval items and the squared-dissimilarity matrix.

Four measures are provided:

``hausdorff_l2``
    L2 combination of the coordinate-wise Hausdorff distances
    ``max(|a_j - a'_j|, |b_j - b'_j|)``. A metric.
``euclidean_interval``
    ``1/4 * sum_j ((a_j - a'_j) + (b_j - b'_j))**2``, i.e. the squared
    Euclidean distance between interval midpoints.
``vertex_type``
    Sum of squared Euclidean distances between the ``2**p`` corresponding
    vertices of the two hyperrectangles, evaluated in closed form.
``numeric_euclidean``
    Plain Euclidean distance between midpoint vectors (the non-symbolic
    baseline).

The trainer only ever consumes squared dissimilarities, so
:func:`build_matrix` stores ``d**2``. A measure whose value is already a
squared quantity can be declared with ``measure_is_squared=True`` to skip the
extra squaring.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .errors import DimensionError, ParseError, ValidationError
from .intervals import IntervalDataset, IntervalVector, _skip_comments, to_midpoints

MEASURES = ("hausdorff_l2", "euclidean_interval", "vertex_type", "numeric_euclidean")


def _bounds_pair(q1: IntervalVector, q2: IntervalVector):
    if q1.p != q2.p:
        raise DimensionError(f"items have p={q1.p} and p={q2.p}")
    return q1.lower, q1.upper, q2.lower, q2.upper


def hausdorff_l2(q1: IntervalVector, q2: IntervalVector) -> float:
    a, b, a2, b2 = _bounds_pair(q1, q2)
    per_var = np.maximum(np.abs(a - a2), np.abs(b - b2))
    return float(math.sqrt(np.sum(per_var**2)))


def euclidean_interval(q1: IntervalVector, q2: IntervalVector) -> float:
    a, b, a2, b2 = _bounds_pair(q1, q2)
    return float(0.25 * np.sum(((a - a2) + (b - b2)) ** 2))


def vertex_type(q1: IntervalVector, q2: IntervalVector) -> float:
    # Each coordinate takes the lower endpoint in half of the 2**p vertex
    # pairs and the upper endpoint in the other half.
    a, b, a2, b2 = _bounds_pair(q1, q2)
    return float(2.0 ** (q1.p - 1) * np.sum((a - a2) ** 2 + (b - b2) ** 2))


def numeric_euclidean(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionError(f"vectors have shapes {x.shape} and {y.shape}")
    return float(math.sqrt(np.sum((x - y) ** 2)))


def dissimilarity(kind: str, q1: IntervalVector, q2: IntervalVector) -> float:
    """Evaluate measure ``kind`` on two items (midpoints for ``numeric_euclidean``)."""
    if kind == "hausdorff_l2":
        return hausdorff_l2(q1, q2)
    if kind == "euclidean_interval":
        return euclidean_interval(q1, q2)
    if kind == "vertex_type":
        return vertex_type(q1, q2)
    if kind == "numeric_euclidean":
        if q1.p != q2.p:
            raise DimensionError(f"items have p={q1.p} and p={q2.p}")
        return numeric_euclidean(q1.midpoints(), q2.midpoints())
    raise ValidationError(f"unknown measure {kind!r}; choose from {', '.join(MEASURES)}")


@dataclass(frozen=True)
class DissimilarityMatrix:
    """Symmetric ``(n, n)`` matrix of squared dissimilarities.

    ``values[i, j]`` holds ``d(z_i, z_j)**2``. The array is made read-only on
    construction.
    """

    values: np.ndarray
    labels: tuple[str, ...]
    measure: str = "external"
    measure_is_squared: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        object.__setattr__(self, "labels", tuple(self.labels))
        validate_matrix(values, self.labels)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def validate_matrix(values: np.ndarray, labels: Sequence[str] = ()) -> None:
    """Raise :class:`ValidationError` unless ``values`` is a valid d² matrix."""
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {values.shape}")
    n = values.shape[0]
    if n < 1:
        raise ValidationError("matrix must have at least one item")
    if labels and len(labels) != n:
        raise ValidationError(f"{len(labels)} labels for an {n}x{n} matrix")
    if len(set(labels)) != len(labels):
        raise ValidationError("matrix labels must be unique")
    if not np.all(np.isfinite(values)):
        raise ValidationError("matrix contains non-finite entries")
    if np.any(values < 0):
        i, j = np.argwhere(values < 0)[0]
        raise ValidationError(f"negative dissimilarity at ({i}, {j}): {values[i, j]}")
    if np.any(np.diag(values) != 0):
        i = int(np.flatnonzero(np.diag(values))[0])
        raise ValidationError(f"nonzero diagonal at item {i}")
    if not np.array_equal(values, values.T):
        i, j = np.argwhere(values != values.T)[0]
        raise ValidationError(
            f"matrix is not symmetric: ({i}, {j}) = {values[i, j]} but ({j}, {i}) = {values[j, i]}"
        )


def _row_values(kind: str, lower: np.ndarray, upper: np.ndarray, mids: np.ndarray, i: int):
    """Measure between item ``i`` and items ``0..i`` (inclusive), vectorized."""
    lo, up = lower[: i + 1], upper[: i + 1]
    da = lower[i] - lo
    db = upper[i] - up
    if kind == "hausdorff_l2":
        return np.sqrt(np.sum(np.maximum(np.abs(da), np.abs(db)) ** 2, axis=1))
    if kind == "euclidean_interval":
        return 0.25 * np.sum((da + db) ** 2, axis=1)
    if kind == "vertex_type":
        return 2.0 ** (lower.shape[1] - 1) * np.sum(da**2 + db**2, axis=1)
    if kind == "numeric_euclidean":
        return np.sqrt(np.sum((mids[i] - mids[: i + 1]) ** 2, axis=1))
    raise ValidationError(f"unknown measure {kind!r}; choose from {', '.join(MEASURES)}")


def build_matrix(
    dataset: IntervalDataset,
    measure: str = "hausdorff_l2",
    measure_is_squared: bool = False,
    threads: int = 1,
) -> DissimilarityMatrix:
    """Precompute all pairwise squared dissimilarities.

    Each row of the lower triangle is computed independently and mirrored,
    so the result does not depend on ``threads``.
    """
    if measure not in MEASURES:
        raise ValidationError(f"unknown measure {measure!r}; choose from {', '.join(MEASURES)}")
    lower, upper = dataset.bounds()
    mids = to_midpoints(dataset)
    n = dataset.n
    values = np.zeros((n, n))

    def fill(i):
        d = _row_values(measure, lower, upper, mids, i)
        values[i, : i + 1] = d if measure_is_squared else d * d

    if threads > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, range(n)))
    else:
        for i in range(n):
            fill(i)
    np.fill_diagonal(values, 0.0)
    il = np.tril_indices(n, -1)
    values.T[il] = values[il]
    return DissimilarityMatrix(values, tuple(dataset.labels), measure, measure_is_squared)


def write_matrix(matrix: DissimilarityMatrix, sink: TextIO | None = None) -> str | None:
    """Dump ``matrix`` as text: ``n`` on the first line, then one row per item.

    Row ``i`` is ``label,v_i0,...,v_ii`` (row-major lower triangle including
    the zero diagonal). Values are rendered with ``repr`` for exact re-reading.
    """
    out = io.StringIO() if sink is None else sink
    out.write(f"{matrix.n}\n")
    for i, label in enumerate(matrix.labels):
        row = ",".join(repr(float(v)) for v in matrix.values[i, : i + 1])
        out.write(f"{_quote(label)},{row}\n")
    if sink is None:
        return out.getvalue()
    return None


def _quote(label: str) -> str:
    if any(ch in label for ch in ',"\n'):
        return '"' + label.replace('"', '""') + '"'
    return label


def read_matrix(stream: TextIO | str) -> DissimilarityMatrix:
    """Read a matrix written by :func:`write_matrix`.

    Full square rows (``n`` values each) are accepted too; they must then be
    exactly symmetric.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(_skip_comments(stream))
    try:
        first = next(reader)
        n = int(first[0])
    except (StopIteration, ValueError, IndexError):
        raise ParseError("matrix file must start with the item count") from None
    if n < 1:
        raise ParseError(f"invalid item count {n}")
    rows = [r for r in reader if r and any(c.strip() for c in r)]
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, found {len(rows)}")
    widths = {len(r) - 1 for r in rows}
    full = widths == {n}
    values = np.zeros((n, n))
    labels = []
    for i, row in enumerate(rows):
        expected = n if full else i + 1
        if len(row) - 1 != expected:
            raise ParseError(f"row {i + 1} has {len(row) - 1} values, expected {expected}")
        labels.append(row[0])
        try:
            vals = [float(c) for c in row[1:]]
        except ValueError:
            raise ParseError(f"non-numeric value in row {i + 1}") from None
        values[i, : len(vals)] = vals
    if not full:
        il = np.tril_indices(n, -1)
        values.T[il] = values[il]
    return DissimilarityMatrix(values, tuple(labels))
