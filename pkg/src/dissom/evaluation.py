"""Post-hoc quality measures of a trained map.

The coordinate distortion of an attribute ``x`` (longitude, latitude, ...)
is::

    D**2 = sum_c (1/|c|) * sum_{z_i in c} (x_i - x_{referent(c)})**2

i.e. the per-cluster mean squared error summed over non-empty clusters. It
is *not* divided by the number of clusters.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dissimilarity import MEASURES, build_matrix
from .errors import ConfigurationError, ValidationError
from .intervals import IntervalDataset
from .topology import KernelSchedule, MapTopology
from .trainer import TrainedMap, train

METRIC_NAMES = {
    "euclidean_interval": ("Intervals", "Euclidean distance"),
    "vertex_type": ("Intervals", "Vertex-type distance"),
    "numeric_euclidean": ("Means(numerics)", "Euclidean distance"),
    "hausdorff_l2": ("Intervals", "Hausdorff distance"),
}

# Row order of the published comparison table.
TABLE_ORDER = ("euclidean_interval", "vertex_type", "numeric_euclidean", "hausdorff_l2")


def _single_referents(trained: TrainedMap) -> np.ndarray:
    if trained.q != 1:
        raise ConfigurationError(
            f"distortions need exactly one referent item per neuron, map has q={trained.q}"
        )
    return np.asarray(trained.referents)[:, 0]


def distortion_from_assignment(values, winners, referents) -> float:
    """Coordinate distortion for arrays ``values[n]``, ``winners[n]``, ``referents[m]``."""
    values = np.asarray(values, dtype=float)
    winners = np.asarray(winners)
    total = 0.0
    for c, ref in enumerate(referents):
        members = np.flatnonzero(winners == c)
        if members.size == 0:
            continue
        total += float(np.sum((values[members] - values[ref]) ** 2)) / members.size
    return math.sqrt(total)


def coordinate_distortion(trained: TrainedMap, dataset: IntervalDataset, attribute: str) -> float:
    """Distortion of metadata ``attribute`` (e.g. ``"lon"``) under ``trained``."""
    if attribute not in dataset.metadata:
        raise ValidationError(f"missing metadata attribute {attribute!r}")
    if tuple(dataset.labels) != tuple(trained.labels):
        raise ValidationError("map labels do not match dataset labels")
    return distortion_from_assignment(
        dataset.metadata[attribute], trained.winners, _single_referents(trained)
    )


def quantization_error(trained: TrainedMap, matrix) -> float:
    """Mean squared dissimilarity between items and their winner's referent."""
    D = matrix.values if hasattr(matrix, "values") else np.asarray(matrix)
    refs = _single_referents(trained)
    winners = np.asarray(trained.winners)
    return float(D[np.arange(len(winners)), refs[winners]].mean())


def cluster_sizes(trained: TrainedMap) -> list[int]:
    return np.bincount(trained.winners, minlength=trained.topology.m).tolist()


@dataclass
class DistortionRow:
    measure: str
    longitude_distortion: float
    latitude_distortion: float
    quantization_error: float = float("nan")
    cluster_sizes: list[int] = field(default_factory=list)

    @property
    def data_type(self) -> str:
        return METRIC_NAMES.get(self.measure, ("External", self.measure))[0]

    @property
    def metric_name(self) -> str:
        return METRIC_NAMES.get(self.measure, ("External", self.measure))[1]


@dataclass
class DistortionReport:
    rows: list[DistortionRow]

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["data_type", "measure", "used_metric", "longitude_distortion",
                    "latitude_distortion", "quantization_error", "cluster_sizes"])
        for r in self.rows:
            w.writerow([r.data_type, r.measure, r.metric_name, repr(r.longitude_distortion),
                        repr(r.latitude_distortion), repr(r.quantization_error),
                        " ".join(map(str, r.cluster_sizes))])
        return out.getvalue()

    def to_text(self) -> str:
        header = ("Data type", "Used metric", "Longitude distortion", "Latitude distortion")
        body = [(r.data_type, r.metric_name, f"{r.longitude_distortion:.6f}",
                 f"{r.latitude_distortion:.6f}") for r in self.rows]
        widths = [max(len(row[k]) for row in [header, *body]) for k in range(4)]
        lines = []
        for row in [header, *body]:
            lines.append(" | ".join(cell.ljust(wd) for cell, wd in zip(row, widths)).rstrip())
            if row is header:
                lines.append("-+-".join("-" * wd for wd in widths))
        return "\n".join(lines) + "\n"


def evaluate_map(trained: TrainedMap, dataset: IntervalDataset, matrix=None) -> DistortionRow:
    for attr in ("lon", "lat"):
        if attr not in dataset.metadata:
            raise ValidationError(f"missing metadata attribute {attr!r}")
    qe = quantization_error(trained, matrix) if matrix is not None else float("nan")
    return DistortionRow(
        trained.measure,
        coordinate_distortion(trained, dataset, "lon"),
        coordinate_distortion(trained, dataset, "lat"),
        qe,
        cluster_sizes(trained),
    )


def compare_measures(
    dataset: IntervalDataset,
    measures: Sequence[str] = TABLE_ORDER,
    topology: MapTopology | None = None,
    schedule: KernelSchedule | None = None,
    seed: int = 0,
    measure_is_squared: bool = False,
    kernel_cutoff: float = 0.0,
    threads: int = 1,
) -> DistortionReport:
    """Train one map per measure with shared settings and report distortions."""
    for attr in ("lon", "lat"):
        if attr not in dataset.metadata:
            raise ValidationError(f"missing metadata attribute {attr!r}")
    rows = []
    for measure in measures:
        if measure not in MEASURES:
            raise ValidationError(f"unknown measure {measure!r}")
        matrix = build_matrix(dataset, measure, measure_is_squared, threads)
        trained = train(matrix, topology, schedule, q=1, seed=seed,
                        kernel_cutoff=kernel_cutoff, threads=threads)
        rows.append(evaluate_map(trained, dataset, matrix))
    return DistortionReport(rows)
