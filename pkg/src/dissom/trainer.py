"""Batch self-organizing map on a dissimilarity matrix.

Every neuron ``c`` is represented by a set ``A_c`` of ``q`` data items (its
*referents*). Training alternates

* an assignment step: each item goes to the neuron minimizing the adequacy
  ``d_T(z_i, c) = sum_r K_T(delta(c, r)) * sum_{z_j in A_r} d2(z_i, z_j)``,
  ties going to the smallest neuron index;
* a representation step: each neuron independently picks the ``q`` items
  minimizing ``E_r(j) = sum_i K_T(delta(f(z_i), r)) * d2(z_i, z_j)``,
  ties going to the smallest item index.

Only the squared dissimilarity matrix is used, so any data type with a
dissimilarity can be clustered.

All reductions run in a fixed index order, so splitting the work over
threads does not change a single bit of the result.
"""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dissimilarity import DissimilarityMatrix, build_matrix
from .errors import ConfigurationError, ValidationError
from .intervals import IntervalDataset
from .topology import KernelSchedule, MapTopology

log = logging.getLogger(__name__)

RNG_ALGORITHM = "numpy.random.PCG64"


@dataclass
class ReferentAssignment:
    """Training state: ``referents`` is ``(m, q)`` item indices, ``winners`` is ``(n,)``."""

    referents: np.ndarray
    winners: np.ndarray

    def copy(self):
        return ReferentAssignment(self.referents.copy(), self.winners.copy())


def _values(matrix) -> np.ndarray:
    return matrix.values if isinstance(matrix, DissimilarityMatrix) else np.asarray(matrix, dtype=float)


def _chunks(total: int, parts: int) -> list[slice]:
    parts = max(1, min(parts, total))
    bounds = np.linspace(0, total, parts + 1).astype(int)
    return [slice(bounds[k], bounds[k + 1]) for k in range(parts)]


def _run(fn, total: int, threads: int):
    if threads <= 1 or total < 2:
        fn(slice(0, total))
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(fn, _chunks(total, threads)))


def referent_sums(D: np.ndarray, referents: np.ndarray, items=slice(None)) -> np.ndarray:
    """``R[i, r] = sum_{j in A_r} d2(z_i, z_j)`` for the selected items."""
    referents = np.asarray(referents)
    R = D[items][:, referents[:, 0]].copy()
    for k in range(1, referents.shape[1]):
        R += D[items][:, referents[:, k]]
    return R


def adequacy_matrix(D, referents, K: np.ndarray, threads: int = 1) -> np.ndarray:
    """``(n, m)`` array of adequacies of every item to every neuron."""
    D = _values(D)
    n, m = D.shape[0], K.shape[0]
    out = np.zeros((n, m))

    # Terms are summed in sorted order so that neurons whose adequacy is
    # mathematically equal (same multiset of terms) tie exactly.
    block = max(1, 2_000_000 // (m * m))

    def work(rows):
        for start in range(rows.start, rows.stop, block):
            sub = slice(start, min(start + block, rows.stop))
            R = referent_sums(D, referents, sub)
            terms = R[:, None, :] * K[None, :, :]
            terms.sort(axis=2)
            out[sub] = terms.sum(axis=2)

    _run(work, n, threads)
    return out


def adequacy(i: int, c: int, state: ReferentAssignment, matrix, topology: MapTopology,
             T: float, cutoff: float = 0.0) -> float:
    """Adequacy of item ``i`` to neuron ``c``, summed term by term."""
    D = _values(matrix)
    if not 0 <= i < D.shape[0]:
        raise IndexError(f"item index {i} out of range")
    if not 0 <= c < topology.m:
        raise IndexError(f"neuron index {c} out of range")
    K = topology.kernel_matrix(T, cutoff)
    total = 0.0
    for r in range(topology.m):
        total += K[r, c] * sum(D[i, j] for j in state.referents[r])
    return float(total)


def assign(referents, matrix, topology: MapTopology, T: float, cutoff: float = 0.0,
           threads: int = 1) -> np.ndarray:
    """Winning neuron of every item (first minimum wins ties)."""
    K = topology.kernel_matrix(T, cutoff)
    adeq = adequacy_matrix(matrix, np.asarray(referents), K, threads)
    return np.argmin(adeq, axis=1)


def cluster_sums(D: np.ndarray, winners: np.ndarray, m: int) -> np.ndarray:
    """``S[c, j] = sum over items i won by c of d2(z_i, z_j)``, shape ``(m, n)``."""
    S = np.zeros((m, D.shape[0]))
    for c in range(m):
        members = np.flatnonzero(winners == c)
        if members.size:
            S[c] = D[members].sum(axis=0)
    return S


def neuron_scores(winners, matrix, K: np.ndarray, threads: int = 1) -> np.ndarray:
    """``E_r(j)`` for every neuron ``r`` and candidate item ``j``, shape ``(m, n)``.

    Grouping items by cluster first gives ``E_r(j) = sum_c K[c, r] * S[c, j]``,
    which costs ``O(n**2 + m**2 n)`` instead of ``O(m n**2)``.
    """
    D = _values(matrix)
    winners = np.asarray(winners)
    m = K.shape[0]
    S = cluster_sums(D, winners, m)
    scores = np.zeros((m, D.shape[0]))

    def work(neurons):
        acc = np.zeros((len(range(m)[neurons]), D.shape[0]))
        for c in range(m):
            acc += K[c, neurons][:, None] * S[c][None, :]
        scores[neurons] = acc

    _run(work, m, threads)
    return scores


def represent(winners, matrix, topology: MapTopology, T: float, q: int = 1,
              cutoff: float = 0.0, previous=None, threads: int = 1) -> np.ndarray:
    """New referents, the exact minimizer of each neuron's cost.

    ``E_r`` of a ``q``-set is the sum of its members' scores, so the optimum
    is the ``q`` best-scoring items. A neuron whose kernel weights all vanish
    (only possible with a cutoff) keeps its ``previous`` referents.
    """
    D = _values(matrix)
    winners = np.asarray(winners)
    m = topology.m
    if not 1 <= q <= D.shape[0]:
        raise ConfigurationError(f"referent cardinality q={q} outside [1, {D.shape[0]}]")
    K = topology.kernel_matrix(T, cutoff)
    scores = neuron_scores(winners, D, K, threads)
    if q == 1:
        new = np.argmin(scores, axis=1)[:, None]
    else:
        new = np.argsort(scores, axis=1, kind="stable")[:, :q]
    if previous is not None:
        counts = np.bincount(winners, minlength=m).astype(float)
        weight = K.T @ counts
        dead = weight == 0
        new[dead] = np.asarray(previous)[dead]
    return new


def total_cost(state: ReferentAssignment, matrix, topology: MapTopology, T: float,
               cutoff: float = 0.0) -> float:
    """``E(f, A)``: sum over items of the adequacy to their winner."""
    K = topology.kernel_matrix(T, cutoff)
    adeq = adequacy_matrix(matrix, state.referents, K)
    return float(adeq[np.arange(adeq.shape[0]), state.winners].sum())


def cost_by_neuron(state: ReferentAssignment, matrix, topology: MapTopology, T: float,
                   cutoff: float = 0.0) -> np.ndarray:
    """Per-neuron costs ``E_r`` of the current referents; they sum to ``E``."""
    D = _values(matrix)
    K = topology.kernel_matrix(T, cutoff)
    scores = neuron_scores(state.winners, D, K)
    return np.array([scores[r, state.referents[r]].sum() for r in range(topology.m)])


def initial_referents(n: int, topology: MapTopology, q: int, seed: int) -> np.ndarray:
    """Cut a seeded random permutation of the items into ``m`` blocks of ``q``."""
    m = topology.m
    if q < 1:
        raise ConfigurationError(f"referent cardinality must be >= 1, got {q}")
    if n < m * q:
        raise ConfigurationError(
            f"not enough items for referent cardinality: n={n} < m*q={m}*{q}"
        )
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.permutation(n)[: m * q].reshape(m, q)


def initialize(matrix, topology: MapTopology, q: int, seed: int, T: float,
               cutoff: float = 0.0, threads: int = 1) -> ReferentAssignment:
    D = _values(matrix)
    referents = initial_referents(D.shape[0], topology, q, seed)
    winners = assign(referents, D, topology, T, cutoff, threads)
    return ReferentAssignment(referents, winners)


@dataclass
class TrainedMap:
    """Outcome of :func:`train` together with the settings that produced it."""

    state: ReferentAssignment
    cost_trace: list[float]
    topology: MapTopology
    schedule: KernelSchedule
    q: int
    seed: int
    labels: tuple[str, ...]
    measure: str = "external"
    measure_is_squared: bool = False
    kernel_cutoff: float = 0.0
    initial_referents: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    @property
    def winners(self) -> np.ndarray:
        return self.state.winners

    @property
    def referents(self) -> np.ndarray:
        return self.state.referents

    def config(self) -> dict:
        return {
            "rows": self.topology.rows,
            "cols": self.topology.cols,
            "q": self.q,
            "t_max": self.schedule.t_max,
            "t_min": self.schedule.t_min,
            "n_iter": self.schedule.n_iter,
            "seed": self.seed,
            "measure": self.measure,
            "measure_is_squared": self.measure_is_squared,
            "kernel_cutoff": self.kernel_cutoff,
            "rng": RNG_ALGORITHM,
            **self.extra,
        }

    def to_dict(self) -> dict:
        labels = self.labels
        return {
            "config": self.config(),
            "referents": [[labels[j] for j in row] for row in self.referents.tolist()],
            "winners": {labels[i]: int(w) for i, w in enumerate(self.winners)},
            "cost_trace": [float(e) for e in self.cost_trace],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "TrainedMap":
        try:
            cfg = doc["config"]
            labels = tuple(doc["winners"])
            index = {lab: i for i, lab in enumerate(labels)}
            referents = np.array([[index[lab] for lab in row] for row in doc["referents"]], dtype=int)
            winners = np.array([doc["winners"][lab] for lab in labels], dtype=int)
            topology = MapTopology(int(cfg["rows"]), int(cfg["cols"]))
            schedule = KernelSchedule(float(cfg["t_max"]), float(cfg["t_min"]), int(cfg["n_iter"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed map document: {exc!r}") from None
        if referents.shape != (topology.m, int(cfg["q"])):
            raise ValidationError("referent table does not match map size and q")
        known = {"rows", "cols", "q", "t_max", "t_min", "n_iter", "seed", "measure",
                 "measure_is_squared", "kernel_cutoff", "rng"}
        return cls(
            state=ReferentAssignment(referents, winners),
            cost_trace=[float(e) for e in doc.get("cost_trace", [])],
            topology=topology,
            schedule=schedule,
            q=int(cfg["q"]),
            seed=int(cfg["seed"]),
            labels=labels,
            measure=cfg.get("measure", "external"),
            measure_is_squared=bool(cfg.get("measure_is_squared", False)),
            kernel_cutoff=float(cfg.get("kernel_cutoff", 0.0)),
            extra={k: v for k, v in cfg.items() if k not in known},
        )

    @classmethod
    def from_json(cls, text: str) -> "TrainedMap":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"map file is not valid JSON: {exc}") from None
        return cls.from_dict(doc)


def train(
    data,
    topology: MapTopology | None = None,
    schedule: KernelSchedule | None = None,
    q: int = 1,
    seed: int = 0,
    measure: str = "hausdorff_l2",
    measure_is_squared: bool = False,
    kernel_cutoff: float = 0.0,
    threads: int = 1,
) -> TrainedMap:
    """Train a map on a dataset or a precomputed dissimilarity matrix.

    Parameters
    ----------
    data : IntervalDataset or DissimilarityMatrix
        Interval datasets are first turned into a matrix with ``measure``.
    topology : MapTopology, optional
        Defaults to a 10 x 3 grid.
    schedule : KernelSchedule, optional
        Defaults to ``KernelSchedule.default_for(topology)``.
    q : int
        Number of referent items per neuron.
    seed : int
        Seed of the random initial referents.
    kernel_cutoff : float
        Kernel values below this are treated as zero.
    threads : int
        Worker threads; results are identical for any value.

    Returns
    -------
    TrainedMap
        ``cost_trace[t]`` is ``E`` after iteration ``t`` at that iteration's
        temperature.
    """
    if isinstance(data, IntervalDataset):
        matrix = build_matrix(data, measure, measure_is_squared, threads)
    elif isinstance(data, DissimilarityMatrix):
        matrix = data
    else:
        raise TypeError("train expects an IntervalDataset or a DissimilarityMatrix")
    topology = topology or MapTopology(10, 3)
    schedule = schedule or KernelSchedule.default_for(topology)
    D = matrix.values

    state = initialize(D, topology, q, seed, schedule.temperature_at(0), kernel_cutoff, threads)
    start = state.referents.copy()
    trace = []
    for t in range(schedule.n_iter):
        T = schedule.temperature_at(t)
        state.winners = assign(state.referents, D, topology, T, kernel_cutoff, threads)
        state.referents = represent(state.winners, D, topology, T, q, kernel_cutoff,
                                    previous=state.referents, threads=threads)
        E = total_cost(state, D, topology, T, kernel_cutoff)
        trace.append(E)
        log.info("iteration %d/%d T=%.6g E=%.10g", t + 1, schedule.n_iter, T, E)

    return TrainedMap(
        state=state,
        cost_trace=trace,
        topology=topology,
        schedule=schedule,
        q=q,
        seed=seed,
        labels=tuple(matrix.labels),
        measure=matrix.measure,
        measure_is_squared=matrix.measure_is_squared,
        kernel_cutoff=kernel_cutoff,
        initial_referents=start,
    )
