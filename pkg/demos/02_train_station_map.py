"""
Training a 10 x 3 map on interval data
======================================

A batch self-organizing map is trained on 265 synthetic weather stations
using the Hausdorff dissimilarity, one referent station per neuron. The same
training is then repeated for every dissimilarity and the clusterings are
compared by how well they keep nearby stations together (longitude and
latitude distortions).
"""
import logging

import numpy as np

from dissom import KernelSchedule, MapTopology, build_matrix, compare_measures, quantization_error, train
from dissom.evaluation import TABLE_ORDER
from dissom.synth import geo_intervals

logging.basicConfig(level=logging.WARNING)

stations = geo_intervals(265, seed=0)
topology = MapTopology(10, 3)
schedule = KernelSchedule.default_for(topology)  # T from 5 down to 0.5 over 50 iterations
matrix = build_matrix(stations, "hausdorff_l2")

trained = train(matrix, topology, schedule, q=1, seed=0)

# The cost is recorded after every iteration; it shrinks with the neighborhood.
print("cost, first / last iteration:", trained.cost_trace[0], trained.cost_trace[-1])
print("quantization error:", quantization_error(trained, matrix))

# Each neuron is represented by an actual station.
for c in range(0, topology.m, 10):
    ref = trained.referents[c, 0]
    members = np.flatnonzero(trained.winners == c)
    print(f"neuron {c:2d}: referent {stations.labels[ref]}, {members.size} stations")

# Comparison across dissimilarities, laid out like a results table.
report = compare_measures(stations, TABLE_ORDER, topology, schedule, seed=0)
print(report.to_text())
