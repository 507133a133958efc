"""
Visualizing the map on a classical-scaling plane
================================================

The squared dissimilarity matrix is embedded in two dimensions by classical
scaling. Items are drawn colored by their neuron, the referents are ringed
and grid neighbors are joined, which shows how the map folds into the data.
Two SVG files are written to the current directory.
"""
from dissom import KernelSchedule, MapTopology, build_matrix, classical_scaling, emit_scatter_svg, initialize, train
from dissom.synth import geo_intervals

stations = geo_intervals(265, seed=0)
matrix = build_matrix(stations, "hausdorff_l2")
embedding = classical_scaling(matrix)

# Hausdorff dissimilarities are not exactly Euclidean, so some spectral mass
# is negative and gets dropped.
print("retained eigenvalues:", embedding.eigenvalues)
print("negative eigenvalue mass:", round(embedding.negative_mass, 4))

topology = MapTopology(10, 3)
schedule = KernelSchedule.default_for(topology)

# The map before training: randomly drawn referent stations.
start = initialize(matrix, topology, q=1, seed=0, T=schedule.temperature_at(0))
with open("initial_map.svg", "w") as fh:
    emit_scatter_svg(embedding, start.winners, start.referents, topology,
                     sink=fh, labels=stations.labels)

trained = train(matrix, topology, schedule, seed=0)
with open("final_map.svg", "w") as fh:
    emit_scatter_svg(embedding, trained.winners, trained.referents, topology,
                     sink=fh, labels=stations.labels)
print("wrote initial_map.svg and final_map.svg")
