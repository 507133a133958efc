"""
Dissimilarities between interval-valued items
=============================================

Each station is described by 12 monthly temperature intervals. Four ways of
comparing two such items are available; this script evaluates them on two
stations and shows how they relate.
"""
import numpy as np

from dissom import (
    IntervalVector,
    build_matrix,
    euclidean_interval,
    hausdorff_l2,
    numeric_euclidean,
    vertex_type,
)
from dissom.synth import geo_intervals

# Two stations, January and December only.
abag = IntervalVector("Abag Qi", ((-24.9, -17.0), (-24.7, -14.8)))
hailaer = IntervalVector("Hailaer", ((-28.6, -22.5), (-25.5, -20.0)))

print("hausdorff_l2       ", hausdorff_l2(abag, hailaer))
print("euclidean_interval ", euclidean_interval(abag, hailaer))
print("vertex_type        ", vertex_type(abag, hailaer))
print("numeric_euclidean  ", numeric_euclidean(abag.midpoints(), hailaer.midpoints()))

# The interval Euclidean measure only looks at midpoints: it is the squared
# distance between the two midpoint vectors.
print(np.isclose(euclidean_interval(abag, hailaer),
                 numeric_euclidean(abag.midpoints(), hailaer.midpoints()) ** 2))

# For training, all pairwise squared dissimilarities are computed once.
stations = geo_intervals(265, seed=0)
D = build_matrix(stations, "hausdorff_l2", threads=4)
print(D.values.shape, "matrix; largest squared dissimilarity:", D.values.max().round(1))
