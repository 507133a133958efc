"""
Mapping non-vector data: words under edit distance
==================================================

Nothing in the training needs coordinates or averages, only a dissimilarity.
Here a handful of words are mapped with the Levenshtein distance.
"""
import numpy as np

from dissom import DissimilarityMatrix, KernelSchedule, MapTopology, train

words = ["cat", "cart", "card", "care", "core", "cure", "pure", "pore", "bore",
         "born", "corn", "horn", "home", "hole", "pole", "mole", "male", "mile"]


def levenshtein(a, b):
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


n = len(words)
d = np.array([[levenshtein(a, b) for b in words] for a in words], dtype=float)
matrix = DissimilarityMatrix(d**2, tuple(words))

topology = MapTopology(1, 4)
# A short chain collapses onto one medoid if the neighborhood starts too wide.
trained = train(matrix, topology, KernelSchedule(1.0, 0.3, 20), seed=0)
for c in range(topology.m):
    members = [w for w, k in zip(words, trained.winners) if k == c]
    print(f"neuron {c} [{words[trained.referents[c, 0]]}]: {' '.join(members)}")
