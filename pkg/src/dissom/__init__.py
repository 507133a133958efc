"""Batch self-organizing maps for dissimilarity data.

Items are seen only through a pairwise dissimilarity and every neuron is
represented by actual data items, so interval-valued (symbolic) data and any
other type with a dissimilarity can be mapped.
"""
from .dissimilarity import (
    MEASURES,
    DissimilarityMatrix,
    build_matrix,
    euclidean_interval,
    hausdorff_l2,
    numeric_euclidean,
    read_matrix,
    vertex_type,
    write_matrix,
)
from .errors import ConfigurationError, DimensionError, ParseError, ValidationError
from .evaluation import (
    DistortionReport,
    compare_measures,
    coordinate_distortion,
    quantization_error,
)
from .intervals import (
    IntervalDataset,
    IntervalVector,
    format_interval_csv,
    parse_interval_csv,
    read_interval_csv,
    to_midpoints,
)
from .projection import Embedding, classical_scaling, emit_scatter_svg
from .topology import KernelSchedule, MapTopology, graph_distance, kernel, temperature_at
from .trainer import (
    ReferentAssignment,
    TrainedMap,
    adequacy,
    assign,
    initialize,
    represent,
    total_cost,
    train,
)

__version__ = "0.1.0"
