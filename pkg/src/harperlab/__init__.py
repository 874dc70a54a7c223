"""Exact, brute-force-checkable tools for vertex isoperimetry in the hypercube."""

from .cube import (
    SetFamily, Vertex, VertexSet, closed_neighbourhood, gamma, hamming_distance,
    kth_neighbourhood, kth_neighbourhood_recursive, layer, neighbours,
)
from .orderings import (
    OrderKind, colex_compare, colex_rank, colex_unrank, complement_family,
    lex_compare, lex_initial_segment, lex_rank, lex_unrank, simplicial_compare,
    simplicial_initial_segment,
)
from .shadows import (
    BandIndex, BoundReport, expansion_check, find_band_index, harper_gamma_lower,
    harper_min_closed, kk_factor_monotone_check, kk_refined_bound, kruskbound_factor,
    lym_shadow_bound, lym_upper_bound, shadow, upper_shadow,
)
from .stability import (
    SearchClass, StabilityParams, StabilityReport, best_center, discard_algorithm,
    h_partition, hypothesis_check, sharpness_example, stability_report, uniqueness_count,
)

__version__ = "0.1.0"
