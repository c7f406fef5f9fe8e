"""Exact sumset computations in Z^a x Z/n1 x ... x Z/nk.

Iterated sumsets, lexicographically minimal embeddings and their shadows,
the classical growth inequalities, extremal constructions, constructive
inverse/stability checks, and a sweep/fuzz harness.
"""

__version__ = "0.1.0"

from .bounds import (BoundCheck, BoundReport, binom_real, bound_suite, bounds_from_sizes,
                     invert_binom, macaulay_check, rho)
from .constructions import (FAMILIES, build, gap_cube, gap_progression, gen_gap, gen_geometric,
                            gen_higher, gen_random, gen_ruzsa)
from .extractor import (ExtractionReport, LargeSubset, StabilityReport, inverse_extract,
                        plunnecke_large_subset, stability_analyze)
from .group import Element, GroupMismatchError, GroupSpec, add_canonical, lex_compare
from .kernels import BACKEND, use_backend
from .shadow import (MultisetFamily, lexmin_embedding, shadow, triangle_stats, tuple_embedding,
                     tuple_embedding_projections, verify_shadow_identity)
from .sumsets import (PointSet, SumsetProfile, is_dissociated, iterated_sumset, parse_pts,
                      profile, read_pts, sumset, sumset_chain, write_pts)

__all__ = [
    "BACKEND", "BoundCheck", "BoundReport", "Element", "ExtractionReport", "FAMILIES",
    "GroupMismatchError", "GroupSpec", "LargeSubset", "MultisetFamily", "PointSet",
    "StabilityReport", "SumsetProfile", "add_canonical", "binom_real", "bound_suite",
    "bounds_from_sizes", "build", "gap_cube", "gap_progression", "gen_gap", "gen_geometric",
    "gen_higher", "gen_random", "gen_ruzsa", "inverse_extract", "invert_binom", "is_dissociated",
    "iterated_sumset", "lex_compare", "lexmin_embedding", "macaulay_check", "parse_pts",
    "plunnecke_large_subset", "profile", "read_pts", "rho", "shadow", "stability_analyze",
    "sumset", "sumset_chain", "triangle_stats", "tuple_embedding", "tuple_embedding_projections",
    "use_backend", "verify_shadow_identity", "write_pts",
]
