"""Exact tools for K4^- -free 3-graphs: enumeration, flag densities, certificate checking,
tournaments and skew Hadamard matrices."""

__version__ = "0.1.0"

from .hypergraph import (  # noqa: E402
    CanonicalForm,
    ThreeGraph,
    are_isomorphic,
    canonical_form,
    enumerate_free,
    induced_subgraph,
    is_k4minus_free,
)
from .lincomb import LinComb  # noqa: E402

__all__ = [
    "CanonicalForm",
    "LinComb",
    "ThreeGraph",
    "are_isomorphic",
    "canonical_form",
    "enumerate_free",
    "induced_subgraph",
    "is_k4minus_free",
]
