"""Self-similar graph sequences built from a base graph and a symmetric edge bundle."""

from .core import (
    BaseGraph,
    Bundle,
    BundleView,
    ExplicitGraph,
    SelfSimilarSystem,
    SizeLimitError,
    adjacent,
    bundle_view,
    degree,
    edge_count,
    make_base_graph,
    make_bundle,
    materialize,
)

__version__ = "0.1.0"

__all__ = [
    "BaseGraph",
    "Bundle",
    "BundleView",
    "ExplicitGraph",
    "SelfSimilarSystem",
    "SizeLimitError",
    "adjacent",
    "bundle_view",
    "degree",
    "edge_count",
    "make_base_graph",
    "make_bundle",
    "materialize",
]
