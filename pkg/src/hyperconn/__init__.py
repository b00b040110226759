"""Connectivity thresholds of random hypergraphs with inhomogeneous hyperedge sizes."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    Hypergraph,
    ModelSpec,
    SizeCounts,
    SizeDistribution,
    SizeProfile,
    ValidationError,
    moment,
    validate,
)
from .sampling import (  # noqa: E402
    RetryBudgetExceeded,
    RngStream,
    sample_given_sizes,
    sample_model,
    sample_shotgun,
    sample_shotgun_iid,
    sample_subset,
    two_section,
)
from .structure import (  # noqa: E402
    component_count,
    component_sizes,
    is_connected,
    isolated_nodes,
    oracle_is_connected,
)

__all__ = [
    "Hypergraph",
    "ModelSpec",
    "RetryBudgetExceeded",
    "RngStream",
    "SizeCounts",
    "SizeDistribution",
    "SizeProfile",
    "ValidationError",
    "component_count",
    "component_sizes",
    "is_connected",
    "isolated_nodes",
    "moment",
    "oracle_is_connected",
    "sample_given_sizes",
    "sample_model",
    "sample_shotgun",
    "sample_shotgun_iid",
    "sample_subset",
    "two_section",
    "validate",
]
