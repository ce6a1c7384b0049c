"""Light spanners and spanning trees with bounded average distortion."""

from .benchgen import generators, lower_bound_graph, verify_lower_bound
from .errors import CertificationError, InvalidInput, LightspanError, NotApplicable
from .graph import (
    Graph,
    MetricSpace,
    Subgraph,
    build_graph,
    distance_matrix,
    farness_eps,
    metric_closure,
    mst,
    radius_R,
    shortest_paths,
)
from .greedy import greedy_spanner
from .metrics import (
    coarse_profile,
    lemma21_check,
    lightness,
    lq_distortion,
    measure,
    prioritized_profile,
    scaling_profile,
)
from .prioritized import PriorityRanking, prioritized_spanner, terminal_spanner
from .reduction import reduce, reweight
from .scaling import (
    canonical_ranking,
    certify_coarse_scaling,
    density_net,
    duplicate_metric,
    pull_back_embedding,
)
from .slt import slt
from .trees import compose_profiles, light_tree, spanning_tree

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
