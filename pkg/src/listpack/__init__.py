"""Fractional packings of correspondence covers, constructive packing
builders and an exact fractional chromatic number solver."""
from .builders import cartesian_packing, layered_packing, tree_product_packing, treedepth_packing
from .caterpillar import BalancedFamily, caterpillar_packing, check_cyclic_shift_infeasible, extend_clique_colourings
from .cover import CorrespondenceCover, cover_graph, identity_cover, validate_cover
from .fcp import fractional_chromatic_number, verify_certificates
from .flexibility import flexible_for_degeneracy
from .graph import CaterpillarDecomposition, EliminationForest, Graph, LayerPartition
from .packing import (
    EpsilonProfile,
    Infeasible,
    PackingDistribution,
    compose_packing,
    monotonicity_lift,
    solve_packing_lp,
    validate_packing,
)

__version__ = "0.1.0"
