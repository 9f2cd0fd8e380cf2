"""Decompositions of trees over rooted tree quivers and of H0 of Q-filtrations."""

from .core import (
    ForestOverQ,
    Quiver,
    RootedTree,
    TreeOverQ,
    ValidationError,
    build_forest,
    build_quiver,
    build_tree_over,
    canonical_form,
    canonical_key,
    glue_trees_over,
    hasse_quiver,
    iso_over_Q,
    path_quiver,
    rooted_tree,
    split_at_root,
    star,
    validate_rooted_tree,
)
from .decomp import (
    Decomposition,
    Summand,
    decompose_forest,
    decompose_tree,
    elder_split,
    is_subforest,
)
from .filtration import (
    GraphFunctor,
    QFiltration,
    build_graph,
    build_graph_functor,
    decompose_h0,
    filtration_functor,
    filtration_to_forest,
    restrict_bifiltration,
    sigma_of_functor,
    validate_filtration,
)
from .order import (
    enumerate_indecomposables,
    enumerate_reduced,
    exists_morphism,
    hom_count,
    is_reduced,
    tree_leq,
)
from .repmod import (
    Representation,
    direct_sum,
    h0_dims_via_rank,
    hom_dim,
    linearize,
    oracle_decompose,
    push_forward_inclusion,
)
from .apps import (
    linear_filtration,
    merge_tree,
    merge_tree_morphism,
    morphism_invariant,
)

__version__ = "0.1.0"
