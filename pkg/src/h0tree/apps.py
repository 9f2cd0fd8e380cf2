"""Merge trees of linear filtrations and the invariant of a merge-tree morphism."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .core import (
    RootedTree,
    TreeOverQ,
    ValidationError,
    build_tree_over,
    path_quiver,
)
from .decomp import Decomposition, decompose_tree
from .filtration import (
    Graph,
    QFiltration,
    _build_forest,
    _edge,
    _forest_from_build,
    build_graph,
    components,
    validate_filtration,
)

MergeTree = TreeOverQ


@dataclass(frozen=True, eq=False)
class LinearFiltration:
    graph: Graph
    n: int
    vertex_value: Mapping[str, int]
    edge_value: Mapping[tuple[str, str], int]


def linear_filtration(graph: Graph, n: int, vertex_value: Mapping[str, int], edge_value) -> LinearFiltration:
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}", kind="bad_value")
    if not isinstance(edge_value, Mapping):
        edge_value = {(u, w): r for u, w, r in edge_value}
    ev = {_edge(u, w): r for (u, w), r in edge_value.items()}
    for name, vals in (("vertex", vertex_value), ("edge", ev)):
        for k, r in vals.items():
            if not isinstance(r, int) or not 1 <= r <= n:
                raise ValidationError(f"{name} value {r!r} of {k!r} is not in 1..{n}", kind="bad_value", witness=k)
    f = LinearFiltration(graph, n, dict(vertex_value), ev)
    as_q_filtration(f)  # monotonicity and completeness
    return f


def as_q_filtration(f: LinearFiltration, Q: RootedTree | None = None) -> QFiltration:
    Q = Q or path_quiver(f.n)
    return validate_filtration(
        f.graph,
        Q,
        {v: str(r) for v, r in f.vertex_value.items()},
        {e: str(r) for e, r in f.edge_value.items()},
    )


def _require_connected(f: LinearFiltration) -> None:
    comps = components(f.graph.vertices, f.graph.edges)
    if len(comps) != 1:
        raise ValidationError(
            f"graph is not connected at level {f.n} ({len(comps)} components)", kind="disconnected"
        )


def merge_tree(f: LinearFiltration) -> MergeTree:
    _require_connected(f)
    forest = _forest_from_build(path_quiver(f.n), _build_forest(as_q_filtration(f)))
    assert len(forest.components) == 1
    return forest.components[0]


def _climb(parent: Mapping[str, str], level: Mapping[str, int], node: str, lvl: int) -> str:
    while level[node] > lvl:
        node = parent[node]
    return node


def merge_tree_morphism(K: Graph, f_vertices, f_edges, g_vertices, g_edges, n: int) -> tuple[TreeOverQ, MergeTree]:
    """The morphism from the merge tree of ``g`` into that of ``f`` when ``f <= g``.

    Returns ``(S, T)`` where ``T`` is the merge tree of ``f`` and ``S`` is the
    merge tree of ``g`` viewed as a tree over ``T``.
    """
    f = linear_filtration(K, n, f_vertices, f_edges)
    g = linear_filtration(K, n, g_vertices, g_edges)
    for v in K.vertices:
        if f.vertex_value[v] > g.vertex_value[v]:
            raise ValidationError(f"f > g at vertex {v!r}", kind="not_below", witness=v)
    for e in K.edges:
        if f.edge_value[e] > g.edge_value[e]:
            raise ValidationError(f"f > g at edge {e[0]!r}-{e[1]!r}", kind="not_below", witness=list(e))
    _require_connected(f)
    A = path_quiver(n)
    fb = _build_forest(as_q_filtration(f, A))
    gb = _build_forest(as_q_filtration(g, A))
    T = _forest_from_build(A, fb).components[0]
    S_over_A = _forest_from_build(A, gb).components[0]
    flevel, glevel = T.tree.level, S_over_A.tree.level
    labeling = {}
    for node in S_over_A.tree.vertices:
        rep = node.rsplit("@", 1)[0]
        labeling[node] = _climb(fb.parent, flevel, fb.birth[rep], glevel[node])
    # every vertex of a g-component lies in the labelled f-component
    for v in K.vertices:
        gnode = gb.birth[v]
        fnode = _climb(fb.parent, flevel, fb.birth[v], glevel[gnode])
        while True:
            if labeling[gnode] != fnode:
                raise AssertionError(f"containment fails for {v!r} at {gnode!r}")
            if gnode not in gb.parent:
                break
            gnode, fnode = gb.parent[gnode], fb.parent[fnode]
    S = build_tree_over(T.tree, S_over_A.tree, labeling)
    return S, T


def morphism_invariant(K: Graph, f_vertices, f_edges, g_vertices, g_edges, n: int) -> Decomposition:
    """Decomposition of the linearized ``g`` merge tree as a representation of the ``f`` merge tree."""
    S, _ = merge_tree_morphism(K, f_vertices, f_edges, g_vertices, g_edges, n)
    return decompose_tree(S)[1]


def componentwise_morphism_invariants(K: Graph, f_vertices, f_edges, g_vertices, g_edges, n: int):
    """Split ``K`` into connected components and treat each separately.

    Returns a list of ``(vertices, T, decomposition)`` triples.
    """
    fe = f_edges if isinstance(f_edges, Mapping) else {(u, w): r for u, w, r in f_edges}
    ge = g_edges if isinstance(g_edges, Mapping) else {(u, w): r for u, w, r in g_edges}
    fe = {_edge(u, w): r for (u, w), r in fe.items()}
    ge = {_edge(u, w): r for (u, w), r in ge.items()}
    out = []
    for comp in components(K.vertices, K.edges):
        cs = set(comp)
        sub = build_graph(comp, [e for e in K.edges if e[0] in cs])
        fv = {v: f_vertices[v] for v in comp}
        gv = {v: g_vertices[v] for v in comp}
        sf = {e: fe[e] for e in sub.edges}
        sg = {e: ge[e] for e in sub.edges}
        S, T = merge_tree_morphism(sub, fv, sf, gv, sg, n)
        out.append((comp, T, decompose_tree(S)[1]))
    return out
