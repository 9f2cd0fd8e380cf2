"""Seeded random instances: quivers, trees over them, and Q-filtrations."""

from __future__ import annotations

import random

from .core import (
    Quiver,
    RootedTree,
    TreeOverQ,
    _rooted_from_parent,
    validate_rooted_tree,
)
from .filtration import QFiltration, build_graph, validate_filtration


def random_rooted_tree(n: int, rng: random.Random, prefix: str = "q") -> RootedTree:
    """Random recursive tree: vertex ``i`` points at a uniform earlier vertex."""
    verts = [f"{prefix}{i}" for i in range(n)]
    edges = [(verts[i], verts[rng.randrange(i)]) for i in range(1, n)]
    return validate_rooted_tree(Quiver(tuple(verts), tuple(edges)))


def random_tree_over(Q: RootedTree, n: int, rng: random.Random, prefix: str = "t") -> TreeOverQ:
    """Grow a tree over ``Q`` by repeatedly hanging a new vertex below a random
    vertex whose label still has children in ``Q``.

    Stops early when no vertex can be extended (only when ``Q`` is a point).
    """
    labeling = {f"{prefix}0": Q.root}
    parent: dict[str, str] = {}
    open_ = [f"{prefix}0"] if Q.children[Q.root] else []
    while len(labeling) < n and open_:
        p = rng.choice(open_)
        x = rng.choice(Q.children[labeling[p]])
        v = f"{prefix}{len(labeling)}"
        labeling[v] = x
        parent[v] = p
        if Q.children[x]:
            open_.append(v)
    verts = tuple(labeling)
    tree = _rooted_from_parent(Quiver(verts, tuple(parent.items())), f"{prefix}0")
    return TreeOverQ(Q, tree, labeling)


def random_filtration(
    Q: RootedTree, n_vertices: int, rng: random.Random, edge_prob: float = 0.15, prefix: str = "g"
) -> QFiltration:
    """Random graph with random values; edge values are joined upward with
    their endpoint values so the result is monotone."""
    verts = [f"{prefix}{i}" for i in range(n_vertices)]
    qv = sorted(Q.vertices)
    hv = {v: rng.choice(qv) for v in verts}
    edges = []
    he = {}
    for i in range(n_vertices):
        for j in range(i + 1, n_vertices):
            if rng.random() < edge_prob:
                e = (verts[i], verts[j])
                edges.append(e)
                x = Q.join(rng.choice(qv), Q.join(hv[e[0]], hv[e[1]]))
                he[e] = x
    return validate_filtration(build_graph(verts, edges), Q, hv, he)


def comparable_sibling_instance(Q: RootedTree, n: int, rng: random.Random) -> tuple[TreeOverQ, str, str, str]:
    """A random tree together with ``(parent, drop, keep)`` where the subtree at
    ``drop`` precedes the subtree at ``keep``.

    The pair is manufactured by copying a randomly pruned version of an
    existing child subtree next to it.  ``Q`` must have at least one edge.
    """
    t = random_tree_over(Q, n, rng)
    inner = [v for v in t.tree.vertices if t.tree.children[v]]
    p = rng.choice(inner)
    keep = rng.choice(t.tree.children[p])
    labeling = dict(t.labeling)
    parent = dict(t.tree.parent)
    counter = len(labeling)

    def fresh():
        nonlocal counter
        counter += 1
        return f"c{counter}"

    drop = fresh()
    labeling[drop] = t.labeling[keep]
    parent[drop] = p
    stack = [(keep, drop)]
    while stack:
        src, dst = stack.pop()
        for c in t.tree.children[src]:
            if rng.random() < 0.7:
                d = fresh()
                labeling[d] = t.labeling[c]
                parent[d] = dst
                stack.append((c, d))
    tree = _rooted_from_parent(Quiver(tuple(labeling), tuple(parent.items())), t.root)
    return TreeOverQ(Q, tree, labeling), p, drop, keep


def random_merge_pair(n_vertices: int, n: int, rng: random.Random, extra_edges: int = 3, equal: bool = False):
    """A connected graph with two monotone integer filtrations ``f <= g`` in ``1..n``.

    Returns ``(K, f_vertices, f_edges, g_vertices, g_edges)``; with ``equal``
    set, ``g`` is a copy of ``f``.
    """
    verts = [f"k{i}" for i in range(n_vertices)]
    edges = {tuple(sorted((verts[i], verts[rng.randrange(i)]))) for i in range(1, n_vertices)}
    for _ in range(extra_edges if n_vertices > 1 else 0):
        u, w = rng.sample(verts, 2)
        edges.add(tuple(sorted((u, w))))
    edges = sorted(edges)
    fv = {v: rng.randint(1, n) for v in verts}
    fe = {(u, w): rng.randint(max(fv[u], fv[w]), n) for u, w in edges}
    if equal:
        return build_graph(verts, edges), fv, fe, dict(fv), dict(fe)
    gv = {v: rng.randint(fv[v], n) for v in verts}
    ge = {(u, w): rng.randint(max(fe[u, w], gv[u], gv[w]), n) for u, w in edges}
    return build_graph(verts, edges), fv, fe, gv, ge
