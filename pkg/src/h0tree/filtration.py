"""Q-filtered graphs and the union-find route to their H0 as a forest over Q."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import (
    ForestOverQ,
    Quiver,
    RootedTree,
    TreeOverQ,
    ValidationError,
    _check_id,
    _rooted_from_parent,
    hasse_quiver,
    validate_rooted_tree,
)
from .decomp import Decomposition, decompose_forest


def _edge(u: str, w: str) -> tuple[str, str]:
    return (u, w) if u <= w else (w, u)


@dataclass(frozen=True)
class Graph:
    """Finite simple undirected graph; edges are stored as sorted pairs."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}


def build_graph(vertices: Iterable[str], edges: Iterable[Sequence[str]]) -> Graph:
    verts = tuple(_check_id(v) for v in vertices)
    vs = set(verts)
    if len(vs) != len(verts):
        raise ValidationError("duplicate graph vertex", kind="duplicate_vertex")
    out = []
    seen = set()
    for u, w in edges:
        if u not in vs or w not in vs:
            raise ValidationError(f"edge {u!r}-{w!r} has an undeclared endpoint", kind="undeclared_endpoint", witness=[u, w])
        if u == w:
            raise ValidationError(f"loop at {u!r}", kind="loop", witness=[u, w])
        e = _edge(u, w)
        if e in seen:
            raise ValidationError(f"duplicate edge {u!r}-{w!r}", kind="parallel_edges", witness=list(e))
        seen.add(e)
        out.append(e)
    return Graph(verts, tuple(out))


def components(vertices: Iterable[str], edges: Iterable[tuple[str, str]]) -> list[list[str]]:
    """Connected components, each sorted, listed by smallest member."""
    uf = UnionFind()
    for v in vertices:
        uf.add(v)
    for u, w in edges:
        uf.union(u, w)
    groups: dict[str, list[str]] = {}
    for v in uf.parent:
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(sorted(g) for g in groups.values())


class UnionFind:
    """Disjoint sets with path compression and union by rank."""

    def __init__(self):
        self.parent: dict[str, str] = {}
        self.rank: dict[str, int] = {}
        self._roots: set[str] = set()

    def __contains__(self, x):
        return x in self.parent

    def add(self, x: str) -> None:
        if x in self.parent:
            return
        self.parent[x] = x
        self.rank[x] = 0
        self._roots.add(x)

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> str:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self._roots.discard(rb)
        return ra

    def representatives(self) -> list[str]:
        return sorted(self._roots)


@dataclass(frozen=True, eq=False)
class QFiltration:
    graph: Graph
    Q: RootedTree
    vertex_value: Mapping[str, str]
    edge_value: Mapping[tuple[str, str], str]

    def level_of_vertex(self, v: str) -> int:
        return self.Q.level[self.vertex_value[v]]

    def sublevel(self, x: str) -> tuple[list[str], list[tuple[str, str]]]:
        """Vertices and edges whose value lies below ``x``."""
        leq = self.Q.leq
        vs = [v for v in self.graph.vertices if leq(self.vertex_value[v], x)]
        es = [e for e in self.graph.edges if leq(self.edge_value[e], x)]
        return vs, es

    def to_dict(self) -> dict:
        return {
            "quiver": self.Q.to_dict(),
            "graph": self.graph.to_dict(),
            "vertex_values": {v: self.vertex_value[v] for v in self.graph.vertices},
            "edge_values": [[u, w, self.edge_value[u, w]] for u, w in self.graph.edges],
        }


def validate_filtration(g: Graph, Q: RootedTree, h_V: Mapping[str, str], h_E) -> QFiltration:
    """Check that every edge value lies above both endpoint values.

    ``h_E`` maps an edge (either orientation) to its value; a list of
    ``(u, w, value)`` triples is accepted as well.
    """
    if not isinstance(h_E, Mapping):
        h_E = {(u, w): x for u, w, x in h_E}
    ev: dict[tuple[str, str], str] = {}
    for (u, w), x in h_E.items():
        e = _edge(u, w)
        if e in ev and ev[e] != x:
            raise ValidationError(f"edge {u!r}-{w!r} given two values", kind="bad_value", witness=list(e))
        ev[e] = x
    vv = dict(h_V)
    for v in g.vertices:
        if v not in vv:
            raise ValidationError(f"vertex {v!r} has no value", kind="missing_value", witness=v)
        if vv[v] not in Q:
            raise ValidationError(f"value {vv[v]!r} of {v!r} is not in Q", kind="bad_value", witness=v)
    if set(vv) - set(g.vertices):
        raise ValidationError("value given for an unknown vertex", kind="bad_value", witness=sorted(set(vv) - set(g.vertices))[0])
    edges = set(g.edges)
    extra = set(ev) - edges
    if extra:
        raise ValidationError("value given for an unknown edge", kind="bad_value", witness=list(sorted(extra)[0]))
    for e in g.edges:
        if e not in ev:
            raise ValidationError(f"edge {e[0]!r}-{e[1]!r} has no value", kind="missing_value", witness=list(e))
        x = ev[e]
        if x not in Q:
            raise ValidationError(f"value {x!r} of edge {e[0]!r}-{e[1]!r} is not in Q", kind="bad_value", witness=list(e))
        for end in e:
            if not Q.leq(vv[end], x):
                raise ValidationError(
                    f"edge {e[0]!r}-{e[1]!r} valued {x!r} lies below its endpoint {end!r} valued {vv[end]!r}",
                    kind="not_monotone",
                    witness=list(e),
                )
    return QFiltration(g, Q, vv, {e: ev[e] for e in g.edges})


@dataclass
class _ForestBuild:
    parent: dict[str, str]
    label: dict[str, str]
    roots: list[str]
    birth: dict[str, str]  # graph vertex -> forest node where it first appears


def _node(rep: str, lvl: int) -> str:
    return f"{rep}@{lvl}"


def _build_forest(f: QFiltration) -> _ForestBuild:
    Q = f.Q
    by_level_v: dict[int, list[str]] = {}
    for v in f.graph.vertices:
        by_level_v.setdefault(f.level_of_vertex(v), []).append(v)
    by_level_e: dict[int, list[tuple[str, str]]] = {}
    for e in f.graph.edges:
        by_level_e.setdefault(Q.level[f.edge_value[e]], []).append(e)
    out = _ForestBuild({}, {}, [], {})
    if not by_level_v:
        return out
    uf = UnionFind()
    # label of each class at the level being processed
    cls_label: dict[str, str] = {}
    prev: list[str] = []
    for lvl in range(max(by_level_v), -1, -1):
        cls_label = {r: Q.parent[x] for r, x in cls_label.items()}
        for v in sorted(by_level_v.get(lvl, ())):
            uf.add(v)
            cls_label[v] = f.vertex_value[v]
        for u, w in by_level_e.get(lvl, ()):
            ru, rw = uf.find(u), uf.find(w)
            x = f.edge_value[u, w]
            if cls_label[ru] != x or cls_label[rw] != x:
                raise AssertionError(f"class labels disagree across edge {u!r}-{w!r}")
            if ru != rw:
                r = uf.union(ru, rw)
                cls_label.pop(rw if r == ru else ru)
        reps = uf.representatives()
        for r in reps:
            n = _node(r, lvl)
            out.label[n] = cls_label[r]
        for v in by_level_v.get(lvl, ()):
            out.birth[v] = _node(uf.find(v), lvl)
        for r in prev:
            out.parent[_node(r, lvl + 1)] = _node(uf.find(r), lvl)
        prev = reps
    out.roots = [_node(r, 0) for r in prev]
    return out


def _forest_from_build(Q: RootedTree, b: _ForestBuild) -> ForestOverQ:
    kids: dict[str, list[str]] = {}
    for c, p in b.parent.items():
        kids.setdefault(p, []).append(c)
    comps = []
    for r in b.roots:
        verts = [r]
        i = 0
        while i < len(verts):
            verts.extend(kids.get(verts[i], ()))
            i += 1
        tree = _rooted_from_parent(Quiver(tuple(verts), tuple((v, b.parent[v]) for v in verts[1:])), r)
        comps.append(TreeOverQ(Q, tree, {v: b.label[v] for v in verts}))
    return ForestOverQ(Q, tuple(comps))


def filtration_to_forest(f: QFiltration) -> ForestOverQ:
    """The forest over Q whose linearization is H0 of ``f``.

    Nodes are named ``<representative>@<level>``; every component is rooted
    over the root of Q.
    """
    return _forest_from_build(f.Q, _build_forest(f))


def decompose_h0(f: QFiltration) -> Decomposition:
    return decompose_forest(filtration_to_forest(f))


@dataclass(frozen=True, eq=False)
class GraphFunctor:
    """A monotone assignment of subgraphs of ``graph`` to the vertices of Q."""

    Q: RootedTree
    graph: Graph
    subgraphs: Mapping[str, tuple[frozenset, frozenset]]


def build_graph_functor(Q: RootedTree, graph: Graph, subgraphs: Mapping[str, tuple[Iterable[str], Iterable[Sequence[str]]]]) -> GraphFunctor:
    vs_all = set(graph.vertices)
    es_all = set(graph.edges)
    subs = {}
    for x in Q.vertices:
        vs, es = subgraphs.get(x, ((), ()))
        vs = frozenset(vs)
        es = frozenset(_edge(u, w) for u, w in es)
        if not vs <= vs_all or not es <= es_all:
            raise ValidationError(f"subgraph at {x!r} is not part of the graph", kind="bad_subgraph", witness=x)
        for u, w in es:
            if u not in vs or w not in vs:
                raise ValidationError(f"subgraph at {x!r} has a dangling edge {u!r}-{w!r}", kind="bad_subgraph", witness=x)
        subs[x] = (vs, es)
    for c, p in Q.parent.items():
        if not (subs[c][0] <= subs[p][0] and subs[c][1] <= subs[p][1]):
            raise ValidationError(f"subgraph at {c!r} is not contained in the one at {p!r}", kind="not_monotone", witness=[c, p])
    return GraphFunctor(Q, graph, subs)


def filtration_functor(f: QFiltration) -> GraphFunctor:
    return build_graph_functor(f.Q, f.graph, {x: f.sublevel(x) for x in f.Q.vertices})


def sigma_of_functor(F: GraphFunctor) -> ForestOverQ:
    """One node per (vertex of Q, connected component); edges follow inclusions."""
    Q = F.Q
    comp_of: dict[str, dict[str, int]] = {}
    names: dict[tuple[str, int], str] = {}
    label: dict[str, str] = {}
    counter = 0
    for x in sorted(Q.vertices, key=lambda v: (Q.level[v], v)):
        vs, es = F.subgraphs[x]
        comps = components(sorted(vs), sorted(es))
        comp_of[x] = {}
        for i, comp in enumerate(comps):
            for v in comp:
                comp_of[x][v] = i
            name = f"n{counter}"
            counter += 1
            names[x, i] = name
            label[name] = x
    parent = {}
    for (x, i), name in names.items():
        if x == Q.root:
            continue
        member = next(v for v, j in comp_of[x].items() if j == i)
        parent[name] = names[Q.parent[x], comp_of[Q.parent[x]][member]]
    roots = [name for (x, _), name in names.items() if x == Q.root]
    b = _ForestBuild(parent, label, roots, {})
    return _forest_from_build(Q, b)


def restrict_bifiltration(
    g: Graph,
    vertex_grid: Mapping[str, Sequence[int]],
    edge_grid,
    poset_elements: Iterable[str],
    poset_relation: Iterable[Sequence[str]],
    embedding: Mapping[str, Sequence[int]],
) -> GraphFunctor:
    """Restrict a grid-filtered graph to a rooted tree poset embedded in the grid."""
    if not isinstance(edge_grid, Mapping):
        edge_grid = {(u, w): (i, j) for u, w, i, j in edge_grid}
    eg = {_edge(u, w): tuple(val) for (u, w), val in edge_grid.items()}
    vg = {v: tuple(vertex_grid[v]) for v in g.vertices}

    def below(a, b):
        return a[0] <= b[0] and a[1] <= b[1]

    for e in g.edges:
        if e not in eg:
            raise ValidationError(f"edge {e[0]!r}-{e[1]!r} has no grid value", kind="missing_value", witness=list(e))
        for end in e:
            if not below(vg[end], eg[e]):
                raise ValidationError(
                    f"edge {e[0]!r}-{e[1]!r} lies below its endpoint {end!r}", kind="not_monotone", witness=list(e)
                )
    Q = validate_rooted_tree(hasse_quiver(poset_elements, poset_relation))
    emb = {p: tuple(embedding[p]) for p in Q.vertices}
    for c, p in Q.parent.items():
        if not below(emb[c], emb[p]):
            raise ValidationError(f"embedding is not order-preserving on {c!r} <= {p!r}", kind="not_monotone", witness=[c, p])
    subs = {}
    for p in Q.vertices:
        vs = [v for v in g.vertices if below(vg[v], emb[p])]
        es = [e for e in g.edges if below(eg[e], emb[p])]
        subs[p] = (vs, es)
    return build_graph_functor(Q, g, subs)
