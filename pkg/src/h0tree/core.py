"""Quivers, rooted tree quivers, and rooted trees over a rooted tree quiver.

Vertex identifiers are opaque non-empty strings without whitespace.  Every
value built here is treated as immutable once constructed.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class ValidationError(ValueError):
    """Raised when an input violates a structural contract.

    ``kind`` is a short machine-readable tag and ``witness`` names the
    offending elements (an edge, a cycle, a vertex...).
    """

    def __init__(self, message: str, kind: str = "invalid", witness=None):
        super().__init__(message)
        self.kind = kind
        self.witness = witness


def _check_id(v) -> str:
    if not isinstance(v, str) or not v or any(c.isspace() for c in v):
        raise ValidationError(
            f"vertex id must be a non-empty string without whitespace: {v!r}",
            kind="bad_id",
            witness=v,
        )
    return v


@dataclass(frozen=True, eq=False)
class Quiver:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and Counter(
            self.edges
        ) == Counter(other.edges)

    def __len__(self):
        return len(self.vertices)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
        }


def build_quiver(vertices: Iterable[str], edges: Iterable[Sequence[str]]) -> Quiver:
    verts = tuple(_check_id(v) for v in vertices)
    seen: set[str] = set()
    for v in verts:
        if v in seen:
            raise ValidationError(f"duplicate vertex {v!r}", kind="duplicate_vertex", witness=v)
        seen.add(v)
    es = []
    for e in edges:
        if len(e) != 2:
            raise ValidationError(f"edge must be a pair: {e!r}", kind="bad_edge", witness=e)
        s, t = e
        for end in (s, t):
            if end not in seen:
                raise ValidationError(
                    f"edge {s!r}->{t!r} has undeclared endpoint {end!r}",
                    kind="undeclared_endpoint",
                    witness=[s, t],
                )
        es.append((s, t))
    return Quiver(verts, tuple(es))


@dataclass(frozen=True, eq=False)
class RootedTree:
    """A tree quiver with a unique sink, edges pointing towards the root.

    Built through :func:`validate_rooted_tree`; ``children`` lists are sorted
    lexicographically, which is the only tie-break order used anywhere.
    """

    quiver: Quiver
    root: str
    parent: Mapping[str, str]
    children: Mapping[str, tuple[str, ...]]
    level: Mapping[str, int]
    height: int
    _layers: tuple[tuple[str, ...], ...] = field(repr=False, default=())

    def __eq__(self, other):
        if not isinstance(other, RootedTree):
            return NotImplemented
        return self is other or self.quiver == other.quiver

    def __len__(self):
        return len(self.level)

    def __contains__(self, v):
        return v in self.level

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def layers(self) -> tuple[tuple[str, ...], ...]:
        """Vertices grouped by level, each group sorted."""
        return self._layers

    def _require(self, *vs: str) -> None:
        for v in vs:
            if v not in self.level:
                raise ValidationError(f"unknown vertex {v!r}", kind="unknown_vertex", witness=v)

    def leq(self, x: str, y: str) -> bool:
        """Whether a directed path runs from ``x`` to ``y``."""
        self._require(x, y)
        ly = self.level[y]
        while self.level[x] > ly:
            x = self.parent[x]
        return x == y

    def join(self, x: str, y: str) -> str:
        self._require(x, y)
        while self.level[x] > self.level[y]:
            x = self.parent[x]
        while self.level[y] > self.level[x]:
            y = self.parent[y]
        while x != y:
            x, y = self.parent[x], self.parent[y]
        return x

    def ancestor_at_level(self, x: str, lvl: int) -> str:
        self._require(x)
        if lvl < 0 or lvl > self.level[x]:
            raise ValidationError(
                f"level {lvl} is not between 0 and level({x!r})={self.level[x]}",
                kind="bad_level",
                witness=[x, lvl],
            )
        while self.level[x] > lvl:
            x = self.parent[x]
        return x

    def descendants(self, x: str) -> list[str]:
        """``x`` and everything below it, in breadth-first order."""
        self._require(x)
        out = [x]
        i = 0
        while i < len(out):
            out.extend(self.children[out[i]])
            i += 1
        return out

    def downset(self, x: str) -> RootedTree:
        verts = self.descendants(x)
        edges = [(v, self.parent[v]) for v in verts[1:]]
        return _rooted_from_parent(Quiver(tuple(verts), tuple(edges)), x)

    def to_dict(self) -> dict:
        return self.quiver.to_dict()


def _find_cycle(q: Quiver):
    """Return the vertex list of some undirected cycle, or None."""
    uf: dict[str, str] = {v: v for v in q.vertices}

    def find(a):
        while uf[a] != a:
            uf[a] = uf[uf[a]]
            a = uf[a]
        return a

    adj: dict[str, list[str]] = {v: [] for v in q.vertices}
    for s, t in q.edges:
        rs, rt = find(s), find(t)
        if rs == rt:
            # path s ~> t in the forest built so far closes the cycle
            prev = {s: None}
            queue = deque([s])
            while queue:
                u = queue.popleft()
                if u == t:
                    break
                for w in adj[u]:
                    if w not in prev:
                        prev[w] = u
                        queue.append(w)
            path = []
            u = t
            while u is not None:
                path.append(u)
                u = prev[u]
            return path[::-1]
        uf[rs] = rt
        adj[s].append(t)
        adj[t].append(s)
    return None


def _rooted_from_parent(q: Quiver, root: str) -> RootedTree:
    parent = {s: t for s, t in q.edges}
    kids: dict[str, list[str]] = {v: [] for v in q.vertices}
    for s, t in q.edges:
        kids[t].append(s)
    children = {v: tuple(sorted(c)) for v, c in kids.items()}
    level = {root: 0}
    layers = [[root]]
    while True:
        nxt = [c for v in layers[-1] for c in children[v]]
        if not nxt:
            break
        d = len(layers)
        for c in nxt:
            level[c] = d
        layers.append(nxt)
    return RootedTree(
        quiver=q,
        root=root,
        parent=parent,
        children=children,
        level=level,
        height=len(layers) - 1,
        _layers=tuple(tuple(sorted(layer)) for layer in layers),
    )


def validate_rooted_tree(q: Quiver) -> RootedTree:
    if not q.vertices:
        raise ValidationError("the empty quiver has no root", kind="empty")
    for s, t in q.edges:
        if s == t:
            raise ValidationError(f"loop at {s!r}", kind="loop", witness=[s, t])
    dup = [e for e, c in Counter(q.edges).items() if c > 1]
    if dup:
        raise ValidationError(
            f"parallel edges {dup[0][0]!r}->{dup[0][1]!r}", kind="parallel_edges", witness=list(dup[0])
        )
    cyc = _find_cycle(q)
    if cyc is not None:
        raise ValidationError(f"cycle through {cyc}", kind="cycle", witness=cyc)
    if len(q.edges) != len(q.vertices) - 1:
        raise ValidationError("underlying graph is not connected", kind="disconnected")
    outdeg = Counter(s for s, _ in q.edges)
    sinks = sorted(v for v in q.vertices if outdeg[v] == 0)
    if len(sinks) != 1:
        raise ValidationError(
            f"expected exactly one sink, found {len(sinks)}", kind="sinks", witness=sinks
        )
    bad = sorted(v for v in q.vertices if outdeg[v] > 1)
    if bad:
        raise ValidationError(
            f"vertex {bad[0]!r} has out-degree {outdeg[bad[0]]}", kind="out_degree", witness=bad
        )
    return _rooted_from_parent(q, sinks[0])


def rooted_tree(parent: Mapping[str, str], root: str | None = None) -> RootedTree:
    """Convenience constructor from a child -> parent map."""
    verts = set(parent) | set(parent.values())
    if root is not None:
        verts.add(root)
    q = build_quiver(sorted(verts), sorted(parent.items()))
    return validate_rooted_tree(q)


def path_quiver(n: int, prefix: str = "") -> RootedTree:
    """The path ``1 -> 2 -> ... -> n`` rooted at ``n``."""
    if n < 1:
        raise ValidationError("path quiver needs at least one vertex", kind="empty")
    verts = [f"{prefix}{i}" for i in range(1, n + 1)]
    return validate_rooted_tree(build_quiver(verts, list(zip(verts, verts[1:]))))


# Free-function spellings of the RootedTree queries.
def leq_Q(Q: RootedTree, x: str, y: str) -> bool:
    return Q.leq(x, y)


def join(Q: RootedTree, x: str, y: str) -> str:
    return Q.join(x, y)


def downset(Q: RootedTree, x: str) -> RootedTree:
    Q._require(x)
    return Q.downset(x)


def ancestor_at_level(Q: RootedTree, x: str, lvl: int) -> str:
    return Q.ancestor_at_level(x, lvl)


@dataclass(frozen=True, eq=False)
class TreeOverQ:
    """A rooted tree ``tree`` with a root-preserving quiver morphism into ``base``."""

    base: RootedTree
    tree: RootedTree
    labeling: Mapping[str, str]

    def __eq__(self, other):
        if not isinstance(other, TreeOverQ):
            return NotImplemented
        return (
            self.base == other.base
            and self.tree == other.tree
            and dict(self.labeling) == dict(other.labeling)
        )

    def __len__(self):
        return len(self.tree)

    @property
    def root(self) -> str:
        return self.tree.root

    @property
    def apex(self) -> str:
        return self.base.root

    def is_star(self) -> bool:
        return len(self.tree) == 1

    def dims(self) -> dict[str, int]:
        out = {x: 0 for x in self.base.vertices}
        for v in self.tree.vertices:
            out[self.labeling[v]] += 1
        return out

    def subtree(self, v: str) -> TreeOverQ:
        """The part of the tree below ``v``, over the downset at its label."""
        sub = self.tree.downset(v)
        base = self.base.downset(self.labeling[v])
        return TreeOverQ(base, sub, {u: self.labeling[u] for u in sub.vertices})

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "tree": self.tree.to_dict(),
            "labeling": {v: self.labeling[v] for v in self.tree.vertices},
        }


def build_tree_over(Q: RootedTree, T: RootedTree, labeling: Mapping[str, str]) -> TreeOverQ:
    for v in T.vertices:
        if v not in labeling:
            raise ValidationError(f"tree vertex {v!r} has no label", kind="unlabeled", witness=v)
        if labeling[v] not in Q:
            raise ValidationError(
                f"label {labeling[v]!r} of {v!r} is not a vertex of Q", kind="bad_label", witness=v
            )
    extra = set(labeling) - set(T.level)
    if extra:
        x = sorted(extra)[0]
        raise ValidationError(f"label given for unknown vertex {x!r}", kind="bad_label", witness=x)
    if labeling[T.root] != Q.root:
        raise ValidationError(
            f"root {T.root!r} maps to {labeling[T.root]!r}, not to the root {Q.root!r}",
            kind="not_root_preserving",
            witness=[T.root, labeling[T.root]],
        )
    for c, p in T.parent.items():
        lc, lp = labeling[c], labeling[p]
        if Q.parent.get(lc) != lp:
            raise ValidationError(
                f"edge {c!r}->{p!r} maps to {lc!r}->{lp!r}, which is not an edge of Q",
                kind="not_edge_compatible",
                witness=[c, p],
            )
    for v in T.vertices:
        # implied by the two checks above
        assert T.level[v] == Q.level[labeling[v]]
    return TreeOverQ(Q, T, dict(labeling))


def star(Q: RootedTree, vid: str = "v0") -> TreeOverQ:
    """The one-vertex tree over ``Q``."""
    t = validate_rooted_tree(Quiver((vid,), ()))
    return TreeOverQ(Q, t, {vid: Q.root})


def glue_trees_over(Q: RootedTree, assignments) -> TreeOverQ:
    """Attach a fresh root over ``Q.root`` above every supplied tree.

    ``assignments`` is either a mapping from children of ``Q.root`` to lists
    of trees over the corresponding downsets, or a sequence of such lists
    aligned with ``Q.children[Q.root]``.  Result vertices are renamed
    ``v0`` (the new root), ``v1``, ... in breadth-first order.
    """
    kids = Q.children[Q.root]
    if isinstance(assignments, Mapping):
        unknown = set(assignments) - set(kids)
        if unknown:
            x = sorted(unknown)[0]
            raise ValidationError(f"{x!r} is not a child of the root of Q", kind="bad_gluing", witness=x)
        lists = [list(assignments.get(q, ())) for q in kids]
    else:
        lists = [list(a) for a in assignments]
        if len(lists) != len(kids):
            raise ValidationError(
                f"expected {len(kids)} lists, got {len(lists)}", kind="bad_gluing"
            )
    parent: dict[str, str] = {}
    labeling = {"v0": Q.root}
    counter = 1
    for q, trees in zip(kids, lists):
        expected = Q.downset(q)
        for t in trees:
            if t.base != expected:
                raise ValidationError(
                    f"tree assigned to {q!r} is not over the downset at {q!r}",
                    kind="bad_gluing",
                    witness=q,
                )
            rename = {}
            for v in t.tree.descendants(t.root):
                rename[v] = f"v{counter}"
                counter += 1
                labeling[rename[v]] = t.labeling[v]
                parent[rename[v]] = rename[t.tree.parent[v]] if v != t.root else "v0"
    verts = sorted(labeling, key=lambda s: int(s[1:]))
    tree = _rooted_from_parent(Quiver(tuple(verts), tuple((c, parent[c]) for c in verts[1:])), "v0")
    return build_tree_over(Q, tree, labeling)


def split_at_root(t: TreeOverQ) -> dict[str, list[TreeOverQ]]:
    """Inverse of gluing: the subtrees hanging below the root, by branch of Q."""
    out: dict[str, list[TreeOverQ]] = {q: [] for q in t.base.children[t.base.root]}
    for c in t.tree.children[t.root]:
        out[t.labeling[c]].append(t.subtree(c))
    return out


def _escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace("(", "\\(").replace(")", "\\)")


def _subtree_keys(t: TreeOverQ) -> dict[str, str]:
    keys: dict[str, str] = {}
    for layer in reversed(t.tree.layers):
        for v in layer:
            ks = sorted(keys[c] for c in t.tree.children[v])
            keys[v] = "(" + _escape(t.labeling[v]) + "".join(ks) + ")"
    return keys


def canonical_key(t: TreeOverQ) -> str:
    """AHU-style key: ``"(" + label + sorted child keys + ")"``."""
    return _subtree_keys(t)[t.root]


def iso_over_Q(s: TreeOverQ, t: TreeOverQ) -> bool:
    if s.base != t.base:
        raise ValidationError("trees live over different quivers", kind="ambient_mismatch")
    return len(s) == len(t) and canonical_key(s) == canonical_key(t)


def canonical_form(t: TreeOverQ) -> TreeOverQ:
    """An isomorphic copy with ids ``v0, v1, ...`` assigned in canonical order."""
    keys = _subtree_keys(t)
    order = []
    stack = [t.root]
    while stack:
        v = stack.pop()
        order.append(v)
        kids = sorted(t.tree.children[v], key=lambda c: keys[c])
        stack.extend(reversed(kids))
    name = {v: f"v{i}" for i, v in enumerate(order)}
    verts = tuple(name[v] for v in order)
    edges = tuple((name[v], name[t.tree.parent[v]]) for v in order[1:])
    tree = _rooted_from_parent(Quiver(verts, edges), "v0")
    return TreeOverQ(t.base, tree, {name[v]: t.labeling[v] for v in order})


@dataclass(frozen=True, eq=False)
class ForestOverQ:
    """Disjoint rooted trees, each over the downset of ``ambient`` at its apex."""

    ambient: RootedTree
    components: tuple[TreeOverQ, ...]

    def __len__(self):
        return sum(len(c) for c in self.components)

    @property
    def apexes(self) -> tuple[str, ...]:
        return tuple(c.apex for c in self.components)

    def dims(self) -> dict[str, int]:
        out = {x: 0 for x in self.ambient.vertices}
        for c in self.components:
            for v in c.tree.vertices:
                out[c.labeling[v]] += 1
        return out

    def keys(self) -> list[tuple[str, str]]:
        return sorted((c.apex, canonical_key(c)) for c in self.components)


def build_forest(ambient: RootedTree, components: Iterable[TreeOverQ]) -> ForestOverQ:
    comps = tuple(components)
    seen: set[str] = set()
    downsets: dict[str, RootedTree] = {}
    for c in comps:
        if c.apex not in ambient:
            raise ValidationError(f"apex {c.apex!r} is not in Q", kind="bad_apex", witness=c.apex)
        if c.apex not in downsets:
            downsets[c.apex] = ambient.downset(c.apex)
        if c.base != downsets[c.apex]:
            raise ValidationError(
                f"component rooted at {c.root!r} is not over a downset of Q",
                kind="bad_component",
                witness=c.root,
            )
        clash = seen.intersection(c.tree.vertices)
        if clash:
            x = sorted(clash)[0]
            raise ValidationError(f"vertex {x!r} occurs in two components", kind="not_disjoint", witness=x)
        seen.update(c.tree.vertices)
    return ForestOverQ(ambient, comps)


def hasse_quiver(elements: Iterable[str], relation: Iterable[Sequence[str]], reflexive_closure: bool = True) -> Quiver:
    """Quiver of covering pairs of a finite partial order.

    ``relation`` lists pairs ``(x, y)`` meaning ``x <= y``.  Reflexive pairs
    are added unless ``reflexive_closure`` is false, in which case their
    absence is an error.  Transitivity is checked, not closed.
    """
    elems = tuple(_check_id(e) for e in elements)
    es = set(elems)
    if len(es) != len(elems):
        raise ValidationError("duplicate poset element", kind="duplicate_vertex")
    rel = set()
    for pair in relation:
        x, y = pair
        if x not in es or y not in es:
            raise ValidationError(f"relation pair {x!r}<={y!r} uses an unknown element", kind="undeclared_endpoint", witness=[x, y])
        rel.add((x, y))
    if reflexive_closure:
        rel.update((e, e) for e in elems)
    else:
        missing = [e for e in elems if (e, e) not in rel]
        if missing:
            raise ValidationError(f"relation not reflexive at {missing[0]!r}", kind="not_reflexive", witness=missing[0])
    for x, y in rel:
        if x != y and (y, x) in rel:
            raise ValidationError(f"relation not antisymmetric: {x!r}, {y!r}", kind="not_antisymmetric", witness=[x, y])
    up: dict[str, set[str]] = {e: set() for e in elems}
    for x, y in rel:
        if x != y:
            up[x].add(y)
    for x in elems:
        for y in up[x]:
            for z in up[y]:
                if z not in up[x]:
                    raise ValidationError(
                        f"relation not transitive: {x!r}<={y!r}<={z!r}", kind="not_transitive", witness=[x, y, z]
                    )
    edges = []
    for x in elems:
        for y in sorted(up[x]):
            if not any(y in up[z] for z in up[x] if z != y):
                edges.append((x, y))
    return Quiver(elems, tuple(edges))
