"""Elder-rule decomposition of linearized trees over Q into reduced pieces."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .core import (
    ForestOverQ,
    Quiver,
    RootedTree,
    TreeOverQ,
    ValidationError,
    _rooted_from_parent,
    canonical_form,
    canonical_key,
)
from .order import tree_leq


@dataclass(frozen=True)
class Summand:
    apex: str
    key: str
    witness: TreeOverQ
    multiplicity: int


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Krull-Schmidt multiset of reduced summands plus the source dim vector."""

    summands: tuple[Summand, ...]
    dims: dict[str, int]

    def multiset(self) -> Counter:
        return Counter({(s.apex, s.key): s.multiplicity for s in self.summands})

    def __eq__(self, other):
        if not isinstance(other, Decomposition):
            return NotImplemented
        return self.multiset() == other.multiset() and self.dims == other.dims

    def total_dims(self) -> dict[str, int]:
        """Sum of summand dim vectors, extended by zero outside each downset."""
        out = {x: 0 for x in self.dims}
        for s in self.summands:
            for x, d in s.witness.dims().items():
                out[x] += s.multiplicity * d
        return out

    def to_dict(self) -> dict:
        return {
            "summands": [
                {
                    "apex": s.apex,
                    "key": s.key,
                    "multiplicity": s.multiplicity,
                    "tree": s.witness.to_dict(),
                }
                for s in self.summands
            ],
            "dims": dict(sorted(self.dims.items())),
        }


def aggregate(components: Iterable[TreeOverQ], dims: dict[str, int]) -> Decomposition:
    """Group reduced components by (apex, canonical key)."""
    counts: Counter = Counter()
    witness: dict[tuple[str, str], TreeOverQ] = {}
    for c in components:
        k = (c.apex, canonical_key(c))
        counts[k] += 1
        if k not in witness:
            witness[k] = canonical_form(c)
    summands = tuple(
        Summand(apex, key, witness[apex, key], counts[apex, key]) for apex, key in sorted(counts)
    )
    return Decomposition(summands, dict(dims))


def merge_decompositions(parts: Iterable[Decomposition], dims: dict[str, int]) -> Decomposition:
    counts: Counter = Counter()
    witness = {}
    for d in parts:
        for s in d.summands:
            counts[s.apex, s.key] += s.multiplicity
            witness.setdefault((s.apex, s.key), s.witness)
    summands = tuple(Summand(a, k, witness[a, k], counts[a, k]) for a, k in sorted(counts))
    return Decomposition(summands, dict(dims))


def elder_split(t: TreeOverQ, parent: str, drop_child: str, keep_child: str) -> tuple[TreeOverQ, TreeOverQ]:
    """Cut the edge ``drop_child -> parent`` when its subtree precedes a sibling's.

    Returns ``(remaining, detached)``; ``remaining`` keeps the root of ``t``
    and ``detached`` lives over the downset at the label of ``drop_child``.
    """
    kids = t.tree.children.get(parent)
    if kids is None:
        raise ValidationError(f"unknown vertex {parent!r}", kind="unknown_vertex", witness=parent)
    for c in (drop_child, keep_child):
        if c not in kids:
            raise ValidationError(f"{c!r} is not a child of {parent!r}", kind="precondition", witness=c)
    if drop_child == keep_child:
        raise ValidationError("the two children must be distinct", kind="precondition")
    if t.labeling[drop_child] != t.labeling[keep_child]:
        raise ValidationError("the two children have different labels", kind="precondition")
    detached = t.subtree(drop_child)
    if not tree_leq(detached, t.subtree(keep_child)):
        raise ValidationError(
            f"subtree at {drop_child!r} does not precede the subtree at {keep_child!r}",
            kind="precondition",
        )
    gone = set(detached.tree.vertices)
    verts = tuple(v for v in t.tree.vertices if v not in gone)
    edges = tuple((c, p) for c, p in t.tree.parent.items() if c not in gone)
    tree = _rooted_from_parent(Quiver(verts, edges), t.root)
    remaining = TreeOverQ(t.base, tree, {v: t.labeling[v] for v in verts})
    return remaining, detached


def elder_deletions(t: TreeOverQ) -> list[str]:
    """Children whose edge to their parent gets cut, in the order they are cut.

    Levels are swept bottom-up.  ``rel`` holds, for the level just finished,
    ``x -> {y : x R y}`` where ``x R y`` means the surviving subtree at ``x``
    precedes the surviving subtree at ``y`` (equal labels only).
    """
    tree, lab = t.tree, t.labeling
    deleted: list[str] = []
    kept: dict[str, frozenset[str]] = {}
    rel: dict[str, set[str]] = {}
    for lvl in range(tree.height, -1, -1):
        layer = tree.layers[lvl]
        for x in layer:
            groups: dict[str, list[str]] = {}
            for p in tree.children[x]:
                groups.setdefault(lab[p], []).append(p)
            keep = []
            for group in groups.values():
                if len(group) == 1:
                    keep.append(group[0])
                    continue
                top = [
                    p for p in group
                    if not any(q in rel[p] and p not in rel[q] for q in group)
                ]
                reps = []
                for p in top:  # group is sorted, so the first of each class wins
                    if not any(r in rel[p] for r in reps):
                        reps.append(p)
                keep.extend(reps)
                chosen = set(reps)
                deleted.extend(p for p in group if p not in chosen)
            kept[x] = frozenset(keep)
        new_rel: dict[str, set[str]] = {}
        by_label: dict[str, list[str]] = {}
        for x in layer:
            by_label.setdefault(lab[x], []).append(x)
        for group in by_label.values():
            for x in group:
                below = kept[x]
                new_rel[x] = {
                    y for y in group
                    if all(not rel[p].isdisjoint(kept[y]) for p in below)
                }
        rel = new_rel
    return deleted


def decompose_tree(t: TreeOverQ) -> tuple[ForestOverQ, Decomposition]:
    """Split ``t`` into reduced components by deleting edges only."""
    cut = elder_deletions(t)
    tree, lab = t.tree, t.labeling
    cut_set = set(cut)
    downsets: dict[str, RootedTree] = {t.base.root: t.base}
    components = []
    for r in [t.root] + sorted(cut):
        verts = [r]
        i = 0
        while i < len(verts):
            verts.extend(c for c in tree.children[verts[i]] if c not in cut_set)
            i += 1
        apex = lab[r]
        if apex not in downsets:
            downsets[apex] = t.base.downset(apex)
        sub = _rooted_from_parent(
            Quiver(tuple(verts), tuple((v, tree.parent[v]) for v in verts[1:])), r
        )
        components.append(TreeOverQ(downsets[apex], sub, {v: lab[v] for v in verts}))
    forest = ForestOverQ(t.base, tuple(components))
    return forest, aggregate(components, t.dims())


def decompose_forest(f: ForestOverQ) -> Decomposition:
    parts = [decompose_tree(c)[1] for c in f.components]
    return merge_decompositions(parts, f.dims())


def is_subforest(forest: ForestOverQ, t: TreeOverQ) -> bool:
    """Whether ``forest`` arises from ``t`` by deleting edges only."""
    seen = set()
    for c in forest.components:
        for v, p in c.tree.parent.items():
            if t.tree.parent.get(v) != p:
                return False
        for v in c.tree.vertices:
            if c.labeling[v] != t.labeling.get(v):
                return False
        seen.update(c.tree.vertices)
    return seen == set(t.tree.vertices) and len(forest) == len(t)


__all__ = [
    "Decomposition",
    "Summand",
    "aggregate",
    "decompose_forest",
    "decompose_tree",
    "elder_deletions",
    "elder_split",
    "is_subforest",
    "merge_decompositions",
]
