"""The subtree preorder on trees over Q, morphism counts, and reduced trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Mapping

from .core import (
    RootedTree,
    TreeOverQ,
    ValidationError,
    canonical_key,
    glue_trees_over,
    star,
)


def _same_ambient(s: TreeOverQ, t: TreeOverQ) -> None:
    if s.base is not t.base and s.base != t.base:
        raise ValidationError("trees live over different quivers", kind="ambient_mismatch")


def _by_label(t: TreeOverQ, vs) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for v in vs:
        out.setdefault(t.labeling[v], []).append(v)
    return out


def _pair_table(s: TreeOverQ, t: TreeOverQ, leaf_value, combine):
    """Fill a table over same-level, same-label vertex pairs, deepest level first.

    ``combine(child_values)`` receives, for each child ``c`` of ``u``, the list
    of table values ``(c, d)`` over same-labelled children ``d`` of ``v``.
    """
    table: dict[tuple[str, str], object] = {}
    depth = min(s.tree.height, t.tree.height)
    for lvl in range(depth, -1, -1):
        t_groups = _by_label(t, t.tree.layers[lvl])
        for u in s.tree.layers[lvl]:
            for v in t_groups.get(s.labeling[u], ()):
                kids_u = s.tree.children[u]
                if not kids_u:
                    table[u, v] = leaf_value
                    continue
                kid_groups = _by_label(t, t.tree.children[v])
                table[u, v] = combine(
                    [table[c, d] for d in kid_groups.get(s.labeling[c], ())] for c in kids_u
                )
    return table


def tree_leq(s: TreeOverQ, t: TreeOverQ) -> bool:
    """``s`` precedes ``t``: every child subtree of ``s`` sits below a same-branch child subtree of ``t``."""
    _same_ambient(s, t)
    table = _pair_table(s, t, True, lambda groups: all(any(g) for g in groups))
    return table[s.root, t.root]


def hom_count(s: TreeOverQ, t: TreeOverQ) -> int:
    """Exact number of morphisms ``s -> t`` over Q (product over children of sums)."""
    _same_ambient(s, t)

    def combine(groups):
        total = 1
        for g in groups:
            total *= sum(g)
            if not total:
                return 0
        return total

    table = _pair_table(s, t, 1, combine)
    return table[s.root, t.root]


def exists_morphism(s: TreeOverQ, t: TreeOverQ) -> bool:
    return hom_count(s, t) > 0


def _self_leq(t: TreeOverQ) -> dict[tuple[str, str], bool]:
    return _pair_table(t, t, True, lambda groups: all(any(g) for g in groups))


def is_reduced(t: TreeOverQ) -> bool:
    """Definitional test: same-branch siblings are pairwise incomparable, recursively."""
    leq = _self_leq(t)
    for v in t.tree.vertices:
        for group in _by_label(t, t.tree.children[v]).values():
            for a, b in combinations(group, 2):
                if leq[a, b] or leq[b, a]:
                    return False
    return True


def is_reduced_by_endomorphisms(t: TreeOverQ) -> bool:
    """Reduced iff the identity is the only endomorphism."""
    return hom_count(t, t) == 1


@dataclass(frozen=True, eq=False)
class ReducedCatalog:
    ambient: RootedTree
    entries: tuple[TreeOverQ, ...]
    index: Mapping[str, TreeOverQ] = field(repr=False)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _antichains(entries: list[TreeOverQ]) -> list[tuple[TreeOverQ, ...]]:
    n = len(entries)
    comparable = [[False] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        c = tree_leq(entries[i], entries[j]) or tree_leq(entries[j], entries[i])
        comparable[i][j] = comparable[j][i] = c
    out: list[tuple[int, ...]] = [()]

    # depth-first over increasing index sequences, pruned on comparability
    def extend(chosen: tuple[int, ...], start: int) -> None:
        for k in range(start, n):
            if all(not comparable[k][c] for c in chosen):
                nxt = chosen + (k,)
                out.append(nxt)
                extend(nxt, k + 1)

    extend((), 0)
    return [tuple(entries[i] for i in a) for a in out]


def _catalogs(Q: RootedTree) -> dict[str, list[TreeOverQ]]:
    """Reduced trees over every downset of ``Q``, keyed by apex."""
    cats: dict[str, list[TreeOverQ]] = {}
    for layer in reversed(Q.layers):
        for x in layer:
            base = Q.downset(x)
            kids = base.children[x]
            if not kids:
                cats[x] = [star(base)]
                continue
            choices = [_antichains(cats[q]) for q in kids]
            entries = []
            for combo in product(*choices):
                if not any(combo):
                    entries.append(star(base))
                else:
                    entries.append(glue_trees_over(base, [list(a) for a in combo]))
            cats[x] = entries
    return cats


def _catalog(Q: RootedTree, entries: list[TreeOverQ]) -> ReducedCatalog:
    entries = sorted(entries, key=lambda e: (len(e), canonical_key(e)))
    index = {canonical_key(e): e for e in entries}
    assert len(index) == len(entries)
    return ReducedCatalog(Q, tuple(entries), index)


def enumerate_reduced(Q: RootedTree) -> ReducedCatalog:
    """One representative per isomorphism class of reduced trees over ``Q``.

    Antichains are materialised by subset search, so the cost is exponential
    in the width of ``Q`` in the worst case.
    """
    return _catalog(Q, _catalogs(Q)[Q.root])


def enumerate_indecomposables(Q: RootedTree) -> list[tuple[str, TreeOverQ]]:
    """All ``(apex, reduced tree over the downset at apex)`` pairs, apexes sorted."""
    cats = _catalogs(Q)
    out = []
    for x in sorted(Q.vertices):
        out.extend((x, e) for e in _catalog(Q.downset(x), cats[x]).entries)
    return out
