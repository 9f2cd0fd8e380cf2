"""Representations of a rooted tree quiver over GF(p), and an independent
decomposition oracle built from hom-space dimensions."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import (
    ForestOverQ,
    Quiver,
    RootedTree,
    TreeOverQ,
    ValidationError,
    canonical_key,
)
from .filtration import QFiltration
from .order import enumerate_indecomposables


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p) or p >= 2**31:
        raise ValidationError(f"characteristic must be a prime below 2**31, got {p!r}", kind="bad_prime")
    return p


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over GF(p) by Gaussian elimination."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        r += 1
    return r


@dataclass(frozen=True, eq=False)
class Representation:
    """Vector spaces ``GF(p)^dims[x]`` and a matrix per edge ``(child, parent)``.

    Each matrix has shape ``dims[parent] x dims[child]``.
    """

    Q: RootedTree
    dims: Mapping[str, int]
    matrices: Mapping[tuple[str, str], np.ndarray]
    p: int = 2

    def __post_init__(self):
        for (s, t), mat in self.matrices.items():
            if mat.shape != (self.dims[t], self.dims[s]):
                raise ValidationError(f"matrix on {s!r}->{t!r} has shape {mat.shape}", kind="bad_shape")

    def dim_vector(self) -> dict[str, int]:
        return {x: self.dims[x] for x in self.Q.vertices}

    def total_dim(self) -> int:
        return sum(self.dims.values())


def zero_representation(Q: RootedTree, p: int = 2) -> Representation:
    dims = {x: 0 for x in Q.vertices}
    return Representation(Q, dims, {e: np.zeros((0, 0), dtype=np.int64) for e in Q.parent.items()}, p)


def linearize(t: TreeOverQ | ForestOverQ, p: int = 2) -> Representation:
    """Push the constant representation forward along the labeling.

    The basis at ``x`` is the fibre over ``x``, sorted by vertex id.
    """
    _check_prime(p)
    if isinstance(t, ForestOverQ):
        Q = t.ambient
        pieces = [(c.tree, c.labeling) for c in t.components]
    else:
        Q = t.base
        pieces = [(t.tree, t.labeling)]
    fibres: dict[str, list[str]] = {x: [] for x in Q.vertices}
    parent: dict[str, str] = {}
    for tree, lab in pieces:
        for v in tree.vertices:
            fibres[lab[v]].append(v)
        parent.update(tree.parent)
    index = {}
    for x, vs in fibres.items():
        vs.sort()
        index.update((v, i) for i, v in enumerate(vs))
    dims = {x: len(vs) for x, vs in fibres.items()}
    mats = {}
    for s, t_ in Q.parent.items():
        mat = np.zeros((dims[t_], dims[s]), dtype=np.int64)
        for v in fibres[s]:
            mat[index[parent[v]], index[v]] = 1
        mats[s, t_] = mat
    return Representation(Q, dims, mats, p)


def push_forward_inclusion(r: Representation, Q: RootedTree) -> Representation:
    """Extend a representation of a downset of ``Q`` by zero."""
    x = r.Q.root
    if x not in Q or Q.downset(x) != r.Q:
        raise ValidationError("base is not a downset of Q", kind="not_a_downset")
    dims = {y: r.dims.get(y, 0) for y in Q.vertices}
    mats = {}
    for s, t in Q.parent.items():
        if (s, t) in r.matrices:
            mats[s, t] = r.matrices[s, t]
        else:
            mats[s, t] = np.zeros((dims[t], dims[s]), dtype=np.int64)
    return Representation(Q, dims, mats, r.p)


def direct_sum(rs: Sequence[Representation], Q: RootedTree | None = None, p: int | None = None) -> Representation:
    """Block-diagonal sum.  ``Q`` and ``p`` are needed only for an empty list."""
    if not rs:
        if Q is None:
            raise ValidationError("empty direct sum needs Q", kind="mismatch")
        return zero_representation(Q, p or 2)
    Q = Q or rs[0].Q
    p = p or rs[0].p
    for r in rs:
        if r.Q != Q or r.p != p:
            raise ValidationError("summands differ in quiver or characteristic", kind="mismatch")
    dims = {x: sum(r.dims[x] for r in rs) for x in Q.vertices}
    mats = {}
    for s, t in Q.parent.items():
        mat = np.zeros((dims[t], dims[s]), dtype=np.int64)
        i = j = 0
        for r in rs:
            b = r.matrices[s, t]
            mat[i : i + b.shape[0], j : j + b.shape[1]] = b
            i += b.shape[0]
            j += b.shape[1]
        mats[s, t] = mat
    return Representation(Q, dims, mats, p)


def hom_dim(m: Representation, n: Representation, zero_at_root: bool = False) -> int:
    """dim Hom(m, n), optionally restricted to maps vanishing at the root.

    Unknowns are the blocks ``phi_x`` (``dims_n[x] x dims_m[x]``), vectorised
    column-major; each edge ``s -> t`` contributes
    ``N phi_s - phi_t M = 0``.
    """
    if m.Q != n.Q or m.p != n.p:
        raise ValidationError("representations differ in quiver or characteristic", kind="mismatch")
    Q, p = m.Q, m.p
    offset: dict[str, int] = {}
    total = 0
    for x in Q.vertices:
        if zero_at_root and x == Q.root:
            continue
        offset[x] = total
        total += m.dims[x] * n.dims[x]
    if total == 0:
        return 0
    blocks = []
    for s, t in Q.parent.items():
        ms, mt, ns, nt = m.dims[s], m.dims[t], n.dims[s], n.dims[t]
        rows = nt * ms
        if rows == 0 or s not in offset:
            continue
        eq = np.zeros((rows, total), dtype=np.int64)
        eq[:, offset[s] : offset[s] + ns * ms] = np.kron(np.eye(ms, dtype=np.int64), n.matrices[s, t])
        if t in offset and mt:
            eq[:, offset[t] : offset[t] + nt * mt] -= np.kron(m.matrices[s, t].T, np.eye(nt, dtype=np.int64))
        blocks.append(eq)
    if not blocks:
        return total
    return total - rank_mod_p(np.vstack(blocks), p)


def coefficient_quiver(r: Representation) -> Quiver:
    """Vertices ``x#i`` per basis vector, one edge per non-zero matrix entry."""
    verts = [f"{x}#{i}" for x in r.Q.vertices for i in range(r.dims[x])]
    edges = []
    for (s, t), mat in r.matrices.items():
        for i, j in zip(*np.nonzero(mat % r.p)):
            edges.append((f"{s}#{j}", f"{t}#{i}"))
    return Quiver(tuple(verts), tuple(edges))


def h0_dims_via_rank(f: QFiltration, p: int = 2) -> dict[str, int]:
    """Number of components of every sublevel graph, as |V| - rank(incidence)."""
    _check_prime(p)
    out = {}
    for x in f.Q.vertices:
        vs, es = f.sublevel(x)
        if not es:
            out[x] = len(vs)
            continue
        idx = {v: i for i, v in enumerate(vs)}
        inc = np.zeros((len(vs), len(es)), dtype=np.int64)
        for j, (u, w) in enumerate(es):
            inc[idx[u], j] = 1
            inc[idx[w], j] = p - 1
        out[x] = len(vs) - rank_mod_p(inc, p)
    return out


@dataclass(frozen=True)
class OracleResult:
    """``multiset`` is set only when exactly one candidate survived."""

    survivors: int
    multiset: Counter | None

    @property
    def conclusive(self) -> bool:
        return self.survivors == 1


class OracleContext:
    """Catalog of indecomposables of ``Q`` with their hom dims, cached lazily."""

    def __init__(self, Q: RootedTree, p: int = 2, catalog=None):
        self.Q = Q
        self.p = _check_prime(p)
        self.catalog = list(catalog if catalog is not None else enumerate_indecomposables(Q))
        self.tags = [(apex, canonical_key(t)) for apex, t in self.catalog]
        self.reps = [push_forward_inclusion(linearize(t, p), Q) for _, t in self.catalog]
        self.dimvecs = [r.dim_vector() for r in self.reps]
        self._hom: dict[tuple[int, int], int] = {}

    def hom(self, i: int, j: int) -> int:
        if (i, j) not in self._hom:
            self._hom[i, j] = hom_dim(self.reps[i], self.reps[j])
        return self._hom[i, j]


def oracle_decompose(m: Representation, Q: RootedTree | None = None, catalog=None, context: OracleContext | None = None) -> OracleResult:
    """Search multiplicity vectors over the catalog consistent with dim and hom data.

    A vector survives when it reproduces the dim vector of ``m``, every
    ``dim Hom(X_i, m)``, every ``dim Hom(m, X_i)`` and ``dim End(m)``.
    Exponential in the worst case; meant for small quivers and dimensions.
    """
    Q = Q or m.Q
    if context is None:
        context = OracleContext(Q, m.p, catalog)
    ctx = context
    target = m.dim_vector()
    n = len(ctx.catalog)
    a = [hom_dim(r, m) for r in ctx.reps]
    b = [hom_dim(m, r) for r in ctx.reps]
    end = hom_dim(m, m)
    cand = [j for j in range(n) if all(ctx.dimvecs[j][x] <= target[x] for x in Q.vertices) and sum(ctx.dimvecs[j].values())]
    # columns of the hom matrix restricted to usable summands
    col_in = {j: [ctx.hom(i, j) for i in range(n)] for j in cand}
    col_out = {j: [ctx.hom(j, i) for i in range(n)] for j in cand}
    found: list[dict[int, int]] = []

    def search(k: int, rem: dict[str, int], pa: list[int], pb: list[int], chosen: dict[int, int]) -> None:
        if len(found) > 1:
            return
        if k == len(cand):
            if any(rem.values()) or pa != a or pb != b:
                return
            e = sum(chosen[i] * chosen[j] * ctx.hom(i, j) for i in chosen for j in chosen)
            if e == end:
                found.append(dict(chosen))
            return
        j = cand[k]
        dv = ctx.dimvecs[j]
        cap = min(rem[x] // d for x, d in dv.items() if d)
        for mu in range(cap, -1, -1):
            na = [pa[i] + mu * col_in[j][i] for i in range(n)]
            nb = [pb[i] + mu * col_out[j][i] for i in range(n)]
            if any(na[i] > a[i] or nb[i] > b[i] for i in range(n)):
                continue
            nrem = {x: rem[x] - mu * dv[x] for x in rem}
            if mu:
                chosen[j] = mu
            search(k + 1, nrem, na, nb, chosen)
            chosen.pop(j, None)

    search(0, dict(target), [0] * n, [0] * n, {})
    if not found:
        raise ValidationError("no multiset of indecomposables matches; input is outside the expected class", kind="promise_violation")
    if len(found) > 1:
        return OracleResult(len(found), None)
    return OracleResult(1, Counter({ctx.tags[j]: mu for j, mu in found[0].items()}))
