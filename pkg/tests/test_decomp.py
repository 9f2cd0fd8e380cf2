import random

import pytest
from hypothesis import given, settings, strategies as st

from h0tree import (
    ValidationError,
    build_forest,
    build_tree_over,
    canonical_key,
    decompose_forest,
    decompose_tree,
    elder_split,
    glue_trees_over,
    hom_count,
    is_reduced,
    is_subforest,
    iso_over_Q,
    linearize,
    oracle_decompose,
    path_quiver,
    rooted_tree,
    star,
    tree_leq,
)
from h0tree.gen import comparable_sibling_instance, random_rooted_tree, random_tree_over
from h0tree.repmod import OracleContext, direct_sum, hom_dim, push_forward_inclusion

from builders import Q_AB, Q_ABC, STAR, T1, T2, relabel


def ms(d):
    return dict(d.multiset())


def test_decompose_star():
    forest, d = decompose_tree(STAR)
    assert ms(d) == {("b", "(b)"): 1}
    assert len(forest.components) == 1


def test_decompose_t2():
    _, d = decompose_tree(T2)
    assert ms(d) == {("b", "(b(a))"): 1, ("a", "(a)"): 1}
    assert d.dims == {"a": 2, "b": 1}


def test_reduced_tree_is_unchanged():
    forest, d = decompose_tree(T1)
    assert len(forest.components) == 1 and iso_over_Q(forest.components[0], T1)
    assert ms(d) == {("b", "(b(a))"): 1}


def test_decompose_forest_examples():
    empty = build_forest(Q_AB, [])
    assert decompose_forest(empty).summands == ()
    two_stars = build_forest(Q_AB, [star(Q_AB, "s0"), star(Q_AB, "s1")])
    assert ms(decompose_forest(two_stars)) == {("b", "(b)"): 2}
    mixed = build_forest(Q_AB, [T2, star(Q_AB, "s0")])
    assert ms(decompose_forest(mixed)) == {("b", "(b(a))"): 1, ("a", "(a)"): 1, ("b", "(b)"): 1}


def test_elder_split_t2():
    leaves = T2.tree.children[T2.root]
    rest, detached = elder_split(T2, T2.root, leaves[0], leaves[1])
    assert iso_over_Q(rest, T1)
    assert detached.base.root == "a" and detached.is_star


def test_elder_split_keeps_other_siblings():
    sb = star(Q_ABC.downset("b"))
    pb = glue_trees_over(Q_ABC.downset("b"), [[star(Q_ABC.downset("a"))]])
    t = glue_trees_over(Q_ABC, [[sb, pb, pb]])
    kids = t.tree.children[t.root]
    sizes = {k: len(t.subtree(k)) for k in kids}
    c1 = next(k for k in kids if sizes[k] == 1)
    c2, c3 = [k for k in kids if k != c1]
    rest, detached = elder_split(t, t.root, c1, c2)
    assert set(rest.tree.children[rest.root]) == {c2, c3}
    assert len(detached) == 1


def test_elder_split_precondition():
    Q = rooted_tree({"a": "r", "c": "r"}, "r")
    t = glue_trees_over(Q, {"a": [star(Q.downset("a"))], "c": [star(Q.downset("c"))]})
    kids = t.tree.children[t.root]
    with pytest.raises(ValidationError):
        elder_split(t, t.root, kids[0], kids[1])
    # incomparable subtrees with equal labels
    sa = star(Q_ABC.downset("a"))
    pb = glue_trees_over(Q_ABC.downset("b"), [[sa]])
    sb = star(Q_ABC.downset("b"))
    u = glue_trees_over(Q_ABC, [[pb, sb]])
    big = next(k for k in u.tree.children[u.root] if u.tree.children[k])
    small = next(k for k in u.tree.children[u.root] if not u.tree.children[k])
    with pytest.raises(ValidationError):
        elder_split(u, u.root, big, small)


def _probe_profile(ctx, rep):
    return [hom_dim(r, rep) for r in ctx.reps] + [hom_dim(rep, r) for r in ctx.reps]


@pytest.mark.parametrize("seed", range(10))
def test_elder_split_is_additive_on_probes(seed):
    rng = random.Random(seed)
    Q = random_rooted_tree(rng.randint(2, 4), rng)
    t, p, drop, keep = comparable_sibling_instance(Q, rng.randint(2, 8), rng)
    assert tree_leq(t.subtree(drop), t.subtree(keep))
    rest, det = elder_split(t, p, drop, keep)
    ctx = OracleContext(Q)
    whole = linearize(t)
    parts = direct_sum([linearize(rest), push_forward_inclusion(linearize(det), Q)])
    assert whole.dims == parts.dims
    assert _probe_profile(ctx, whole) == _probe_profile(ctx, parts)
    assert hom_dim(whole, whole) == hom_dim(parts, parts)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_outputs_are_reduced_subforests_with_conserved_dims(seed):
    rng = random.Random(seed)
    Q = random_rooted_tree(rng.randint(1, 20), rng)
    t = random_tree_over(Q, rng.randint(1, 60), rng)
    forest, d = decompose_tree(t)
    assert is_subforest(forest, t)
    for c in forest.components:
        assert hom_count(c, c) == 1 and is_reduced(c)
        # idempotence
        again = decompose_tree(c)[1]
        assert dict(again.multiset()) == {(c.base.root, canonical_key(c)): 1}
    assert d.total_dims() == t.dims()
    assert all(is_reduced(s.witness) for s in d.summands)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_decomposition_invariant_under_renaming(seed):
    rng = random.Random(seed)
    Q = random_rooted_tree(rng.randint(1, 6), rng)
    t = random_tree_over(Q, rng.randint(1, 25), rng)
    assert decompose_tree(t)[1].to_dict() == decompose_tree(relabel(t, rng))[1].to_dict()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_agrees_with_oracle(seed):
    rng = random.Random(seed)
    Q = random_rooted_tree(rng.randint(1, 6), rng)
    t = random_tree_over(Q, rng.randint(1, 12), rng)
    res = oracle_decompose(linearize(t))
    if res.conclusive:
        assert res.multiset == decompose_tree(t)[1].multiset()


def test_long_path_is_one_summand():
    n = 300
    Q = path_quiver(n)
    tree = rooted_tree({f"t{i}": f"t{i + 1}" for i in range(1, n)}, f"t{n}")
    t = build_tree_over(Q, tree, {f"t{i}": str(i) for i in range(1, n + 1)})
    assert len(decompose_tree(t)[1].summands) == 1
