import random

import pytest
from hypothesis import given, settings, strategies as st

from h0tree import (
    ValidationError,
    canonical_key,
    enumerate_indecomposables,
    enumerate_reduced,
    exists_morphism,
    hom_count,
    is_reduced,
    iso_over_Q,
    path_quiver,
    tree_leq,
)
from h0tree.gen import random_rooted_tree, random_tree_over
from h0tree.order import is_reduced_by_endomorphisms

from builders import Q_AB, Q_ABC, Q_V, STAR, STAR_A, T1, T2, brute_homs


def test_tree_leq_examples():
    assert tree_leq(STAR, T1)
    assert not tree_leq(T1, STAR)
    assert tree_leq(T1, T2) and tree_leq(T2, T1)
    assert not iso_over_Q(T1, T2)


def test_hom_count_examples():
    assert hom_count(STAR, T1) == 1
    assert hom_count(T1, STAR) == 0
    assert hom_count(T2, T2) == 4
    assert brute_homs(T2, T2) == 4


def test_exists_morphism_examples():
    assert exists_morphism(STAR, T1)
    assert not exists_morphism(T1, STAR)
    assert exists_morphism(T2, T1)


def test_is_reduced_examples():
    for t, want in ((STAR, True), (T1, True), (T2, False)):
        assert is_reduced(t) is want
        assert is_reduced_by_endomorphisms(t) is want


def test_mismatched_ambient_rejected():
    with pytest.raises(ValidationError):
        tree_leq(STAR_A, T1)
    with pytest.raises(ValidationError):
        hom_count(STAR_A, T1)


def test_catalog_sizes():
    assert len(enumerate_reduced(Q_AB)) == 2
    assert len(enumerate_reduced(Q_ABC)) == 3
    assert len(enumerate_reduced(Q_V)) == 4
    assert len(enumerate_indecomposables(Q_AB)) == 3
    assert len(enumerate_indecomposables(Q_V)) == 6
    for n in range(1, 7):
        assert len(enumerate_indecomposables(path_quiver(n))) == n * (n + 1) // 2


def test_catalog_contents_over_a_b():
    keys = {(a, canonical_key(t)) for a, t in enumerate_indecomposables(Q_AB)}
    assert keys == {("a", "(a)"), ("b", "(b)"), ("b", "(b(a))")}


def test_huge_hom_count_is_exact():
    # a root over b with 70 leaves over a: 70**70 endomorphisms, beyond 64 bits
    from h0tree import glue_trees_over

    big = glue_trees_over(Q_AB, [[STAR_A] * 70])
    assert hom_count(big, big) == 70**70


def _pair(seed, qmax=5, tmax=8):
    rng = random.Random(seed)
    Q = random_rooted_tree(rng.randint(1, qmax), rng)
    return Q, random_tree_over(Q, rng.randint(1, tmax), rng), random_tree_over(Q, rng.randint(1, tmax), rng)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_hom_count_matches_brute_force(seed):
    _, s, t = _pair(seed)
    assert hom_count(s, t) == brute_homs(s, t)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_leq_iff_morphism(seed):
    _, s, t = _pair(seed, tmax=12)
    assert tree_leq(s, t) == (hom_count(s, t) > 0) == exists_morphism(s, t)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_leq_reflexive_transitive(seed):
    rng = random.Random(seed)
    Q = random_rooted_tree(rng.randint(1, 4), rng)
    ts = [random_tree_over(Q, rng.randint(1, 6), rng) for _ in range(3)]
    for t in ts:
        assert tree_leq(t, t)
    a, b, c = ts
    if tree_leq(a, b) and tree_leq(b, c):
        assert tree_leq(a, c)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_reduced_iff_unique_endomorphism(seed):
    rng = random.Random(seed)
    Q = random_rooted_tree(rng.randint(1, 6), rng)
    t = random_tree_over(Q, rng.randint(1, 12), rng)
    assert is_reduced(t) == (hom_count(t, t) == 1) == is_reduced_by_endomorphisms(t)


@pytest.mark.parametrize("seed", range(6))
def test_catalog_entries_reduced_distinct_and_complete(seed):
    rng = random.Random(seed)
    Q = random_rooted_tree(rng.randint(2, 5), rng)
    cat = enumerate_reduced(Q)
    keys = [canonical_key(t) for t in cat]
    assert len(set(keys)) == len(keys)
    assert all(is_reduced(t) for t in cat)
    known = set(keys)
    hits = 0
    for _ in range(300):
        t = random_tree_over(Q, rng.randint(1, 10), rng)
        if hom_count(t, t) == 1:
            hits += 1
            assert canonical_key(t) in known
    assert hits
