import itertools

import pytest
from hypothesis import given, strategies as st

from hoperads.errors import BoundsError, DomainError, InvariantViolation, TreeParseError
from hoperads.trees import (Tree, canonical_decomposition, compose, compose_all,
                            enumerate_trees, format_tree, from_nested, identity_cell,
                            is_degenerate, is_pruned, leaves, parse_tree, suspend,
                            truncate, truncate_to, unit_tree)

SMALL = [t for h in (1, 2, 3) for t in enumerate_trees(h, 3, max_width=3)]


def nested_trees(height):
    """Hypothesis strategy for nested-tuple trees of an exact height."""
    if height == 0:
        return st.just(())
    return st.lists(nested_trees(height - 1), max_size=3).map(tuple)


def test_parse_levels_and_maps():
    t = parse_tree("[[*,*],[*]]")
    assert t.levels == (1, 2, 3)
    assert t.maps == ((1, 1), (1, 1, 2))
    assert t.height == 2 and t.tips == 3


def test_parse_corolla_and_unit():
    assert parse_tree("[*,*,*]") == Tree((1, 3), ((1, 1, 1),))
    assert parse_tree("*") == unit_tree(0)
    assert parse_tree("[[*]]") == unit_tree(2)


def test_parse_degenerate_branch():
    t = parse_tree("[[],[*]]")
    assert t.levels == (1, 2, 1)
    assert t.maps == ((1, 1), (2,))
    assert not is_pruned(t)


def test_parse_flexible_height():
    assert parse_tree("[]").height == 1
    assert parse_tree("[]", height=3) == Tree((1, 0, 0, 0), ((), (), ()))
    with pytest.raises(TreeParseError):
        parse_tree("[*]", height=2)


@pytest.mark.parametrize("text", ["[[*]", "[*,]", "[[*],*]", "[x]", "", "[*]]"])
def test_parse_errors(text):
    with pytest.raises(TreeParseError):
        parse_tree(text)


def test_invalid_structure_rejected():
    with pytest.raises(InvariantViolation):
        Tree((1, 2, 2), ((1, 1), (2, 1)))
    with pytest.raises(InvariantViolation):
        Tree((2,), ())


@pytest.mark.parametrize("tree", SMALL, ids=str)
def test_format_parse_round_trip(tree):
    assert parse_tree(format_tree(tree), height=tree.height) == tree
    assert from_nested(tree.nested, tree.height) == tree
    assert Tree.from_json(tree.to_json()) == tree


@given(nested_trees(3))
def test_nested_round_trip_property(nested):
    t = from_nested(nested, 3)
    assert t.nested == nested
    assert parse_tree(str(t), height=3) == t


def test_pruned_and_leaves():
    assert is_pruned(parse_tree("[[*],[*,*]]"))
    t = parse_tree("[[],[*]]")
    assert [tuple(leaf) for leaf in leaves(t)] == [(1, 1), (2, 1)]
    assert is_degenerate(parse_tree("[[],[]]"))


def test_suspend_and_truncate():
    t = parse_tree("[[*,*],[*]]")
    assert truncate(suspend(t)) == t
    assert truncate(t) == parse_tree("[*,*]")
    with pytest.raises(DomainError):
        truncate(unit_tree(0))


def test_compose_example():
    s, t = parse_tree("[[*],[*]]"), parse_tree("[[*],[*,*]]")
    assert compose(s, t, 1) == parse_tree("[[*,*],[*,*,*]]")
    assert compose(s, t, 0) == parse_tree("[[*],[*],[*],[*,*]]")


def test_compose_rejects_mismatched_truncations():
    with pytest.raises(InvariantViolation):
        compose(parse_tree("[[*]]"), parse_tree("[[*],[*]]"), 1)


@pytest.mark.parametrize("tree", SMALL, ids=str)
def test_identity_cells_are_units(tree):
    for k in range(tree.height):
        e = identity_cell(tree, k)
        assert compose(e, tree, k) == tree
        assert compose(tree, e, k) == tree


def test_compose_associative_exhaustive():
    pool = enumerate_trees(2, 2, max_width=2)
    for k in (0, 1):
        groups = {}
        for t in pool:
            groups.setdefault(truncate_to(t, k), []).append(t)
        for group in groups.values():
            for a, b, c in itertools.product(group, repeat=3):
                assert compose(compose(a, b, k), c, k) == compose(a, compose(b, c, k), k)


@given(nested_trees(2), nested_trees(2), nested_trees(2))
def test_compose_associative_along_root(a, b, c):
    a, b, c = (from_nested(x, 2) for x in (a, b, c))
    assert compose(compose(a, b, 0), c, 0) == compose(a, compose(b, c, 0), 0)
    assert (compose(a, b, 0)).tips == a.tips + b.tips


@pytest.mark.parametrize("tree", SMALL, ids=str)
def test_canonical_decomposition_recomposes(tree):
    for k in range(tree.height):
        if tree.levels[k] != 1:
            continue
        factors = canonical_decomposition(tree, k)
        assert compose_all(factors, k) == tree


def test_canonical_decomposition_example():
    factors = canonical_decomposition(parse_tree("[[*,*],[*]]"), 0)
    assert [str(f) for f in factors] == ["[[*,*]]", "[[*]]"]


def _compositions(k):
    return sum(1 for r in range(k) for _ in itertools.combinations(range(1, k), r))


@pytest.mark.parametrize("k", range(1, 7))
def test_pruned_two_tree_count_matches_compositions(k):
    found = enumerate_trees(2, k, pruned_only=True, min_tips=k)
    assert len(found) == _compositions(k)


def test_enumerate_height_one():
    assert [str(t) for t in enumerate_trees(1, 2)] == ["[*,*]", "[*]", "[]"]


def test_enumerate_respects_width_and_is_sorted():
    found = enumerate_trees(2, 4, max_width=4)
    assert len(found) == len(set(found)) == 126
    assert all(max(t.levels) <= 4 for t in found)
    assert [str(t) for t in found] == sorted(str(t) for t in found)


def test_enumerate_bounds():
    with pytest.raises(BoundsError):
        enumerate_trees(5, 2)
    with pytest.raises(BoundsError):
        enumerate_trees(2, 9)
