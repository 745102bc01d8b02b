import itertools
from collections import Counter

import pytest

from hoperads.errors import BoundsError, InvariantViolation
from hoperads.hoperad import (ChainObject, chain_category, chain_vertices, enumerate_chains,
                              free_operad_elements, one_step_chain, substitute,
                              terminal_collection)
from hoperads.nerve import has_terminal, terminal_objects
from hoperads.omega import TreeMorphism, compose, hom_set, identity, tip_fibers
from hoperads.trees import enumerate_trees, parse_tree, unit_tree


def corolla(l):
    return parse_tree("[" + ",".join("*" * l) + "]")


def ordered_set_partitions(k):
    """Length -> number of ordered partitions of a k-set into that many blocks."""
    out = Counter()
    for blocks in range(1, k + 1):
        for labels in itertools.product(range(blocks), repeat=k):
            if len(set(labels)) == blocks:
                out[blocks] += 1
    if k == 0:
        out[0] = 1
    return out


@pytest.mark.parametrize("l", range(1, 6))
def test_corolla_chain_counts_are_ordered_partitions_of_gaps(l):
    chains = enumerate_chains(corolla(l))
    by_length = Counter(c.length for c in chains)
    expected = ordered_set_partitions(l - 1)
    if l == 1:
        expected = Counter({0: 1})  # [*] is U_1 itself
    assert by_length == expected


def test_four_leaf_corolla_has_thirteen_chains():
    assert len(enumerate_chains(corolla(4))) == 13


def test_unit_arity():
    cat = chain_category(unit_tree(2))
    assert len(cat.objects) == 1 and len(cat.arrows) == 1


def test_three_leaf_category():
    cat = chain_category(corolla(3))
    assert len(cat.objects) == 3
    assert len(cat.non_identity_arrows()) == 2
    assert cat.is_poset()
    top = cat.objects[terminal_objects(cat)[0]]
    assert top.length == 1


def test_chains_end_at_unit_and_are_surjective():
    for c in enumerate_chains(parse_tree("[[*,*],[*]]")):
        assert c.trees[-1] == unit_tree(2)
        assert c.surjective_chain and not c.has_identity_steps()


def test_identity_step_mode_needs_a_bound():
    with pytest.raises(BoundsError):
        enumerate_chains(corolla(2), no_identity_steps=False)
    chains = enumerate_chains(corolla(2), no_identity_steps=False, max_len=3)
    assert Counter(c.length for c in chains) == {1: 1, 2: 2, 3: 3}


def test_non_pruned_arity_needs_a_bound():
    with pytest.raises(BoundsError):
        enumerate_chains(parse_tree("[[*],[]]"))
    assert enumerate_chains(parse_tree("[[*],[]]"), max_len=2)


@pytest.mark.parametrize("text", ["[*,*,*]", "[[*],[*]]", "[[*,*]]"])
def test_full_category_has_one_step_chain_terminal(text):
    t = parse_tree(text)
    cat = chain_category(t, no_identity_steps=False, max_len=2, universe="bounded")
    assert not cat.law_violations()
    terminal = [cat.objects[i] for i in terminal_objects(cat)]
    assert terminal == [one_step_chain(t)]


@pytest.mark.parametrize("text", ["[*,*,*,*]", "[[*,*],[*]]", "[[*],[*],[*]]"])
def test_identity_free_categories_are_posets(text):
    cat = chain_category(parse_tree(text))
    assert cat.is_poset()
    assert has_terminal(cat)


def test_category_json_round_trip():
    from hoperads.category import FinCategory

    cat = chain_category(corolla(4))
    data = cat.to_json(label=lambda c: c.label())
    back = FinCategory.from_json(data)
    assert len(back.arrows) == len(cat.arrows)
    assert back.objects == [c.label() for c in cat.objects]


def test_chain_object_validation():
    s = hom_set(corolla(3), corolla(2))[0]
    with pytest.raises(InvariantViolation):
        ChainObject(corolla(3), (s,))
    c = ChainObject(corolla(3), (s, hom_set(corolla(2), corolla(1))[0]))
    assert ChainObject.from_json(c.to_json()) == c


# -- substitution ------------------------------------------------------------------

def test_simultaneous_grafting_of_two_corollas():
    s = TreeMorphism(corolla(4), corolla(2), ((1,), (1, 1, 2, 2)))
    inner = one_step_chain(corolla(2))
    out = substitute(one_step_chain(corolla(2)), s, [inner, inner])
    assert out.length == 2
    assert [str(t) for t in out.trees] == ["[*,*,*,*]", "[*,*]", "[*]"]


def test_trivial_inner_chains_reindex_outer():
    t = parse_tree("[[*,*],[*]]")
    outer = enumerate_chains(t)[5]
    inners = [ChainObject(unit_tree(2), ())] * t.tips
    assert substitute(outer, identity(t), inners) == outer


def test_substitute_pads_with_identities():
    s = TreeMorphism(corolla(3), corolla(2), ((1,), (1, 1, 2)))
    inners = [one_step_chain(corolla(2)), ChainObject(corolla(1), ())]
    out = substitute(one_step_chain(corolla(2)), s, inners)
    assert out.length == 2
    with pytest.raises(InvariantViolation):
        substitute(one_step_chain(corolla(2)), s, inners, pad=False)


def test_substitute_rejects_wrong_fibers():
    s = TreeMorphism(corolla(3), corolla(2), ((1,), (1, 1, 2)))
    with pytest.raises(InvariantViolation):
        substitute(one_step_chain(corolla(2)), s, [one_step_chain(corolla(2))] * 2)


def _substitution_cases(pool, max_len):
    for source in pool:
        for target in pool:
            for sigma in hom_set(source, target, tip_surjective=True):
                options = [enumerate_chains(f, no_identity_steps=False, max_len=max_len,
                                            universe="bounded")
                           for f in tip_fibers(sigma)]
                for inners in itertools.islice(itertools.product(*options), 12):
                    yield sigma, list(inners)


@pytest.mark.parametrize("height,max_tips", [(1, 4), (2, 3)])
def test_substitute_first_steps_compose_to_sigma(height, max_tips):
    pool = enumerate_trees(height, max_tips, pruned_only=True, min_tips=1)
    checked = 0
    for sigma, inners in _substitution_cases(pool, 1 if height == 2 else 2):
        outer = one_step_chain(sigma.target)
        out = substitute(outer, sigma, inners)
        depth = max(c.length for c in inners)
        assert out.length == depth + outer.length
        assert out.compose_steps(0, depth) == sigma
        checked += 1
    assert checked > 50


# -- free operad -------------------------------------------------------------------

def bracketings(l):
    """Binary bracketings of l letters, as strings."""
    if l == 1:
        return ["x"]
    return [f"({a}{b})" for k in range(1, l) for a in bracketings(k) for b in bracketings(l - k)]


def test_binary_generator_gives_bracketings():
    found = free_operad_elements({corolla(2): ("m",)}, corolla(4), 5, graded=False)
    assert len(found) == len(bracketings(4)) == 5


def test_empty_collection():
    assert free_operad_elements({}, corolla(3), 3) == []
    assert free_operad_elements({}, unit_tree(1), 3, graded=False) == [("unit",)]


def graded_grafting(t, depth):
    """Independent recursion: chains built by grafting, all branches of equal depth."""
    if depth == 0:
        return [ChainObject(t, ())] if t == unit_tree(t.height) else []
    out = []
    for s in enumerate_trees(t.height, t.tips, pruned_only=True, min_tips=1):
        for sigma in hom_set(t, s, tip_surjective=True):
            kids = [graded_grafting(f, depth - 1) for f in tip_fibers(sigma)]
            for combo in itertools.product(*kids):
                out.append(substitute(one_step_chain(s), sigma, list(combo), pad=False))
    return out


@pytest.mark.parametrize("l", range(1, 5))
def test_terminal_collection_elements_match_chains(l):
    t = corolla(l)
    coll = terminal_collection(enumerate_trees(1, l, min_tips=1))
    for depth in range(0, 4):
        elements = free_operad_elements(coll, t, depth)
        chains = enumerate_chains(t, no_identity_steps=False, max_len=depth)
        assert sorted(e[0].label() + str(e[0].steps) for e in elements) == \
            sorted(c.label() + str(c.steps) for c in chains)
        grafted = [c for d in range(depth + 1) for c in graded_grafting(t, d)]
        assert len(grafted) == len(set(grafted)) == len(chains)
        assert set(grafted) == set(chains)


def test_graded_labels_sit_on_vertices():
    t = corolla(3)
    coll = {corolla(2): ("a", "b"), corolla(1): ("u",)}
    elements = free_operad_elements(coll, t, 3)
    for chain, labels in elements:
        vertices = chain_vertices(chain)
        assert len(labels) == len(vertices)
        assert all(label in coll[v] for label, v in zip(labels, vertices))
    # [3] -> [2] -> [1] in two ways, each with two binary vertices and one unary one
    assert Counter(c.length for c, _ in elements)[2] == 2 * 2 * 2 * 1


def test_free_operad_bounds():
    with pytest.raises(BoundsError):
        free_operad_elements({}, corolla(3), 9)


def test_compose_steps_matches_manual_composite():
    c = enumerate_chains(corolla(4))[-1]
    assert c.compose_steps(0, 2) == compose(c.steps[1], c.steps[0])
