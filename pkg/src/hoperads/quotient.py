"""Quotients of chain categories by relation generators.

A generator is an arrow that composes one adjacent pair of steps ``a`` then
``b``.  The kinds:

* ``tt`` / ``tu``: ``a`` (resp. ``b``) is an identity;
* ``tensor``: over every leaf of the target of ``b`` either ``b`` is trivial
  there or the restriction of ``a`` is an identity;
* ``prune``: ``a`` or ``b`` becomes an identity after pruning;
* ``strict_assoc``: ``tensor`` plus composites whose steps both act only on
  the top level, i.e. are identities on every lower level.

Collapsing identifies the endpoints of every generator and takes the
preorder reflection of the result.
"""
from __future__ import annotations

from dataclasses import dataclass

from .category import FinCategory, transitive_closure
from .errors import InvariantViolation
from .hoperad import elementary_composition
from .omega import (fiber, fiber_morphism, is_pruned_identity, leaf_tree, prune,
                    prune_morphism)
from .trees import leaves

KINDS = ("tt", "tu", "tensor", "prune", "strict_assoc")


def _trivial(tree, leaf, pruned):
    if not pruned:
        return tree == leaf_tree(tree.height, leaf.height)
    if tree.tips == 0:
        return True
    p, _ = prune(tree)
    return all(k == 1 for k in p.levels)


def _identity(sigma, pruned):
    if not pruned:
        return sigma.is_identity()
    if sigma.source.tips == 0:
        return True
    return prune_morphism(sigma).is_identity()


def tensor_condition(a, b, pruned=False):
    """Whether composing ``a`` then ``b`` is a tensor-type generator."""
    for leaf in leaves(b.target):
        if _trivial(fiber(b, leaf), leaf, pruned):
            continue
        if _identity(fiber_morphism(a, b, leaf), pruned):
            continue
        return False
    return True


def top_level_only(sigma, pruned=False):
    """True when sigma is the identity below its top level."""
    if pruned:
        if sigma.source.tips == 0:
            return False
        sigma = prune_morphism(sigma)
    return all(sigma.source.levels[m] == sigma.target.levels[m]
               and sig == tuple(range(1, len(sig) + 1))
               for m, sig in enumerate(sigma.maps[:-1]))


def is_generator(kind, a, b, pruned=False):
    if kind == "tt":
        return a.is_identity()
    if kind == "tu":
        return b.is_identity()
    if kind == "tensor":
        return tensor_condition(a, b, pruned)
    if kind == "prune":
        return is_pruned_identity(a) or is_pruned_identity(b)
    if kind == "strict_assoc":
        return (tensor_condition(a, b, pruned)
                or top_level_only(a, pruned) and top_level_only(b, pruned))
    raise InvariantViolation(f"unknown relation kind {kind!r}; expected one of {KINDS}")


def relation_generators(category, kinds, pruned=False):
    """Ids of the elementary arrows matching any of ``kinds``."""
    if isinstance(kinds, str):
        kinds = (kinds,)
    out = []
    for arrow_id in category.non_identity_arrows():
        found = elementary_composition(category, arrow_id)
        if found is None:
            continue
        chain, j = found
        a, b = chain.steps[j - 1], chain.steps[j]
        if any(is_generator(k, a, b, pruned) for k in kinds):
            out.append(arrow_id)
    return out


@dataclass
class Congruence:
    """Object classes of a quotient and the projection onto them."""

    classes: list
    projection: list

    @classmethod
    def generated_by(cls, n_objects, pairs):
        parent = list(range(n_objects))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x, y in pairs:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
        roots = sorted({find(x) for x in range(n_objects)})
        number = {r: i for i, r in enumerate(roots)}
        projection = [number[find(x)] for x in range(n_objects)]
        classes = [[] for _ in roots]
        for x, c in enumerate(projection):
            classes[c].append(x)
        return cls(classes, projection)


def collapse(category, generators):
    """Posetal quotient identifying the endpoints of each generating arrow.

    The result's objects are representatives (the first member of each class);
    ``.projection`` maps original object indices to quotient indices and
    ``.classes`` lists the members.  Raises if the quotient has a cycle.
    """
    pairs = [(category.arrows[g].src, category.arrows[g].tgt) for g in generators]
    cong = Congruence.generated_by(len(category.objects), pairs)
    if not generators:
        objects = list(category.objects)
    else:
        objects = [category.objects[c[0]] for c in cong.classes]
    edges = {(cong.projection[a.src], cong.projection[a.tgt]) for a in category.arrows}
    edges = {(x, y) for x, y in edges if x != y}
    reach = transitive_closure(len(objects), edges)
    for x, r in enumerate(reach):
        if x in r:
            raise InvariantViolation("quotient is not a poset: the generators create a cycle")
    pairs = [(x, y) for x, r in enumerate(reach) for y in r]
    out = FinCategory.from_relation(objects, pairs, check=False)
    out.projection = cong.projection
    out.classes = cong.classes
    return out


def quotient(category, kinds, pruned=False):
    return collapse(category, relation_generators(category, kinds, pruned))


__all__ = ["KINDS", "Congruence", "collapse", "quotient", "relation_generators",
           "is_generator", "tensor_condition", "top_level_only"]
