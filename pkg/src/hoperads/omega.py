"""Morphisms of n-trees, fibers, pasting diagrams and pruning.

A morphism ``sigma : T -> S`` is a family of level maps ``sigma_m`` commuting
with the structure maps, order-preserving on every fiber of ``rho_{m-1}``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .errors import BoundsError, DomainError, InvariantViolation
from .trees import (Leaf, Tree, compose as compose_trees, identity_cell, leaves,
                    suspend, truncate, unit_tree)

MAX_HOM_CANDIDATES = 2_000_000


def morphism_violations(source, target, maps):
    """Human-readable list of everything wrong with ``maps`` as a morphism."""
    problems = []
    n = source.height
    if target.height != n:
        return [f"height mismatch: {n} vs {target.height}"]
    if len(maps) != n + 1:
        return [f"expected {n + 1} level maps, got {len(maps)}"]
    for m, sig in enumerate(maps):
        if len(sig) != source.levels[m]:
            problems.append(f"sigma_{m} has domain size {len(sig)}, expected {source.levels[m]}")
        elif any(not 1 <= v <= target.levels[m] for v in sig):
            problems.append(f"sigma_{m} leaves [{target.levels[m]}]")
    if problems:
        return problems
    if tuple(maps[0]) != (1,):
        problems.append("sigma_0 must be the identity of [1]")
    for m in range(1, n + 1):
        sig, prev = maps[m], maps[m - 1]
        for x in range(1, source.levels[m] + 1):
            if target.parent(m, sig[x - 1]) != prev[source.parent(m, x) - 1]:
                problems.append(f"square at level {m} fails at position {x}")
        for j in range(1, source.levels[m - 1] + 1):
            fib = source.children(m - 1, j)
            vals = [sig[x - 1] for x in fib]
            if any(a > b for a, b in zip(vals, vals[1:])):
                problems.append(f"sigma_{m} not order-preserving on the fiber over ({m - 1},{j})")
    return problems


@dataclass(frozen=True)
class TreeMorphism:
    source: Tree
    target: Tree
    maps: tuple

    def __post_init__(self):
        maps = tuple(tuple(int(v) for v in sig) for sig in self.maps)
        object.__setattr__(self, "maps", maps)
        problems = morphism_violations(self.source, self.target, maps)
        if problems:
            raise InvariantViolation("invalid tree morphism: " + "; ".join(problems))

    @classmethod
    def unchecked(cls, source, target, maps):
        obj = object.__new__(cls)
        object.__setattr__(obj, "source", source)
        object.__setattr__(obj, "target", target)
        object.__setattr__(obj, "maps", tuple(tuple(s) for s in maps))
        return obj

    @property
    def height(self):
        return self.source.height

    def __call__(self, m, x):
        return self.maps[m][x - 1]

    def is_identity(self):
        return self.source == self.target and all(
            sig == tuple(range(1, len(sig) + 1)) for sig in self.maps)

    def is_tip_surjective(self):
        return set(self.maps[-1]) == set(range(1, self.target.tips + 1))

    def to_json(self):
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "maps": [list(s) for s in self.maps]}

    @classmethod
    def from_json(cls, data):
        return cls(Tree.from_json(data["source"]), Tree.from_json(data["target"]),
                   tuple(tuple(s) for s in data["maps"]))

    def __repr__(self):
        return f"TreeMorphism({self.source} -> {self.target}, {self.maps})"


def validate(sigma):
    return not morphism_violations(sigma.source, sigma.target, sigma.maps)


def identity(tree):
    return TreeMorphism.unchecked(tree, tree, tuple(tuple(range(1, k + 1)) for k in tree.levels))


def compose(tau, sigma):
    """tau . sigma (sigma first)."""
    if sigma.target != tau.source:
        raise InvariantViolation("boundary mismatch: target(sigma) != source(tau)")
    maps = tuple(tuple(t[v - 1] for v in s) for s, t in zip(sigma.maps, tau.maps))
    return TreeMorphism.unchecked(sigma.source, tau.target, maps)


def estimate_hom_size(source, target):
    """Upper bound for the brute-force search, used as a guard."""
    bound = 1
    for m in range(1, source.height + 1):
        widest = max(target.levels[m], 1)
        for j in range(1, source.levels[m - 1] + 1):
            size = len(source.children(m - 1, j))
            bound *= comb(widest + size - 1, size) if size else 1
    return bound


def hom_set(source, target, tip_surjective=False):
    """All morphisms source -> target, lexicographic in the level maps."""
    if source.height != target.height:
        raise InvariantViolation("height mismatch")
    if estimate_hom_size(source, target) > MAX_HOM_CANDIDATES:
        raise BoundsError("hom-set search exceeds the desk-scale bound")
    n = source.height
    out = []

    def extend(maps):
        m = len(maps)
        if m == n + 1:
            if not tip_surjective or set(maps[-1]) == set(range(1, target.tips + 1)):
                out.append(TreeMorphism.unchecked(source, target, tuple(maps)))
            return
        prev = maps[-1]
        per_fiber = []
        for j in range(1, source.levels[m - 1] + 1):
            size = len(source.children(m - 1, j))
            room = target.children(m - 1, prev[j - 1])
            per_fiber.append(list(itertools.combinations_with_replacement(room, size)))
        for choice in itertools.product(*per_fiber):
            extend(maps + [tuple(itertools.chain.from_iterable(choice))])

    extend([(1,)])
    return out


# -- fibers ----------------------------------------------------------------

def _check_leaf(tree, leaf):
    leaf = Leaf(*leaf)
    if leaf not in set(leaves(tree)):
        raise InvariantViolation(f"{tuple(leaf)} is not a leaf of {tree}")
    return leaf


def _preimage_tree(sigma, chain, height):
    """Levelwise preimage of the positions ``chain`` (one per level) as a tree."""
    src = sigma.source
    pre = []
    for m, a in enumerate(chain):
        pre.append([x for x in range(1, src.levels[m] + 1) if sigma.maps[m][x - 1] == a])
    index = [{x: i for i, x in enumerate(p, start=1)} for p in pre]
    levels = [len(p) for p in pre]
    maps = [tuple(index[m][src.parent(m + 1, x)] for x in pre[m + 1])
            for m in range(len(pre) - 1)]
    while len(levels) < height + 1:
        levels.append(0)
        maps.append(())
    return Tree(tuple(levels), tuple(maps)), pre


def fiber(sigma, leaf):
    """The fiber of sigma over a leaf of its target, as an n-tree."""
    leaf = _check_leaf(sigma.target, leaf)
    chain = sigma.target.ancestors(leaf.height, leaf.position)
    return _preimage_tree(sigma, chain, sigma.height)[0]


def fiber_inclusion(sigma, leaf):
    """The projection from the fiber over ``leaf`` into the source."""
    leaf = _check_leaf(sigma.target, leaf)
    chain = sigma.target.ancestors(leaf.height, leaf.position)
    tree, pre = _preimage_tree(sigma, chain, sigma.height)
    maps = [tuple(p) for p in pre] + [() for _ in range(sigma.height + 1 - len(pre))]
    return TreeMorphism(tree, sigma.source, tuple(maps))


def tip_fibers(sigma):
    return [fiber(sigma, Leaf(sigma.height, i)) for i in range(1, sigma.target.tips + 1)]


def fiber_morphism(sigma, tau, leaf):
    """Restriction of sigma to fiber(tau . sigma, leaf) -> fiber(tau, leaf)."""
    leaf = _check_leaf(tau.target, leaf)
    chain = tau.target.ancestors(leaf.height, leaf.position)
    top, pre_top = _preimage_tree(compose(tau, sigma), chain, sigma.height)
    mid, pre_mid = _preimage_tree(tau, chain, sigma.height)
    index = [{y: i for i, y in enumerate(p, start=1)} for p in pre_mid]
    maps = []
    for m in range(sigma.height + 1):
        if m < len(pre_top):
            maps.append(tuple(index[m][sigma.maps[m][x - 1]] for x in pre_top[m]))
        else:
            maps.append(())
    return TreeMorphism(top, mid, tuple(maps))


# -- pasting diagrams --------------------------------------------------------

@dataclass(frozen=True)
class PastingDiagram:
    """Labels of every position of ``base``: position (m, p) carries an m-tree."""

    base: Tree
    labels: tuple  # ((m, p), Tree) pairs in position order

    def label(self, m, p):
        return dict(self.labels)[(m, p)]

    @property
    def label_map(self):
        return dict(self.labels)

    def violations(self):
        labels = self.label_map
        base = self.base
        problems = []
        for (m, p) in base.positions():
            lab = labels.get((m, p))
            if lab is None:
                problems.append(f"missing label at {(m, p)}")
            elif lab.height != m:
                problems.append(f"label at {(m, p)} has height {lab.height}, expected {m}")
        if problems:
            return problems
        if labels[(0, 1)] != unit_tree(0):
            problems.append("root label must be the 0-tree")
        for (m, p) in base.positions():
            if m == 0:
                continue
            if truncate(labels[(m, p)]) != labels[(m - 1, base.parent(m, p))]:
                problems.append(f"label at {(m, p)} does not sit on its parent's label")
        return problems

    def to_json(self):
        return {"base": self.base.to_json(),
                "labels": [{"height": m, "position": p, "tree": t.to_json()}
                           for (m, p), t in self.labels]}


def to_pasting(sigma):
    base = sigma.target
    labels = []
    for (m, p) in base.positions():
        tree, _ = _preimage_tree(sigma, base.ancestors(m, p), m)
        labels.append(((m, p), tree))
    return PastingDiagram(base, tuple(labels))


def from_pasting(diagram):
    """Paste the labels; the result carries the unique morphism onto the base."""
    problems = diagram.violations()
    if problems:
        raise InvariantViolation("labels are not composable: " + "; ".join(problems))
    base = diagram.base
    labels = diagram.label_map
    n = base.height
    # each source position is (base position q at its level, index in the top of label(q))
    current = [(1, 1)]
    levels, maps, sigma = [1], [], [(1,)]
    for m in range(1, n + 1):
        nxt, rho = [], []
        for idx, (q, i) in enumerate(current, start=1):
            for c in base.children(m - 1, q):
                lab = labels[(m, c)]
                for j, par in enumerate(lab.maps[m - 1], start=1):
                    if par == i:
                        nxt.append((c, j))
                        rho.append(idx)
        levels.append(len(nxt))
        maps.append(tuple(rho))
        sigma.append(tuple(c for c, _ in nxt))
        current = nxt
    source = Tree(tuple(levels), tuple(maps))
    return TreeMorphism(source, base, tuple(sigma))


def paste_by_composition(diagram):
    """Independent pasting via the globular compositions of the labels."""
    base = diagram.base
    labels = diagram.label_map
    n = base.height

    def lift(tree):
        while tree.height < n:
            tree = suspend(tree)
        return tree

    def paste(m, p):
        kids = list(base.children(m, p))
        if not kids:
            return lift(labels[(m, p)])
        out = paste(m + 1, kids[0])
        for c in kids[1:]:
            out = compose_trees(out, paste(m + 1, c), m)
        return out

    if n == 0:
        return labels[(0, 1)]
    return paste(0, 1)


# -- tip permutation ----------------------------------------------------------

def tip_permutation(sigma):
    """Source tips listed in block order: by target tip, then natural order.

    The result is a tuple in one-line notation; position p holds the source
    tip that carries label p in the composite configuration.
    """
    if not sigma.is_tip_surjective():
        raise InvariantViolation("tip permutation needs a morphism surjective on tips")
    top = sigma.maps[-1]
    return tuple(sorted(range(1, sigma.source.tips + 1), key=lambda x: (top[x - 1], x)))


# -- pruning ------------------------------------------------------------------

def _kept_positions(tree):
    if tree.tips == 0:
        raise DomainError(f"{tree} has no tips, so its maximal pruned subtree is empty")
    kept = [None] * (tree.height + 1)
    kept[tree.height] = list(range(1, tree.tips + 1))
    for m in range(tree.height, 0, -1):
        kept[m - 1] = sorted({tree.parent(m, x) for x in kept[m]})
    return kept


def prune(tree):
    """The maximal pruned subtree and its inclusion into ``tree``."""
    kept = _kept_positions(tree)
    index = [{x: i for i, x in enumerate(k, start=1)} for k in kept]
    levels = tuple(len(k) for k in kept)
    maps = tuple(tuple(index[m][tree.parent(m + 1, x)] for x in kept[m + 1])
                 for m in range(tree.height))
    pruned = Tree(levels, maps)
    return pruned, TreeMorphism(pruned, tree, tuple(tuple(k) for k in kept))


def prune_morphism(sigma):
    """The induced morphism between maximal pruned subtrees."""
    src_kept = _kept_positions(sigma.source)
    tgt_kept = _kept_positions(sigma.target)
    src_p, _ = prune(sigma.source)
    tgt_p, _ = prune(sigma.target)
    index = [{x: i for i, x in enumerate(k, start=1)} for k in tgt_kept]
    maps = tuple(tuple(index[m][sigma.maps[m][x - 1]] for x in src_kept[m])
                 for m in range(sigma.height + 1))
    return TreeMorphism(src_p, tgt_p, maps)


def is_pruned_identity(sigma):
    """True when sigma becomes an identity after pruning both ends."""
    if sigma.source.tips == 0 or sigma.target.tips == 0:
        return sigma.source.tips == sigma.target.tips == 0 and sigma.source == sigma.target
    return prune_morphism(sigma).is_identity()


def leaf_tree(n, m):
    """z^{n-m} U_m, the domain of the morphism picking out a leaf of height m."""
    return identity_cell(unit_tree(n), m) if m < n else unit_tree(n)


__all__ = [
    "TreeMorphism", "PastingDiagram", "validate", "identity", "compose", "hom_set",
    "fiber", "fiber_inclusion", "tip_fibers", "fiber_morphism", "to_pasting",
    "from_pasting", "paste_by_composition", "tip_permutation", "prune",
    "prune_morphism", "is_pruned_identity", "leaf_tree", "morphism_violations",
]
