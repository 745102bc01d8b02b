"""Chains of tree morphisms ending at U_n and the categories they form.

Objects of the arity-T category are chains ``T -> T_1 -> ... -> U_n``.  An
arrow ``delta -> delta'`` is an endpoint-preserving monotone map
``phi : [m'] -> [m]`` with ``delta' = delta . phi``: each step of ``delta'``
composes a run of consecutive steps of ``delta`` (an identity step when the
run is empty).  Injective ``phi`` only compose; non-injective ones also insert
identities.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .category import Arrow, FinCategory
from .errors import BoundsError, InvariantViolation
from .omega import (PastingDiagram, TreeMorphism, compose, from_pasting, hom_set,
                    identity, tip_fibers)
from .trees import Tree, enumerate_trees, is_pruned, truncate_to, unit_tree

MAX_CHAINS = 200_000


@dataclass(frozen=True)
class ChainObject:
    arity: Tree
    steps: tuple

    def __post_init__(self):
        steps = tuple(self.steps)
        object.__setattr__(self, "steps", steps)
        n = self.arity.height
        current = self.arity
        for s in steps:
            if s.source != current:
                raise InvariantViolation("consecutive chain steps do not match")
            current = s.target
        if current != unit_tree(n):
            raise InvariantViolation("chain must end at U_n")

    @property
    def length(self):
        return len(self.steps)

    @property
    def trees(self):
        return (self.arity,) + tuple(s.target for s in self.steps)

    @property
    def surjective_chain(self):
        return all(s.is_tip_surjective() for s in self.steps)

    def has_identity_steps(self):
        return any(s.is_identity() for s in self.steps)

    def compose_steps(self, i, j):
        """Composite of steps i..j-1 (identity on tree i when i == j)."""
        out = identity(self.trees[i])
        for s in self.steps[i:j]:
            out = compose(s, out)
        return out

    def restrict(self, phi):
        """delta . phi for an endpoint-preserving monotone phi."""
        return ChainObject(self.arity, tuple(self.compose_steps(a, b)
                                             for a, b in zip(phi, phi[1:])))

    def label(self):
        return " -> ".join(str(t) for t in self.trees)

    def to_json(self):
        return {"arity": self.arity.to_json(), "steps": [s.to_json() for s in self.steps]}

    @classmethod
    def from_json(cls, data):
        return cls(Tree.from_json(data["arity"]),
                   tuple(TreeMorphism.from_json(s) for s in data["steps"]))

    def __repr__(self):
        return f"ChainObject({self.label()})"


def _chain_key(chain):
    return (chain.length, tuple((str(s.target), s.maps) for s in chain.steps))


def default_universe(tree, surjective_only=True, universe=None):
    """Trees the chain steps may pass through.

    ``"pruned"`` uses pruned trees with at most as many tips as the arity;
    ``"bounded"`` (or ``None`` for a non-pruned arity) uses all trees whose level
    sizes stay within the arity's widest level; ``"dominated"`` uses trees whose
    level sizes are at most the arity's, level by level.
    """
    n = tree.height
    width = max(tree.levels)
    if universe is None:
        universe = "pruned" if (surjective_only and is_pruned(tree)) else "bounded"
    if universe == "pruned":
        trees = enumerate_trees(n, tree.tips, pruned_only=True, min_tips=1)
    elif universe == "bounded":
        tips_cap = tree.tips if surjective_only else width
        trees = enumerate_trees(n, tips_cap, pruned_only=False, max_width=width,
                                min_tips=1 if surjective_only else 0)
    elif universe == "dominated":
        trees = [t for t in enumerate_trees(n, tree.tips, max_width=width,
                                            min_tips=1 if surjective_only else 0)
                 if all(a <= b for a, b in zip(t.levels, tree.levels))]
    else:
        trees = list(universe)
    if unit_tree(n) not in trees:
        trees.append(unit_tree(n))
    return trees


def enumerate_chains(tree, surjective_only=True, no_identity_steps=True, max_len=None,
                     universe=None):
    """All chains from ``tree`` to U_n whose intermediate trees lie in the universe."""
    if tree.height > 4 or tree.tips > 8:
        raise BoundsError("chains are limited to height <= 4 and tips <= 8")
    bounded_by_size = (no_identity_steps and surjective_only and is_pruned(tree)
                       and universe in (None, "pruned"))
    if max_len is None and not bounded_by_size:
        raise BoundsError("max_len is required unless chains are surjective, identity-free "
                          "and through pruned trees")
    trees = default_universe(tree, surjective_only, universe)
    target = unit_tree(tree.height)

    @lru_cache(maxsize=None)
    def steps_from(x):
        out = []
        for y in trees:
            if y.tips == 0 and surjective_only and x.tips:
                continue
            for s in hom_set(x, y, tip_surjective=surjective_only):
                if no_identity_steps and s.is_identity():
                    continue
                out.append(s)
        return tuple(out)

    @lru_cache(maxsize=None)
    def finishing(x):
        return tuple(s for s in hom_set(x, target, tip_surjective=surjective_only)
                     if not (no_identity_steps and s.is_identity()))

    found = []

    def walk(x, steps):
        if x == target:
            found.append(ChainObject(tree, tuple(steps)))
            if len(found) > MAX_CHAINS:
                raise BoundsError("chain enumeration exceeds the desk-scale bound")
        if max_len is not None and len(steps) >= max_len:
            return
        last = max_len is not None and len(steps) == max_len - 1
        for s in (finishing(x) if last else steps_from(x)):
            walk(s.target, steps + [s])

    walk(tree, [])
    found.sort(key=_chain_key)
    return found


def _monotone_maps(m, m_prime, injective):
    """Endpoint-preserving monotone maps [m'] -> [m] as tuples of length m'+1."""
    if m_prime == 0:
        if m == 0:
            yield (0,)
        return
    inner = range(0, m + 1)
    pick = itertools.combinations if injective else itertools.combinations_with_replacement
    for mid in pick(range(1, m) if injective else inner, m_prime - 1):
        yield (0,) + mid + (m,)


def chain_category(tree, surjective_only=True, no_identity_steps=True, max_len=None,
                   universe=None, check=True):
    chains = enumerate_chains(tree, surjective_only, no_identity_steps, max_len, universe)
    index = {c: i for i, c in enumerate(chains)}
    arrows, identities = [], [None] * len(chains)
    top = max((c.length for c in chains), default=0)
    cap = top if max_len is None else max_len
    for i, c in enumerate(chains):
        lengths = range(0, c.length + 1) if no_identity_steps else range(0, cap + 1)
        for mp in lengths:
            for phi in _monotone_maps(c.length, mp, injective=no_identity_steps):
                d = c.restrict(phi)
                j = index.get(d)
                if j is None:
                    continue
                if j == i and phi == tuple(range(c.length + 1)):
                    identities[i] = len(arrows)
                arrows.append(Arrow(i, j, phi))
    cat = FinCategory(chains, arrows, identities, composer=_compose_phi, check=False)
    if check:
        problems = cat.law_violations()
        if problems:
            raise InvariantViolation("chain category fails category laws: " + problems[0])
    return cat


def _compose_phi(phi_g, phi_f):
    # f : delta -> delta . phi_f, g : delta' -> delta' . phi_g
    return tuple(phi_f[k] for k in phi_g)


def elementary_composition(category, arrow_id):
    """If the arrow composes exactly one adjacent pair, return (chain, j)."""
    a = category.arrows[arrow_id]
    chain = category.objects[a.src]
    phi = a.tag
    m = chain.length
    if len(phi) != m or len(set(phi)) != len(phi):
        return None
    missing = sorted(set(range(m + 1)) - set(phi))
    if len(missing) != 1 or missing[0] in (0, m):
        return None
    return chain, missing[0]


# -- operadic substitution ------------------------------------------------------

def substitute(outer, sigma, inners, pad=True):
    """Graft chains on the tip fibers of ``sigma : T -> S`` below a chain at S."""
    base = sigma.target
    n = base.height
    if outer.arity != base:
        raise InvariantViolation("outer chain must start at the target of sigma")
    if not is_pruned(base):
        raise InvariantViolation("substitution needs a pruned target")
    fibers = tip_fibers(sigma)
    if len(inners) != len(fibers):
        raise InvariantViolation(f"expected {len(fibers)} inner chains, got {len(inners)}")
    for f, c in zip(fibers, inners):
        if c.arity != f:
            raise InvariantViolation(f"inner chain starts at {c.arity}, fiber is {f}")
    depth = max((c.length for c in inners), default=0)
    if any(c.length != depth for c in inners):
        if not pad:
            raise InvariantViolation("inner chains have unequal lengths")
        inners = [ChainObject(c.arity, (identity(c.arity),) * (depth - c.length) + c.steps)
                  for c in inners]

    tips_below = {}
    for i in range(1, base.tips + 1):
        for m, q in enumerate(base.ancestors(n, i)):
            tips_below.setdefault((m, q), []).append(i)

    def diagram(j):
        labels = []
        for (m, q) in base.positions():
            lab = {truncate_to(inners[i - 1].trees[j], m) for i in tips_below[(m, q)]}
            if len(lab) != 1:
                raise InvariantViolation(f"inner chains disagree below position {(m, q)}")
            labels.append(((m, q), lab.pop()))
        return labels

    stages = [from_pasting(PastingDiagram(base, tuple(diagram(j)))) for j in range(depth + 1)]
    if stages[0] != sigma:
        raise InvariantViolation("inner chains do not start at the fibers of sigma")

    steps = []
    for j in range(depth):
        lo, hi = stages[j], stages[j + 1]
        provenance_lo = _provenance(lo)
        provenance_hi = _provenance_index(hi)
        maps = [(1,)]
        for m in range(1, n + 1):
            level = []
            for (q, idx) in provenance_lo[m]:
                images = {inners[i - 1].steps[j].maps[m][idx - 1] for i in tips_below[(m, q)]}
                if len(images) != 1:
                    raise InvariantViolation("inner steps disagree on a shared position")
                level.append(provenance_hi[(m, q, images.pop())])
            maps.append(tuple(level))
        steps.append(TreeMorphism(lo.source, hi.source, tuple(maps)))
    return ChainObject(sigma.source, tuple(steps) + outer.steps)


def _provenance(sigma):
    """For each level, the pairs (target position, index inside its label's top)."""
    out = [[(1, 1)]]
    for m in range(1, sigma.height + 1):
        counters = {}
        level = []
        for q in sigma.maps[m]:
            counters[q] = counters.get(q, 0) + 1
            level.append((q, counters[q]))
        out.append(level)
    return out


def _provenance_index(sigma):
    """(level, target position, index in label) -> position in the source level."""
    return {(m, q, i): k for m, level in enumerate(_provenance(sigma))
            for k, (q, i) in enumerate(level, start=1)}


def one_step_chain(tree):
    """(T -> U_n), identity when T is already U_n."""
    u = unit_tree(tree.height)
    steps = hom_set(tree, u)
    return ChainObject(tree, (steps[0],))


# -- free operad ------------------------------------------------------------------

def terminal_collection(trees):
    """One label '*' on each given arity."""
    return {t: ("*",) for t in trees}


def chain_vertices(chain):
    """Arities of the vertices of a chain: the fiber of each step over each tip."""
    out = []
    for s in chain.steps:
        out.extend(tip_fibers(s))
    return out


def free_operad_elements(collection, tree, depth, graded=True, surjective_only=True,
                         universe=None):
    """Elements of the free operad on ``collection`` at arity ``tree``.

    Graded elements are pairs ``(chain, labels)``: a chain ``tree -> ... -> U_n``
    of length <= ``depth`` (identity steps allowed) with one label from the
    collection on every vertex.  Otherwise elements are planar grafting data,
    ``("unit",)`` or ``(sigma, label, children)`` with one child per tip fiber of
    ``sigma`` and at most ``depth`` generators along any branch.
    """
    if depth > 8 or tree.tips > 8:
        raise BoundsError("free operad enumeration limited to depth <= 8, tips <= 8")
    if graded:
        out = []
        for chain in enumerate_chains(tree, surjective_only, False, depth, universe):
            choices = [collection.get(v, ()) for v in chain_vertices(chain)]
            out.extend((chain, labels) for labels in itertools.product(*choices))
        return out

    u = unit_tree(tree.height)
    arities = sorted((s for s in collection if collection[s] and s.height == tree.height),
                     key=lambda s: s.sort_key())

    @lru_cache(maxsize=None)
    def grow(t, d):
        out = [("unit",)] if t == u else []
        if d == 0:
            return tuple(out)
        for s in arities:
            if surjective_only and s.tips > t.tips:
                continue
            for sigma in hom_set(t, s, tip_surjective=surjective_only):
                kids = [grow(f, d - 1) for f in tip_fibers(sigma)]
                for label in collection[s]:
                    for combo in itertools.product(*kids):
                        out.append((sigma, label, combo))
        return tuple(out)

    return list(grow(tree, depth))


__all__ = [
    "ChainObject", "enumerate_chains", "chain_category", "substitute",
    "free_operad_elements", "terminal_collection", "chain_vertices",
    "elementary_composition", "one_step_chain", "default_universe",
]
