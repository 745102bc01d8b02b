"""Face posets of associahedra, permutohedra and braiding polytopes."""
from __future__ import annotations

import functools
from dataclasses import dataclass

import networkx as nx

from .errors import BoundsError, InvariantViolation
from .hoperad import chain_category
from .quotient import quotient
from .trees import Tree, is_pruned


class Poset:
    """A finite poset given by its strict order, with ranks and covers."""

    def __init__(self, labels, less):
        self.labels = list(labels)
        self.less = [frozenset(s) for s in less]  # less[x] = elements strictly above x
        n = len(self.labels)
        for x in range(n):
            if x in self.less[x]:
                raise InvariantViolation("order relation has a cycle")
        self.covers = sorted((x, y) for x in range(n) for y in self.less[x]
                             if not any(y in self.less[z] for z in self.less[x]))
        below = {y: [] for y in range(n)}
        for x, y in self.covers:
            below[y].append(x)

        @functools.lru_cache(maxsize=None)
        def rank(y):
            return 1 + max((rank(x) for x in below[y]), default=-1)

        self.rank = [rank(y) for y in range(n)]

    @classmethod
    def from_category(cls, category, label=str):
        n = len(category.objects)
        less = [set() for _ in range(n)]
        for a in category.arrows:
            if a.src != a.tgt:
                less[a.src].add(a.tgt)
        return cls([label(o) for o in category.objects], less)

    def __len__(self):
        return len(self.labels)

    def is_graded(self):
        return all(self.rank[y] == self.rank[x] + 1 for x, y in self.covers)

    def f_vector(self):
        if not self.is_graded():
            raise InvariantViolation("poset is not graded, so it has no f-vector")
        counts = [0] * (max(self.rank, default=-1) + 1)
        for r in self.rank:
            counts[r] += 1
        return tuple(counts)

    def maximum(self):
        tops = [x for x in range(len(self)) if not self.less[x]]
        return tops[0] if len(tops) == 1 else None

    def to_networkx(self):
        g = nx.DiGraph()
        for x in range(len(self)):
            g.add_node(x, rank=self.rank[x])
        g.add_edges_from(self.covers)
        return g

    def to_json(self):
        return {"f_vector": list(self.f_vector()) if self.is_graded() else None,
                "elements": [{"id": i, "label": lab, "rank": r}
                             for i, (lab, r) in enumerate(zip(self.labels, self.rank))],
                "covers": [list(c) for c in self.covers]}

    def to_dot(self, name="poset"):
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for r in sorted(set(self.rank)):
            members = " ".join(f"n{i};" for i in range(len(self)) if self.rank[i] == r)
            lines.append(f"  {{ rank=same; {members} }}")
        for i, lab in enumerate(self.labels):
            text = lab.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  n{i} [label="{text}"];')
        for x, y in self.covers:
            lines.append(f"  n{x} -> n{y};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def f_vector(poset):
    return poset.f_vector()


def is_isomorphic(p, q):
    match = nx.algorithms.isomorphism.categorical_node_match("rank", None)
    return nx.is_isomorphic(p.to_networkx(), q.to_networkx(), node_match=match)


def _corolla(l):
    return Tree((1, l), ((1,) * l,))


def _check_arity(l, top):
    if not 1 <= l <= top:
        raise BoundsError(f"arity must lie in 1..{top}, got {l}")


def permutohedron(l):
    """Surjective identity-free chains of the corolla with l leaves."""
    _check_arity(l, 6)
    cat = chain_category(_corolla(l))
    return Poset.from_category(cat, label=lambda c: c.label())


def associahedron(l):
    _check_arity(l, 7)
    cat = quotient(chain_category(_corolla(l)), "tensor")
    return Poset.from_category(cat, label=lambda c: planar_tree_string(chain_to_planar(c)))


# -- planar trees ---------------------------------------------------------------

LEAF = "x"


def chain_to_planar(chain):
    """Group leaves step by step and suppress unary vertices."""
    items = [LEAF] * chain.arity.tips
    for s in chain.steps:
        groups = [[] for _ in range(s.target.tips)]
        for item, j in zip(items, s.maps[-1]):
            groups[j - 1].append(item)
        items = [g[0] if len(g) == 1 else tuple(g) for g in groups]
    return items[0]


def planar_tree_string(t):
    return LEAF if t == LEAF else "(" + "".join(planar_tree_string(c) for c in t) + ")"


@functools.lru_cache(maxsize=None)
def planar_trees(l):
    """Planar trees with l leaves whose internal vertices have at least two children."""
    if l == 1:
        return (LEAF,)
    out = []
    for parts in _compositions(l):
        if len(parts) < 2:
            continue
        for kids in _products([planar_trees(p) for p in parts]):
            out.append(tuple(kids))
    return tuple(out)


def _compositions(l):
    if l == 0:
        yield ()
        return
    for first in range(1, l + 1):
        for rest in _compositions(l - first):
            yield (first,) + rest


def _products(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _products(lists[1:]):
            yield (head,) + tail


def _contractions(t):
    """Trees obtained by contracting one internal edge."""
    if t == LEAF:
        return
    for i, c in enumerate(t):
        if c != LEAF:
            yield t[:i] + c + t[i + 1:]
            for smaller in _contractions(c):
                yield t[:i] + (smaller,) + t[i + 1:]


def associahedron_planar(l):
    """Face poset of K_l from planar trees ordered by edge contraction."""
    _check_arity(l, 7)
    trees = sorted(planar_trees(l), key=planar_tree_string)
    index = {t: i for i, t in enumerate(trees)}
    up = [set(index[c] for c in _contractions(t)) for t in trees]
    less = []
    for i in range(len(trees)):
        seen, stack = set(), list(up[i])
        while stack:
            v = stack.pop()
            if v not in seen:
                seen.add(v)
                stack.extend(up[v])
        less.append(seen)
    return Poset([planar_tree_string(t) for t in trees], less)


# -- projection and braids --------------------------------------------------------

@dataclass
class Projection:
    source: Poset
    target: Poset
    mapping: list

    def is_order_preserving(self):
        m = self.mapping
        return all(m[y] == m[x] or m[y] in self.target.less[m[x]]
                   for x in range(len(self.source)) for y in self.source.less[x])

    def is_surjective(self):
        return set(self.mapping) == set(range(len(self.target)))

    def collapsed(self):
        """Source rank -> number of source elements sharing their image."""
        sizes = {}
        for y in self.mapping:
            sizes[y] = sizes.get(y, 0) + 1
        out = {}
        for x, y in enumerate(self.mapping):
            if sizes[y] > 1:
                r = self.source.rank[x]
                out[r] = out.get(r, 0) + 1
        return dict(sorted(out.items()))


def tonks_projection(l):
    _check_arity(l, 6)
    cat = chain_category(_corolla(l))
    source = Poset.from_category(cat, label=lambda c: c.label())
    q = quotient(cat, "tensor")
    target = Poset.from_category(q, label=lambda c: planar_tree_string(chain_to_planar(c)))
    return Projection(source, target, list(q.projection))


def braid_polytope(arity, strict_assoc=False):
    """Quotient of pruned surjective chains where pruned-trivial pieces act as units."""
    if not is_pruned(arity) or arity.tips == 0:
        raise InvariantViolation(f"{arity} is not a pruned tree with tips")
    if arity.tips > 4:
        raise BoundsError("braid polytopes are limited to 4 tips")
    kinds = ("tensor", "strict_assoc") if strict_assoc else ("tensor",)
    q = quotient(chain_category(arity), kinds, pruned=True)
    return Poset.from_category(q, label=lambda c: c.label())


__all__ = ["Poset", "Projection", "f_vector", "is_isomorphic", "permutohedron",
           "associahedron", "associahedron_planar", "planar_trees", "chain_to_planar",
           "planar_tree_string", "tonks_projection", "braid_polytope"]
