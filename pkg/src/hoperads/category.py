"""Finite categories given by explicit objects and arrows."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Any

from .errors import InvariantViolation


@dataclass(frozen=True)
class Arrow:
    src: int
    tgt: int
    tag: Any = None


class FinCategory:
    """A finite category.

    ``arrows`` must contain one identity per object, listed in ``identities``.
    Composition is either an explicit table ``{(g, f): g . f}`` or, for thin
    categories, determined by endpoints.  ``composer`` may build the table from
    arrow tags instead: it receives (tag_g, tag_f) and returns the composite's tag.
    """

    def __init__(self, objects, arrows, identities, table=None, composer=None, check=True):
        self.objects = list(objects)
        self.arrows = list(arrows)
        self.identities = list(identities)
        self._by_pair = defaultdict(list)
        for i, a in enumerate(self.arrows):
            self._by_pair[(a.src, a.tgt)].append(i)
        self.thin = all(len(v) == 1 for v in self._by_pair.values())
        if table is None and composer is not None:
            table = self._table_from_tags(composer)
        if table is None and not self.thin:
            raise InvariantViolation("non-thin category needs an explicit composition")
        self.table = table
        self.projection = None
        if check:
            problems = self.law_violations()
            if problems:
                raise InvariantViolation("category laws fail: " + "; ".join(problems[:5]))

    def _table_from_tags(self, composer):
        index = {(a.src, a.tgt, a.tag): i for i, a in enumerate(self.arrows)}
        table = {}
        outgoing = defaultdict(list)
        for i, a in enumerate(self.arrows):
            outgoing[a.src].append(i)
        for f, af in enumerate(self.arrows):
            for g in outgoing[af.tgt]:
                ag = self.arrows[g]
                key = (af.src, ag.tgt, composer(ag.tag, af.tag))
                if key not in index:
                    raise InvariantViolation(f"composite of arrows {g} and {f} is missing")
                table[(g, f)] = index[key]
        return table

    # -- queries -------------------------------------------------------------

    def hom(self, x, y):
        return list(self._by_pair.get((x, y), ()))

    def compose(self, g, f):
        ag, af = self.arrows[g], self.arrows[f]
        if af.tgt != ag.src:
            raise InvariantViolation("arrows are not composable")
        if self.table is not None:
            return self.table[(g, f)]
        found = self._by_pair.get((af.src, ag.tgt))
        if not found:
            raise InvariantViolation("composite missing from thin category")
        return found[0]

    def is_identity(self, a):
        return self.identities[self.arrows[a].src] == a

    def non_identity_arrows(self):
        return [i for i in range(len(self.arrows)) if not self.is_identity(i)]

    def law_violations(self):
        problems = []
        for x, i in enumerate(self.identities):
            a = self.arrows[i]
            if a.src != x or a.tgt != x:
                problems.append(f"identity of {x} has wrong endpoints")
        if problems:
            return problems
        out = defaultdict(list)
        for i, a in enumerate(self.arrows):
            out[a.src].append(i)
        for f, af in enumerate(self.arrows):
            if self.compose(self.identities[af.tgt], f) != f:
                problems.append(f"left identity law fails at {f}")
            if self.compose(f, self.identities[af.src]) != f:
                problems.append(f"right identity law fails at {f}")
            if self.table is None:
                for g in out[af.tgt]:
                    if not self._by_pair.get((af.src, self.arrows[g].tgt)):
                        problems.append(f"composite of {g} and {f} missing")
        if self.table is not None:
            for f, af in enumerate(self.arrows):
                for g in out[af.tgt]:
                    gf = self.compose(g, f)
                    for h in out[self.arrows[g].tgt]:
                        if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                            problems.append(f"associativity fails at ({h},{g},{f})")
        return problems

    def is_poset(self):
        if not self.thin:
            return False
        return not any(a.src != a.tgt and self._by_pair.get((a.tgt, a.src))
                       for a in self.arrows)

    def to_json(self, label=str):
        return {
            "objects": [label(o) for o in self.objects],
            "arrows": [{"id": i, "src": a.src, "tgt": a.tgt} for i, a in enumerate(self.arrows)],
            "identities": list(self.identities),
            "composition": ([[g, f, h] for (g, f), h in sorted(self.table.items())]
                            if self.table is not None else "thin"),
        }

    @classmethod
    def from_json(cls, data):
        arrows = [Arrow(a["src"], a["tgt"]) for a in data["arrows"]]
        comp = data.get("composition", "thin")
        table = None if comp == "thin" else {(g, f): h for g, f, h in comp}
        return cls(data["objects"], arrows, data["identities"], table=table)

    @classmethod
    def from_relation(cls, objects, pairs, check=True):
        """Thin category from a reflexive-transitive relation given by ``pairs``."""
        arrows, identities = [], []
        for x in range(len(objects)):
            identities.append(len(arrows))
            arrows.append(Arrow(x, x))
        for (x, y) in sorted(set(pairs)):
            if x != y:
                arrows.append(Arrow(x, y))
        return cls(objects, arrows, identities, check=check)

    def __repr__(self):
        return (f"FinCategory({len(self.objects)} objects, {len(self.arrows)} arrows, "
                f"thin={self.thin})")


def discrete(objects):
    return FinCategory.from_relation(list(objects), [])


def transitive_closure(n, edges):
    """Reachability sets (excluding trivial paths unless there is a cycle)."""
    succ = defaultdict(set)
    for x, y in edges:
        succ[x].add(y)
    reach = []
    for start in range(n):
        seen, stack = set(), list(succ[start])
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(succ[v])
        reach.append(seen)
    return reach
