"""Nondegenerate simplex counts of finite nerves."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .errors import BoundsError

MAX_SIMPLICES = 50_000_000


@dataclass(frozen=True)
class NerveProfile:
    f_vector: tuple
    complete: bool  # False when max_dim cut off nonzero higher counts

    @property
    def euler_characteristic(self):
        return sum((-1) ** d * f for d, f in enumerate(self.f_vector))

    def to_json(self):
        return {"f_vector": list(self.f_vector), "euler_characteristic": self.euler_characteristic,
                "complete": self.complete}


def nerve_profile(category, max_dim=None):
    """Count strings of composable non-identity arrows by length.

    A d-simplex is a string of d such arrows.  Without ``max_dim`` the category
    must have no cycle of non-identity arrows, otherwise the count never ends.
    """
    arrows = category.non_identity_arrows()
    out = defaultdict(list)
    for a in arrows:
        out[category.arrows[a].src].append(a)
    if max_dim is None:
        if any(category.arrows[a].src == category.arrows[a].tgt for a in arrows) \
                or not _acyclic(len(category.objects), arrows, category):
            raise BoundsError("nerve is infinite; pass max_dim")
        max_dim = len(category.objects)
    counts = [len(category.objects)]
    # ending[a] = strings of the current length whose last arrow is a
    ending = {a: 1 for a in arrows}
    complete = True
    for d in range(1, max_dim + 1):
        total = sum(ending.values())
        if total == 0:
            break
        counts.append(total)
        if sum(counts) > MAX_SIMPLICES:
            raise BoundsError("nerve exceeds the desk-scale simplex bound")
        nxt = defaultdict(int)
        for a, c in ending.items():
            for b in out[category.arrows[a].tgt]:
                nxt[b] += c
        ending = nxt
    else:
        complete = not any(ending.values())
    return NerveProfile(tuple(counts), complete)


def _acyclic(n, arrows, category):
    succ = defaultdict(set)
    for a in arrows:
        succ[category.arrows[a].src].add(category.arrows[a].tgt)
    state = [0] * n
    for start in range(n):
        if state[start]:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        while stack:
            v, it = stack[-1]
            for w in it:
                if state[w] == 1:
                    return False
                if state[w] == 0:
                    state[w] = 1
                    stack.append((w, iter(succ[w])))
                    break
            else:
                state[v] = 2
                stack.pop()
    return True


def terminal_objects(category):
    n = len(category.objects)
    return [y for y in range(n) if all(len(category.hom(x, y)) == 1 for x in range(n))]


def has_terminal(category):
    return bool(terminal_objects(category))


__all__ = ["NerveProfile", "nerve_profile", "has_terminal", "terminal_objects"]
