"""n-trees: chains of order-preserving maps of finite ordinals ending at [1].

A tree of height n is stored levelwise as the ordinal sizes ``levels``
``(k_0, ..., k_n)`` with ``k_0 == 1`` and the structure maps ``maps[m]``, the
1-indexed images of ``rho_m : [k_{m+1}] -> [k_m]``.  The same tree has a
nested-tuple form (each node is the tuple of its children, tips are ``()``)
and a bracket notation, e.g. ``[[*,*],[*]]``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .errors import BoundsError, DomainError, InvariantViolation, TreeParseError

MAX_ENUM_HEIGHT = 4
MAX_ENUM_TIPS = 8


class Leaf(NamedTuple):
    height: int
    position: int


@dataclass(frozen=True)
class Tree:
    levels: tuple
    maps: tuple

    def __post_init__(self):
        levels = tuple(int(k) for k in self.levels)
        maps = tuple(tuple(int(v) for v in rho) for rho in self.maps)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "maps", maps)
        if not levels or levels[0] != 1:
            raise InvariantViolation("bottom ordinal must be [1]")
        if len(maps) != len(levels) - 1:
            raise InvariantViolation("need one structure map per level above 0")
        for m, rho in enumerate(maps):
            if len(rho) != levels[m + 1]:
                raise InvariantViolation(f"rho_{m} has wrong domain size")
            if any(not 1 <= v <= levels[m] for v in rho):
                raise InvariantViolation(f"rho_{m} leaves its codomain [{levels[m]}]")
            if any(a > b for a, b in zip(rho, rho[1:])):
                raise InvariantViolation(f"rho_{m} is not order-preserving")

    @property
    def height(self):
        return len(self.levels) - 1

    @property
    def tips(self):
        return self.levels[-1]

    def parent(self, m, p):
        """Image of position ``p`` at level ``m >= 1`` under rho_{m-1}."""
        return self.maps[m - 1][p - 1]

    @cached_property
    def _child_ranges(self):
        out = []
        for m, rho in enumerate(self.maps):
            ranges = [[0, 0] for _ in range(self.levels[m])]
            for idx, par in enumerate(rho, start=1):
                r = ranges[par - 1]
                if r[0] == 0:
                    r[0] = idx
                r[1] = idx
            out.append(tuple(range(a, b + 1) if a else range(0) for a, b in ranges))
        return tuple(out)

    def children(self, m, p):
        if m >= self.height:
            return range(0)
        return self._child_ranges[m][p - 1]

    def ancestors(self, m, p):
        """Positions ``(a_0, ..., a_m)`` below and including ``(m, p)``."""
        chain = [p]
        for level in range(m, 0, -1):
            p = self.parent(level, p)
            chain.append(p)
        return tuple(reversed(chain))

    def positions(self):
        for m, k in enumerate(self.levels):
            for p in range(1, k + 1):
                yield (m, p)

    @cached_property
    def nested(self):
        nodes = [() for _ in range(self.levels[-1])]
        for m in range(self.height - 1, -1, -1):
            grouped = [[] for _ in range(self.levels[m])]
            for node, par in zip(nodes, self.maps[m]):
                grouped[par - 1].append(node)
            nodes = [tuple(g) for g in grouped]
        return nodes[0]

    def __str__(self):
        return format_tree(self)

    def __repr__(self):
        return f"Tree({format_tree(self)!r}, height={self.height})"

    def sort_key(self):
        return (self.height, format_tree(self), self.levels)

    def to_json(self):
        return {"height": self.height, "levels": list(self.levels),
                "maps": [list(r) for r in self.maps]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        tree = cls(tuple(data["levels"]), tuple(tuple(r) for r in data["maps"]))
        if "height" in data and data["height"] != tree.height:
            raise InvariantViolation("height field disagrees with levels")
        return tree


def from_nested(node, height):
    """Build a tree of the given height from nested tuples."""
    levels = [1]
    maps = []
    current = [node]
    for m in range(height):
        nxt, rho = [], []
        for idx, n in enumerate(current, start=1):
            for child in n:
                nxt.append(child)
                rho.append(idx)
        levels.append(len(nxt))
        maps.append(tuple(rho))
        current = nxt
    if any(n != () for n in current):
        raise InvariantViolation("nesting is deeper than the requested height")
    return Tree(tuple(levels), tuple(maps))


def unit_tree(n):
    """The terminal tree U_n = [1] -> ... -> [1]."""
    return Tree((1,) * (n + 1), ((1,),) * n)


def format_tree(tree):
    n = tree.height

    def fmt(node, depth):
        if depth == n:
            return "*"
        return "[" + ",".join(fmt(c, depth + 1) for c in node) + "]"

    return fmt(tree.nested, 0)


# -- parsing ---------------------------------------------------------------

class _Node:
    __slots__ = ("children", "pos", "star")

    def __init__(self, pos, star=False, children=()):
        self.pos = pos
        self.star = star
        self.children = children


def _parse_ast(text):
    i = 0
    n = len(text)

    def skip():
        nonlocal i
        while i < n and text[i].isspace():
            i += 1

    def node():
        nonlocal i
        skip()
        if i >= n:
            raise TreeParseError("unexpected end of input", i)
        start = i
        if text[i] == "*":
            i += 1
            return _Node(start, star=True)
        if text[i] != "[":
            raise TreeParseError(f"unexpected character {text[i]!r}", i)
        i += 1
        skip()
        kids = []
        if i < n and text[i] == "]":
            i += 1
            return _Node(start)
        while True:
            kids.append(node())
            skip()
            if i >= n:
                raise TreeParseError("unclosed '['", start)
            if text[i] == ",":
                i += 1
                continue
            if text[i] == "]":
                i += 1
                return _Node(start, children=tuple(kids))
            raise TreeParseError(f"expected ',' or ']' but found {text[i]!r}", i)

    root = node()
    skip()
    if i != n:
        raise TreeParseError("trailing characters", i)
    return root


def _infer_height(ast):
    """Return (fixed_height or None, minimal_height)."""
    if ast.star:
        return 0, 0
    if not ast.children:
        return None, 1
    fixed, minimum = None, 0
    for child in ast.children:
        f, lo = _infer_height(child)
        if f is not None:
            if fixed is not None and f != fixed:
                raise TreeParseError("ragged depth: sibling subtrees have unequal height",
                                     child.pos)
            fixed = f
        minimum = max(minimum, lo)
    if fixed is not None:
        if minimum > fixed:
            raise TreeParseError("ragged depth: sibling subtrees have unequal height", ast.pos)
        return fixed + 1, fixed + 1
    return None, minimum + 1


def _to_nested(ast, remaining):
    if ast.star:
        if remaining != 0:
            raise TreeParseError("tip '*' below the top level", ast.pos)
        return ()
    if remaining == 0:
        raise TreeParseError("bracket above the top level", ast.pos)
    return tuple(_to_nested(c, remaining - 1) for c in ast.children)


def parse_tree(text, height=None):
    """Parse bracket notation.

    A bracket with no children (``[]``) has no fixed height; a tree without
    tips is therefore read at its minimal height unless ``height`` is given.
    """
    ast = _parse_ast(text)
    fixed, minimum = _infer_height(ast)
    if height is None:
        height = fixed if fixed is not None else minimum
    elif fixed is not None and fixed != height:
        raise TreeParseError(f"tree has height {fixed}, expected {height}", 0)
    elif height < minimum:
        raise TreeParseError(f"tree needs height at least {minimum}", 0)
    return from_nested(_to_nested(ast, height), height)


# -- basic queries ---------------------------------------------------------

def tips(tree):
    return tree.tips


def leaves(tree):
    """Tips and positions with empty preimage, in (height, position) order."""
    out = []
    for m, k in enumerate(tree.levels):
        for p in range(1, k + 1):
            if m == tree.height or not tree.children(m, p):
                out.append(Leaf(m, p))
    return out


def is_pruned(tree):
    return all(set(rho) == set(range(1, tree.levels[m] + 1))
               for m, rho in enumerate(tree.maps))


def is_degenerate(tree):
    return tree.tips == 0


# -- globular operations ---------------------------------------------------

def suspend(tree):
    """z(T): append the empty ordinal on top (the identity cell on T)."""
    return Tree(tree.levels + (0,), tree.maps + ((),))


def truncate(tree):
    """The truncation, which is both source and target of the tree."""
    if tree.height == 0:
        raise DomainError("cannot truncate a tree of height 0")
    return Tree(tree.levels[:-1], tree.maps[:-1])


def truncate_to(tree, k):
    return Tree(tree.levels[: k + 1], tree.maps[:k])


def identity_cell(tree, k):
    """The identity for composition in direction k on the k-truncation of ``tree``."""
    out = truncate_to(tree, k)
    for _ in range(tree.height - k):
        out = suspend(out)
    return out


def _strip(node, depth):
    if depth == 0:
        return ()
    return tuple(_strip(c, depth - 1) for c in node)


def _compose_nested(a, b, k):
    if k == 0:
        return a + b
    if len(a) != len(b):
        raise InvariantViolation("trees are not composable: truncations differ")
    return tuple(_compose_nested(x, y, k - 1) for x, y in zip(a, b))


def compose(s, t, k):
    """S (x)_k T: fibers over each level-k position are concatenated, S first."""
    if s.height != t.height:
        raise InvariantViolation("height mismatch")
    if not 0 <= k < s.height:
        raise InvariantViolation(f"direction {k} out of range for height {s.height}")
    if truncate_to(s, k) != truncate_to(t, k):
        raise InvariantViolation("trees are not composable: truncations differ")
    return from_nested(_compose_nested(s.nested, t.nested, k), s.height)


def compose_all(trees, k):
    trees = list(trees)
    out = trees[0]
    for t in trees[1:]:
        out = compose(out, t, k)
    return out


def _factors(node, k):
    if k == 0:
        return [(c,) for c in node]
    out = []
    for i, child in enumerate(node):
        for f in _factors(child, k - 1):
            out.append(tuple(f if j == i else _strip(node[j], k - 1)
                             for j in range(len(node))))
    return out


def canonical_decomposition(tree, k):
    """Maximal decomposition along direction k.

    There is one factor per position at level k+1, each keeping that single
    position with everything above it; factors are ordered by position.  When
    the k-truncation is U_k this is the unique maximal decomposition.
    """
    if not 0 <= k < tree.height:
        raise InvariantViolation(f"direction {k} out of range for height {tree.height}")
    factors = _factors(tree.nested, k)
    if not factors:
        return [tree]
    return [from_nested(f, tree.height) for f in factors]


# -- enumeration -----------------------------------------------------------

def _weak_compositions(total, parts, positive):
    """Ways to distribute ``total`` children over ``parts`` parents, in order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    lo = 1 if positive else 0
    if positive and total < parts:
        return
    for first in range(lo, total - lo * (parts - 1) + 1):
        for rest in _weak_compositions(total - first, parts - 1, positive):
            yield (first,) + rest


def enumerate_trees(height, max_tips, pruned_only=False, max_width=None, min_tips=0):
    """All trees of ``height`` with ``min_tips <= tips <= max_tips``.

    Non-pruned trees can carry arbitrarily many empty branches, so every level
    size is additionally capped at ``max_width`` (default ``max_tips``).
    Output is sorted by bracket form.
    """
    if height > MAX_ENUM_HEIGHT or max_tips > MAX_ENUM_TIPS:
        raise BoundsError(f"enumeration limited to height <= {MAX_ENUM_HEIGHT} "
                          f"and tips <= {MAX_ENUM_TIPS}")
    if max_width is None:
        max_width = max(max_tips, 1)
    if height == 0:
        return [unit_tree(0)] if min_tips <= 1 <= max_tips else []

    results = []

    def grow(levels, maps):
        m = len(levels) - 1
        if m == height:
            if min_tips <= levels[-1] <= max_tips:
                results.append(Tree(tuple(levels), tuple(maps)))
            return
        cap = max_tips if m + 1 == height else max_width
        if pruned_only:
            sizes = range(levels[-1], max(levels[-1], min(cap, max_tips)) + 1)
        else:
            sizes = range(0, cap + 1) if levels[-1] else range(0, 1)
        for size in sizes:
            for comp in _weak_compositions(size, levels[-1], pruned_only):
                rho = tuple(itertools.chain.from_iterable(
                    itertools.repeat(i, c) for i, c in enumerate(comp, start=1)))
                grow(levels + [size], maps + [rho])

    grow([1], [])
    results.sort(key=format_tree)
    return results
