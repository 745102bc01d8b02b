"""Trees as subdivisions of the unit cube, with little-cubes composition.

Level m of a tree splits axis x_{m+1} into equal slabs, one per child, in
increasing coordinate order.  Boxes are labelled by the natural order of tips.
All coordinates are exact fractions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import InvariantViolation
from .omega import prune, tip_fibers, tip_permutation
from .trees import is_pruned


@dataclass(frozen=True)
class Box:
    intervals: tuple  # ((lo, hi), ...) per axis

    def __post_init__(self):
        ivs = tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        for lo, hi in ivs:
            if not 0 <= lo < hi <= 1:
                raise InvariantViolation(f"bad interval [{lo}, {hi}]")

    @property
    def dim(self):
        return len(self.intervals)

    def volume(self):
        v = Fraction(1)
        for lo, hi in self.intervals:
            v *= hi - lo
        return v

    def overlaps(self, other):
        return all(a_lo < b_hi and b_lo < a_hi
                   for (a_lo, a_hi), (b_lo, b_hi) in zip(self.intervals, other.intervals))

    def embed(self, inner):
        """The image of ``inner`` under the affine map sending [0,1]^n onto self."""
        return Box(tuple((lo + (hi - lo) * ilo, lo + (hi - lo) * ihi)
                         for (lo, hi), (ilo, ihi) in zip(self.intervals, inner.intervals)))

    def __str__(self):
        return " x ".join(f"[{lo},{hi}]" for lo, hi in self.intervals)


@dataclass(frozen=True)
class CubeConfig:
    dim: int
    boxes: tuple  # box i carries label i + 1

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        for b in self.boxes:
            if b.dim != self.dim:
                raise InvariantViolation("box dimension differs from the configuration's")
        for (i, a), (j, b) in combinations(enumerate(self.boxes, start=1), 2):
            if a.overlaps(b):
                raise InvariantViolation(f"boxes {i} and {j} overlap")

    def volume(self):
        return sum((b.volume() for b in self.boxes), Fraction(0))

    def is_full_partition(self):
        return self.volume() == 1

    def to_json(self):
        return {"dim": self.dim,
                "boxes": [{"label": i,
                           "intervals": [[[lo.numerator, lo.denominator],
                                          [hi.numerator, hi.denominator]]
                                         for lo, hi in b.intervals]}
                          for i, b in enumerate(self.boxes, start=1)]}

    @classmethod
    def from_json(cls, data):
        boxes = sorted(data["boxes"], key=lambda b: b["label"])
        return cls(data["dim"], tuple(
            Box(tuple((Fraction(*lo), Fraction(*hi)) for lo, hi in b["intervals"]))
            for b in boxes))

    def to_svg(self, size=240):
        if self.dim != 2:
            raise InvariantViolation("SVG output is only drawn for dimension 2")
        pad = 10
        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * pad}" '
               f'height="{size + 2 * pad}">',
               f'<rect x="{pad}" y="{pad}" width="{size}" height="{size}" '
               'fill="none" stroke="black" stroke-dasharray="4"/>']
        for i, b in enumerate(self.boxes, start=1):
            (x0, x1), (y0, y1) = b.intervals
            # y grows upward in the cube, downward in SVG
            x, y = pad + float(x0) * size, pad + float(1 - y1) * size
            w, h = float(x1 - x0) * size, float(y1 - y0) * size
            out.append(f'<rect x="{x:.3f}" y="{y:.3f}" width="{w:.3f}" height="{h:.3f}" '
                       'fill="#dde8f5" stroke="black"/>')
            out.append(f'<text x="{x + w / 2:.3f}" y="{y + h / 2:.3f}" '
                       f'text-anchor="middle" dominant-baseline="middle">{i}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def unit_cube(n):
    return CubeConfig(n, (Box(((0, 1),) * n),))


def realize(tree):
    n = tree.height
    if n < 1:
        raise InvariantViolation("cube realization needs height >= 1")
    boxes = []

    def split(m, p, region):
        if m == n:
            boxes.append(Box(tuple(region)))
            return
        kids = tree.children(m, p)
        lo, hi = region[m]
        step = (hi - lo) / len(kids) if len(kids) else 0
        for k, c in enumerate(kids):
            sub = list(region)
            sub[m] = (lo + k * step, lo + (k + 1) * step)
            split(m + 1, c, sub)

    split(0, 1, [(Fraction(0), Fraction(1))] * n)
    return CubeConfig(n, tuple(boxes))


def compose(outer, inners):
    if len(inners) != len(outer.boxes):
        raise InvariantViolation(f"expected {len(outer.boxes)} inner configurations")
    boxes = []
    for box, inner in zip(outer.boxes, inners):
        if inner.dim != outer.dim:
            raise InvariantViolation("dimension mismatch")
        boxes.extend(box.embed(b) for b in inner.boxes)
    return CubeConfig(outer.dim, tuple(boxes))


def apply_permutation(perm, config):
    """Relabel: the box labelled p afterwards is the box labelled perm[p-1] before."""
    if sorted(perm) != list(range(1, len(config.boxes) + 1)):
        raise InvariantViolation("permutation size does not match the box count")
    return CubeConfig(config.dim, tuple(config.boxes[q - 1] for q in perm))


def endpoints(sigma):
    """Both ends of the homotopy attached to a tip-surjective morphism of pruned trees.

    The start composes the target's configuration with those of the tip fibers,
    each pruned first; the end relabels the source's configuration by the
    morphism's tip permutation.
    """
    if not (is_pruned(sigma.source) and is_pruned(sigma.target)):
        raise InvariantViolation("endpoints need pruned source and target")
    fibers = [prune(f)[0] for f in tip_fibers(sigma)]
    start = compose(realize(sigma.target), [realize(f) for f in fibers])
    end = apply_permutation(tip_permutation(sigma), realize(sigma.source))
    return start, end


__all__ = ["Box", "CubeConfig", "unit_cube", "realize", "compose", "apply_permutation",
           "endpoints"]
