"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 malformed tree, 3 size bound exceeded,
4 invariant violation.  Errors are reported as JSON on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import cubes, hoperad, nerve, omega, polytopes, trees
from .errors import HoperadsError


class UsageError(HoperadsError):
    exit_code = 1
    kind = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def read_tree(text, height=None):
    """A tree given inline or as ``@path`` to a file holding its bracket form."""
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read().strip()
    return trees.parse_tree(text, height=height)


def _emit(args, text, data=None, dot=None, svg=None):
    if getattr(args, "svg", False):
        if svg is None:
            raise UsageError("--svg is not available for this command")
        return svg()
    if getattr(args, "dot", False):
        if dot is None:
            raise UsageError("--dot is not available for this command")
        return dot()
    if getattr(args, "json", False):
        return json.dumps(data() if callable(data) else data, indent=2) + "\n"
    return text() if callable(text) else text


def _morphism_text(sigma):
    return " ".join(",".join(map(str, m)) for m in sigma.maps[1:])


# -- commands -----------------------------------------------------------------------

def cmd_tree(args):
    if args.action == "parse":
        t = read_tree(args.tree, args.height)
        return _emit(args, f"{t}\nlevels {' '.join(map(str, t.levels))}\n", t.to_json)
    if args.action == "tips":
        t = read_tree(args.tree, args.height)
        return _emit(args, f"{t.tips}\n", {"tree": str(t), "tips": t.tips})
    if args.action == "prune":
        t, _ = omega.prune(read_tree(args.tree, args.height))
        return _emit(args, f"{t}\n", t.to_json)
    if args.action == "compose":
        s, t = read_tree(args.left), read_tree(args.right)
        out = trees.compose(s, t, args.k)
        return _emit(args, f"{out}\n", out.to_json)
    found = trees.enumerate_trees(args.height, args.max_tips, pruned_only=args.pruned,
                                  max_width=args.max_width)
    if args.count:
        return _emit(args, f"{len(found)}\n", {"count": len(found)})
    return _emit(args, "".join(f"{t}\n" for t in found), lambda: [str(t) for t in found])


def _homs(args):
    s, t = read_tree(args.source), read_tree(args.target)
    return omega.hom_set(s, t, tip_surjective=not args.all)


def cmd_hom(args):
    found = _homs(args)
    if args.count:
        return _emit(args, f"{len(found)}\n", {"count": len(found)})
    return _emit(args, "".join(_morphism_text(m) + "\n" for m in found),
                 lambda: [m.to_json() for m in found])


def _pick(found, index):
    if not found:
        raise UsageError("there are no morphisms between these trees")
    if not 0 <= index < len(found):
        raise UsageError(f"--index must lie in 0..{len(found) - 1}")
    return found[index]


def cmd_fibers(args):
    sigma = _pick(_homs(args), args.index)
    fibers = omega.tip_fibers(sigma)
    lines = [f"morphism {_morphism_text(sigma)}"]
    lines += [f"tip {i}: {f}" for i, f in enumerate(fibers, start=1)]
    data = {"morphism": sigma.to_json(), "fibers": [str(f) for f in fibers]}
    if sigma.is_tip_surjective():
        perm = omega.tip_permutation(sigma)
        lines.append("permutation " + " ".join(map(str, perm)))
        data["permutation"] = list(perm)
    return _emit(args, "\n".join(lines) + "\n", data)


def _chain_category(args):
    t = read_tree(args.tree)
    return hoperad.chain_category(t, surjective_only=not args.all_morphisms,
                                  no_identity_steps=not args.identity_steps,
                                  max_len=args.max_len, universe=args.universe)


def cmd_chains(args):
    t = read_tree(args.tree)
    if args.count or not args.dot:
        found = hoperad.enumerate_chains(t, surjective_only=not args.all_morphisms,
                                         no_identity_steps=not args.identity_steps,
                                         max_len=args.max_len, universe=args.universe)
        if args.count:
            return _emit(args, f"{len(found)}\n", {"count": len(found)})
        return _emit(args, "".join(c.label() + "\n" for c in found),
                     lambda: [c.to_json() for c in found])
    cat = _chain_category(args)
    poset = polytopes.Poset.from_category(cat, label=lambda c: c.label())
    return poset.to_dot("chains")


def _poset_output(args, poset, name):
    def text():
        return "f-vector " + " ".join(map(str, poset.f_vector())) + "\n"

    def data():
        out = poset.to_json()
        out["name"] = name
        return out

    if args.count:
        return _emit(args, f"{len(poset)}\n", {"count": len(poset)})
    return _emit(args, text, data, dot=lambda: poset.to_dot(name))


def cmd_polytope(args):
    if args.kind == "assoc":
        return _poset_output(args, polytopes.associahedron(int(args.arg)), f"K{args.arg}")
    if args.kind == "perm":
        return _poset_output(args, polytopes.permutohedron(int(args.arg)), f"P{args.arg}")
    if args.kind == "braid":
        return _poset_output(args, polytopes.braid_polytope(read_tree(args.arg), args.strict),
                             "braid")
    proj = polytopes.tonks_projection(int(args.arg))
    collapsed = proj.collapsed()
    data = {"source_f_vector": list(proj.source.f_vector()),
            "target_f_vector": list(proj.target.f_vector()),
            "collapsed_by_rank": {str(k): v for k, v in collapsed.items()},
            "mapping": proj.mapping}
    text = (f"source {' '.join(map(str, proj.source.f_vector()))}\n"
            f"target {' '.join(map(str, proj.target.f_vector()))}\n"
            + "".join(f"collapsed rank {k}: {v}\n" for k, v in collapsed.items()))
    return _emit(args, text, data)


def _config_text(config):
    return "".join(f"{i}: {b}\n" for i, b in enumerate(config.boxes, start=1))


def cmd_cubes(args):
    if args.action == "realize":
        c = cubes.realize(read_tree(args.source))
        return _emit(args, lambda: _config_text(c), c.to_json, svg=c.to_svg)
    if args.target is None:
        raise UsageError("cubes endpoints needs a source and a target tree")
    sigma = _pick(_homs(args), args.index)
    start, end = cubes.endpoints(sigma)

    def svg():
        return start.to_svg() + end.to_svg()

    return _emit(args,
                 lambda: "start\n" + _config_text(start) + "end\n" + _config_text(end),
                 lambda: {"morphism": sigma.to_json(), "start": start.to_json(),
                          "end": end.to_json()},
                 svg=svg)


def cmd_nerve(args):
    cat = _chain_category(args)
    profile = nerve.nerve_profile(cat, args.max_dim)
    terminal = nerve.has_terminal(cat)
    data = profile.to_json()
    data["has_terminal"] = terminal
    text = (f"f-vector {' '.join(map(str, profile.f_vector))}\n"
            f"euler {profile.euler_characteristic}\nterminal {str(terminal).lower()}\n")
    return _emit(args, text, data)


# -- parser ---------------------------------------------------------------------------

def _outputs(p, dot=False, svg=False, count=False):
    p.add_argument("--json", action="store_true", help="JSON output")
    if dot:
        p.add_argument("--dot", action="store_true", help="Hasse diagram in DOT")
    if svg:
        p.add_argument("--svg", action="store_true", help="SVG drawing (dimension 2)")
    if count:
        p.add_argument("--count", action="store_true", help="print only the count")


def _chain_flags(p):
    p.add_argument("tree")
    p.add_argument("--all-morphisms", action="store_true",
                   help="allow steps that miss tips")
    p.add_argument("--identity-steps", action="store_true", help="allow identity steps")
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--universe", choices=["pruned", "bounded", "dominated"], default=None,
                   help="trees the steps may pass through")


def build_parser():
    parser = _Parser(prog="hoperads", description="Trees, chain operads and their polytopes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    tree = sub.add_parser("tree", help="parse, inspect and build trees")
    tsub = tree.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("parse", "tips", "prune"):
        p = tsub.add_parser(name)
        p.add_argument("tree")
        p.add_argument("--height", type=int, default=None,
                       help="height for trees whose brackets do not fix it")
        _outputs(p)
    p = tsub.add_parser("compose")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("k", type=int)
    _outputs(p)
    p = tsub.add_parser("enumerate")
    p.add_argument("height", type=int)
    p.add_argument("max_tips", type=int)
    p.add_argument("--pruned", action="store_true")
    p.add_argument("--max-width", type=int, default=None)
    _outputs(p, count=True)
    tree.set_defaults(func=cmd_tree)

    for name, func, help_text in (("hom", cmd_hom, "list tree morphisms"),
                                  ("fibers", cmd_fibers, "fibers of one morphism")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("source")
        p.add_argument("target")
        p.add_argument("--all", action="store_true", help="include morphisms missing tips")
        if name == "fibers":
            p.add_argument("--index", type=int, default=0)
            _outputs(p)
        else:
            _outputs(p, count=True)
        p.set_defaults(func=func)

    p = sub.add_parser("chains", help="chains from a tree down to U_n")
    _chain_flags(p)
    _outputs(p, dot=True, count=True)
    p.set_defaults(func=cmd_chains)

    p = sub.add_parser("polytope", help="coherence polytope face posets")
    p.add_argument("kind", choices=["assoc", "perm", "tonks", "braid"])
    p.add_argument("arg", help="number of leaves, or a pruned tree for braid")
    p.add_argument("--strict", action="store_true", help="braid: strict associativity")
    _outputs(p, dot=True, count=True)
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("cubes", help="little-cube configurations")
    p.add_argument("action", choices=["realize", "endpoints"])
    p.add_argument("source")
    p.add_argument("target", nargs="?")
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--all", action="store_true", help=argparse.SUPPRESS)
    _outputs(p, svg=True)
    p.set_defaults(func=cmd_cubes)

    p = sub.add_parser("nerve", help="nerve of a chain category")
    _chain_flags(p)
    p.add_argument("--max-dim", type=int, default=None)
    _outputs(p)
    p.set_defaults(func=cmd_nerve)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        stdout.write(args.func(args))
    except HoperadsError as exc:
        stderr.write(json.dumps({"error": exc.kind, "message": str(exc)}) + "\n")
        return exc.exit_code
    except OSError as exc:
        stderr.write(json.dumps({"error": "io", "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
