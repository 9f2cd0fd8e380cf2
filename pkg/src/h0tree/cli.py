"""Command-line entry point: ``h0tree <command> ...``.

Every command prints one JSON report on stdout.  Exit status is 0 on
success, 1 for invalid input and 2 for internal errors.
"""

from __future__ import annotations

import argparse
import hashlib
import random
import sys
import time
from collections import Counter

from . import io
from .core import ValidationError, canonical_key, hasse_quiver, iso_over_Q, validate_rooted_tree
from .decomp import Decomposition, decompose_forest, decompose_tree
from .filtration import decompose_h0, filtration_to_forest, sigma_of_functor
from .gen import random_filtration, random_rooted_tree, random_tree_over
from .order import enumerate_indecomposables, enumerate_reduced, hom_count, tree_leq
from .repmod import linearize, oracle_decompose


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _load(path: str, expect: str | None = None):
    data = io.load_json(path)
    kind = io.detect_kind(data)
    if expect and kind != expect:
        raise ValidationError(f"{path}: expected a {expect} file, found {kind}", kind="schema")
    parsers = {
        "tree": io.parse_tree_over,
        "filtration": io.parse_filtration,
        "bifiltration": io.parse_bifiltration,
        "quiver": io.parse_rooted_tree,
        "poset": lambda d: validate_rooted_tree(hasse_quiver(d["elements"], d["relations"])),
        "merge-invariant": _parse_merge_input,
    }
    return kind, parsers[kind](data)


def _parse_merge_input(d):
    from .filtration import build_graph

    gd = io._get(d, "graph", "merge-invariant")
    K = build_graph(io._get(gd, "vertices", "graph"), [tuple(e) for e in io._get(gd, "edges", "graph")])

    def edges(key):
        return {(u, w): r for u, w, r in io._get(d, key, "merge-invariant")}

    return (
        K,
        io._get(d, "f_vertices", "merge-invariant"),
        edges("f_edges"),
        io._get(d, "g_vertices", "merge-invariant"),
        edges("g_edges"),
        io._get(d, "n", "merge-invariant"),
    )


def _decompose_input(kind, obj) -> Decomposition:
    if kind == "tree":
        return decompose_tree(obj)[1]
    if kind == "filtration":
        return decompose_h0(obj)
    if kind == "bifiltration":
        return decompose_forest(sigma_of_functor(obj))
    raise ValidationError(f"cannot decompose a {kind} file", kind="schema")


def cmd_validate(args):
    kind, obj = _load(args.path)
    info = {"kind": kind, "valid": True}
    if kind == "quiver":
        info.update(vertices=len(obj), root=obj.root, height=obj.height)
    elif kind == "tree":
        info.update(vertices=len(obj), base_vertices=len(obj.base))
    elif kind == "filtration":
        info.update(vertices=len(obj.graph.vertices), edges=len(obj.graph.edges))
    elif kind == "merge-invariant":
        from .apps import componentwise_morphism_invariants  # checks f <= g per component

        info.update(components=len(componentwise_morphism_invariants(*obj)))
    return info


def cmd_decompose(args):
    kind, obj = _load(args.path, args.kind)
    return _decompose_input(kind, obj).to_dict()


def _catalog_entry(apex, t):
    return {"apex": apex, "key": canonical_key(t), "size": len(t)}


def cmd_reduced(args):
    _, Q = _load(args.path, "quiver")
    if args.with_downsets:
        items = enumerate_indecomposables(Q)
        return {"count": len(items), "entries": [_catalog_entry(a, t) for a, t in items]}
    cat = enumerate_reduced(Q)
    return {"count": len(cat), "entries": [_catalog_entry(Q.root, t) for t in cat]}


def cmd_compare(args):
    _, s = _load(args.path_s, "tree")
    _, t = _load(args.path_t, "tree")
    return {
        "s_leq_t": tree_leq(s, t),
        "t_leq_s": tree_leq(t, s),
        "hom_s_t": hom_count(s, t),
        "hom_t_s": hom_count(t, s),
        "iso": iso_over_Q(s, t),
    }


def _multiset_json(ms: Counter):
    return [{"apex": a, "key": k, "multiplicity": m} for (a, k), m in sorted(ms.items())]


def cmd_oracle(args):
    kind, obj = _load(args.path, args.kind)
    if kind == "tree":
        d = decompose_tree(obj)[1]
        Q = obj.base
        rep = linearize(obj, args.prime)
    elif kind == "filtration":
        d = decompose_h0(obj)
        Q = obj.Q
        rep = linearize(filtration_to_forest(obj), args.prime)
    else:
        raise ValidationError(f"oracle needs a tree or filtration file, got {kind}", kind="schema")
    claimed = d.multiset()
    if args.corrupt:
        # harness self-test: perturb the claimed multiset
        top = sorted(claimed)[0]
        claimed[top] += 1
    result = oracle_decompose(rep, Q)
    if not result.conclusive:
        status = "INCONCLUSIVE"
    else:
        status = "MATCH" if result.multiset == claimed else "MISMATCH"
    return {
        "status": status,
        "prime": args.prime,
        "claimed": _multiset_json(claimed),
        "oracle": _multiset_json(result.multiset) if result.conclusive else None,
    }


def cmd_merge_invariant(args):
    from .apps import componentwise_morphism_invariants

    _, obj = _load(args.path, "merge-invariant")
    out = []
    for comp, T, d in componentwise_morphism_invariants(*obj):
        out.append({"vertices": comp, "merge_tree": T.to_dict(), "decomposition": d.to_dict()})
    return {"components": out}


def cmd_gen(args):
    rng = random.Random(args.seed)
    if args.size < 1:
        raise ValidationError("size must be positive", kind="bad_value")
    if args.kind == "quiver":
        inst = random_rooted_tree(args.size, rng).to_dict()
    elif args.kind == "tree":
        Q = random_rooted_tree(args.qsize or min(args.size, 6), rng)
        inst = random_tree_over(Q, args.size, rng).to_dict()
    else:
        Q = random_rooted_tree(args.qsize or 5, rng)
        inst = random_filtration(Q, args.size, rng).to_dict()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(io.dumps(inst) + "\n")
    return inst


def _pretty(command: str, result) -> str:
    if isinstance(result, dict) and "summands" in result:
        lines = [f"{'apex':<12} {'mult':>4}  key"]
        for s in result["summands"]:
            lines.append(f"{s['apex']:<12} {s['multiplicity']:>4}  {s['key']}")
        lines.append("dims: " + ", ".join(f"{k}={v}" for k, v in result["dims"].items()))
        return "\n".join(lines)
    if isinstance(result, dict):
        return "\n".join(f"{k}: {v}" for k, v in result.items())
    return str(result)


COMMANDS = {
    "validate": cmd_validate,
    "decompose": cmd_decompose,
    "reduced": cmd_reduced,
    "compare": cmd_compare,
    "oracle": cmd_oracle,
    "merge-invariant": cmd_merge_invariant,
    "gen": cmd_gen,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="h0tree", description=__doc__.splitlines()[0])
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.set_defaults(pretty=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", dest="pretty", action="store_false", help="JSON output (default)")
    g.add_argument("--pretty", dest="pretty", action="store_true", help="human-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[fmt], help="parse and validate an input file")
    p.add_argument("path")

    p = sub.add_parser("decompose", parents=[fmt], help="decompose a tree or filtration")
    p.add_argument("path")
    p.add_argument("--kind", choices=["tree", "filtration", "bifiltration"])

    p = sub.add_parser("reduced", parents=[fmt], help="enumerate reduced trees over a quiver")
    p.add_argument("path")
    p.add_argument("--with-downsets", action="store_true")

    p = sub.add_parser("compare", parents=[fmt], help="compare two trees over the same quiver")
    p.add_argument("path_s")
    p.add_argument("path_t")

    p = sub.add_parser("oracle", parents=[fmt], help="check a decomposition against linear algebra")
    p.add_argument("path")
    p.add_argument("--kind", choices=["tree", "filtration"])
    p.add_argument("--prime", type=int, default=2)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("merge-invariant", parents=[fmt], help="decompose a merge-tree morphism")
    p.add_argument("path")

    p = sub.add_parser("gen", parents=[fmt], help="generate a random instance")
    p.add_argument("--kind", choices=["quiver", "tree", "filtration"], default="tree")
    p.add_argument("--size", type=int, default=10)
    p.add_argument("--qsize", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    inputs = {}
    for attr in ("path", "path_s", "path_t"):
        path = getattr(args, attr, None)
        if path:
            try:
                inputs[path] = _digest(path)
            except OSError:
                inputs[path] = None
    report = {"command": [args.command] + argv[1:], "inputs": inputs, "warnings": []}
    start = time.perf_counter()
    status = 0
    try:
        report["result"] = COMMANDS[args.command](args)
    except (ValidationError, OSError) as exc:
        status = 1
        report["result"] = None
        report["error"] = {
            "kind": getattr(exc, "kind", "io"),
            "message": str(exc),
            "witness": getattr(exc, "witness", None),
        }
        print(f"h0tree: invalid input: {exc}", file=sys.stderr)
    except Exception as exc:  # noqa: BLE001
        status = 2
        report["result"] = None
        report["error"] = {"kind": "internal", "message": f"{type(exc).__name__}: {exc}", "witness": None}
        print(f"h0tree: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
    report["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
    if getattr(args, "pretty", False) and status == 0:
        print(_pretty(args.command, report["result"]))
    else:
        print(io.dumps(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
