"""JSON file formats for quivers, trees over Q, filtrations and merge-invariant inputs."""

from __future__ import annotations

import json
from typing import Any

from .core import (
    Quiver,
    RootedTree,
    TreeOverQ,
    ValidationError,
    build_quiver,
    build_tree_over,
    validate_rooted_tree,
)
from .filtration import (
    GraphFunctor,
    QFiltration,
    build_graph,
    restrict_bifiltration,
    validate_filtration,
)


def _get(d: dict, key: str, kind: str):
    if not isinstance(d, dict) or key not in d:
        raise ValidationError(f"{kind}: missing field {key!r}", kind="schema", witness=key)
    return d[key]


def parse_quiver(d: Any) -> Quiver:
    verts = _get(d, "vertices", "quiver")
    edges = _get(d, "edges", "quiver")
    if not isinstance(verts, list) or not isinstance(edges, list):
        raise ValidationError("quiver: vertices and edges must be lists", kind="schema")
    for e in edges:
        if not isinstance(e, list) or len(e) != 2:
            raise ValidationError(f"quiver: bad edge {e!r}", kind="schema", witness=e)
    return build_quiver(verts, edges)


def parse_rooted_tree(d: Any) -> RootedTree:
    return validate_rooted_tree(parse_quiver(d))


def parse_tree_over(d: Any) -> TreeOverQ:
    Q = parse_rooted_tree(_get(d, "base", "tree"))
    T = parse_rooted_tree(_get(d, "tree", "tree"))
    lab = _get(d, "labeling", "tree")
    if not isinstance(lab, dict):
        raise ValidationError("tree: labeling must be an object", kind="schema")
    return build_tree_over(Q, T, lab)


def parse_filtration(d: Any) -> QFiltration:
    Q = parse_rooted_tree(_get(d, "quiver", "filtration"))
    gd = _get(d, "graph", "filtration")
    g = build_graph(_get(gd, "vertices", "graph"), [tuple(e) for e in _get(gd, "edges", "graph")])
    ev = {}
    for item in _get(d, "edge_values", "filtration"):
        if not isinstance(item, list) or len(item) != 3:
            raise ValidationError(f"filtration: bad edge value {item!r}", kind="schema", witness=item)
        ev[item[0], item[1]] = item[2]
    return validate_filtration(g, Q, _get(d, "vertex_values", "filtration"), ev)


def _grid_value(x, grid, what) -> tuple[int, int]:
    m, n = grid
    if (
        not isinstance(x, list)
        or len(x) != 2
        or not all(isinstance(c, int) for c in x)
        or not (1 <= x[0] <= m and 1 <= x[1] <= n)
    ):
        raise ValidationError(f"bifiltration: {what} value {x!r} is not a cell of the {m}x{n} grid", kind="bad_value", witness=what)
    return x[0], x[1]


def parse_bifiltration(d: Any) -> GraphFunctor:
    """Grid-valued graph restricted to an embedded rooted tree poset.

    Grid cells are 1-based: ``[i, j]`` with ``1 <= i <= m``, ``1 <= j <= n``.
    """
    grid = _get(d, "grid", "bifiltration")
    if not (isinstance(grid, list) and len(grid) == 2 and all(isinstance(c, int) and c >= 1 for c in grid)):
        raise ValidationError("bifiltration: grid must be [m, n] with positive sizes", kind="schema")
    gd = _get(d, "graph", "bifiltration")
    g = build_graph(_get(gd, "vertices", "graph"), [tuple(e) for e in _get(gd, "edges", "graph")])
    vv = {v: _grid_value(x, grid, v) for v, x in _get(d, "vertex_values", "bifiltration").items()}
    missing = [v for v in g.vertices if v not in vv]
    if missing:
        raise ValidationError(f"vertex {missing[0]!r} has no value", kind="missing_value", witness=missing[0])
    ev = {}
    for item in _get(d, "edge_values", "bifiltration"):
        if not isinstance(item, list) or len(item) != 3:
            raise ValidationError(f"bifiltration: bad edge value {item!r}", kind="schema", witness=item)
        ev[item[0], item[1]] = _grid_value(item[2], grid, f"{item[0]}-{item[1]}")
    res = _get(d, "restriction", "bifiltration")
    poset = _get(res, "poset", "restriction")
    emb = {p: _grid_value(x, grid, p) for p, x in _get(res, "embedding", "restriction").items()}
    elements = _get(poset, "elements", "poset")
    missing = [p for p in elements if p not in emb]
    if missing:
        raise ValidationError(f"poset element {missing[0]!r} is not embedded", kind="missing_value", witness=missing[0])
    return restrict_bifiltration(g, vv, ev, elements, _get(poset, "relations", "poset"), emb)


def detect_kind(d: Any) -> str:
    if not isinstance(d, dict):
        raise ValidationError("top-level JSON value must be an object", kind="schema")
    if {"base", "tree", "labeling"} <= d.keys():
        return "tree"
    if {"graph", "grid"} <= d.keys():
        return "bifiltration"
    if {"quiver", "graph"} <= d.keys():
        return "filtration"
    if {"graph", "n", "f_vertices"} <= d.keys():
        return "merge-invariant"
    if {"elements", "relations"} <= d.keys():
        return "poset"
    if {"vertices", "edges"} <= d.keys():
        return "quiver"
    raise ValidationError("unrecognised input file", kind="schema")


def load_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})", kind="json") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2)
