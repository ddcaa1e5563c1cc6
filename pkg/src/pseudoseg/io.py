"""Flat-file formats for trees, wirings, and curve-family documents.

A tree or wiring file is a one-key JSON object ({"tree": ...} or
{"wiring": ...}); a family document is a bare object carrying "curves"
plus the optional "disks", "host_tree", "build_log" fields and the
audit sections "base", "threesegments", and "sticks". Geometric
numbers are written as exact "p/q" strings (integer values print as a
bare "p"); swap levels and node labels stay structural. parse and
serialize round-trip to equal values for every kind.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .arrangements import WiringDiagram
from .errors import InvalidTree, MalformedFile
from .geom import Polyline
from .psifamily import Disk, PsiFamily
from .rational import rat_from_str, rat_to_str
from .trees import Tree


def _fail(msg):
    raise MalformedFile(msg)


def _keys(obj, what, required, optional=()):
    if not isinstance(obj, dict):
        _fail(f"{what}: expected an object")
    for key in required:
        if key not in obj:
            _fail(f'{what}: missing "{key}"')
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        _fail(f"{what}: unknown keys {unknown}")
    return obj


def _scalar(v, what):
    """Exact rational from a "p/q" string; bare JSON ints pass through."""
    if isinstance(v, bool) or isinstance(v, float):
        _fail(f'{what}: numbers must be "p/q" strings')
    if isinstance(v, int):
        return rat_from_str(str(v))
    if isinstance(v, str):
        try:
            return rat_from_str(v)
        except ValueError as exc:
            _fail(f"{what}: {exc}")
    _fail(f'{what}: expected a "p/q" string')


def _int_scalar(v, what):
    if isinstance(v, bool) or isinstance(v, float):
        _fail(f"{what}: expected an integer")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        q = _scalar(v, what)
        if q.denominator != 1:
            _fail(f"{what}: expected an integer, got {v!r}")
        return int(q.numerator)
    _fail(f"{what}: expected an integer")


def _str(v, what):
    if not isinstance(v, str):
        _fail(f"{what}: expected a string")
    return v


def _list(v, what):
    if not isinstance(v, list):
        _fail(f"{what}: expected a list")
    return v


# ---------------------------------------------------------------------------
# curves and disks


def curve_to_jsonable(c):
    return {"id": c.id, "closed": c.closed,
            "points": [[rat_to_str(x), rat_to_str(y)] for x, y in c.points]}


def curve_from_jsonable(obj, what="curve"):
    _keys(obj, what, ("id", "points"), ("closed",))
    cid = _str(obj["id"], f"{what} id")
    closed = obj.get("closed", False)
    if not isinstance(closed, bool):
        _fail(f'{what} {cid!r}: "closed" must be a boolean')
    pts = []
    for i, p in enumerate(_list(obj["points"], f"{what} {cid!r} points")):
        if not isinstance(p, list) or len(p) != 2:
            _fail(f"{what} {cid!r}: point {i} must be an [x, y] pair")
        where = f"{what} {cid!r} point {i}"
        pts.append((_scalar(p[0], where), _scalar(p[1], where)))
    try:
        return Polyline(cid, tuple(pts), closed)
    except ValueError as exc:
        _fail(f"{what}: {exc}")


def disk_to_jsonable(d):
    return {"leaf": d.leaf,
            "center": [rat_to_str(d.center[0]), rat_to_str(d.center[1])],
            "radius": rat_to_str(d.radius)}


def disk_from_jsonable(obj):
    _keys(obj, "disk", ("leaf", "center", "radius"))
    leaf = _str(obj["leaf"], "disk leaf")
    c = obj["center"]
    if not isinstance(c, list) or len(c) != 2:
        _fail(f"disk {leaf!r}: center must be an [x, y] pair")
    center = (_scalar(c[0], f"disk {leaf!r} center"),
              _scalar(c[1], f"disk {leaf!r} center"))
    return Disk(center, _scalar(obj["radius"], f"disk {leaf!r} radius"), leaf)


def _curve_list(obj, what):
    return tuple(curve_from_jsonable(c, what) for c in _list(obj, what))


# ---------------------------------------------------------------------------
# trees


def _tree_body_to(t):
    return {"nodes": list(t.nodes), "edges": [list(e) for e in t.edges]}


def _find_cycle(edges):
    """Node sequence of a cycle in the edge list, or None."""
    adj = {}
    seen = set()
    for u, v in edges:
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        if u in adj and v in adj:
            parent = {u: None}
            frontier = [u]
            while frontier:
                w = frontier.pop()
                if w == v:
                    break
                for x in adj[w]:
                    if x not in parent:
                        parent[x] = w
                        frontier.append(x)
            if v in parent:
                path = [v]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return list(reversed(path))
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return None


def _tree_body_from(obj, what="tree"):
    _keys(obj, what, ("edges",), ("nodes",))
    nodes = [_str(u, f"{what} node") for u in _list(obj.get("nodes", []),
                                                   f"{what} nodes")]
    edges = []
    for i, e in enumerate(_list(obj["edges"], f"{what} edges")):
        if not isinstance(e, list) or len(e) != 2:
            _fail(f"{what}: edge {i} must be a [u, v] pair")
        edges.append((_str(e[0], f"{what} edge {i}"),
                      _str(e[1], f"{what} edge {i}")))
    cycle = _find_cycle(edges)
    if cycle is not None:
        raise InvalidTree("cycle: " + " - ".join(cycle + [cycle[0]]))
    return Tree(edges, nodes)


def tree_to_jsonable(t):
    return {"tree": _tree_body_to(t)}


def tree_from_jsonable(obj):
    _keys(obj, "tree file", ("tree",))
    return _tree_body_from(obj["tree"])


# ---------------------------------------------------------------------------
# wirings


def wiring_to_jsonable(w):
    return {"wiring": {"n": w.n, "swaps": list(w.swaps)}}


def wiring_from_jsonable(obj):
    _keys(obj, "wiring file", ("wiring",))
    body = _keys(obj["wiring"], "wiring", ("n", "swaps"))
    n = _int_scalar(body["n"], "wiring n")
    swaps = [_int_scalar(s, f"wiring swap {i}")
             for i, s in enumerate(_list(body["swaps"], "wiring swaps"))]
    return WiringDiagram(n, tuple(swaps))


# ---------------------------------------------------------------------------
# family documents


@dataclass(frozen=True)
class FamilyDocument:
    """One family file's full content.

    base/threesegments/sticks are the optional audit sections; None
    means the section is absent, an empty tuple means present but
    empty. sticks is a (stick count, segment curves) pair.
    """

    family: PsiFamily
    base: tuple = None
    threesegments: tuple = None
    sticks: tuple = None

    def __post_init__(self):
        if self.base is not None:
            object.__setattr__(self, "base", tuple(self.base))
        if self.threesegments is not None:
            object.__setattr__(self, "threesegments",
                               tuple(self.threesegments))
        if self.sticks is not None:
            count, segs = self.sticks
            object.__setattr__(self, "sticks", (int(count), tuple(segs)))


def document_to_jsonable(doc):
    fam = doc.family
    out = {"curves": [curve_to_jsonable(c) for c in fam.curves]}
    if fam.disks:
        out["disks"] = [disk_to_jsonable(d) for d in fam.disks]
    if fam.host_tree is not None:
        out["host_tree"] = _tree_body_to(fam.host_tree)
    if fam.build_log:
        out["build_log"] = list(fam.build_log)
    if doc.base is not None:
        out["base"] = [curve_to_jsonable(c) for c in doc.base]
    if doc.threesegments is not None:
        out["threesegments"] = [curve_to_jsonable(c)
                                for c in doc.threesegments]
    if doc.sticks is not None:
        count, segs = doc.sticks
        out["sticks"] = {"count": str(count),
                         "segments": [curve_to_jsonable(c) for c in segs]}
    return out


def document_from_jsonable(obj):
    _keys(obj, "family file", ("curves",),
          ("disks", "host_tree", "build_log", "base", "threesegments",
           "sticks"))
    curves = _curve_list(obj["curves"], "curve")
    disks = tuple(disk_from_jsonable(d)
                  for d in _list(obj.get("disks", []), "disks"))
    host = None
    if "host_tree" in obj:
        host = _tree_body_from(obj["host_tree"], "host_tree")
    log = tuple(_str(line, "build_log entry")
                for line in _list(obj.get("build_log", []), "build_log"))
    base = None
    if "base" in obj:
        base = _curve_list(obj["base"], "base curve")
    threes = None
    if "threesegments" in obj:
        threes = _curve_list(obj["threesegments"], "threesegments curve")
    sticks = None
    if "sticks" in obj:
        body = _keys(obj["sticks"], "sticks", ("count", "segments"))
        sticks = (_int_scalar(body["count"], "sticks count"),
                  _curve_list(body["segments"], "sticks segment"))
    return FamilyDocument(PsiFamily(curves, disks, host, log),
                          base, threes, sticks)


# ---------------------------------------------------------------------------
# text front ends


def _dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _loads(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"not valid JSON: {exc}")
    if not isinstance(obj, dict):
        _fail("top level must be an object")
    return obj


def serialize_tree(t):
    return _dumps(tree_to_jsonable(t))


def parse_tree(text):
    return tree_from_jsonable(_loads(text))


def serialize_wiring(w):
    return _dumps(wiring_to_jsonable(w))


def parse_wiring(text):
    return wiring_from_jsonable(_loads(text))


def serialize_document(doc):
    return _dumps(document_to_jsonable(doc))


def parse_document(text):
    return document_from_jsonable(_loads(text))


def serialize_family(fam):
    return serialize_document(FamilyDocument(fam))


def parse_family(text):
    return parse_document(text).family


def parse_any(text):
    """Dispatch on the top-level shape: tree, wiring, or document."""
    obj = _loads(text)
    if "curves" in obj:
        return document_from_jsonable(obj)
    if "tree" in obj:
        return tree_from_jsonable(obj)
    if "wiring" in obj:
        return wiring_from_jsonable(obj)
    _fail('no "curves", "tree", or "wiring" key at top level')
