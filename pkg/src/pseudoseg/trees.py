"""Trees, leaf-paths, and the graphs they induce.

A tree's leaf-paths (including the trivial one-leaf paths) are the
vertices of its path intersection graph; two are adjacent when the
paths share a node. This module builds those graphs plus the two
benchmark chordal families used by the counting modules, and carries a
chordality test utility.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import InvalidSize, InvalidTree


def pair_id(a, b):
    """Canonical label for an unordered pair of leaf labels."""
    a, b = (str(a), str(b))
    if b < a:
        a, b = b, a
    return f"{a},{b}"


def _check_label(u):
    if not u or any(ch.isspace() for ch in u) or "," in u:
        raise InvalidTree(f"bad node label {u!r}: must be nonempty, "
                          "no whitespace, no comma")


class Tree:
    """An unrooted tree over string labels.

    Built from an edge list; pass nodes= for the degenerate one-node
    tree. Labels may not contain whitespace or commas.
    """

    def __init__(self, edges, nodes=()):
        adj = {}
        for u in nodes:
            u = str(u)
            _check_label(u)
            adj.setdefault(u, set())
        eset = set()
        for u, v in edges:
            u, v = str(u), str(v)
            _check_label(u)
            _check_label(v)
            if u == v:
                raise InvalidTree(f"self-loop at {u!r}")
            e = (u, v) if u < v else (v, u)
            if e in eset:
                raise InvalidTree(f"duplicate edge {e}")
            eset.add(e)
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        if not adj:
            raise InvalidTree("empty tree")
        if len(eset) != len(adj) - 1:
            raise InvalidTree("edge count is not node count minus one")
        seen = set()
        stack = [next(iter(adj))]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(adj[u] - seen)
        if len(seen) != len(adj):
            raise InvalidTree("not connected")
        self._adj = {u: tuple(sorted(vs)) for u, vs in adj.items()}
        self.nodes = tuple(sorted(adj))
        self.edges = tuple(sorted(eset))

    def neighbors(self, u):
        try:
            return self._adj[str(u)]
        except KeyError:
            raise InvalidTree(f"no node {u!r}") from None

    def degree(self, u):
        return len(self.neighbors(u))

    @property
    def leaves(self):
        return tuple(u for u in self.nodes if self.degree(u) <= 1)

    @property
    def inner_nodes(self):
        return tuple(u for u in self.nodes if self.degree(u) >= 2)

    def path(self, u, v):
        """The unique node sequence from u to v."""
        u, v = str(u), str(v)
        self.neighbors(u)
        self.neighbors(v)
        if u == v:
            return (u,)
        parent = {u: None}
        frontier = [u]
        while frontier and v not in parent:
            nxt = []
            for w in frontier:
                for x in self._adj[w]:
                    if x not in parent:
                        parent[x] = w
                        nxt.append(x)
            frontier = nxt
        out = [v]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return tuple(reversed(out))

    def inner_leaf_candidates(self):
        """Inner nodes with at most one inner neighbor, sorted."""
        inner = set(self.inner_nodes)
        return tuple(u for u in sorted(inner)
                     if sum(1 for w in self._adj[u] if w in inner) <= 1)

    def __eq__(self, other):
        return isinstance(other, Tree) and self.edges == other.edges \
            and self.nodes == other.nodes

    def __hash__(self):
        return hash((self.nodes, self.edges))

    def __repr__(self):
        return f"Tree(nodes={len(self.nodes)}, edges={len(self.edges)})"


def leafify(t):
    """Attach one fresh pendant leaf to every node of t.

    The new leaf for node x is labeled x followed by enough apostrophes
    to avoid a clash. Every original node ends up inner, and node count
    doubles.
    """
    taken = set(t.nodes)
    edges = list(t.edges)
    for x in t.nodes:
        fresh = x + "'"
        while fresh in taken:
            fresh += "'"
        taken.add(fresh)
        edges.append((x, fresh))
    return Tree(edges)


@dataclass(frozen=True)
class LeafPath:
    """The unique path between two leaves; a == b gives the trivial path."""

    a: str
    b: str
    nodes: tuple

    @property
    def nodeset(self):
        return frozenset(self.nodes)

    @property
    def label(self):
        return pair_id(self.a, self.b)


def leaf_path(t, a, b):
    a, b = str(a), str(b)
    if b < a:
        a, b = b, a
    leaves = set(t.leaves)
    if a not in leaves or b not in leaves:
        raise InvalidTree(f"{a!r} and {b!r} must both be leaves")
    return LeafPath(a, b, t.path(a, b))


def all_leaf_paths(t):
    """Every leaf pair's path, trivial ones included, in label order."""
    ls = t.leaves
    out = []
    for i, a in enumerate(ls):
        for b in ls[i:]:
            out.append(LeafPath(a, b, t.path(a, b)))
    return out


@dataclass(frozen=True)
class SimpleGraph:
    """An undirected graph with string vertex labels and no loops."""

    vertices: tuple
    edges: frozenset

    @staticmethod
    def from_edges(vertices, edge_pairs):
        vs = tuple(sorted(str(v) for v in vertices))
        vset = set(vs)
        if len(vs) != len(vset):
            raise ValueError("duplicate vertex labels")
        es = set()
        for u, v in edge_pairs:
            u, v = str(u), str(v)
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u!r}, {v!r}) off the vertex set")
            es.add((u, v) if u < v else (v, u))
        return SimpleGraph(vs, frozenset(es))

    def has_edge(self, u, v):
        u, v = str(u), str(v)
        return ((u, v) if u < v else (v, u)) in self.edges

    def neighbors(self, u):
        u = str(u)
        out = []
        for a, b in self.edges:
            if a == u:
                out.append(b)
            elif b == u:
                out.append(a)
        return tuple(sorted(out))

    def degree(self, u):
        return len(self.neighbors(u))

    @property
    def edge_count(self):
        return len(self.edges)

    def induced(self, subset):
        sub = set(str(v) for v in subset)
        return SimpleGraph(tuple(sorted(sub)),
                           frozenset(e for e in self.edges
                                     if e[0] in sub and e[1] in sub))


def vpt_graph(t):
    """Intersection graph of all leaf-paths of t, labeled by leaf pairs."""
    paths = all_leaf_paths(t)
    vs = [p.label for p in paths]
    es = []
    for p, q in combinations(paths, 2):
        if p.nodeset & q.nodeset:
            es.append((p.label, q.label))
    return SimpleGraph.from_edges(vs, es)


def triple_membership_graph(n):
    """Clique on n members plus one independent vertex per 3-subset,
    adjacent exactly to its members."""
    if n < 3:
        raise InvalidSize("need n >= 3")
    members = [str(i) for i in range(1, n + 1)]
    vs = list(members)
    es = [(a, b) for a, b in combinations(members, 2)]
    for tri in combinations(members, 3):
        label = ",".join(tri)
        vs.append(label)
        es.extend((label, m) for m in tri)
    return SimpleGraph.from_edges(vs, es)


def substar_graph(n):
    """n independent leaf vertices plus a clique of all 3-leaf substars,
    each substar adjacent to its three leaves."""
    if n < 3:
        raise InvalidSize("need n >= 3")
    leaves = [str(i) for i in range(1, n + 1)]
    stars = [",".join(tri) for tri in combinations(leaves, 3)]
    es = [(a, b) for a, b in combinations(stars, 2)]
    for tri in combinations(leaves, 3):
        label = ",".join(tri)
        es.extend((label, leaf) for leaf in tri)
    return SimpleGraph.from_edges(leaves + stars, es)


def is_chordal(g):
    """Chordality via lexicographic BFS and an elimination-order check.

    Test utility: handy for sanity checks, not a public guarantee of
    anything else in the package.
    """
    order = _lex_bfs(g)
    pos = {v: i for i, v in enumerate(order)}
    nbrs = {v: set(g.neighbors(v)) for v in g.vertices}
    # reverse visit order must be a perfect elimination ordering
    for v in order:
        later = [w for w in nbrs[v] if pos[w] < pos[v]]
        if not later:
            continue
        u = max(later, key=lambda w: pos[w])
        if not set(later) - {u} <= nbrs[u]:
            return False
    return True


def _lex_bfs(g):
    labels = {v: [] for v in g.vertices}
    order = []
    remaining = set(g.vertices)
    while remaining:
        v = max(sorted(remaining), key=lambda u: labels[u])
        remaining.discard(v)
        order.append(v)
        stamp = len(order)
        for w in g.neighbors(v):
            if w in remaining:
                labels[w].append(-stamp)
    return order
