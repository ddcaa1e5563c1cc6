"""Pseudoline arrangements encoded as wiring diagrams.

A wiring diagram lists the levels at which successive crossings happen;
every pair of wires crosses exactly once. From it we extract the full
cell structure (vertices, edges, faces, face-dual), compute k-zones by
0-1 breadth-first search over the dual, enumerate k-segments and
cut-paths as dual walks, and evaluate the counting bounds.

Edges are identified as (line, index): line is the wire number (wires
are numbered 1..n by their starting level, bottom up), index counts the
pieces along the wire left to right; piece 0 and piece n-1 are the two
unbounded rays. The standard drawing realizes wire w as a polyline
through (t + 1/2, level of w in slab t), which the witness-curve
machinery and the renderer share.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from math import comb, floor

from .errors import (BoundViolated, InvalidSize, KOutOfRange,
                     MalformedWiring, UnknownLine)
from .geom import Polyline, compress_chain
from .rational import rat


@dataclass(frozen=True)
class WiringDiagram:
    """A simple arrangement of n pseudolines as a sorting network.

    swaps[t] = level means that at step t+1 the wires currently at
    levels swaps[t] and swaps[t]+1 cross (level 1 is the bottom). Every
    unordered pair must cross exactly once, so len(swaps) = C(n, 2).
    """

    n: int
    swaps: tuple

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "swaps", tuple(int(s) for s in self.swaps))
        n = self.n
        if n < 1:
            raise MalformedWiring("need at least one line")
        perm = list(range(1, n + 1))
        crossed = set()
        for s in self.swaps:
            if not 1 <= s <= n - 1:
                raise MalformedWiring(f"swap level {s} out of range 1..{n - 1}")
            a, b = perm[s - 1], perm[s]
            key = (a, b) if a < b else (b, a)
            if key in crossed:
                raise MalformedWiring(f"wires {key} cross twice")
            crossed.add(key)
            perm[s - 1], perm[s] = perm[s], perm[s - 1]
        if len(crossed) != comb(n, 2):
            raise MalformedWiring(
                f"only {len(crossed)} of {comb(n, 2)} wire pairs cross")


@dataclass(frozen=True)
class Vertex:
    step: int
    wires: tuple
    point: tuple


@dataclass(frozen=True)
class Edge:
    line: int
    index: int
    slab_lo: int
    slab_hi: int
    above: int
    below: int

    @property
    def eid(self):
        return (self.line, self.index)


@dataclass(frozen=True)
class Face:
    fid: int
    gap: int
    slab_lo: int
    slab_hi: int


@dataclass(frozen=True)
class KSegment:
    """A sequence of edges on pairwise distinct lines, crossable in
    order by a curve with no other contacts with the arrangement."""

    edges: tuple

    def __len__(self):
        return len(self.edges)

    @property
    def lines(self):
        return tuple(e[0] for e in self.edges)


@dataclass(frozen=True)
class ZoneResult:
    p: int
    k: int
    side: str
    edges: tuple
    size: int
    bound: int
    pass_bound: bool


class ArrangementCells:
    """Cell structure of a wiring diagram; built by realize_wiring."""

    def __init__(self, wiring, level_wire, vertices, edges, faces, dual,
                 drawings):
        self.wiring = wiring
        self.n = wiring.n
        self.steps = len(wiring.swaps)
        self._level_wire = level_wire
        self.vertices = vertices
        self.edges = edges
        self.faces = faces
        self.dual = dual
        self._drawings = drawings

    def edges_of_line(self, w):
        if not 1 <= w <= self.n:
            raise UnknownLine(f"no line {w}")
        return [e for eid, e in self.edges.items() if eid[0] == w]

    def wire_drawing(self, w):
        if not 1 <= w <= self.n:
            raise UnknownLine(f"no line {w}")
        return self._drawings[w]

    def level_of(self, w, slab):
        return self._level_wire[slab].index(w) + 1

    def edge_side(self, eid, p):
        """+1 if the edge runs above line p, -1 below, 0 for p's own edges."""
        e = self.edges[eid]
        if e.line == p:
            return 0
        t = e.slab_lo
        d = self.level_of(e.line, t) - self.level_of(p, t)
        return 1 if d > 0 else -1

    def wire_y(self, w, x):
        """Exact y of wire w's drawing at abscissa x."""
        pts = self.wire_drawing(w).points
        x = rat(x)
        if not pts[0][0] <= x <= pts[-1][0]:
            raise ValueError(f"x={x} outside the drawing")
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            if x <= x2:
                return y1 + (x - x1) * rat(y2 - y1) / (x2 - x1)
        return pts[-1][1]

    def gap_mid(self, gap, x):
        """Midline of the vertical gap (0 = below all wires) at abscissa x."""
        ys = sorted(self.wire_y(w, x) for w in range(1, self.n + 1))
        ext = [rat(0)] + ys + [rat(self.n + 1)]
        return (ext[gap] + ext[gap + 1]) / 2


def realize_wiring(w):
    """Extract the full cell structure of a wiring diagram.

    Deterministic ids: faces are numbered by (first slab, gap); edges by
    (wire, piece index along the wire).
    """
    n, swaps = w.n, w.swaps
    steps = len(swaps)
    level_wire = [tuple(range(1, n + 1))]
    perm = list(range(1, n + 1))
    for s in swaps:
        perm[s - 1], perm[s] = perm[s], perm[s - 1]
        level_wire.append(tuple(perm))

    vertices = []
    for t, s in enumerate(swaps, start=1):
        a, b = level_wire[t - 1][s - 1], level_wire[t - 1][s]
        pair = (a, b) if a < b else (b, a)
        vertices.append(Vertex(t, pair, (rat(t), rat(2 * s + 1, 2))))
    vertices = tuple(vertices)

    # faces: cells (slab, gap) merged across steps away from the swap level
    parent = {}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for t in range(steps + 1):
        for g in range(n + 1):
            parent[(t, g)] = (t, g)
    for t, s in enumerate(swaps, start=1):
        for g in range(n + 1):
            if g != s:
                ra, rb = find((t - 1, g)), find((t, g))
                if ra != rb:
                    parent[ra] = rb

    groups = {}
    for t in range(steps + 1):
        for g in range(n + 1):
            groups.setdefault(find((t, g)), []).append((t, g))
    faces = {}
    cell_face = {}
    order = sorted(groups.values(), key=lambda cs: min(cs))
    for fid, cs in enumerate(order):
        slabs = [t for t, _ in cs]
        gaps = {g for _, g in cs}
        assert len(gaps) == 1
        faces[fid] = Face(fid, gaps.pop(), min(slabs), max(slabs))
        for c in cs:
            cell_face[c] = fid

    edges = {}
    for wire in range(1, n + 1):
        my_steps = [t for t, s in enumerate(swaps, start=1)
                    if wire in (level_wire[t - 1][s - 1], level_wire[t - 1][s])]
        bounds = [0] + my_steps + [steps + 1]
        for j in range(len(my_steps) + 1):
            lo, hi = bounds[j], bounds[j + 1] - 1
            lv = level_wire[lo].index(wire) + 1
            edges[(wire, j)] = Edge(wire, j, lo, hi,
                                    cell_face[(lo, lv)], cell_face[(lo, lv - 1)])

    dual = {fid: [] for fid in faces}
    for eid in sorted(edges):
        e = edges[eid]
        dual[e.above].append((eid, e.below))
        dual[e.below].append((eid, e.above))
    dual = {fid: tuple(adj) for fid, adj in dual.items()}

    drawings = {}
    for wire in range(1, n + 1):
        pts = [(rat(-1, 2), rat(level_wire[0].index(wire) + 1))]
        for t in range(steps + 1):
            pts.append((rat(2 * t + 1, 2), rat(level_wire[t].index(wire) + 1)))
        pts.append((rat(2 * steps + 3, 2), rat(level_wire[steps].index(wire) + 1)))
        drawings[wire] = Polyline(str(wire), compress_chain(pts))

    cells = ArrangementCells(w, level_wire, vertices, edges, faces, dual,
                             drawings)
    # compactified Euler relation: (V + 1) - E + F = 2
    if not (len(vertices) == comb(n, 2) and len(edges) == n * n
            and len(faces) == comb(n, 2) + n + 1):
        raise MalformedWiring("cell structure fails the Euler check")
    return cells


def k_zone(cells, p, k, side="upper"):
    """Edges reachable from line p by a curve making at most k
    intersections with the other lines, the arrival on the reached edge
    included; equivalently, edges with a face at crossing-distance at
    most k-1 from p. Crossings of p itself are free; p's own edges are
    not part of the zone.
    """
    p = int(p)
    if not 1 <= p <= cells.n:
        raise UnknownLine(f"no line {p}")
    if k < 1:
        raise KOutOfRange("k must be at least 1")
    if side not in ("upper", "lower", "both"):
        raise ValueError(f"side must be upper/lower/both, not {side!r}")

    dist = {fid: None for fid in cells.faces}
    dq = deque()
    seeds = set()
    for e in cells.edges_of_line(p):
        seeds.add(e.above)
        seeds.add(e.below)
    for f in sorted(seeds):
        dist[f] = 0
        dq.append(f)
    while dq:
        f = dq.popleft()
        for eid, g in cells.dual[f]:
            cost = 0 if eid[0] == p else 1
            nd = dist[f] + cost
            if dist[g] is None or nd < dist[g]:
                dist[g] = nd
                if cost == 0:
                    dq.appendleft(g)
                else:
                    dq.append(g)

    zone = []
    for eid in sorted(cells.edges):
        if eid[0] == p:
            continue
        sgn = cells.edge_side(eid, p)
        if side == "upper" and sgn <= 0:
            continue
        if side == "lower" and sgn >= 0:
            continue
        e = cells.edges[eid]
        if min(dist[e.above], dist[e.below]) <= k - 1:
            zone.append(eid)

    bound = 5 * 4 ** (k - 1) * (cells.n - 1)
    size = len(zone)
    limit = bound if side != "both" else 2 * bound
    ok = size == 0 or size < limit
    if not ok:
        raise BoundViolated(
            f"zone size {size} reaches the bound {limit} for side={side}")
    return ZoneResult(p, k, side, tuple(zone), size, bound, ok)


def enumerate_k_segments(cells, k):
    """All k-segments, a sequence and its reversal identified.

    Found as walks in the face-dual: crossing an edge moves to its other
    face, and the crossed edges must lie on pairwise distinct lines.
    """
    if not 1 <= k <= cells.n:
        raise KOutOfRange(f"k must be in 1..{cells.n}")
    out = set()

    def extend(seq, used, face):
        if len(seq) == k:
            rev = tuple(reversed(seq))
            out.add(seq if seq <= rev else rev)
            return
        for eid, other in cells.dual[face]:
            if eid[0] in used:
                continue
            extend(seq + (eid,), used | {eid[0]}, other)

    for eid in sorted(cells.edges):
        e = cells.edges[eid]
        extend((eid,), {eid[0]}, e.above)
        extend((eid,), {eid[0]}, e.below)
    return [KSegment(seq) for seq in sorted(out)]


def enumerate_cut_paths(cells):
    """All n-segments: k-segments crossing every line exactly once."""
    found = enumerate_k_segments(cells, cells.n)
    if len(found) > 3 ** cells.n:
        raise BoundViolated(
            f"{len(found)} cut-paths exceed 3^{cells.n}")
    return found


def random_wiring(n, seed):
    """A wiring built by uniform random admissible swaps; deterministic
    per (n, seed)."""
    if n < 1:
        raise InvalidSize("need n >= 1")
    rng = random.Random(seed)
    perm = list(range(1, n + 1))
    crossed = set()
    swaps = []
    need = comb(n, 2)
    while len(swaps) < need:
        admissible = []
        for lv in range(1, n):
            a, b = perm[lv - 1], perm[lv]
            key = (a, b) if a < b else (b, a)
            if key not in crossed:
                admissible.append(lv)
        lv = rng.choice(admissible)
        a, b = perm[lv - 1], perm[lv]
        key = (a, b) if a < b else (b, a)
        crossed.add(key)
        perm[lv - 1], perm[lv] = perm[lv], perm[lv - 1]
        swaps.append(lv)
    return WiringDiagram(n, tuple(swaps))


def zone_recurrence_table(n, kmax):
    """Rows of the zone-counting recurrence and its closed form.

    a_1 = 2(n-1); a_k = (n-1) + 3*sum_{j<k} a_j, which closes to
    7*4^(k-2)(n-1) for k >= 2. The per-ring bound is twice a_k and the
    cumulative zone bound is 5*4^(k-1)(n-1); every identity is checked
    and a failure raises BoundViolated.
    """
    if n < 2:
        raise InvalidSize("need n >= 2")
    if kmax < 1:
        raise InvalidSize("need kmax >= 1")
    m = n - 1
    rows = []
    acc = 0
    ring_cum = 0
    for k in range(1, kmax + 1):
        a = 2 * m if k == 1 else m + 3 * acc
        closed = None if k == 1 else 7 * 4 ** (k - 2) * m
        if closed is not None and a != closed:
            raise BoundViolated(f"recurrence {a} != closed form {closed} at k={k}")
        ring_bound = None if k == 1 else 14 * 4 ** (k - 2) * m
        if ring_bound is not None and ring_bound != 2 * a:
            raise BoundViolated("ring bound is not twice the one-sided count")
        zone_bound = 5 * 4 ** (k - 1) * m
        ring_cum += 2 * a
        if not ring_cum < zone_bound:
            raise BoundViolated(
                f"cumulative ring bounds {ring_cum} reach zone bound {zone_bound}")
        rows.append({"k": k, "a_k": a, "a_closed": closed,
                     "ring_bound": ring_bound, "zone_bound": zone_bound})
        acc += a
    return rows


def ksegment_bound_audit(n, k, count):
    """Check an enumerated k-segment count against 5k*12^(k-2)*n^2.

    Also reports the per-(edge, line) cap k*3^(k-2) and verifies that
    the bound constant stays below 12.5^k. Raises BoundViolated instead
    of ever passing silently.
    """
    if k < 2:
        raise KOutOfRange("the k-segment bound is stated for k >= 2")
    if n < 1:
        raise InvalidSize("need n >= 1")
    if count < 0:
        raise InvalidSize("count must be nonnegative")
    bound = 5 * k * 12 ** (k - 2) * n * n
    constant_ok = rat(5 * k * 12 ** (k - 2)) <= rat(25, 2) ** k
    if count >= bound:
        raise BoundViolated(f"{count} k-segments reach the bound {bound}")
    return {
        "n": n,
        "k": k,
        "count": count,
        "bound": bound,
        "margin": bound - count,
        "per_pair_cap": k * 3 ** (k - 2),
        "constant_ok": constant_ok,
        "pass": True,
    }


def _chain_faces(cells, eids, start_side):
    e0 = cells.edges[eids[0]]
    first = (e0.below, e0.above)[start_side]
    faces = [first, e0.above if first == e0.below else e0.below]
    for eid in eids[1:]:
        e = cells.edges[eid]
        if faces[-1] == e.above:
            faces.append(e.below)
        elif faces[-1] == e.below:
            faces.append(e.above)
        else:
            return None
    return faces


def _half_integer_cols(x_from, x_to):
    """Half-integer abscissas strictly between x_from and x_to, listed
    in travel order. The wire drawings only bend at half-integers, so a
    gap lane evaluated at these columns and at the travel endpoints can
    be linearly interpolated without ever leaving the gap."""
    if x_from == x_to:
        return []
    lo, hi = (x_from, x_to) if x_from < x_to else (x_to, x_from)
    c = rat(2 * floor(lo) + 1, 2)
    while c <= lo:
        c += 1
    cols = []
    while c < hi:
        cols.append(c)
        c += 1
    if x_to < x_from:
        cols.reverse()
    return cols


def ksegment_witness(cells, ks, *, lane=rat(1, 2), column_shift=rat(0)):
    """A concrete polyline crossing exactly the k-segment's edges in order.

    Hops over each edge happen at a quarter-column inside one of its
    slabs; between hops the curve follows the gap midline of the face it
    is in, so it never meets any other wire. lane and column_shift give
    parallel witnesses distinct tracks (lane in (0,1) positions the
    curve inside each gap; column_shift nudges hop columns) so several
    witnesses can be drawn together without overlapping.
    """
    eids = tuple(ks.edges)
    faces = _chain_faces(cells, eids, 0) or _chain_faces(cells, eids, 1)
    if faces is None:
        raise ValueError("edge sequence is not a dual walk")
    lane = rat(lane)
    if not 0 < lane < 1:
        raise ValueError("lane must be strictly between 0 and 1")
    column_shift = rat(column_shift)
    if not -rat(1, 4) < column_shift < rat(1, 4):
        raise ValueError("column_shift must stay within (-1/4, 1/4)")

    def mid(fid, x):
        gap = cells.faces[fid].gap
        ys = sorted(cells.wire_y(w, x) for w in range(1, cells.n + 1))
        ext = [rat(0)] + ys + [rat(cells.n + 1)]
        return ext[gap] + lane * (ext[gap + 1] - ext[gap])

    cols = []
    for eid in eids:
        e = cells.edges[eid]
        t = (e.slab_lo + e.slab_hi) // 2
        cols.append(rat(4 * t + 1, 4) + column_shift)

    pts = [(cols[0], mid(faces[0], cols[0]))]
    for i, eid in enumerate(eids):
        pts.append((cols[i], mid(faces[i + 1], cols[i])))
        if i + 1 < len(eids):
            for x in _half_integer_cols(cols[i], cols[i + 1]):
                pts.append((x, mid(faces[i + 1], x)))
            pts.append((cols[i + 1], mid(faces[i + 1], cols[i + 1])))
    name = "ks:" + "-".join(f"{a}:{b}" for a, b in eids)
    return Polyline(name, compress_chain(pts))
