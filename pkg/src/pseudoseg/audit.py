"""Counting audits for segment families carrying three-hit curves.

Two related pictures live here. In the first, a base family of n
pairwise-crossing pseudosegments is cut into n pieces each (n*n pieces
total), and extra curves that hit exactly three base curves are
classified by their middle hit. Contracting every piece to a point
turns the drawing into a planar graph on the pieces; its planarity is
what caps how many disjoint three-hit curves the base can host, and
the cap is what the triple-count threshold arithmetic feeds on.

In the second picture the base curves are disjoint vertical unit
"sticks" standing on the x-axis at integer positions. Three-hit curves
over sticks get a class (L/M/R, by where the middle hit sits among the
three stick positions) and a pattern of downward-ray crossing
parities. Closing an arc with a "bow" below all geometry turns parity
bookkeeping into statements about closed curves: two closed curves
cross an even number of times, so the crossing parity of two arcs
equals the summed parity of their arc/bow and bow/bow counts. The
parity lemma checker exercises exactly that congruence and the forced
odd crossings it implies.

Everything is exact; generators are deterministic per seed.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_left
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .errors import (BadCandidate, DegeneratePair, DuplicateTriple,
                     EmbeddingInconsistent, InvalidSize, MissingSegment,
                     NotAnArrangement, OverlappingSmallSegments,
                     UnresolvableDegeneracy)
from .geom import (Polyline, crossing_count, crossings_detailed,
                   general_position_check, is_simple, orient, ray_parity,
                   seg_point)
from .psifamily import PsiFamily
from .rational import rat
from .trees import SimpleGraph


def _cut_between(curve, pos_a, pos_b, new_id):
    """Sub-polyline of curve from position pos_a to pos_b.

    Positions are (edge index, parameter) pairs with pos_a < pos_b.
    """
    (ia, ta), (ib, tb) = pos_a, pos_b
    edges = curve.edges
    pts = [seg_point(*edges[ia], ta)]
    pts.extend(curve.points[v] for v in range(ia + 1, ib + 1))
    end = seg_point(*edges[ib], tb)
    if pts[-1] != end:
        pts.append(end)
    return Polyline(new_id, tuple(pts))


@dataclass(frozen=True)
class Piece:
    """One edge of a base curve in the arrangement the others induce."""

    id: str
    curve_id: str
    index: int
    points: tuple


@dataclass(frozen=True)
class PieceDecomposition:
    """Every base curve cut at its crossings with the other base curves."""

    base: PsiFamily
    pieces: tuple
    cuts: tuple

    @property
    def n(self):
        return len(self.base.curves)

    @property
    def piece_count(self):
        return sum(len(row) for row in self.pieces)

    @property
    def all_pieces(self):
        return tuple(p for row in self.pieces for p in row)

    @cached_property
    def _by_curve(self):
        return {c.id: (self.cuts[i], self.pieces[i])
                for i, c in enumerate(self.base.curves)}

    def pieces_for(self, curve_id):
        return self._by_curve[curve_id][1]

    def piece_at(self, curve_id, pos):
        """Piece of curve_id containing along-position pos, or None when
        pos lands exactly on a cut point."""
        cuts, row = self._by_curve[curve_id]
        i = bisect_left(cuts, pos)
        if i < len(cuts) and cuts[i] == pos:
            return None
        return row[i]


def decompose_pieces(base):
    """Cut each of n pairwise-crossing base curves into its n pieces.

    Raises NotAnArrangement when a pair is disjoint, crosses more than
    once, touches without crossing, or three curves run through one
    point; any of those breaks the n-pieces-per-curve count.
    """
    curves = base.curves
    n = len(curves)
    cut_lists = {c.id: [] for c in curves}
    for g, h in combinations(curves, 2):
        try:
            dets = crossings_detailed(g, h)
        except DegeneratePair as exc:
            raise NotAnArrangement(str(exc)) from exc
        if len(dets) != 1:
            raise NotAnArrangement(
                f"curves {g.id!r} and {h.id!r} cross {len(dets)} times "
                f"(need exactly 1)")
        (pg, ph, _pt) = dets[0]
        cut_lists[g.id].append(pg)
        cut_lists[h.id].append(ph)
    all_cuts = []
    all_rows = []
    for c in curves:
        cuts = sorted(cut_lists[c.id])
        for a, b in zip(cuts, cuts[1:]):
            if a == b:
                raise NotAnArrangement(
                    f"three curves meet in one point on {c.id!r}")
        last_edge = len(c.edges) - 1
        bounds = [(0, rat(0))] + cuts + [(last_edge, rat(1))]
        row = tuple(
            Piece(f"{c.id}:{k}", c.id, k,
                  _cut_between(c, bounds[k], bounds[k + 1],
                               f"{c.id}:{k}").points)
            for k in range(n))
        all_cuts.append(tuple(cuts))
        all_rows.append(row)
    decomp = PieceDecomposition(base, tuple(all_rows), tuple(all_cuts))
    assert decomp.piece_count == n * n
    return decomp


@dataclass(frozen=True)
class Hit:
    """One crossing of a three-hit curve with a base curve."""

    curve_id: str
    piece_id: str
    point: tuple
    pos: tuple
    base_pos: tuple


@dataclass(frozen=True)
class ThreeSegment:
    """A curve crossing exactly three distinct base curves once each.

    hits are ordered along the curve; the second one is the middle.
    """

    curve: Polyline
    hits: tuple

    @property
    def middle(self):
        return self.hits[1]

    @property
    def outer(self):
        return (self.hits[0], self.hits[2])

    @property
    def triple(self):
        return tuple(sorted(h.curve_id for h in self.hits))

    @property
    def arcs(self):
        """The two sub-arcs between consecutive hits, along the curve."""
        a = _cut_between(self.curve, self.hits[0].pos, self.hits[1].pos,
                         f"{self.curve.id}.1")
        b = _cut_between(self.curve, self.hits[1].pos, self.hits[2].pos,
                         f"{self.curve.id}.2")
        return (a, b)


def _hits_against(cand, base_curves, locate):
    """Sorted hit list of cand against base_curves; locate maps
    (curve, along-position) to a piece id or None for an unusable spot."""
    if not is_simple(cand):
        raise BadCandidate(f"candidate {cand.id!r} meets itself")
    raw = []
    for g in base_curves:
        dets = crossings_detailed(cand, g)
        if len(dets) > 1:
            raise BadCandidate(
                f"candidate {cand.id!r} crosses {g.id!r} {len(dets)} times")
        for pc, pg, pt in dets:
            pid = locate(g, pg)
            if pid is None:
                raise BadCandidate(
                    f"candidate {cand.id!r} crosses {g.id!r} at a point "
                    f"where base curves meet")
            raw.append(Hit(g.id, pid, pt, pc, pg))
    if len(raw) != 3:
        raise BadCandidate(
            f"candidate {cand.id!r} has {len(raw)} base hits (need 3)")
    raw.sort(key=lambda h: h.pos)
    return tuple(raw)


def classify_3segments(decomp, candidates):
    """Validate candidate curves as three-hit segments over the base.

    Each candidate must cross exactly three distinct base curves once
    each; candidates must be pairwise disjoint and use pairwise distinct
    curve triples. Hits come back ordered along the candidate with
    piece ids resolved.
    """
    def locate(g, pos):
        piece = decomp.piece_at(g.id, pos)
        return piece.id if piece else None

    segs = []
    for cand in candidates:
        segs.append(ThreeSegment(cand, _hits_against(
            cand, decomp.base.curves, locate)))
    for a, b in combinations(segs, 2):
        c = crossing_count(a.curve, b.curve)
        if c:
            raise OverlappingSmallSegments(
                f"segments {a.curve.id!r} and {b.curve.id!r} are not "
                f"disjoint ({c} crossings)")
    seen = {}
    for s in segs:
        if s.triple in seen:
            raise DuplicateTriple(
                f"segments {seen[s.triple]!r} and {s.curve.id!r} both use "
                f"curves {list(s.triple)}")
        seen[s.triple] = s.curve.id
    return segs


@dataclass(frozen=True)
class PieceGraph:
    """Graph on pieces, with the rotation system its drawing induces."""

    graph: SimpleGraph
    rotations: tuple
    genus: int
    multi_edge_count: int


def _germ_side(base_edge, cand_edge, forward):
    """Which side of the oriented base edge the curve germ leaves on."""
    a, b = base_edge
    target = cand_edge[1] if forward else cand_edge[0]
    s = orient(a, b, target)
    assert s != 0
    return 1 if s > 0 else -1


def build_piece_graph(decomp, segs):
    """Contract every piece to a point and take the three-hit curves'
    arcs as edges: middle piece to each outer piece.

    The cyclic edge order around a contracted piece is read off the
    drawing (right side of the piece by increasing position, then left
    side decreasing). Face tracing of that rotation system must give
    Euler genus 0 on every component, and the deduplicated edge count
    must fit the planar bound; either failing means the extraction is
    broken, not the input.
    """
    base_by_id = {c.id: c for c in decomp.base.curves}
    darts = []
    multi_edges = []
    for s in segs:
        for ha, hb, tag in ((s.hits[0], s.hits[1], "1"),
                            (s.hits[1], s.hits[2], "2")):
            em = len(multi_edges)
            multi_edges.append((ha.piece_id, hb.piece_id, s.curve.id, tag))
            for hit, other, fwd in ((ha, hb.piece_id, True),
                                    (hb, ha.piece_id, False)):
                side = _germ_side(base_by_id[hit.curve_id].edges[hit.base_pos[0]],
                                  s.curve.edges[hit.pos[0]], fwd)
                darts.append({"dart": 2 * em + (0 if fwd else 1),
                              "piece": hit.piece_id, "other": other,
                              "pos": hit.base_pos, "side": side,
                              "seg": s.curve.id, "tag": tag})
    by_piece = {}
    for d in darts:
        by_piece.setdefault(d["piece"], []).append(d)
    rotations = []
    rot_index = {}
    for pid in sorted(by_piece):
        ds = by_piece[pid]
        order = ([d for d in sorted(ds, key=lambda d: d["pos"])
                  if d["side"] < 0] +
                 [d for d in sorted(ds, key=lambda d: d["pos"], reverse=True)
                  if d["side"] > 0])
        for i, d in enumerate(order):
            rot_index[d["dart"]] = (pid, i)
        rotations.append((pid, tuple((d["seg"], d["tag"], d["other"])
                                     for d in order)))
        by_piece[pid] = order
    # face tracing: successor of a dart is the rotation-next of its twin
    seen = set()
    face_of = {}
    faces = 0
    for d in sorted(rot_index):
        if d in seen:
            continue
        cur = d
        while cur not in seen:
            seen.add(cur)
            face_of[cur] = faces
            pid, i = rot_index[cur ^ 1]
            row = by_piece[pid]
            cur = row[(i + 1) % len(row)]["dart"]
        if cur != d:
            raise EmbeddingInconsistent("face tracing did not close a cycle")
        faces += 1
    # Euler genus per connected component of the contracted drawing
    parent = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v, _s, _t in multi_edges:
        parent[find(u)] = find(v)
    comp_v = {}
    comp_e = {}
    comp_f = {}
    for v in list(parent):
        r = find(v)
        comp_v[r] = comp_v.get(r, 0) + 1
    for em, (u, v, _s, _t) in enumerate(multi_edges):
        r = find(u)
        comp_e[r] = comp_e.get(r, 0) + 1
        for dart in (2 * em, 2 * em + 1):
            comp_f.setdefault(r, set()).add(face_of[dart])
    genus = 0
    for r, ecount in comp_e.items():
        vcount = comp_v[r]
        fcount = len(comp_f[r])
        euler = vcount - ecount + fcount
        g2 = 2 - euler
        if g2 < 0 or g2 % 2:
            raise EmbeddingInconsistent(
                f"component has Euler count {euler}")
        genus = max(genus, g2 // 2)
    if genus != 0:
        raise EmbeddingInconsistent(f"rotation system has genus {genus}")
    piece_ids = [p.id for p in decomp.all_pieces]
    simple = sorted({(u, v) if u < v else (v, u)
                     for u, v, _s, _t in multi_edges})
    w = len(piece_ids)
    if w >= 3 and len(simple) > 3 * w - 6:
        raise EmbeddingInconsistent(
            f"{len(simple)} edges on {w} pieces exceeds the planar bound")
    return PieceGraph(SimpleGraph.from_edges(piece_ids, simple),
                      tuple(rotations), genus, len(multi_edges))


@dataclass(frozen=True)
class PieceRow:
    """Per-piece audit line."""

    piece: str
    middles: int
    degree: int
    bound_raw: int
    weak_ok: bool
    strong_bound: int
    strong_ok: bool


@dataclass(frozen=True)
class AuditReport:
    """Counting audit of a decomposition plus its three-hit segments."""

    n: int
    piece_count: int
    segment_count: int
    rows: tuple
    genus: int
    edge_count: int
    degree_sum: int
    total_bound: int
    total_ok: bool
    degree_sum_ok: bool

    @property
    def ok(self):
        return (self.genus == 0 and self.total_ok and self.degree_sum_ok
                and all(r.weak_ok for r in self.rows))

    @property
    def strong_flags(self):
        return tuple(r for r in self.rows if not r.strong_ok)

    def to_jsonable(self):
        return {
            "n": self.n,
            "piece_count": self.piece_count,
            "segment_count": self.segment_count,
            "genus": self.genus,
            "edge_count": self.edge_count,
            "degree_sum": self.degree_sum,
            "total_bound": self.total_bound,
            "total_ok": self.total_ok,
            "degree_sum_ok": self.degree_sum_ok,
            "ok": self.ok,
            "strong_flags": [r.piece for r in self.strong_flags],
            "rows": [{"piece": r.piece, "middles": r.middles,
                      "degree": r.degree, "bound_raw": r.bound_raw,
                      "weak_ok": r.weak_ok, "strong_bound": r.strong_bound,
                      "strong_ok": r.strong_ok} for r in self.rows],
        }

    def to_text(self):
        lines = [
            f"pieces={self.piece_count} segments={self.segment_count} "
            f"genus={self.genus} edges={self.edge_count}",
            f"total: {self.segment_count} < {self.total_bound}: "
            f"{'ok' if self.total_ok else 'FAIL'}",
            f"degree sum: {self.degree_sum} < {6 * self.piece_count}: "
            f"{'ok' if self.degree_sum_ok else 'FAIL'}",
        ]
        for r in self.rows:
            if r.middles == 0 and r.degree == 0:
                continue
            note = "" if r.strong_ok else " strong-bound-flag"
            lines.append(
                f"  {r.piece}: middles={r.middles} degree={r.degree} "
                f"bound={max(r.bound_raw, 1)} "
                f"{'ok' if r.weak_ok else 'FAIL'}{note}")
        lines.append("verdict: " + ("pass" if self.ok else "fail"))
        return lines


def audit_counts(decomp, segs):
    """Check every counting bound the contracted drawing must satisfy.

    Weak per-piece bound: the number of segments whose middle lies on a
    piece is at most max(3*degree - 6, 1); total bound: fewer than
    5*n*n segments overall. The stronger degree - 1 per-piece bound is
    only flagged, never failed, since its justification lives outside
    this package's own argument. Findings are data, not exceptions.
    """
    pg = build_piece_graph(decomp, segs)
    middles = {}
    for s in segs:
        middles[s.middle.piece_id] = middles.get(s.middle.piece_id, 0) + 1
    rows = []
    degree_sum = 0
    for piece in decomp.all_pieces:
        d = pg.graph.degree(piece.id)
        m = middles.get(piece.id, 0)
        degree_sum += d
        raw = 3 * d - 6
        rows.append(PieceRow(piece.id, m, d, raw,
                             m <= max(raw, 1), d - 1,
                             m <= max(d - 1, 0)))
    n = decomp.n
    w = decomp.piece_count
    return AuditReport(n, w, len(segs), tuple(rows), pg.genus,
                       pg.graph.edge_count, degree_sum,
                       5 * n * n, len(segs) < 5 * n * n,
                       degree_sum < 6 * w)


def threshold_n():
    """Least n for which the number of triples beats the hosting cap:
    C(n,3) > 5*n*n."""
    n = 3
    while math.comb(n, 3) <= 5 * n * n:
        n += 1
    return n


def weak_threshold_n():
    """Least n with C(n,3) > 12*n*n, the cap the per-piece degree bound
    alone gives (sum of 3d-6 over pieces stays below 12*n*n)."""
    n = 3
    while math.comb(n, 3) <= 12 * n * n:
        n += 1
    return n


@dataclass(frozen=True)
class ThresholdReport:
    """Threshold values with their witness inequalities."""

    strict_n: int
    weak_n: int

    def to_jsonable(self):
        s, w = self.strict_n, self.weak_n
        return {
            "threshold": s,
            "triples": math.comb(s, 3),
            "bound": 5 * s * s,
            "below_triples": math.comb(s - 1, 3),
            "below_bound": 5 * (s - 1) * (s - 1),
            "weak_threshold": w,
            "weak_triples": math.comb(w, 3),
            "weak_bound": 12 * w * w,
        }

    def to_text(self):
        s, w = self.strict_n, self.weak_n
        return [
            f"threshold: {s}",
            f"C({s},3) = {math.comb(s, 3)} > {5 * s * s} = 5*{s}^2",
            f"C({s - 1},3) = {math.comb(s - 1, 3)} <= "
            f"{5 * (s - 1) ** 2} = 5*{s - 1}^2",
            f"weak threshold: {w}",
            f"C({w},3) = {math.comb(w, 3)} > {12 * w * w} = 12*{w}^2",
        ]


def threshold_report():
    return ThresholdReport(threshold_n(), weak_threshold_n())


@dataclass(frozen=True)
class Pattern:
    """Class of a three-hit curve over sticks plus its eight ray-parity
    bits at four probe positions (first arc's four, then second arc's)."""

    klass: str
    bits: tuple

    def __post_init__(self):
        if self.klass not in ("L", "M", "R"):
            raise InvalidSize(f"bad class {self.klass!r}")
        if len(self.bits) != 8 or any(b not in (0, 1) for b in self.bits):
            raise InvalidSize("pattern needs eight 0/1 bits")


def _stick(i):
    return Polyline(str(i), ((rat(i), rat(0)), (rat(i), rat(1))))


@dataclass(frozen=True)
class StickConfig:
    """Disjoint vertical unit sticks at x = 1..n with three-hit curves.

    Unlike the piece picture, the curves here may cross each other; the
    parity machinery is about forcing some of those crossings.
    """

    n: int
    sticks: tuple
    segments: tuple

    @cached_property
    def _by_triple(self):
        return {s.triple: s for s in self.segments}

    def segment_for(self, triple):
        key = tuple(sorted(str(t) for t in triple))
        s = self._by_triple.get(key)
        if s is None:
            raise MissingSegment(f"no segment on sticks {list(key)}")
        return s

    @cached_property
    def floor_y(self):
        ys = [rat(0)]
        ys.extend(s.curve.bbox[1] for s in self.segments)
        return min(ys)


def make_stick_config(n, curves):
    """Wrap curves as three-hit segments over n sticks, validating the
    hit structure, per-curve simplicity, and clean pairwise contacts."""
    if n < 3:
        raise InvalidSize("need at least 3 sticks")
    sticks = tuple(_stick(i) for i in range(1, n + 1))
    segs = []
    for cand in curves:
        hits = _hits_against(cand, sticks, lambda g, pos: g.id)
        segs.append(ThreeSegment(cand, hits))
    seen = {}
    for s in segs:
        if s.triple in seen:
            raise DuplicateTriple(
                f"segments {seen[s.triple]!r} and {s.curve.id!r} both use "
                f"sticks {list(s.triple)}")
        seen[s.triple] = s.curve.id
    for a, b in combinations(segs, 2):
        crossings_detailed(a.curve, b.curve)
    return StickConfig(n, sticks, tuple(segs))


def stick_class(seg):
    """L, M, or R: is the middle hit's stick the leftmost, middle, or
    rightmost of the three."""
    order = sorted(int(h.curve_id) for h in seg.hits)
    mid = int(seg.middle.curve_id)
    return "LMR"[order.index(mid)]


def arc_with_ends(seg, a, b):
    """The arc of seg whose endpoints lie on sticks a and b."""
    want = {str(a), str(b)}
    for lo, hi, tag in ((0, 1, "1"), (1, 2, "2")):
        if {seg.hits[lo].curve_id, seg.hits[hi].curve_id} == want:
            return _cut_between(seg.curve, seg.hits[lo].pos,
                                seg.hits[hi].pos,
                                f"{seg.curve.id}.{tag}")
    raise MissingSegment(
        f"segment {seg.curve.id!r} has no arc between sticks {a} and {b}")


def stick_pattern(cfg, seven):
    """Class and ray-parity bits for the segment induced by a 7-tuple.

    Positions 2, 4, 6 of the strictly increasing tuple name the
    segment's sticks; positions 1, 3, 5, 7 are the probe sticks. The
    first arc joins the middle stick to the outer stick further left,
    the second to the one further right; each contributes four bits of
    downward-ray parity at the probes.
    """
    seven = tuple(int(v) for v in seven)
    if len(seven) != 7 or any(a >= b for a, b in zip(seven, seven[1:])):
        raise InvalidSize("need a strictly increasing 7-tuple")
    if seven[0] < 1 or seven[-1] > cfg.n:
        raise InvalidSize("probe positions outside the stick range")
    i, j, k = seven[1], seven[3], seven[5]
    probes = (seven[0], seven[2], seven[4], seven[6])
    seg = cfg.segment_for((i, j, k))
    mid = int(seg.middle.curve_id)
    outs = sorted(v for v in (i, j, k) if v != mid)
    first = arc_with_ends(seg, mid, outs[0])
    second = arc_with_ends(seg, mid, outs[1])
    bits = tuple(ray_parity(arc, rat(x), rat(0))
                 for arc in (first, second) for x in probes)
    return Pattern(stick_class(seg), bits)


def bow_polyline(arc, depth):
    """Open three-edge bow closing the arc from below: down from the
    arc's last point, across at depth, up to the arc's first point."""
    first, last = arc.points[0], arc.points[-1]
    return Polyline(f"{arc.id}~bow",
                    (last, (last[0], depth), (first[0], depth), first))


def closed_with_bow(arc, depth):
    """The arc and its bow as one closed curve."""
    first, last = arc.points[0], arc.points[-1]
    return Polyline(f"{arc.id}~closed",
                    arc.points + ((last[0], depth), (first[0], depth)),
                    closed=True)


def fact_b_terms(arc1, arc2, floor=None):
    """Crossing counts (arc/arc, arc/bow, bow/arc, bow/bow) with the
    bows nested at depth floor-1 and floor-2.

    The four counts must sum to an even number: joining each arc with
    its bow gives two closed curves, and closed curves cross evenly.
    """
    if floor is None:
        floor = min(arc1.bbox[1], arc2.bbox[1])
    b1 = bow_polyline(arc1, floor - 1)
    b2 = bow_polyline(arc2, floor - 2)
    return (crossing_count(arc1, arc2), crossing_count(arc1, b2),
            crossing_count(b1, arc2), crossing_count(b1, b2))


def _lemma_instances(i, j, k, c1, x, y, z, c2):
    """Applicable parity lemmas for ordered segment roles (i,j,k) of
    class c1 against (x,y,z) of class c2.

    Yields (name, first-arc stick pair, second-arc stick pair,
    bow-crossing parity for that index pattern).
    """
    if c1 in "LM" and c2 in "LM":
        if i < x < j < y < k:
            yield ("alt", (i, j), (x, y), 1)
        if x < i and j < y < k:
            yield ("non-alt", (i, j), (x, y), 0)
    if c1 == "M" and c2 == "M":
        if x < j < y < k < z:
            yield ("alt2", (j, k), (y, z), 1)
        if x < j < y and z < k:
            yield ("non-alt2", (j, k), (y, z), 0)
    if c1 == "L" and c2 == "L":
        if i < x < j and x < y < k < z:
            yield ("alt3", (i, k), (x, z), 1)
        if i < x < j and x < y < z < k and j < z:
            yield ("alt4", (i, k), (x, z), 0)


@dataclass(frozen=True)
class LemmaCheck:
    """One applicable lemma instance, fully evaluated.

    ray_sum collects the four downward-ray parities at the probe
    positions the bow argument uses; with the bow/bow parity it decides
    the hypothesis. parity_ok asserts the arcs' crossing count has
    exactly the predicted parity, factb_ok the four-term congruence on
    literally constructed bows, terms_ok that each bow term's parity
    matches the ray bookkeeping.
    """

    lemma: str
    first: str
    second: str
    arc_first: str
    arc_second: str
    ray_sum: int
    bow_parity: int
    hypothesis: bool
    crossings: int
    parity_ok: bool
    factb_ok: bool
    terms_ok: bool

    @property
    def ok(self):
        return self.parity_ok and self.factb_ok and self.terms_ok

    def to_jsonable(self):
        return {"lemma": self.lemma, "first": self.first,
                "second": self.second, "hypothesis": self.hypothesis,
                "crossings": self.crossings, "ok": self.ok}


@dataclass(frozen=True)
class ParityReport:
    """Every applicable lemma instance over a stick configuration."""

    pairs: int
    checks: tuple

    @property
    def failures(self):
        return tuple(c for c in self.checks if not c.ok)

    @property
    def asserted(self):
        return tuple(c for c in self.checks if c.hypothesis)

    @property
    def ok(self):
        return not self.failures

    def to_jsonable(self):
        return {"pairs": self.pairs, "applicable": len(self.checks),
                "asserted": len(self.asserted),
                "failures": [c.to_jsonable() for c in self.failures],
                "ok": self.ok}


def check_parity_lemmas(cfg):
    """Evaluate every applicable parity lemma on every segment pair.

    For each instance the hypothesis is decided from exact downward-ray
    parities plus the index pattern's bow/bow parity; the conclusion is
    the parity of the two arcs' actual crossing count. Fact B is also
    verified outright on constructed bows. Any mismatch lands in the
    report as a failure; none can occur unless the geometry code is
    wrong, so callers treat failures as hard errors.
    """
    checks = []
    pairs = 0
    for s, t in combinations(cfg.segments, 2):
        pairs += 1
        for a, b in ((s, t), (t, s)):
            i, j, k = sorted(int(h.curve_id) for h in a.hits)
            x, y, z = sorted(int(h.curve_id) for h in b.hits)
            ca, cb = stick_class(a), stick_class(b)
            for name, ends1, ends2, bow in _lemma_instances(
                    i, j, k, ca, x, y, z, cb):
                arc1 = arc_with_ends(a, *ends1)
                arc2 = arc_with_ends(b, *ends2)
                r1 = sum(ray_parity(arc1, rat(p), rat(0)) for p in ends2)
                r2 = sum(ray_parity(arc2, rat(p), rat(0)) for p in ends1)
                t_gg, t_gb, t_bg, t_bb = fact_b_terms(
                    arc1, arc2, cfg.floor_y)
                hyp = (r1 + r2 + bow) % 2 == 1
                checks.append(LemmaCheck(
                    name, a.curve.id, b.curve.id, arc1.id, arc2.id,
                    r1 + r2, bow, hyp, t_gg,
                    t_gg % 2 == (1 if hyp else 0),
                    (t_gg + t_gb + t_bg + t_bb) % 2 == 0,
                    t_gb % 2 == r1 % 2 and t_bg % 2 == r2 % 2
                    and t_bb % 2 == bow))
    return ParityReport(pairs, tuple(checks))


def _rng_rat(rng, lo, hi, den=2048):
    """Uniform rational in [lo, hi) on a 1/den grid."""
    lo, hi = rat(lo), rat(hi)
    steps = int((hi - lo) * den)
    return lo + rat(rng.randrange(steps), den)


def random_base_arrangement(n, seed):
    """n straight segments in convex position, pairwise crossing: long
    chords between 2n points on a circle, resampled until the crossings
    are in general position."""
    if n < 1:
        raise InvalidSize("need at least one curve")
    rng = random.Random(seed)
    while True:
        ts = set()
        while len(ts) < 2 * n:
            ts.add(_rng_rat(rng, -4, 4))
        ts = sorted(ts)
        pts = [((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)) for t in ts]
        curves = tuple(Polyline(str(i + 1), (pts[i], pts[i + n]))
                       for i in range(n))
        if general_position_check(curves).ok:
            return PsiFamily(curves)


def _line_hits(q, r, curves):
    """Crossings of the line through q and r with straight base curves,
    as (parameter along the line, curve id); None when degenerate."""
    d = (r[0] - q[0], r[1] - q[1])
    hits = []
    for c in curves:
        a, b = c.points[0], c.points[-1]
        e = (b[0] - a[0], b[1] - a[1])
        den = d[0] * e[1] - d[1] * e[0]
        side_a = orient(q, r, a)
        side_b = orient(q, r, b)
        if side_a == 0 or side_b == 0:
            return None
        if den == 0 or (side_a > 0) == (side_b > 0):
            continue
        u = rat(side_a) / (side_a - side_b)
        pt = (a[0] + u * e[0], a[1] + u * e[1])
        s = ((pt[0] - q[0]) * d[0] + (pt[1] - q[1]) * d[1]) / \
            (d[0] * d[0] + d[1] * d[1])
        hits.append((s, c.id, pt))
    hits.sort(key=lambda h: h[0])
    for u, v in zip(hits, hits[1:]):
        if u[0] == v[0]:
            return None
    return hits


def random_threaded_segments(decomp, count, seed):
    """count pairwise-disjoint straight three-hit candidates with
    distinct triples: each is a random line clipped around three
    consecutive base crossings, rejection-sampled until clean."""
    rng = random.Random(seed)
    curves = decomp.base.curves
    out = []
    triples = set()
    for attempt in range(400 * max(count, 1)):
        if len(out) >= count:
            break
        q = (_rng_rat(rng, -1, 1), _rng_rat(rng, -1, 1))
        r = (_rng_rat(rng, -1, 1), _rng_rat(rng, -1, 1))
        if q == r:
            continue
        hits = _line_hits(q, r, curves)
        if hits is None or len(hits) < 3:
            continue
        w = rng.randrange(len(hits) - 2)
        window = hits[w:w + 3]
        triple = tuple(sorted(h[1] for h in window))
        if triple in triples:
            continue
        s0, s2 = window[0][0], window[2][0]
        lo = (hits[w - 1][0] + s0) / 2 if w > 0 else s0 - (window[1][0] - s0) / 2
        hi = (hits[w + 3][0] + s2) / 2 if w + 3 < len(hits) \
            else s2 + (s2 - window[1][0]) / 2
        d = (r[0] - q[0], r[1] - q[1])
        cand = Polyline(f"t{len(out) + 1}",
                        ((q[0] + lo * d[0], q[1] + lo * d[1]),
                         (q[0] + hi * d[0], q[1] + hi * d[1])))
        try:
            if any(crossing_count(cand, prev) for prev in out):
                continue
        except DegeneratePair:
            continue
        out.append(cand)
        triples.add(triple)
    if len(out) < count:
        raise UnresolvableDegeneracy(
            f"only threaded {len(out)} of {count} candidates")
    return out


def _random_stick_curve(rng, n, cid, triple):
    """One simple curve crossing exactly the three sticks of triple,
    once each, in a random traversal order."""
    route = list(triple)
    rng.shuffle(route)
    s1, s2, s3 = route
    h1, h2, h3 = rat(0), rat(0), rat(0)
    while len({h1, h2, h3}) < 3:
        h1 = _rng_rat(rng, rat(1, 16), rat(15, 16))
        h2 = _rng_rat(rng, rat(1, 16), rat(15, 16))
        h3 = _rng_rat(rng, rat(1, 16), rat(15, 16))
    # reach < 1/2 keeps this curve's pieces x-disjoint except at corners
    reach = _rng_rat(rng, rat(1, 16), rat(7, 16))
    d_low = _rng_rat(rng, rat(1, 8), rat(7, 8))
    d_low2 = _rng_rat(rng, rat(1, 8), rat(7, 8))
    d_high = 1 + _rng_rat(rng, rat(1, 8), rat(7, 8))
    g1 = 1 if s2 > s1 else -1
    pts = [(s1 - g1 * reach, h1), (s1 + g1 * reach, h1),
           (s1 + g1 * reach, -d_low), (s2 - g1 * reach, -d_low),
           (s2 - g1 * reach, h2), (s2 + g1 * reach, h2)]
    if (s3 > s2) == (s2 > s1):
        pts += [(s2 + g1 * reach, -d_low2), (s3 - g1 * reach, -d_low2),
                (s3 - g1 * reach, h3), (s3 + g1 * reach, h3)]
    else:
        pts += [(s2 + g1 * reach, d_high), (s3 + g1 * reach, d_high),
                (s3 + g1 * reach, h3), (s3 - g1 * reach, h3)]
    return Polyline(cid, tuple(pts))


def random_stick_config(n, count, seed):
    """Stick configuration with count random three-hit curves on
    distinct triples; pairwise contacts are resampled until clean."""
    if count > math.comb(n, 3):
        raise InvalidSize(f"only {math.comb(n, 3)} triples on {n} sticks")
    rng = random.Random(seed)
    curves = []
    triples = set()
    sticks = [_stick(i) for i in range(1, n + 1)]
    for idx in range(count):
        for attempt in range(80):
            triple = tuple(sorted(rng.sample(range(1, n + 1), 3)))
            if triple in triples:
                continue
            cand = _random_stick_curve(rng, n, f"t{idx + 1}", triple)
            try:
                if any(len(crossings_detailed(cand, st)) !=
                       (1 if int(st.id) in triple else 0) for st in sticks):
                    continue
                for prev in curves:
                    crossings_detailed(cand, prev)
            except DegeneratePair:
                continue
            curves.append(cand)
            triples.add(triple)
            break
        else:
            raise UnresolvableDegeneracy(
                f"could not place segment {idx + 1} of {count}")
    return make_stick_config(n, curves)


def _random_polyline(rng, cid, k, closed):
    while True:
        pts = []
        while len(pts) < k:
            p = (_rng_rat(rng, -4, 4, 512), _rng_rat(rng, -4, 4, 512))
            if not pts or p != pts[-1]:
                pts.append(p)
        try:
            return Polyline(cid, tuple(pts), closed=closed)
        except ValueError:
            continue


def random_closed_pair(seed):
    """Two random closed polylines with clean mutual contacts; they may
    self-intersect, which the even-crossing rule does not mind."""
    rng = random.Random(seed)
    while True:
        g = _random_polyline(rng, "A", rng.randrange(4, 9), True)
        h = _random_polyline(rng, "B", rng.randrange(4, 9), True)
        try:
            crossings_detailed(g, h)
        except DegeneratePair:
            continue
        return g, h


def random_arc_pair(seed):
    """Two random open arcs ready for fact_b_terms: distinct endpoint
    x-coordinates and clean contacts between all four arc/bow parts."""
    rng = random.Random(seed)
    while True:
        g = _random_polyline(rng, "A", rng.randrange(3, 7), False)
        h = _random_polyline(rng, "B", rng.randrange(3, 7), False)
        xs = {g.points[0][0], g.points[-1][0],
              h.points[0][0], h.points[-1][0]}
        if len(xs) < 4:
            continue
        try:
            fact_b_terms(g, h)
        except DegeneratePair:
            continue
        return g, h
