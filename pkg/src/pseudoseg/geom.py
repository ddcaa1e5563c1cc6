"""Exact planar geometry on rational coordinates.

Every predicate here is decided with exact rational arithmetic; there is
no epsilon anywhere. Contacts that cannot be classified as clean
transversal crossings either raise a typed error or come back as
findings, depending on whether the caller asked a question ("how many
crossings") or requested a scan ("what is wrong with this family").
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import DegeneratePair, DegenerateRay
from .rational import rat

Pt = tuple


def vadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def vsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def vscale(a, s):
    return (a[0] * s, a[1] * s)


def vdot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def vcross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def orient(a, b, c):
    """Twice the signed area of triangle (a, b, c); positive for a left turn."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def seg_point(p, q, t):
    t = rat(t)
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def midpoint(p, q):
    return seg_point(p, q, rat(1, 2))


def _on_seg(p, q, r):
    # assumes r is collinear with the line through p and q
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def seg_contact(a1, a2, b1, b2):
    """Classify how two closed segments meet: 'none', 'proper' or 'degenerate'.

    'proper' means a transversal crossing interior to both segments;
    every other nonempty intersection (endpoint touch, collinear overlap)
    is 'degenerate'.
    """
    d1 = orient(b1, b2, a1)
    d2 = orient(b1, b2, a2)
    d3 = orient(a1, a2, b1)
    d4 = orient(a1, a2, b2)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return "proper"
    if d1 == 0 and _on_seg(b1, b2, a1):
        return "degenerate"
    if d2 == 0 and _on_seg(b1, b2, a2):
        return "degenerate"
    if d3 == 0 and _on_seg(a1, a2, b1):
        return "degenerate"
    if d4 == 0 and _on_seg(a1, a2, b2):
        return "degenerate"
    return "none"


def seg_cross(a1, a2, b1, b2):
    """Crossing point of two segments, or None.

    Only transversal crossings interior to both segments count; touching
    configurations and overlaps return None.
    """
    d1 = orient(b1, b2, a1)
    d2 = orient(b1, b2, a2)
    if d1 * d2 >= 0:
        return None
    d3 = orient(a1, a2, b1)
    d4 = orient(a1, a2, b2)
    if d3 * d4 >= 0:
        return None
    t = rat(d1) / (d1 - d2)
    return seg_point(a1, a2, t)


def line_cross(p1, q1, p2, q2):
    """Intersection of the infinite lines through (p1,q1) and (p2,q2); None if parallel."""
    u = vsub(q1, p1)
    v = vsub(q2, p2)
    den = vcross(u, v)
    if den == 0:
        return None
    t = rat(vcross(vsub(p2, p1), v)) / den
    return vadd(p1, vscale(u, t))


@dataclass(frozen=True)
class Polyline:
    """A curve drawn as straight edges between consecutive points.

    Open curves need at least two points; closed ones need three and get
    an extra edge from the last point back to the first. Coordinates are
    normalized to exact rationals on construction.
    """

    id: str
    points: tuple
    closed: bool = False

    def __post_init__(self):
        pts = tuple((rat(x), rat(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        need = 3 if self.closed else 2
        if len(pts) < need:
            raise ValueError(f"curve {self.id!r}: needs at least {need} points")
        run = pts + (pts[0],) if self.closed else pts
        for a, b in zip(run, run[1:]):
            if a == b:
                raise ValueError(f"curve {self.id!r}: repeated consecutive point {a}")

    @cached_property
    def edges(self):
        pts = self.points
        es = list(zip(pts, pts[1:]))
        if self.closed:
            es.append((pts[-1], pts[0]))
        return tuple(es)

    @cached_property
    def bbox(self):
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return (min(xs), min(ys), max(xs), max(ys))

    @property
    def endpoints(self):
        if self.closed:
            return ()
        return (self.points[0], self.points[-1])

    @property
    def interior_vertices(self):
        if self.closed:
            return self.points
        return self.points[1:-1]


def _bbox_apart(b1, b2):
    return b1[2] < b2[0] or b2[2] < b1[0] or b1[3] < b2[1] or b2[3] < b1[1]


def _edges_bbox_apart(p1, q1, p2, q2):
    return (max(p1[0], q1[0]) < min(p2[0], q2[0])
            or max(p2[0], q2[0]) < min(p1[0], q1[0])
            or max(p1[1], q1[1]) < min(p2[1], q2[1])
            or max(p2[1], q2[1]) < min(p1[1], q1[1]))


def crossings_detailed(g, h):
    """All proper crossings between two distinct curves.

    Returns a list of ((i, t), (j, u), point) entries: edge index and
    rational parameter along each curve at the crossing, in arbitrary
    order. Raises DegeneratePair on any contact that is not a transversal
    crossing of two edge interiors.
    """
    out = []
    if _bbox_apart(g.bbox, h.bbox):
        return out
    for i, (p1, q1) in enumerate(g.edges):
        for j, (p2, q2) in enumerate(h.edges):
            if _edges_bbox_apart(p1, q1, p2, q2):
                continue
            kind = seg_contact(p1, q1, p2, q2)
            if kind == "none":
                continue
            if kind == "degenerate":
                raise DegeneratePair(
                    f"curves {g.id!r} and {h.id!r} touch without crossing cleanly")
            d1 = orient(p2, q2, p1)
            d2 = orient(p2, q2, q1)
            t = rat(d1) / (d1 - d2)
            d3 = orient(p1, q1, p2)
            d4 = orient(p1, q1, q2)
            u = rat(d3) / (d3 - d4)
            out.append(((i, t), (j, u), seg_point(p1, q1, t)))
    return out


def crossing_count(g, h):
    """Number of transversal crossings between two distinct curves."""
    return len(crossings_detailed(g, h))


def crossing_points(g, h):
    """Crossing points between two distinct curves, in arbitrary order."""
    return [pt for _, _, pt in crossings_detailed(g, h)]


def is_simple(g):
    """True when the curve never meets itself beyond shared edge endpoints."""
    es = g.edges
    n = len(es)
    for i in range(n):
        for j in range(i + 1, n):
            p1, q1 = es[i]
            p2, q2 = es[j]
            if j == i + 1 or (g.closed and i == 0 and j == n - 1):
                # shared vertex v; the edges may not fold back over each other
                if j == i + 1:
                    v, a, b = q1, p1, q2
                else:
                    v, a, b = p1, q1, p2
                if orient(v, a, b) == 0 and vdot(vsub(a, v), vsub(b, v)) > 0:
                    return False
                continue
            if seg_contact(p1, q1, p2, q2) != "none":
                return False
    return True


def downward_ray_hits(g, x, y0):
    """How many edges of g the downward vertical ray from (x, y0) meets.

    Raises DegenerateRay whenever the count would depend on a
    perturbation: a vertex of g on the ray or at its origin, an edge
    through the origin, or an edge lying along the ray below the origin.
    """
    x = rat(x)
    y0 = rat(y0)
    hits = 0
    for p, q in g.edges:
        if p[0] == q[0]:
            if p[0] != x:
                continue
            if min(p[1], q[1]) <= y0:
                raise DegenerateRay(
                    f"curve {g.id!r}: vertical edge along the probe ray at x={x}")
            continue
        if p[0] == x or q[0] == x:
            v = p if p[0] == x else q
            if v[1] <= y0:
                raise DegenerateRay(
                    f"curve {g.id!r}: vertex on the probe ray at x={x}")
            continue
        if (p[0] < x < q[0]) or (q[0] < x < p[0]):
            y_at = p[1] + (x - p[0]) * rat(q[1] - p[1]) / (q[0] - p[0])
            if y_at == y0:
                raise DegenerateRay(
                    f"curve {g.id!r}: edge through the probe point ({x}, {y0})")
            if y_at < y0:
                hits += 1
    return hits


def ray_parity(g, x, y0):
    """Parity of downward_ray_hits; the basic point-vs-curve side probe."""
    return downward_ray_hits(g, x, y0) & 1


TANGENCY = "tangency"
ENDPOINT_ON_CURVE = "endpoint-on-curve"
TRIPLE_POINT = "triple-point"
OVERLAPPING_EDGES = "overlapping-edges"


@dataclass(frozen=True)
class GPFinding:
    kind: str
    ids: tuple
    point: tuple


@dataclass(frozen=True)
class GeneralPositionReport:
    ok: bool
    violations: tuple

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)


def general_position_check(curves):
    """Scan a family for contacts that break general position.

    Findings cover: a curve endpoint lying on another curve
    (endpoint-on-curve), an interior vertex of one curve lying on another
    (tangency), two collinear edges of different curves sharing more than
    a point (overlapping-edges), and three or more curves through one
    point (triple-point). Self-intersection of a single curve is
    is_simple's job, not this one's.

    Returns a GeneralPositionReport whose violations are deterministically
    ordered; ok is true exactly when there are none.
    """
    findings = set()
    curves = list(curves)
    for g in curves:
        for h in curves:
            if g is h or _bbox_apart(g.bbox, h.bbox):
                continue
            for v in g.endpoints:
                if _point_on_curve(v, h):
                    findings.add(GPFinding(ENDPOINT_ON_CURVE, (g.id, h.id), v))
            for v in g.interior_vertices:
                if _point_on_curve(v, h):
                    findings.add(GPFinding(TANGENCY, (g.id, h.id), v))
    by_point = {}
    for a in range(len(curves)):
        for b in range(a + 1, len(curves)):
            g, h = curves[a], curves[b]
            if _bbox_apart(g.bbox, h.bbox):
                continue
            for p1, q1 in g.edges:
                for p2, q2 in h.edges:
                    if _edges_bbox_apart(p1, q1, p2, q2):
                        continue
                    ov = _collinear_overlap(p1, q1, p2, q2)
                    if ov is not None:
                        findings.add(GPFinding(OVERLAPPING_EDGES,
                                               tuple(sorted((g.id, h.id))), ov))
                    pt = seg_cross(p1, q1, p2, q2)
                    if pt is not None:
                        by_point.setdefault(pt, set()).update((g.id, h.id))
    for pt, ids in by_point.items():
        if len(ids) >= 3:
            findings.add(GPFinding(TRIPLE_POINT, tuple(sorted(ids)), pt))
    ordered = tuple(sorted(findings, key=lambda f: (f.kind, f.ids, f.point)))
    return GeneralPositionReport(ok=not ordered, violations=ordered)


def _point_on_curve(v, h):
    x, y = v
    bb = h.bbox
    if x < bb[0] or x > bb[2] or y < bb[1] or y > bb[3]:
        return False
    for p, q in h.edges:
        if not _on_seg(p, q, v):
            continue
        if orient(p, q, v) == 0:
            return True
    return False


def _collinear_overlap(p1, q1, p2, q2):
    """Midpoint of the shared stretch when two edges overlap along a line."""
    if orient(p1, q1, p2) != 0 or orient(p1, q1, q2) != 0:
        return None
    u = vsub(q1, p1)
    uu = vdot(u, u)
    ta = rat(vdot(vsub(p2, p1), u)) / uu
    tb = rat(vdot(vsub(q2, p1), u)) / uu
    lo = max(min(ta, tb), rat(0))
    hi = min(max(ta, tb), rat(1))
    if lo >= hi:
        return None
    return seg_point(p1, q1, (lo + hi) / 2)


def d2_pp(a, b):
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return dx * dx + dy * dy


def d2_ps(a, p, q):
    """Squared distance from point a to segment [p, q]."""
    v = vsub(q, p)
    vv = vdot(v, v)
    if vv == 0:
        return d2_pp(a, p)
    t = rat(vdot(vsub(a, p), v)) / vv
    if t <= 0:
        return d2_pp(a, p)
    if t >= 1:
        return d2_pp(a, q)
    return d2_pp(a, vadd(p, vscale(v, t)))


def d2_ss(p1, q1, p2, q2):
    """Squared distance between two closed segments (0 when they meet)."""
    if seg_contact(p1, q1, p2, q2) != "none":
        return rat(0)
    return min(d2_ps(p1, p2, q2), d2_ps(q1, p2, q2),
               d2_ps(p2, p1, q1), d2_ps(q2, p1, q1))


def d2_point_poly(a, g):
    return min(d2_ps(a, p, q) for p, q in g.edges)


def d2_poly_poly(g, h):
    best = None
    for p1, q1 in g.edges:
        for p2, q2 in h.edges:
            d = d2_ss(p1, q1, p2, q2)
            if best is None or d < best:
                best = d
                if best == 0:
                    return best
    return best


def in_disk(pt, center, radius, *, strict=False):
    d2 = d2_pp(pt, center)
    r2 = rat(radius) ** 2
    return d2 < r2 if strict else d2 <= r2


def seg_meets_disk(p, q, center, radius, *, strict=False):
    d2 = d2_ps(center, p, q)
    r2 = rat(radius) ** 2
    return d2 < r2 if strict else d2 <= r2


def polyline_meets_disk(g, center, radius, *, strict=False):
    return any(seg_meets_disk(p, q, center, radius, strict=strict)
               for p, q in g.edges)


def disk_components(g, center, radius):
    """Connected pieces of the curve's intersection with the closed disk.

    A segment meets a disk in at most one stretch, and stretches on edges
    that share a vertex join exactly when that vertex is inside; the
    count reduces to components of the meeting-edge adjacency graph.
    """
    es = g.edges
    meets = [i for i, (p, q) in enumerate(es)
             if seg_meets_disk(p, q, center, radius)]
    if not meets:
        return 0
    meet_set = set(meets)
    parent = {i: i for i in meets}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    n = len(es)
    for i in meets:
        j = i + 1
        if j == n:
            if not g.closed:
                continue
            j = 0
        if j in meet_set and in_disk(es[i][1], center, radius):
            parent[find(i)] = find(j)
    return len({find(i) for i in meets})


def compress_chain(points):
    """Drop interior points that merely subdivide a straight edge."""
    out = []
    for r in points:
        r = (rat(r[0]), rat(r[1]))
        if out and r == out[-1]:
            continue
        while len(out) >= 2:
            a, b = out[-2], out[-1]
            if orient(a, b, r) == 0 and vdot(vsub(a, b), vsub(r, b)) < 0:
                out.pop()
            else:
                break
        out.append(r)
    return tuple(out)


def unit_directions(count):
    """Pairwise non-parallel rational unit vectors, first (1, 0)."""
    out = []
    t = 0
    while len(out) < count:
        den = 1 + t * t
        out.append((rat(1 - t * t, den), rat(2 * t, den)))
        t += 1
    return out


def pick_direction(avoid):
    """A rational unit vector parallel to none of the given nonzero vectors."""
    avoid = list(avoid)
    t = 0
    while True:
        den = 1 + t * t
        d = (rat(1 - t * t, den), rat(2 * t, den))
        if all(vcross(d, v) != 0 for v in avoid):
            return d
        t += 1
