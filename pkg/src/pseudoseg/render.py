"""Deterministic SVG emission for curve families and wiring diagrams.

Output is a pure function of (input, spec): same bytes every run, no
timestamps, no environment leaks. Exact rational coordinates are
converted to decimals only here, at 12 significant digits, and the
decimals never flow back into any predicate.

The drawing frame flips y so that the geometry's upward direction is
up on screen, and translates the content bounding box to the origin;
coordinates in the file therefore stay comparable to the content size,
which keeps the rounding error far below a billionth of the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arrangements import KSegment
from .errors import InvalidSize, UnknownId
from .rational import rat

LAYERS = ("curves", "disks", "sticks", "zone-highlight", "kseg-overlay",
          "labels")


@dataclass(frozen=True)
class RenderSpec:
    """Canvas size, stroke width, palette, and enabled layers."""

    width: int = 800
    height: int = 600
    stroke: object = None
    palette: str = "default"
    layers: tuple = LAYERS

    def __post_init__(self):
        if not (isinstance(self.width, int) and isinstance(self.height, int)
                and self.width > 0 and self.height > 0):
            raise InvalidSize("canvas dimensions must be positive integers")
        if self.palette not in ("default", "mono"):
            raise InvalidSize(f"unknown palette {self.palette!r}")
        for name in self.layers:
            if name not in LAYERS:
                raise InvalidSize(f"unknown layer {name!r}")
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.stroke is not None:
            object.__setattr__(self, "stroke", rat(self.stroke))

    def has(self, layer):
        return layer in self.layers


def _fmt(q):
    """Decimal form of a rational, 12 significant digits, no exponent."""
    q = rat(q)
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    num, den = abs(q).numerator, abs(q).denominator
    e = len(str(num)) - len(str(den))
    while num >= den * 10 ** (e + 1):
        e += 1
    while num < den * 10 ** e:
        e -= 1
    shift = 11 - e
    if shift >= 0:
        mnum, mden = num * 10 ** shift, den
    else:
        mnum, mden = num, den * 10 ** (-shift)
    m, r = divmod(mnum, mden)
    if 2 * r > mden or (2 * r == mden and m % 2):
        m += 1
    if m == 10 ** 12:
        m //= 10
        e += 1
    digits = str(m)
    if e >= 11:
        s = digits + "0" * (e - 11)
    elif e >= 0:
        s = digits[:e + 1] + "." + digits[e + 1:]
    else:
        s = "0." + "0" * (-e - 1) + digits
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return sign + s


def _esc(text):
    return (str(text).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _hsv_hex(h, s, v):
    """Exact HSV (degrees, 0..1, 0..1 rationals) to #rrggbb."""
    h = rat(h) % 360
    s, v = rat(s), rat(v)
    h6 = h / 60
    i = int(h6)
    f = h6 - i
    p = v * (1 - s)
    q = v * (1 - s * f)
    t = v * (1 - s * (1 - f))
    rgb = ((v, t, p), (q, v, p), (p, v, t),
           (p, q, v), (t, p, v), (v, p, q))[i % 6]

    def byte(c):
        n, r = divmod(c * 255, 1)
        return int(n) + (1 if 2 * r >= 1 else 0)

    return "#" + "".join(format(byte(c), "02x") for c in rgb)


def _curve_colors(curve_ids, palette):
    """Stable color per curve: curves of one bundle (same leading leaf
    of an 'i,j' id) share a stepped hue block."""
    if palette == "mono":
        return {cid: "#222222" for cid in curve_ids}
    groups = {}
    for cid in curve_ids:
        key = cid.split(",")[0] if "," in cid else cid
        groups.setdefault(key, []).append(cid)
    keys = sorted(groups)
    colors = {}
    for gi, key in enumerate(keys):
        members = groups[key]
        hue = rat(360 * gi, len(keys))
        for mi, cid in enumerate(members):
            v = rat(55, 100) + rat(35, 100) * rat(mi, max(len(members) - 1, 1))
            colors[cid] = _hsv_hex(hue, rat(70, 100), v)
    return colors


class _Canvas:
    """Collects elements over an exact frame, then emits the document."""

    def __init__(self, spec):
        self.spec = spec
        self.elements = []
        self._xs = []
        self._ys = []

    def cover(self, points):
        for x, y in points:
            self._xs.append(rat(x))
            self._ys.append(rat(y))

    def _frame(self):
        if not self._xs:
            return rat(0), rat(1), rat(1), rat(1)
        minx, maxx = min(self._xs), max(self._xs)
        miny, maxy = min(self._ys), max(self._ys)
        span = (maxx - minx) + (maxy - miny)
        pad = span / 40 if span else rat(1)
        return minx - pad, maxy + pad, (maxx - minx) + 2 * pad, \
            (maxy - miny) + 2 * pad

    def render(self):
        left, top, vw, vh = self._frame()

        def tx(p):
            return (p[0] - left, top - p[1])

        stroke = self.spec.stroke
        if stroke is None:
            stroke = max(vw, vh) / 400
        parts = [
            '<?xml version="1.0" encoding="UTF-8"?>\n',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.spec.width}" height="{self.spec.height}" '
            f'viewBox="0 0 {_fmt(vw)} {_fmt(vh)}">\n',
        ]
        for kind, payload in self.elements:
            if kind == "path":
                cls, pts, closed, color, width_mul, dash = payload
                cmds = "M " + " L ".join(
                    f"{_fmt(x)} {_fmt(y)}" for x, y in map(tx, pts))
                if closed:
                    cmds += " Z"
                extra = f' stroke-dasharray="{dash}"' if dash else ""
                parts.append(
                    f'<path class="{cls}" d="{cmds}" fill="none" '
                    f'stroke="{color}" '
                    f'stroke-width="{_fmt(stroke * width_mul)}"{extra}/>\n')
            elif kind == "circle":
                cls, center, radius, fill, color = payload
                cx, cy = tx(center)
                parts.append(
                    f'<circle class="{cls}" cx="{_fmt(cx)}" cy="{_fmt(cy)}" '
                    f'r="{_fmt(radius)}" fill="{fill}" stroke="{color}" '
                    f'stroke-width="{_fmt(stroke)}"/>\n')
            else:
                cls, anchor, text = payload
                ax, ay = tx(anchor)
                size = max(vw, vh) / 50
                parts.append(
                    f'<text class="{cls}" x="{_fmt(ax)}" y="{_fmt(ay)}" '
                    f'font-family="sans-serif" '
                    f'font-size="{_fmt(size)}">{_esc(text)}</text>\n')
        parts.append("</svg>\n")
        return "".join(parts)

    def path(self, cls, pts, color, closed=False, width_mul=1, dash=""):
        self.cover(pts)
        self.elements.append(("path", (cls, tuple(pts), closed, color,
                                       width_mul, dash)))

    def circle(self, cls, center, radius, fill, color):
        self.cover([(center[0] - radius, center[1] - radius),
                    (center[0] + radius, center[1] + radius)])
        self.elements.append(("circle", (cls, center, rat(radius), fill,
                                         color)))

    def text(self, cls, anchor, label):
        self.cover([anchor])
        self.elements.append(("text", (cls, anchor, label)))


def render_family(fam, spec=RenderSpec(), sticks=()):
    """SVG for a curve family: one path per curve, one circle per disk,
    optional stick paths behind everything. An empty family gives an
    empty canvas."""
    canvas = _Canvas(spec)
    mono = spec.palette == "mono"
    if spec.has("sticks"):
        for st in sticks:
            canvas.path("stick", st.points, "#444444" if mono else "#888888")
    if spec.has("disks"):
        for d in getattr(fam, "disks", ()):
            canvas.circle("disk", d.center, d.radius, "#e8e8e8",
                          "#555555")
    if spec.has("curves"):
        colors = _curve_colors([c.id for c in fam.curves], spec.palette)
        for c in fam.curves:
            canvas.path("curve", c.points, colors[c.id], closed=c.closed)
    if spec.has("labels"):
        for st in sticks if spec.has("sticks") else ():
            canvas.text("label", st.points[0], st.id)
        if spec.has("disks"):
            for d in getattr(fam, "disks", ()):
                canvas.text("label", d.center, d.leaf)
        if spec.has("curves"):
            for c in fam.curves:
                canvas.text("label", c.points[0], c.id)
    return canvas.render()


def _edge_span(cells, eid):
    """Exact x-range of an edge's drawing."""
    e = cells.edges[eid]
    lo = rat(e.slab_lo) if e.slab_lo > 0 else rat(-1, 2)
    hi = rat(e.slab_hi + 1) if e.slab_hi < cells.steps \
        else rat(2 * cells.steps + 3, 2)
    return lo, hi


def _edge_polyline(cells, eid):
    lo, hi = _edge_span(cells, eid)
    wire = eid[0]
    pts = [(lo, cells.wire_y(wire, lo))]
    pts.extend(p for p in cells.wire_drawing(wire).points if lo < p[0] < hi)
    pts.append((hi, cells.wire_y(wire, hi)))
    return pts


def _face_mid(cells, fid):
    f = cells.faces[fid]
    x = rat(f.slab_lo + f.slab_hi + 1, 2)
    return (x, cells.gap_mid(f.gap, x))


def _edge_mid(cells, eid):
    lo, hi = _edge_span(cells, eid)
    x = (lo + hi) / 2
    return (x, cells.wire_y(eid[0], x))


def _kseg_overlay_points(cells, ks):
    """Polyline through the face midpoints a curve crossing the
    k-segment's edges in order passes, with edge midpoints between."""
    eids = tuple(ks.edges)
    for eid in eids:
        if eid not in cells.edges:
            raise UnknownId(f"no edge {eid}")
    faces = []
    for a, b in zip(eids, eids[1:]):
        ea, eb = cells.edges[a], cells.edges[b]
        common = {ea.above, ea.below} & {eb.above, eb.below}
        if not common:
            raise UnknownId(f"edges {a} and {b} share no face")
        faces.append(min(common))
    e0 = cells.edges[eids[0]]
    start = e0.below if not faces or faces[0] != e0.below else e0.above
    elast = cells.edges[eids[-1]]
    end = elast.above if not faces or faces[-1] != elast.above else elast.below
    chain = [start] + faces + [end]
    pts = [_face_mid(cells, chain[0])]
    for i, eid in enumerate(eids):
        pts.append(_edge_mid(cells, eid))
        pts.append(_face_mid(cells, chain[i + 1]))
    return pts


def render_arrangement(cells, highlight=None, spec=RenderSpec()):
    """SVG for a wiring diagram; highlight is a ZoneResult or a list of
    KSegments, drawn as a distinct overlay class."""
    canvas = _Canvas(spec)
    mono = spec.palette == "mono"
    zone_eids = ()
    ksegs = ()
    if highlight is not None:
        if isinstance(highlight, KSegment):
            ksegs = (highlight,)
        elif hasattr(highlight, "edges") and hasattr(highlight, "p"):
            zone_eids = tuple(highlight.edges)
        else:
            ksegs = tuple(highlight)
        for eid in zone_eids:
            if eid not in cells.edges:
                raise UnknownId(f"no edge {eid}")
    if spec.has("curves"):
        colors = _curve_colors([str(w) for w in range(1, cells.n + 1)],
                               spec.palette)
        for w in range(1, cells.n + 1):
            canvas.path("wire", cells.wire_drawing(w).points, colors[str(w)])
    if spec.has("zone-highlight"):
        for eid in zone_eids:
            canvas.path("zone", _edge_polyline(cells, eid),
                        "#111111" if mono else "#cc2222", width_mul=3)
    overlays = [_kseg_overlay_points(cells, ks) for ks in ksegs]
    if spec.has("kseg-overlay"):
        for pts in overlays:
            canvas.path("kseg", pts, "#333333" if mono else "#2244cc",
                        width_mul=2, dash="4 2")
    if spec.has("labels"):
        for w in range(1, cells.n + 1):
            canvas.text("label", cells.wire_drawing(w).points[0], str(w))
    return canvas.render()
