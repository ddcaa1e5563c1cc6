"""Construction of curve families realizing tree leaf-path graphs.

The base case places points on a circle so that no two connecting lines
are parallel; the curves are those full lines clipped to a large square,
so every pair crosses exactly once, and all curves touching a leaf disk
cross pairwise at its center (the hub). The general case consumes the
disk of one inner node: every curve that used it is replaced by a bundle
of nearby parallel copies, one per leaf hanging off that node. A copy
keeps both halves of its tube; only the straight passage through the
old window is rerouted, down to a bottom row, across a straight carrier
through the hub of its leaf's new disk (a scaled base-case family
patched near the old hub), and out through a mirrored top row back onto
its own tube. Straight connectors between parallel rows cross exactly
when their endpoint orders flip, and the bundle order reverses through
the center while the new-disk order does not, so every required
crossing appears exactly once.

Raw outputs are exact but concurrent: at every hub all visiting curves
pass straight through one point. perturb resolves these multiple points
without changing which pairs cross.

Invariant threaded through every level (checked, not assumed): each leaf
disk knows a hub and a window radius; every curve meeting the disk runs
straight through the hub across the whole window, directions pairwise
distinct, and inside the disk curves cross each other at the hub only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (DegeneratePair, InvalidSize, InvalidTree,
                     NotAStarFamily, UnresolvableDegeneracy)
from .geom import (TRIPLE_POINT, Polyline, compress_chain,
                   crossings_detailed, d2_pp, d2_ps, disk_components,
                   general_position_check, in_disk, is_simple, line_cross,
                   orient, pick_direction, polyline_meets_disk,
                   unit_directions, vadd, vcross, vdot, vscale, vsub)
from .psifamily import Disk, PsiFamily
from .rational import dyadic_below_sqrt, dyadic_between, rat
from .trees import Tree, all_leaf_paths, pair_id


# ---------------------------------------------------------------------------
# base case: points on a circle, curves are full lines clipped to a square


def pick_circle_points(m):
    """m rational points on the unit circle whose connecting lines have
    pairwise distinct slopes; greedy over the rational parametrization
    (1-t^2, 2t)/(1+t^2), t = 0, 1, 2, ...
    """
    if m < 2:
        raise InvalidSize("need at least 2 points")
    pts = []
    slopes = set()

    def slope(p, q):
        dx, dy = q[0] - p[0], q[1] - p[1]
        return None if dx == 0 else rat(dy) / dx

    t = 0
    while len(pts) < m:
        tt = rat(t)
        cand = (rat(1 - tt * tt) / (1 + tt * tt), rat(2 * tt) / (1 + tt * tt))
        new = [slope(p, cand) for p in pts]
        if len(set(new)) == len(new) and not (set(new) & slopes):
            pts.append(cand)
            slopes.update(new)
        t += 1
    return pts


def _clip_line_to_square(p, d, s):
    """Both intersection points of the line p + t*d with the boundary of
    [-s, s]^2, ordered by t."""
    hits = []
    if d[0] != 0:
        for wall in (-s, s):
            t = rat(wall - p[0]) / d[0]
            y = p[1] + t * d[1]
            if -s <= y <= s:
                hits.append((t, (rat(wall), y)))
    if d[1] != 0:
        for wall in (-s, s):
            t = rat(wall - p[1]) / d[1]
            x = p[0] + t * d[0]
            if -s <= x <= s:
                hits.append((t, (x, rat(wall))))
    hits.sort(key=lambda h: h[0])
    lo, hi = hits[0], hits[-1]
    if lo[1] == hi[1]:
        raise UnresolvableDegeneracy("line only touches the clip square")
    return lo[1], hi[1]


@dataclass(frozen=True)
class _Hub:
    center: tuple
    radius: object
    window: object


@dataclass
class _Rep:
    family: PsiFamily
    hubs: dict


def _fresh_center_label(leaves):
    label = "0"
    while label in leaves:
        label = label + "'"
    return label


def _star_rep(labels, log_prefix=""):
    labels = sorted(labels)
    m = len(labels)
    pts = pick_circle_points(m)
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    lines = {}
    for i, j in pairs:
        lines[(i, j)] = (pts[i], vsub(pts[j], pts[i]))

    crossings = []
    keys = sorted(lines)
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            p1, d1 = lines[keys[a]]
            p2, d2 = lines[keys[b]]
            x = line_cross(p1, vadd(p1, d1), p2, vadd(p2, d2))
            if x is None:
                raise UnresolvableDegeneracy("parallel connecting lines")
            crossings.append(x)

    extent = rat(1)
    for p in list(pts) + crossings:
        extent = max(extent, abs(p[0]), abs(p[1]))
    s = rat(1)
    while s < extent + 2:
        s *= 2

    bounds = [min(d2_pp(pts[i], pts[j]) for i, j in pairs) / 16]
    for i, j in pairs:
        p, d = lines[(i, j)]
        for k in range(m):
            if k in (i, j):
                continue
            bounds.append(d2_ps(pts[k], p, vadd(p, d)) / 4)
    radius = dyadic_below_sqrt(min(bounds))

    curves = []
    for i, j in pairs:
        p, d = lines[(i, j)]
        a, b = _clip_line_to_square(p, d, s)
        curves.append(Polyline(pair_id(labels[i], labels[j]), (a, b)))
    for i in range(m):
        through = [vsub(pts[j], pts[i]) for j in range(m) if j != i]
        u = pick_direction(through)
        arm = vscale(u, 3 * radius / 4)
        curves.append(Polyline(pair_id(labels[i], labels[i]),
                               (vsub(pts[i], arm), vadd(pts[i], arm))))

    disks = tuple(Disk(pts[i], radius, labels[i]) for i in range(m))
    center = _fresh_center_label(set(labels))
    tree = Tree([(center, l) for l in labels])
    log = (f"{log_prefix}star m={m} radius={radius} clip={s}",)
    fam = PsiFamily(tuple(sorted(curves, key=lambda c: c.id)), disks, tree,
                    log)
    hubs = {labels[i]: _Hub(pts[i], radius, radius / 2) for i in range(m)}
    return _Rep(fam, hubs)


def build_star_psi(m):
    """Base-case family for a star with m leaves labeled 1..m.

    All curves touching the disk of leaf i pass straight through its
    center, so they pairwise cross there; any two curves cross exactly
    once overall.
    """
    if m < 2:
        raise InvalidSize("need at least 2 leaves")
    return _star_rep([str(i) for i in range(1, m + 1)]).family


# ---------------------------------------------------------------------------
# box form: a linear shear that lines the disks up left to right


def _star_shape(fam):
    """(labels, centers) after validating base-case structure."""
    if fam.host_tree is None or len(fam.host_tree.inner_nodes) > 1:
        raise NotAStarFamily("family was not built from a single star")
    if not fam.disks:
        raise NotAStarFamily("family carries no disks")
    labels = sorted(d.leaf for d in fam.disks)
    centers = {d.leaf: d.center for d in fam.disks}
    for c in fam.curves:
        if len(c.points) != 2 or c.closed:
            raise NotAStarFamily(f"curve {c.id} is not a straight segment")
        i, j = c.id.split(",")
        if i != j and orient(centers[i], centers[j], c.points[0]) != 0:
            raise NotAStarFamily(f"curve {c.id} does not span its two hubs")
    return labels, centers


def box_form(star):
    """Combinatorially equivalent copy inside an axis-aligned box.

    A linear map (exact, invertible) is chosen so no connecting line
    becomes vertical or horizontal and all hub x-coordinates become
    distinct; the lines are re-clipped to a box they fully traverse and
    fresh round disks and horizontal diameters are installed.
    """
    fam, _aux = _box_rep(star)
    return fam


def _box_rep(star):
    labels, centers = _star_shape(star)
    m = len(labels)
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    pts = [centers[l] for l in labels]

    avoid = set()
    for i, j in pairs:
        d = vsub(pts[j], pts[i])
        if d[0] != 0:
            avoid.add(rat(d[1]) / d[0])
        if d[1] != 0:
            avoid.add(-rat(d[0]) / d[1])
    q = 1
    while any(v == q for v in avoid):
        q += 1
    if avoid:
        top = max(abs(v) for v in avoid)
        while rat(q) <= top:
            q += 1

    def mapped(p):
        return (q * p[0] - p[1], p[0] + q * p[1])

    hubs = [mapped(p) for p in pts]
    lines = {(i, j): (hubs[i], vsub(hubs[j], hubs[i])) for i, j in pairs}
    crossings = []
    keys = sorted(lines)
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            p1, d1 = lines[keys[a]]
            p2, d2 = lines[keys[b]]
            x = line_cross(p1, vadd(p1, d1), p2, vadd(p2, d2))
            if x is None:
                raise NotAStarFamily("parallel lines in the input family")
            crossings.append(x)

    clear2 = None
    for i, j in pairs:
        p, d = lines[(i, j)]
        for k in range(m):
            if k in (i, j):
                continue
            dd = d2_ps(hubs[k], p, vadd(p, d))
            clear2 = dd if clear2 is None else min(clear2, dd)
    bounds = []
    if clear2 is not None:
        bounds.append(clear2 / 4)
    for a in range(m):
        for b in range(a + 1, m):
            bounds.append(d2_pp(hubs[a], hubs[b]) / 16)
            bounds.append(rat((hubs[a][0] - hubs[b][0]) ** 2) / 16)
    radius = dyadic_below_sqrt(min(bounds))

    ext_x = max(abs(h[0]) for h in hubs)
    for c in crossings:
        ext_x = max(ext_x, abs(c[0]))
    ext_x = ext_x + 4 * radius + 1
    box_x = rat(1)
    while box_x < ext_x:
        box_x *= 2
    ext_y = max(abs(h[1]) for h in hubs) + 4 * radius + 1
    for i, j in pairs:
        p, d = lines[(i, j)]
        for wall in (-box_x, box_x):
            ext_y = max(ext_y, abs(p[1] + (wall - p[0]) * rat(d[1]) / d[0]))
    box_y = rat(1)
    while box_y < ext_y + 1:
        box_y *= 2

    curves = []
    for i, j in pairs:
        p, d = lines[(i, j)]
        ya = p[1] + (-box_x - p[0]) * rat(d[1]) / d[0]
        yb = p[1] + (box_x - p[0]) * rat(d[1]) / d[0]
        curves.append(Polyline(pair_id(labels[i], labels[j]),
                               ((-box_x, ya), (box_x, yb))))
    for i in range(m):
        arm = (3 * radius / 4, rat(0))
        curves.append(Polyline(pair_id(labels[i], labels[i]),
                               (vsub(hubs[i], arm), vadd(hubs[i], arm))))

    disks = tuple(Disk(hubs[i], radius, labels[i]) for i in range(m))
    log = star.build_log + (f"box shear q={q} box=({box_x},{box_y})",)
    fam = PsiFamily(tuple(sorted(curves, key=lambda c: c.id)), disks,
                    star.host_tree, log)
    aux = {"box_x": box_x, "box_y": box_y, "radius": radius,
           "hubs": {labels[i]: hubs[i] for i in range(m)}}
    return fam, aux


def _single_leaf_patch(label):
    """Degenerate patch for an inner node carrying a single leaf."""
    hub = (rat(0), rat(0))
    radius = rat(1)
    curve = Polyline(pair_id(label, label),
                     ((-rat(3, 4), rat(0)), (rat(3, 4), rat(0))))
    disk = Disk(hub, radius, label)
    fam = PsiFamily((curve,), (disk,), None, ("patch single leaf",))
    aux = {"box_x": rat(2), "box_y": rat(2), "radius": radius,
           "hubs": {label: hub}}
    return fam, aux


# ---------------------------------------------------------------------------
# exact offsets of a polyline (parallel per edge, corners mitered)


def _edge_disp(a, b, c, gauge):
    e = vsub(b, a)
    unit = dyadic_below_sqrt(vdot(e, e))
    return vscale((-e[1], e[0]), rat(c) * gauge / unit)


def _miter_offset(points, c, gauge):
    """Copy of the polyline with every edge translated sideways by about
    c*gauge; corner vertices land on the intersection of the two
    neighboring shifted edge lines."""
    n = len(points)
    disps = [_edge_disp(points[i], points[i + 1], c, gauge)
             for i in range(n - 1)]
    out = [vadd(points[0], disps[0])]
    for i in range(1, n - 1):
        p1 = vadd(points[i], disps[i - 1])
        d1 = vsub(points[i], points[i - 1])
        p2 = vadd(points[i], disps[i])
        d2 = vsub(points[i + 1], points[i])
        x = line_cross(p1, vadd(p1, d1), p2, vadd(p2, d2))
        if x is None:
            raise UnresolvableDegeneracy("offset corner is degenerate")
        out.append(x)
    out.append(vadd(points[-1], disps[-1]))
    return out


def _edge_param(points, j, z):
    """Parameter of z's projection onto edge j; positions points along
    the polyline for exact ordering."""
    a, b = points[j], points[j + 1]
    u = vsub(b, a)
    return rat(vdot(vsub(z, a), u)) / vdot(u, u)


def _window_edge(points, z, window):
    """Index of the straight edge running through z and spanning the
    whole window disk around it."""
    w2 = window * window
    for i in range(len(points) - 1):
        a, b = points[i], points[i + 1]
        if orient(a, b, z) != 0:
            continue
        if vdot(vsub(z, a), vsub(b, z)) <= 0:
            continue
        if d2_pp(a, z) >= w2 and d2_pp(b, z) >= w2:
            return i
    raise UnresolvableDegeneracy("no straight window passage found")


def _twisted_offsets(points, coeffs, gauge, far_hub):
    """Offsets of the whole polyline with the passage through the far
    disk exchanged so that every copy runs straight through the far hub.

    Copy with coefficient c enters on offset c and leaves on offset -c;
    its middle piece is the straight chord between the symmetric cut
    points, which passes exactly through the hub. Returns {c: point
    list}; every list has two more points than the input.
    """
    z, window = far_hub.center, far_hub.window
    j = _window_edge(points, z, window)
    a, b = points[j], points[j + 1]
    e = vsub(b, a)
    tau = dyadic_below_sqrt(window * window * rat(9, 16) / vdot(e, e))
    cut_a = vsub(z, vscale(e, tau))
    cut_b = vadd(z, vscale(e, tau))

    offs = {c: _miter_offset(points, c, gauge) for c in coeffs}
    disp = {c: _edge_disp(a, b, c, gauge) for c in coeffs}
    out = {}
    for c in coeffs:
        pre = offs[c][:j + 1] + [vadd(cut_a, disp[c])]
        post = [vadd(cut_b, disp[-c])] + offs[-c][j + 1:]
        out[c] = pre + post
    return out


# ---------------------------------------------------------------------------
# the inductive step: consume one inner node's disk


def _symmetric_coeffs(h):
    return [2 * k - h - 1 for k in range(1, h + 1)]


def _surgery(rep, tree, vn, leaves_on, knob, log):
    """Rebuild rep (a representation of the reduced tree) into one for
    tree, consuming the disk of vn. Returns an unverified _Rep.

    Every curve through the disk becomes a bundle of parallel copies,
    one per leaf hanging off vn. A copy keeps both halves of its tube;
    only the straight passage through the old window is rerouted: down
    to a bottom row, across a straight carrier through the hub of its
    leaf's new disk, then out through a mirrored top row and back onto
    its own tube. Straight connectors between two rows cross exactly
    when their endpoint orders flip, and the bundle order flips through
    the center between the rows while the new-disk order does not, so
    copies from different bundles and different leaves cross exactly
    once in a connector stage; same-bundle copies meet only inside the
    far disk (at the twist) and same-leaf copies only at the new hub.
    """
    hub0 = rep.hubs[vn]
    z0, om = hub0.center, hub0.window
    others = sorted(l for l in rep.family.host_tree.leaves if l != vn)
    K, h = len(others), len(leaves_on)

    raw = {}
    passages = {}
    for b in others:
        pts = list(rep.family.curve(pair_id(vn, b)).points)
        j0 = _window_edge(pts, z0, om)
        raw[b] = pts
        passages[b] = vsub(pts[j0 + 1], pts[j0])

    # local frame: x axis chosen clear of every passage direction, so
    # every passage leans properly across the horizontal rows
    best, c0 = None, None
    for u in unit_directions(max(64, 8 * K)):
        margin = min(rat(vcross(u, d)) ** 2 / vdot(d, d)
                     for d in passages.values())
        if c0 is None or margin > c0:
            best, c0 = u, margin
    if not c0 > 0:
        raise UnresolvableDegeneracy("no usable frame axis")
    ux, uy = best

    def to_local(p):
        d = vsub(p, z0)
        return (ux * d[0] + uy * d[1], ux * d[1] - uy * d[0])

    def to_global(p):
        return (z0[0] + p[0] * ux - p[1] * uy,
                z0[1] + p[0] * uy + p[1] * ux)

    # rows sized so every rerouted point stays well inside the window:
    # a stage point sits on its passage line at height row_m, hence at
    # most row_m/sqrt(c0) <= om*11/32 from the center
    row_m = dyadic_below_sqrt(om * om * c0 * rat(121, 1024))
    row_p = row_m / 2

    # patch: base-case family for the new leaves, scaled to fit strictly
    # between the carrier rows
    if h >= 2:
        patch_fam, aux = _box_rep(_star_rep(leaves_on).family)
    else:
        patch_fam, aux = _single_leaf_patch(leaves_on[0])
    half_box = row_p / 4
    scale = dyadic_below_sqrt(min((half_box / aux["box_x"]) ** 2,
                                  (half_box / aux["box_y"]) ** 2))
    hub_local = {l: (scale * aux["hubs"][l][0], scale * aux["hubs"][l][1])
                 for l in leaves_on}
    disk_r = scale * aux["radius"]
    fans_by_x = sorted(leaves_on, key=lambda l: hub_local[l][0])
    slot = disk_r * knob / (4 * K)

    gauge_base = min([row_m] + [rep.hubs[b].window for b in others])
    gauge = gauge_base * knob / (4096 * h)

    coeffs = _symmetric_coeffs(h)
    far_edges = {}
    bundles = {}
    for b in others:
        pts = raw[b]
        j0 = _window_edge(pts, z0, om)
        if vcross(best, vsub(pts[j0 + 1], pts[j0])) < 0:
            pts = list(reversed(pts))
            j0 = _window_edge(pts, z0, om)
        if h == 1:
            tubes = {coeffs[0]: list(pts)}
            shift = 0
        else:
            far = rep.hubs[b]
            jb = _window_edge(pts, far.center, far.window)
            far_edges[b] = vsub(pts[jb + 1], pts[jb])
            tubes = _twisted_offsets(pts, coeffs, gauge, far)
            # the twist inserts two points; the window edge moves along
            # when the far passage precedes it on the oriented curve
            shift = 2 if (jb, _edge_param(pts, jb, far.center)) < \
                (j0, _edge_param(pts, j0, z0)) else 0
        entries = []
        for c in coeffs:
            tp = tubes[c]
            je = j0 + shift
            qa, qb = to_local(tp[je]), to_local(tp[je + 1])
            dy = qb[1] - qa[1]
            if dy <= 0:
                raise UnresolvableDegeneracy("window passage lost its slope")
            stage = []
            for yy in (-row_m, row_m):
                t = rat(yy - qa[1]) / dy
                if not 0 < t < 1:
                    raise UnresolvableDegeneracy(
                        "window passage too short for the rows")
                stage.append((qa[0] + t * (qb[0] - qa[0]), rat(yy)))
            entries.append([tp, je, stage[0], stage[1], None])
        # tie each copy to a new leaf so that the bottom-row order of a
        # bundle matches the left-to-right order of the new disks: the
        # copies are parallel, so the pair then crosses in neither
        # connector stage and meets only inside the far disk
        entries.sort(key=lambda en: en[2][0])
        for en, leaf in zip(entries, fans_by_x):
            en[4] = leaf
        bundles[b] = entries

    # carrier offsets ranked by bottom-row position: bottom endpoints of
    # one disk's carriers then repeat the bottom-row bundle order, and
    # the top endpoints (mirrored through the hub) reverse it, exactly
    # like the stage points themselves, so same-leaf copies cross only
    # at the hub and different-leaf copies exactly once in a connector
    border = sorted(others, key=lambda b: min(en[2][0] for en in bundles[b]))
    brank = {b: i for i, b in enumerate(border)}

    new_curves = []
    for b in others:
        for tp, je, s_in, s_out, leaf in bundles[b]:
            hx, hy = hub_local[leaf]
            cb_x = hx + (2 * brank[b] - (K - 1)) * slot / 2
            ct_x = hx + (hx - cb_x) * (row_p - hy) / (row_p + hy)
            detour = [s_in, (cb_x, -row_p), (ct_x, row_p), s_out]
            pts = (tp[:je + 1] + [to_global(p) for p in detour]
                   + tp[je + 1:])
            new_curves.append(Polyline(pair_id(leaf, b),
                                       compress_chain(pts)))

    for c in patch_fam.curves:
        pts = [to_global((scale * p[0], scale * p[1])) for p in c.points]
        new_curves.append(Polyline(c.id, compress_chain(pts)))

    drop = {pair_id(vn, b) for b in others} | {pair_id(vn, vn)}
    survivors = [c for c in rep.family.curves if c.id not in drop]

    disks = [d for d in rep.family.disks if d.leaf != vn]
    new_hubs = {}
    for d in disks:
        new_hubs[d.leaf] = rep.hubs[d.leaf]
    for l in leaves_on:
        center = to_global(hub_local[l])
        disks.append(Disk(center, disk_r, l))
        new_hubs[l] = _Hub(center, disk_r, disk_r / 2)
    for b, e in far_edges.items():
        # the twist carrier's ends sit at distance ~tau*|e| from the far
        # hub; shrink that window so the straight-passage check still
        # sees a single edge spanning it
        old = rep.hubs[b]
        tau = dyadic_below_sqrt(old.window ** 2 * rat(9, 16) / vdot(e, e))
        shrunk = dyadic_below_sqrt((tau * tau) * vdot(e, e)) / 2
        new_hubs[b] = _Hub(old.center, old.radius, min(old.window, shrunk))

    entry = (f"level vn={vn} leaves={','.join(leaves_on)} "
             f"bundles={K} window={om} scale={scale} gauge={gauge} "
             f"slot={slot} labels preserved")
    fam = PsiFamily(tuple(sorted(new_curves + survivors, key=lambda c: c.id)),
                    tuple(sorted(disks, key=lambda d: d.leaf)), tree,
                    rep.family.build_log + (entry,) + tuple(log))
    return _Rep(fam, new_hubs)


# ---------------------------------------------------------------------------
# exact verification of a finished level


def _expected_crossings(tree):
    paths = {p.label: p.nodeset for p in all_leaf_paths(tree)}
    want = {}
    ids = sorted(paths)
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            want[(a, b)] = 1 if paths[a] & paths[b] else 0
    return want


def _verify_level(rep, tree):
    """Exact check of every required property; returns a list of problem
    strings, empty when the representation is correct."""
    fam = rep.family
    problems = []
    want = _expected_crossings(tree)
    curves = {c.id: c for c in fam.curves}
    pts_of = {}
    for (a, b), expect in want.items():
        try:
            hits = crossings_detailed(curves[a], curves[b])
        except DegeneratePair as exc:
            problems.append(f"degenerate contact {a} x {b}: {exc}")
            continue
        pts_of[(a, b)] = [h[2] for h in hits]
        if len(hits) != expect:
            problems.append(
                f"{a} x {b}: {len(hits)} crossings, expected {expect}")
    if problems:
        return problems

    gp = general_position_check(list(fam.curves))
    for f in gp.violations:
        if f.kind != TRIPLE_POINT:
            problems.append(f"general position: {f.kind} {f.ids}")

    for c in fam.curves:
        if not c.closed and not _is_simple_enough(c):
            problems.append(f"curve {c.id} self-intersects")

    for d in fam.disks:
        hub = rep.hubs[d.leaf]
        visitors = []
        for c in fam.curves:
            meets = polyline_meets_disk(c, d.center, d.radius, strict=False)
            should = d.leaf in c.id.split(",")
            if meets != should:
                problems.append(f"disk {d.leaf}: {c.id} "
                                f"{'meets' if meets else 'misses'}")
            if meets:
                visitors.append(c)
                if disk_components(c, d.center, d.radius) != 1:
                    problems.append(f"disk {d.leaf}: {c.id} disconnected")
                if disk_components(c, hub.center, hub.window) != 1:
                    problems.append(f"disk {d.leaf}: {c.id} re-enters "
                                    f"the window")
                try:
                    _window_edge(list(c.points), hub.center, hub.window)
                except UnresolvableDegeneracy:
                    problems.append(f"disk {d.leaf}: {c.id} bends inside "
                                    f"the window")
        dirs = []
        for c in visitors:
            try:
                j = _window_edge(list(c.points), hub.center, hub.window)
                dirs.append(vsub(c.points[j + 1], c.points[j]))
            except UnresolvableDegeneracy:
                pass
        for i in range(len(dirs)):
            for j in range(i + 1, len(dirs)):
                if vcross(dirs[i], dirs[j]) == 0:
                    problems.append(f"disk {d.leaf}: parallel passages")
        for i, a in enumerate(visitors):
            for b in visitors[i + 1:]:
                key = (a.id, b.id) if a.id < b.id else (b.id, a.id)
                for p in pts_of.get(key, ()):
                    if in_disk(p, d.center, d.radius, strict=False):
                        if p != hub.center:
                            problems.append(
                                f"disk {d.leaf}: {a.id} x {b.id} crosses "
                                f"off the hub")
    return problems


def _is_simple_enough(c):
    try:
        return is_simple(c)
    except DegeneratePair:
        return False


# ---------------------------------------------------------------------------
# public construction and perturbation


def _reduce(tree):
    vn = tree.inner_leaf_candidates()[0]
    leaves_on = sorted(n for n in tree.neighbors(vn)
                       if tree.degree(n) == 1)
    kept = [e for e in tree.edges
            if not (vn in e and (e[0] in leaves_on or e[1] in leaves_on))]
    return vn, leaves_on, Tree(kept)


def _build_rep(tree):
    if len(tree.inner_nodes) <= 1:
        rep = _star_rep(tree.leaves)
        fam = rep.family
        rep = _Rep(PsiFamily(fam.curves, fam.disks, tree, fam.build_log),
                   rep.hubs)
        problems = _verify_level(rep, tree)
        if problems:
            raise UnresolvableDegeneracy(
                "base star failed verification: " + "; ".join(problems[:4]))
        return rep
    vn, leaves_on, reduced = _reduce(tree)
    inner = _build_rep(reduced)
    knob = rat(1)
    last = []
    for attempt in range(24):
        try:
            cand = _surgery(inner, tree, vn, leaves_on, knob,
                            [f"attempt={attempt}"])
            last = _verify_level(cand, tree)
        except UnresolvableDegeneracy as exc:
            last = [str(exc)]
        if not last:
            return cand
        knob = knob / 2
    raise UnresolvableDegeneracy(
        f"level at {vn} failed after retries: " + "; ".join(last[:4]))


def build_psi(t):
    """A verified curve family whose crossing graph is the leaf-path
    intersection graph of t; one curve per unordered leaf pair, one disk
    per leaf. Hubs remain concurrent; run perturb for general position.
    """
    if len(t.nodes) < 2:
        raise InvalidTree("a single node has no leaf pairs")
    return _build_rep(t).family


# ---------------------------------------------------------------------------
# perturbation of concurrent hub points


def _gather_crossings(curves):
    data = {}
    for i, a in enumerate(curves):
        for b in curves[i + 1:]:
            for (ia, ta), (ib, tb), p in crossings_detailed(a, b):
                data.setdefault(p, []).append((a.id, ia, ta))
                data.setdefault(p, []).append((b.id, ib, tb))
    return data


def _circle_gap2(d2, r):
    """Square of a positive rational below the distance from a point to
    a circle of radius r, given the squared distance d2 to its center."""
    r2 = r * r
    if d2 == r2:
        raise UnresolvableDegeneracy("multiple point exactly on a disk rim")
    if d2 > r2:
        hi = 2 * dyadic_below_sqrt(d2)
        for _ in range(256):
            mid = dyadic_between(r, hi)
            if mid * mid < d2:
                return (mid - r) ** 2
            hi = mid
    else:
        lo = rat(0)
        for _ in range(256):
            mid = dyadic_between(lo, r)
            if mid * mid > d2:
                return (r - mid) ** 2
            lo = mid
    raise UnresolvableDegeneracy("disk rim gap search did not converge")


def perturb(fam):
    """Resolve every point where three or more curves meet.

    Around each such point every participating curve is rerouted onto a
    short parallel detour at its own tiny offset; the crossing pairs,
    their counts, and all disk data are unchanged. Families already in
    general position come back identical.
    """
    gp = general_position_check(list(fam.curves))
    bad = [f for f in gp.violations if f.kind != TRIPLE_POINT]
    if bad:
        raise UnresolvableDegeneracy(
            f"cannot perturb through {bad[0].kind} of {bad[0].ids}")
    if gp.ok:
        return fam

    curves = sorted(fam.curves, key=lambda c: c.id)
    hits = _gather_crossings(curves)
    pair_counts = {}
    for p, users in hits.items():
        ids = sorted({cid for cid, _, _ in users})
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                key = (ids[i], ids[j])
                pair_counts[key] = pair_counts.get(key, 0) + 1

    pencils = {p: sorted({(cid, ei, t) for cid, ei, t in users})
               for p, users in hits.items()
               if len({cid for cid, _, _ in users}) >= 3}
    by_curve = {c.id: c for c in curves}

    for attempt in range(48):
        power = attempt // 8 + 1
        shrink = rat(1, 2 ** (attempt % 8 + 3))
        edits = {}
        ok = True
        for p in sorted(pencils):
            users = pencils[p]
            ids = [u[0] for u in users]
            if len(ids) != len(set(ids)):
                raise UnresolvableDegeneracy(
                    "a curve passes a multiple point twice")
            rho2 = None
            for c in curves:
                for ei, (a, b) in enumerate(c.edges):
                    skip = any(u[0] == c.id and u[1] == ei for u in users)
                    if skip:
                        for q in (a, b):
                            dd = d2_pp(p, q)
                            rho2 = dd if rho2 is None else min(rho2, dd)
                        continue
                    dd = d2_ps(p, a, b)
                    if dd == 0:
                        continue
                    rho2 = dd if rho2 is None else min(rho2, dd)
            for q in hits:
                if q != p:
                    dd = d2_pp(p, q)
                    rho2 = dd if rho2 is None else min(rho2, dd)
            for dsk in fam.disks:
                # detours must never cross a disk rim
                cap = _circle_gap2(d2_pp(p, dsk.center), dsk.radius)
                rho2 = cap if rho2 is None else min(rho2, cap)
            rho = dyadic_below_sqrt(rho2) / 2
            dirs = []
            for cid, ei, _t in users:
                a, b = by_curve[cid].edges[ei]
                dirs.append(vsub(b, a))
            u = pick_direction(dirs)
            # offsets must shrink with the sharpest angle in the pencil,
            # or the crossing of two offset lines escapes the ball
            sin2 = None
            for i in range(len(dirs)):
                for j in range(i + 1, len(dirs)):
                    s2 = rat(vcross(dirs[i], dirs[j])) ** 2 / \
                        (vdot(dirs[i], dirs[i]) * vdot(dirs[j], dirs[j]))
                    sin2 = s2 if sin2 is None else min(sin2, s2)
            spread = dyadic_below_sqrt(sin2) if sin2 is not None else rat(1)
            t_count = len(users)
            eta0 = rho * shrink * spread / 4
            local = []
            for rank, (cid, ei, _t) in enumerate(users):
                a, b = by_curve[cid].edges[ei]
                e = vsub(b, a)
                tau = dyadic_below_sqrt(rho * rho * rat(9, 16) / vdot(e, e))
                ca = vsub(p, vscale(e, tau))
                cb = vadd(p, vscale(e, tau))
                eta = eta0 * rat((rank + 1) ** power, t_count ** power)
                off = vscale(u, eta)
                mid = [ca, vadd(ca, off), vadd(cb, off), cb]
                local.append((cid, ei, ca, cb, mid))
            r2 = rho * rho
            for _, _, _, _, mid in local:
                for q in mid:
                    if d2_pp(q, p) >= r2:
                        ok = False
            for i in range(len(local)):
                for j in range(i + 1, len(local)):
                    mi = Polyline("a", local[i][4])
                    mj = Polyline("b", local[j][4])
                    try:
                        pts = [h[2] for h in crossings_detailed(mi, mj)]
                    except DegeneratePair:
                        ok = False
                        break
                    if len(pts) != 1 or d2_pp(pts[0], p) >= r2:
                        ok = False
                if not ok:
                    break
            if not ok:
                break
            for cid, ei, ca, cb, mid in local:
                edits.setdefault(cid, []).append((ei, ca, cb, mid))
        if not ok:
            continue

        out = []
        for c in curves:
            if c.id not in edits:
                out.append(c)
                continue
            edge_edits = {}
            for ei, ca, cb, mid in edits[c.id]:
                edge_edits.setdefault(ei, []).append((ca, cb, mid))
            new_pts = [c.points[0]]
            for ei in range(len(c.points) - 1):
                a, b = c.points[ei], c.points[ei + 1]
                if ei in edge_edits:
                    e = vsub(b, a)
                    items = sorted(edge_edits[ei],
                                   key=lambda it: vdot(vsub(it[0], a), e))
                    for _ca, _cb, mid in items:
                        new_pts.extend(mid)
                new_pts.append(b)
            out.append(Polyline(c.id, compress_chain(new_pts)))

        cand = fam.with_curves(tuple(sorted(out, key=lambda c: c.id)))
        gp2 = general_position_check(list(cand.curves))
        if not gp2.ok:
            continue
        after = {}
        good = True
        cs = sorted(cand.curves, key=lambda c: c.id)
        for i, a in enumerate(cs):
            for b in cs[i + 1:]:
                try:
                    n = len(crossings_detailed(a, b))
                except DegeneratePair:
                    good = False
                    break
                if n != pair_counts.get((a.id, b.id), 0):
                    good = False
                    break
                if n > 1:
                    good = False
                    break
            if not good:
                break
        if good:
            return cand
    raise UnresolvableDegeneracy("perturbation did not stabilize")
