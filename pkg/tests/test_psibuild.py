import random

import pytest

from pseudoseg.errors import InvalidSize, InvalidTree, NotAStarFamily
from pseudoseg.geom import Polyline, crossing_count, crossings_detailed
from pseudoseg.psibuild import (box_form, build_psi, build_star_psi, perturb,
                                pick_circle_points)
from pseudoseg.psicheck import (check_disk_invariants, intersection_graph,
                                validate_psi)
from pseudoseg.psifamily import PsiFamily
from pseudoseg.rational import rat
from pseudoseg.trees import Tree, vpt_graph


def star_tree(m):
    return Tree([("v", str(i)) for i in range(1, m + 1)])


# two inner nodes, two leaves each; the smallest tree needing surgery
TWO_INNER = Tree([("x", "a"), ("x", "b"), ("x", "y"), ("y", "c"),
                  ("y", "d")])

# chain of three inner nodes; regression: the twist of a bundle and its
# rerouted window can share one straight chord
CATERPILLAR = Tree([("x", "a"), ("x", "b"), ("x", "y"), ("y", "c"),
                    ("y", "z"), ("z", "d"), ("z", "e")])


def random_trees(count, seed):
    """Deterministic sample of trees with <= 4 inner nodes and <= 10
    leaves; every draw is retried until the shape bounds hold."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n_inner = rng.randint(1, 4)
        n_leaves = rng.randint(2, 10)
        inner = [f"i{k}" for k in range(n_inner)]
        edges = [(inner[rng.randrange(k)], inner[k])
                 for k in range(1, n_inner)]
        edges += [(rng.choice(inner), f"l{j}") for j in range(n_leaves)]
        try:
            t = Tree(edges)
        except InvalidTree:
            continue
        if len(t.inner_nodes) > 4 or not 2 <= len(t.leaves) <= 10:
            continue
        out.append(t)
    return out


def test_pick_circle_points_on_circle_and_deterministic():
    pts = pick_circle_points(6)
    assert len(pts) == 6
    for x, y in pts:
        assert x * x + y * y == 1
    assert pts == pick_circle_points(6)
    assert pts[:4] == pick_circle_points(4)


def slope_count(pts):
    slopes = set()
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            dx, dy = q[0] - p[0], q[1] - p[1]
            slopes.add(None if dx == 0 else rat(dy) / dx)
    return len(slopes)


def test_pick_circle_points_slopes_distinct():
    assert slope_count(pick_circle_points(2)) == 1
    assert slope_count(pick_circle_points(4)) == 6
    assert slope_count(pick_circle_points(8)) == 28


def test_build_star_psi_m2():
    fam = build_star_psi(2)
    assert sorted(fam.curve_ids) == ["1,1", "1,2", "2,2"]
    chord = fam.curve("1,2")
    assert crossing_count(chord, fam.curve("1,1")) == 1
    assert crossing_count(chord, fam.curve("2,2")) == 1
    assert crossing_count(fam.curve("1,1"), fam.curve("2,2")) == 0
    with pytest.raises(InvalidSize):
        build_star_psi(1)


def test_build_star_psi_m5_counts():
    fam = build_star_psi(5)
    assert len(fam.curves) == 15
    chords = [c for c in fam.curves if len(set(c.id.split(","))) == 2]
    trivials = [c for c in fam.curves if len(set(c.id.split(","))) == 1]
    assert len(chords) == 10 and len(trivials) == 5
    for i, a in enumerate(chords):
        for b in chords[i + 1:]:
            assert crossing_count(a, b) == 1
    for t in trivials:
        leaf = t.id.split(",")[0]
        partners = sorted(c.id for c in chords if crossing_count(t, c) == 1)
        assert partners == sorted(c.id for c in chords
                                  if leaf in c.id.split(","))


def test_star5_graph_matches_vpt():
    g = intersection_graph(build_star_psi(5))
    assert g == vpt_graph(star_tree(5))
    assert g.edge_count == 65


def test_star_disk_invariants():
    rep = check_disk_invariants(build_star_psi(5))
    assert all(f.passed for f in rep.disk_findings)


def crossing_orders(fam):
    """Per curve: the sequence of crossing groups along the curve, ties
    (concurrent points) folded into one group, orientation ignored."""
    curves = sorted(fam.curves, key=lambda c: c.id)
    orders = {}
    for c in curves:
        hits = []
        for other in curves:
            if other.id == c.id:
                continue
            for (ei, t), _, _p in crossings_detailed(c, other):
                hits.append((ei, t, other.id))
        hits.sort(key=lambda h: (h[0], h[1]))
        groups = []
        for ei, t, oid in hits:
            if groups and groups[-1][0] == (ei, t):
                groups[-1][1].add(oid)
            else:
                groups.append([(ei, t), {oid}])
        seq = tuple(tuple(sorted(g[1])) for g in groups)
        orders[c.id] = min(seq, seq[::-1])
    return orders


def test_box_form_m2():
    box = box_form(build_star_psi(2))
    assert sorted(box.curve_ids) == ["1,1", "1,2", "2,2"]
    for t in ("1,1", "2,2"):
        (x0, y0), (x1, y1) = box.curve(t).points
        assert y0 == y1  # re-attached diameters are horizontal
    assert len(box.disks) == 2


def test_box_form_preserves_crossing_orders():
    for m in range(2, 8):
        star = build_star_psi(m)
        box = box_form(star)
        assert intersection_graph(box) == intersection_graph(star)
        assert crossing_orders(box) == crossing_orders(star)


def test_box_form_disks_left_to_right():
    box = box_form(build_star_psi(5))
    xs = [d.center[0] for d in sorted(box.disks, key=lambda d: d.leaf)]
    assert len(set(xs)) == 5
    spans = []
    for c in box.curves:
        i, j = c.id.split(",")
        if i != j:
            spans.append(abs(c.points[-1][0] - c.points[0][0]))
    # every chord traverses the whole box, so all spans agree
    assert len(set(spans)) == 1


def test_box_form_rejects_non_star():
    star = build_star_psi(3)
    with pytest.raises(NotAStarFamily):
        box_form(star.subfamily(["1,1", "1,2"]))
    bent = PsiFamily((Polyline("1,1", ((0, 0), (1, 0), (1, 1))),),
                     star.disks[:1], star_tree(1) if False else None)
    with pytest.raises(NotAStarFamily):
        box_form(bent)


def test_build_psi_base_case_matches_star():
    fam = build_psi(star_tree(5))
    ref = build_star_psi(5)
    assert fam.curves == ref.curves
    assert fam.disks == ref.disks
    with pytest.raises(InvalidTree):
        build_psi(Tree([], nodes=["v"]))


def full_check(t):
    fam = perturb(build_psi(t))
    rep = check_disk_invariants(fam)
    assert rep.is_psi, rep.failed_findings or rep.offending_pairs
    assert rep.graph == vpt_graph(t)
    return fam


def test_build_psi_two_inner_nodes():
    fam = full_check(TWO_INNER)
    assert len(fam.curves) == 10  # C(4,2) chords + 4 trivials


def test_build_psi_caterpillar():
    full_check(CATERPILLAR)


def test_perturb_resolves_triple_concurrence():
    fam = PsiFamily((
        Polyline("a,b", ((-1, 0), (1, 0))),
        Polyline("a,c", ((0, -1), (0, 1))),
        Polyline("b,c", ((-1, -1), (1, 1))),
    ))
    out = perturb(fam)
    assert validate_psi(out).is_psi
    ids = sorted(out.curve_ids)
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            pts = crossings_detailed(out.curve(a), out.curve(b))
            assert len(pts) == 1
            p = pts[0][2]
            assert p[0] * p[0] + p[1] * p[1] < rat(1, 4)


def test_perturb_fixed_point_on_generic_family():
    fam = PsiFamily((
        Polyline("a,b", ((0, 0), (4, 4))),
        Polyline("c,d", ((0, 4), (4, 0))),
    ))
    assert perturb(fam) is fam


def test_perturb_preserves_crossing_pairs():
    raw = build_psi(TWO_INNER)
    assert intersection_graph(perturb(raw)) == intersection_graph(raw)


def test_random_tree_suite():
    for t in random_trees(30, 20260821):
        full_check(t)
