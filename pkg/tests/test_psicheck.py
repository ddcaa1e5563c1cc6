import pytest

from pseudoseg.errors import InvalidSize, MissingDiskData, UnknownId
from pseudoseg.geom import Polyline
from pseudoseg.psicheck import (COND_A, COND_B, check_disk_invariants,
                                intersection_graph, validate_psi)
from pseudoseg.psifamily import Disk, PsiFamily
from pseudoseg.trees import SimpleGraph, Tree


def seg(cid, a, b):
    return Polyline(cid, (a, b))


def test_disk_validation():
    with pytest.raises(InvalidSize):
        Disk((0, 0), 0, "a")
    with pytest.raises(InvalidSize):
        Disk((0, 0), -1, "a")
    d = Disk((1, 2), "1/2", "a")
    assert d.radius == Disk((0, 0), "2/4", "b").radius


def test_family_rejects_duplicate_ids():
    c = seg("a,b", (0, 0), (1, 0))
    with pytest.raises(InvalidSize):
        PsiFamily((c, seg("a,b", (0, 1), (1, 1))))


def test_family_rejects_overlapping_disks():
    with pytest.raises(InvalidSize):
        PsiFamily((), (Disk((0, 0), 2, "a"), Disk((3, 0), 2, "b")))
    # tangent disks are not disjoint either
    with pytest.raises(InvalidSize):
        PsiFamily((), (Disk((0, 0), 1, "a"), Disk((2, 0), 1, "b")))
    PsiFamily((), (Disk((0, 0), 1, "a"), Disk((3, 0), 1, "b")))


def test_family_checks_host_tree_pairs():
    t = Tree([("v", "a"), ("v", "b")])
    full = (seg("a,a", (0, 0), (1, 0)), seg("a,b", (0, 1), (1, 1)),
            seg("b,b", (0, 2), (1, 2)))
    fam = PsiFamily(full, (), t)
    assert fam.host_tree == t
    with pytest.raises(InvalidSize):
        PsiFamily(full[:2], (), t)  # b,b missing
    with pytest.raises(InvalidSize):
        PsiFamily(full + (seg("a,c", (5, 5), (6, 5)),), (), t)


def test_family_lookups():
    fam = PsiFamily((seg("a,b", (0, 0), (1, 1)),),
                    (Disk((0, 0), 1, "a"),))
    assert fam.curve("a,b").id == "a,b"
    with pytest.raises(UnknownId):
        fam.curve("a,c")
    assert fam.disk("a").leaf == "a"
    with pytest.raises(MissingDiskData):
        fam.disk("b")
    with pytest.raises(UnknownId):
        fam.subfamily(["a,b", "zz"])
    sub = fam.subfamily(["a,b"])
    assert sub.host_tree is None and sub.curve_ids == ("a,b",)


def test_intersection_graph_disjoint_pair():
    fam = PsiFamily((seg("a,a", (0, 0), (1, 0)), seg("b,b", (0, 1), (1, 1))))
    g = intersection_graph(fam)
    assert g.vertices == ("a,a", "b,b")
    assert g.edge_count == 0


def test_intersection_graph_isolated_curve_added():
    base = (seg("a,b", (0, 0), (2, 2)), seg("a,a", (0, 2), (2, 0)))
    g1 = intersection_graph(PsiFamily(base))
    far = seg("c,c", (100, 100), (101, 100))
    g2 = intersection_graph(PsiFamily(base + (far,)))
    assert g2.vertices == ("a,a", "a,b", "c,c")
    assert g2.edges == g1.edges
    assert g2.degree("c,c") == 0


def test_validate_psi_flags_double_crossing():
    # zigzag meets the horizontal segment twice
    zig = Polyline("a,b", ((0, -1), (1, 1), (2, -1)))
    flat = seg("c,d", (-1, 0), (3, 0))
    rep = validate_psi(PsiFamily((zig, flat)))
    assert not rep.is_psi
    assert rep.offending_pairs == (("a,b", "c,d", 2),)
    assert rep.graph.has_edge("a,b", "c,d")


def test_validate_psi_empty_family():
    rep = validate_psi(PsiFamily(()))
    assert rep.is_psi
    assert rep.graph.vertices == () and rep.graph.edge_count == 0


def test_validate_psi_counts_touch_as_contact_not_crossing():
    # endpoint resting on another curve: not generic, not a crossing
    a = seg("a,b", (0, 0), (2, 0))
    b = seg("c,d", (1, 0), (1, 1))
    rep = validate_psi(PsiFamily((a, b)))
    assert not rep.is_psi  # general position fails
    assert rep.offending_pairs == ()
    assert rep.graph.has_edge("a,b", "c,d")


def test_check_disk_invariants_needs_disks():
    with pytest.raises(MissingDiskData):
        check_disk_invariants(PsiFamily((seg("a,a", (0, 0), (1, 0)),)))


def test_condition_a_violation_reported():
    # a,b clips the disk of c
    fam = PsiFamily(
        (seg("a,b", (-10, 0), (10, 0)),
         seg("c,c", (-1, 5), (1, 5))),
        (Disk((0, 0), 1, "c"),))
    rep = check_disk_invariants(fam)
    f = [x for x in rep.disk_findings if x.condition == COND_A][0]
    assert not f.passed
    assert "a,b:meets" in f.detail
    assert "c,c:misses" in f.detail
    assert not rep.is_psi


def test_condition_b_violation_reported():
    # both meet the disk of a but their crossing (10,0) is far outside
    fam = PsiFamily(
        (seg("a,b", (-1, 0), (12, 0)),
         seg("a,c", (0, -1), (20, 1))),
        (Disk((0, 0), 2, "a"),))
    rep = check_disk_invariants(fam)
    conds = {x.condition: x for x in rep.disk_findings}
    assert conds[COND_A].passed
    assert not conds[COND_B].passed
    assert "a,bxa,c:outside" in conds[COND_B].detail


def test_condition_b_counts_missing_crossing():
    fam = PsiFamily(
        (seg("a,b", (-3, 1), (3, 1)), seg("a,c", (-3, -1), (3, -1))),
        (Disk((0, 0), 2, "a"),))
    rep = check_disk_invariants(fam)
    conds = {x.condition: x for x in rep.disk_findings}
    assert not conds[COND_B].passed
    assert "0crossings" in conds[COND_B].detail


def test_condition_a_connectivity():
    """A curve that leaves its own disk and dips back in is flagged even
    though membership is correct."""
    wiggle = Polyline("a,b", ((-5, 1), (0, 1), (0, 5), (1, 5), (1, 1),
                              (5, 1)))
    fam = PsiFamily((wiggle,), (Disk((0, 0), 2, "a"),))
    rep = check_disk_invariants(fam)
    f = [x for x in rep.disk_findings if x.condition == COND_A][0]
    assert not f.passed
    assert "a,b:disconnected" in f.detail


def _cross_family():
    # four segments, generic, pairwise crossings: a,b x c,d only
    return PsiFamily((
        seg("a,b", (0, 0), (4, 4)),
        seg("c,d", (0, 4), (4, 0)),
        seg("e,f", (10, 0), (14, 1)),
    ))


def test_monotone_under_deletion():
    fam = _cross_family()
    assert validate_psi(fam).is_psi
    for drop in fam.curve_ids:
        kept = [i for i in fam.curve_ids if i != drop]
        assert validate_psi(fam.subfamily(kept)).is_psi


def test_subfamily_graph_is_induced_subgraph():
    fam = _cross_family()
    g = intersection_graph(fam)
    for keep in (("a,b", "c,d"), ("a,b", "e,f"), ("c,d", "e,f")):
        sub = intersection_graph(fam.subfamily(keep))
        assert sub == g.induced(keep)


def test_report_graph_matches_intersection_graph():
    fam = _cross_family()
    rep = validate_psi(fam)
    assert rep.graph == intersection_graph(fam)
    assert rep.graph == SimpleGraph.from_edges(
        fam.curve_ids, [("a,b", "c,d")])
