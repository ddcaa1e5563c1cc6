import pytest

from pseudoseg.arrangements import WiringDiagram, random_wiring
from pseudoseg.errors import InvalidTree, MalformedFile, MalformedWiring
from pseudoseg.geom import Polyline
from pseudoseg.io import (FamilyDocument, parse_any, parse_document,
                          parse_family, parse_tree, parse_wiring,
                          serialize_document, serialize_family,
                          serialize_tree, serialize_wiring)
from pseudoseg.psibuild import build_star_psi
from pseudoseg.psifamily import Disk, PsiFamily
from pseudoseg.trees import Tree


def pl(cid, pts, closed=False):
    return Polyline(cid, tuple(pts), closed)


def test_tree_round_trip():
    t = Tree([("v", "a"), ("v", "b"), ("v", "w"), ("w", "c")])
    assert parse_tree(serialize_tree(t)) == t


def test_single_node_tree_round_trip():
    t = Tree([], nodes=["z"])
    assert parse_tree(serialize_tree(t)) == t


def test_tree_cycle_is_named():
    text = ('{"tree":{"edges":[["a","b"],["b","c"],["c","a"]],'
            '"nodes":[]}}')
    with pytest.raises(InvalidTree) as err:
        parse_tree(text)
    msg = str(err.value)
    assert "cycle:" in msg
    for name in ("a", "b", "c"):
        assert name in msg


def test_tree_bad_shape():
    with pytest.raises(MalformedFile):
        parse_tree('{"tree":{"edges":[["a"]]}}')
    with pytest.raises(MalformedFile):
        parse_tree('{"edges":[]}')
    with pytest.raises(MalformedFile):
        parse_tree("[1,2]")
    with pytest.raises(MalformedFile):
        parse_tree("not json")


def test_wiring_round_trip():
    w = random_wiring(5, 7)
    assert parse_wiring(serialize_wiring(w)) == w
    assert parse_wiring(serialize_wiring(WiringDiagram(1, ()))) == \
        WiringDiagram(1, ())


def test_wiring_errors():
    with pytest.raises(MalformedFile):
        parse_wiring('{"wiring":{"n":true,"swaps":[]}}')
    with pytest.raises(MalformedFile):
        parse_wiring('{"wiring":{"n":2,"swaps":[1.5]}}')
    # structurally fine, combinatorially wrong
    with pytest.raises(MalformedWiring):
        parse_wiring('{"wiring":{"n":2,"swaps":[]}}')


def test_family_round_trip_with_tree_and_log():
    fam = build_star_psi(3)
    assert fam.host_tree is not None
    assert fam.build_log
    again = parse_family(serialize_family(fam))
    assert again == fam


def test_numbers_are_ratio_strings():
    fam = PsiFamily((pl("a", [("1/2", 0), (1, "3/4")]),),
                    (Disk(("1/3", 2), "5/7", "a"),))
    text = serialize_family(fam)
    assert '"1/2"' in text and '"3/4"' in text
    assert '"5/7"' in text
    # integer-valued coordinates print bare
    assert '"1"' in text
    assert parse_family(text) == fam


def test_document_round_trip_with_audit_sections():
    fam = PsiFamily(())
    doc = FamilyDocument(
        fam,
        base=(pl("b1", [(0, 0), (4, 0)]), pl("b2", [(1, -1), (3, 3)])),
        threesegments=(pl("t", [("1/2", 2), (5, 2)]),),
        sticks=(4, (pl("s", [("1/2", "1/2"), ("7/2", "1/2")]),)))
    text = serialize_document(doc)
    assert '"count":"4"' in text
    assert parse_document(text) == doc


def test_absent_and_empty_sections_differ():
    empty = FamilyDocument(PsiFamily(()), threesegments=())
    absent = FamilyDocument(PsiFamily(()))
    assert parse_document(serialize_document(empty)).threesegments == ()
    assert parse_document(serialize_document(absent)).threesegments is None
    assert empty != absent


def test_floats_rejected():
    with pytest.raises(MalformedFile):
        parse_family('{"curves":[{"id":"a","closed":false,'
                     '"points":[[0.5,0],[1,1]]}]}')


def test_unknown_keys_rejected():
    with pytest.raises(MalformedFile):
        parse_family('{"curves":[],"color":"red"}')
    with pytest.raises(MalformedFile):
        parse_family('{"curves":[{"id":"a","points":[["0","0"],["1","1"]],'
                     '"close":true}]}')


def test_sticks_count_must_be_integer():
    with pytest.raises(MalformedFile):
        parse_document('{"curves":[],"sticks":{"count":"7/2",'
                       '"segments":[]}}')
    with pytest.raises(MalformedFile):
        parse_document('{"curves":[],"sticks":{"segments":[]}}')


def test_parse_any_dispatch():
    t = Tree([("v", "a"), ("v", "b")])
    w = random_wiring(3, 1)
    fam = build_star_psi(2)
    assert parse_any(serialize_tree(t)) == t
    assert parse_any(serialize_wiring(w)) == w
    assert parse_any(serialize_family(fam)).family == fam
    with pytest.raises(MalformedFile):
        parse_any('{"something":1}')


def test_serialization_is_stable():
    fam = build_star_psi(4)
    assert serialize_family(fam) == serialize_family(fam)
    w = random_wiring(6, 3)
    assert serialize_wiring(w) == serialize_wiring(w)
