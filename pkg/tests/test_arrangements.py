import pytest

from pseudoseg.arrangements import (ArrangementCells, KSegment, WiringDiagram,
                                    ZoneResult, enumerate_cut_paths,
                                    enumerate_k_segments, k_zone,
                                    ksegment_bound_audit, ksegment_witness,
                                    random_wiring, realize_wiring,
                                    zone_recurrence_table)
from pseudoseg.errors import (BoundViolated, InvalidSize, KOutOfRange,
                              MalformedWiring, UnknownLine)
from pseudoseg.geom import crossings_detailed, crossing_count
from pseudoseg.rational import rat


def all_wirings(n):
    # every maximal sequence of admissible swaps sorts the wires
    out = []

    def grow(perm, crossed, swaps):
        done = True
        for lv in range(1, n):
            a, b = perm[lv - 1], perm[lv]
            key = (a, b) if a < b else (b, a)
            if key in crossed:
                continue
            done = False
            perm2 = list(perm)
            perm2[lv - 1], perm2[lv] = perm2[lv], perm2[lv - 1]
            grow(perm2, crossed | {key}, swaps + (lv,))
        if done:
            out.append(WiringDiagram(n, swaps))

    grow(list(range(1, n + 1)), set(), ())
    return out


def zone_oracle(cells, p, k, side):
    # independent recount: the dual distance between two cells equals the
    # number of lines separating them, so seed from the cells along p and
    # take the fewest separating non-p lines
    n = cells.n

    def sides(fid):
        f = cells.faces[fid]
        return tuple(1 if cells.level_of(q, f.slab_lo) <= f.gap else -1
                     for q in range(1, n + 1))

    seeds = set()
    for e in cells.edges_of_line(p):
        seeds.add(e.above)
        seeds.add(e.below)
    sv = {fid: sides(fid) for fid in cells.faces}

    def dist(fid):
        return min(sum(1 for q in range(1, n + 1)
                       if q != p and sv[s][q - 1] != sv[fid][q - 1])
                   for s in seeds)

    out = []
    for eid in sorted(cells.edges):
        if eid[0] == p:
            continue
        sgn = cells.edge_side(eid, p)
        if side == "upper" and sgn <= 0:
            continue
        if side == "lower" and sgn >= 0:
            continue
        e = cells.edges[eid]
        if min(dist(e.above), dist(e.below)) <= k - 1:
            out.append(eid)
    return out


def test_wiring_validation():
    WiringDiagram(1, ())
    WiringDiagram(2, (1,))
    WiringDiagram(3, (1, 2, 1))
    with pytest.raises(MalformedWiring):
        WiringDiagram(2, ())
    with pytest.raises(MalformedWiring):
        WiringDiagram(2, (2,))
    with pytest.raises(MalformedWiring):
        WiringDiagram(3, (1, 1, 2))
    with pytest.raises(MalformedWiring):
        WiringDiagram(0, ())


def test_cell_counts():
    for n, swaps in [(1, ()), (2, (1,)), (3, (1, 2, 1)), (3, (2, 1, 2)),
                     (4, (1, 2, 3, 1, 2, 1))]:
        cells = realize_wiring(WiringDiagram(n, swaps))
        assert len(cells.vertices) == n * (n - 1) // 2
        assert len(cells.edges) == n * n
        assert len(cells.faces) == n * (n - 1) // 2 + n + 1


def test_two_line_structure():
    cells = realize_wiring(WiringDiagram(2, (1,)))
    assert cells.vertices[0].point == (rat(1), rat(3, 2))
    assert cells.vertices[0].wires == (1, 2)
    e10, e11 = cells.edges[(1, 0)], cells.edges[(1, 1)]
    e20, e21 = cells.edges[(2, 0)], cells.edges[(2, 1)]
    assert (e10.slab_lo, e10.slab_hi) == (0, 0)
    assert (e11.slab_lo, e11.slab_hi) == (1, 1)
    assert (e10.above, e10.below) == (1, 0)
    assert (e11.above, e11.below) == (2, 3)
    assert (e20.above, e20.below) == (2, 1)
    assert (e21.above, e21.below) == (3, 0)
    gaps = {fid: f.gap for fid, f in cells.faces.items()}
    assert gaps == {0: 0, 1: 1, 2: 2, 3: 1}


def test_wire_geometry():
    cells = realize_wiring(WiringDiagram(2, (1,)))
    assert cells.wire_y(1, 0) == 1
    assert cells.wire_y(1, 1) == rat(3, 2)
    assert cells.wire_y(1, 2) == 2
    assert cells.wire_y(2, 2) == 1
    assert cells.gap_mid(1, 0) == rat(3, 2)
    assert cells.gap_mid(0, 0) == rat(1, 2)
    assert cells.gap_mid(2, 2) == rat(5, 2)
    with pytest.raises(ValueError):
        cells.wire_y(1, 10)
    with pytest.raises(UnknownLine):
        cells.wire_drawing(3)


def test_wires_cross_once_geometrically():
    for w in [WiringDiagram(3, (1, 2, 1)), random_wiring(5, 7)]:
        cells = realize_wiring(w)
        for a in range(1, cells.n + 1):
            for b in range(a + 1, cells.n + 1):
                cnt = crossing_count(cells.wire_drawing(a),
                                     cells.wire_drawing(b))
                assert cnt == 1


def test_zone_two_lines():
    cells = realize_wiring(WiringDiagram(2, (1,)))
    z = k_zone(cells, 1, 1, side="upper")
    assert z.edges == ((2, 0),)
    assert z.size == 1 and z.bound == 5 and z.pass_bound
    z = k_zone(cells, 1, 1, side="lower")
    assert z.edges == ((2, 1),)
    z = k_zone(cells, 1, 1, side="both")
    assert z.edges == ((2, 0), (2, 1))


def test_zone_argument_checks():
    cells = realize_wiring(WiringDiagram(2, (1,)))
    with pytest.raises(UnknownLine):
        k_zone(cells, 3, 1)
    with pytest.raises(KOutOfRange):
        k_zone(cells, 1, 0)
    with pytest.raises(ValueError):
        k_zone(cells, 1, 1, side="middle")


def test_zone_single_line_trivial():
    cells = realize_wiring(WiringDiagram(1, ()))
    z = k_zone(cells, 1, 1)
    assert z.size == 0 and z.bound == 0 and z.pass_bound


def test_zone_matches_separation_oracle():
    samples = [WiringDiagram(3, (1, 2, 1)), WiringDiagram(4, (2, 1, 3, 2, 1, 3))]
    samples += [random_wiring(5, s) for s in (1, 2, 3)]
    samples += [random_wiring(6, s) for s in (4, 5)]
    for w in samples:
        cells = realize_wiring(w)
        for p in range(1, cells.n + 1):
            for k in (1, 2, 3):
                for side in ("upper", "lower", "both"):
                    z = k_zone(cells, p, k, side=side)
                    assert list(z.edges) == zone_oracle(cells, p, k, side)
                    assert z.size < (2 if side == "both" else 1) * z.bound


def test_zone_monotone_in_k():
    cells = realize_wiring(random_wiring(6, 11))
    prev = set()
    for k in range(1, 6):
        cur = set(k_zone(cells, 2, k, side="both").edges)
        assert prev <= cur
        prev = cur
    # with k large enough every non-p edge is reachable
    assert len(prev) == cells.n * cells.n - cells.n


def test_ksegment_basics():
    cells = realize_wiring(WiringDiagram(2, (1,)))
    ones = enumerate_k_segments(cells, 1)
    assert len(ones) == 4
    twos = enumerate_k_segments(cells, 2)
    assert len(twos) == 4
    for ks in twos:
        assert len(set(ks.lines)) == 2
    with pytest.raises(KOutOfRange):
        enumerate_k_segments(cells, 0)
    with pytest.raises(KOutOfRange):
        enumerate_k_segments(cells, 3)


def test_ksegments_distinct_lines_and_deduped():
    cells = realize_wiring(random_wiring(5, 21))
    for k in (2, 3):
        found = enumerate_k_segments(cells, k)
        seen = set()
        for ks in found:
            assert len(set(ks.lines)) == k
            key = min(ks.edges, tuple(reversed(ks.edges)))
            assert key == ks.edges
            assert key not in seen
            seen.add(key)


def test_cut_path_counts_small():
    assert len(enumerate_cut_paths(realize_wiring(WiringDiagram(1, ())))) == 1
    assert len(enumerate_cut_paths(realize_wiring(WiringDiagram(2, (1,))))) == 4


def test_cut_path_bound_exhaustive():
    for n in (1, 2, 3, 4):
        ws = all_wirings(n)
        assert len(ws) == {1: 1, 2: 1, 3: 2, 4: 16}[n]
        for w in ws:
            cells = realize_wiring(w)
            cps = enumerate_cut_paths(cells)
            assert len(cps) <= 3 ** n
            for ks in cps:
                assert sorted(ks.lines) == list(range(1, n + 1))


def test_ksegment_count_within_audit_bound():
    for w in [random_wiring(4, 3), random_wiring(5, 9)]:
        cells = realize_wiring(w)
        for k in (2, 3):
            count = len(enumerate_k_segments(cells, k))
            report = ksegment_bound_audit(cells.n, k, count)
            assert report["pass"] and report["count"] == count


def witness_crossing_sequence(cells, witness):
    hits = []
    for q in range(1, cells.n + 1):
        for (i, t), _, _ in crossings_detailed(witness, cells.wire_drawing(q)):
            hits.append(((i, t), q))
    hits.sort()
    return [q for _, q in hits]


@pytest.mark.parametrize("n,seed", [(3, 1), (4, 2), (5, 3), (6, 4)])
def test_witness_curves_realize_ksegments(n, seed):
    cells = realize_wiring(random_wiring(n, seed))
    for k in (1, 2, min(4, n)):
        found = enumerate_k_segments(cells, k)
        step = max(1, len(found) // 12)
        for ks in found[::step]:
            wit = ksegment_witness(cells, ks)
            assert witness_crossing_sequence(cells, wit) in (
                list(ks.lines), list(reversed(ks.lines)))


def test_witness_lane_and_shift_checks():
    cells = realize_wiring(WiringDiagram(2, (1,)))
    ks = enumerate_k_segments(cells, 2)[0]
    with pytest.raises(ValueError):
        ksegment_witness(cells, ks, lane=rat(1))
    with pytest.raises(ValueError):
        ksegment_witness(cells, ks, column_shift=rat(1, 2))
    other = ksegment_witness(cells, ks, lane=rat(1, 3),
                             column_shift=rat(1, 8))
    assert witness_crossing_sequence(cells, other) in (
        list(ks.lines), list(reversed(ks.lines)))


def test_random_wiring_deterministic():
    a = random_wiring(6, 42)
    b = random_wiring(6, 42)
    c = random_wiring(6, 43)
    assert a == b
    assert a != c
    with pytest.raises(InvalidSize):
        random_wiring(0, 1)


def test_zone_recurrence_table_values():
    rows = zone_recurrence_table(2, 3)
    assert [r["a_k"] for r in rows] == [2, 7, 28]
    assert [r["zone_bound"] for r in rows] == [5, 20, 80]
    assert rows[0]["ring_bound"] is None
    assert rows[1]["ring_bound"] == 14
    rows = zone_recurrence_table(11, 3)
    assert rows[2]["a_k"] == 280 and rows[2]["zone_bound"] == 800
    with pytest.raises(InvalidSize):
        zone_recurrence_table(1, 2)
    with pytest.raises(InvalidSize):
        zone_recurrence_table(3, 0)


def test_ksegment_bound_audit_values():
    rep = ksegment_bound_audit(3, 3, 100)
    assert rep["bound"] == 1620 and rep["per_pair_cap"] == 9
    rep = ksegment_bound_audit(4, 2, 0)
    assert rep["bound"] == 160 and rep["per_pair_cap"] == 2
    for k in range(2, 21):
        assert ksegment_bound_audit(2, k, 0)["constant_ok"]
    with pytest.raises(KOutOfRange):
        ksegment_bound_audit(3, 1, 0)
    with pytest.raises(BoundViolated):
        ksegment_bound_audit(2, 2, 40)


def test_realization_deterministic():
    w = random_wiring(5, 17)
    a, b = realize_wiring(w), realize_wiring(w)
    assert a.edges == b.edges
    assert a.faces == b.faces
    assert a.dual == b.dual
    assert [v.point for v in a.vertices] == [v.point for v in b.vertices]
