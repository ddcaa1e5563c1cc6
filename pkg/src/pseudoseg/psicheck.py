"""Independent verification of curve families.

Everything here recomputes from raw coordinates with the exact
predicates; nothing trusts construction metadata. validate_psi never
raises on bad geometry, it reports findings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateFamily, MissingDiskData
from .geom import (_bbox_apart, _edges_bbox_apart, crossing_count,
                   crossing_points, general_position_check, disk_components,
                   in_disk, polyline_meets_disk, seg_contact)
from .trees import SimpleGraph

COND_A = "a"
COND_B = "b"


@dataclass(frozen=True)
class DiskFinding:
    disk: str
    condition: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    is_psi: bool
    offending_pairs: tuple
    graph: SimpleGraph
    disk_findings: tuple
    gp: object

    @property
    def failed_findings(self):
        return tuple(f for f in self.disk_findings if not f.passed)


def _pair_contacts(g, h):
    """(proper crossing count, any contact at all) for one curve pair,
    tolerant of degenerate touches; those are counted as contact but not
    as proper crossings."""
    proper = 0
    touched = False
    if _bbox_apart(g.bbox, h.bbox):
        return proper, touched
    for eg in g.edges:
        for eh in h.edges:
            if _edges_bbox_apart(eg[0], eg[1], eh[0], eh[1]):
                continue
            kind = seg_contact(eg[0], eg[1], eh[0], eh[1])
            if kind == "proper":
                proper += 1
                touched = True
            elif kind == "degenerate":
                touched = True
    return proper, touched


def intersection_graph(fam):
    """Vertex per curve, edge iff the two curves intersect.

    Requires general position; a degenerate contact raises through the
    underlying predicates (DegenerateFamily).
    """
    ids = sorted(fam.curve_ids)
    edges = []
    curves = sorted(fam.curves, key=lambda c: c.id)
    for i, a in enumerate(curves):
        for b in curves[i + 1:]:
            if crossing_count(a, b) >= 1:
                edges.append((a.id, b.id))
    return SimpleGraph.from_edges(ids, edges)


def _contact_graph(fam):
    ids = sorted(fam.curve_ids)
    counts = {}
    edges = []
    curves = sorted(fam.curves, key=lambda c: c.id)
    for i, a in enumerate(curves):
        for b in curves[i + 1:]:
            proper, touched = _pair_contacts(a, b)
            counts[(a.id, b.id)] = proper
            if touched:
                edges.append((a.id, b.id))
    return SimpleGraph.from_edges(ids, edges), counts


def validate_psi(fam, disk_findings=()):
    """Full pseudosegment check: every pair crosses at most once and the
    family is in general position. Findings are data, never exceptions.
    """
    gp = general_position_check(list(fam.curves))
    graph, counts = _contact_graph(fam)
    offending = tuple((a, b, c) for (a, b), c in sorted(counts.items())
                      if c > 1)
    ok = gp.ok and not offending and all(f.passed for f in disk_findings)
    return VerificationReport(ok, offending, graph, tuple(disk_findings), gp)


def _curve_leaves(cid):
    i, j = cid.split(",")
    return i, j


def check_disk_invariants(fam):
    """Check both disk conditions and fold them into a full report.

    (a) a curve meets the closed disk of leaf l iff l is one of its two
    leaves, and the piece inside the disk is a single connected
    sub-polyline; (b) any two curves meeting a disk cross exactly once,
    strictly inside it.
    """
    if not fam.disks:
        raise MissingDiskData("family carries no disks")
    findings = []
    curves = sorted(fam.curves, key=lambda c: c.id)
    for d in sorted(fam.disks, key=lambda d: d.leaf):
        bad_a = []
        visitors = []
        for c in curves:
            meets = polyline_meets_disk(c, d.center, d.radius, strict=False)
            if meets:
                visitors.append(c)
            should = d.leaf in _curve_leaves(c.id)
            if meets != should:
                bad_a.append(f"{c.id}:{'meets' if meets else 'misses'}")
            elif meets and disk_components(c, d.center, d.radius) != 1:
                bad_a.append(f"{c.id}:disconnected")
        findings.append(DiskFinding(
            d.leaf, COND_A, not bad_a,
            "ok" if not bad_a else " ".join(sorted(bad_a))))

        bad_b = []
        for i, a in enumerate(visitors):
            for b in visitors[i + 1:]:
                try:
                    pts = crossing_points(a, b)
                except DegenerateFamily:
                    bad_b.append(f"{a.id}x{b.id}:degenerate")
                    continue
                if len(pts) != 1:
                    bad_b.append(f"{a.id}x{b.id}:{len(pts)}crossings")
                elif not in_disk(pts[0], d.center, d.radius, strict=True):
                    bad_b.append(f"{a.id}x{b.id}:outside")
        findings.append(DiskFinding(
            d.leaf, COND_B, not bad_b,
            "ok" if not bad_b else " ".join(sorted(bad_b))))
    return validate_psi(fam, tuple(findings))
