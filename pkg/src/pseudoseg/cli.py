"""Command-line surface over the library and its file formats.

Every command prints one JSON report (sorted keys, with a "verdict" of
"pass", "fail", or "error") to standard output and a short human
summary to standard error; the single exception is --count-only, which
prints a bare integer line. Exit codes: 0 all checks passed, 1 the
inputs were unusable, 2 a verification or bound check failed on
readable inputs. Randomized commands take an explicit --seed and draw
no ambient entropy. PSEUDOSEG_THREADS is read and validated as a
worker cap, but commands run single-process, so it never changes
output.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import io
from .arrangements import (enumerate_cut_paths, enumerate_k_segments,
                           k_zone, ksegment_bound_audit, ksegment_witness,
                           random_wiring, realize_wiring)
from .audit import (audit_counts, check_parity_lemmas, classify_3segments,
                    decompose_pieces, make_stick_config, stick_class,
                    stick_pattern, threshold_report)
from .errors import (BadCandidate, BoundViolated, DegenerateFamily,
                     DegenerateRay, DuplicateTriple, EmbeddingInconsistent,
                     InvalidSize, InvalidTree, KOutOfRange, MissingDiskData,
                     NotAnArrangement, OverlappingSmallSegments,
                     PseudosegError, UnknownLine, UnresolvableDegeneracy)
from .geom import Polyline, crossing_count
from .psibuild import build_psi, perturb
from .psicheck import check_disk_invariants, validate_psi
from .psifamily import PsiFamily
from .rational import rat, rat_from_str
from .render import LAYERS, RenderSpec, render_arrangement, render_family
from .trees import Tree, vpt_graph

# failures of the data itself, as opposed to unusable input files
_DATA_ERRORS = (BadCandidate, BoundViolated, DegenerateFamily,
                DegenerateRay, DuplicateTriple, EmbeddingInconsistent,
                NotAnArrangement, OverlappingSmallSegments)


class _InputProblem(Exception):
    """Anything that stops a command before its checks can start."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _InputProblem(message)


def _emit(report, human=()):
    sys.stdout.write(json.dumps(report, sort_keys=True,
                                separators=(",", ":")) + "\n")
    for line in human:
        sys.stderr.write(line + "\n")


def _fail(extra, human):
    report = dict(extra)
    report["verdict"] = "fail"
    _emit(report, human)
    return 2


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _InputProblem(f"cannot read {path}: {exc}")


def _write(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _InputProblem(f"cannot write {path}: {exc}")


def _load(path, parse):
    text = _read(path)
    try:
        return parse(text)
    except (PseudosegError, ValueError) as exc:
        raise _InputProblem(f"{path}: {exc}")


def _check_threads():
    raw = os.environ.get("PSEUDOSEG_THREADS")
    if raw is None:
        return
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        raise _InputProblem(
            f"PSEUDOSEG_THREADS must be a positive integer, got {raw!r}")
    # accepted as a worker cap; commands run single-process, so any
    # accepted value leaves output identical


# ---------------------------------------------------------------------------
# build / verify


def cmd_build(args):
    tree = _load(args.tree, io.parse_tree)
    try:
        fam = build_psi(tree)
        if not args.no_perturb:
            fam = perturb(fam)
    except (InvalidTree, InvalidSize) as exc:
        raise _InputProblem(str(exc))
    except UnresolvableDegeneracy as exc:
        return _fail({"error": str(exc)}, [f"build failed: {exc}"])
    _write(args.out, io.serialize_family(fam))
    if args.log:
        _write(args.log, "".join(line + "\n" for line in fam.build_log))
    _emit({"verdict": "pass", "curves": len(fam.curves),
           "disks": len(fam.disks), "out": args.out,
           "perturbed": not args.no_perturb},
          [f"wrote {args.out}: {len(fam.curves)} curves, "
           f"{len(fam.disks)} disks"])
    return 0


def cmd_verify(args):
    fam = _load(args.family, io.parse_family)
    try:
        if args.disks:
            try:
                rep = check_disk_invariants(fam)
            except MissingDiskData as exc:
                raise _InputProblem(str(exc))
        else:
            rep = validate_psi(fam)
    except DegenerateFamily as exc:
        return _fail({"error": str(exc)}, [f"degenerate family: {exc}"])
    report = {
        "curves": len(fam.curves),
        "is_psi": rep.is_psi,
        "offending_pairs": [[a, b, c] for a, b, c in rep.offending_pairs],
        "graph_edges": rep.graph.edge_count,
        "general_position": rep.gp.ok,
        "gp_violations": [{"kind": f.kind, "ids": list(f.ids)}
                          for f in rep.gp.violations],
        "disk_findings": [{"disk": f.disk, "condition": f.condition,
                           "passed": f.passed, "detail": f.detail}
                          for f in rep.disk_findings],
    }
    ok = rep.is_psi
    human = [f"{len(fam.curves)} curves: " +
             ("valid pseudosegment family" if rep.is_psi
              else "NOT a valid pseudosegment family")]
    for a, b, c in rep.offending_pairs:
        human.append(f"  {a} x {b}: {c} crossings")
    for f in rep.gp.violations[:8]:
        human.append(f"  general position: {f.kind} among "
                     + ", ".join(f.ids))
    for f in rep.disk_findings:
        if not f.passed:
            human.append(f"  disk {f.disk} {f.condition}: {f.detail}")
    if args.expect_tree:
        t = _load(args.expect_tree, io.parse_tree)
        want = vpt_graph(t)
        got = rep.graph
        missing = sorted(want.edges - got.edges)
        extra = sorted(got.edges - want.edges)
        verts_ok = set(want.vertices) == set(got.vertices)
        match = verts_ok and not missing and not extra
        report["expected_graph"] = {
            "match": match,
            "vertices_match": verts_ok,
            "missing_edges": [list(e) for e in missing],
            "extra_edges": [list(e) for e in extra],
        }
        ok = ok and match
        if match:
            human.append("crossing graph matches the tree's "
                         "leaf-path graph")
        else:
            human.append(f"crossing graph differs: {len(missing)} missing, "
                         f"{len(extra)} extra edges")
            for u, v in (missing + extra)[:8]:
                human.append(f"  {u} / {v}")
    report["verdict"] = "pass" if ok else "fail"
    _emit(report, human)
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# arrangement counting


def cmd_zone(args):
    cells = realize_wiring(_load(args.wiring, io.parse_wiring))
    try:
        zr = k_zone(cells, args.line, args.k, args.side)
    except (UnknownLine, KOutOfRange) as exc:
        raise _InputProblem(str(exc))
    except BoundViolated as exc:
        return _fail({"error": str(exc), "line": args.line, "k": args.k,
                      "side": args.side}, [f"bound violated: {exc}"])
    _emit({"verdict": "pass", "line": zr.p, "k": zr.k, "side": zr.side,
           "size": zr.size, "bound": zr.bound,
           "edges": [list(e) for e in zr.edges]},
          [f"zone of line {zr.p} at k={zr.k} ({zr.side}): {zr.size} edges, "
           f"bound {zr.bound}"])
    return 0


def cmd_ksegments(args):
    cells = realize_wiring(_load(args.wiring, io.parse_wiring))
    if not 2 <= args.k <= cells.n:
        raise _InputProblem(f"k must be in 2..{cells.n}, got {args.k}")
    segs = enumerate_k_segments(cells, args.k)
    try:
        row = ksegment_bound_audit(cells.n, args.k, len(segs))
    except BoundViolated as exc:
        return _fail({"error": str(exc), "count": len(segs)},
                     [f"bound violated: {exc}"])
    if args.count_only:
        sys.stdout.write(f"{len(segs)}\n")
        sys.stderr.write(f"{len(segs)} {args.k}-segments\n")
        return 0
    _emit({"verdict": "pass", "n": cells.n, "k": args.k,
           "count": row["count"], "bound": row["bound"],
           "margin": row["margin"], "per_pair_cap": row["per_pair_cap"],
           "constant_ok": row["constant_ok"],
           "segments": [[list(e) for e in ks.edges] for ks in segs]},
          [f"{len(segs)} {args.k}-segments, bound {row['bound']}"])
    return 0


def _max_clique(adj, budget):
    """Largest clique found within an expansion budget.

    Deterministic; exact reports whether the search ran to completion
    instead of hitting the budget.
    """
    nodes = sorted(adj)
    seed = []
    for v in nodes:
        if all(u in adj[v] for u in seed):
            seed.append(v)
    state = {"left": budget, "exact": True, "best": seed}

    def grow(clique, cand):
        if state["left"] <= 0:
            state["exact"] = False
            return
        state["left"] -= 1
        if len(clique) + len(cand) <= len(state["best"]):
            return
        if not cand:
            state["best"] = list(clique)
            return
        pivot = max(sorted(cand), key=lambda v: len(adj[v] & cand))
        for v in sorted(cand - adj[pivot]):
            grow(clique + [v], cand & adj[v])
            cand = cand - {v}
            if len(clique) + len(cand) <= len(state["best"]):
                return

    grow([], set(nodes))
    return state["best"], state["exact"]


def _compatible_experiment(cells, cutpaths):
    """Draw every cut-path as a witness curve on its own track and grow
    a subset whose drawn curves pairwise cross at most once.

    Purely observational: the subset size is what these particular
    drawings achieve, and no maximum is asserted. Pairs whose drawings
    touch degenerately are left out of the subset graph.
    """
    m = len(cutpaths)
    out = {"cutpaths": m, "compatible_pairs": 0, "pairs_degenerate": 0,
           "achieved": 0, "achieved_ids": [], "exact_for_tracks": True}
    if m == 0:
        return out
    curves = [ksegment_witness(cells, ks, lane=rat(2 * i + 1, 2 * m),
                               column_shift=rat(2 * i + 1 - m, 16 * m))
              for i, ks in enumerate(cutpaths)]
    adj = {i: set() for i in range(m)}
    for i in range(m):
        for j in range(i + 1, m):
            try:
                crossings = crossing_count(curves[i], curves[j])
            except DegenerateFamily:
                out["pairs_degenerate"] += 1
                continue
            if crossings <= 1:
                out["compatible_pairs"] += 1
                adj[i].add(j)
                adj[j].add(i)
    members, exact = _max_clique(adj, budget=50000)
    out["achieved"] = len(members)
    out["achieved_ids"] = sorted(members)
    out["exact_for_tracks"] = exact
    return out


def cmd_cutpaths(args):
    cells = realize_wiring(_load(args.wiring, io.parse_wiring))
    try:
        cps = enumerate_cut_paths(cells)
        row = (ksegment_bound_audit(cells.n, cells.n, len(cps))
               if cells.n >= 2 else None)
    except BoundViolated as exc:
        return _fail({"error": str(exc)}, [f"bound violated: {exc}"])
    if args.count_only:
        sys.stdout.write(f"{len(cps)}\n")
        sys.stderr.write(f"{len(cps)} cut-paths\n")
        return 0
    report = {"verdict": "pass", "n": cells.n, "count": len(cps),
              "limit": 3 ** cells.n,
              "cutpaths": [[list(e) for e in ks.edges] for ks in cps]}
    human = [f"{len(cps)} cut-paths, limit 3^{cells.n} = {3 ** cells.n}"]
    if row is not None:
        report["ksegment_bound"] = {"bound": row["bound"],
                                    "margin": row["margin"],
                                    "constant_ok": row["constant_ok"]}
    if cells.n <= 4:
        exp = _compatible_experiment(cells, cps)
        report["compatible_experiment"] = exp
        human.append(f"compatible subset achieved by drawn witnesses: "
                     f"{exp['achieved']} of {exp['cutpaths']} "
                     f"(search {'complete' if exp['exact_for_tracks'] else 'budget-cut'}; "
                     f"no maximum asserted)")
    _emit(report, human)
    return 0


# ---------------------------------------------------------------------------
# audits


def _stick_patterns(cfg):
    """Class of every stick segment, with ray-parity bits whenever the
    canonical probe tuple (one probe left of each stick, one at the far
    right) fits inside the configuration."""
    out = []
    for s in cfg.segments:
        i, j, k = sorted(int(v) for v in s.triple)
        entry = {"triple": [i, j, k], "class": stick_class(s), "bits": None}
        if i >= 2 and j >= i + 2 and k >= j + 2 and k < cfg.n:
            pat = stick_pattern(cfg, (i - 1, i, i + 1, j, j + 1, k, k + 1))
            entry["bits"] = list(pat.bits)
        out.append(entry)
    return out


def cmd_audit(args):
    doc = _load(args.file, io.parse_document)
    if doc.base is None:
        raise _InputProblem('missing "base" section')
    if doc.threesegments is None:
        raise _InputProblem('missing "threesegments" section')
    if args.lemmas and doc.sticks is None:
        raise _InputProblem('missing "sticks" section')
    try:
        basefam = PsiFamily(doc.base)
    except InvalidSize as exc:
        raise _InputProblem(f"base section: {exc}")
    try:
        decomp = decompose_pieces(basefam)
        segs = classify_3segments(decomp, doc.threesegments)
        rep = audit_counts(decomp, segs)
    except _DATA_ERRORS as exc:
        return _fail({"error": str(exc)}, [f"audit failed: {exc}"])
    report = rep.to_jsonable()
    human = rep.to_text()[:-1]
    ok = rep.ok
    if args.lemmas:
        count, segcurves = doc.sticks
        try:
            cfg = make_stick_config(count, segcurves)
            parity = check_parity_lemmas(cfg)
            patterns = _stick_patterns(cfg)
        except InvalidSize as exc:
            raise _InputProblem(str(exc))
        except _DATA_ERRORS as exc:
            return _fail({"error": str(exc)}, [f"stick audit failed: {exc}"])
        report["parity"] = parity.to_jsonable()
        report["patterns"] = patterns
        ok = ok and parity.ok
        human.append(f"parity: {len(parity.checks)} applicable instances, "
                     f"{len(parity.asserted)} asserted, "
                     f"{len(parity.failures)} failures")
    report["verdict"] = "pass" if ok else "fail"
    human.append("verdict: " + ("pass" if ok else "fail"))
    _emit(report, human)
    return 0 if ok else 2


def cmd_threshold(args):
    rep = threshold_report()
    report = rep.to_jsonable()
    report["verdict"] = "pass"
    _emit(report, rep.to_text())
    return 0


# ---------------------------------------------------------------------------
# generation / rendering


def _random_tree(inner, leaves, seed):
    """Deterministic random tree with exactly the requested counts of
    inner nodes and leaves."""
    if inner < 1:
        raise _InputProblem("--inner must be at least 1")
    if leaves < 2:
        raise _InputProblem("--leaves must be at least 2")
    rng = random.Random(seed)
    names_i = [f"i{k}" for k in range(inner)]
    names_l = [f"l{k}" for k in range(leaves)]
    for _ in range(256):
        edges = [(names_i[rng.randrange(k)], names_i[k])
                 for k in range(1, inner)]
        deg = {u: 0 for u in names_i}
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        # skeleton endpoints need a pendant leaf to stay inner
        need = [] if inner == 1 else [u for u in names_i if deg[u] <= 1]
        if len(need) > leaves:
            continue
        pool = list(names_l)
        rng.shuffle(pool)
        for u in need:
            edges.append((u, pool.pop()))
        for leaf in pool:
            edges.append((rng.choice(names_i), leaf))
        t = Tree(edges)
        if len(t.inner_nodes) == inner and len(t.leaves) == leaves:
            return t
    raise _InputProblem(
        f"no tree with {inner} inner nodes and {leaves} leaves found")


def cmd_gen(args):
    if (args.n is None) == (args.tree is None):
        raise _InputProblem("give exactly one of --n or --tree random")
    if args.n is not None:
        if args.n < 1:
            raise _InputProblem("--n must be at least 1")
        w = random_wiring(args.n, args.seed)
        _write(args.out, io.serialize_wiring(w))
        _emit({"verdict": "pass", "kind": "wiring", "n": args.n,
               "seed": args.seed, "swaps": len(w.swaps), "out": args.out},
              [f"wrote wiring n={args.n} ({len(w.swaps)} swaps) "
               f"to {args.out}"])
        return 0
    if args.inner is None or args.leaves is None:
        raise _InputProblem("--tree random needs --inner and --leaves")
    t = _random_tree(args.inner, args.leaves, args.seed)
    _write(args.out, io.serialize_tree(t))
    _emit({"verdict": "pass", "kind": "tree", "inner": args.inner,
           "leaves": args.leaves, "seed": args.seed, "nodes": len(t.nodes),
           "out": args.out},
          [f"wrote tree ({args.inner} inner, {args.leaves} leaves) "
           f"to {args.out}"])
    return 0


def _render_spec(args):
    kwargs = {}
    if args.width is not None:
        kwargs["width"] = args.width
    if args.height is not None:
        kwargs["height"] = args.height
    if args.stroke is not None:
        try:
            kwargs["stroke"] = rat_from_str(args.stroke)
        except ValueError as exc:
            raise _InputProblem(str(exc))
    if args.palette is not None:
        kwargs["palette"] = args.palette
    if args.layers is not None:
        kwargs["layers"] = tuple(s.strip() for s in args.layers.split(","))
    try:
        return RenderSpec(**kwargs)
    except InvalidSize as exc:
        raise _InputProblem(str(exc))


def _plot_family(doc):
    """One drawable family from every curve-carrying section of a
    document, plus the stick verticals for its sticks section."""
    curves = list(doc.family.curves)
    for section in (doc.base, doc.threesegments):
        if section:
            curves.extend(section)
    sticks = ()
    if doc.sticks is not None:
        count, segs = doc.sticks
        curves.extend(segs)
        sticks = tuple(Polyline(str(i), ((rat(i), rat(0)), (rat(i), rat(1))))
                       for i in range(1, count + 1))
    try:
        return PsiFamily(tuple(curves), doc.family.disks), sticks
    except InvalidSize as exc:
        raise _InputProblem(f"cannot draw sections together: {exc}")


def cmd_render(args):
    parsed = _load(args.input, io.parse_any)
    spec = _render_spec(args)
    if isinstance(parsed, Tree):
        raise _InputProblem(
            "cannot render a tree file; give a family or wiring")
    if isinstance(parsed, io.FamilyDocument):
        fam, sticks = _plot_family(parsed)
        svg = render_family(fam, spec, sticks=sticks)
        kind = "family"
    else:
        cells = realize_wiring(parsed)
        highlight = None
        if args.zone_line is not None:
            try:
                highlight = k_zone(cells, args.zone_line, args.zone_k,
                                   args.zone_side)
            except (UnknownLine, KOutOfRange) as exc:
                raise _InputProblem(str(exc))
            except BoundViolated as exc:
                return _fail({"error": str(exc)},
                             [f"bound violated: {exc}"])
        svg = render_arrangement(cells, highlight, spec)
        kind = "wiring"
    _write(args.out, svg)
    _emit({"verdict": "pass", "kind": kind, "out": args.out,
           "bytes": len(svg.encode("utf-8"))},
          [f"wrote {args.out}"])
    return 0


# ---------------------------------------------------------------------------
# wiring (pun intended)


def _build_parser():
    p = _Parser(prog="pseudoseg",
                description="pseudosegment families and pseudoline "
                            "arrangement counting")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    b = sub.add_parser("build",
                       help="build a verified curve family from a tree file")
    b.add_argument("tree", help="tree file")
    b.add_argument("out", help="family file to write")
    b.add_argument("--no-perturb", action="store_true",
                   help="keep concurrent hub points; the family may then "
                        "fail general position")
    b.add_argument("--log", metavar="PATH", help="also write the build log")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check a family file")
    v.add_argument("family", help="family file")
    v.add_argument("--expect-tree", metavar="PATH",
                   help="compare the crossing graph against this tree's "
                        "leaf-path graph")
    v.add_argument("--disks", action="store_true",
                   help="also check both leaf-disk conditions")
    v.set_defaults(func=cmd_verify)

    z = sub.add_parser("zone", help="k-zone of a line in a wiring")
    z.add_argument("wiring", help="wiring file")
    z.add_argument("--line", type=int, required=True, help="line number")
    z.add_argument("--k", type=int, default=1)
    z.add_argument("--side", choices=("upper", "lower", "both"),
                   default="upper")
    z.set_defaults(func=cmd_zone)

    ks = sub.add_parser("ksegments",
                        help="enumerate k-segments and audit the "
                             "counting bound")
    ks.add_argument("wiring", help="wiring file")
    ks.add_argument("--k", type=int, required=True, help="2..n")
    ks.add_argument("--count-only", action="store_true",
                    help="print just the count")
    ks.set_defaults(func=cmd_ksegments)

    cp = sub.add_parser("cutpaths",
                        help="enumerate cut-paths (k = n) and audit the "
                             "bounds; for n <= 4 also reports the drawn "
                             "compatible-subset experiment")
    cp.add_argument("wiring", help="wiring file")
    cp.add_argument("--count-only", action="store_true",
                    help="print just the count")
    cp.set_defaults(func=cmd_cutpaths)

    a = sub.add_parser("audit",
                       help="piece decomposition and counting audit of a "
                            "file with base/threesegments sections")
    a.add_argument("file", help="family file with audit sections")
    a.add_argument("--lemmas", action="store_true",
                   help="also run stick patterns and parity lemmas on the "
                        "sticks section")
    a.set_defaults(func=cmd_audit)

    th = sub.add_parser("threshold",
                        help="triple-count thresholds with witness "
                             "inequalities")
    th.set_defaults(func=cmd_threshold)

    g = sub.add_parser("gen", help="emit a random wiring or tree file")
    g.add_argument("--n", type=int, help="wiring size")
    g.add_argument("--tree", choices=("random",),
                   help="generate a tree instead of a wiring")
    g.add_argument("--inner", type=int, help="inner node count")
    g.add_argument("--leaves", type=int, help="leaf count")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--out", required=True, help="file to write")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("render", help="draw a family or wiring file as SVG")
    r.add_argument("input", help="family or wiring file")
    r.add_argument("-o", "--out", required=True, help="SVG file to write")
    r.add_argument("--width", type=int)
    r.add_argument("--height", type=int)
    r.add_argument("--stroke", help='stroke width as a "p/q" value')
    r.add_argument("--palette", choices=("default", "mono"))
    r.add_argument("--layers",
                   help="comma-separated subset of: " + ", ".join(LAYERS))
    r.add_argument("--zone-line", type=int,
                   help="wiring input: highlight this line's k-zone")
    r.add_argument("--zone-k", type=int, default=1)
    r.add_argument("--zone-side", choices=("upper", "lower", "both"),
                   default="upper")
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None):
    try:
        _check_threads()
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except _InputProblem as exc:
        _emit({"verdict": "error", "error": str(exc)}, [f"error: {exc}"])
        return 1


if __name__ == "__main__":
    sys.exit(main())
