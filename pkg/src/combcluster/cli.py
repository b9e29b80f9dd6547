"""Command-line front end: build, verify, pump, simulate, measure, export.

Exit codes: 0 success, 1 a verified property is false, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import builders
from .gaussian import NotBipartite, NotOrthogonal, condition_q, nullifier_stats, prepare_cluster
from .hankel import (
    NotBlockHankel,
    Permutation,
    WeightedGraph,
    apply_permutation,
    check_orthogonal,
    expand_shorthand,
    is_block_hankel,
    to_shorthand,
    two_coloring,
    two_path_conditions,
)
from .io import GraphFile, GraphFileError, parse_shorthand, to_dot
from .pump import CombSpec, compile_shorthand, validate_realizable
from .reduce import (
    MeasurementPattern,
    SignFrustrated,
    UnrollError,
    crown_form_map,
    degree_census,
    torus_form_map,
    apply_sign_flips,
    crown_to_ring,
    delete_measured,
    sign_normalize,
    torus_to_lattice,
    unroll_torus,
)

CROWN_FORMS = ("supergraph", "block", "hankel2")
TORUS_FORMS = ("supergraph", "block", "primed", "hankel2")
CHECKS = ("orthogonal", "two-path", "bipartite", "hankel")


class UsageError(Exception):
    """Bad input; reported on stderr with exit code 2."""


def family_graph(name: str, size: int, form: str) -> WeightedGraph:
    """Adjacency matrix of a named family member in the requested form."""
    if name == "crown":
        if form == "supergraph":
            return builders.build_crown_supergraph(size).expand()
        if form == "block":
            return expand_shorthand(builders.crown_block_hankel(size))
        if form == "hankel2":
            return expand_shorthand(builders.crown_full_hankel(size))
        raise UsageError(f"crown form must be one of {', '.join(CROWN_FORMS)}")
    if name == "torus":
        if form == "supergraph":
            return builders.build_torus_supergraph(size).expand()
        if form == "block":
            return expand_shorthand(builders.torus_skew_circulant_4(size))
        if form == "primed":
            return expand_shorthand(builders.torus_primed_4(size))
        if form == "hankel2":
            return expand_shorthand(builders.torus_block_hankel_2(size))
        raise UsageError(f"torus form must be one of {', '.join(TORUS_FORMS)}")
    raise UsageError(f"unknown family {name!r}")


def _read(path: str) -> GraphFile:
    try:
        return GraphFile.read(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _family(gf: GraphFile) -> tuple[str, int, str] | None:
    fam = gf.family
    if not fam:
        return None
    try:
        return str(fam["name"]), int(fam["size"]), str(fam["form"])
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed family record {fam!r}") from exc


def cmd_build(args) -> int:
    if args.family == "shorthand":
        if not args.text:
            raise UsageError("build shorthand needs --text")
        graph = expand_shorthand(parse_shorthand(args.text))
        gf = GraphFile(graph, "shorthand")
    else:
        size = args.macronodes if args.family == "crown" else args.m
        if size is None:
            raise UsageError("crown needs --macronodes" if args.family == "crown" else "torus needs --m")
        graph = family_graph(args.family, size, args.form)
        encoding = "dense" if args.form == "supergraph" else "shorthand"
        gf = GraphFile(graph, encoding, {"name": args.family, "size": size, "form": args.form})
    _write_text(args.output, gf.to_json())
    summary = f"modes={graph.n} block_size={graph.block_size} edges={graph.edge_count()}"
    if gf.encoding == "shorthand":
        summary += f" nonzero_shorthand={len(gf.shorthand.nonzero_indices())}"
    print(summary, file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return 0


def _fmt_pairs(items, limit=5) -> str:
    shown = ", ".join(str(x) for x in items[:limit])
    return shown + (f", ... ({len(items)} total)" if len(items) > limit else "")


def cmd_verify(args) -> int:
    gf = _read(args.input)
    g = gf.graph
    checks = args.checks.split(",") if args.checks else None
    if checks is None:
        checks = ["orthogonal", "two-path", "bipartite"]
        if gf.encoding == "shorthand":
            checks.append("hankel")
    bad = [c for c in checks if c not in CHECKS]
    if bad:
        raise UsageError(f"unknown checks {bad}; choose from {', '.join(CHECKS)}")
    result: dict = {"modes": g.n, "block_size": g.block_size, "checks": {}}
    lines = [f"{args.input}: {g.n} modes, block size {g.block_size}, {g.edge_count()} edges"]
    for name in checks:
        if name == "orthogonal":
            ok, residual = check_orthogonal(g)
            entries = [(i, j, str(w)) for i, j, w in residual.entries()]
            result["checks"][name] = {"pass": ok, "residual": [list(e) for e in entries[:20]]}
            detail = "" if ok else f"  residual of A@A - 1 at {_fmt_pairs(entries)}"
        elif name == "two-path":
            rep = two_path_conditions(g)
            closed = [(j, str(t)) for j, t in rep.closed]
            open_ = [(j, k, str(t)) for j, k, t in rep.open]
            ok = rep.ok
            result["checks"][name] = {
                "pass": ok,
                "closed": [list(c) for c in closed[:20]],
                "open": [list(o) + [p] for o, p in zip(open_[:20], rep.paths)],
            }
            detail = ""
            if closed:
                detail += f"  closed 2-path weights != 1 at (node, total) {_fmt_pairs(closed)}"
            if open_:
                single = sum(1 for p in rep.paths if p == 1)
                detail += (
                    ("\n" if detail else "")
                    + f"  uncancelled 2-paths at (j, k, total) {_fmt_pairs(open_)};"
                    + f" {single} pair(s) joined by exactly one 2-path"
                )
        elif name == "bipartite":
            diag = [int(i) for i in np.flatnonzero(g.weights.numerators.diagonal())]
            colour = two_coloring(g)
            ok = not diag and colour is not None
            reason = None if ok else (f"self-loop at node {diag[0]}" if diag else "odd cycle")
            result["checks"][name] = {"pass": ok, "reason": reason}
            detail = "" if ok else f"  {reason}"
        else:
            ok, where = is_block_hankel(g, g.block_size)
            result["checks"][name] = {"pass": ok, "violation": list(where) if where else None}
            detail = "" if ok else f"  block {where} breaks its skew-diagonal"
        lines.append(f"{name:<11} {'PASS' if ok else 'FAIL'}" + (f"\n{detail}" if detail else ""))
    result["pass"] = all(c["pass"] for c in result["checks"].values())
    print("\n".join(lines))
    if args.json:
        _write_text(args.json, json.dumps(result, indent=1) + "\n")
    return 0 if result["pass"] else 1


def cmd_pump(args) -> int:
    gf = _read(args.input)
    g = gf.graph
    ok, where = is_block_hankel(g, g.block_size)
    if not ok:
        raise UsageError(f"{NotBlockHankel(*where, g.block_size)}; rebuild with a block-Hankel form")
    s = to_shorthand(g, g.block_size)
    comb = CombSpec(args.offset_hz, args.fsr_hz, s.K, s.block_size)
    report = validate_realizable(g)
    if g.edge_count() and not report.compilable:
        print(f"warning: graph is not realizable as a cluster ({report.to_dict()})", file=sys.stderr)
    spec = compile_shorthand(s, comb)
    text = spec.to_csv() if args.format == "csv" else spec.to_json(indent=1) + "\n"
    _write_text(args.output, text)
    if args.output not in (None, "-"):
        print(f"{len(spec.lines)} pump lines")
    return 0


def _simulate_one(A: WeightedGraph, r: float) -> np.ndarray:
    return nullifier_stats(prepare_cluster(A, r), A).variances


def cmd_simulate(args) -> int:
    gf = _read(args.input)
    A = gf.graph
    if args.modes is not None and args.modes != A.n:
        raise UsageError(f"--modes {args.modes} does not match the {A.n}-mode adjacency matrix")
    r_values = args.squeezing or [1.0]
    with ThreadPoolExecutor() as pool:
        results = list(pool.map(lambda r: _simulate_one(A, r), r_values))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "node", "variance", "predicted"])
    for r, var in zip(r_values, results):
        pred = math.exp(-2 * r)
        for k, v in enumerate(var):
            writer.writerow([f"{r:.17g}", k, f"{v:.17g}", f"{pred:.17g}"])
    if args.report:
        _write_text(args.report, buf.getvalue())
    for r, var in zip(r_values, results):
        pred = math.exp(-2 * r)
        print(f"r={r:.17g} max_variance={var.max():.17g} predicted={pred:.17g} max_ratio={var.max() / pred:.17g}")
    return 0


def _load_pattern(spec: str, gf: GraphFile, layer: int) -> tuple[MeasurementPattern, str]:
    fam = _family(gf)
    if spec in ("crown-top", "torus-layers", "unroll"):
        if fam is None:
            raise UsageError(f"pattern {spec} needs a file built by 'build crown' or 'build torus'")
        name, size, form = fam
        want = "crown" if spec == "crown-top" else "torus"
        if name != want:
            raise UsageError(f"pattern {spec} applies to {want} files, not {name}")
        if spec == "crown-top":
            return MeasurementPattern.crown_top(size, form), spec
        if spec == "torus-layers":
            return MeasurementPattern.torus_layers(size, layer, form), spec
        return MeasurementPattern.unroll(size, layer, form), spec
    try:
        data = json.loads(Path(spec).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read pattern file {spec}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"pattern file {spec} is not JSON: {exc}") from exc
    nodes = data.get("measured") if isinstance(data, dict) else data
    if not isinstance(nodes, list) or not all(isinstance(k, int) for k in nodes):
        raise UsageError("pattern file must hold a list of node indices or {\"measured\": [...]}")
    return MeasurementPattern(frozenset(nodes), gf.graph.n), "custom"


def _reference_report(kind: str, fam, layer: int):
    """Supergraph-level reduction report and the form relabelling that maps onto it."""
    name, size, form = fam
    if kind == "crown-top":
        return crown_to_ring(size), crown_form_map(size, form)
    if kind == "torus-layers":
        return torus_to_lattice(size, layer), torus_form_map(size, form)
    return unroll_torus(size, layer), torus_form_map(size, form)


def cmd_measure(args) -> int:
    gf = _read(args.input)
    g = gf.graph
    pattern, kind = _load_pattern(args.pattern, gf, args.layer)
    if pattern.n != g.n:
        raise UsageError(f"pattern covers {pattern.n} nodes, graph has {g.n}")
    reduced = delete_measured(g, pattern)
    out: dict = {
        "pattern": kind,
        "measured": len(pattern.nodes),
        "kept": list(pattern.kept),
        "degree_census": {str(d): c for d, c in degree_census(reduced).items()},
    }
    try:
        flips = sign_normalize(reduced)
        out["sign_normalizable"] = True
        out["sign_flips"] = sorted(flips)
    except SignFrustrated as exc:
        flips = None
        out["sign_normalizable"] = False
        out["sign_frustration"] = str(exc)
    if kind != "custom":
        base, form_map = _reference_report(kind, _family(gf), args.layer)
        # Pull the witness for the supergraph labels back through the form relabelling.
        base_pos = {v: p for p, v in enumerate(base.kept)}
        back = form_map.inverse()
        witness = Permutation(tuple(base.witness(base_pos[back(v)]) for v in pattern.kept))
        exact = flips is not None and apply_permutation(apply_sign_flips(reduced, flips), witness) == base.reference
        up_to_sign = np.array_equal(
            np.abs(apply_permutation(reduced, witness).weights.numerators),
            np.abs(base.reference.weights.numerators),
        ) and apply_permutation(reduced, witness).weights.exponent == base.reference.weights.exponent
        out["reference"] = {"crown-top": "ring", "torus-layers": "twisted-torus", "unroll": "grid"}[kind]
        out["witness"] = list(witness.mapping)
        out["matches_reference"] = bool(exact)
        out["matches_reference_up_to_sign"] = bool(up_to_sign)
    out["reduced"] = GraphFile(reduced).to_dict()
    if args.squeezing is not None:
        r = args.squeezing
        try:
            state = prepare_cluster(g, r)
        except (NotOrthogonal, NotBipartite) as exc:
            raise UsageError(f"cannot prepare a cluster state: {exc}") from exc
        meas = sorted(pattern.nodes)
        rng = np.random.default_rng(args.seed)
        if meas:
            sub = state.cov[np.ix_(meas, meas)]
            outcomes = rng.multivariate_normal(state.mean[meas], sub, method="eigh")
        else:
            outcomes = np.zeros(0)
        res = condition_q(state, meas, outcomes)
        var = nullifier_stats(res.state, reduced).variances
        pred = math.exp(-2 * r)
        out["gaussian"] = {
            "r": r,
            "seed": args.seed,
            "outcomes": [float(x) for x in outcomes],
            "degenerate": res.degenerate,
            "nullifier_variances": [float(v) for v in var],
            "predicted": pred,
            "max_ratio": float(var.max() / pred) if var.size else None,
        }
    _write_text(args.output, json.dumps(out, indent=1) + "\n")
    if args.output not in (None, "-"):
        status = out.get("matches_reference")
        print(
            f"kept {len(pattern.kept)} of {g.n} nodes; census {out['degree_census']}"
            + ("" if status is None else f"; matches {out['reference']}: {status}")
        )
    return 0


def cmd_export(args) -> int:
    gf = _read(args.input)
    if args.format == "json":
        encoding = args.encoding or gf.encoding
        _write_text(args.output, GraphFile(gf.graph, encoding, gf.family).to_json())
        return 0
    labels = None
    fam = _family(gf)
    if fam and fam[2] == "supergraph":
        spec = (builders.build_crown_supergraph if fam[0] == "crown" else builders.build_torus_supergraph)(fam[1])
        if spec.expand() == gf.graph:
            labels = spec.physical_edge_labels()
    name = f"{fam[0]}_{fam[1]}" if fam else "G"
    _write_text(args.output, to_dot(gf.graph, labels, name))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="combcluster", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write a graph file for a named family or a shorthand")
    b.add_argument("family", choices=("crown", "torus", "shorthand"))
    b.add_argument("--macronodes", type=int, help="crown ring length N (even, >= 4)")
    b.add_argument("--m", type=int, help="torus side M (even, >= 4)")
    b.add_argument("--form", default="supergraph", choices=sorted(set(CROWN_FORMS + TORUS_FORMS)))
    b.add_argument("--text", help="scalar shorthand such as '1/2*[0,1/0/1,0]'")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check orthogonality, 2-path conditions, bipartiteness, Hankel structure")
    v.add_argument("input")
    v.add_argument("--checks", help=f"comma-separated subset of {','.join(CHECKS)}")
    v.add_argument("--json", metavar="PATH", help="also write a JSON report ('-' for stdout)")
    v.set_defaults(func=cmd_verify)

    pu = sub.add_parser("pump", help="compile a block-Hankel graph into pump lines")
    pu.add_argument("input")
    pu.add_argument("--offset-hz", type=float, default=0.0)
    pu.add_argument("--fsr-hz", type=float, default=1.0)
    pu.add_argument("--format", choices=("json", "csv"), default="json")
    pu.add_argument("-o", "--output")
    pu.set_defaults(func=cmd_pump)

    s = sub.add_parser("simulate", help="nullifier variances of the prepared cluster state")
    s.add_argument("input")
    s.add_argument("--squeezing", "-r", type=float, action="append", help="repeatable")
    s.add_argument("--modes", type=int, help="expected mode count (sanity check)")
    s.add_argument("--report", help="CSV output path ('-' for stdout)")
    s.set_defaults(func=cmd_simulate)

    m = sub.add_parser("measure", help="q-measure a pattern and report the reduced graph")
    m.add_argument("input")
    m.add_argument("--pattern", required=True, help="crown-top, torus-layers, unroll, or a JSON file")
    m.add_argument("--layer", type=int, default=0, help="torus layer kept (0..3)")
    m.add_argument("--squeezing", "-r", type=float, help="also run the Gaussian measurement at this r")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("-o", "--output")
    m.set_defaults(func=cmd_measure)

    e = sub.add_parser("export", help="export a graph file as DOT or JSON")
    e.add_argument("input")
    e.add_argument("--format", choices=("dot", "json"), default="dot")
    e.add_argument("--encoding", choices=("dense", "shorthand"), help="JSON encoding (default: keep)")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphFileError, UnrollError, NotOrthogonal, NotBipartite, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
