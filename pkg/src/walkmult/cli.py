"""Command-line interface.

Subcommands: analyze, multiplets, apply, eigen, generate, plot.
Reports are machine-readable JSON by default; --pretty switches to
human tables.  Exit codes: 0 success, 2 parse/usage error, 3 budget
exceeded, 4 refused transform, 5 failed certificate or verification.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .cospectral import (
    CriterionDisagreement,
    all_cospectral_pairs,
    is_cospectral_pair,
    is_walk_singlet,
)
from .eigenstructure import (
    IndeterminateParity,
    build_parity_basis,
    compact_support_report,
    count_parity_vectors,
    verify_zero_sums,
)
from .generators import (
    TEMPLATES,
    break_symmetry_pipeline,
    build_template,
    fixture_bundle,
)
from .graph import (
    Graph,
    GraphFormatError,
    VertexPair,
    format_weight,
    graph_from_edges,
    load_graph,
    parse_weight,
    save_graph,
)
from .linalg import DEFAULT_TOL, Tolerance
from .multiplets import (
    BudgetExceeded,
    PairContext,
    enumerate_multiplets,
    multiplet_records,
)
from .symmetry import find_automorphisms
from .transforms import (
    TransformRefused,
    VerificationFailed,
    extend_by_cone,
    interconnect_multiplets,
    remove_vertex_checked,
    toggle_pair_edge,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_REFUSED = 4
EXIT_CERTIFICATE = 5


def worker_count() -> int:
    raw = os.environ.get("WALKMULT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _tolerance(args) -> Tolerance:
    if getattr(args, "tol", None) is None:
        return DEFAULT_TOL
    return dataclasses.replace(DEFAULT_TOL, tol_zero=float(args.tol))


def _emit(args, report: dict, pretty_lines=None) -> None:
    if getattr(args, "pretty", False) and pretty_lines is not None:
        text = "\n".join(pretty_lines) + "\n"
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _graph_json(g: Graph) -> dict:
    return json.loads(save_graph(g, fmt="json"))


def _load(args) -> Graph:
    g = load_graph(args.graph)
    mode = getattr(args, "mode", None)
    if mode and mode != g.mode:
        edges = [(i, j, parse_weight(format_weight(w), mode))
                 for (i, j, w) in g.edges()]
        g = graph_from_edges(g.n, edges, mode=mode)
    return g


def _parities_for(g, pair, c, tol):
    got = is_walk_singlet(g, pair, c, tol)
    if got == "both":
        return ("even", "odd")
    if got == 1:
        return ("even",)
    if got == -1:
        return ("odd",)
    return ()


def cmd_analyze(args) -> int:
    g = _load(args)
    tol = _tolerance(args)
    pairs = all_cospectral_pairs(g, tol)
    pair_reports = []

    def singlets_of(pair):
        entry = {"pair": [pair.u, pair.v],
                 "singlets": {"even": [], "odd": []}}
        for c in range(1, g.n + 1):
            if c in (pair.u, pair.v):
                continue
            for tag in _parities_for(g, pair, c, tol):
                entry["singlets"][tag].append(c)
        return entry

    nthreads = worker_count()
    if nthreads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            pair_reports = list(pool.map(singlets_of, pairs))
    else:
        pair_reports = [singlets_of(p) for p in pairs]
    auto = find_automorphisms(g)
    report = {
        "n": g.n,
        "mode": g.mode,
        "graph": _graph_json(g),
        "cospectral_pairs": pair_reports,
        "automorphisms": {
            "order": auto.order,
            "trivial": auto.trivial,
            "verdict": auto.verdict,
        },
    }
    lines = [f"graph: n={g.n} mode={g.mode}",
             f"automorphism group: order={auto.order} ({auto.verdict})",
             "cospectral pairs:"]
    if not pair_reports:
        lines.append("  (none)")
    for entry in pair_reports:
        u, v = entry["pair"]
        s = entry["singlets"]
        lines.append(f"  {{{u},{v}}}  singlets+ {s['even'] or '-'}"
                     f"  singlets- {s['odd'] or '-'}")
    _emit(args, report, lines)
    return EXIT_OK


def _resolve_pair(g, args, tol) -> VertexPair:
    if args.pair:
        return VertexPair(args.pair[0], args.pair[1])
    pairs = all_cospectral_pairs(g, tol)
    if not pairs:
        raise VerificationFailed("no cospectral pair found and none given")
    return pairs[0]


def cmd_multiplets(args) -> int:
    g = _load(args)
    tol = _tolerance(args)
    pair = _resolve_pair(g, args, tol)
    warn = None
    if not is_cospectral_pair(g, pair, tol).accepted:
        warn = (f"pair {{{pair.u},{pair.v}}} is not cospectral; "
                "downstream transform guarantees do not apply")
        print(f"warning: {warn}", file=sys.stderr)
    found = enumerate_multiplets(g, pair, max_cardinality=args.max_size,
                                 parity=args.parity, budget=args.budget,
                                 tol=tol)
    records = multiplet_records(found)
    report = {
        "graph": _graph_json(g),
        "pair": [pair.u, pair.v],
        "parity": args.parity,
        "max_size": args.max_size,
        "multiplets": records,
    }
    if warn:
        report["warning"] = warn
    lines = [f"pair {{{pair.u},{pair.v}}}: "
             f"{len(records)} multiplet(s) up to size {args.max_size}"]
    for r in records:
        subl = ",".join(
            f"({','.join(map(str, s['vertices']))})_{{{s['coefficient']}}}"
            for s in r["sublets"])
        tag = {"even": "+", "odd": "-", "both": "±"}[r["parity"]]
        uni = " uniform" if r["uniform"] else ""
        lines.append(f"  {{{','.join(map(str, r['subset']))}}}^{tag}"
                     f"  {subl}{uni}")
    _emit(args, report, lines)
    return EXIT_OK


def _script_multiplet(g, pair, step, tol, enumerated):
    """Resolve a script step's multiplet by subset or by index."""
    ctx = PairContext(g, pair, tol)
    if "multiplet_index" in step:
        idx = step["multiplet_index"]
        if not 0 <= idx < len(enumerated):
            raise TransformRefused(
                f"multiplet_index {idx} out of range "
                f"(enumeration found {len(enumerated)})")
        return enumerated[idx]
    subset = tuple(sorted(step["subset"]))
    parity = {"even": 1, "odd": -1}.get(step.get("parity", "even"), 1)
    m = ctx.multiplet(subset, parity)
    if m is None:
        raise TransformRefused(
            f"subset {list(subset)} admits no {step.get('parity', 'even')} "
            "multiplet: weight space is empty")
    return m


def _script_gamma(step, key, g, size):
    raw = step.get(key)
    if raw is None:
        return None
    if len(raw) != size:
        raise GraphFormatError(
            f"{key} has {len(raw)} entries, expected {size}")
    return tuple(parse_weight(str(x), g.mode) for x in raw)


def cmd_apply(args) -> int:
    g = _load(args)
    tol = _tolerance(args)
    with open(args.script) as fh:
        script = json.load(fh)
    pair = VertexPair(*script["pair"])
    enumerated = []
    if any("multiplet_index" in s for s in script.get("steps", [])):
        enumerated = enumerate_multiplets(
            g, pair, max_cardinality=args.max_size, budget=args.budget,
            tol=tol)
    chain = []
    cur, cur_pair = g, pair
    for step in script.get("steps", []):
        op = step["op"]
        if op == "cone":
            m = _script_multiplet(cur, cur_pair, step, tol, enumerated)
            gamma = _script_gamma(step, "gamma", cur, m.cardinality)
            cur, tip, rec = extend_by_cone(cur, m, gamma=gamma, tol=tol)
            rec = dataclasses.replace(
                rec, certificate=dict(rec.certificate, tip=tip))
        elif op == "interconnect":
            x = _script_multiplet(cur, cur_pair,
                                  {"subset": step["x_subset"],
                                   "parity": step.get("parity", "even")},
                                  tol, enumerated)
            y = _script_multiplet(cur, cur_pair,
                                  {"subset": step["y_subset"],
                                   "parity": step.get("parity", "even")},
                                  tol, enumerated)
            gamma = _script_gamma(step, "x_gamma", cur, x.cardinality)
            delta = _script_gamma(step, "y_gamma", cur, y.cardinality)
            cur, rec = interconnect_multiplets(cur, x, gamma, y, delta,
                                               tol=tol)
        elif op == "remove-vertex":
            cur, cur_pair, rec = remove_vertex_checked(
                cur, cur_pair, step["vertex"], force=args.force, tol=tol)
        elif op == "toggle-pair-edge":
            w = parse_weight(str(step.get("weight", "0")), cur.mode)
            cur, rec = toggle_pair_edge(cur, cur_pair, w, tol=tol)
        else:
            raise GraphFormatError(f"unknown script op {op!r}")
        chain.append(rec)
    report = {
        "pair": [cur_pair.u, cur_pair.v],
        "graph": _graph_json(cur),
        "certificates": [
            {"kind": r.kind, "inputs": _jsonable(r.inputs),
             "certificate": _jsonable(r.certificate)}
            for r in chain
        ],
    }
    lines = [f"applied {len(chain)} step(s); output graph has {cur.n} "
             f"vertices; pair now {{{cur_pair.u},{cur_pair.v}}}"]
    for r in chain:
        lines.append(f"  {r.kind}: {_jsonable(r.certificate)}")
    _emit(args, report, lines)
    return EXIT_OK


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)


def cmd_eigen(args) -> int:
    g = _load(args)
    tol = _tolerance(args)
    pair = _resolve_pair(g, args, tol)
    try:
        basis = build_parity_basis(g, pair, tol)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    n_even, n_odd, n_zero = count_parity_vectors(basis)
    found = enumerate_multiplets(g, pair, max_cardinality=args.max_size,
                                 budget=args.budget, tol=tol)
    zero_sums = []
    all_ok = True
    for m in found:
        for rep in verify_zero_sums(g, pair, basis, m, tol):
            all_ok = all_ok and rep.verdict
            zero_sums.append({
                "eigenvalue": rep.eigenvalue,
                "eigenvector_parity": rep.eigenvector_parity,
                "subset": list(rep.multiplet_subset),
                "weight_vector": rep.weight_vector_index,
                "residual": rep.residual,
                "ok": rep.verdict,
            })
    support = compact_support_report(g, pair, basis, tol)
    report = {
        "graph": _graph_json(g),
        "pair": [pair.u, pair.v],
        "parity_counts": {"even": n_even, "odd": n_odd, "zero": n_zero},
        "eigenvalues": [
            {"value": c.value, "multiplicity": c.multiplicity}
            for c in basis.clusters
        ],
        "zero_sums": zero_sums,
        "zero_sets": support,
        "all_zero_sums_ok": all_ok,
    }
    lines = [f"pair {{{pair.u},{pair.v}}}: parity counts "
             f"even={n_even} odd={n_odd} zero={n_zero}",
             f"zero-sum checks: {len(zero_sums)} total, "
             f"{'all passed' if all_ok else 'FAILURES present'}"]
    _emit(args, report, lines)
    return EXIT_OK if all_ok else EXIT_CERTIFICATE


def cmd_generate(args) -> int:
    params = {}
    for kv in args.param or []:
        k, _, v = kv.partition("=")
        params[k] = int(v)
    inst = build_template(args.template, seed=args.seed, **params)
    g, pair = inst.graph, inst.pair
    records = []
    if args.steps > 0:
        result = break_symmetry_pipeline(g, pair, steps=args.steps,
                                         seed=args.seed)
        g = result.graph
        records = [
            {"kind": r.kind, "inputs": _jsonable(r.inputs),
             "certificate": _jsonable(r.certificate)}
            for r in result.records
        ]
    auto = find_automorphisms(g)
    bundle = fixture_bundle([inst])
    report = {
        "template": args.template,
        "seed": args.seed,
        "steps": args.steps,
        "fingerprint": inst.fingerprint(),
        "pair": [pair.u, pair.v],
        "graph": _graph_json(g),
        "base_bundle": bundle,
        "certificates": records,
        "automorphisms": {
            "order": auto.order,
            "trivial": auto.trivial,
            "verdict": auto.verdict,
        },
    }
    lines = [f"{args.template} seed={args.seed} steps={args.steps} "
             f"-> n={g.n}, pair {{{pair.u},{pair.v}}}, "
             f"automorphism order={auto.order}"]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_plot(args) -> int:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    with open(args.report) as fh:
        report = json.load(fh)
    fig, ax = plt.subplots(figsize=(6, 6))
    gdata = report.get("graph")
    if not gdata:
        ax.text(0.5, 0.5, "empty report", ha="center", va="center")
        ax.legend(handles=[], loc="lower right")
        ax.set_axis_off()
        fig.savefig(args.output or "plot.png", dpi=150)
        return EXIT_OK
    n = gdata["n"]
    # deterministic circular layout
    theta = 2 * np.pi * np.arange(n) / n + np.pi / 2
    xs, ys = np.cos(theta), np.sin(theta)
    for (i, j, w) in gdata["edges"]:
        if i == j:
            ax.add_patch(plt.Circle((xs[i - 1], ys[i - 1] + 0.08), 0.08,
                                    fill=False, color="gray"))
            continue
        ax.plot([xs[i - 1], xs[j - 1]], [ys[i - 1], ys[j - 1]],
                color="gray", zorder=1)
        ax.text((xs[i - 1] + xs[j - 1]) / 2, (ys[i - 1] + ys[j - 1]) / 2,
                str(w), fontsize=7, color="dimgray")
    pair = report.get("pair")
    pairs = ([pair] if pair else
             [e["pair"] for e in report.get("cospectral_pairs", [])])
    highlighted = {v for p in pairs for v in p}
    colors = ["tab:red" if i + 1 in highlighted else "tab:blue"
              for i in range(n)]
    ax.scatter(xs, ys, s=300, c=colors, zorder=2)
    for i in range(n):
        ax.text(xs[i], ys[i], str(i + 1), ha="center", va="center",
                color="white", zorder=3)
    # sublet coefficient labels from a multiplet report
    for r in report.get("multiplets", []):
        for s in r["sublets"]:
            for v in s["vertices"]:
                ax.text(xs[v - 1] * 1.15, ys[v - 1] * 1.15,
                        s["coefficient"], fontsize=8, color="tab:green",
                        ha="center")
    # zero-set rings from an eigen report
    for entry in report.get("zero_sets", []):
        for v in entry.get("zero_set", []):
            ax.add_patch(plt.Circle((xs[v - 1], ys[v - 1]), 0.11,
                                    fill=False, color="tab:purple",
                                    linewidth=0.5))
    ax.set_aspect("equal")
    ax.set_axis_off()
    fig.savefig(args.output or "plot.png", dpi=150)
    plt.close(fig)
    return EXIT_OK


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="walkmult",
        description="Cospectral vertex pairs, walk multiplets, and "
                    "cospectrality-preserving graph modifications.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("graph", help="graph file (JSON or edge list)")
        p.add_argument("--mode", choices=["rational", "float"],
                       help="override arithmetic mode (default: file's)")
        p.add_argument("--tol", type=float,
                       help="zero tolerance for float mode")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-size", type=_positive_int, default=3,
                       dest="max_size",
                       help="multiplet cardinality cap")
        p.add_argument("--budget", type=int, default=2_000_000,
                       help="subset-enumeration budget")
        p.add_argument("--pretty", action="store_true",
                       help="human-readable tables instead of JSON")
        p.add_argument("--force", action="store_true",
                       help="override transform refusals where supported")
        p.add_argument("-o", "--output", help="write report here")

    p = sub.add_parser("analyze", help="cospectral pairs + singlets + "
                                       "automorphism summary")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("multiplets", help="enumerate walk multiplets")
    common(p)
    p.add_argument("--pair", type=int, nargs=2, metavar=("U", "V"))
    p.add_argument("--parity", choices=["even", "odd", "both"],
                   default="both")
    p.set_defaults(func=cmd_multiplets)

    p = sub.add_parser("apply", help="run a transform script")
    common(p)
    p.add_argument("script", help="JSON transform script")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("eigen", help="parity eigenbasis + zero-sum checks")
    common(p)
    p.add_argument("--pair", type=int, nargs=2, metavar=("U", "V"))
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("generate", help="seeded template instance")
    common(p, graph=False)
    p.add_argument("template", choices=TEMPLATES)
    p.add_argument("--steps", type=int, default=0,
                   help="symmetry-breaking pipeline steps")
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="template parameter, e.g. rungs=4")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("plot", help="draw a graph from a report file")
    p.add_argument("report", help="report JSON from another subcommand")
    p.add_argument("--pretty", action="store_true",
                   help=argparse.SUPPRESS)
    p.add_argument("-o", "--output", help="image path (default plot.png)")
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError, json.JSONDecodeError,
            FileNotFoundError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except TransformRefused as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (VerificationFailed, CriterionDisagreement,
            IndeterminateParity) as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE


if __name__ == "__main__":
    sys.exit(main())
