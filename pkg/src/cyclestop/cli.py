"""Command-line front end: verification suites, tables, and simulation.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on input
or usage errors.  Exact values print as p/q strings, simulation statistics
as floats with 6 significant digits, in all three output formats.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import limits
from .exactnum import alt_stirling_sum_a, alt_stirling_sum_b, binom_ratio_sum
from .graphs import (
    Graph,
    complete,
    family_graph,
    FAMILY_NAMES,
    kn_identity,
    load_graph,
    q_connected,
    c_pair,
    cycle,
    d_pair,
    theorem_avg_graph,
)
from .matroids import (
    Matroid,
    d_matroid,
    graphic,
    lemma_flat_sum,
    linear_gf,
    load_linear,
    prop_mu_contraction,
    prop_mu_intermediate,
    prop_mu_prank,
    theorem_avg_matroid,
    uniform,
)
from .procsim import (
    monte_carlo_element,
    monte_carlo_element_averaged,
    monte_carlo_first_edge,
)

PASS = "PASS"
FAIL = "FAIL"


def _float6(x: float) -> float:
    return float(format(x, ".6g"))


def _render_row(row: dict) -> dict:
    out = {}
    for key, value in row.items():
        if isinstance(value, bool):
            out[key] = value
        elif isinstance(value, float):
            out[key] = _float6(value)
        elif isinstance(value, Fraction):
            out[key] = str(value)
        else:
            out[key] = value
    return out


def _emit(fmt: str, command: str, rows: list[dict], all_pass: bool | None):
    rows = [_render_row(r) for r in rows]
    if fmt == "json":
        doc: dict = {"command": command, "results": rows}
        if all_pass is not None:
            doc["all_pass"] = all_pass
        print(json.dumps(doc, indent=2))
    elif fmt == "csv":
        if rows:
            buf = io.StringIO()
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for r in rows:
                writer.writerow(r)
            sys.stdout.write(buf.getvalue())
    else:
        for r in rows:
            parts = [f"{k}={v}" for k, v in r.items()]
            print("  ".join(parts))
        if all_pass is not None:
            print("all checks passed" if all_pass else "FAILURES present")


def _check_row(name: str, value, expected, **extra) -> dict:
    row = {"check": name, **extra, "value": value, "expected": expected}
    row["status"] = PASS if value == expected else FAIL
    return row


def _finish(args, command: str, rows: list[dict]) -> int:
    statuses = [r["status"] for r in rows if "status" in r]
    all_pass = all(s == PASS for s in statuses) if statuses else None
    _emit(args.format, command, rows, all_pass)
    return 0 if (all_pass is None or all_pass) else 1


# ---------------------------------------------------------------------------
# target construction

def _graph_from_args(args) -> Graph:
    if getattr(args, "input", None):
        return load_graph(args.input)
    if getattr(args, "family", None):
        return family_graph(args.family, args.n, args.k)
    raise ValueError("no graph given: use --input FILE or --family NAME --n N")


def _matroid_from_args(args) -> Matroid:
    picked = [name for name in ("uniform", "graphic", "linear")
              if getattr(args, name, None) is not None]
    if len(picked) != 1:
        raise ValueError("choose exactly one of --uniform K N, --graphic FILE, --linear FILE")
    if args.uniform is not None:
        k, n = args.uniform
        return uniform(k, n)
    if args.graphic is not None:
        return graphic(load_graph(args.graphic))
    return load_linear(args.linear)


# ---------------------------------------------------------------------------
# subcommands

def cmd_verify_graph(args) -> int:
    graph = _graph_from_args(args)
    if graph.m == 0:
        raise ValueError("graph has no edges; the averaged identity needs at least one")
    c = graph.component_count()
    value = theorem_avg_graph(graph)
    row = _check_row("avg-stop", value, Fraction(graph.n - c),
                     graph=f"n={graph.n},m={graph.m},c={c}")
    return _finish(args, "verify-graph", [row])


def cmd_verify_matroid(args) -> int:
    matroid = _matroid_from_args(args)
    if not matroid.is_loopless:
        loops = sorted(map(repr, matroid.loops()))
        raise ValueError(
            f"matroid has loops ({', '.join(loops)}); "
            "the identities under test require a loopless matroid")
    m = len(matroid)
    r = matroid.full_rank
    lat = matroid.lattice()
    rows = [
        _check_row("theorem-avg", theorem_avg_matroid(matroid), Fraction(r),
                   matroid=matroid.name),
        _check_row("mu-pair-sum", prop_mu_intermediate(matroid), m,
                   matroid=matroid.name),
    ]
    flat_sets = lat.flat_sets()
    bad_flats = sum(
        1 for fs in flat_sets
        if prop_mu_contraction(matroid, fs) != m - len(fs))
    rows.append(_check_row("mu-contraction-all-flats", len(flat_sets) - bad_flats,
                           len(flat_sets), matroid=matroid.name))
    rows.append(_check_row("deriv-rank-sum", prop_mu_prank(matroid), r,
                           matroid=matroid.name))
    good_t = sum(
        1 for t in range(m)
        if lemma_flat_sum(matroid, t) == sum(d_matroid(matroid, e, t)
                                             for e in matroid.elements))
    rows.append(_check_row("flat-sum-vs-brute", good_t, m, matroid=matroid.name))
    return _finish(args, "verify-matroid", rows)


def _table_rows(kind: str, max_n: int, t_filter: int | None) -> list[dict]:
    rows = []
    if kind == "dnt":
        for n in range(2, max_n + 1):
            top = (n - 1) * (n - 2) // 2
            for t in range(top + 1):
                if t_filter is None or t == t_filter:
                    rows.append({"n": n, "t": t, "value": d_pair(n, t)})
    elif kind == "cnt":
        for n in range(2, max_n + 1):
            for t in range(1, n * (n - 1) // 2 + 1):
                if t_filter is None or t == t_filter:
                    rows.append({"n": n, "t": t, "value": c_pair(n, t)})
    else:
        for n in range(1, max_n + 1):
            for t in range(max(n - 1, 0), n * (n - 1) // 2 + 1):
                if t_filter is None or t == t_filter:
                    rows.append({"n": n, "t": t, "value": q_connected(n, t)})
    return rows


def cmd_table(args) -> int:
    if args.max_n > limits.TABLE_N_CAP:
        raise ValueError(f"--max-n capped at {limits.TABLE_N_CAP}, got {args.max_n}")
    low = {"dnt": 2, "cnt": 2, "qnt": 1}[args.kind]
    if args.max_n < low:
        raise ValueError(f"--max-n must be >= {low} for {args.kind}")
    rows = _table_rows(args.kind, args.max_n, args.t)
    if args.format == "plain":
        by_n: dict[int, list[int]] = {}
        for row in rows:
            by_n.setdefault(row["n"], []).append(row["value"])
        for n in sorted(by_n):
            print(f"n={n}: " + " ".join(str(v) for v in by_n[n]))
        return 0
    _emit(args.format, f"table-{args.kind}", rows, None)
    return 0


def cmd_identity_kn(args) -> int:
    if not 2 <= args.max_n <= limits.TABLE_N_CAP:
        raise ValueError(
            f"--max-n must be in [2, {limits.TABLE_N_CAP}], got {args.max_n}")
    rows = [
        _check_row("kn-identity", kn_identity(n), Fraction(n - 1), n=n)
        for n in range(2, args.max_n + 1)
    ]
    return _finish(args, "identity-kn", rows)


def cmd_simulate(args) -> int:
    graph_target = args.input is not None or args.family is not None
    matroid_target = args.uniform is not None or args.linear is not None
    if graph_target == matroid_target:
        raise ValueError(
            "choose one target: a graph (--family/--input) or a matroid (--uniform/--linear)")
    if graph_target:
        graph = _graph_from_args(args)
        if args.edge is not None:
            u, v = args.edge
            mat = graphic(graph)
            report = monte_carlo_element(mat, (min(u, v), max(u, v)),
                                         args.trials, args.seed, args.method)
        else:
            report = monte_carlo_first_edge(graph, args.trials, args.seed,
                                            args.method)
    else:
        if args.uniform is not None:
            mat = uniform(*args.uniform)
        else:
            mat = load_linear(args.linear)
        if args.element is not None:
            report = monte_carlo_element(mat, args.element, args.trials,
                                         args.seed, args.method)
        else:
            report = monte_carlo_element_averaged(mat, args.trials, args.seed,
                                                  args.method)
    row = report.to_dict()
    if args.format == "json":
        print(json.dumps({"command": "simulate", **_render_row(row)}, indent=2))
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(row.keys()))
        writer.writeheader()
        writer.writerow(_render_row(row))
        sys.stdout.write(buf.getvalue())
    else:
        for key, value in _render_row(row).items():
            print(f"{key}: {value}")
    return 0


def cmd_selftest(args) -> int:
    rows = []

    ok = all(alt_stirling_sum_a(n) == 0 for n in range(2, 9))
    rows.append(_check_row("stirling-alt-a", "0" if ok else "nonzero", "0"))
    ok = all(alt_stirling_sum_b(n) == n - 1 for n in range(1, 9))
    rows.append(_check_row("stirling-alt-b", "n-1" if ok else "mismatch", "n-1"))
    ok = all(
        binom_ratio_sum(n, m) == Fraction(n + 1, n + 1 - m)
        for n in range(11) for m in range(n + 1))
    rows.append(_check_row("binom-ratio", "closed-form" if ok else "mismatch",
                           "closed-form"))

    bad = [n for n in range(2, 11) if kn_identity(n) != n - 1]
    rows.append(_check_row("kn-identity-2-10", str(bad) if bad else "[]", "[]"))

    for graph, label in [
        (complete(5), "complete-5"),
        (family_graph("star", 5), "star-5"),
        (cycle(6), "cycle-6"),
        (family_graph("two-triangles"), "two-triangles"),
        (family_graph("complete-bipartite", 2, 3), "k23"),
    ]:
        rows.append(_check_row(f"avg-stop-{label}", theorem_avg_graph(graph),
                               Fraction(graph.n - graph.component_count())))

    for mat in (uniform(2, 4), graphic(complete(4)), linear_gf(2, [[1, 0, 1], [0, 1, 1]])):
        rows.append(_check_row(f"matroid-avg {mat.name}",
                               theorem_avg_matroid(mat),
                               Fraction(mat.full_rank)))
        m = len(mat)
        rows.append(_check_row(f"mu-pair-sum {mat.name}",
                               prop_mu_intermediate(mat), m))
        rows.append(_check_row(f"deriv-rank-sum {mat.name}",
                               prop_mu_prank(mat), mat.full_rank))
        good_flats = sum(
            1 for fs in mat.lattice().flat_sets()
            if prop_mu_contraction(mat, fs) == m - len(fs))
        rows.append(_check_row(f"mu-contraction {mat.name}",
                               good_flats, len(mat.lattice())))
        good_t = sum(
            1 for t in range(m)
            if lemma_flat_sum(mat, t) == sum(d_matroid(mat, e, t)
                                             for e in mat.elements))
        rows.append(_check_row(f"flat-sum {mat.name}", good_t, m))

    from .graphs import expected_stop_exact
    from .procsim import exhaustive_stop_mean

    pent = cycle(5)
    mat = graphic(pent)
    e = pent.edges[0]
    rows.append(_check_row("exhaustive-vs-exact cycle-5",
                           exhaustive_stop_mean(mat, e),
                           expected_stop_exact(pent, e)))

    tri = cycle(3)
    report = monte_carlo_first_edge(tri, trials=10, seed=7)
    rows.append(_check_row("triangle-first-cycle-mean", report.mean, 3.0))
    r1 = monte_carlo_first_edge(complete(4), 2000, seed=11, method="sample")
    r2 = monte_carlo_first_edge(complete(4), 2000, seed=11, method="sample")
    rows.append(_check_row("simulation-deterministic", r1.mean, r2.mean))

    return _finish(args, "selftest", rows)


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclestop",
        description="exact and Monte Carlo checks for random insertion stopping times")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("json", "csv", "plain"),
                       default="plain", help="output format (default plain)")

    p = sub.add_parser("verify-graph",
                       help="check the averaged stopping identity on a graph")
    p.add_argument("--input", help="graph file ('n m' header plus 'u v' lines)")
    p.add_argument("--family", choices=FAMILY_NAMES, help="builtin family")
    p.add_argument("--n", type=int, help="family size parameter")
    p.add_argument("--k", type=int, help="second size parameter (bipartite part)")
    add_format(p)
    p.set_defaults(func=cmd_verify_graph)

    p = sub.add_parser("verify-matroid",
                       help="check rank, Moebius, and flat-sum identities on a matroid")
    p.add_argument("--uniform", nargs=2, type=int, metavar=("K", "N"),
                   help="uniform matroid U(K,N)")
    p.add_argument("--graphic", metavar="FILE", help="graphic matroid of a graph file")
    p.add_argument("--linear", metavar="FILE",
                   help="linear matroid file ('p r m' header plus r matrix rows)")
    add_format(p)
    p.set_defaults(func=cmd_verify_matroid)

    p = sub.add_parser("table", help="print the d/c/q counting triangles")
    p.add_argument("kind", choices=("dnt", "cnt", "qnt"),
                   help="dnt: split counts; cnt: joined counts; qnt: connected graphs")
    p.add_argument("--max-n", type=int, required=True, dest="max_n",
                   help=f"largest n (cap {limits.TABLE_N_CAP})")
    p.add_argument("--t", type=int, default=None, help="restrict to a single t column")
    add_format(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("identity-kn",
                       help="check the complete-graph sum identity for a range of n")
    p.add_argument("--max-n", type=int, default=20, dest="max_n",
                   help=f"check n = 2..max_n (default 20, cap {limits.TABLE_N_CAP})")
    add_format(p)
    p.set_defaults(func=cmd_identity_kn)

    p = sub.add_parser("simulate", help="run the insertion process")
    p.add_argument("--family", choices=FAMILY_NAMES, help="builtin graph family")
    p.add_argument("--input", help="graph file")
    p.add_argument("--n", type=int, help="family size parameter")
    p.add_argument("--k", type=int, help="second size parameter")
    p.add_argument("--uniform", nargs=2, type=int, metavar=("K", "N"),
                   help="uniform matroid target")
    p.add_argument("--linear", metavar="FILE", help="linear matroid file target")
    p.add_argument("--edge", nargs=2, type=int, metavar=("U", "V"),
                   help="track this edge instead of the first inserted one")
    p.add_argument("--element", type=int,
                   help="track this element (matroid targets)")
    p.add_argument("--trials", type=int, default=100000,
                   help="sample size (default 100000)")
    p.add_argument("--seed", type=int, default=0,
                   help="base seed; trial i uses spawn key (i,) (default 0)")
    p.add_argument("--method", choices=("auto", "sample", "exhaustive"),
                   default="auto",
                   help="auto enumerates all orders when (|E|-1)! <= 10^7")
    add_format(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("selftest", help="run the built-in verification suite")
    add_format(p)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        limits.brute_force_cap()  # fail fast on a malformed env override
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
