"""Batch front-end: generate graphs, analyze edge lists, run certification
suites, and emit machine-readable reports.

Commands: gen-cbe, gen-mbe, analyze, certify, rho-star, sweep.
Exit codes: 0 all assertions passed, 1 assertion failure, 2 usage error.
Every output embeds the originating configuration; reruns of the same
configuration are byte-identical (seeds are explicit, never wall-clock).
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import sphere
from .analysis import (
    density_report,
    max_clique,
    p_independence,
    read_edge_list,
    rho_star,
)
from .cbe import CbeParams, build_cbe
from .mbe import MbeParams, build_mbe
from .weighted import (
    PWeightedGraph,
    find_G_pq_subgraph,
    g_of_A,
    g_of_A_numeric,
    in_G_p_q,
    multiset_dominates,
    verify_theorem15_window,
)

CERTIFY_SUITES = ("smallp-p3-t1", "smallp-p4-t1", "theorem15-window",
                  "gofA-oracle", "dominance-axioms")


# ---------------------------------------------------------------------------
# certification suites (importable; the CLI wraps them)
# ---------------------------------------------------------------------------

def _all_positive_graphs(p, m):
    for upper in itertools.product(range(1, p + 1), repeat=m * (m - 1) // 2):
        yield PWeightedGraph.from_upper(p, m, upper)


def suite_smallp(p: int, t: int = 1, max_m: int | None = None) -> dict:
    """Exhaustive check: every positive p-weighted graph up to max_m vertices
    with min degree above p rho*_p(pt+2) m admits a subgraph in G_p(pt+2)."""
    if max_m is None:
        max_m = 5 if p == 3 else 4
    rho = rho_star(p, p * t + 2)[0]
    checked = skipped = failures = 0
    failing = []
    for m in range(1, max_m + 1):
        threshold = Fraction(p) * rho * m
        for g in _all_positive_graphs(p, m):
            if Fraction(g.delta()) <= threshold:
                skipped += 1
                continue
            checked += 1
            res = find_G_pq_subgraph(g, t)
            if not (res.found and res.extension.verify(g)
                    and res.extension.size >= p * t + 2):
                failures += 1
                if len(failing) < 10:
                    failing.append(g.to_text())
    return {"suite": f"smallp-p{p}-t{t}", "passed": failures == 0,
            "counters": {"checked": checked, "skipped": skipped,
                         "failures": failures},
            "failing_examples": failing}


def suite_theorem15_window(t_max: int = 6) -> dict:
    """Window infeasibility for every (t <= t_max, s in window)."""
    cases = []
    ok = True
    for t in range(1, t_max + 1):
        for s in range(max(1, t * (t - 2)), t * t + 1):
            rep = verify_theorem15_window(p=s + t - 1, s=s, t=t)
            cases.append({"t": t, "s": s, "passed": rep.passed})
            ok = ok and rep.passed
    return {"suite": "theorem15-window", "passed": ok,
            "counters": {"cases": len(cases),
                         "failures": sum(not c["passed"] for c in cases)},
            "cases": cases}


def suite_gofa_oracle(trials: int = 200, seed: int = 0) -> dict:
    """Exact simplex optimum vs numeric multiplicative-update oracle within
    1e-3, plus the exact equal-row-sum identity on the support."""
    max_dev = 0.0
    row_sum_ok = True
    for trial in range(trials):
        rng = sphere.philox_rng(seed, 70, trial)
        m = int(rng.integers(2, 7))
        A = np.zeros((m, m), dtype=int)
        iu = np.triu_indices(m, 1)
        A[iu] = rng.integers(0, 5, size=len(iu[0]))
        A = (A + A.T).tolist()
        sol = g_of_A(A)
        approx, _ = g_of_A_numeric(A, steps=10_000, restarts=50, seed=trial)
        max_dev = max(max_dev, abs(float(sol.value) - approx))
        sums = sol.row_sums(A)
        row_sum_ok = row_sum_ok and all(sums[j] == sol.value for j in sol.support)
    passed = max_dev <= 1e-3 and row_sum_ok
    return {"suite": "gofA-oracle", "passed": passed,
            "counters": {"trials": trials, "max_deviation": max_dev,
                         "row_sum_identity": row_sum_ok}}


def suite_dominance_axioms(seed: int = 0, trials: int = 500) -> dict:
    """Named dominance examples, order axioms on random rational multisets,
    and the m <= 4, p <= 4 exhaustive membership G in G_p(p + t + m - 2)."""
    cases = []

    def case(name, ok):
        cases.append({"name": name, "passed": bool(ok)})

    case("{3,4,4} dominates {3,3,4}", multiset_dominates([3, 4, 4], [3, 3, 4]))
    case("{3,4,4} !dominates {2,2,5}",
         not multiset_dominates([3, 4, 4], [2, 2, 5]))

    rng = sphere.philox_rng(seed, 71)
    axioms_ok = True
    for _ in range(trials):
        n = int(rng.integers(1, 6))
        trip = [[Fraction(int(rng.integers(0, 13)), int(rng.integers(1, 5)))
                 for _ in range(n)] for _ in range(3)]
        a, b, c = trip
        if not multiset_dominates(a, a):
            axioms_ok = False
        if multiset_dominates(a, b) and multiset_dominates(b, a):
            axioms_ok = axioms_ok and sorted(a) == sorted(b)
        if multiset_dominates(a, b) and multiset_dominates(b, c):
            axioms_ok = axioms_ok and multiset_dominates(a, c)
    case("partial-order axioms on random multisets", axioms_ok)

    membership_ok = True
    counted = 0
    for p in range(1, 5):
        for m in range(1, 5):
            for g in _all_positive_graphs(p, m):
                counted += 1
                t = max((g.w[i][j] for i in range(m) for j in range(i + 1, m)),
                        default=0)
                res = in_G_p_q(g, p + t + m - 2)
                if not (res.member and res.extension.verify(g)):
                    membership_ok = False
    case("membership G in G_p(p+t+m-2), all positive m<=4 p<=4",
         membership_ok)

    passed = all(c["passed"] for c in cases)
    return {"suite": "dominance-axioms", "passed": passed,
            "counters": {"axiom_trials": trials,
                         "membership_graphs": counted},
            "cases": cases}


def run_suite(name: str, trials: int = 200, seed: int = 0) -> dict:
    if name == "smallp-p3-t1":
        return suite_smallp(3, 1)
    if name == "smallp-p4-t1":
        return suite_smallp(4, 1)
    if name == "theorem15-window":
        return suite_theorem15_window()
    if name == "gofA-oracle":
        return suite_gofa_oracle(trials=trials, seed=seed)
    if name == "dominance-axioms":
        return suite_dominance_axioms(seed=seed)
    raise ValueError(f"unknown suite {name!r}")


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _config_comment(config: dict) -> str:
    return "config " + " ".join(f"{k}={config[k]}" for k in sorted(config))


def _write_json(path, doc: dict):
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2, default=str)
        fh.write("\n")


def _write_csv(path, config: dict, columns, row):
    with open(path, "w") as fh:
        fh.write(f"# {_config_comment(config)}\n")
        fh.write(",".join(columns) + "\n")
        fh.write(",".join(str(x) for x in row) + "\n")


def _load_config_file(path) -> dict:
    """Flat key = value lines; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line: {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _merge_config(args, parser, fields):
    """Config-file values fill in options the command line left unset."""
    merged = {}
    file_values = _load_config_file(args.config) if args.config else {}
    for name, (typ, required, default) in fields.items():
        cli_value = getattr(args, name)
        if cli_value is not None:
            merged[name] = cli_value
        elif name in file_values:
            merged[name] = typ(file_values[name])
        elif default is not None:
            merged[name] = default
        elif required:
            parser.error(f"missing required parameter --{name.replace('_', '-')}")
        else:
            merged[name] = None
    return merged


def _threads_default() -> int:
    env = os.environ.get("RT_LAB_THREADS")
    return int(env) if env else 1


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cbe_fields():
    return {
        "p": (int, True, None), "ell": (int, True, None), "k": (int, True, None),
        "n": (int, True, None), "epsilon": (float, False, 0.02),
        "big_k": (float, False, 2.0), "seed": (int, True, None),
        "mode": (str, False, "sampled"), "out": (str, True, None),
        "threads": (int, False, _threads_default()),
    }


def cmd_gen_cbe(args, parser) -> int:
    cfg = _merge_config(args, parser, _cbe_fields())
    try:
        params = CbeParams(p=cfg["p"], ell=cfg["ell"], k=cfg["k"], n=cfg["n"],
                           epsilon=cfg["epsilon"], bigK=cfg["big_k"],
                           seed=cfg["seed"], mode=cfg["mode"])
    except ValueError as exc:
        parser.error(str(exc))
    graph = build_cbe(params)
    lg = graph.to_labeled_graph()
    rep = density_report(lg)
    cert = max_clique(lg)
    bound = params.p + params.ell
    config = params.to_dict()
    config["threads"] = cfg["threads"]

    out = cfg["out"]
    with open(f"{out}.edges", "w") as fh:
        fh.write(f"# {_config_comment(config)}\n")
        fh.write(f"# n={lg.n}\n")
        fh.write(f"# classes W=[0,{params.n}) Z=[{params.n},{2*params.n})\n")
        for u, v in lg.edges():
            fh.write(f"{u} {v}\n")
    degs = graph.cross_degrees()
    summary = {
        "config": config,
        "class_sizes": {"W": params.n, "Z": params.n},
        "edge_count": rep.edge_count,
        "cross_density": graph.cross_density(),
        "inner_edges": rep.inner_edges,
        "max_inner_degree": graph.max_inner_degree(),
        "cross_degree_range": [int(degs.min()), int(degs.max())],
        "clique": {"size": cert.size, "witness": list(cert.witness),
                   "exhaustive": cert.exhaustive, "bound": bound,
                   "bound_satisfied": cert.size <= bound},
    }
    _write_json(f"{out}.json", summary)
    _write_csv(f"{out}.csv", config,
               ["graph_id", "n", "cross_density", "max_inner_degree",
                "min_cross_degree", "max_cross_degree", "omega",
                "omega_exhaustive", "omega_bound", "bound_satisfied"],
               [os.path.basename(out), lg.n, repr(graph.cross_density()),
                graph.max_inner_degree(), int(degs.min()), int(degs.max()),
                cert.size, cert.exhaustive, bound, cert.size <= bound])
    return 0 if cert.size <= bound else 1


def _mbe_fields():
    return {
        "ell": (int, True, None), "p": (int, True, None), "q": (int, True, None),
        "k": (int, True, None), "m": (int, True, None),
        "epsilon": (float, False, 0.05), "t": (int, False, 1),
        "retention": (float, False, 0.5), "seed": (int, True, None),
        "point_mode": (str, False, "antipodal"), "out": (str, True, None),
        "threads": (int, False, _threads_default()),
    }


def cmd_gen_mbe(args, parser) -> int:
    cfg = _merge_config(args, parser, _mbe_fields())
    try:
        params = MbeParams(ell=cfg["ell"], p=cfg["p"], q=cfg["q"], k=cfg["k"],
                           m=cfg["m"], epsilon=cfg["epsilon"], t=cfg["t"],
                           retention=cfg["retention"], seed=cfg["seed"],
                           point_mode=cfg["point_mode"])
    except ValueError as exc:
        parser.error(str(exc))
    graph = build_mbe(params)
    bound = graph.omega_bound()
    cert = max_clique(graph.to_labeled_graph(), cutoff=bound)
    bound_ok = cert.upper_bound == bound
    config = params.to_dict()
    config["threads"] = cfg["threads"]

    out = cfg["out"]
    with open(f"{out}.edges", "w") as fh:
        fh.write(f"# {_config_comment(config)}\n")
        fh.write(f"# n={graph.n}\n")
        fh.write(f"# classes: {params.q} x {graph.class_size}\n")
        rows, cols = np.nonzero(np.triu(graph.adjacency, k=1))
        for u, v in zip(rows, cols):
            fh.write(f"{u} {v}\n")
    graph.borsuk.hypergraph.write_hyperedges(f"{out}.hyper")
    densities = {f"V{i+1},V{j+1}": graph.pair_density(i, j)
                 for i in range(params.q) for j in range(i + 1, params.q)}
    summary = {
        "config": config,
        "header": graph.header_dict(),
        "pair_densities": densities,
        "clique": {"found": cert.size, "bound": bound,
                   "bound_satisfied": bound_ok},
    }
    _write_json(f"{out}.json", summary)
    dvals = list(densities.values()) or [0.0]
    _write_csv(f"{out}.csv", config,
               ["graph_id", "n", "classes", "class_size", "min_pair_density",
                "max_pair_density", "omega_found", "omega_bound",
                "bound_satisfied"],
               [os.path.basename(out), graph.n, params.q, graph.class_size,
                repr(min(dvals)), repr(max(dvals)), cert.size, bound, bound_ok])
    return 0 if bound_ok else 1


def cmd_analyze(args, parser) -> int:
    g = read_edge_list(args.edge_list)
    if args.header:
        with open(args.header) as fh:
            header = json.load(fh)
        sizes = header.get("class_sizes") or header.get("header", {}).get("class_sizes")
        if sizes:
            labels = []
            for name in sorted(sizes):
                labels.extend([name] * int(sizes[name]))
            if len(labels) == g.n:
                g.labels = labels
    rep = density_report(g)
    cert = max_clique(g, cutoff=args.cutoff)
    lb, ub, exact = p_independence(g, args.p, exact_limit=args.exact_limit)
    columns = ["graph_id", "n", "density", "omega", "omega_exhaustive",
               "alpha_p_lb", "alpha_p_ub"]
    row = [os.path.basename(args.edge_list), g.n, repr(rep.global_density),
           cert.size, cert.exhaustive, lb, ub]
    config = {"edge_list": os.path.basename(args.edge_list), "p": args.p,
              "cutoff": args.cutoff, "exact_limit": args.exact_limit}
    if args.out:
        _write_csv(args.out, config, columns, row)
    else:
        print(",".join(columns))
        print(",".join(str(x) for x in row))
    return 0


def cmd_certify(args, parser) -> int:
    if args.suite not in CERTIFY_SUITES:
        parser.error(f"unknown suite {args.suite!r}; choose from {CERTIFY_SUITES}")
    report = run_suite(args.suite, trials=args.trials, seed=args.seed)
    text = json.dumps(report, sort_keys=True, indent=2, default=str)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if report["passed"] else 1


def cmd_rho_star(args, parser) -> int:
    try:
        value, (t, r) = rho_star(args.p, args.q)
    except ValueError as exc:
        parser.error(str(exc))
    if args.json:
        print(json.dumps({"p": args.p, "q": args.q, "rho_star": str(value),
                          "t": t, "r": r}, sort_keys=True))
    else:
        print(value)
    return 0


def _parse_grid(parser, value, typ, name, default=None):
    if value is None:
        value = default
    if value is None:
        parser.error(f"sweep requires --{name}")
    return [typ(tok) for tok in str(value).split(",")]


def cmd_sweep(args, parser) -> int:
    if args.target == "gen-cbe":
        grids = {"p": _parse_grid(parser, args.p, int, "p"),
                 "ell": _parse_grid(parser, args.ell, int, "ell"),
                 "k": _parse_grid(parser, args.k, int, "k"),
                 "n": _parse_grid(parser, args.n, int, "n"),
                 "epsilon": _parse_grid(parser, args.epsilon, float, "epsilon", "0.02"),
                 "big_k": _parse_grid(parser, args.big_k, float, "big-k", "2"),
                 "seed": _parse_grid(parser, args.seed, int, "seed")}
        columns = list(grids) + ["cross_density", "omega", "omega_bound",
                                 "bound_satisfied"]
        rows = []
        for combo in itertools.product(*grids.values()):
            cell = dict(zip(grids, combo))
            try:
                params = CbeParams(p=cell["p"], ell=cell["ell"], k=cell["k"],
                                   n=cell["n"], epsilon=cell["epsilon"],
                                   bigK=cell["big_k"], seed=cell["seed"])
            except ValueError as exc:
                parser.error(str(exc))
            graph = build_cbe(params)
            cert = max_clique(graph.to_labeled_graph())
            bound = cell["p"] + cell["ell"]
            rows.append([cell[c] for c in grids]
                        + [repr(graph.cross_density()), cert.size, bound,
                           cert.size <= bound])
    elif args.target == "gen-mbe":
        grids = {"ell": _parse_grid(parser, args.ell, int, "ell"),
                 "p": _parse_grid(parser, args.p, int, "p"),
                 "q": _parse_grid(parser, args.q, int, "q"),
                 "k": _parse_grid(parser, args.k, int, "k"),
                 "m": _parse_grid(parser, args.m, int, "m"),
                 "epsilon": _parse_grid(parser, args.epsilon, float, "epsilon", "0.05"),
                 "t": _parse_grid(parser, args.t, int, "t", "1"),
                 "seed": _parse_grid(parser, args.seed, int, "seed")}
        columns = list(grids) + ["min_pair_density", "max_pair_density",
                                 "omega_found", "omega_bound", "bound_satisfied"]
        rows = []
        for combo in itertools.product(*grids.values()):
            cell = dict(zip(grids, combo))
            try:
                params = MbeParams(ell=cell["ell"], p=cell["p"], q=cell["q"],
                                   k=cell["k"], m=cell["m"],
                                   epsilon=cell["epsilon"], t=cell["t"],
                                   seed=cell["seed"])
            except ValueError as exc:
                parser.error(str(exc))
            graph = build_mbe(params)
            bound = graph.omega_bound()
            cert = max_clique(graph.to_labeled_graph(), cutoff=bound)
            dvals = [graph.pair_density(i, j) for i in range(cell["q"])
                     for j in range(i + 1, cell["q"])] or [0.0]
            rows.append([cell[c] for c in grids]
                        + [repr(min(dvals)), repr(max(dvals)), cert.size,
                           bound, cert.upper_bound == bound])
    else:
        parser.error("sweep target must be gen-cbe or gen-mbe")

    with open(args.out, "w") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(str(x) for x in row) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtlab",
        description="Ramsey-Turan construction lab: sphere-based graph "
                    "builders and weighted-graph certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("gen-cbe", help="build a complex two-class graph")
    for flag, typ in [("--p", int), ("--ell", int), ("--k", int), ("--n", int),
                      ("--epsilon", float), ("--big-k", float), ("--seed", int),
                      ("--threads", int)]:
        pc.add_argument(flag, type=typ)
    pc.add_argument("--mode", choices=["sampled", "strict"])
    pc.add_argument("--out")
    pc.add_argument("--config")
    pc.set_defaults(func=cmd_gen_cbe)

    pm = sub.add_parser("gen-mbe", help="build a multipartite Borsuk-based graph")
    for flag, typ in [("--ell", int), ("--p", int), ("--q", int), ("--k", int),
                      ("--m", int), ("--epsilon", float), ("--t", int),
                      ("--retention", float), ("--seed", int), ("--threads", int)]:
        pm.add_argument(flag, type=typ)
    pm.add_argument("--point-mode", dest="point_mode",
                    choices=["antipodal", "partition"])
    pm.add_argument("--out")
    pm.add_argument("--config")
    pm.set_defaults(func=cmd_gen_mbe)

    pa = sub.add_parser("analyze", help="clique/density/independence stats "
                                        "for an edge list")
    pa.add_argument("edge_list")
    pa.add_argument("--header", help="JSON header with class sizes")
    pa.add_argument("--p", type=int, default=3)
    pa.add_argument("--cutoff", type=int)
    pa.add_argument("--exact-limit", dest="exact_limit", type=int, default=40)
    pa.add_argument("--out")
    pa.set_defaults(func=cmd_analyze)

    pv = sub.add_parser("certify", help="run a certification suite")
    pv.add_argument("suite")
    pv.add_argument("--trials", type=int, default=200)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--out")
    pv.set_defaults(func=cmd_certify)

    pr = sub.add_parser("rho-star", help="print the conjectured density")
    pr.add_argument("--p", type=int, required=True)
    pr.add_argument("--q", type=int, required=True)
    pr.add_argument("--json", action="store_true")
    pr.set_defaults(func=cmd_rho_star)

    ps = sub.add_parser("sweep", help="cartesian parameter grid, one CSV row "
                                      "per cell")
    ps.add_argument("target", choices=["gen-cbe", "gen-mbe"])
    for flag in ["--p", "--ell", "--q", "--k", "--n", "--m", "--epsilon",
                 "--big-k", "--t", "--seed"]:
        ps.add_argument(flag, default=None)
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
