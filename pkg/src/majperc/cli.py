"""Command line interface.

Exit codes: 0 success, 1 assertion/consistency failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import growth, theory
from .harness import (ExperimentConfig, coupled_trial, make_fixed_matching,
                      resolve_threads, run_many, run_scan, run_trial,
                      scan_csv_lines, trial_json_line, wilson_interval,
                      SCAN_CSV_HEADER)
from .lattice import TorusGraph, tessellate
from .matchings import (SamplingError, augmented_graph, deterministic_admissible,
                        sample_admissible)
from .ubiquity import (check_ubiquity, claim_cumulative_bound,
                       claim_diameter_bound, diameter_stats)


def _parse_int_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _parse_p_grid(text: str) -> tuple[float, ...]:
    if ":" in text:
        a, b, step = (float(x) for x in text.split(":", 2))
        if step <= 0:
            raise ValueError("p-grid step must be positive")
        out = []
        v = a
        while v <= b + 1e-9:
            out.append(round(v, 10))
            v += step
        return tuple(out)
    return tuple(float(x) for x in text.split(","))


def _add_run_args(sp, with_p=True):
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--r", type=int, default=1)
    if with_p:
        sp.add_argument("--p", type=float)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--graph", choices=("lattice", "star"), default="star")
    sp.add_argument("--matching", choices=("det", "sample"), default="sample")
    sp.add_argument("--fixed-matching", action="store_true")
    sp.add_argument("--t", type=int)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out", type=str)
    sp.add_argument("--format", choices=("jsonl", "csv"), default=None)


def _config(args, p_grid=None) -> ExperimentConfig:
    return ExperimentConfig(
        n=args.n, k=args.k, r=args.r, graph=args.graph,
        p=getattr(args, "p", None), p_grid=p_grid,
        trials=args.trials, base_seed=args.seed,
        matching_source=args.matching, fixed_matching=args.fixed_matching,
        t=args.t, threads=resolve_threads(args.threads),
    )


def _emit(lines, out_path):
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_theory(args) -> int:
    rows = []
    for d in _parse_int_range(args.d):
        cp = theory.critical_probability(d)
        rows.append({"d": d, "p_tilde": cp.value, "argmin_y": cp.argmin_y})
    if args.json:
        doc = {"critical_probabilities": rows,
               "wheel_threshold": theory.wheel_critical_probability()}
        if args.n:
            doc["window"] = theory.parameter_window(args.n, args.p0).to_json_dict()
        print(json.dumps(doc, indent=2))
    else:
        print(f"{'d':>4}  {'p_tilde':>10}  {'argmin_y':>10}")
        for row in rows:
            print(f"{row['d']:>4}  {row['p_tilde']:>10.6f}  {row['argmin_y']:>10.6f}")
        print(f"wheel threshold: {theory.wheel_critical_probability():.6f}")
        if args.n:
            w = theory.parameter_window(args.n, args.p0)
            print(f"window at n={args.n}: p_min={w.p_min:.4g} p_max={w.p_max}"
                  f" nonempty={w.nonempty}")
    return 0


def cmd_build_graph(args) -> int:
    base = TorusGraph.reach(args.n, args.k)
    if args.graph == "star":
        if args.matching == "det":
            m = deterministic_admissible(args.n, args.k, args.r)
        else:
            m = sample_admissible(args.n, args.k, args.r, args.seed)
        g = augmented_graph(base, m)
    else:
        g = base
    print(json.dumps({
        "n": g.n, "k": g.k, "matchings": g.num_matchings,
        "vertices": g.n_vertices, "degree": g.degree,
        "majority_threshold": int(math.ceil((g.degree + args.r) / 2)),
    }))
    return 0


def cmd_sample_matchings(args) -> int:
    m = sample_admissible(args.n, args.k, args.r, args.seed)
    _emit([m.to_json()], args.out)
    return 0


def cmd_simulate(args) -> int:
    cfg = _config(args)
    if cfg.p is None:
        print("simulate requires --p", file=sys.stderr)
        return 2
    records = run_many(cfg)
    fmt = args.format or "jsonl"
    if fmt == "jsonl":
        _emit([trial_json_line(r) for r in records], args.out)
    else:
        diss = sum(r.disseminated for r in records)
        lo, hi = wilson_interval(diss, len(records))
        _emit([SCAN_CSV_HEADER,
               f"{cfg.p:g},{len(records)},{diss},{diss / len(records):.6f},"
               f"{lo:.6f},{hi:.6f},{cfg.config_hash()}"], args.out)
    return 0


def cmd_scan(args) -> int:
    grid = _parse_p_grid(args.p_grid)
    cfg = _config(args, p_grid=grid)
    result = run_scan(cfg)
    fmt = args.format or "csv"
    if fmt == "csv":
        _emit(scan_csv_lines(result), args.out)
    else:
        lines = [trial_json_line(r) for recs in result.records for r in recs]
        _emit(lines, args.out)
    if result.crossing_p is not None:
        print(f"# crossing at p={result.crossing_p:g}", file=sys.stderr)
    if not result.consistent:
        print("# monotonicity consistency check FAILED", file=sys.stderr)
        return 1
    return 0


def cmd_coupled(args) -> int:
    cfg = _config(args)
    if cfg.p is None:
        print("coupled requires --p", file=sys.stderr)
        return 2
    fixed = make_fixed_matching(cfg)
    try:
        for i in range(cfg.trials):
            rec = coupled_trial(cfg, i, fixed=fixed)
            print(f"trial {i}: lattice {rec.lattice_final_active} <= "
                  f"star {rec.star_final_active} active; inclusion ok")
    except RuntimeError as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    failures = 0
    total = 0
    for params, check in growth.shape_growth_grid(args.k_max, args.a_max, args.b_max):
        total += 1
        tag = "pass" if check.passed else ("skip" if check.skipped else "FAIL")
        if not check.passed and not check.skipped:
            failures += 1
        print(f"k={params['k']:>2} m={params['m']:>2} a={params['a']} "
              f"b={params['b']} r={params['r']}  {tag}")
    print(f"{total} cases, {failures} failures")
    return 1 if failures else 0


def cmd_diagnose(args) -> int:
    cfg = _config(args)
    if cfg.p is None:
        print("diagnose requires --p", file=sys.stderr)
        return 2
    fixed = make_fixed_matching(cfg)
    rec = run_trial(cfg, args.trial, fixed=fixed)

    base = TorusGraph.reach(cfg.n, cfg.k)
    if cfg.graph == "star":
        from .harness import _build_matching
        g = augmented_graph(base, _build_matching(cfg, args.trial, fixed))
    else:
        g = base
    from .engine import random_initial, run_to_fixpoint
    from .harness import _rng
    initial = random_initial(g.n_vertices, cfg.p, _rng(cfg.base_seed, args.trial, 22))
    final = run_to_fixpoint(g, cfg.resolved_rule(), initial)
    tess = tessellate(cfg.n, cfg.resolved_t())
    nh = tess.cells_per_axis
    ids = tess.vertex_cell_ids()
    touched = np.zeros(nh * nh, dtype=bool)
    touched[np.unique(ids[~final.active])] = True
    fully_active = ~touched.reshape(nh, nh)
    eps = args.eps if args.eps is not None else max(float(cfg.k) ** -100, 1e-300)
    report = check_ubiquity(fully_active, eps)
    stats = diameter_stats(touched.reshape(nh, nh))
    doc = {
        "trial": rec.trial,
        "disseminated": rec.disseminated,
        "inactive": rec.inactive,
        "lemma42": rec.lemma42,
        "eps": eps,
        "ubiquity": report.to_json_dict(),
        "diameter_stats": {
            str(d): {"cells": nd, "cumulative": npd,
                     "bound": claim_diameter_bound(d, eps, nh * nh),
                     "cumulative_bound": claim_cumulative_bound(d, eps, nh * nh)}
            for d, (nd, npd) in stats.items()},
    }
    _emit([json.dumps(doc, indent=2)], args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="majperc",
        description="Strong-majority bootstrap percolation on augmented toroidal "
                    "lattices: theory values, simulation, and diagnostics.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("theory", help="critical probabilities and windows")
    sp.add_argument("--d", type=str, default="3..12", help="degree or range lo..hi")
    sp.add_argument("--n", type=int, help="report the parameter window at this n")
    sp.add_argument("--p0", type=float, default=0.01)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_theory)

    sp = sub.add_parser("build-graph", help="construct a graph and print a summary")
    _add_run_args(sp, with_p=False)
    sp.set_defaults(func=cmd_build_graph)

    sp = sub.add_parser("sample-matchings", help="sample an admissible tuple as JSON")
    _add_run_args(sp, with_p=False)
    sp.set_defaults(func=cmd_sample_matchings)

    sp = sub.add_parser("simulate", help="independent trials at one density")
    _add_run_args(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("scan", help="dissemination frequency over a p grid")
    _add_run_args(sp, with_p=False)
    sp.add_argument("--p-grid", type=str, required=True, dest="p_grid",
                    help="a:b:step or comma list")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("coupled", help="coupled lattice/augmented runs")
    _add_run_args(sp)
    sp.set_defaults(func=cmd_coupled)

    sp = sub.add_parser("verify", help="deterministic growth over a parameter grid")
    sp.add_argument("--k-max", type=int, default=10, dest="k_max")
    sp.add_argument("--a-max", type=int, default=3, dest="a_max")
    sp.add_argument("--b-max", type=int, default=3, dest="b_max")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("diagnose", help="ubiquity report for one trial")
    _add_run_args(sp)
    sp.add_argument("--trial", type=int, default=0)
    sp.add_argument("--eps", type=float)
    sp.set_defaults(func=cmd_diagnose)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, SamplingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
