"""Monte Carlo experiment orchestration: trials, scans, coupled runs.

Reproducibility contract: every record is a pure function of the config
and the trial index.  Per-trial streams are derived with a splittable
scheme -- SeedSequence([base_seed, 0, trial_index, purpose]) with purpose
codes 11 (matching) and 22 (initial state); a frozen matching uses
SeedSequence([base_seed, 1, 11]).  The recorded trial seed is the 64-bit
value of SeedSequence([base_seed, 0, trial_index]).  Aggregation is an
ordered reduction keyed by trial index, so outputs are byte-identical
across worker thread counts.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .engine import Rule, run_to_fixpoint, random_initial
from .lattice import TorusGraph, tessellate
from .matchings import (MatchingTuple, augmented_graph, deterministic_admissible,
                        sample_admissible)
from .ubiquity import cell_components, check_core_matching, inactive_cell_mask

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "ScanRow",
    "ScanResult",
    "CoupledRecord",
    "wilson_interval",
    "run_trial",
    "run_many",
    "run_scan",
    "coupled_trial",
    "trial_json_line",
    "scan_csv_lines",
    "resolve_threads",
]

log = logging.getLogger(__name__)

WILSON_Z95 = 1.959963984540054  # two-sided 95% normal quantile

SCAN_CSV_HEADER = "p,trials,disseminated,freq,wilson_lo,wilson_hi,config_hash"


@dataclass(frozen=True)
class ExperimentConfig:
    """One reproducible experiment description.

    graph "star" runs majority-r on the matching-augmented lattice; graph
    "lattice" runs on the bare reach lattice with rule "2r-majority"
    (default; the coupled phase-one process) or "r-majority".  ``t`` is the
    tessellation cell side; None selects min(100*k^3, n//2), capped so the
    matched-core checker stays applicable.
    """

    n: int
    k: int
    r: int
    graph: str = "star"
    rule: str = "auto"
    p: float | None = None
    p_grid: tuple[float, ...] | None = None
    trials: int = 100
    base_seed: int = 0
    matching_source: str = "sample"   # "det" | "sample"
    fixed_matching: bool = False
    t: int | None = None
    threads: int = 1

    def __post_init__(self):
        if self.graph not in ("star", "lattice"):
            raise ValueError(f"graph must be star or lattice, got {self.graph!r}")
        if self.matching_source not in ("det", "sample"):
            raise ValueError("matching_source must be 'det' or 'sample'")
        if 2 * self.k + 1 > self.n:
            raise ValueError(f"2k+1 = {2 * self.k + 1} > n = {self.n}")
        if self.graph == "star" and self.n % 2:
            raise ValueError("n must be even when matchings are used")
        if self.graph == "star" and self.rule not in ("auto", "r-majority"):
            raise ValueError("the star graph runs the r-majority rule")
        if self.rule not in ("auto", "r-majority", "2r-majority"):
            raise ValueError(f"unknown rule {self.rule!r}")
        for p in self.all_p():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"p={p} outside [0, 1]")
        if self.t is None and 100 * self.k ** 3 > self.n // 2:
            log.warning("tessellation t capped at n/2 = %d (100*k^3 = %d)",
                        max(self.n // 2, 1), 100 * self.k ** 3)

    def all_p(self) -> tuple[float, ...]:
        if self.p_grid is not None:
            return tuple(self.p_grid)
        return (self.p,) if self.p is not None else ()

    def resolved_t(self) -> int:
        if self.t is not None:
            return self.t
        return max(min(100 * self.k ** 3, self.n // 2), 1)

    def resolved_rule(self) -> Rule:
        if self.graph == "star":
            return Rule("majority", self.r)
        if self.rule == "r-majority":
            return Rule("majority", self.r)
        return Rule("majority", 2 * self.r)

    def config_hash(self) -> str:
        """Hash over the semantic fields only; thread count and output paths
        never affect results, so they are excluded."""
        d = {
            "n": self.n, "k": self.k, "r": self.r, "graph": self.graph,
            "rule": self.rule, "p": self.p,
            "p_grid": list(self.p_grid) if self.p_grid is not None else None,
            "trials": self.trials, "base_seed": self.base_seed,
            "matching_source": self.matching_source,
            "fixed_matching": self.fixed_matching, "t": self.resolved_t(),
        }
        blob = json.dumps(d, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def _trial_seed(base_seed: int, trial_index: int) -> int:
    ss = np.random.SeedSequence([base_seed, 0, trial_index])
    return int(ss.generate_state(1, np.uint64)[0])


def _rng(base_seed: int, trial_index: int, purpose: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([base_seed, 0, trial_index, purpose]))


def _fixed_matching_rng(base_seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([base_seed, 1, 11]))


@dataclass
class TrialRecord:
    """One trial outcome.  ``wall_time`` is informational and excluded from
    the serialized form so outputs stay byte-identical."""

    trial: int
    seed: int
    disseminated: bool
    rounds: int
    inactive: int
    components: list[tuple[int, int]]   # (size, diam) per inactive-cell component
    lemma42: str                        # "pass" | "skip"
    config_hash: str
    wall_time: float = 0.0


def trial_json_line(rec: TrialRecord) -> str:
    return json.dumps({
        "trial": rec.trial,
        "seed": str(rec.seed),
        "disseminated": rec.disseminated,
        "rounds": rec.rounds,
        "inactive": rec.inactive,
        "components": [{"size": s, "diam": d} for s, d in rec.components],
        "lemma42": rec.lemma42,
        "config_hash": rec.config_hash,
    }, separators=(",", ":"))


def _build_matching(cfg: ExperimentConfig, trial_index: int,
                    fixed: MatchingTuple | None) -> MatchingTuple:
    if fixed is not None:
        return fixed
    if cfg.matching_source == "det":
        return deterministic_admissible(cfg.n, cfg.k, cfg.r)
    return sample_admissible(cfg.n, cfg.k, cfg.r,
                             _rng(cfg.base_seed, trial_index, 11))


def make_fixed_matching(cfg: ExperimentConfig) -> MatchingTuple | None:
    """The frozen tuple shared by all trials when fixed_matching is set."""
    if cfg.graph != "star" or not cfg.fixed_matching:
        return None
    if cfg.matching_source == "det":
        return deterministic_admissible(cfg.n, cfg.k, cfg.r)
    return sample_admissible(cfg.n, cfg.k, cfg.r, _fixed_matching_rng(cfg.base_seed))


def run_trial(cfg: ExperimentConfig, trial_index: int, p: float | None = None,
              fixed: MatchingTuple | None = None) -> TrialRecord:
    """Build the graph, draw the initial set, run to fixpoint, diagnose."""
    t0 = time.perf_counter()
    if p is None:
        if cfg.p is None:
            raise ValueError("config has no p; pass one explicitly")
        p = cfg.p
    base = TorusGraph.reach(cfg.n, cfg.k)
    matching = None
    if cfg.graph == "star":
        matching = _build_matching(cfg, trial_index, fixed)
        g = augmented_graph(base, matching)
    else:
        g = base
    rule = cfg.resolved_rule()
    initial = random_initial(g.n_vertices, p, _rng(cfg.base_seed, trial_index, 22))
    final = run_to_fixpoint(g, rule, initial)
    inactive = ~final.active
    tess = tessellate(cfg.n, cfg.resolved_t())
    comps = cell_components(inactive_cell_mask(tess, inactive), "linf")
    lemma42 = "skip"
    if cfg.graph == "star":
        report = check_core_matching(tess, inactive, matching, cfg.k)
        if not report.skipped:
            if not report.passed:
                raise RuntimeError(
                    f"matched-core necessary condition failed on trial "
                    f"{trial_index}; this indicates an implementation bug")
            lemma42 = "pass"
    return TrialRecord(
        trial=trial_index,
        seed=_trial_seed(cfg.base_seed, trial_index),
        disseminated=final.disseminated,
        rounds=final.rounds,
        inactive=final.inactive_count,
        components=[(c.size, c.diam) for c in comps],
        lemma42=lemma42,
        config_hash=cfg.config_hash(),
        wall_time=time.perf_counter() - t0,
    )


def _map_ordered(fn, items, threads: int):
    """Apply fn over items, preserving order, optionally on a thread pool."""
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_many(cfg: ExperimentConfig) -> list[TrialRecord]:
    """cfg.trials independent trials at cfg.p, ordered by trial index."""
    fixed = make_fixed_matching(cfg)
    return _map_ordered(lambda i: run_trial(cfg, i, fixed=fixed),
                        range(cfg.trials), cfg.threads)


def wilson_interval(successes: int, trials: int,
                    z: float = WILSON_Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return (0.0, 1.0)
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    # clamp to [0, 1] and force containment of the point estimate (the exact
    # endpoints can land an ulp inside phat at the boundaries)
    return (min(max(0.0, center - half), phat), max(min(1.0, center + half), phat))


@dataclass
class ScanRow:
    p: float
    trials: int
    disseminated: int
    freq: float
    wilson_lo: float
    wilson_hi: float


@dataclass
class ScanResult:
    """Aggregated p-scan.  ``consistent`` flags whether dissemination
    frequency is non-decreasing in p up to Monte Carlo noise (a strict
    decrease beyond the joint Wilson intervals at adjacent grid points is a
    violation).  ``crossing_p`` records the first grid density with
    frequency >= 1/2 -- a pilot-derived artifact constant, not a reference
    value."""

    rows: list[ScanRow]
    config_hash: str
    consistent: bool
    crossing_p: float | None
    records: list[list[TrialRecord]] = field(default_factory=list, repr=False)


def run_scan(cfg: ExperimentConfig) -> ScanResult:
    """Per-density aggregation over cfg.trials trials per grid point.

    Work items are (grid index, trial) pairs; the trial seed is derived
    from the flattened index, and the reduction is ordered, so the result
    is independent of the thread count.
    """
    grid = cfg.all_p()
    if not grid:
        raise ValueError("config has no p grid")
    fixed = make_fixed_matching(cfg)
    items = [(pi, i) for pi in range(len(grid)) for i in range(cfg.trials)]

    def work(item):
        pi, i = item
        return run_trial(cfg, pi * cfg.trials + i, p=grid[pi], fixed=fixed)

    flat = _map_ordered(work, items, cfg.threads)
    records = [flat[pi * cfg.trials:(pi + 1) * cfg.trials]
               for pi in range(len(grid))]
    rows = []
    for p, recs in zip(grid, records):
        diss = sum(r.disseminated for r in recs)
        lo, hi = wilson_interval(diss, len(recs))
        rows.append(ScanRow(p=p, trials=len(recs), disseminated=diss,
                            freq=diss / len(recs), wilson_lo=lo, wilson_hi=hi))
    consistent = all(rows[i + 1].wilson_hi >= rows[i].wilson_lo
                     for i in range(len(rows) - 1))
    crossing = next((row.p for row in rows if row.freq >= 0.5), None)
    return ScanResult(rows=rows, config_hash=cfg.config_hash(),
                      consistent=consistent, crossing_p=crossing,
                      records=records)


def scan_csv_lines(result: ScanResult) -> list[str]:
    lines = [SCAN_CSV_HEADER]
    for row in result.rows:
        lines.append(
            f"{row.p:g},{row.trials},{row.disseminated},{row.freq:.6f},"
            f"{row.wilson_lo:.6f},{row.wilson_hi:.6f},{result.config_hash}")
    return lines


@dataclass
class CoupledRecord:
    """Paired run of the doubled-majority lattice process and the majority
    process on the augmented graph from one initial set."""

    trial: int
    seed: int
    lattice_final_active: int
    star_final_active: int
    lattice_disseminated: bool
    star_disseminated: bool
    inclusion_holds: bool


def coupled_trial(cfg: ExperimentConfig, trial_index: int = 0,
                  fixed: MatchingTuple | None = None) -> CoupledRecord:
    """Run majority-2r on the bare lattice and majority-r on the augmented
    graph from the same initial set; the lattice's final active set must be
    contained in the augmented graph's.  A violation raises: the containment
    is structural, not statistical."""
    if cfg.graph != "star":
        raise ValueError("coupled trials need a star config")
    if cfg.p is None:
        raise ValueError("config has no p")
    base = TorusGraph.reach(cfg.n, cfg.k)
    matching = _build_matching(cfg, trial_index, fixed)
    star = augmented_graph(base, matching)
    initial = random_initial(base.n_vertices, cfg.p,
                             _rng(cfg.base_seed, trial_index, 22))
    lat = run_to_fixpoint(base, Rule("majority", 2 * cfg.r), initial)
    aug = run_to_fixpoint(star, Rule("majority", cfg.r), initial)
    inclusion = bool((~lat.active | aug.active).all())
    if not inclusion:
        raise RuntimeError(
            f"coupling violated on trial {trial_index}: lattice final active "
            "set is not contained in the augmented one (bug)")
    return CoupledRecord(
        trial=trial_index,
        seed=_trial_seed(cfg.base_seed, trial_index),
        lattice_final_active=int(lat.active.sum()),
        star_final_active=int(aug.active.sum()),
        lattice_disseminated=lat.disseminated,
        star_disseminated=aug.disseminated,
        inclusion_holds=inclusion,
    )


def resolve_threads(requested: int | None) -> int:
    """MAJPERC_THREADS overrides the requested worker count."""
    env = os.environ.get("MAJPERC_THREADS")
    if env:
        return max(1, int(env))
    return max(1, requested or 1)
