"""Run modes behind the command-line tool: count, update, verify, bench."""

from __future__ import annotations

import csv
import io as _io
import json
import os
import statistics
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .dynamic_update import CountState, apply_and_update, recount
from .errors import ConfigError, VerificationFailed
from .generators import CardDist, gen_batch, random_rows
from .hypergraph import DynHypergraph
from .io import FORMATS, read_rows
from .oracle import DEFAULT_CAP, RefHypergraph, ref_apply, ref_count_all
from .triads import MOTIFS, TemporalParams, TriadCounts

MODES = ("count", "update", "verify", "bench")
PHASES = ("build", "delete", "insert", "region", "count", "total")


@dataclass
class RunConfig:
    mode: str = "count"
    motif: str = "all"
    t_delta: float = 0
    input: str | None = None
    format: str = "edge-lines"
    n_edges: int = 1000
    n_vertices: int = 2000
    max_card: int = 8
    batches: int = 10
    batch_size: int = 100
    delete_pct: float = 0.5
    card: str = "uniform:8"
    vertex_mods: int = 0
    seed: int = 0
    threads: int = 1
    overprovision: float = 2.0
    oracle_cap: int = DEFAULT_CAP

    def motifs(self) -> tuple:
        return MOTIFS if self.motif == "all" else (self.motif,)

    def params(self) -> TemporalParams:
        return TemporalParams(self.t_delta)

    def workers(self) -> int:
        return self.threads or os.cpu_count() or 1

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.motif not in MOTIFS + ("all",):
            raise ConfigError(f"unknown motif {self.motif!r}")
        if not self.t_delta >= 0:
            raise ConfigError("t_delta must be >= 0")
        if self.motif == "temporal" and not self.t_delta > 0:
            raise ConfigError("motif 'temporal' needs t_delta > 0")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if not 0 <= self.delete_pct <= 1:
            raise ConfigError("delete_pct must lie in [0, 1]")
        if self.batches < 0 or self.batch_size < 0 or self.vertex_mods < 0:
            raise ConfigError("batch schedule values must be >= 0")
        if self.threads < 0:
            raise ConfigError("threads must be >= 0")
        if self.overprovision < 1:
            raise ConfigError("overprovision must be >= 1")
        if self.input is None and (self.max_card < 1
                                   or self.n_vertices < self.max_card):
            raise ConfigError("need max_card >= 1 and n_vertices >= max_card")
        CardDist.parse(self.card)

    def to_json(self) -> dict:
        d = asdict(self)
        d["t_delta"] = self.params().to_json()
        return d


@dataclass
class RunReport:
    mode: str
    config: dict
    counts: list[dict] = field(default_factory=list)
    timings: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def deterministic_part(self) -> dict:
        """Everything except wall-clock fields."""
        summary = {k: v for k, v in self.summary.items()
                   if not k.endswith("_ms") and "speedup" not in k}
        return {"mode": self.mode, "config": self.config,
                "counts": self.counts, "summary": summary}

    def csv(self) -> str:
        buf = _io.StringIO()
        cols = ["batch", *PHASES, "recount"]
        w = csv.DictWriter(buf, cols, extrasaction="ignore", restval="")
        w.writeheader()
        for row in self.timings:
            w.writerow({k: (f"{v:.3f}" if isinstance(v, float) else v)
                        for k, v in row.items()})
        return buf.getvalue()


def _build(cfg: RunConfig) -> tuple[DynHypergraph, float]:
    t0 = time.perf_counter()
    if cfg.input is not None:
        rows = read_rows(cfg.input, cfg.format)
    else:
        rows = random_rows(cfg.n_edges, cfg.n_vertices, cfg.max_card, cfg.seed)
    g = DynHypergraph(rows, overprovision=cfg.overprovision)
    return g, (time.perf_counter() - t0) * 1e3


def _batch_seeds(cfg: RunConfig) -> list[int]:
    ss = np.random.SeedSequence(cfg.seed).spawn(cfg.batches)
    return [int(s.generate_state(1)[0]) for s in ss]


def _vertex_range(g: DynHypergraph, cfg: RunConfig) -> int:
    if cfg.input is None:
        return cfg.n_vertices
    verts = g.vertices()
    return max(verts[-1] if verts else 1, 1)


def _snapshot(counts: TriadCounts, cfg: RunConfig, batch: int) -> dict:
    return {"batch": batch, **counts.to_dict(cfg.motifs(), cfg.params())}


def _compare(batch, expected: TriadCounts, actual: TriadCounts, motifs):
    """Raise on the first requested component where the counts disagree."""
    mine, theirs = expected.components(), actual.components()
    for key, value in mine.items():
        if key.split("[")[0].split("_")[0] in motifs and value != theirs[key]:
            raise VerificationFailed(batch, key, value, theirs[key])


def run(mode: str, config: RunConfig | None = None) -> RunReport:
    cfg = config or RunConfig()
    cfg.mode = mode
    cfg.validate()
    workers = cfg.workers()
    g, build_ms = _build(cfg)
    report = RunReport(mode, cfg.to_json())
    state = CountState.from_graph(g, cfg.params(), cfg.motifs(), workers)
    report.counts.append(_snapshot(state.counts, cfg, 0))
    report.timings.append({"batch": 0, "build": build_ms,
                           "count": state.timings["count"],
                           "total": build_ms + state.timings["total"]})
    report.summary = {"edges": g.num_edges, "vertices": g.num_vertices}
    if mode == "count":
        return report

    ref = None
    if mode == "verify":
        ref = RefHypergraph.from_records(g.records())
        _compare(0, ref_count_all(ref, cfg.params(), cfg.oracle_cap),
                 state.counts, cfg.motifs())

    card = CardDist.parse(cfg.card)
    n_vertices = _vertex_range(g, cfg)
    speedups = []
    for i, seed in enumerate(_batch_seeds(cfg), 1):
        batch = gen_batch(g, cfg.batch_size, cfg.delete_pct, card, seed,
                          n_vertices=n_vertices, vertex_mods=cfg.vertex_mods)
        state = apply_and_update(state, g, batch, workers)
        row = {"batch": i, **state.timings}
        if mode == "verify":
            ref = ref_apply(ref, batch)
            _compare(i, ref_count_all(ref, cfg.params(), cfg.oracle_cap),
                     state.counts, cfg.motifs())
        elif mode == "bench":
            base = recount(state, g, workers)
            _compare(i, base.counts, state.counts, cfg.motifs())
            # the baseline applies the same structural update, then recounts
            row["recount"] = (state.timings["delete"] + state.timings["insert"]
                              + base.timings["total"])
            speedups.append(row["recount"] / max(state.timings["total"], 1e-9))
        report.counts.append(_snapshot(state.counts, cfg, i))
        report.timings.append(row)

    report.summary.update({"final_edges": g.num_edges,
                           "final_vertices": g.num_vertices})
    if mode == "verify":
        report.summary["verified_batches"] = cfg.batches
    if mode == "bench" and speedups:
        report.summary["speedup_per_batch"] = speedups
        report.summary["median_speedup"] = statistics.median(speedups)
        report.summary["median_incremental_ms"] = statistics.median(
            r["total"] for r in report.timings[1:])
        report.summary["median_recount_ms"] = statistics.median(
            r["recount"] for r in report.timings[1:])
    return report
