"""
Main orchestration class for experiments.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional, Sequence

import numpy as np

from .errors import InvalidParameterError
from .graph import MultiGraph, connected_components, excess
from .kernel import PhaseParams, upper_bound_with_slack
from .models import Defaults, ExperimentRecord, GraphModel, Mode, TrialStatus
from .oracle import (
    clique_excess,
    edge_upper_bound,
    exact_ccl,
    greedy_minor,
    verify,
)
from .repository import ResultRepository
from .runner import (
    MinorTrialSpec,
    PhaseTrialSpec,
    TrialRunner,
    TrialSummary,
    run_minor_trial,
    run_phase_trial,
)
from .samplers import (
    RandomSource,
    sample_g_prime,
    sample_g_simple,
    sample_g_star,
    sample_gnm,
    sample_gnp,
    sample_hamilton_plus_matching,
)
from .stats import (
    ChiSquareResult,
    configuration_uniformity,
    cycle_uniformity,
    hamilton_plus_matching_uniformity,
    matching_uniformity,
)


@dataclass
class SampleOutcome:
    """Graph drawn by :meth:`ExperimentManager.sample` with its diagnostics."""

    graph: MultiGraph
    diagnostics: dict[str, Any]
    path: Optional[str] = None


@dataclass
class OracleReport:
    """Outcome of the oracle regression run."""

    graphs_checked: int = 0
    violations: list[str] = field(default_factory=list)
    sampler_checks: list[tuple[str, ChiSquareResult]] = field(
        default_factory=list
    )
    significance: float = 0.01

    @property
    def ok(self) -> bool:
        """True if no graph check and no sampler check failed."""
        return not self.violations and all(
            result.passes(self.significance)
            for _, result in self.sampler_checks
        )


def _complete_graph(n: int) -> MultiGraph:
    return MultiGraph(n, itertools.combinations(range(n), 2))


def _cycle_graph(n: int) -> MultiGraph:
    return MultiGraph(n, ((v, (v + 1) % n) for v in range(n)))


def _random_tree(n: int, src: RandomSource) -> MultiGraph:
    """Uniform labelled tree from a random Pruefer sequence."""
    if n <= 2:
        return MultiGraph(n, [(0, 1)] if n == 2 else [])
    code = [int(v) for v in src.rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for v in code:
        degree[v] += 1
    edges: list[tuple[int, int]] = []
    for v in code:
        leaf = min(u for u in range(n) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (x for x in range(n) if degree[x] == 1)
    edges.append((u, w))
    return MultiGraph(n, edges)


def _random_connected(n: int, src: RandomSource) -> MultiGraph:
    """Random connected simple graph on ``n`` vertices (rejection from G(n,p))."""
    p = float(src.rng.uniform(0.25, 0.85))
    while True:
        g = sample_gnp(n, p, src)
        if len(connected_components(g)) == 1:
            return g


def _median(records: Sequence[ExperimentRecord], name: str) -> float:
    return float(np.median([getattr(r, name) or 0 for r in records]))


def _all_graphs(n: int) -> Iterator[MultiGraph]:
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield MultiGraph(
            n, (pair for bit, pair in enumerate(pairs) if mask >> bit & 1)
        )


class ExperimentManager:
    """
    Orchestrates sampling, builder sweeps, critical-window sweeps and the
    oracle regression, using dependency injection.
    """

    def __init__(self, repository: ResultRepository, runner: TrialRunner):
        """Initialize with dependencies."""
        self.logger = logging.getLogger(__name__)
        self.repository = repository
        self.runner = runner

    def sample(
        self,
        model: GraphModel,
        n: int,
        seed: int,
        r: int = 3,
        m: Optional[int] = None,
        p: Optional[float] = None,
        out: Optional[str] = None,
    ) -> SampleOutcome:
        """Draw one graph of ``model`` on stream 0 and optionally save it."""
        src = RandomSource(seed, 0)
        diagnostics: dict[str, Any] = {"model": model.value, "n": n}
        if model is GraphModel.GSTAR:
            graph = sample_g_star(n, r, src)
            diagnostics["r"] = r
        elif model is GraphModel.GPRIME:
            graph = sample_g_prime(n, r, src)
            diagnostics["r"] = r
        elif model is GraphModel.GSIMPLE:
            graph, sampled = sample_g_simple(n, r, src)
            diagnostics.update(r=r, rejections=sampled.rejections)
        elif model is GraphModel.HM:
            instance = sample_hamilton_plus_matching(n, src)
            graph = instance.graph()
            sampled = instance.diagnostics()
            diagnostics.update(
                x1=sampled.p1p2_edge_count,
                in_xrange_window=sampled.in_xrange_window,
            )
        elif model is GraphModel.GNM:
            if m is None:
                raise InvalidParameterError("model gnm needs --m")
            graph = sample_gnm(n, m, src)
            diagnostics["m"] = m
        else:
            if p is None:
                raise InvalidParameterError("model gnp needs --p")
            graph = sample_gnp(n, p, src)
            diagnostics["p"] = p
        diagnostics.update(
            edges=graph.edge_count,
            loops=graph.loop_count(),
            multi_edges=graph.multi_edge_count(),
        )
        path = None
        if out is not None:
            if not self.repository.save_graph(out, graph):
                raise OSError(f"could not write graph to {out}")
            path = out
        self.logger.info(
            "Sampled %s with %d vertices and %d edges",
            model.value,
            graph.vertex_count,
            graph.edge_count,
        )
        return SampleOutcome(graph=graph, diagnostics=diagnostics, path=path)

    def run_minor_sweep(
        self,
        n: int,
        trials: int,
        seed: int,
        epsilon: float = Defaults.EPSILON,
        mode: Mode = Mode.PRACTICAL,
        dump_dir: Optional[str] = None,
    ) -> TrialSummary:
        """One builder trial per stream 0..trials-1."""
        if n < 4 or n % 2:
            raise InvalidParameterError(
                f"n must be even and at least 4, got {n}"
            )
        specs = [
            MinorTrialSpec(
                seed=seed,
                trial=trial,
                n=n,
                epsilon=epsilon,
                mode=mode,
                keep_certificate=dump_dir is not None,
            )
            for trial in range(trials)
        ]
        summary = self.runner.run(run_minor_trial, specs, "minor")
        self._dump_certificates(summary, dump_dir)
        return summary

    def run_phase_sweep(
        self,
        n: int,
        trials: int,
        seed: int,
        lambdas: Sequence[float] = (),
        lambda_bars: Sequence[float] = (),
        exact_cap: int = Defaults.EXACT_CAP,
        restarts: int = Defaults.GREEDY_RESTARTS,
        reject_multigraph_kernels: bool = False,
        dump_dir: Optional[str] = None,
    ) -> TrialSummary:
        """Trials 0..trials-1 for every window value, lambda before lambda_bar."""
        points: list[tuple[Optional[float], Optional[float]]] = [
            (lam, None) for lam in lambdas
        ] + [(None, lam_bar) for lam_bar in lambda_bars]
        if not points:
            raise InvalidParameterError("give at least one lambda or m value")
        specs = [
            PhaseTrialSpec(
                seed=seed,
                trial=trial,
                n=n,
                lam=lam,
                lam_bar=lam_bar,
                exact_cap=exact_cap,
                restarts=restarts,
                reject_multigraph_kernels=reject_multigraph_kernels,
                keep_certificate=dump_dir is not None,
            )
            for lam, lam_bar in points
            for trial in range(trials)
        ]
        summary = self.runner.run(run_phase_trial, specs, "phase")
        self._dump_certificates(summary, dump_dir)
        return summary

    def phase_summary(
        self, records: Sequence[ExperimentRecord]
    ) -> list[dict[str, Any]]:
        """Per-window-value medians of the ok rows, in first-seen order.

        ``slack_bound`` is 4 lambda^(3/2) + 3 at the binomial lambda
        (2 lambda_bar for G(n,m) rows). ``violations`` lists the in-window
        trials whose upper bound exceeds it.
        """
        groups: dict[str, list[ExperimentRecord]] = {}
        for record in records:
            if record.status is TrialStatus.OK:
                groups.setdefault(record.param, []).append(record)
        summary: list[dict[str, Any]] = []
        for param, rows in groups.items():
            point = PhaseParams.from_label(rows[0].n, param)
            bound = upper_bound_with_slack(point.binomial_lambda)
            violations = [
                r.trial
                for r in rows
                if point.in_window
                and r.upper_bound is not None
                and r.upper_bound > bound
            ]
            if violations:
                self.logger.warning(
                    "%s: upper bound above %.2f in trial(s) %s",
                    param, bound, violations,
                )
            summary.append(
                {
                    "param": param,
                    "trials": len(rows),
                    "l1_excess": _median(rows, "l1_excess"),
                    "kernel_order": _median(rows, "kernel_order"),
                    "ccl_lower": _median(rows, "order"),
                    "ccl_upper": _median(rows, "upper_bound"),
                    "binomial_lambda": point.binomial_lambda,
                    "slack_bound": bound,
                    "in_window": point.in_window,
                    "violations": violations,
                }
            )
        return summary

    def run_oracle(
        self,
        max_n: int,
        seed: int,
        samples: int = Defaults.ORACLE_SAMPLES,
        restarts: int = Defaults.GREEDY_RESTARTS,
        sampler_checks: bool = True,
        sampler_draws: int = 10_000,
    ) -> OracleReport:
        """Cross-check exact search, greedy search, verifier and bounds."""
        if not 1 <= max_n <= Defaults.EXACT_CAP:
            raise InvalidParameterError(
                f"max_n must lie in 1..{Defaults.EXACT_CAP}, got {max_n}"
            )
        src = RandomSource(seed, 0)
        report = OracleReport()
        for label, graph, expected in self._oracle_graphs(max_n, samples, src):
            report.graphs_checked += 1
            report.violations.extend(
                self._check_graph(label, graph, expected, src, restarts)
            )
        if sampler_checks:
            report.sampler_checks = self._sampler_checks(seed, sampler_draws)
        for problem in report.violations:
            self.logger.error("oracle violation: %s", problem)
        return report

    def _oracle_graphs(
        self, max_n: int, samples: int, src: RandomSource
    ) -> Iterator[tuple[str, MultiGraph, Optional[int]]]:
        for n in range(1, min(max_n, 5) + 1):
            for index, graph in enumerate(_all_graphs(n)):
                yield f"labelled n={n} #{index}", graph, None
        for n in range(1, max_n + 1):
            yield f"K_{n}", _complete_graph(n), n
        for n in range(3, max_n + 1):
            yield f"C_{n}", _cycle_graph(n), 3
        for n in range(2, max_n + 1):
            for index in range(3):
                yield f"tree n={n} #{index}", _random_tree(n, src), 2
        top = min(max_n, 8)
        for index in range(samples if top >= 2 else 0):
            n = int(src.rng.integers(2, top + 1))
            yield f"connected n={n} #{index}", _random_connected(n, src), None

    def _check_graph(
        self,
        label: str,
        graph: MultiGraph,
        expected: Optional[int],
        src: RandomSource,
        restarts: int,
    ) -> list[str]:
        problems: list[str] = []
        edges = " ".join(f"{u}-{v}" for u, v in graph.edges)
        where = f"{label} [{edges}]"
        exact = exact_ccl(graph, cap=Defaults.EXACT_CAP)
        checked = verify(exact.witness, graph)
        if exact.value and not checked:
            problems.append(f"{where}: exact witness invalid ({checked.detail})")
        if exact.value > edge_upper_bound(graph):
            problems.append(f"{where}: exact {exact.value} above edge bound")
        if expected is not None and exact.value != expected:
            problems.append(f"{where}: exact {exact.value}, expected {expected}")
        if graph.vertex_count and len(connected_components(graph)) == 1:
            host_excess = excess(graph, range(graph.vertex_count)).excess
            if clique_excess(exact.value) > host_excess:
                problems.append(
                    f"{where}: exc(K_{exact.value}) exceeds host excess "
                    f"{host_excess}"
                )
            greedy = greedy_minor(graph, None, src, restarts=restarts)
            if greedy.value > exact.value:
                problems.append(
                    f"{where}: greedy {greedy.value} above exact {exact.value}"
                )
            greedy_checked = verify(greedy.witness, graph)
            if not greedy_checked:
                problems.append(
                    f"{where}: greedy witness invalid ({greedy_checked.detail})"
                )
        return problems

    def _sampler_checks(
        self, seed: int, draws: int
    ) -> list[tuple[str, ChiSquareResult]]:
        checks = [
            ("matching n=4", matching_uniformity(4, draws, seed)),
            ("matching n=6", matching_uniformity(6, draws, seed)),
            ("hamilton n=4", cycle_uniformity(4, draws, seed)),
            ("hamilton n=5", cycle_uniformity(5, draws, seed)),
            ("hm cycle n=4", hamilton_plus_matching_uniformity(4, draws, seed)),
            ("configuration n=4 r=1", configuration_uniformity(4, 1, draws, seed)),
            ("configuration n=4 r=2", configuration_uniformity(4, 2, draws, seed)),
            ("configuration n=2 r=3", configuration_uniformity(2, 3, draws, seed)),
        ]
        for name, result in checks:
            self.logger.info("%s: p=%.4f", name, result.p_value)
        return checks

    def _dump_certificates(
        self, summary: TrialSummary, dump_dir: Optional[str]
    ) -> None:
        if dump_dir is None:
            return
        self.repository.storage.ensure_directory(dump_dir)
        written = sum(
            1
            for record in summary.records
            if self.repository.save_certificate(dump_dir, record)
        )
        self.logger.info("Wrote %d certificate(s) to %s", written, dump_dir)
