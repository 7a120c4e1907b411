"""
Trial execution for experiment sweeps.

Each trial is a picklable spec handed to a top-level function, so trials
run unchanged in worker processes. A trial owns the random stream
``(seed, trial)``; results are re-ordered by submission index, which
makes the output independent of the degree of parallelism.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, TypeVar

from tqdm import tqdm

from .builder import BuilderParams, build_minor
from .errors import (
    DegenerateResultError,
    InfeasibleParamsError,
    MinorForgeError,
    SamplerExhaustedError,
)
from .kernel import PhaseParams, phase_pipeline
from .models import Defaults, ExperimentRecord, Mode, TrialStatus
from .oracle import edge_upper_bound, verify
from .samplers import RandomSource, sample_hamilton_plus_matching
from .utils import software_version


@dataclass(frozen=True)
class MinorTrialSpec:
    """One builder trial."""

    seed: int
    trial: int
    n: int
    epsilon: float = Defaults.EPSILON
    mode: Mode = Mode.PRACTICAL
    keep_certificate: bool = False


@dataclass(frozen=True)
class PhaseTrialSpec:  # pylint: disable=too-many-instance-attributes
    """One critical-window trial."""

    seed: int
    trial: int
    n: int
    lam: Optional[float] = None
    lam_bar: Optional[float] = None
    exact_cap: int = Defaults.EXACT_CAP
    restarts: int = Defaults.GREEDY_RESTARTS
    reject_multigraph_kernels: bool = False
    keep_certificate: bool = False

    def params(self) -> PhaseParams:
        """Pipeline parameters of this trial."""
        return PhaseParams(
            n=self.n,
            lam=self.lam,
            lam_bar=self.lam_bar,
            reject_multigraph_kernels=self.reject_multigraph_kernels,
            exact_cap=self.exact_cap,
            restarts=self.restarts,
        )


@dataclass
class TrialResult:
    """Result of a single trial."""

    index: int
    record: ExperimentRecord

    @property
    def success(self) -> bool:
        """True for status ok with a passing verification."""
        return (
            self.record.status is TrialStatus.OK
            and self.record.verify is not False
        )


@dataclass
class TrialSummary:
    """Summary of a sweep."""

    successful: int
    failed: int
    results: list[TrialResult]

    @classmethod
    def from_results(cls, results: list[TrialResult]) -> "TrialSummary":
        """Create summary from results, ordered by submission index."""
        ordered = sorted(results, key=lambda r: r.index)
        successful = sum(1 for r in ordered if r.success)
        return cls(
            successful=successful,
            failed=len(ordered) - successful,
            results=ordered,
        )

    @property
    def records(self) -> list[ExperimentRecord]:
        """Records in submission order."""
        return [result.record for result in self.results]


def _status_for(exc: Exception) -> TrialStatus:
    if isinstance(exc, InfeasibleParamsError):
        return TrialStatus.INFEASIBLE
    if isinstance(exc, DegenerateResultError):
        return TrialStatus.DEGENERATE
    if isinstance(exc, SamplerExhaustedError):
        return TrialStatus.EXHAUSTED
    return TrialStatus.ERROR


def run_minor_trial(spec: MinorTrialSpec, index: int = 0) -> TrialResult:
    """Sample H(n)+G(n,1), build and verify a minor."""
    logger = logging.getLogger(__name__)
    started = time.perf_counter()
    record = ExperimentRecord(
        command="minor",
        seed=spec.seed,
        trial=spec.trial,
        n=spec.n,
        param="r=3",
        status=TrialStatus.OK,
        epsilon=spec.epsilon,
        mode=spec.mode,
        software_version=software_version(),
    )
    try:
        src = RandomSource(spec.seed, spec.trial)
        instance = sample_hamilton_plus_matching(spec.n, src)
        params = BuilderParams.create(spec.n, spec.epsilon, spec.mode)
        result = build_minor(instance, params, seed=spec.seed)
        host = instance.graph()
        verification = verify(result.certificate, host)
        record.order = result.certificate.order
        record.upper_bound = edge_upper_bound(host)
        record.verify = verification.ok
        record.stage_ratios = result.stage_ratios
        if not verification:
            record.status = TrialStatus.VERIFY_FAILED
            record.message = verification.detail
        elif record.order > record.upper_bound:
            record.status = TrialStatus.VERIFY_FAILED
            record.message = (
                f"order {record.order} exceeds edge bound {record.upper_bound}"
            )
        if spec.keep_certificate:
            record.certificate = result.certificate.to_json()
    except MinorForgeError as exc:
        record.status = _status_for(exc)
        record.message = str(exc)
        logger.info("trial %d: %s", spec.trial, exc)
    except Exception as exc:  # pylint: disable=broad-except
        record.status = TrialStatus.ERROR
        record.message = str(exc)
        logger.error("trial %d failed: %s", spec.trial, exc)
    record.elapsed_ms = (time.perf_counter() - started) * 1000
    return TrialResult(index=index, record=record)


def run_phase_trial(spec: PhaseTrialSpec, index: int = 0) -> TrialResult:
    """Run the critical-window pipeline once."""
    logger = logging.getLogger(__name__)
    started = time.perf_counter()
    record = ExperimentRecord(
        command="phase",
        seed=spec.seed,
        trial=spec.trial,
        n=spec.n,
        param="",
        status=TrialStatus.OK,
        software_version=software_version(),
    )
    try:
        params = spec.params()
        record.param = params.label()
        report = phase_pipeline(params, RandomSource(spec.seed, spec.trial))
        record.order = report.ccl_lower.value
        record.upper_bound = report.ccl_upper
        record.l1_excess = report.l1_excess
        record.kernel_order = report.kernel_order
        record.verify = report.verification.ok
        record.message = "; ".join(report.notes)
        if not report.verification:
            record.status = TrialStatus.VERIFY_FAILED
            record.message = report.verification.detail
        if spec.keep_certificate:
            record.certificate = report.ccl_lower.witness.to_json()
    except MinorForgeError as exc:
        record.status = _status_for(exc)
        record.message = str(exc)
        logger.info("trial %d: %s", spec.trial, exc)
    except Exception as exc:  # pylint: disable=broad-except
        record.status = TrialStatus.ERROR
        record.message = str(exc)
        logger.error("trial %d failed: %s", spec.trial, exc)
    record.elapsed_ms = (time.perf_counter() - started) * 1000
    return TrialResult(index=index, record=record)


SpecT = TypeVar("SpecT")


class TrialRunner:
    """Runs trial specs serially or in a process pool with a progress bar."""

    def __init__(self, parallel: int = 1, progress: bool = True):
        """Initialize with worker count and progress preference."""
        self.parallel = max(1, parallel)
        self.progress = progress
        self.logger = logging.getLogger(__name__)

    def run(
        self,
        trial_fn: Callable[[SpecT, int], TrialResult],
        specs: Sequence[SpecT],
        description: str = "trials",
    ) -> TrialSummary:
        """Run every spec; the summary lists results in spec order."""
        results: list[TrialResult] = []
        with tqdm(
            total=len(specs),
            desc=description,
            unit="trial",
            disable=not self.progress,
            leave=False,
        ) as progress_bar:
            if self.parallel == 1 or len(specs) <= 1:
                for index, spec in enumerate(specs):
                    results.append(trial_fn(spec, index))
                    progress_bar.update(1)
            else:
                with ProcessPoolExecutor(max_workers=self.parallel) as pool:
                    futures = [
                        pool.submit(trial_fn, spec, index)
                        for index, spec in enumerate(specs)
                    ]
                    for future in as_completed(futures):
                        results.append(future.result())
                        progress_bar.update(1)
        summary = TrialSummary.from_results(results)
        self.logger.info(
            "%s: %d successful, %d failed",
            description,
            summary.successful,
            summary.failed,
        )
        return summary
