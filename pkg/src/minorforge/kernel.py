"""
Critical-window pipeline: sample G(n,p) or G(n,m), take the largest
component, extract its kernel, and bound its contraction clique number
from both sides.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .certificate import MinorCertificate
from .errors import InvalidParameterError, SamplerExhaustedError
from .graph import (
    MultiGraph,
    SuppressionResult,
    component_excesses,
    largest_component,
    suppress_degree_two,
    two_core,
)
from .models import Defaults
from .oracle import (
    CclResult,
    VerificationResult,
    edge_upper_bound,
    exact_ccl,
    excess_upper_bound,
    greedy_minor,
    trivial_minor,
    verify,
)
from .samplers import RandomSource, sample_gnm, sample_gnp


@dataclass(frozen=True)
class KernelExtraction:  # pylint: disable=too-many-instance-attributes
    """Kernel of the largest component with the maps back to the host.

    ``component_map`` takes component labels to host vertices and
    ``core_map`` takes two-core labels to component labels.
    """

    component: MultiGraph
    component_map: tuple[int, ...]
    core_map: tuple[int, ...]
    suppression: SuppressionResult
    l1_excess: int

    @property
    def kernel(self) -> MultiGraph:
        """The suppressed two-core."""
        return self.suppression.kernel

    @property
    def kernel_order(self) -> int:
        """|C(G)|."""
        return self.kernel.vertex_count

    @property
    def loops(self) -> int:
        """Loops in the kernel."""
        return self.kernel.loop_count()

    @property
    def multi_edges(self) -> int:
        """Surplus parallel edges in the kernel."""
        return self.kernel.multi_edge_count()

    @property
    def dropped_cycles(self) -> int:
        """Cycles of degree-2 vertices removed during suppression."""
        return len(self.suppression.cycles)

    @property
    def degree_profile(self) -> dict[int, int]:
        """Kernel degree -> number of vertices."""
        return dict(sorted(Counter(self.kernel.degrees()).items()))

    @property
    def is_cubic(self) -> bool:
        """True if every kernel vertex has degree exactly 3."""
        return all(degree == 3 for degree in self.kernel.degrees())

    def lift(self, branch_sets: Sequence[Iterable[int]]) -> list[set[int]]:
        """Map kernel branch sets to host branch sets."""
        lifted = self.suppression.lift(branch_sets)
        return [
            {self.component_map[self.core_map[v]] for v in members}
            for members in lifted
        ]

    def lift_component(
        self, branch_sets: Sequence[Iterable[int]]
    ) -> list[set[int]]:
        """Map branch sets of the largest component to host vertices."""
        return [
            {self.component_map[v] for v in members} for members in branch_sets
        ]


def extract_kernel(g: MultiGraph) -> KernelExtraction:
    """Largest component, then its two-core, then degree-2 suppression."""
    logger = logging.getLogger(__name__)
    members = largest_component(g)
    component, component_map = g.induced_subgraph(members)
    l1_excess = (
        component.edge_count - component.vertex_count + 1 if members else 0
    )
    core = two_core(component)
    suppression = suppress_degree_two(core.graph)
    extraction = KernelExtraction(
        component=component,
        component_map=tuple(component_map),
        core_map=tuple(core.vertex_map),
        suppression=suppression,
        l1_excess=l1_excess,
    )
    if extraction.kernel_order and not extraction.is_cubic:
        logger.warning(
            "kernel not 3-regular, degree profile %s",
            extraction.degree_profile,
        )
    return extraction


@dataclass(frozen=True)
class PhaseParams:
    """Point in the critical window.

    Exactly one of ``lam`` (p = (1 + lam n^(-1/3)) / n) and ``lam_bar``
    (m = n/2 + lam_bar n^(2/3), rounded) is set.
    """

    n: int
    lam: Optional[float] = None
    lam_bar: Optional[float] = None
    reject_multigraph_kernels: bool = False
    exact_cap: int = Defaults.EXACT_CAP
    restarts: int = Defaults.GREEDY_RESTARTS

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidParameterError(f"n must be positive, got {self.n}")
        if (self.lam is None) == (self.lam_bar is None):
            raise InvalidParameterError(
                "exactly one of lambda and lambda_bar must be given"
            )
        if self.lam is not None and not 0.0 <= self.edge_probability() <= 1.0:
            raise InvalidParameterError(
                f"lambda={self.lam} gives p={self.edge_probability()} "
                "outside [0, 1]"
            )
        if self.lam_bar is not None:
            m = self.edge_count()
            if not 0 <= m <= self.n * (self.n - 1) // 2:
                raise InvalidParameterError(
                    f"lambda_bar={self.lam_bar} gives m={m} out of range"
                )

    @property
    def window_value(self) -> float:
        """lambda or lambda_bar, whichever is set."""
        return self.lam if self.lam is not None else float(self.lam_bar or 0.0)

    @property
    def binomial_lambda(self) -> float:
        """lambda of the binomial point matching this one.

        m = n/2 + lam_bar n^(2/3) equals C(n,2) p at lambda = 2 lam_bar.
        """
        if self.lam is not None:
            return self.lam
        return 2 * float(self.lam_bar or 0.0)

    @classmethod
    def from_label(cls, n: int, label: str) -> PhaseParams:
        """Inverse of label()."""
        name, _, value = label.partition("=")
        if name == "lambda":
            return cls(n=n, lam=float(value))
        if name == "lambda_bar":
            return cls(n=n, lam_bar=float(value))
        raise InvalidParameterError(f"not a window label: {label!r}")

    def edge_probability(self) -> float:
        """p for the binomial model."""
        return (1 + (self.lam or 0.0) * self.n ** (-1 / 3)) / self.n

    def edge_count(self) -> int:
        """m for the uniform model."""
        return round(self.n / 2 + (self.lam_bar or 0.0) * self.n ** (2 / 3))

    @property
    def in_window(self) -> bool:
        """False when |lambda| / n^(1/3) exceeds the window ratio."""
        return abs(self.window_value) / self.n ** (1 / 3) <= Defaults.WINDOW_RATIO

    def label(self) -> str:
        """Value of the ``param`` CSV column."""
        if self.lam is not None:
            return f"lambda={self.lam:g}"
        return f"lambda_bar={self.lam_bar:g}"

    def sample(self, src: RandomSource) -> MultiGraph:
        """Draw the host graph."""
        if self.lam is not None:
            return sample_gnp(self.n, self.edge_probability(), src)
        return sample_gnm(self.n, self.edge_count(), src)


@dataclass(frozen=True)
class PhaseReport:  # pylint: disable=too-many-instance-attributes
    """Outcome of one pipeline run."""

    params: PhaseParams
    host_edge_count: int
    l1_order: int
    l1_excess: int
    kernel_order: int
    kernel: MultiGraph
    kernel_loops: int
    kernel_multi_edges: int
    is_cubic: bool
    degree_profile: dict[int, int]
    ccl_lower: CclResult
    ccl_upper: int
    edge_bound: int
    excess_bound: int
    verification: VerificationResult
    rejections: int = 0
    notes: list[str] = field(default_factory=list)


def ccl_upper_bound(g: MultiGraph) -> tuple[int, int, int]:
    """(combined, edge bound, excess bound) for a host graph.

    The excess bound is the largest per-component value since a clique
    minor lives inside one component.
    """
    edge_bound = edge_upper_bound(g)
    excess_bound = max(
        (excess_upper_bound(report.excess) for report in component_excesses(g)),
        default=3,
    )
    return min(edge_bound, excess_bound), edge_bound, excess_bound


def kernel_lower_bound(
    g: MultiGraph,
    extraction: KernelExtraction,
    src: RandomSource,
    exact_cap: int = Defaults.EXACT_CAP,
    restarts: int = Defaults.GREEDY_RESTARTS,
) -> CclResult:
    """Best of the lifted kernel minor and the trivial minor of L1."""
    trivial = trivial_minor(extraction.component)
    fallback = MinorCertificate.from_branch_sets(
        g, extraction.lift_component(trivial.witness.branch_sets)
    )
    best = CclResult(trivial.value, fallback, trivial.method)
    kernel = extraction.kernel
    if kernel.vertex_count == 0:
        return best
    if kernel.vertex_count <= exact_cap:
        found = exact_ccl(kernel, cap=exact_cap)
    else:
        found = greedy_minor(kernel, None, src, restarts=restarts)
    if found.value >= best.value:
        lifted = MinorCertificate.from_branch_sets(
            g, extraction.lift(found.witness.branch_sets)
        )
        best = CclResult(found.value, lifted, found.method, found.restarts)
    return best


def phase_pipeline(params: PhaseParams, src: RandomSource) -> PhaseReport:
    """Sample, extract the kernel, bound ccl from below and above."""
    logger = logging.getLogger(__name__)
    rejections = 0
    while True:
        g = params.sample(src)
        extraction = extract_kernel(g)
        simple_kernel = extraction.loops == 0 and extraction.multi_edges == 0
        if simple_kernel or not params.reject_multigraph_kernels:
            break
        rejections += 1
        if rejections >= Defaults.RESAMPLE_CAP:
            raise SamplerExhaustedError(
                "no simple kernel within the resample cap", attempts=rejections
            )

    lower = kernel_lower_bound(
        g, extraction, src, params.exact_cap, params.restarts
    )
    verification = verify(lower.witness, g)
    upper, edge_bound, excess_bound = ccl_upper_bound(g)
    notes: list[str] = []
    if not params.in_window:
        notes.append("outside critical window")
    if extraction.kernel_order and not extraction.is_cubic:
        notes.append("kernel not 3-regular")
    if not verification:
        logger.error("lifted witness failed: %s", verification.detail)
    logger.info(
        "%s: L1 excess %d, kernel order %d, ccl in [%d, %d]",
        params.label(),
        extraction.l1_excess,
        extraction.kernel_order,
        lower.value,
        upper,
    )
    return PhaseReport(
        params=params,
        host_edge_count=g.edge_count,
        l1_order=extraction.component.vertex_count,
        l1_excess=extraction.l1_excess,
        kernel_order=extraction.kernel_order,
        kernel=extraction.kernel,
        kernel_loops=extraction.loops,
        kernel_multi_edges=extraction.multi_edges,
        is_cubic=extraction.is_cubic,
        degree_profile=extraction.degree_profile,
        ccl_lower=lower,
        ccl_upper=upper,
        edge_bound=edge_bound,
        excess_bound=excess_bound,
        verification=verification,
        rejections=rejections,
        notes=notes,
    )


def excess_law(lam_bar: float) -> float:
    """Asymptotic L1 excess 16 lam^3 / 3."""
    return 16 * lam_bar**3 / 3


def kernel_order_law(lam_bar: float) -> float:
    """Asymptotic kernel order 32 lam^3 / 3."""
    return 32 * lam_bar**3 / 3


def upper_bound_with_slack(lam: float) -> float:
    """4 lam^(3/2) + 3; the +3 covers the floor of small components."""
    return 4 * max(lam, 0.0) ** 1.5 + 3
