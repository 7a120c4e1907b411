"""
Staged branch-set joining on H(n)+G(n,1).

P1 is cut into k candidate branch sets holding t effective vertices each.
P2 is cut into segments Q_1..Q_i0 whose connector paths are used, one
stage per segment, to join still-unjoined pairs of branch sets through
the matching M*. Surviving branch sets plus absorbed connectors form the
certificate of a complete minor.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Any, Optional, Sequence

from .certificate import MinorCertificate
from .errors import (
    DegenerateResultError,
    InfeasibleParamsError,
    InvalidParameterError,
)
from .graph import VertexPath
from .matching import BipartiteGraph, hall_report, maximum_matching
from .models import Defaults, Mode
from .samplers import ModelInstance

Pair = tuple[int, int]
Edge = tuple[int, int]

# Slack for the floating-point comparisons in the parameter formulas.
_TOLERANCE = 1e-9


def path_effective_length(stage: int) -> int:
    """Effective vertices per connector path in ``stage``: 100 * 3^(stage-1)."""
    return 100 * 3 ** (stage - 1)


def branch_set_count(n: int, epsilon: float) -> int:
    """Largest k with k(k-1)/2 <= eps^4 n."""
    bound = epsilon**4 * n + _TOLERANCE
    k = max(1, math.isqrt(int(2 * bound)) + 1)
    while k > 1 and k * (k - 1) / 2 > bound:
        k -= 1
    while (k + 1) * k / 2 <= bound:
        k += 1
    return k


def stage_count(n: int) -> int:
    """max(1, largest i with 3^(6i) <= n)."""
    stages = 0
    while 3 ** (6 * (stages + 1)) <= n:
        stages += 1
    return max(1, stages)


@dataclass(frozen=True)
class BuilderParams:  # pylint: disable=too-many-instance-attributes
    """Parameters of one build.

    ``t`` is the nominal floor(sqrt(n)/eps); the plan may clamp it in
    practical mode. ``delta_profile[i-1]`` and ``beta_profile[i-1]`` are
    the heavy-set threshold and the low-degree fraction of stage ``i``.
    """

    n: int
    epsilon: float
    mode: Mode
    k: int
    t: int
    i0: int
    d_cap: int = Defaults.D_CAP
    delta_profile: tuple[float, ...] = ()
    beta_profile: tuple[float, ...] = ()

    @classmethod
    def create(
        cls,
        n: int,
        epsilon: float = Defaults.EPSILON,
        mode: Mode = Mode.PRACTICAL,
        d_cap: int = Defaults.D_CAP,
    ) -> "BuilderParams":
        """Derive k, t, i0 and the stage schedules from ``n`` and ``epsilon``."""
        if not 0.0 < epsilon < 1.0:
            raise InvalidParameterError(
                f"epsilon must lie in (0, 1), got {epsilon}"
            )
        if n < 4 or n % 2:
            raise InvalidParameterError(
                f"n must be even and at least 4, got {n}"
            )
        k = branch_set_count(n, epsilon)
        t = int(math.sqrt(n) / epsilon + _TOLERANCE)
        i0 = stage_count(n)
        u0 = k * (k - 1) // 2
        root = epsilon ** (1 / 8)
        delta = tuple(
            u0 / (root * 18 ** (i - 1) * k) for i in range(1, i0 + 1)
        )
        beta = tuple(
            (epsilon**8 / (2 * 3 ** (7 * (i - 1)))) ** 2
            for i in range(1, i0 + 1)
        )
        return cls(
            n=n,
            epsilon=epsilon,
            mode=mode,
            k=k,
            t=t,
            i0=i0,
            d_cap=d_cap,
            delta_profile=delta,
            beta_profile=beta,
        )

    @property
    def pair_count(self) -> int:
        """U_0 = C(k, 2)."""
        return self.k * (self.k - 1) // 2

    def final_order_guarantee(self) -> float:
        """k - 6 eps^(1/8) k - eps^4 sqrt(n)."""
        return (
            self.k
            - 6 * self.epsilon ** (1 / 8) * self.k
            - self.epsilon**4 * math.sqrt(self.n)
        )

    def heavy_discard_bound(self) -> float:
        """6 eps^(1/8) k, the most heavy sets faithful mode may discard."""
        return 6 * self.epsilon ** (1 / 8) * self.k


@dataclass(frozen=True)
class BranchSet:
    """Candidate branch set: a P1 subpath plus connectors absorbed later."""

    id: int
    core: VertexPath
    effective_vertices: tuple[int, ...]
    absorbed_paths: tuple[VertexPath, ...] = ()

    def vertices(self) -> list[int]:
        """Core vertices followed by absorbed connector vertices."""
        members = list(self.core.vertices)
        for path in self.absorbed_paths:
            members.extend(path.vertices)
        return members


@dataclass(frozen=True)
class ConnectorPath:
    """Subpath of a Q segment with its effective vertices in P2 order."""

    stage: int
    index: int
    path: VertexPath
    effective_vertices: tuple[int, ...]


@dataclass(frozen=True)
class StagePlan:  # pylint: disable=too-many-instance-attributes
    """Segments and connector families of every stage.

    ``t`` and ``i0`` are the values actually used; ``t_nominal`` and
    ``i0_nominal`` the ones the parameters asked for.
    """

    k: int
    t: int
    t_nominal: int
    i0: int
    i0_nominal: int
    x1_size: int
    segments: tuple[VertexPath, ...]
    segment_effective: tuple[tuple[int, ...], ...]
    families: tuple[tuple[ConnectorPath, ...], ...]
    branch_of: dict[int, int] = field(default_factory=dict)

    def path_lengths(self) -> list[int]:
        """Effective length of the paths of each stage."""
        return [path_effective_length(i) for i in range(1, self.i0 + 1)]

    def rounding_ledger(self) -> dict[str, Any]:
        """Every rounding applied while carving the plan."""
        kt = self.k * self.t
        used = [len(effective) for effective in self.segment_effective]
        in_paths = [
            sum(len(p.effective_vertices) for p in family)
            for family in self.families
        ]
        return {
            "k": self.k,
            "t": self.t,
            "t_nominal": self.t_nominal,
            "i0": self.i0,
            "i0_nominal": self.i0_nominal,
            "x1_size": self.x1_size,
            "segment_effective": used,
            "family_sizes": [len(family) for family in self.families],
            "path_lengths": self.path_lengths(),
            "unused_in_segments": [a - b for a, b in zip(used, in_paths)],
            "unused_x2_prime": kt - sum(used),
        }


@dataclass(frozen=True)
class Join:
    """Pair ``(a, b)`` joined through a connector path.

    ``entry_edge`` is the M*-edge from ``a``'s effective vertex into the
    path, ``witness_edge`` the M*-edge from the path to ``b``'s effective
    vertex.
    """

    pair: Pair
    stage: int
    path_index: int
    path: VertexPath
    entry_edge: Edge
    witness_edge: Edge


@dataclass(frozen=True)
class StageRecord:  # pylint: disable=too-many-instance-attributes
    """Per-stage log entry."""

    i: int
    u_before: int
    u_after: int
    heavy_count: int
    paths_used: int
    family_size: int
    spent_total: int
    delta: Optional[float] = None
    bad_pairs: int = 0
    rule: str = "match"
    deleted_pairs: int = 0
    min_pair_degree: Optional[int] = None
    pair_degree_target: Optional[float] = None
    low_degree_paths: Optional[int] = None
    low_degree_limit: Optional[float] = None
    order_guarantee: Optional[float] = None

    @property
    def ratio(self) -> Optional[float]:
        """U_i / U_(i-1), or None when nothing was unjoined."""
        if self.u_before == 0:
            return None
        return self.u_after / self.u_before

    def to_json(self) -> dict[str, Any]:
        """JSON-serializable dictionary."""
        data: dict[str, Any] = {
            "i": self.i,
            "U_before": self.u_before,
            "U_after": self.u_after,
            "heavy_count": self.heavy_count,
            "paths_used": self.paths_used,
            "family_size": self.family_size,
            "spent_total": self.spent_total,
            "rule": self.rule,
        }
        if self.delta is not None:
            data.update(
                delta=self.delta,
                bad_pairs=self.bad_pairs,
                deleted_pairs=self.deleted_pairs,
                min_pair_degree=self.min_pair_degree,
                pair_degree_target=self.pair_degree_target,
                low_degree_paths=self.low_degree_paths,
                low_degree_limit=self.low_degree_limit,
                order_guarantee=self.order_guarantee,
            )
        return data


@dataclass(frozen=True)
class StageState:  # pylint: disable=too-many-instance-attributes
    """State between stages.

    ``i`` is the stage about to run. ``unjoined`` is U_(i-1); ``heavy`` and
    ``pruned`` are the heavy sets and kept pairs of the last stage run;
    ``spent`` holds the effective X'1 vertices already used.
    """

    i: int
    unjoined: frozenset[Pair]
    heavy: frozenset[int] = frozenset()
    heavy_history: frozenset[int] = frozenset()
    pruned: frozenset[Pair] = frozenset()
    joins: tuple[Join, ...] = ()
    spent: frozenset[int] = frozenset()
    log: tuple[StageRecord, ...] = ()

    @classmethod
    def initial(cls, k: int) -> "StageState":
        """All C(k, 2) pairs unjoined, nothing spent."""
        return cls(i=1, unjoined=frozenset(combinations(range(k), 2)))

    @property
    def unjoined_count(self) -> int:
        """U = |unjoined|."""
        return len(self.unjoined)

    @property
    def matched_so_far(self) -> int:
        """Effective vertices spent so far."""
        return len(self.spent)

    def effective_remaining(
        self, branch_sets: Sequence[BranchSet]
    ) -> list[int]:
        """|Eff(B)| of every branch set."""
        return [
            sum(1 for v in b.effective_vertices if v not in self.spent)
            for b in branch_sets
        ]


@dataclass(frozen=True)
class BuildResult:
    """Certificate of one build with its plan, final state and discards."""

    certificate: MinorCertificate
    plan: StagePlan
    state: StageState
    discarded: tuple[int, ...]

    @property
    def stage_log(self) -> tuple[StageRecord, ...]:
        """Records of every stage."""
        return self.state.log

    @property
    def stage_ratios(self) -> list[float]:
        """U_i / U_(i-1) for every stage that started with unjoined pairs."""
        return [r.ratio for r in self.state.log if r.ratio is not None]


def _positions(order: Sequence[int], marked: Sequence[int]) -> list[int]:
    """Positions in ``order`` of the vertices of ``marked`` (ascending)."""
    wanted = set(marked)
    return [pos for pos, v in enumerate(order) if v in wanted]


def plan(
    instance: ModelInstance, params: BuilderParams
) -> tuple[list[BranchSet], StagePlan]:
    """Cut P1 into k branch sets and P2 into stage segments and paths."""
    logger = logging.getLogger(__name__)
    k = params.k
    x1_size = len(instance.x1)
    if k < 2:
        raise InfeasibleParamsError(
            "k >= 2", k, 2, detail="eps^4 n is too small for a single pair"
        )
    t = params.t
    if k * t > x1_size:
        if params.mode is Mode.FAITHFUL:
            raise InfeasibleParamsError(
                "k*t <= |X1|",
                k * t,
                x1_size,
                detail=f"k={k}, t={t}",
            )
        t = x1_size // k
        logger.info(
            "clamped t from %d to %d so that k*t fits |X1|=%d",
            params.t,
            t,
            x1_size,
        )
        if t < 1:
            raise InfeasibleParamsError(
                "k*t <= |X1|", k, x1_size, detail="not even one per set"
            )
    kt = k * t
    effective = instance.with_effective_count(kt)
    x1_prime, x2_prime = effective.x1_prime, effective.x2_prime

    i0 = params.i0
    if params.mode is Mode.PRACTICAL:
        while i0 > 1 and (kt // 3**i0) // path_effective_length(i0) < 1:
            i0 -= 1
        if i0 != params.i0:
            logger.info("clamped i0 from %d to %d", params.i0, i0)
    if (kt // 3**i0) // path_effective_length(i0) < 1:
        raise InfeasibleParamsError(
            "kt/3^i0 >= l_i0",
            kt // 3**i0,
            path_effective_length(i0),
            detail=f"i0={i0}",
        )

    p1 = instance.p1.vertices
    branch_sets: list[BranchSet] = []
    branch_of: dict[int, int] = {}
    x1_positions = _positions(p1, x1_prime)
    start = 0
    for j in range(k):
        stop = x1_positions[(j + 1) * t - 1] + 1
        members = x1_prime[j * t : (j + 1) * t]
        branch_sets.append(
            BranchSet(
                id=j,
                core=VertexPath(p1[start:stop]),
                effective_vertices=tuple(members),
            )
        )
        for vertex in members:
            branch_of[vertex] = j
        start = stop

    p2 = instance.p2.vertices
    x2_positions = _positions(p2, x2_prime)
    segments: list[VertexPath] = []
    segment_effective: list[tuple[int, ...]] = []
    families: list[tuple[ConnectorPath, ...]] = []
    start, consumed = 0, 0
    for stage in range(1, i0 + 1):
        count = kt // 3**stage
        marks = x2_positions[consumed : consumed + count]
        stop = marks[-1] + 1 if marks else start
        segments.append(VertexPath(p2[start:stop]))
        segment_effective.append(tuple(p2[pos] for pos in marks))
        length = path_effective_length(stage)
        family: list[ConnectorPath] = []
        path_start = start
        for index in range(count // length):
            chunk = marks[index * length : (index + 1) * length]
            path_stop = chunk[-1] + 1
            family.append(
                ConnectorPath(
                    stage=stage,
                    index=index,
                    path=VertexPath(p2[path_start:path_stop]),
                    effective_vertices=tuple(p2[pos] for pos in chunk),
                )
            )
            path_start = path_stop
        families.append(tuple(family))
        start, consumed = stop, consumed + count

    stage_plan = StagePlan(
        k=k,
        t=t,
        t_nominal=params.t,
        i0=i0,
        i0_nominal=params.i0,
        x1_size=x1_size,
        segments=tuple(segments),
        segment_effective=tuple(segment_effective),
        families=tuple(families),
        branch_of=branch_of,
    )
    logger.debug("plan: %s", stage_plan.rounding_ledger())
    return branch_sets, stage_plan


def _touches(
    family: Sequence[ConnectorPath],
    mate: Sequence[int],
    branch_of: dict[int, int],
    spent: frozenset[int],
) -> list[dict[int, tuple[int, int]]]:
    """For each path: branch set -> first (path vertex, branch vertex) M*-edge."""
    touches: list[dict[int, tuple[int, int]]] = []
    for connector in family:
        found: dict[int, tuple[int, int]] = {}
        for y in connector.effective_vertices:
            x = mate[y]
            owner = branch_of.get(x)
            if owner is None or x in spent or owner in found:
                continue
            found[owner] = (y, x)
        touches.append(found)
    return touches


def _pair_degrees(pairs: frozenset[Pair], k: int) -> list[int]:
    degrees = [0] * k
    for a, b in pairs:
        degrees[a] += 1
        degrees[b] += 1
    return degrees


def run_stage(
    state: StageState,
    stage_plan: StagePlan,
    instance: ModelInstance,
    params: BuilderParams,
) -> StageState:
    """Run stage ``state.i``: prune (faithful), match pairs to paths, join."""
    logger = logging.getLogger(__name__)
    i = state.i
    if not 1 <= i <= stage_plan.i0:
        raise InvalidParameterError(
            f"stage {i} outside 1..{stage_plan.i0}"
        )
    family = stage_plan.families[i - 1]
    u_before = state.unjoined_count
    spent_after = state.spent | {
        instance.mate[y] for y in stage_plan.segment_effective[i - 1]
    }
    faithful = params.mode is Mode.FAITHFUL

    if u_before == 0:
        record = StageRecord(
            i=i,
            u_before=0,
            u_after=0,
            heavy_count=0,
            paths_used=0,
            family_size=len(family),
            spent_total=len(spent_after),
            rule="empty",
        )
        return replace(
            state,
            i=i + 1,
            heavy=frozenset(),
            pruned=frozenset(),
            spent=spent_after,
            log=state.log + (record,),
        )

    heavy: frozenset[int] = frozenset()
    delta: Optional[float] = None
    bad: list[Pair] = []
    if faithful:
        delta = params.delta_profile[i - 1]
        degrees = _pair_degrees(state.unjoined, stage_plan.k)
        heavy = frozenset(b for b, deg in enumerate(degrees) if deg > delta)
        bad = sorted(
            pair
            for pair in state.unjoined
            if pair[0] in heavy or pair[1] in heavy
        )
        if 27 * len(bad) >= 26 * u_before:
            deleted = bad[: 26 * u_before // 27]
            remaining = state.unjoined - frozenset(deleted)
            logger.info(
                "stage %d: %d of %d pairs are bad, deleting %d",
                i,
                len(bad),
                u_before,
                len(deleted),
            )
            record = StageRecord(
                i=i,
                u_before=u_before,
                u_after=len(remaining),
                heavy_count=len(heavy),
                paths_used=0,
                family_size=len(family),
                spent_total=len(spent_after),
                delta=delta,
                bad_pairs=len(bad),
                rule="delete",
                deleted_pairs=len(deleted),
                order_guarantee=params.final_order_guarantee(),
            )
            return replace(
                state,
                i=i + 1,
                unjoined=remaining,
                heavy=heavy,
                heavy_history=state.heavy_history | heavy,
                pruned=frozenset(),
                spent=spent_after,
                log=state.log + (record,),
            )

    pruned = state.unjoined - frozenset(bad)
    lefts = sorted(pruned)
    left_index = {pair: index for index, pair in enumerate(lefts)}
    touches = _touches(
        family, instance.mate, stage_plan.branch_of, state.spent
    )
    edges: list[tuple[int, int]] = []
    for path_index, found in enumerate(touches):
        for pair in combinations(sorted(found), 2):
            index = left_index.get(pair)
            if index is not None:
                edges.append((index, path_index))
    auxiliary = BipartiteGraph.from_edges(len(lefts), len(family), edges)
    matching = maximum_matching(auxiliary)

    joins: list[Join] = []
    for index, path_index in matching.sorted_pairs():
        a, b = lefts[index]
        found = touches[path_index]
        y_a, x_a = found[a]
        y_b, x_b = found[b]
        joins.append(
            Join(
                pair=(a, b),
                stage=i,
                path_index=path_index,
                path=family[path_index].path,
                entry_edge=(x_a, y_a),
                witness_edge=(y_b, x_b),
            )
        )
    remaining = pruned - frozenset(join.pair for join in joins)

    min_pair_degree: Optional[int] = None
    target: Optional[float] = None
    low: Optional[int] = None
    low_limit: Optional[float] = None
    guarantee: Optional[float] = None
    if faithful:
        report = hall_report(auxiliary, params.d_cap)
        min_pair_degree = report.min_left_degree
        target = 1 / (2 * params.epsilon**3)
        low = report.low_degree_right
        low_limit = (1 - params.beta_profile[i - 1]) * len(family)
        guarantee = params.final_order_guarantee()

    record = StageRecord(
        i=i,
        u_before=u_before,
        u_after=len(remaining),
        heavy_count=len(heavy),
        paths_used=len(joins),
        family_size=len(family),
        spent_total=len(spent_after),
        delta=delta,
        bad_pairs=len(bad),
        rule="match",
        min_pair_degree=min_pair_degree,
        pair_degree_target=target,
        low_degree_paths=low,
        low_degree_limit=low_limit,
        order_guarantee=guarantee,
    )
    target_after = u_before / 27
    if len(remaining) > target_after:
        logger.debug(
            "stage %d: %d pairs left unjoined, target %.1f",
            i,
            len(remaining),
            target_after,
        )
    logger.info(
        "stage %d: joined %d of %d pairs using %d paths",
        i,
        len(joins),
        u_before,
        len(family),
    )
    return replace(
        state,
        i=i + 1,
        unjoined=remaining,
        heavy=heavy,
        heavy_history=state.heavy_history | heavy,
        pruned=pruned,
        joins=state.joins + tuple(joins),
        spent=spent_after,
        log=state.log + (record,),
    )


def one_per_pair_cover(
    unjoined: frozenset[Pair], already: frozenset[int] = frozenset()
) -> set[int]:
    """Drop the higher-id endpoint of every pair not already covered."""
    dropped = set(already)
    for a, b in sorted(unjoined):
        if a in dropped or b in dropped:
            continue
        dropped.add(b)
    return dropped


def greedy_cover(unjoined: frozenset[Pair]) -> set[int]:
    """Repeatedly drop a vertex of maximum degree (lowest id on ties)."""
    remaining = set(unjoined)
    dropped: set[int] = set()
    while remaining:
        degree: dict[int, int] = {}
        for a, b in remaining:
            degree[a] = degree.get(a, 0) + 1
            degree[b] = degree.get(b, 0) + 1
        chosen = min(degree, key=lambda v: (-degree[v], v))
        dropped.add(chosen)
        remaining = {p for p in remaining if chosen not in p}
    return dropped


def discard_set(state: StageState, mode: Mode) -> set[int]:
    """Branch sets removed before the certificate is emitted."""
    faithful_drop = one_per_pair_cover(state.unjoined, state.heavy_history)
    if mode is Mode.FAITHFUL:
        return faithful_drop
    greedy_drop = set(state.heavy_history) | greedy_cover(
        frozenset(
            (a, b)
            for a, b in state.unjoined
            if a not in state.heavy_history and b not in state.heavy_history
        )
    )
    return greedy_drop if len(greedy_drop) <= len(faithful_drop) else faithful_drop


def assemble(
    state: StageState,
    branch_sets: Sequence[BranchSet],
    params: BuilderParams,
    instance: Optional[ModelInstance] = None,
) -> tuple[MinorCertificate, tuple[int, ...]]:
    """Discard, absorb connectors, emit the certificate.

    A connector is absorbed into the lower-id set of its pair when both
    sets survive. With ``instance`` the certificate carries spanning trees.
    Returns the certificate and the discarded branch-set ids.
    """
    logger = logging.getLogger(__name__)
    dropped = discard_set(state, params.mode)
    heavy_dropped = len(dropped & state.heavy_history)
    if (
        params.mode is Mode.FAITHFUL
        and heavy_dropped > params.heavy_discard_bound()
    ):
        logger.warning(
            "%d heavy branch sets discarded, bound %.1f",
            heavy_dropped,
            params.heavy_discard_bound(),
        )
    survivors = [b.id for b in branch_sets if b.id not in dropped]
    if len(survivors) < 2:
        raise DegenerateResultError(len(survivors))

    absorbed: dict[int, list[VertexPath]] = {b: [] for b in survivors}
    witness_by_id: dict[Pair, Edge] = {}
    alive = set(survivors)
    for join in state.joins:
        a, b = join.pair
        if a in alive and b in alive:
            absorbed[a].append(join.path)
            witness_by_id[(a, b)] = join.witness_edge

    label = {branch_id: pos for pos, branch_id in enumerate(survivors)}
    final_sets: list[tuple[int, ...]] = []
    for branch in branch_sets:
        if branch.id not in alive:
            continue
        merged = replace(branch, absorbed_paths=tuple(absorbed[branch.id]))
        final_sets.append(tuple(sorted(merged.vertices())))
    witnesses = {
        (label[a], label[b]): edge for (a, b), edge in witness_by_id.items()
    }
    certificate = MinorCertificate(
        branch_sets=tuple(final_sets),
        witness_edges=witnesses,
        n=params.n,
        r=3,
        epsilon=params.epsilon,
        mode=params.mode.value,
        stage_log=tuple(record.to_json() for record in state.log),
    )
    if instance is not None:
        certificate = certificate.with_spanning_trees(instance.graph())
    logger.info(
        "assembled K_%d minor (%d of %d branch sets discarded)",
        certificate.order,
        len(dropped),
        len(branch_sets),
    )
    return certificate, tuple(sorted(dropped))


def build_minor(
    instance: ModelInstance,
    params: BuilderParams,
    seed: Optional[int] = None,
) -> BuildResult:
    """plan, every stage, assemble."""
    logger = logging.getLogger(__name__)
    branch_sets, stage_plan = plan(instance, params)
    state = StageState.initial(stage_plan.k)
    for _ in range(stage_plan.i0):
        state = run_stage(state, stage_plan, instance, params)
        drawn = sum(
            stage_plan.t - left
            for left in state.effective_remaining(branch_sets)
        )
        if drawn != state.matched_so_far:
            logger.error(
                "stage %d: %d effective vertices drawn from branch sets, "
                "%d spent",
                state.i - 1,
                drawn,
                state.matched_so_far,
            )
    certificate, discarded = assemble(state, branch_sets, params, instance)
    if seed is not None:
        certificate = replace(certificate, seed=seed)
    return BuildResult(
        certificate=certificate,
        plan=stage_plan,
        state=state,
        discarded=discarded,
    )
