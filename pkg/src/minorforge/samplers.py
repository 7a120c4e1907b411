"""
Seeded samplers for the random graph models: configurations, G*(n,r),
G'(n,r), G(n,r), random perfect matchings and Hamilton cycles,
H(n)+G(n,1), G(n,m) and G(n,p).

Every sampler draws from the generator of a :class:`RandomSource`, so a
fixed (seed, stream) pair reproduces the same graph bit for bit.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import InvalidParameterError, SamplerExhaustedError
from .graph import MultiGraph, VertexPath
from .models import Defaults

# Below this many candidate pairs G(n,m) draws an index subset directly.
_DIRECT_PAIR_LIMIT = 2_000_000


@dataclass(frozen=True)
class RandomSource:
    """Independent random stream derived from ``(master_seed, stream_index)``."""

    master_seed: int
    stream_index: int = 0
    _rng: np.random.Generator = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.stream_index < 0:
            raise InvalidParameterError("stream_index must be nonnegative")
        sequence = np.random.SeedSequence(
            entropy=self.master_seed % 2**64, spawn_key=(self.stream_index,)
        )
        object.__setattr__(
            self, "_rng", np.random.Generator(np.random.PCG64(sequence))
        )

    @property
    def rng(self) -> np.random.Generator:
        """The generator of this stream (stateful, shared by all draws)."""
        return self._rng

    def derive(self, stream_index: int) -> "RandomSource":
        """Fresh source on another stream of the same master seed."""
        return RandomSource(self.master_seed, stream_index)


@dataclass(frozen=True, eq=False)
class Configuration:
    """Perfect matching on the point set ``V_n x [r]``.

    Point ``p`` belongs to vertex ``p // r``; ``pairing`` has one row per
    matched pair of points.
    """

    n: int
    r: int
    pairing: np.ndarray

    def pairs(self) -> list[tuple[int, int]]:
        """Matched point pairs as tuples."""
        return [(int(a), int(b)) for a, b in self.pairing]

    def canonical(self) -> tuple[tuple[int, int], ...]:
        """Order-independent form of the pairing."""
        return tuple(sorted((min(a, b), max(a, b)) for a, b in self.pairs()))


@dataclass(frozen=True)
class SampleDiagnostics:
    """Bookkeeping of a sampler call."""

    rejections: int = 0
    p1p2_edge_count: Optional[int] = None
    in_xrange_window: Optional[bool] = None


def _check_regular_params(n: int, r: int) -> None:
    if n < 1:
        raise InvalidParameterError(f"n must be at least 1, got {n}")
    if r < 0:
        raise InvalidParameterError(f"r must be nonnegative, got {r}")
    if (r * n) % 2:
        raise InvalidParameterError(
            f"rn must be even, got r={r}, n={n} (rn={r * n})"
        )


def sample_configuration(n: int, r: int, src: RandomSource) -> Configuration:
    """Uniform configuration: a shuffled point array paired off in order."""
    _check_regular_params(n, r)
    points = src.rng.permutation(r * n)
    return Configuration(n=n, r=r, pairing=points.reshape(-1, 2))


def project(c: Configuration) -> MultiGraph:
    """Projection of a configuration onto ``V_n`` (r-regular multigraph)."""
    if c.r == 0:
        return MultiGraph(c.n)
    ends = c.pairing // c.r
    return MultiGraph(c.n, ((int(u), int(v)) for u, v in ends))


def _projected_ends(c: Configuration) -> np.ndarray:
    if c.r == 0:
        return np.empty((0, 2), dtype=np.int64)
    return np.sort(c.pairing // c.r, axis=1)


def _has_loops(ends: np.ndarray) -> bool:
    return bool(np.any(ends[:, 0] == ends[:, 1]))


def _is_simple(ends: np.ndarray, n: int) -> bool:
    if _has_loops(ends):
        return False
    keys = ends[:, 0].astype(np.int64) * n + ends[:, 1]
    return len(np.unique(keys)) == len(keys)


def is_simple_configuration(c: Configuration) -> bool:
    """True if the projection of ``c`` has neither loops nor parallel edges."""
    return _is_simple(_projected_ends(c), c.n)


def _resample(
    n: int,
    r: int,
    src: RandomSource,
    accept: Callable[[np.ndarray], bool],
    cap: int,
    label: str,
) -> tuple[MultiGraph, int]:
    """Draw configurations until ``accept`` holds; return graph, rejections."""
    logger = logging.getLogger(__name__)
    for attempt in range(cap):
        configuration = sample_configuration(n, r, src)
        if accept(_projected_ends(configuration)):
            if attempt:
                logger.debug("%s accepted after %d rejections", label, attempt)
            return project(configuration), attempt
    raise SamplerExhaustedError(
        f"{label}(n={n}, r={r}) found no acceptable draw in {cap} attempts",
        attempts=cap,
    )


def sample_g_star(n: int, r: int, src: RandomSource) -> MultiGraph:
    """G*(n,r): the raw projection of a uniform configuration."""
    return project(sample_configuration(n, r, src))


def sample_g_prime(
    n: int, r: int, src: RandomSource, cap: int = Defaults.RESAMPLE_CAP
) -> MultiGraph:
    """G'(n,r): G*(n,r) conditioned on having no loops."""
    _check_regular_params(n, r)
    graph, _ = _resample(
        n, r, src, lambda ends: not _has_loops(ends), cap, "G'"
    )
    return graph


def sample_g_simple(
    n: int, r: int, src: RandomSource, cap: int = Defaults.RESAMPLE_CAP
) -> tuple[MultiGraph, SampleDiagnostics]:
    """G(n,r): G*(n,r) conditioned on being simple."""
    _check_regular_params(n, r)
    graph, rejections = _resample(
        n, r, src, lambda ends: _is_simple(ends, n), cap, "G"
    )
    return graph, SampleDiagnostics(rejections=rejections)


def sample_hamilton_cycle(n: int, src: RandomSource) -> VertexPath:
    """Uniform Hamilton cycle on ``V_n`` as its vertex order (n >= 3)."""
    if n < 3:
        raise InvalidParameterError(
            f"a Hamilton cycle needs at least 3 vertices, got {n}"
        )
    return VertexPath(tuple(int(v) for v in src.rng.permutation(n)))


def sample_perfect_matching(n: int, src: RandomSource) -> tuple[int, ...]:
    """Uniform perfect matching on ``V_n`` as a partner array."""
    if n < 2 or n % 2:
        raise InvalidParameterError(
            f"a perfect matching needs an even n >= 2, got {n}"
        )
    pairs = src.rng.permutation(n).reshape(-1, 2)
    mate = [0] * n
    for a, b in pairs:
        mate[int(a)] = int(b)
        mate[int(b)] = int(a)
    return tuple(mate)


def xrange_half_width(n: int) -> float:
    """Half-width sqrt(n) ln n of the window around n/4."""
    return math.sqrt(n) * math.log(n)


@dataclass(frozen=True)
class ModelInstance:  # pylint: disable=too-many-instance-attributes
    """Exposed randomness of H(n)+G(n,1).

    ``x1`` and ``x1_prime`` are ordered along P1; ``x2`` and ``x2_prime``
    along P2. ``x2_prime`` is the M*-image of ``x1_prime``.
    """

    n: int
    hamilton: VertexPath
    mate: tuple[int, ...]
    p1: VertexPath
    p2: VertexPath
    x1: tuple[int, ...]
    x2: tuple[int, ...]
    x1_prime: tuple[int, ...]
    x2_prime: tuple[int, ...]

    def with_effective_count(self, count: int) -> "ModelInstance":
        """Re-derive X'1 (first ``count`` of X1) and X'2 (their partners)."""
        if not 0 <= count <= len(self.x1):
            raise InvalidParameterError(
                f"effective count {count} outside 0..|X1|={len(self.x1)}"
            )
        x1_prime = self.x1[:count]
        chosen = {self.mate[v] for v in x1_prime}
        x2_prime = tuple(v for v in self.x2 if v in chosen)
        return replace(self, x1_prime=x1_prime, x2_prime=x2_prime)

    def matching_edges(self) -> list[tuple[int, int]]:
        """Edges of M* as ``(min, max)`` pairs, sorted."""
        return sorted((v, w) for v, w in enumerate(self.mate) if v < w)

    def cycle_edges(self) -> list[tuple[int, int]]:
        """Edges of the Hamilton cycle in cycle order."""
        order = self.hamilton.vertices
        return [
            (order[i], order[(i + 1) % len(order)]) for i in range(len(order))
        ]

    def graph(self) -> MultiGraph:
        """H(n)+G(n,1) as a 3-regular multigraph."""
        return MultiGraph(self.n, self.cycle_edges() + self.matching_edges())

    def diagnostics(self) -> SampleDiagnostics:
        """|X1| and whether it lies in [n/4 +- sqrt(n) ln n]."""
        count = len(self.x1)
        return SampleDiagnostics(
            rejections=0,
            p1p2_edge_count=count,
            in_xrange_window=abs(count - self.n / 4)
            <= xrange_half_width(self.n),
        )


def sample_hamilton_plus_matching(
    n: int, src: RandomSource, effective_count: Optional[int] = None
) -> ModelInstance:
    """H(n)+G(n,1) with its P1/P2 split and X-sets.

    The whole matching is drawn upfront; stages later read it in a fixed
    order. Without ``effective_count`` X'1 is all of X1.
    """
    logger = logging.getLogger(__name__)
    if n < 4 or n % 2:
        raise InvalidParameterError(f"n must be even and at least 4, got {n}")
    hamilton = sample_hamilton_cycle(n, src)
    mate = sample_perfect_matching(n, src)
    half = n // 2
    order = hamilton.vertices
    in_p1 = [False] * n
    for v in order[:half]:
        in_p1[v] = True
    x1 = tuple(v for v in order[:half] if not in_p1[mate[v]])
    x2 = tuple(v for v in order[half:] if in_p1[mate[v]])
    instance = ModelInstance(
        n=n,
        hamilton=hamilton,
        mate=mate,
        p1=VertexPath(order[:half]),
        p2=VertexPath(order[half:]),
        x1=x1,
        x2=x2,
        x1_prime=x1,
        x2_prime=x2,
    )
    logger.debug("sampled H(n)+G(n,1) with n=%d, |X1|=%d", n, len(x1))
    if effective_count is not None:
        instance = instance.with_effective_count(effective_count)
    return instance


def sample_gnm(n: int, m: int, src: RandomSource) -> MultiGraph:
    """Uniform simple graph with ``n`` vertices and ``m`` edges."""
    if n < 0:
        raise InvalidParameterError(f"n must be nonnegative, got {n}")
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise InvalidParameterError(f"m must lie in 0..{total}, got {m}")
    if m == 0:
        return MultiGraph(n)
    if total <= _DIRECT_PAIR_LIMIT:
        rows, cols = np.triu_indices(n, k=1)
        chosen = np.sort(src.rng.choice(total, size=m, replace=False))
        return MultiGraph(
            n, zip(rows[chosen].tolist(), cols[chosen].tolist())
        )
    keys: set[int] = set()
    while len(keys) < m:
        batch = max(2 * (m - len(keys)), 1024)
        us = src.rng.integers(0, n, size=batch)
        vs = src.rng.integers(0, n, size=batch)
        for u, v in zip(us.tolist(), vs.tolist()):
            if u == v:
                continue
            keys.add(min(u, v) * n + max(u, v))
            if len(keys) == m:
                break
    return MultiGraph(n, (divmod(key, n) for key in sorted(keys)))


def sample_gnp(n: int, p: float, src: RandomSource) -> MultiGraph:
    """Binomial random graph: edge count ~ Bin(C(n,2), p), then G(n,m)."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must lie in [0, 1], got {p}")
    if n < 0:
        raise InvalidParameterError(f"n must be nonnegative, got {n}")
    total = n * (n - 1) // 2
    m = int(src.rng.binomial(total, p)) if total else 0
    return sample_gnm(n, m, src)
