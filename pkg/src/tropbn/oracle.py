"""Independent verification by chip-firing on a unit subdivision of the chain.

Nothing here uses Abel-Jacobi coordinates or lattice paths.  A rational chain
is scaled so every length is an integer, subdivided into unit edges, and
divisor classes are compared through Dhar's burning algorithm.  Ranks are
computed by brute force from the Baker-Norine definition.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import ChainOfLoops, check_genericity, lcm_of_denominators
from .divisors import Divisor, PointOnGamma, ReducedDivisor, canonicalize
from .errors import CapExceeded, GenericityViolation, InvalidChainError

DEFAULT_MAX_VERTICES = 600
DEFAULT_MAX_MULTISETS = 250_000
DEFAULT_MAX_REDUCTIONS = 500_000

DiscreteDivisor = tuple  # one integer per vertex


@dataclass
class DiscreteGraph:
    """Unit-length subdivision of a chain of loops.

    ``provenance[v]`` is the point of the metric graph that vertex ``v``
    stands for; vertex 0 is always ``v_1``.
    """

    chain: ChainOfLoops
    scale: int
    provenance: tuple[PointOnGamma, ...]
    edges: tuple[tuple[int, int], ...]
    _index: dict = field(repr=False, compare=False)
    _levels: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        adjacency = [[] for _ in self.provenance]
        for a, b in self.edges:
            adjacency[a].append(b)
            adjacency[b].append(a)
        self.adjacency = tuple(tuple(nbrs) for nbrs in adjacency)

    @property
    def n(self) -> int:
        return len(self.provenance)

    def vertex_of(self, point: PointOnGamma) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise InvalidChainError(
                f"{point} is not a vertex of the scale-{self.scale} subdivision"
            ) from None

    def levels(self, base: int) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        """BFS distances from ``base`` and the vertices grouped by distance."""
        if base not in self._levels:
            dist = [-1] * self.n
            dist[base] = 0
            queue = deque([base])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            if min(dist) < 0:
                raise InvalidChainError("subdivided graph is disconnected")
            by_level = [[] for _ in range(max(dist) + 1)]
            for v, k in enumerate(dist):
                by_level[k].append(v)
            self._levels[base] = (tuple(dist), tuple(tuple(lv) for lv in by_level))
        return self._levels[base]


def _scaled_int(value: Fraction, scale: int, what: str) -> int:
    scaled = value * scale
    if scaled.denominator != 1:
        raise InvalidChainError(f"{what} = {value} is not integral at scale {scale}")
    return scaled.numerator


def discretize(chain: ChainOfLoops, scale: int = 1) -> DiscreteGraph:
    """Subdivide every edge of ``scale * chain`` into unit-length edges."""
    if scale < 1:
        raise InvalidChainError(f"scale must be positive, got {scale}")
    provenance: list[PointOnGamma] = []
    edges: list[tuple[int, int]] = []
    index: dict[PointOnGamma, int] = {}

    def add(point: PointOnGamma) -> int:
        provenance.append(point)
        index[point] = len(provenance) - 1
        return len(provenance) - 1

    prev_w = None
    for i in range(1, chain.g + 1):
        period = _scaled_int(chain.period(i), scale, f"circumference of loop {i}")
        m_pos = _scaled_int(chain.m[i - 1], scale, f"m_{i}")
        _scaled_int(chain.ell[i - 1], scale, f"ell_{i}")
        if i == 1:
            v = add(PointOnGamma.v1())
            index[PointOnGamma.loop(1, 0)] = v
        else:
            b = chain.bridges[i - 2]
            steps = _scaled_int(b, scale, f"bridge {i - 1}")
            if steps == 0:
                v = prev_w
                index[PointOnGamma.loop(i, 0)] = v
            else:
                last = prev_w
                for t in range(1, steps):
                    u = add(PointOnGamma.bridge(i - 1, Fraction(t, scale)))
                    edges.append((last, u))
                    last = u
                v = add(PointOnGamma.loop(i, 0))
                index[PointOnGamma.bridge(i - 1, b)] = v
                edges.append((last, v))
        ring = [v] + [add(PointOnGamma.loop(i, Fraction(k, scale))) for k in range(1, period)]
        for k in range(period):
            edges.append((ring[k], ring[(k + 1) % period]))
        prev_w = ring[m_pos]
    return DiscreteGraph(chain, scale, tuple(provenance), tuple(edges), index)


def to_discrete(graph: DiscreteGraph, divisor: Divisor | ReducedDivisor) -> DiscreteDivisor:
    if isinstance(divisor, ReducedDivisor):
        divisor = divisor.to_divisor()
    chips = [0] * graph.n
    for point, mult in divisor.chips:
        chips[graph.vertex_of(point)] += mult
    return tuple(chips)


def dhar_reduce(graph: DiscreteGraph, divisor: Sequence[int], base: int = 0) -> DiscreteDivisor:
    """The ``base``-reduced divisor equivalent to ``divisor``.

    A pre-pass fires balls around ``base`` to push every debt onto ``base``;
    then Dhar's burning algorithm repeatedly fires the unburnt set, as many
    times at once as keeps it effective, until the fire consumes the graph.
    """
    chips = list(divisor)
    if len(chips) != graph.n:
        raise InvalidChainError(f"divisor has {len(chips)} entries, graph has {graph.n} vertices")
    adj = graph.adjacency
    dist, levels = graph.levels(base)
    for k in range(len(levels) - 1, 0, -1):
        debt = -min(chips[v] for v in levels[k])
        if debt <= 0:
            continue
        for v in levels[k]:
            for u in adj[v]:
                if dist[u] == k - 1:
                    chips[v] += debt
                    chips[u] -= debt

    n = graph.n
    while True:
        burnt = [False] * n
        burnt[base] = True
        seen = [0] * n
        stack = [base]
        count = 1
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if not burnt[w]:
                    seen[w] += 1
                    if seen[w] > chips[w]:
                        burnt[w] = True
                        count += 1
                        stack.append(w)
        if count == n:
            return tuple(chips)
        unburnt = [v for v in range(n) if not burnt[v]]
        times = min(chips[v] // seen[v] for v in unburnt if seen[v])
        for v in unburnt:
            if seen[v]:
                chips[v] -= times * seen[v]
                for w in adj[v]:
                    if burnt[w]:
                        chips[w] += times


def discrete_rank(
    graph: DiscreteGraph,
    divisor: Sequence[int],
    base: int = 0,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_multisets: int = DEFAULT_MAX_MULTISETS,
) -> int:
    """Baker-Norine rank by exhaustion over vertex-supported effective ``E``.

    ``rank >= k`` iff ``D - a`` has rank ``>= k - 1`` for every vertex ``a``;
    intermediate classes are memoised by their reduced form.
    """
    if graph.n > max_vertices:
        raise CapExceeded(f"{graph.n} vertices exceeds cap {max_vertices}")
    start = dhar_reduce(graph, divisor, base)
    if start[base] < 0:
        return -1
    memo: dict[tuple[DiscreteDivisor, int], bool] = {}

    def rank_ge(cls: DiscreteDivisor, k: int) -> bool:
        if cls[base] < 0:
            return False
        if k == 0:
            return True
        key = (cls, k)
        if key not in memo:
            ok = True
            for a in range(graph.n):
                nxt = list(cls)
                nxt[a] -= 1
                if not rank_ge(dhar_reduce(graph, nxt, base), k - 1):
                    ok = False
                    break
            memo[key] = ok
        return memo[key]

    r = 0
    while True:
        k = r + 1
        if k > sum(start):
            return r
        if math.comb(graph.n + k - 1, k) > max_multisets:
            raise CapExceeded(
                f"certifying rank {k} needs {math.comb(graph.n + k - 1, k)} divisors "
                f"(cap {max_multisets})"
            )
        if not rank_ge(start, k):
            return r
        r = k


def count_effective_reps(
    graph: DiscreteGraph,
    divisor: Sequence[int],
    base: int = 0,
    max_reductions: int = DEFAULT_MAX_REDUCTIONS,
) -> int:
    """Number of vertex-supported effective divisors equivalent to ``divisor``.

    Enumerates multisets of vertices in non-decreasing order, carrying an
    effective representative ``E`` of what is left.  ``E - a`` has an
    effective representative iff the ``a``-reduced form of ``E`` has a chip
    at ``a``; a branch stops as soon as that fails.
    """
    calls = 0

    def reduce(chips, at):
        nonlocal calls
        calls += 1
        if calls > max_reductions:
            raise CapExceeded(f"more than {max_reductions} reductions")
        return dhar_reduce(graph, chips, at)

    def count(E: DiscreteDivisor, k: int, first: int) -> int:
        if k == 0:
            return 1
        total = 0
        for a in range(first, graph.n):
            rep = E if E[a] > 0 else reduce(E, a)
            if rep[a] == 0:
                continue
            nxt = list(rep)
            nxt[a] -= 1
            total += count(tuple(nxt), k - 1, a)
        return total

    start = reduce(divisor, base)
    if start[base] < 0:
        return 0
    return count(start, sum(start), 0)


@dataclass(frozen=True)
class CrossCheckReport:
    rank_lattice: int | None
    rank_oracle: int
    reduce_match: bool
    scale: int
    vertices: int
    genericity_violation: bool = False
    rank_at_least_match: bool | None = None

    @property
    def passed(self) -> bool:
        return (
            not self.genericity_violation
            and self.reduce_match
            and self.rank_lattice == self.rank_oracle
            and self.rank_at_least_match is not False
        )

    def to_json(self) -> dict:
        return {
            "rank_lattice": self.rank_lattice,
            "rank_oracle": self.rank_oracle,
            "reduce_match": self.reduce_match,
            "scale": self.scale,
            "vertices": self.vertices,
            "genericity_violation": self.genericity_violation,
            "passed": self.passed,
        }


def natural_scale(chain: ChainOfLoops, divisor: Divisor | ReducedDivisor | None = None) -> int:
    values = list(chain.lengths())
    if divisor is not None:
        if isinstance(divisor, ReducedDivisor):
            divisor = divisor.to_divisor()
        values += [p.offset for p, _ in divisor.chips]
    return lcm_of_denominators(values)


def cross_check(
    chain: ChainOfLoops,
    divisor: Divisor | ReducedDivisor,
    r: int | None = None,
    scale: int | None = None,
    **caps,
) -> CrossCheckReport:
    """Compare the lattice-path pipeline with the chip-firing oracle on one divisor."""
    from .lattice import rank, rank_at_least

    if isinstance(divisor, ReducedDivisor):
        divisor = divisor.to_divisor()
    scale = scale or natural_scale(chain, divisor)
    graph = discretize(chain, scale)
    chips = to_discrete(graph, divisor)
    canonical = canonicalize(chain, divisor)
    reduce_match = dhar_reduce(graph, chips) == to_discrete(graph, canonical)
    rank_oracle = discrete_rank(graph, chips, **caps)

    violation = check_genericity(chain) is not None
    rank_lattice = None
    at_least = None
    if not violation:
        try:
            rank_lattice = rank(chain, canonical)
            if r is not None:
                at_least = rank_at_least(chain, canonical, r) == (rank_oracle >= r)
        except GenericityViolation:
            violation = True
            rank_lattice = None
    return CrossCheckReport(
        rank_lattice, rank_oracle, reduce_match, scale, graph.n, violation, at_least
    )
