"""Seeded random corpora for cross-checking the lattice pipeline against the oracle."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .brill_noether import enumerate_cells
from .core import ChainOfLoops, default_chain, rho
from .divisors import Divisor, PointOnGamma
from .jacobian import invert_pic
from .oracle import CrossCheckReport, DiscreteGraph, cross_check, discretize


def _from_chips(graph: DiscreteGraph, chips) -> Divisor:
    return Divisor(tuple((graph.provenance[v], k) for v, k in enumerate(chips) if k))


def _fire(graph: DiscreteGraph, chips: list[int], subset: set[int]) -> None:
    for v in subset:
        for w in graph.adjacency[v]:
            if w not in subset:
                chips[v] -= 1
                chips[w] += 1


def _scramble(graph: DiscreteGraph, divisor: Divisor, rng: random.Random) -> Divisor:
    """Move to another divisor in the same class by firing random vertex arcs."""
    chips = [0] * graph.n
    for point, k in divisor.chips:
        chips[graph.vertex_of(point)] += k
    for _ in range(rng.randint(1, 4)):
        start = rng.randrange(graph.n)
        subset = {start}
        frontier = [start]
        for _ in range(rng.randint(0, 6)):
            nbrs = [w for v in frontier for w in graph.adjacency[v] if w not in subset]
            if not nbrs:
                break
            w = rng.choice(nbrs)
            subset.add(w)
            frontier.append(w)
        if len(subset) < graph.n:
            _fire(graph, chips, subset)
    return _from_chips(graph, chips)


def _canonical_divisor(chain: ChainOfLoops) -> Divisor:
    """``sum (val(v) - 2) v`` over the trivalent vertices ``w_1, v_2, w_2, ..., v_g``."""
    points = []
    for i in range(1, chain.g + 1):
        if i > 1:
            points.append(PointOnGamma.loop(i, 0))
        if i < chain.g:
            points.append(PointOnGamma.loop(i, chain.m[i - 1]))
    return Divisor.from_points(points)


def random_divisor(chain: ChainOfLoops, graph: DiscreteGraph, rng: random.Random, max_degree: int) -> Divisor:
    """One corpus member supported on integer points of ``chain``.

    Mixes uniformly random effective divisors, divisors with negative chips,
    scrambled representatives of special classes taken from the cells of
    ``W^r_d``, and the canonical class.
    """
    g = chain.g
    kind = rng.random()
    if kind < 0.35:
        k = rng.randint(0, max_degree)
        return Divisor.from_points(graph.provenance[rng.randrange(graph.n)] for _ in range(k))
    if kind < 0.5:
        k = rng.randint(0, max_degree)
        pos = [(graph.provenance[rng.randrange(graph.n)], 1) for _ in range(k)]
        neg = [(graph.provenance[rng.randrange(graph.n)], -1) for _ in range(rng.randint(1, 2))]
        return Divisor(tuple(pos + neg))
    if kind < 0.55 and g >= 2:
        return _scramble(graph, _canonical_divisor(chain), rng)
    choices = [
        (r, d)
        for r in range(1, g + 1)
        for d in range(r, max_degree + 1)
        if 0 <= rho(g, r, d) <= g
    ]
    r, d = rng.choice(choices)
    cell = rng.choice(enumerate_cells(chain, r, d))
    values = {k: rng.randrange(int(chain.period(k))) for k in cell.free}
    reduced = invert_pic(chain, cell.point(chain, values))
    return _scramble(graph, reduced.to_divisor(), rng)


@dataclass
class VerificationReport:
    trials: int = 0
    rank_agreements: int = 0
    reduce_agreements: int = 0
    failures: list = field(default_factory=list)
    rank_histogram: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.trials > 0 and not self.failures

    def record(self, divisor: Divisor, report: CrossCheckReport) -> None:
        self.trials += 1
        self.rank_agreements += report.rank_lattice == report.rank_oracle
        self.reduce_agreements += report.reduce_match
        self.rank_histogram[report.rank_oracle] = self.rank_histogram.get(report.rank_oracle, 0) + 1
        if not report.passed:
            self.failures.append({"divisor": divisor.to_json(), "report": report.to_json()})

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "rank_agreements": self.rank_agreements,
            "reduce_agreements": self.reduce_agreements,
            "rank_histogram": {str(k): v for k, v in sorted(self.rank_histogram.items())},
            "failures": self.failures,
            "passed": self.passed,
        }


def run_verification(
    genera, trials: int, seed: int, bridges: bool = True, scale: int = 1
) -> VerificationReport:
    """Cross-check ``trials`` random divisors spread over the given genera."""
    rng = random.Random(seed)
    genera = list(genera)
    chains = {g: default_chain(g, bridges) for g in genera}
    graphs = {g: discretize(chains[g], scale) for g in genera}
    report = VerificationReport()
    for t in range(trials):
        g = genera[t % len(genera)]
        divisor = random_divisor(chains[g], graphs[g], rng, 2 * g)
        report.record(divisor, cross_check(chains[g], divisor, scale=scale))
    return report
