"""Random MC-system generation.

The procedure: distribute the target utilization uniformly over the dags,
draw each dag a period from a fixed non-prime menu, split the dag share over
its vertices with UUnifast-discard (HI budgets first, then the LO budgets
filling the gap left by the reduction factor), and wire a forward-only random
topology. Everything is driven by one seeded stream, so identical parameters
reproduce identical systems byte for byte.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .model import Criticality, MCDag, MCSystem, Vertex, validate

Rational = Union[int, float, str, Fraction]

PERIOD_MENU: tuple[int, ...] = (100, 120, 150, 180, 200, 220, 250, 300, 400, 500)

DISCARD_LIMIT = 10_000


class GenerationError(Exception):
    """Raised when the requested parameters cannot produce a system."""


def _frac(x: Rational) -> Fraction:
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class GenParams:
    u_target: Fraction
    n_dags: int
    n_vertices_per_dag: int
    rho: Fraction
    f: Fraction
    e: float
    cores: int
    seed: int
    periods: tuple[int, ...] = PERIOD_MENU

    def __post_init__(self) -> None:
        object.__setattr__(self, "u_target", _frac(self.u_target))
        object.__setattr__(self, "rho", _frac(self.rho))
        object.__setattr__(self, "f", _frac(self.f))
        object.__setattr__(self, "periods", tuple(self.periods))
        if self.u_target <= 0:
            raise ValueError("u_target: must be positive")
        if self.n_dags < 1:
            raise ValueError("n_dags: must be >= 1")
        if self.n_vertices_per_dag < 1:
            raise ValueError("n_vertices_per_dag: must be >= 1")
        if not (0 < self.rho <= 1):
            raise ValueError("rho: must lie in (0, 1]")
        if self.rho * self.n_vertices_per_dag < 1:
            raise ValueError("rho: rho * n_vertices_per_dag must be >= 1")
        if self.f < 1:
            raise ValueError("f: must be >= 1")
        if not (0.0 <= self.e <= 1.0):
            raise ValueError("e: must lie in [0, 1]")
        if self.cores < 1:
            raise ValueError("cores: must be >= 1")
        if not self.periods or any(p <= 0 for p in self.periods):
            raise ValueError("periods: must be a non-empty list of positive ints")


def _uunifast(u_total: Fraction, n: int, rng: random.Random) -> list[Fraction]:
    # Classic stick-breaking recurrence; done in exact rationals so the
    # telescoping sum equals u_total with no float drift.
    shares: list[Fraction] = []
    remaining = u_total
    for left in range(n, 1, -1):
        r = rng.random()
        while r == 0.0:
            r = rng.random()
        # sum of the remaining left-1 components is remaining * r^(1/(left-1))
        nxt = remaining * Fraction(str(r ** (1.0 / (left - 1))))
        shares.append(remaining - nxt)
        remaining = nxt
    shares.append(remaining)
    return shares


def split_system_utilization(
    u_target: Rational, n_dags: int, rng: random.Random
) -> list[Fraction]:
    """Uniform split of the system utilization over n_dags (shares may exceed 1)."""
    u = _frac(u_target)
    if u <= 0:
        raise ValueError("u_target must be positive")
    if n_dags < 1:
        raise ValueError("n_dags must be >= 1")
    if n_dags == 1:
        return [u]
    return _uunifast(u, n_dags, rng)


def uunifast_discard(
    u_total: Rational, n: int, rng: random.Random
) -> list[Fraction]:
    """n utilizations in (0, 1] summing to u_total; redraws vectors with a
    component above 1."""
    u = _frac(u_total)
    if n < 1:
        raise ValueError("n must be >= 1")
    if u > n:
        raise GenerationError(f"u_total {float(u):g} > n {n}: infeasible")
    if u <= 0:
        raise ValueError("u_total must be positive")
    if u == n:
        return [Fraction(1)] * n
    if n == 1:
        return [u]
    for _ in range(DISCARD_LIMIT):
        shares = _uunifast(u, n, rng)
        if all(s <= 1 for s in shares):
            return shares
    raise GenerationError(
        f"uunifast_discard: no vector within bounds after {DISCARD_LIMIT} draws "
        f"(u_total={float(u):g}, n={n})"
    )


def random_topology(
    n_hi: int, n_lo: int, e: float, rng: random.Random
) -> list[tuple[int, int]]:
    """Forward-only random edges over the creation order (HI block, then LO).

    Every ordered pair (i, j) with i < j is included with probability e;
    directing edges along the creation order makes cycles impossible.
    """
    n = n_hi + n_lo
    if n < 1:
        raise ValueError("need at least one vertex")
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < e:
                edges.append((i, j))
    return edges


def _budget(u: Fraction, period: int) -> int:
    return max(1, round(u * period))


def generate_system(params: GenParams) -> MCSystem:
    """Draw one MC system from the seeded parameter distribution."""
    rng = random.Random(params.seed)
    shares = split_system_utilization(params.u_target, params.n_dags, rng)

    nv = params.n_vertices_per_dag
    n_hi = round(params.rho * nv)
    n_lo = nv - n_hi

    dags = []
    for did, u_dag in enumerate(shares):
        period = rng.choice(params.periods)

        hi_utils = uunifast_discard(u_dag, n_hi, rng)
        lo_gap = u_dag - u_dag / params.f
        if n_lo == 0:
            if lo_gap > 0:
                raise GenerationError(
                    "f > 1 leaves LO-mode utilization to place but rho leaves "
                    "no LO vertices"
                )
            lo_utils: list[Fraction] = []
        elif lo_gap == 0:
            # f == 1: LO vertices carry no drawn utilization; budgets clamp to 1.
            lo_utils = [Fraction(0)] * n_lo
        else:
            lo_utils = uunifast_discard(lo_gap, n_lo, rng)

        vertices = []
        for i, u_hi in enumerate(hi_utils):
            c_hi = _budget(u_hi, period)
            c_lo = _budget(u_hi / params.f, period)
            vertices.append(
                Vertex(id=i, name=f"t{did}_{i}", criticality=Criticality.HI,
                       c_lo=c_lo, c_hi=max(c_hi, c_lo))
            )
        for i, u_lo in enumerate(lo_utils):
            vid = n_hi + i
            vertices.append(
                Vertex(id=vid, name=f"t{did}_{vid}", criticality=Criticality.LO,
                       c_lo=_budget(u_lo, period), c_hi=0)
            )

        edges = random_topology(n_hi, n_lo, params.e, rng)
        dags.append(
            MCDag(id=did, vertices=tuple(vertices), edges=tuple(edges),
                  period=period)
        )

    system = MCSystem(dags=tuple(dags), cores=params.cores)
    problems = validate(system)
    if problems:
        raise GenerationError(f"generated system fails validation: {problems}")
    return system


def rounding_slack(system: MCSystem) -> Fraction:
    """Worst-case per-mode utilization drift from integer budgets: sum |V_j|/T_j."""
    return sum(
        (Fraction(len(d.vertices), d.period) for d in system.dags), Fraction(0)
    )
