import random
from fractions import Fraction

import pytest

from mcsched.gen import GenParams, GenerationError, generate_system
from mcsched.model import Criticality, MCDag, MCSystem, Vertex
from mcsched.sched import ScheduleTable, job_ref, psi


def make_vertex(vid, crit="LO", c_lo=1, c_hi=0, name=None):
    return Vertex(id=vid, name=name or f"v{vid}",
                  criticality=Criticality(crit), c_lo=c_lo, c_hi=c_hi)


def make_dag(did=0, vertices=(), edges=(), period=10):
    return MCDag(id=did, vertices=tuple(vertices), edges=tuple(edges),
                 period=period)


def make_system(dags, cores=1):
    return MCSystem(dags=tuple(dags), cores=cores)


def single_hi_system(c_lo=1, c_hi=3, period=10, cores=1):
    dag = make_dag(vertices=[make_vertex(0, "HI", c_lo, c_hi)], period=period)
    return make_system([dag], cores=cores)


def random_params(rng: random.Random, *, periods=(8, 10, 16, 20),
                  max_cores=3, max_dags=2, max_vertices=6,
                  u_lo=2, u_hi=14) -> GenParams:
    """A feasible random parameter point for small property tests."""
    nv = rng.randint(2, max_vertices)
    rho_num = rng.randint(max(3, -(-10 // nv)), 10)
    return GenParams(
        u_target=Fraction(rng.randint(u_lo, u_hi), 10),
        n_dags=rng.randint(1, max_dags),
        n_vertices_per_dag=nv,
        rho=Fraction(rho_num, 10),
        f=Fraction(rng.randint(10, 40), 10),
        e=rng.choice([0.0, 0.2, 0.5]),
        cores=rng.randint(1, max_cores),
        seed=rng.randint(0, 2**32),
        periods=periods,
    )


def random_system(rng: random.Random, **kwargs):
    """Generate until the parameter draw is feasible."""
    while True:
        try:
            return generate_system(random_params(rng, **kwargs))
        except GenerationError:
            continue


def brute_force_stp(lo, hi, system):
    """Literal evaluation of the safe-transition implication at every t in
    [release, deadline] of every HI job; independent of check_stp's shortcut."""
    first = None
    for dag in system.dags:
        n_jobs = lo.horizon // dag.period
        for v in dag.vertices:
            if v.criticality is not Criticality.HI:
                continue
            for k in range(n_jobs):
                job = job_ref(system, dag.id, v.id, k)
                for t in range(job.release, min(job.deadline, lo.horizon) + 1):
                    p_lo = psi(lo, job, job.release, t)
                    p_hi = psi(hi, job, job.release, t)
                    if p_lo < v.c_lo and p_lo < p_hi:
                        cand = (t, dag.id, v.id, k)
                        if first is None or cand < first:
                            first = cand
                        break
    if first is None:
        return None
    t, d, v, k = first
    return (job_ref(system, d, v, k), t)


def delay_one_hi_slot(lo, system, rng: random.Random):
    """Move one slot of one HI job to a later free slot on the same core;
    returns the corrupted LO table, or None if nothing can move."""
    cells = sorted(lo.cells())
    occupied = {(c, s) for c, s, *_ in cells}
    hi_cells = [c for c in cells
                if system.dag(c[2]).vertex(c[3]).criticality is Criticality.HI]
    rng.shuffle(hi_cells)
    for core, slot, d, v, k in hi_cells:
        dag = system.dag(d)
        window_end = (k + 1) * dag.period
        frees = [s for s in range(slot + 1, window_end)
                 if (core, s) not in occupied]
        if not frees:
            continue
        new = rng.choice(frees)
        cells.remove((core, slot, d, v, k))
        cells.append((core, new, d, v, k))
        runs = tuple((c, s, 1, dd, vv, kk)
                     for c, s, dd, vv, kk in sorted(cells))
        return ScheduleTable(lo.mode, lo.cores, lo.horizon, runs)
    return None


@pytest.fixture
def rng():
    return random.Random(12345)
