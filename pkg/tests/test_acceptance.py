"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s`. The heavyweight corpora
(random queue set, soundness corpus, benchmark sweeps) are built once per
session and shared between the criteria that reference them.
"""
import random
import time
from dataclasses import replace
from fractions import Fraction

import pytest

from conftest import brute_force_stp, delay_one_hi_slot
from mcsched.bench import (
    BenchConfig,
    derive_seed,
    records_to_csv,
    run_sweep,
    synth_verdict,
)
from mcsched.gen import GenParams, GenerationError, generate_system
from mcsched.model import Criticality, PeriodicTask, hyperperiod
from mcsched.pdq import (
    PeriodicQueue,
    QueueCollisionError,
    message,
    read_index,
    send_index,
    simulate,
    trace_to_csv,
)
from mcsched.sched import (
    SchedPolicy,
    ScheduleTable,
    UnschedulableError,
    build_hi_table,
    build_lo_table,
    check_stp,
    psi,
    simulate_switch,
)

LLF, EDF = SchedPolicy.LLF, SchedPolicy.EDF


def report(n, name, ok, extra=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({extra})" if extra else ""
    print(f"ACCEPTANCE {n} {name}: {status}{suffix}")
    assert ok, f"criterion {n} ({name}) failed{suffix}"


# -- shared corpora ------------------------------------------------------------

def _random_queue(rng, job_cap=3000):
    """Random queue with 1-4 senders, T in [2,50], D <= T; re-drawn when the
    3-hyperperiod job count would exceed job_cap (keeps the enumeration
    oracle inside the runtime budget without touching the arithmetic)."""
    while True:
        senders = []
        for i in range(rng.randint(1, 4)):
            t = rng.randint(2, 50)
            senders.append(PeriodicTask(i + 1, t, 1, rng.randint(1, t)))
        t = rng.randint(2, 50)
        receiver = PeriodicTask(100, t, 1, rng.randint(1, t))
        q = PeriodicQueue(senders=tuple(senders), receiver=receiver)
        h = q.hyperperiod()
        jobs = sum(3 * h // s.period + 1 for s in senders) + 3 * h // t
        if jobs <= job_cap:
            return q


@pytest.fixture(scope="module")
def queue_corpus():
    rng = random.Random(20250801)
    return [_random_queue(rng) for _ in range(1000)]


SOUNDNESS_N = 1000


def _soundness_params(index):
    rng = random.Random(derive_seed(6_000, Fraction(1), index))
    n_dags = rng.choice([1, 2])
    nv = rng.randint(3, 20 // n_dags)
    rho_num = rng.randint(max(4, -(-10 // nv)), 10)
    f = Fraction(rng.randint(10, 40), 10)
    if rho_num == 10 and f != 1:
        rho_num = 9
    cores = rng.choice([2, 4])
    return GenParams(
        u_target=Fraction(rng.randint(20, 95), 100) * cores,
        n_dags=n_dags,
        n_vertices_per_dag=nv,
        rho=Fraction(rho_num, 10),
        f=f,
        e=rng.choice([0.0, 0.1, 0.2, 0.3, 0.5]),
        cores=cores,
        seed=rng.randint(0, 2**63),
    )


def _run_soundness_corpus():
    """1000 generated systems (m <= 4, sum|V| <= 20), one policy each;
    returns per-system verdict rows and a deterministic CSV rendering."""
    rows = []
    for index in range(SOUNDNESS_N):
        for attempt in range(50):
            try:
                params = _soundness_params(index * 1000 + attempt)
                system = generate_system(params)
                break
            except GenerationError:
                continue
        else:
            raise AssertionError(f"no feasible draw for corpus index {index}")
        policy = LLF if index % 2 == 0 else EDF
        verdict = synth_verdict(system, policy, measure_time=False)
        rows.append((index, policy.value, verdict))
    lines = ["index,policy,accepted,preemptions,psi_exact"]
    for index, pol, v in rows:
        lines.append(f"{index},{pol},{int(v.accepted)},{v.preemptions},"
                     f"{int(v.psi_exact)}")
    return rows, "\n".join(lines) + "\n"


@pytest.fixture(scope="module")
def soundness_corpus():
    t0 = time.perf_counter()
    rows, csv_text = _run_soundness_corpus()
    return rows, csv_text, time.perf_counter() - t0


SWEEP_2DAG = BenchConfig(
    n_dags=2, n_vertices_per_dag=10, rho=Fraction(1, 2), f=Fraction(2),
    e=0.2, cores=4,
    u_norm_points=tuple(Fraction(n, 10) for n in range(3, 10)),
    n_systems_per_point=100, master_seed=20250801, measure_time=False,
)
SWEEP_4DAG = replace(
    SWEEP_2DAG, n_dags=4, n_vertices_per_dag=5,
    u_norm_points=(Fraction(5, 10), Fraction(6, 10), Fraction(7, 10)),
)


@pytest.fixture(scope="module")
def sweep_results():
    t0 = time.perf_counter()
    rec2 = run_sweep(SWEEP_2DAG)
    rec4 = run_sweep(SWEEP_4DAG)
    return rec2, rec4, time.perf_counter() - t0


# -- criterion 1: periodic-delayed example fidelity ------------------------------

def test_criterion_1_three_task_example():
    t0 = time.perf_counter()
    q = PeriodicQueue(
        senders=(PeriodicTask(1, 5, 1, 5), PeriodicTask(2, 7, 1, 7)),
        receiver=PeriodicTask(3, 10, 2, 10),
    )
    trace = simulate(q, 2 * q.hyperperiod())
    job1 = trace[1]
    ok = (
        [(m.sender, m.job) for m in job1.messages] == [(1, 0), (2, 0), (1, 1)]
        and all(m.delivery_time == 10 for m in job1.messages)
        and message(q, 2, 1).delivery_time == 20
        and job1.discard_time == 20
    )
    elapsed = time.perf_counter() - t0
    report(1, "periodic-delayed example fidelity", ok and elapsed < 1.0,
           f"{elapsed:.2f}s")


# -- criterion 2: index arithmetic vs enumeration oracle ---------------------------

def test_criterion_2_index_oracle(queue_corpus):
    from bisect import bisect_right

    t0 = time.perf_counter()
    ok = True
    for q in queue_corpus:
        horizon = 3 * q.hyperperiod()
        ranked = []
        for pos, snd in enumerate(q.senders):
            k = 0
            while k * snd.period + snd.deadline <= horizon:
                ranked.append((k * snd.period + snd.deadline, pos, snd.id, k))
                k += 1
        ranked.sort()
        seqs = [send_index(q, sid, k) for _, _, sid, k in ranked]
        if seqs != list(range(1, len(ranked) + 1)):
            ok = False  # out of order, gap, or duplicate
        deadlines = [d for d, *_ in ranked]
        for k in range(horizon // q.receiver.period + 1):
            if read_index(q, k) != bisect_right(deadlines,
                                                k * q.receiver.period):
                ok = False
    elapsed = time.perf_counter() - t0
    report(2, "index arithmetic matches enumeration oracle",
           ok and elapsed < 30.0, f"1000 queues, {elapsed:.1f}s")


# -- criterion 3: determinism under jitter ------------------------------------------

def test_criterion_3_jitter_determinism():
    t0 = time.perf_counter()
    rng = random.Random(20250803)
    ok = True
    for qi in range(50):
        q = _random_queue(rng, job_cap=400)
        horizon = q.hyperperiod()
        baseline = trace_to_csv(simulate(q, horizon))
        for run in range(1000):
            jitter = random.Random(rng.randint(0, 2**32))
            if trace_to_csv(simulate(q, horizon, jitter)) != baseline:
                ok = False
                break
        if not ok:
            break
    elapsed = time.perf_counter() - t0
    report(3, "jitter-independent traces", ok and elapsed < 60.0,
           f"50 queues x 1000 runs, {elapsed:.1f}s")


# -- criterion 4: queue bound sufficiency -------------------------------------------

def test_criterion_4_bound_sufficiency(queue_corpus):
    rng = random.Random(20250804)
    collisions = 0
    for q in queue_corpus:
        assert q.capacity == sum(
            (2 * q.receiver.period + max(s.deadline for s in q.senders))
            // s.period + 1
            for s in q.senders
        )
        try:
            simulate(q, 2 * q.hyperperiod(), random.Random(rng.randint(0, 2**32)))
        except QueueCollisionError:
            collisions += 1
    report(4, "queue bound admits no live collision", collisions == 0,
           "1000 queues, 2 hyperperiods")


# -- criterion 5: STP <=> switch safety ----------------------------------------------

def _small_system(rng):
    nv = rng.randint(2, 6)
    return GenParams(
        u_target=Fraction(rng.randint(4, 16), 10),
        n_dags=rng.choice([1, 2]),
        n_vertices_per_dag=nv,
        rho=Fraction(rng.randint(max(4, -(-10 // nv)), 9), 10),
        f=Fraction(rng.randint(10, 30), 10),
        e=rng.choice([0.0, 0.2, 0.4]),
        cores=rng.choice([2, 3]),
        seed=rng.randint(0, 2**63),
        periods=(20, 25, 40, 50),
    )


def test_criterion_5_stp_switch_equivalence():
    t0 = time.perf_counter()
    rng = random.Random(20250805)
    systems_done = violations_done = 0
    ok = True
    while systems_done < 200:
        try:
            system = generate_system(_small_system(rng))
            hi = build_hi_table(system, LLF if systems_done % 2 else EDF)
            lo = build_lo_table(system, LLF if systems_done % 2 else EDF, hi)
        except (GenerationError, UnschedulableError):
            continue
        H = hyperperiod(system)
        assert H <= 200
        if check_stp(lo, hi, system) is not None:
            ok = False
            break
        for t in range(H):
            if simulate_switch(lo, hi, system, t) is not None:
                ok = False
                break
        systems_done += 1
        # corrupted LO table: a violation must produce a concrete
        # counterexample, or the HI table must hold provable slack
        bad = delay_one_hi_slot(lo, system, rng)
        if bad is None:
            continue
        found = check_stp(bad, hi, system)
        if found != brute_force_stp(bad, hi, system):
            ok = False
            break
        if found is not None:
            job, t = found
            miss = simulate_switch(bad, hi, system, t)
            over_allocated = psi(hi, job, job.release,
                                 min(job.deadline, H)) > \
                system.dag(job.dag).vertex(job.vertex).c_hi
            if miss is None and not over_allocated:
                ok = False
                break
            violations_done += 1
    elapsed = time.perf_counter() - t0
    report(5, "STP equivalence with exhaustive switch oracle",
           ok and elapsed < 120.0,
           f"200 systems, {violations_done} violations, {elapsed:.1f}s")


def test_criterion_5_slack_certificate_branch():
    # over-allocated HI table: the inequality is violated at t=0 yet every
    # switch completes; the certificate is the surplus HI allocation
    from conftest import single_hi_system
    system = single_hi_system(c_lo=1, c_hi=2, period=10)
    hi = ScheduleTable(Criticality.HI, 1, 10,
                       ((0, 0, 1, 0, 0, 0), (0, 8, 2, 0, 0, 0)))
    lo = ScheduleTable(Criticality.LO, 1, 10, ((0, 5, 1, 0, 0, 0),))
    found = check_stp(lo, hi, system)
    assert found is not None and found[1] == 0
    job = found[0]
    assert simulate_switch(lo, hi, system, 0) is None
    assert psi(hi, job, job.release, job.deadline) > 2  # the slack certificate


# -- criteria 6 + 8: synthesis soundness and psi conservation ------------------------

def test_criterion_6_synthesis_soundness(soundness_corpus):
    rows, _, elapsed = soundness_corpus
    built = [v for _, _, v in rows if v.accepted or v.mc_violations]
    bad = [v.mc_violations for v in built if v.mc_violations]
    report(6, "all successful syntheses are MC-correct",
           not bad and len(rows) == SOUNDNESS_N and elapsed < 300.0,
           f"{sum(v.accepted for _, _, v in rows)}/{SOUNDNESS_N} accepted, "
           f"{elapsed:.0f}s")


def test_criterion_8_psi_conservation(soundness_corpus):
    rows, _, _ = soundness_corpus
    accepted = [v for _, _, v in rows if v.accepted]
    report(8, "psi over each window equals the budget",
           all(v.psi_exact for v in accepted),
           f"{len(accepted)} accepted systems")


# -- criterion 7: scaled acceptance-rate study ----------------------------------------

def test_criterion_7_acceptance_study(sweep_results):
    rec2, rec4, elapsed = sweep_results
    acc = {(r.u_norm, p): r.acceptance(p) for r in rec2 for p in (LLF, EDF)}
    dominance = all(
        acc[(u, LLF)] >= acc[(u, EDF)] - 0.02
        for u in SWEEP_2DAG.u_norm_points
    )
    trend = all(
        acc[(Fraction(3, 10), p)] > acc[(Fraction(9, 10), p)]
        for p in (LLF, EDF)
    )
    acc4 = {(r.u_norm, p): r.acceptance(p) for r in rec4 for p in (LLF, EDF)}
    more_dags_easier = all(
        acc4[(u, p)] >= acc[(u, p)]
        for u in SWEEP_4DAG.u_norm_points
        for p in (LLF, EDF)
    )
    detail = "; ".join(
        f"u={float(u):.1f} llf={acc[(u, LLF)]:.2f} edf={acc[(u, EDF)]:.2f}"
        for u in SWEEP_2DAG.u_norm_points
    )
    print(f"  sweep |G|=2: {detail}")
    print("  sweep |G|=4: " + "; ".join(
        f"u={float(u):.1f} llf={acc4[(u, LLF)]:.2f} edf={acc4[(u, EDF)]:.2f}"
        for u in SWEEP_4DAG.u_norm_points))
    report(7, "acceptance study (dominance, trend, dag-count ordering)",
           dominance and trend and more_dags_easier and elapsed < 600.0,
           f"{elapsed:.0f}s")


# -- criterion 9: reproducibility ------------------------------------------------------

def test_criterion_9_reproducibility(soundness_corpus, sweep_results):
    rows, corpus_csv, _ = soundness_corpus
    rec2, rec4, _ = sweep_results
    _, corpus_csv_again = _run_soundness_corpus()
    sweep_csv = records_to_csv(rec2) + records_to_csv(rec4)
    rec2_again = run_sweep(SWEEP_2DAG)
    rec4_again = run_sweep(SWEEP_4DAG)
    sweep_csv_again = records_to_csv(rec2_again) + records_to_csv(rec4_again)
    report(9, "same master seed reproduces identical CSVs",
           corpus_csv == corpus_csv_again and sweep_csv == sweep_csv_again,
           "corpus + both sweeps rerun")
