"""Scheduling-table synthesis and verification for MC systems.

The HI-mode table places jobs as late as possible: the job set is mirrored in
time (releases and deadlines swap, precedence flips), scheduled forward with
the usual greedy list scheduler, and the result is mirrored back. The LO-mode
table is a plain forward (as-soon-as-possible) list schedule over all
vertices, except that a high-criticality job is promoted to the top of the
priority order at any slot where falling behind its HI-table allocation would
break the safe-transition inequality.
"""
from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

from .model import (
    Criticality,
    MCSystem,
    hyperperiod,
    utilization,
    validate,
)


class UnschedulableError(Exception):
    """No compliant table exists under the greedy rule (a domain failure,
    not an internal error)."""

    def __init__(self, mode: Criticality, reason: str):
        super().__init__(f"unschedulable in {mode.value} mode: {reason}")
        self.mode = mode
        self.reason = reason


class SchedPolicy(Enum):
    """Priority order used by the table builders (global EDF or global LLF)."""

    EDF = "edf"
    LLF = "llf"


@dataclass(frozen=True)
class JobRef:
    dag: int
    vertex: int
    job: int
    release: int
    deadline: int


def job_ref(system: MCSystem, dag: int, vertex: int, k: int) -> JobRef:
    d = system.dag(dag)
    d.vertex(vertex)
    return JobRef(dag=dag, vertex=vertex, job=k,
                  release=k * d.period, deadline=k * d.period + d.deadline)


class ScheduleTable:
    """Immutable per-mode allocation of (core, slot) cells to jobs.

    Stored as maximal runs (core, start, length, dag, vertex, job); cell and
    per-job views are derived lazily.
    """

    def __init__(self, mode: Criticality, cores: int, horizon: int,
                 runs: tuple[tuple[int, int, int, int, int, int], ...]):
        self.mode = mode
        self.cores = cores
        self.horizon = horizon
        self.runs = tuple(sorted(runs))
        self._job_slots: Optional[dict[tuple[int, int, int], tuple[int, ...]]] = None

    def job_slots(self) -> dict[tuple[int, int, int], tuple[int, ...]]:
        if self._job_slots is None:
            acc: dict[tuple[int, int, int], list[int]] = {}
            for core, start, length, d, v, k in self.runs:
                lst = acc.setdefault((d, v, k), [])
                lst.extend(range(start, start + length))
            # a job occupying two cores in one slot still runs once that slot
            self._job_slots = {key: tuple(sorted(set(s)))
                               for key, s in acc.items()}
        return self._job_slots

    def slots_of(self, dag: int, vertex: int, k: int) -> tuple[int, ...]:
        return self.job_slots().get((dag, vertex, k), ())

    def cells(self) -> Iterator[tuple[int, int, int, int, int]]:
        """Yield (core, slot, dag, vertex, job) for every occupied slot."""
        for core, start, length, d, v, k in self.runs:
            for s in range(start, start + length):
                yield (core, s, d, v, k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScheduleTable):
            return NotImplemented
        return (self.mode, self.cores, self.horizon) == \
            (other.mode, other.cores, other.horizon) and \
            sorted(self.cells()) == sorted(other.cells())

    def __repr__(self) -> str:
        return (f"ScheduleTable(mode={self.mode.value}, cores={self.cores}, "
                f"horizon={self.horizon}, jobs={len(self.job_slots())})")


def psi(table: ScheduleTable, job: JobRef, t1: int, t2: int) -> int:
    """Slots allocated to the job in the inclusive window [t1, t2]."""
    if not (0 <= t1 <= t2 <= table.horizon):
        raise ValueError(f"window [{t1}, {t2}] outside [0, {table.horizon}]")
    if job.deadline > table.horizon:
        raise ValueError(
            f"job (dag {job.dag}, vertex {job.vertex}, k {job.job}) "
            f"outside table horizon {table.horizon}"
        )
    slots = table.slots_of(job.dag, job.vertex, job.job)
    return bisect_right(slots, t2) - bisect_left(slots, t1)


# -- list-scheduling engine ---------------------------------------------------

class _IVert:
    """Static per-vertex data of one scheduling instance."""

    __slots__ = ("dag", "vid", "budget", "period", "n_jobs", "preds", "succs",
                 "cp_after", "hi_coupled", "k_map")

    def __init__(self, dag: int, vid: int, budget: int, period: int,
                 n_jobs: int):
        self.dag = dag
        self.vid = vid
        self.budget = budget
        self.period = period
        self.n_jobs = n_jobs
        self.preds: list[_IVert] = []
        self.succs: list[_IVert] = []
        self.cp_after = 0
        self.hi_coupled = False   # subject to promotion against a HI table
        self.k_map = None         # optional k -> original job index


class _Job:
    __slots__ = ("iv", "k", "deadline", "rem", "done", "pred_rem", "core",
                 "last_end", "hi_slots")

    def __init__(self, iv: _IVert, k: int, hi_slots):
        self.iv = iv
        self.k = k
        self.deadline = (k + 1) * iv.period
        self.rem = iv.budget
        self.done = 0
        self.pred_rem = len(iv.preds)
        self.core = -1
        self.last_end = -1
        self.hi_slots = hi_slots


def _compute_cp_after(ivs: list[_IVert]) -> None:
    # Longest downstream budget chain; vertices in reverse topological order.
    indeg = {id(v): len(v.preds) for v in ivs}
    order: list[_IVert] = [v for v in ivs if not v.preds]
    i = 0
    while i < len(order):
        for w in order[i].succs:
            indeg[id(w)] -= 1
            if indeg[id(w)] == 0:
                order.append(w)
        i += 1
    if len(order) != len(ivs):
        raise ValueError("instance precedence graph contains a cycle")
    for v in reversed(order):
        v.cp_after = max((w.budget + w.cp_after for w in v.succs), default=0)


def _run_engine(ivs: list[_IVert], m: int, horizon: int, policy: SchedPolicy,
                mode: Criticality,
                hi_map: Optional[dict] = None,
                max_chunk: Optional[int] = None) -> list[tuple]:
    """Greedy slot filler. Returns runs (core, start, length, dag, vid, k).

    Equivalent to deciding every slot independently; stretches where the
    decision cannot change are allocated in one step. `max_chunk=1` forces
    pure slot-by-slot operation (used by equivalence tests).
    """
    _compute_cp_after(ivs)
    edf = policy is SchedPolicy.EDF

    by_dag: dict[int, list[_IVert]] = {}
    for iv in ivs:
        by_dag.setdefault(iv.dag, []).append(iv)
    # (next release slot, period, vertex list) per dag
    rel_state = [[0, d[0].period, d] for d in by_dag.values()]

    jobs: dict[tuple[int, int, int], _Job] = {}
    active: list[_Job] = []
    ready: list[_Job] = []
    runs: list[tuple] = []
    s = 0
    INF = horizon + 1

    if edf:
        def key(j: _Job) -> tuple:
            return (j.deadline, j.deadline - s - j.rem - j.iv.cp_after,
                    j.iv.dag, j.iv.vid)
    else:
        def key(j: _Job) -> tuple:
            return (j.deadline - s - j.rem - j.iv.cp_after, j.deadline,
                    j.iv.dag, j.iv.vid)

    while s < horizon:
        # releases
        next_release = INF
        for st in rel_state:
            if st[0] == s:
                k = s // st[1]
                for iv in st[2]:
                    hs = None
                    if hi_map is not None and iv.hi_coupled:
                        hs = hi_map.get((iv.dag, iv.vid, k), ())
                    j = _Job(iv, k, hs)
                    jobs[(iv.dag, iv.vid, k)] = j
                    active.append(j)
                    if j.pred_rem == 0:
                        ready.append(j)
                st[0] = (k + 1) * st[1] if k + 1 < st[2][0].n_jobs else INF
            if st[0] < next_release:
                next_release = st[0]

        if not ready:
            if active:
                raise RuntimeError("blocked jobs with no runnable predecessor")
            if next_release >= INF:
                break
            s = next_release
            continue

        # a job (or its mandatory successor chain) that cannot fit before its
        # deadline can never be repaired later: fail now
        for j in active:
            if j.deadline - s < j.rem + j.iv.cp_after:
                raise UnschedulableError(
                    mode,
                    f"dag {j.iv.dag} vertex {j.iv.vid} job {j.k} cannot meet "
                    f"deadline {j.deadline} at slot {s}",
                )

        # safe-transition promotions: a coupled job whose HI-table allocation
        # reaches done+1 at this slot must run now
        forced: list[_Job] = []
        if hi_map is not None:
            for j in active:
                if j.hi_slots and j.rem > 0 and j.done < len(j.hi_slots) \
                        and j.hi_slots[j.done] <= s:
                    forced.append(j)
            if forced:
                for j in forced:
                    if j.pred_rem > 0:
                        raise UnschedulableError(
                            mode,
                            f"dag {j.iv.dag} vertex {j.iv.vid} job {j.k}: "
                            "safe-transition promotion blocked by an "
                            "unfinished predecessor",
                        )
                if len(forced) > m:
                    raise UnschedulableError(
                        mode, f"{len(forced)} promoted jobs exceed {m} cores"
                    )
                forced.sort(key=lambda j: (j.iv.dag, j.iv.vid))

        if forced:
            forced_set = set(id(j) for j in forced)
            rest = sorted((j for j in ready if id(j) not in forced_set), key=key)
            running = forced + rest[: m - len(forced)]
        elif len(ready) <= m:
            running = sorted(ready, key=key)
        else:
            running = sorted(ready, key=key)[:m]

        # chunk length: how far this decision is guaranteed stable
        if len(ready) > m:
            delta = 1
        else:
            delta = min(next_release, horizon) - s
            for j in running:
                if j.rem < delta:
                    delta = j.rem
            if len(running) < len(active):
                run_ids = set(id(j) for j in running)
                for j in active:
                    if id(j) in run_ids:
                        continue
                    lax = j.deadline - s - j.rem - j.iv.cp_after
                    if lax + 1 < delta:
                        delta = lax + 1
                    if j.hi_slots and j.rem > 0 and j.done < len(j.hi_slots):
                        gap = j.hi_slots[j.done] - s
                        if gap < delta:
                            delta = gap
            if delta < 1:
                delta = 1
        if max_chunk is not None and delta > max_chunk:
            delta = max_chunk

        # sticky core assignment: contiguous jobs keep their core
        taken = set()
        fresh = []
        for j in running:
            if j.last_end == s and j.core >= 0 and j.core not in taken:
                taken.add(j.core)
            else:
                fresh.append(j)
        free = iter(c for c in range(m) if c not in taken)
        for j in fresh:
            j.core = next(free)

        for j in running:
            runs.append((j.core, s, delta, j.iv.dag, j.iv.vid,
                         j.k if j.iv.k_map is None else j.iv.k_map(j.k)))
            j.rem -= delta
            j.done += delta
            j.last_end = s + delta
        s += delta

        finished = [j for j in running if j.rem == 0]
        if finished:
            for j in finished:
                active.remove(j)
                ready.remove(j)
                for succ in j.iv.succs:
                    sj = jobs[(succ.dag, succ.vid, j.k)]
                    sj.pred_rem -= 1
                    if sj.pred_rem == 0:
                        ready.append(sj)

    if active:
        j = active[0]
        raise UnschedulableError(
            mode, f"dag {j.iv.dag} vertex {j.iv.vid} job {j.k} unfinished at "
                  f"horizon {horizon}")
    return runs


def _build_instance(system: MCSystem, horizon: int, mode: Criticality,
                    reverse: bool) -> list[_IVert]:
    ivs: list[_IVert] = []
    index: dict[tuple[int, int], _IVert] = {}
    for dag in system.dags:
        n_jobs = horizon // dag.period
        for v in dag.vertices:
            if mode is Criticality.HI and v.criticality is not Criticality.HI:
                continue
            budget = v.c_hi if mode is Criticality.HI else v.c_lo
            iv = _IVert(dag.id, v.id, budget, dag.period, n_jobs)
            iv.hi_coupled = v.criticality is Criticality.HI
            if reverse:
                last = n_jobs - 1
                iv.k_map = (lambda k, last=last: last - k)
            ivs.append(iv)
            index[(dag.id, v.id)] = iv
    for dag in system.dags:
        for a, b in dag.edges:
            ia = index.get((dag.id, a))
            ib = index.get((dag.id, b))
            if ia is None or ib is None:
                continue  # edge touches a vertex absent from this mode
            if reverse:
                ia, ib = ib, ia
            ia.succs.append(ib)
            ib.preds.append(ia)
    return ivs


def _mirror_runs(runs: list[tuple], horizon: int) -> list[tuple]:
    return [(core, horizon - (start + length), length, d, v, k)
            for core, start, length, d, v, k in runs]


def build_hi_table(system: MCSystem, policy: SchedPolicy,
                   _max_chunk: Optional[int] = None) -> ScheduleTable:
    """HI-mode table over one hyperperiod with every HI job placed as late
    as its window, precedence and the core budget allow."""
    problems = validate(system)
    if problems:
        raise ValueError(f"invalid system: {problems[0]}")
    H = hyperperiod(system)
    if utilization(system, Criticality.HI) > system.cores:
        raise UnschedulableError(
            Criticality.HI, "HI utilization exceeds the core count")
    ivs = _build_instance(system, H, Criticality.HI, reverse=True)
    runs = _run_engine(ivs, system.cores, H, policy, Criticality.HI,
                       max_chunk=_max_chunk)
    return ScheduleTable(Criticality.HI, system.cores, H,
                         tuple(_mirror_runs(runs, H)))


def build_lo_table(system: MCSystem, policy: SchedPolicy,
                   hi_table: ScheduleTable,
                   _max_chunk: Optional[int] = None) -> ScheduleTable:
    """LO-mode table over one hyperperiod: forward greedy over all vertices,
    promoting HI jobs whenever the safe-transition inequality requires it."""
    problems = validate(system)
    if problems:
        raise ValueError(f"invalid system: {problems[0]}")
    H = hyperperiod(system)
    if hi_table.horizon != H or hi_table.cores != system.cores:
        raise ValueError("hi_table does not match the system's horizon/cores")
    if utilization(system, Criticality.LO) > system.cores:
        raise UnschedulableError(
            Criticality.LO, "LO utilization exceeds the core count")
    ivs = _build_instance(system, H, Criticality.LO, reverse=False)
    runs = _run_engine(ivs, system.cores, H, policy, Criticality.LO,
                       hi_map=hi_table.job_slots(), max_chunk=_max_chunk)
    return ScheduleTable(Criticality.LO, system.cores, H, tuple(runs))


# -- verification -------------------------------------------------------------

def check_stp(lo_table: ScheduleTable, hi_table: ScheduleTable,
              system: MCSystem) -> Optional[tuple[JobRef, int]]:
    """First instant where an unfinished HI job's LO allocation falls below
    its HI allocation, or None if the safe-transition inequality always holds.

    A violation can only begin at an instant where the HI allocation grows,
    so only HI-table slots need inspection.
    """
    if lo_table.horizon != hi_table.horizon:
        raise ValueError("tables cover different horizons")
    first: Optional[tuple[int, int, int, int]] = None
    for dag in system.dags:
        K = lo_table.horizon // dag.period
        for v in dag.vertices:
            if v.criticality is not Criticality.HI:
                continue
            for k in range(K):
                r = k * dag.period
                d = r + dag.deadline
                his = hi_table.slots_of(dag.id, v.id, k)
                los = lo_table.slots_of(dag.id, v.id, k)
                lo_base = bisect_left(los, r)
                h_lo = bisect_left(his, r)
                h_hi = bisect_right(his, d)
                for idx in range(h_lo, h_hi):
                    t = his[idx]
                    psi_hi = idx - h_lo + 1
                    psi_lo = bisect_right(los, t) - lo_base
                    if psi_lo < v.c_lo and psi_lo < psi_hi:
                        cand = (t, dag.id, v.id, k)
                        if first is None or cand < first:
                            first = cand
                        break
    if first is None:
        return None
    t, did, vid, k = first
    return (job_ref(system, did, vid, k), t)


def _structural_violations(table: ScheduleTable, system: MCSystem,
                           label: str) -> list[str]:
    # Works on runs, not cells: overlap of two runs on one core is a
    # double-booking, overlap of two runs of one job is that job on two cores.
    bad: list[str] = []
    if table.cores != system.cores:
        bad.append(f"{label}: table cores {table.cores} != system {system.cores}")
    dag_map = {d.id: d for d in system.dags}
    vert_maps = {d.id: d.vertex_map for d in system.dags}
    by_core: dict[int, list[tuple[int, int]]] = {}
    by_job: dict[tuple[int, int, int], list[tuple[int, int]]] = {}
    for core, start, length, d, v, k in table.runs:
        tag = f"{label}: core {core} slot {start}"
        if not (0 <= core < table.cores) or start < 0 or \
                start + length > table.horizon:
            bad.append(f"{tag}: outside the table")
            continue
        by_core.setdefault(core, []).append((start, start + length))
        dag = dag_map.get(d)
        vert = vert_maps[d].get(v) if dag is not None else None
        if vert is None:
            bad.append(f"{tag}: unknown job (dag {d}, vertex {v})")
            continue
        by_job.setdefault((d, v, k), []).append((start, start + length))
        if table.mode is Criticality.HI and vert.criticality is not Criticality.HI:
            bad.append(f"{tag}: LO vertex (dag {d} vertex {v}) in the HI table")
        r = k * dag.period
        if not (0 <= k < table.horizon // dag.period) or \
                not (r <= start and start + length <= r + dag.deadline):
            bad.append(f"{tag}: dag {d} vertex {v} job {k} scheduled outside "
                       f"its window")
    for core, spans in by_core.items():
        spans.sort()
        for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
            if a2 < b1:
                bad.append(f"{label}: core {core} slot {a2}: double-booked")
    for (d, v, k), spans in by_job.items():
        spans.sort()
        for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
            if a2 < b1:
                bad.append(f"{label}: dag {d} vertex {v} job {k} on two cores "
                           f"at slot {a2}")
    return bad


def _precedence_violations(table: ScheduleTable, system: MCSystem,
                           mode: Criticality, label: str) -> list[str]:
    bad: list[str] = []
    for dag in system.dags:
        vm = dag.vertex_map
        K = table.horizon // dag.period
        for a, b in dag.edges:
            va, vb = vm.get(a), vm.get(b)
            if va is None or vb is None:
                continue
            if mode is Criticality.HI and (
                    va.criticality is not Criticality.HI
                    or vb.criticality is not Criticality.HI):
                continue
            for k in range(K):
                sa = table.slots_of(dag.id, a, k)
                sb = table.slots_of(dag.id, b, k)
                if sa and sb and sb[0] <= sa[-1]:
                    bad.append(
                        f"{label}: dag {dag.id} vertex {b} job {k} starts at "
                        f"{sb[0]} before predecessor {a} completes at {sa[-1]}"
                    )
    return bad


def check_mc_correct(lo_table: ScheduleTable, hi_table: ScheduleTable,
                     system: MCSystem) -> list[str]:
    """All violations of the two correctness conditions (empty iff correct).

    LO condition: every job of every vertex receives exactly c_lo slots inside
    its window with precedence respected. HI condition: every HI job receives
    exactly c_hi slots with HI-restricted precedence respected, and the
    safe-transition inequality couples the two tables.
    """
    H = hyperperiod(system)
    bad: list[str] = []
    for table, label in ((lo_table, "LO"), (hi_table, "HI")):
        if table.horizon != H:
            bad.append(f"{label}: horizon {table.horizon} != hyperperiod {H}")
    if bad:
        return bad

    bad.extend(_structural_violations(lo_table, system, "LO"))
    bad.extend(_structural_violations(hi_table, system, "HI"))

    for dag in system.dags:
        K = H // dag.period
        for v in dag.vertices:
            for k in range(K):
                got = len(lo_table.slots_of(dag.id, v.id, k))
                if got != v.c_lo:
                    bad.append(
                        f"LO: dag {dag.id} vertex {v.id} job {k}: allocated "
                        f"{got} slots, expected c_lo={v.c_lo}"
                    )
                if v.criticality is Criticality.HI:
                    got = len(hi_table.slots_of(dag.id, v.id, k))
                    if got != v.c_hi:
                        bad.append(
                            f"HI: dag {dag.id} vertex {v.id} job {k}: "
                            f"allocated {got} slots, expected c_hi={v.c_hi}"
                        )

    bad.extend(_precedence_violations(lo_table, system, Criticality.LO, "LO"))
    bad.extend(_precedence_violations(hi_table, system, Criticality.HI, "HI"))

    stp = check_stp(lo_table, hi_table, system)
    if stp is not None:
        job, t = stp
        bad.append(f"STP: dag {job.dag} vertex {job.vertex} job {job.job} "
                   f"violated at t={t}")
    return bad


@dataclass(frozen=True)
class SwitchMiss:
    job: JobRef
    required: int
    available: int


def simulate_switch(lo_table: ScheduleTable, hi_table: ScheduleTable,
                    system: MCSystem, tfe_time: int) -> Optional[SwitchMiss]:
    """Mode-switch oracle for one timing-failure instant.

    Every HI job active and unfinished at the switch has executed its LO-table
    allocation so far; it completes iff the HI table still offers
    c_hi - executed slots strictly after the switch inside its window. Jobs
    that already completed within c_lo need no further budget.
    """
    H = lo_table.horizon
    if not (0 <= tfe_time < H):
        raise ValueError(f"tfe_time {tfe_time} outside [0, {H})")
    for dag in system.dags:
        for v in dag.vertices:
            if v.criticality is not Criticality.HI:
                continue
            k = tfe_time // dag.period
            r = k * dag.period
            d = r + dag.deadline
            if not (r <= tfe_time < d):
                continue
            los = lo_table.slots_of(dag.id, v.id, k)
            executed = bisect_right(los, tfe_time) - bisect_left(los, r)
            if executed >= v.c_lo:
                continue
            his = hi_table.slots_of(dag.id, v.id, k)
            available = bisect_right(his, d - 1) - bisect_right(his, tfe_time)
            required = v.c_hi - executed
            if available < required:
                return SwitchMiss(job=job_ref(system, dag.id, v.id, k),
                                  required=required, available=available)
    return None


@dataclass(frozen=True)
class PreemptionStats:
    per_job: dict[tuple[int, int, int], int]
    total: int


def count_preemptions(table: ScheduleTable) -> PreemptionStats:
    """Slots where a job stops running before completing its allocation."""
    per_job: dict[tuple[int, int, int], int] = {}
    total = 0
    for key, slots in table.job_slots().items():
        n = sum(1 for a, b in zip(slots, slots[1:]) if b > a + 1)
        per_job[key] = n
        total += n
    return PreemptionStats(per_job=per_job, total=total)


# -- serialization & rendering -------------------------------------------------

def table_to_doc(table: ScheduleTable) -> dict:
    alloc = [
        {"core": core, "slot": slot, "dag": d, "vertex": v, "job": k}
        for core, slot, d, v, k in sorted(table.cells())
    ]
    return {"mode": table.mode.value, "cores": table.cores,
            "horizon": table.horizon, "alloc": alloc}


def table_from_doc(doc: dict) -> ScheduleTable:
    try:
        mode = Criticality(doc["mode"])
        cores = int(doc["cores"])
        horizon = int(doc["horizon"])
        cells = sorted(
            (int(a["core"]), int(a["slot"]), int(a["dag"]),
             int(a["vertex"]), int(a["job"]))
            for a in doc["alloc"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed table document: {exc}") from exc
    runs: list[tuple] = []
    for core, slot, d, v, k in cells:
        if runs and runs[-1][0] == core and runs[-1][3:] == (d, v, k) \
                and runs[-1][1] + runs[-1][2] == slot:
            runs[-1] = (core, runs[-1][1], runs[-1][2] + 1, d, v, k)
        else:
            runs.append((core, slot, 1, d, v, k))
    return ScheduleTable(mode, cores, horizon, tuple(runs))


def dumps_table(table: ScheduleTable) -> str:
    return json.dumps(table_to_doc(table), indent=2, sort_keys=True) + "\n"


def loads_table(text: str) -> ScheduleTable:
    return table_from_doc(json.loads(text))


_GANTT_SYMBOLS = ("abcdefghijklmnopqrstuvwxyz"
                  "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789")


def gantt(table: ScheduleTable) -> str:
    """Plaintext rendering: one row per core, one character per slot."""
    symbols: dict[tuple[int, int], str] = {}
    for _, _, _, d, v, _ in table.runs:
        if (d, v) not in symbols:
            symbols[(d, v)] = _GANTT_SYMBOLS[len(symbols) % len(_GANTT_SYMBOLS)]
    rows = [["."] * table.horizon for _ in range(table.cores)]
    for core, slot, d, v, _ in table.cells():
        rows[core][slot] = symbols[(d, v)]
    lines = [f"{table.mode.value} mode  cores={table.cores}  "
             f"horizon={table.horizon}"]
    lines += [f"core{c} |{''.join(row)}|" for c, row in enumerate(rows)]
    legend = "  ".join(f"{sym}=d{d}v{v}" for (d, v), sym in symbols.items())
    if legend:
        lines.append("legend: " + legend)
    return "\n".join(lines) + "\n"
