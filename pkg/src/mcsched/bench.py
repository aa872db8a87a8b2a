"""Acceptance-rate benchmark harness.

For each normalized-utilization point, generate a batch of systems from
per-system seeds derived from the master seed, feed the same batch to every
policy, and record the fraction for which table synthesis succeeds and the
result verifies. Wall times are informational only and can be disabled to
make the CSV fully reproducible.
"""
from __future__ import annotations

import csv
import hashlib
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .gen import PERIOD_MENU, GenerationError, GenParams, generate_system
from .model import Criticality, MCSystem
from .sched import (
    SchedPolicy,
    UnschedulableError,
    build_hi_table,
    build_lo_table,
    check_mc_correct,
    count_preemptions,
    job_ref,
    psi,
)

GEN_RETRY_LIMIT = 50

CSV_COLUMNS = (
    "u_norm", "n_systems",
    "accept_llf", "accept_edf",
    "preempt_mean_llf", "preempt_mean_edf",
    "time_ms_mean_llf", "time_ms_mean_edf",
)


@dataclass(frozen=True)
class BenchConfig:
    n_dags: int = 2
    n_vertices_per_dag: int = 10
    rho: Fraction = Fraction(1, 2)
    f: Fraction = Fraction(2)
    e: float = 0.2
    cores: int = 4
    periods: tuple[int, ...] = PERIOD_MENU
    u_norm_points: tuple[Fraction, ...] = tuple(
        Fraction(n, 10) for n in range(3, 10)
    )
    n_systems_per_point: int = 100
    policies: tuple[SchedPolicy, ...] = (SchedPolicy.LLF, SchedPolicy.EDF)
    master_seed: int = 1
    measure_time: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "u_norm_points",
                           tuple(Fraction(u) for u in self.u_norm_points))
        object.__setattr__(self, "policies", tuple(self.policies))
        object.__setattr__(self, "periods", tuple(self.periods))
        if self.n_systems_per_point < 1:
            raise ValueError("n_systems_per_point: must be >= 1")
        pts = self.u_norm_points
        if not pts or any(not (0 < u <= 1) for u in pts):
            raise ValueError("u_norm_points: values must lie in (0, 1]")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("u_norm_points: must be strictly increasing")


@dataclass(frozen=True)
class PolicyStats:
    accepted: int
    preempt_mean: Optional[float]
    preempt_max: Optional[int]
    time_ms_mean: Optional[float]


@dataclass(frozen=True)
class BenchRecord:
    u_norm: Fraction
    n_systems: int
    per_policy: dict[SchedPolicy, PolicyStats]

    def acceptance(self, policy: SchedPolicy) -> float:
        return self.per_policy[policy].accepted / self.n_systems


def derive_seed(master_seed: int, u_norm: Fraction, index: int,
                attempt: int = 0) -> int:
    """Stable 64-bit per-system seed (independent of process or platform)."""
    blob = f"{master_seed}|{u_norm.numerator}|{u_norm.denominator}|" \
           f"{index}|{attempt}".encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def _gen_params(config: BenchConfig, u_norm: Fraction, seed: int) -> GenParams:
    return GenParams(
        u_target=u_norm * config.cores,
        n_dags=config.n_dags,
        n_vertices_per_dag=config.n_vertices_per_dag,
        rho=config.rho,
        f=config.f,
        e=config.e,
        cores=config.cores,
        seed=seed,
        periods=config.periods,
    )


def generate_for_index(config: BenchConfig, u_norm: Fraction,
                       index: int) -> MCSystem:
    """Generate the batch system for one index, redrawing the seed when the
    parameters land on an infeasible utilization split."""
    for attempt in range(GEN_RETRY_LIMIT):
        seed = derive_seed(config.master_seed, u_norm, index, attempt)
        try:
            return generate_system(_gen_params(config, u_norm, seed))
        except GenerationError:
            continue
    raise GenerationError(
        f"no feasible system after {GEN_RETRY_LIMIT} seeds at "
        f"u_norm={float(u_norm):g}, index={index}"
    )


@dataclass(frozen=True)
class SystemVerdict:
    accepted: bool
    preemptions: int = 0
    mc_violations: tuple[str, ...] = ()
    psi_exact: bool = True
    time_ms: float = 0.0


def synth_verdict(system: MCSystem, policy: SchedPolicy,
                  measure_time: bool = True) -> SystemVerdict:
    """Build both tables and verify them; accepted iff everything passes."""
    t0 = time.perf_counter() if measure_time else 0.0
    try:
        hi = build_hi_table(system, policy)
        lo = build_lo_table(system, policy, hi)
    except UnschedulableError:
        dt = (time.perf_counter() - t0) * 1e3 if measure_time else 0.0
        return SystemVerdict(accepted=False, time_ms=dt)
    dt = (time.perf_counter() - t0) * 1e3 if measure_time else 0.0
    violations = tuple(check_mc_correct(lo, hi, system))
    psi_exact = _psi_conserved(lo, hi, system)
    preempt = count_preemptions(lo).total + count_preemptions(hi).total
    return SystemVerdict(
        accepted=not violations,
        preemptions=preempt,
        mc_violations=violations,
        psi_exact=psi_exact,
        time_ms=dt,
    )


def _psi_conserved(lo, hi, system: MCSystem) -> bool:
    # every job's allocation over its own window equals its per-mode budget
    for dag in system.dags:
        K = lo.horizon // dag.period
        for v in dag.vertices:
            for k in range(K):
                job = job_ref(system, dag.id, v.id, k)
                if psi(lo, job, job.release, job.deadline) != v.c_lo:
                    return False
                if v.criticality is Criticality.HI and \
                        psi(hi, job, job.release, job.deadline) != v.c_hi:
                    return False
    return True


def _eval_index(args: tuple) -> tuple[int, dict]:
    config, u_norm, index = args
    system = generate_for_index(config, u_norm, index)
    out = {}
    for policy in config.policies:
        out[policy] = synth_verdict(system, policy, config.measure_time)
    return index, out


def run_point(config: BenchConfig, u_norm: Fraction,
              jobs: int = 1) -> BenchRecord:
    """Evaluate one utilization point; the same generated batch is fed to
    every policy, so the comparison is paired."""
    u_norm = Fraction(u_norm)
    n = config.n_systems_per_point
    tasks = [(config, u_norm, i) for i in range(n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = dict(pool.map(_eval_index, tasks, chunksize=4))
    else:
        results = dict(map(_eval_index, tasks))

    per_policy: dict[SchedPolicy, PolicyStats] = {}
    for policy in config.policies:
        verdicts = [results[i][policy] for i in range(n)]
        acc = [v for v in verdicts if v.accepted]
        per_policy[policy] = PolicyStats(
            accepted=len(acc),
            preempt_mean=(sum(v.preemptions for v in acc) / len(acc)
                          if acc else None),
            preempt_max=(max(v.preemptions for v in acc) if acc else None),
            time_ms_mean=(sum(v.time_ms for v in verdicts) / n
                          if config.measure_time else None),
        )
    return BenchRecord(u_norm=u_norm, n_systems=n, per_policy=per_policy)


def run_sweep(config: BenchConfig, jobs: int = 1) -> list[BenchRecord]:
    return [run_point(config, u, jobs=jobs) for u in config.u_norm_points]


def _fmt(x: Optional[float], digits: int) -> str:
    return "" if x is None else f"{x:.{digits}f}"


def records_to_csv(records: Sequence[BenchRecord]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in sorted(records, key=lambda r: r.u_norm):
        row = [f"{float(rec.u_norm):g}", rec.n_systems]
        stats = {p: rec.per_policy.get(p) for p in
                 (SchedPolicy.LLF, SchedPolicy.EDF)}
        row += [_fmt(s.accepted / rec.n_systems, 4) if s else ""
                for s in stats.values()]
        row += [_fmt(s.preempt_mean, 2) if s else "" for s in stats.values()]
        row += [_fmt(s.time_ms_mean, 3) if s else "" for s in stats.values()]
        w.writerow(row)
    return out.getvalue()


# -- key = value config files ---------------------------------------------------

def parse_config(text: str) -> BenchConfig:
    """Parse a key = value config ('#' starts a comment)."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        raw[key.strip()] = value.strip()

    def frac_list(v: str) -> tuple[Fraction, ...]:
        return tuple(Fraction(x.strip()) for x in v.split(",") if x.strip())

    def int_list(v: str) -> tuple[int, ...]:
        return tuple(int(x.strip()) for x in v.split(",") if x.strip())

    kwargs: dict = {}
    try:
        for key, value in raw.items():
            if key == "dags":
                kwargs["n_dags"] = int(value)
            elif key == "vertices":
                kwargs["n_vertices_per_dag"] = int(value)
            elif key == "rho":
                kwargs["rho"] = Fraction(value)
            elif key == "f":
                kwargs["f"] = Fraction(value)
            elif key == "e":
                kwargs["e"] = float(value)
            elif key == "cores":
                kwargs["cores"] = int(value)
            elif key == "periods":
                kwargs["periods"] = int_list(value)
            elif key == "u_norm":
                kwargs["u_norm_points"] = frac_list(value)
            elif key == "n":
                kwargs["n_systems_per_point"] = int(value)
            elif key == "policies":
                kwargs["policies"] = tuple(
                    SchedPolicy(p.strip().lower())
                    for p in value.split(",") if p.strip()
                )
            elif key == "seed":
                kwargs["master_seed"] = int(value)
            elif key == "measure_time":
                kwargs["measure_time"] = value.lower() in ("1", "true", "yes")
            else:
                raise ValueError(f"unknown config key '{key}'")
    except (ValueError, ArithmeticError) as exc:
        raise ValueError(f"config: {exc}") from exc
    return BenchConfig(**kwargs)


def config_to_text(config: BenchConfig) -> str:
    lines = [
        f"dags = {config.n_dags}",
        f"vertices = {config.n_vertices_per_dag}",
        f"rho = {config.rho}",
        f"f = {config.f}",
        f"e = {config.e:g}",
        f"cores = {config.cores}",
        f"periods = {','.join(str(p) for p in config.periods)}",
        f"u_norm = {','.join(str(u) for u in config.u_norm_points)}",
        f"n = {config.n_systems_per_point}",
        f"policies = {','.join(p.value for p in config.policies)}",
        f"seed = {config.master_seed}",
        f"measure_time = {str(config.measure_time).lower()}",
    ]
    return "\n".join(lines) + "\n"
