"""Mixed-criticality DAG scheduling toolkit: table synthesis and checking,
periodic-delayed queue arithmetic, random system generation, and
acceptance-rate benchmarks."""

from .model import (
    Criticality,
    MCDag,
    MCSystem,
    PeriodicTask,
    Vertex,
    hyperperiod,
    utilization,
    validate,
)
from .gen import GenParams, GenerationError, generate_system
from .sched import (
    JobRef,
    SchedPolicy,
    ScheduleTable,
    UnschedulableError,
    build_hi_table,
    build_lo_table,
    check_mc_correct,
    check_stp,
    count_preemptions,
    psi,
    simulate_switch,
)
from .pdq import (
    PeriodicQueue,
    QueueCollisionError,
    queue_bound,
    read_index,
    received_count,
    send_index,
    simulate,
)
from .bench import BenchConfig, BenchRecord, run_point, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BenchConfig",
    "BenchRecord",
    "Criticality",
    "GenParams",
    "GenerationError",
    "JobRef",
    "MCDag",
    "MCSystem",
    "PeriodicQueue",
    "PeriodicTask",
    "QueueCollisionError",
    "SchedPolicy",
    "ScheduleTable",
    "UnschedulableError",
    "Vertex",
    "build_hi_table",
    "build_lo_table",
    "check_mc_correct",
    "check_stp",
    "count_preemptions",
    "generate_system",
    "hyperperiod",
    "psi",
    "queue_bound",
    "read_index",
    "received_count",
    "run_point",
    "run_sweep",
    "send_index",
    "simulate",
    "simulate_switch",
    "utilization",
    "validate",
]
