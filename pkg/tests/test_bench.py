from fractions import Fraction

import pytest

from mcsched.bench import (
    BenchConfig,
    config_to_text,
    derive_seed,
    generate_for_index,
    parse_config,
    records_to_csv,
    run_point,
    run_sweep,
)
from mcsched.sched import SchedPolicy


def tiny_config(**overrides):
    base = dict(
        n_dags=1,
        n_vertices_per_dag=4,
        periods=(10, 20),
        u_norm_points=(Fraction(2, 10), Fraction(5, 10)),
        n_systems_per_point=8,
        master_seed=7,
        cores=2,
        measure_time=False,
    )
    base.update(overrides)
    return BenchConfig(**base)


def test_run_point_is_deterministic():
    cfg = tiny_config()
    a = run_point(cfg, Fraction(1, 2))
    b = run_point(cfg, Fraction(1, 2))
    assert a == b


def test_same_batch_fed_to_both_policies():
    cfg = tiny_config()
    u = Fraction(1, 2)
    # the generated batch depends only on (master_seed, u_norm, index)
    paired = [generate_for_index(cfg, u, i) for i in range(cfg.n_systems_per_point)]
    llf_only = tiny_config(policies=(SchedPolicy.LLF,))
    again = [generate_for_index(llf_only, u, i)
             for i in range(cfg.n_systems_per_point)]
    assert paired == again


def test_single_policy_records_match_paired_run():
    u = Fraction(1, 2)
    both = run_point(tiny_config(), u)
    solo = run_point(tiny_config(policies=(SchedPolicy.EDF,)), u)
    assert both.per_policy[SchedPolicy.EDF] == solo.per_policy[SchedPolicy.EDF]


def test_low_utilization_accepts_nearly_all():
    cfg = tiny_config(u_norm_points=(Fraction(5, 100),),
                      n_systems_per_point=20)
    rec = run_point(cfg, Fraction(5, 100))
    for policy in cfg.policies:
        assert rec.acceptance(policy) >= 0.95


def test_sweep_rows_and_csv():
    cfg = tiny_config()
    records = run_sweep(cfg)
    assert len(records) == 2
    csv_text = records_to_csv(records)
    lines = csv_text.splitlines()
    assert lines[0] == ("u_norm,n_systems,accept_llf,accept_edf,"
                        "preempt_mean_llf,preempt_mean_edf,"
                        "time_ms_mean_llf,time_ms_mean_edf")
    assert len(lines) == 3
    assert lines[1].startswith("0.2,8,")
    # timing disabled leaves the time columns empty
    assert lines[1].endswith(",,")


def test_csv_sorted_by_u_norm():
    cfg = tiny_config()
    records = list(reversed(run_sweep(cfg)))
    lines = records_to_csv(records).splitlines()[1:]
    u_values = [float(line.split(",")[0]) for line in lines]
    assert u_values == sorted(u_values)


def test_acceptance_counts_bounded():
    rec = run_point(tiny_config(), Fraction(1, 2))
    for stats in rec.per_policy.values():
        assert 0 <= stats.accepted <= rec.n_systems


def test_derive_seed_stable_and_distinct():
    s = derive_seed(1, Fraction(3, 10), 0)
    assert s == derive_seed(1, Fraction(3, 10), 0)
    assert s != derive_seed(1, Fraction(3, 10), 1)
    assert s != derive_seed(2, Fraction(3, 10), 0)
    assert s != derive_seed(1, Fraction(4, 10), 0)
    assert 0 <= s < 2**64


def test_seeds_differ_across_points():
    assert derive_seed(7, Fraction(2, 10), 3) != derive_seed(7, Fraction(5, 10), 3)


def test_parallel_jobs_match_serial():
    cfg = tiny_config()
    assert run_point(cfg, Fraction(1, 2), jobs=2) == run_point(cfg, Fraction(1, 2))


def test_config_round_trip():
    cfg = tiny_config()
    text = config_to_text(cfg)
    assert parse_config(text) == cfg


def test_parse_config_text():
    cfg = parse_config(
        """
        # comment
        dags = 2
        vertices = 10
        rho = 0.5
        f = 2
        e = 0.2
        cores = 4
        u_norm = 0.3, 0.5
        n = 10
        policies = llf, edf
        seed = 99
        """
    )
    assert cfg.n_dags == 2
    assert cfg.rho == Fraction(1, 2)
    assert cfg.u_norm_points == (Fraction(3, 10), Fraction(1, 2))
    assert cfg.master_seed == 99
    assert cfg.policies == (SchedPolicy.LLF, SchedPolicy.EDF)


def test_parse_config_rejects_unknown_key():
    with pytest.raises(ValueError, match="unknown config key"):
        parse_config("bogus = 1")


def test_config_validation():
    with pytest.raises(ValueError, match="u_norm"):
        BenchConfig(u_norm_points=(Fraction(3, 10), Fraction(2, 10)))
    with pytest.raises(ValueError, match="u_norm"):
        BenchConfig(u_norm_points=(Fraction(3, 2),))
    with pytest.raises(ValueError, match="n_systems"):
        BenchConfig(n_systems_per_point=0)
