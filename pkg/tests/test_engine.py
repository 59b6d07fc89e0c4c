import numpy as np
import pytest

from hoim.engine import AuditReport, SolverConfig, lyapunov_audit, run, step
from hoim.hypercut import CutSystem
from hoim.instances import CnfInstance, generate_planted_nae, generate_random_hypergraph
from hoim.naesat import NaeSystem


def nae_setup(seed=1, n=10, m=20, k=4):
    inst, plant = generate_planted_nae(n, m, k, seed=seed)
    return inst, NaeSystem.from_instance(inst)


def cut_setup(seed=1, k=3):
    graph = generate_random_hypergraph(8, 12, 2, 4, seed=seed)
    return graph, CutSystem.from_hypergraph(graph, k)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(dt=0.0)
    with pytest.raises(ValueError):
        SolverConfig(steps=0)
    with pytest.raises(ValueError):
        SolverConfig(restarts=0)
    with pytest.raises(ValueError):
        SolverConfig(record_every=0)
    with pytest.raises(ValueError):
        SolverConfig(noise_schedule="warp")


def test_decay_step_resolves_to_80_percent():
    cfg = SolverConfig(steps=1000, noise_schedule="decay")
    assert cfg.decay_step == 800
    assert cfg.noise_at(0) == cfg.noise_amplitude
    assert cfg.noise_at(400) == pytest.approx(cfg.noise_amplitude / 2)
    assert cfg.noise_at(800) == 0.0
    constant = SolverConfig(steps=1000, noise_schedule="constant", noise_amplitude=0.5)
    assert constant.noise_at(999) == 0.5


def test_step_deterministic_euler_without_noise():
    _, system = nae_setup()
    rng = np.random.default_rng(0)
    phi = rng.uniform(0, 2 * np.pi, 10)
    out = step(phi, system.drift, 1e-3, 0.0)
    assert np.allclose(out, np.mod(phi + 1e-3 * system.drift(phi), 2 * np.pi))


def test_step_identity_for_zero_drift():
    phi = np.array([0.3, 1.2])
    out = step(phi, lambda x: np.zeros_like(x), 1e-2, 0.0)
    assert np.array_equal(out, phi)


def test_step_same_seed_same_trajectory():
    _, system = nae_setup()
    for _ in range(2):
        trajectories = []
        for _ in range(2):
            rng = np.random.default_rng(99)
            phi = rng.uniform(0, 2 * np.pi, 10)
            for _ in range(50):
                phi = step(phi, system.drift, 1e-3, 0.4, rng)
            trajectories.append(phi)
        assert np.array_equal(trajectories[0], trajectories[1])


def test_step_raises_on_nonfinite_drift():
    with pytest.raises(RuntimeError, match="non-finite"):
        step(np.zeros(3), lambda x: np.array([1.0, np.nan, 0.0]), 1e-3, 0.0)


def test_run_single_step_trace():
    inst, system = nae_setup()
    cfg = SolverConfig(dt=1e-3, steps=1, noise_amplitude=0.0, noise_schedule="constant",
                       restarts=1, seed=0, record_every=1)
    result = run(system, cfg, inst)
    assert [rec.step for rec in result.trace] == [0, 1]


def test_run_rejects_mismatched_instance():
    inst, system = nae_setup()
    other = CnfInstance(3, ((1, 2, 3),))
    cfg = SolverConfig(steps=10, restarts=1)
    with pytest.raises(ValueError, match="dimensions"):
        run(system, cfg, other)
    graph, cut_system = cut_setup()
    with pytest.raises(ValueError, match="CnfInstance"):
        run(system, cfg, graph)
    with pytest.raises(ValueError, match="Hypergraph"):
        run(cut_system, cfg, inst)


def test_run_deterministic_and_trace_monotone():
    inst, system = nae_setup()
    cfg = SolverConfig(dt=1e-3, steps=500, restarts=4, seed=3, record_every=50)
    a = run(system, cfg, inst)
    b = run(system, cfg, inst)
    assert a.best_metric == b.best_metric
    assert np.array_equal(a.best_assignment, b.best_assignment)
    assert len(a.trace) == len(b.trace)
    for ra, rb in zip(a.trace, b.trace):
        assert (ra.restart, ra.step, ra.energy, ra.metric) == (rb.restart, rb.step, rb.energy, rb.metric)
    # per-restart steps strictly increase and the running best never drops
    for r in range(4):
        records = [rec for rec in a.trace if rec.restart == r]
        steps = [rec.step for rec in records]
        assert steps == sorted(set(steps))
        best = -1
        for rec in records:
            best = max(best, rec.metric)
        summary = a.restarts[r]
        assert summary.best_metric == best
    assert a.best_metric == max(rec.metric for rec in a.trace)


def test_run_best_tracking_and_restart_summaries():
    inst, system = nae_setup(seed=2, n=12, m=25)
    cfg = SolverConfig(dt=1e-3, steps=2000, restarts=6, seed=0, record_every=100)
    result = run(system, cfg, inst)
    assert result.best_metric == result.restarts[result.best_restart].best_metric
    assert result.best_metric == max(s.best_metric for s in result.restarts)
    # winner is the first restart attaining the global best
    for summary in result.restarts[: result.best_restart]:
        assert summary.best_metric < result.best_metric
    from hoim.polynomial import count_satisfied

    assert count_satisfied(inst, result.best_assignment) == result.best_metric


def test_run_early_stop_on_target():
    inst, system = nae_setup(seed=5, n=12, m=20)
    cfg = SolverConfig(dt=1e-3, steps=20_000, restarts=4, seed=1, record_every=50, target=20)
    result = run(system, cfg, inst)
    assert result.best_metric >= 20
    for summary in result.restarts:
        if summary.stopped_early:
            assert summary.steps_run < 20_000
            records = [rec for rec in result.trace if rec.restart == summary.restart]
            assert records[-1].metric >= 20


def test_run_record_phases_option():
    inst, system = nae_setup()
    cfg = SolverConfig(steps=10, restarts=1, record_every=5, record_phases=True)
    result = run(system, cfg, inst)
    assert all(rec.phases is not None and rec.phases.shape == (10,) for rec in result.trace)
    plain = run(system, SolverConfig(steps=10, restarts=1, record_every=5), inst)
    assert all(rec.phases is None for rec in plain.trace)


def test_run_cut_system_against_oracle():
    graph = generate_random_hypergraph(10, 20, 2, 4, seed=1)
    from hoim.oracle import brute_force_maxkcut

    for k in (2, 3):
        best, _ = brute_force_maxkcut(graph, k)
        system = CutSystem.from_hypergraph(graph, k)
        cfg = SolverConfig(dt=1e-2, steps=5000, restarts=10, seed=0, record_every=100, target=best)
        result = run(system, cfg, graph)
        assert result.best_metric == best


def test_lyapunov_audit_requires_zero_noise():
    inst, system = nae_setup()
    with pytest.raises(ValueError, match="noise"):
        lyapunov_audit(system, SolverConfig(noise_amplitude=0.5))


def test_lyapunov_audit_zero_steps_empty_report():
    _, system = nae_setup()
    cfg = SolverConfig(noise_amplitude=0.0, steps=100)
    report = lyapunov_audit(system, cfg, steps=0)
    assert report == AuditReport(
        steps=0, initial_energy=report.initial_energy, final_energy=report.initial_energy,
        delta_energy=0.0, max_step_increase=0.0, max_step_increase_clear=0.0, bump_steps=0,
    )


def test_lyapunov_audit_nae_descends():
    inst, system = nae_setup(seed=7, n=12, m=25)
    cfg = SolverConfig(dt=1e-3, steps=2000, noise_amplitude=0.0, noise_schedule="constant", seed=2)
    report = lyapunov_audit(system, cfg)
    assert report.max_step_increase <= 1e-6
    assert report.delta_energy < 0
    assert report.bump_steps == 0  # binary systems have no penalty bumps


def test_lyapunov_audit_cut_descends_outside_bumps():
    graph, system = cut_setup(seed=2, k=3)
    cfg = SolverConfig(dt=1e-2, steps=2000, noise_amplitude=0.0, noise_schedule="constant", seed=0)
    report = lyapunov_audit(system, cfg)
    assert report.max_step_increase_clear <= 1e-6
    assert report.delta_energy < 0


def test_lyapunov_audit_detects_blowup_at_huge_dt():
    inst, system = nae_setup(seed=3, n=12, m=30)
    cfg = SolverConfig(dt=1.0, steps=200, noise_amplitude=0.0, noise_schedule="constant", seed=0)
    report = lyapunov_audit(system, cfg)
    assert report.max_step_increase > 1e-6
