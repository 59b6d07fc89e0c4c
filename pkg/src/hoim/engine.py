"""Noisy explicit integrator with restart fan-out and trajectory capture.

The update is Euler-Maruyama with additive phase noise:

    phi' = wrap(phi + dt * drift(phi) + noise_amp * sqrt(dt) * xi)

with xi standard normal.  Noise follows either a constant schedule or a
linear decay that reaches zero at ``decay_step``.  Restarts are
independent: restart r draws its initial phases and its entire noise
stream from a generator seeded with ``seed + r``, so results are
bit-reproducible for a fixed (instance, config) and restarts may be
evolved together as one batch without coupling their randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hypercut import CutSystem, count_cut, snap_to_labels, wrap_angle
from .instances import CnfInstance, Hypergraph
from .naesat import NaeSystem, snap_to_spins
from .polynomial import count_satisfied

TWO_PI = 2.0 * np.pi
_NOISE_CHUNK = 256
# Gaussian bump support for audit bookkeeping: beyond this many sigmas a
# penalty bump is numerically zero.
_BUMP_MARGIN = 8.0


@dataclass(frozen=True)
class SolverConfig:
    """Integration and restart settings.

    ``decay_step`` is the step at which a decaying noise schedule reaches
    zero; left unset it resolves to 80% of ``steps``.  ``target`` stops a
    restart once its snapped metric reaches the given value.
    """

    dt: float = 1e-3
    steps: int = 20_000
    noise_amplitude: float = 3.0
    noise_schedule: str = "decay"
    decay_step: int | None = None
    restarts: int = 20
    seed: int = 0
    record_every: int = 100
    target: int | None = None
    record_phases: bool = False

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        if self.noise_amplitude < 0:
            raise ValueError("noise_amplitude must be >= 0")
        if self.noise_schedule not in ("constant", "decay"):
            raise ValueError("noise_schedule must be 'constant' or 'decay'")
        if self.decay_step is None and self.noise_schedule == "decay":
            object.__setattr__(self, "decay_step", max(1, int(0.8 * self.steps)))

    def noise_at(self, step_index: int) -> float:
        """Noise amplitude applied when advancing from ``step_index``."""
        if self.noise_amplitude == 0.0:
            return 0.0
        if self.noise_schedule == "constant":
            return self.noise_amplitude
        if step_index >= self.decay_step:
            return 0.0
        return self.noise_amplitude * (1.0 - step_index / self.decay_step)


@dataclass(frozen=True)
class TraceRecord:
    restart: int
    step: int
    energy: float
    metric: int
    phases: np.ndarray | None = None


@dataclass(frozen=True)
class RestartSummary:
    restart: int
    seed: int
    steps_run: int
    stopped_early: bool
    best_metric: int
    best_step: int
    final_metric: int
    final_energy: float


@dataclass(frozen=True)
class SolveResult:
    """Best snapped solution plus the full sampled history of every restart."""

    best_metric: int
    best_assignment: np.ndarray
    best_restart: int
    best_step: int
    final_energy: float  # last recorded energy of the winning restart
    trace: tuple[TraceRecord, ...]
    restarts: tuple[RestartSummary, ...]
    config: SolverConfig


def wrap_phases(phases: np.ndarray) -> np.ndarray:
    return np.mod(phases, TWO_PI)


def step(state: np.ndarray, drift_fn, dt: float, noise_amp: float, rng=None) -> np.ndarray:
    """One Euler-Maruyama step.  With ``noise_amp == 0`` no random numbers
    are consumed and the step is plain explicit Euler."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    phi = np.asarray(state, dtype=float)
    d = np.asarray(drift_fn(phi), dtype=float)
    if not np.all(np.isfinite(d)):
        raise RuntimeError("non-finite drift component")
    out = phi + dt * d
    if noise_amp > 0.0:
        out = out + noise_amp * math.sqrt(dt) * rng.standard_normal(phi.shape)
    return wrap_phases(out)


def _dispatch(system, instance):
    """Snap/metric hooks and dimension checks for the two system kinds."""
    if isinstance(system, NaeSystem):
        if not isinstance(instance, CnfInstance):
            raise ValueError("NaeSystem requires a CnfInstance")
        if instance.num_vars != system.num_vars or instance.num_clauses != system.num_clauses:
            raise ValueError("instance dimensions do not match the system")
        return system.num_vars, snap_to_spins, lambda snapped: count_satisfied(instance, snapped)
    if isinstance(system, CutSystem):
        if not isinstance(instance, Hypergraph):
            raise ValueError("CutSystem requires a Hypergraph")
        if instance != system.hypergraph:
            raise ValueError("instance does not match the system's hypergraph")
        k = system.k_partitions
        return system.num_nodes, lambda phi: snap_to_labels(phi, k), lambda snapped: count_cut(instance, snapped)
    raise TypeError(f"unsupported system type {type(system).__name__}")


def run(system, config: SolverConfig, instance) -> SolveResult:
    """Integrate ``config.restarts`` independent trajectories and return the
    best snapped solution found, with per-restart traces sampled every
    ``config.record_every`` steps (plus the initial and final states)."""
    n, snap, metric_fn = _dispatch(system, instance)
    n_restarts = config.restarts
    gens = [np.random.default_rng(config.seed + r) for r in range(n_restarts)]
    phi = np.stack([g.uniform(0.0, TWO_PI, n) for g in gens])

    active = np.ones(n_restarts, dtype=bool)
    stopped_early = np.zeros(n_restarts, dtype=bool)
    traces: list[list[TraceRecord]] = [[] for _ in range(n_restarts)]
    best_metric = np.full(n_restarts, -1, dtype=int)
    best_step = np.zeros(n_restarts, dtype=int)
    best_snap: list[np.ndarray | None] = [None] * n_restarts

    def record(step_index: int):
        energies = system.energy(phi)
        if not np.all(np.isfinite(energies[active])):
            bad = int(np.flatnonzero(active & ~np.isfinite(energies))[0])
            raise RuntimeError(f"non-finite energy in restart {bad} at step {step_index}")
        snapped = snap(phi)
        metrics = np.atleast_1d(metric_fn(snapped))
        for r in np.flatnonzero(active):
            traces[r].append(TraceRecord(
                restart=int(r), step=step_index, energy=float(energies[r]), metric=int(metrics[r]),
                phases=phi[r].copy() if config.record_phases else None,
            ))
            if metrics[r] > best_metric[r]:
                best_metric[r] = int(metrics[r])
                best_step[r] = step_index
                best_snap[r] = np.array(snapped[r])
            if config.target is not None and metrics[r] >= config.target:
                active[r] = False
                if step_index < config.steps:
                    stopped_early[r] = True

    record(0)
    sqrt_dt = math.sqrt(config.dt)
    noise_buf = np.zeros((n_restarts, _NOISE_CHUNK, n))
    buf_pos = _NOISE_CHUNK
    for s in range(1, config.steps + 1):
        if not active.any():
            break
        amp = config.noise_at(s - 1)
        drift = system.drift(phi)
        if not np.all(np.isfinite(drift[active])):
            bad = int(np.flatnonzero(active & ~np.isfinite(drift).all(axis=-1))[0])
            raise RuntimeError(f"non-finite drift in restart {bad} at step {s}")
        update = phi + config.dt * drift
        if amp > 0.0:
            if buf_pos >= _NOISE_CHUNK:
                for r in np.flatnonzero(active):
                    noise_buf[r] = gens[r].standard_normal((_NOISE_CHUNK, n))
                buf_pos = 0
            update = update + amp * sqrt_dt * noise_buf[:, buf_pos]
            buf_pos += 1
        phi = np.where(active[:, None], wrap_phases(update), phi)
        if s % config.record_every == 0 or s == config.steps:
            record(s)

    summaries = []
    for r in range(n_restarts):
        last = traces[r][-1]
        summaries.append(RestartSummary(
            restart=r, seed=config.seed + r, steps_run=last.step,
            stopped_early=bool(stopped_early[r]), best_metric=int(best_metric[r]),
            best_step=int(best_step[r]), final_metric=last.metric, final_energy=last.energy,
        ))
    winner = int(np.flatnonzero(best_metric == best_metric.max())[0])
    return SolveResult(
        best_metric=int(best_metric[winner]),
        best_assignment=best_snap[winner],
        best_restart=winner,
        best_step=int(best_step[winner]),
        final_energy=summaries[winner].final_energy,
        trace=tuple(rec for r in range(n_restarts) for rec in traces[r]),
        restarts=tuple(summaries),
        config=config,
    )


@dataclass(frozen=True)
class AuditReport:
    """Per-step energy accounting of one noise-free trajectory.

    ``max_step_increase_clear`` excludes steps where some pair difference
    sits inside a penalty-bump neighborhood (identical to the raw maximum
    for systems without penalty bumps).
    """

    steps: int
    initial_energy: float
    final_energy: float
    delta_energy: float
    max_step_increase: float
    max_step_increase_clear: float
    bump_steps: int


def _near_bumps(system, phases) -> bool:
    """True when some pair difference is within the support of a penalty bump."""
    if not isinstance(system, CutSystem):
        return False
    phi = np.asarray(phases, dtype=float)
    k = system.k_partitions
    d = wrap_angle(phi[..., system._pair_i] - phi[..., system._pair_j])[system._mask]
    centers = 2.0 * np.pi * np.arange(1, k) / k
    dist = np.min(np.minimum(np.abs(d[:, None] - centers), np.abs(d[:, None] + centers)), axis=-1)
    return bool(np.any(dist < _BUMP_MARGIN * system.sigma))


def lyapunov_audit(system, config: SolverConfig, steps: int | None = None) -> AuditReport:
    """Track the energy along one noise-free trajectory (restart seed 0).

    Requires ``config.noise_amplitude == 0``.  ``steps`` overrides
    ``config.steps`` (0 is allowed and yields an empty report).
    """
    if config.noise_amplitude != 0.0:
        raise ValueError("lyapunov audit requires noise_amplitude = 0")
    n_steps = config.steps if steps is None else steps
    n = system.num_vars if isinstance(system, NaeSystem) else system.num_nodes
    rng = np.random.default_rng(config.seed)
    phi = rng.uniform(0.0, TWO_PI, n)
    energy = float(system.energy(phi))
    initial = energy
    max_increase = 0.0
    max_increase_clear = 0.0
    bump_steps = 0
    near_prev = _near_bumps(system, phi)
    for _ in range(n_steps):
        phi = step(phi, system.drift, config.dt, 0.0)
        new_energy = float(system.energy(phi))
        change = new_energy - energy
        max_increase = max(max_increase, change)
        near_now = _near_bumps(system, phi)
        if near_prev or near_now:
            bump_steps += 1
        else:
            max_increase_clear = max(max_increase_clear, change)
        near_prev = near_now
        energy = new_energy
    return AuditReport(
        steps=n_steps, initial_energy=initial, final_energy=energy,
        delta_energy=energy - initial, max_step_increase=max_increase,
        max_step_increase_clear=max_increase_clear, bump_steps=bump_steps,
    )
