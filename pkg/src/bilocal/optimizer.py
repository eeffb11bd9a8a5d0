"""Particle swarm maximiser with a ring neighbourhood.

Each round every particle evaluates its position (averaging ``resamples``
calls), refreshes its personal best, reads the best personal best in its
ring neighbourhood and then moves.  Two update rules are available.

``"inertia"`` (default)::

    velocity = clip(omega * velocity + beta1 * xi1 * (personal_best - position)
                    + beta2 * xi2 * (neighbourhood_best - position), -vmax, vmax)
    position += velocity

``"literal"``, where ``omega`` only scales the step and the stored velocity
is never damped::

    velocity += beta1 * xi1 * (personal_best - position)
              + beta2 * xi2 * (neighbourhood_best - position)
    position += clip(omega * velocity, -vmax, vmax)

``xi1`` and ``xi2`` are uniform [0, 1) vectors drawn fresh for every
particle and every update.  Every particle owns an independent random
stream spawned from the config seed, so results do not depend on
evaluation order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "OptimizationTrace",
    "Particle",
    "PsoConfig",
    "Swarm",
    "init_swarm",
    "optimize",
    "pso_step",
    "ring_neighborhood",
]

UPDATE_RULES = ("inertia", "literal")


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 30
    iterations: int = 500
    omega: float = 0.8
    beta1: float = 0.5
    beta2: float = 0.5
    vmax: float = 0.2
    ring_radius: int = 1
    resamples: int = 1
    seed: int = 0
    update_rule: str = "inertia"

    def __post_init__(self):
        if self.update_rule not in UPDATE_RULES:
            raise ValueError(f"update_rule must be one of {UPDATE_RULES}, got {self.update_rule!r}")
        if self.swarm_size < 2:
            raise ValueError("swarm_size must be at least 2")
        if self.ring_radius < 1 or not self.ring_radius < self.swarm_size / 2 + 1:
            raise ValueError("ring_radius must satisfy 1 <= r < swarm_size/2 + 1")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not self.vmax > 0:
            raise ValueError("vmax must be positive")
        if self.resamples < 1:
            raise ValueError("resamples must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    @classmethod
    def from_json(cls, obj: dict) -> "PsoConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def load(cls, path) -> "PsoConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def replace(self, **changes) -> "PsoConfig":
        return PsoConfig(**{**asdict(self), **changes})


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    rng: np.random.Generator
    personal_best_position: np.ndarray | None = None
    personal_best_value: float = -math.inf
    # number of fitness samples behind personal_best_value
    best_samples: int = 0


@dataclass
class Swarm:
    particles: list[Particle]
    neighborhoods: list[list[int]]
    best_position: np.ndarray | None = None
    best_value: float = -math.inf


@dataclass
class OptimizationTrace:
    iterations: list[int] = field(default_factory=list)
    best_values: list[float] = field(default_factory=list)
    best_positions: list[np.ndarray] = field(default_factory=list)

    def __len__(self):
        return len(self.iterations)

    def record(self, iteration: int, swarm: Swarm) -> None:
        self.iterations.append(iteration)
        self.best_values.append(swarm.best_value)
        self.best_positions.append(swarm.best_position.copy())

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["iteration", "best_value"])
        for it, val in zip(self.iterations, self.best_values):
            writer.writerow([it, f"{val:.12g}"])
        return buf.getvalue()


def ring_neighborhood(i: int, r: int, n: int) -> list[int]:
    """Indices within circular distance ``r`` of ``i`` on a ring of ``n``, sorted."""
    if not 0 <= i < n:
        raise IndexError(f"particle index {i} out of range for swarm of {n}")
    if r < 1:
        raise ValueError("ring radius must be at least 1")
    return sorted({(i + k) % n for k in range(-r, r + 1)})


def _safe(value) -> float:
    value = float(value)
    return value if math.isfinite(value) else -math.inf


def _evaluate(objective, positions: np.ndarray, vectorized: bool) -> np.ndarray:
    if vectorized:
        values = np.asarray(objective(positions), dtype=float).reshape(len(positions))
        return np.where(np.isfinite(values), values, -np.inf)
    return np.array([_safe(objective(x)) for x in positions])


def _sample_mean(objective, positions: np.ndarray, k: int, vectorized: bool) -> np.ndarray:
    total = np.zeros(len(positions))
    for _ in range(k):
        total += _evaluate(objective, positions, vectorized)
    return total / k


def init_swarm(dim: int, init_box, config: PsoConfig) -> Swarm:
    """Uniform positions in ``init_box``; velocities uniform in ``[-vmax, vmax]``."""
    if dim < 1:
        raise ValueError("dim must be positive")
    box = np.asarray(init_box, dtype=float)
    if box.shape == (2,):
        box = np.tile(box, (dim, 1))
    if box.shape != (dim, 2):
        raise ValueError(f"init_box must have shape ({dim}, 2) or (2,), got {box.shape}")
    if not np.all(np.isfinite(box)):
        raise ValueError("init_box must be finite")
    lo, hi = box[:, 0], box[:, 1]
    if np.any(hi <= lo):
        raise ValueError("init_box is empty in at least one component")
    streams = np.random.SeedSequence(config.seed).spawn(config.swarm_size)
    particles = []
    for ss in streams:
        rng = np.random.default_rng(ss)
        pos = rng.uniform(lo, hi)
        vel = rng.uniform(-config.vmax, config.vmax, size=dim)
        particles.append(Particle(pos, vel, rng))
    n = config.swarm_size
    hoods = [ring_neighborhood(i, config.ring_radius, n) for i in range(n)]
    return Swarm(particles, hoods)


def pso_step(
    swarm: Swarm,
    objective: Callable,
    config: PsoConfig,
    *,
    vectorized: bool = False,
) -> Swarm:
    """Run one synchronous round on ``swarm`` in place and return it."""
    k = config.resamples
    parts = swarm.particles
    current = _sample_mean(objective, np.array([p.position for p in parts]), k, vectorized)

    # re-sample personal bests; only meaningful for noisy objectives
    if k > 1:
        have_best = [i for i, p in enumerate(parts) if p.personal_best_position is not None]
        if have_best:
            resampled = _sample_mean(
                objective, np.array([parts[i].personal_best_position for i in have_best]), k, vectorized
            )
            for i, val in zip(have_best, resampled):
                p = parts[i]
                n_old = p.best_samples
                p.personal_best_value = (p.personal_best_value * n_old + val * k) / (n_old + k)
                p.best_samples = n_old + k

    for p, val in zip(parts, current):
        if p.personal_best_position is None or val > p.personal_best_value:
            p.personal_best_position = p.position.copy()
            p.personal_best_value = float(val)
            p.best_samples = k
        if swarm.best_position is None or p.personal_best_value > swarm.best_value:
            swarm.best_value = p.personal_best_value
            swarm.best_position = p.personal_best_position.copy()

    # neighbourhood bests are read from a snapshot so the update is synchronous
    bests = [(p.personal_best_value, p.personal_best_position) for p in parts]
    for p, hood in zip(parts, swarm.neighborhoods):
        j = max(hood, key=lambda m: bests[m][0])
        lam = bests[j][1]
        xi1, xi2 = p.rng.random((2, p.position.size))
        pull = config.beta1 * xi1 * (p.personal_best_position - p.position) + config.beta2 * xi2 * (
            lam - p.position
        )
        if config.update_rule == "inertia":
            p.velocity = np.clip(config.omega * p.velocity + pull, -config.vmax, config.vmax)
            p.position = p.position + p.velocity
        else:
            p.velocity = p.velocity + pull
            p.position = p.position + np.clip(config.omega * p.velocity, -config.vmax, config.vmax)
    return swarm


def optimize(
    objective: Callable,
    dim: int,
    init_box: Sequence,
    config: PsoConfig = PsoConfig(),
    *,
    vectorized: bool = False,
) -> tuple[np.ndarray, float, OptimizationTrace]:
    """Maximise ``objective`` over ``R^dim``.

    Parameters
    ----------
    objective : callable
        ``f(x) -> float`` for a 1-d array ``x``, or, with ``vectorized=True``,
        ``f(X) -> array`` for a ``(swarm_size, dim)`` array.  Non-finite
        values count as ``-inf``.
    dim : int
        Search-space dimension.
    init_box : array_like
        ``(dim, 2)`` lower/upper bounds for the initial positions, or a
        single ``(lo, hi)`` pair applied to every component.
    config : PsoConfig
        Hyperparameters and seed.

    Returns
    -------
    best_position, best_value, trace
        Best position ever evaluated, its fitness, and the per-iteration
        record of the global best.
    """
    swarm = init_swarm(dim, init_box, config)
    trace = OptimizationTrace()
    for it in range(config.iterations):
        pso_step(swarm, objective, config, vectorized=vectorized)
        trace.record(it, swarm)
    return swarm.best_position.copy(), swarm.best_value, trace
