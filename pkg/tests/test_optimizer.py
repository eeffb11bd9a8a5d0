import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bilocal.optimizer import PsoConfig, init_swarm, optimize, pso_step, ring_neighborhood


class TestRing:
    @pytest.mark.parametrize(
        "i,r,n,expected",
        [(0, 1, 5, {4, 0, 1}), (2, 2, 5, {0, 1, 2, 3, 4}), (7, 1, 30, {6, 7, 8}), (29, 2, 30, {27, 28, 29, 0, 1})],
    )
    def test_examples(self, i, r, n, expected):
        assert set(ring_neighborhood(i, r, n)) == expected

    @pytest.mark.parametrize("i", [-1, 5])
    def test_out_of_range(self, i):
        with pytest.raises(IndexError):
            ring_neighborhood(i, 1, 5)

    @given(st.integers(2, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1), st.integers(0, n - 1), st.integers(1, n))))
    def test_symmetric(self, args):
        n, i, j, r = args
        assert (j in ring_neighborhood(i, r, n)) == (i in ring_neighborhood(j, r, n))

    def test_includes_self(self):
        for i in range(10):
            assert i in ring_neighborhood(i, 1, 10)


class TestConfig:
    def test_defaults(self):
        c = PsoConfig()
        assert (c.swarm_size, c.iterations, c.omega, c.beta1, c.beta2, c.vmax, c.ring_radius, c.resamples) == (
            30, 500, 0.8, 0.5, 0.5, 0.2, 1, 1,
        )

    @pytest.mark.parametrize(
        "kw",
        [
            {"swarm_size": 1},
            {"ring_radius": 0},
            {"swarm_size": 4, "ring_radius": 3},
            {"iterations": 0},
            {"vmax": 0},
            {"resamples": 0},
            {"seed": -1},
            {"seed": 2**64},
            {"update_rule": "other"},
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            PsoConfig(**kw)

    def test_json(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"swarm_size": 10, "seed": 7}')
        c = PsoConfig.load(path)
        assert c.swarm_size == 10 and c.seed == 7 and c.iterations == 500

    def test_unknown_key(self):
        with pytest.raises(ValueError, match="unknown"):
            PsoConfig.from_json({"particles": 3})


def parabola(x):
    return -((x[0] - 3.0) ** 2)


def sphere(x):
    return -float(np.sum(x**2))


class TestOptimize:
    def test_parabola(self):
        best, val, _ = optimize(parabola, 1, [(-5, 5)], PsoConfig(iterations=200, seed=1))
        assert abs(best[0] - 3) < 1e-2

    def test_sphere(self):
        best, val, _ = optimize(sphere, 5, (-1, 1), PsoConfig(seed=3))
        assert val >= -1e-3

    @pytest.mark.parametrize("rule", ["inertia", "literal"])
    def test_deterministic(self, rule):
        cfg = PsoConfig(iterations=50, seed=99, update_rule=rule)
        a = optimize(sphere, 4, (-1, 1), cfg)
        b = optimize(sphere, 4, (-1, 1), cfg)
        np.testing.assert_array_equal(a[0], b[0])
        assert a[2].best_values == b[2].best_values
        assert a[2].to_csv() == b[2].to_csv()

    def test_seed_matters(self):
        a = optimize(sphere, 4, (-1, 1), PsoConfig(iterations=5, seed=1))
        b = optimize(sphere, 4, (-1, 1), PsoConfig(iterations=5, seed=2))
        assert a[1] != b[1]

    def test_vectorized_matches_scalar(self):
        cfg = PsoConfig(iterations=40, seed=5)
        a = optimize(sphere, 3, (-1, 1), cfg)
        b = optimize(lambda X: -np.sum(X**2, axis=1), 3, (-1, 1), cfg, vectorized=True)
        np.testing.assert_allclose(a[0], b[0], atol=0)
        assert a[2].best_values == b[2].best_values

    def test_single_iteration(self):
        _, _, trace = optimize(sphere, 2, (-1, 1), PsoConfig(iterations=1))
        assert len(trace) == 1
        assert trace.to_csv().count("\n") == 2

    def test_monotone_trace(self):
        _, _, trace = optimize(lambda x: math.sin(5 * x[0]) * math.cos(3 * x[1]), 2, (-2, 2), PsoConfig(iterations=100))
        assert all(b >= a for a, b in zip(trace.best_values, trace.best_values[1:]))

    def test_best_is_evaluated_value(self):
        best, val, _ = optimize(sphere, 3, (-1, 1), PsoConfig(iterations=30))
        assert sphere(best) == val

    def test_non_finite_never_best(self):
        def f(x):
            return math.nan if x[0] > 0 else -abs(x[0])

        best, val, _ = optimize(f, 1, (-1, 1), PsoConfig(iterations=30, seed=4))
        assert best[0] <= 0 and math.isfinite(val)

    def test_all_non_finite(self):
        best, val, trace = optimize(lambda x: math.inf, 2, (-1, 1), PsoConfig(iterations=3))
        assert val == -math.inf and len(trace) == 3

    @pytest.mark.parametrize("box", [[(1, 1)], [(2, 1)], [(0, math.inf)]])
    def test_bad_box(self, box):
        with pytest.raises(ValueError):
            optimize(sphere, 1, box, PsoConfig(iterations=1))

    def test_zero_dim(self):
        with pytest.raises(ValueError):
            optimize(sphere, 0, (-1, 1), PsoConfig(iterations=1))

    def test_csv_format(self):
        _, _, trace = optimize(sphere, 2, (-1, 1), PsoConfig(iterations=3))
        lines = trace.to_csv().split("\n")
        assert lines[0] == "iteration,best_value"
        assert [ln.split(",")[0] for ln in lines[1:4]] == ["0", "1", "2"]

    def test_resampling_noisy(self):
        rng = np.random.default_rng(0)

        def noisy(x):
            return -float(np.sum(x**2)) + 0.01 * rng.standard_normal()

        best, _, _ = optimize(noisy, 2, (-1, 1), PsoConfig(iterations=100, resamples=4))
        assert np.linalg.norm(best) < 0.2


class TestStep:
    def _swarm(self, cfg, dim=3):
        return init_swarm(dim, (-1, 1), cfg)

    def test_initialisation(self):
        cfg = PsoConfig(swarm_size=12, seed=2)
        sw = self._swarm(cfg, dim=4)
        for p in sw.particles:
            assert np.all(np.abs(p.position) <= 1)
            assert np.all(np.abs(p.velocity) <= cfg.vmax)

    @pytest.mark.parametrize("rule", ["inertia", "literal"])
    def test_displacement_clamped(self, rule):
        cfg = PsoConfig(vmax=0.05, seed=8, update_rule=rule)
        sw = self._swarm(cfg)
        for _ in range(30):
            before = [p.position.copy() for p in sw.particles]
            pso_step(sw, lambda x: -float(np.sum((x - 5) ** 2)), cfg)
            for b, p in zip(before, sw.particles):
                assert np.all(np.abs(p.position - b) <= cfg.vmax + 1e-15)

    def test_literal_keeps_raw_velocity(self):
        cfg = PsoConfig(vmax=0.01, seed=1, update_rule="literal")
        sw = self._swarm(cfg)
        for _ in range(20):
            pso_step(sw, lambda x: -float(np.sum((x - 5) ** 2)), cfg)
        assert max(np.max(np.abs(p.velocity)) for p in sw.particles) > cfg.vmax / cfg.omega

    def test_constant_objective(self):
        cfg = PsoConfig(seed=4)
        sw = self._swarm(cfg)
        pso_step(sw, lambda x: 1.0, cfg)
        first = [p.personal_best_position.copy() for p in sw.particles]
        for _ in range(10):
            pso_step(sw, lambda x: 1.0, cfg)
        for f, p in zip(first, sw.particles):
            np.testing.assert_array_equal(f, p.personal_best_position)
            assert p.personal_best_value == 1.0

    def test_personal_best_consistency(self):
        cfg = PsoConfig(seed=6)
        sw = self._swarm(cfg)
        f = lambda x: math.cos(3 * x[0]) - x[1] ** 2 + 0.5 * x[2]
        for _ in range(25):
            pso_step(sw, f, cfg)
            for p in sw.particles:
                assert p.personal_best_value == pytest.approx(f(p.personal_best_position), abs=1e-12)

    def test_streams_are_per_particle(self):
        # particle k's stream depends only on (seed, k), not on the swarm size
        a = init_swarm(2, (-1, 1), PsoConfig(swarm_size=6, seed=10))
        b = init_swarm(2, (-1, 1), PsoConfig(swarm_size=10, seed=10))
        for pa, pb in zip(a.particles, b.particles):
            np.testing.assert_array_equal(pa.position, pb.position)
            np.testing.assert_array_equal(pa.velocity, pb.velocity)
