import numpy as np
import pytest

from windrift import (SimulationState, ThermalEnv, TorusGeometry,
                      analytic_rate, even_mean_population, initial_state,
                      mean_population, predicted_rate, rate_from_green_kubo,
                      rate_from_msd, run_replica, sample_population,
                      step_ensemble, substream, winding_of_vacuum)
from windrift.langevin import OUPropagator

from oracles import synthetic_brownian_alpha


def drift_state(geometry, velocities, charges):
    """Deterministic state: given velocities, T=0 dynamics just relaxes them."""
    n = len(charges)
    return SimulationState(
        pos=np.full((n, 2), 0.25), vel=np.array(velocities, dtype=float),
        charges=np.array(charges, dtype=float), geometry=geometry,
        time=0.0, alpha_x=0.0, alpha_y=0.0, rng=substream(0, 0))


class TestWindingAccumulators:
    def test_vortex_crossing_short_loop_adds_one(self, square_torus):
        env = ThermalEnv(mass=1.0, eta=1.0, temperature=0.0)
        prop = OUPropagator.build(env, 1.0)
        vy = square_torus.l_y / prop.drift   # displacement = exactly l_y
        state = drift_state(square_torus, [[0.0, vy]], [+1])
        step_ensemble(state, 1.0, env)
        assert state.alpha_x == pytest.approx(1.0, rel=1e-12)
        assert state.alpha_y == 0.0

    def test_antivortex_half_loop(self, square_torus):
        env = ThermalEnv(mass=1.0, eta=1.0, temperature=0.0)
        prop = OUPropagator.build(env, 1.0)
        vy = 0.5 * square_torus.l_y / prop.drift
        state = drift_state(square_torus, [[0.0, vy]], [-1])
        step_ensemble(state, 1.0, env)
        assert state.alpha_x == pytest.approx(-0.5, rel=1e-12)

    def test_pair_moving_together_cancels(self, square_torus):
        env = ThermalEnv(mass=1.0, eta=1.0, temperature=0.0)
        state = drift_state(square_torus, [[0.3, 0.9], [0.3, 0.9]], [+1, -1])
        step_ensemble(state, 1.0, env)
        assert state.alpha_x == 0.0
        assert state.alpha_y == 0.0

    def test_x_motion_feeds_alpha_y(self, square_torus):
        env = ThermalEnv(mass=1.0, eta=1.0, temperature=0.0)
        prop = OUPropagator.build(env, 1.0)
        vx = square_torus.l_x / prop.drift
        state = drift_state(square_torus, [[vx, 0.0]], [+1])
        step_ensemble(state, 1.0, env)
        assert state.alpha_y == pytest.approx(1.0, rel=1e-12)
        assert state.alpha_x == 0.0

    def test_positions_wrapped(self, square_torus):
        env = ThermalEnv(mass=1.0, eta=1.0, temperature=0.0)
        prop = OUPropagator.build(env, 1.0)
        vy = 1.7 * square_torus.l_y / prop.drift
        state = drift_state(square_torus, [[0.0, vy]], [+1])
        step_ensemble(state, 1.0, env)
        assert 0.0 <= state.pos[0, 1] < square_torus.l_y

    def test_rejects_bad_dt(self, square_torus, basic_env):
        state = drift_state(square_torus, [[0.0, 0.0]], [+1])
        with pytest.raises(ValueError):
            step_ensemble(state, 0.0, basic_env)


class TestStateConstruction:
    def test_neutrality_enforced(self, square_torus, basic_env):
        with pytest.raises(ValueError):
            initial_state(basic_env, square_torus, 3, 2)

    def test_neutrality_conserved_over_run(self, square_torus, basic_env):
        res = run_replica(basic_env, square_torus, 5, 5, 0.1, 200,
                          master_seed=1, stream_id=0)
        assert res.state.net_charge == 0

    def test_walkers_view(self, square_torus, basic_env):
        state = initial_state(basic_env, square_torus, 2, 2, master_seed=3)
        walkers = state.walkers
        assert len(walkers) == 4
        assert {w.charge for w in walkers} == {+1, -1}

    def test_geometry_validation(self):
        with pytest.raises(ValueError):
            TorusGeometry(l_x=1.0, l_y=2.0)
        with pytest.raises(ValueError):
            TorusGeometry(l_x=1.0, l_y=1.0, d=0.0)


class TestEngineEquivalence:
    """The chunked fast path must reproduce step_ensemble bit for bit."""

    def test_stepwise_and_chunked_match(self, square_torus, basic_env):
        dt, n_steps = 0.07, 40
        state = initial_state(basic_env, square_torus, 3, 3,
                              master_seed=123, stream_id=4)
        alphas = []
        for _ in range(n_steps):
            step_ensemble(state, dt, basic_env)
            alphas.append((state.alpha_x, state.alpha_y))
        rep = run_replica(basic_env, square_torus, 3, 3, dt, n_steps,
                          master_seed=123, stream_id=4, sample_stride=1,
                          chunk_steps=7)
        assert np.array_equal(rep.state.vel, state.vel)
        assert rep.alpha_x[1:].tolist() == [a[0] for a in alphas]
        assert rep.alpha_y[1:].tolist() == [a[1] for a in alphas]
        assert np.allclose(rep.state.pos, state.pos, rtol=1e-12, atol=1e-12)

    def test_chunk_size_invariance(self, square_torus, basic_env):
        a = run_replica(basic_env, square_torus, 4, 4, 0.05, 100,
                        master_seed=9, stream_id=2, chunk_steps=11)
        b = run_replica(basic_env, square_torus, 4, 4, 0.05, 100,
                        master_seed=9, stream_id=2, chunk_steps=64)
        assert np.array_equal(a.inc_x, b.inc_x)
        assert np.array_equal(a.inc_y, b.inc_y)
        assert np.array_equal(a.state.vel, b.state.vel)

    def test_seed_determinism(self, square_torus, basic_env):
        a = run_replica(basic_env, square_torus, 4, 4, 0.05, 50,
                        master_seed=9, stream_id=0)
        b = run_replica(basic_env, square_torus, 4, 4, 0.05, 50,
                        master_seed=9, stream_id=0)
        c = run_replica(basic_env, square_torus, 4, 4, 0.05, 50,
                        master_seed=9, stream_id=1)
        assert np.array_equal(a.inc_x, b.inc_x)
        assert not np.array_equal(a.inc_x, c.inc_x)

    def test_winding_additivity(self, square_torus, basic_env):
        res = run_replica(basic_env, square_torus, 4, 4, 0.05, 157,
                          master_seed=2, stream_id=0, sample_stride=1)
        assert res.state.alpha_x == res.alpha_x[-1]
        assert res.state.alpha_x == pytest.approx(res.inc_x.sum(), rel=1e-12)


class TestPopulation:
    def test_mean_formula(self, basic_env):
        geo = TorusGeometry(l_x=np.pi, l_y=1.0)
        assert mean_population(basic_env, geo, 0.0) == pytest.approx(
            np.pi * 1.0 * 1.0 / np.pi, rel=1e-15)

    def test_boltzmann_suppression_to_empty(self, basic_env, square_torus):
        n_v, n_a = sample_population(basic_env, square_torus, 1e6,
                                     rng=substream(0, 0))
        assert (n_v, n_a) == (0, 0)

    def test_sampled_mean_matches_boltzmann(self, basic_env):
        geo = TorusGeometry(l_x=np.pi, l_y=1.0)    # mean total = 1
        rng = substream(7, 0)
        totals = [sum(sample_population(basic_env, geo, 0.0, rng=rng))
                  for _ in range(10_000)]
        # Poisson sd ~ 1 plus the even-rounding tie-break
        assert abs(np.mean(totals) - 1.0) < 0.05

    def test_counts_always_even_split(self, basic_env, square_torus):
        rng = substream(3, 1)
        for _ in range(50):
            n_v, n_a = sample_population(basic_env, square_torus, 2.0,
                                         rng=rng)
            assert n_v == n_a >= 0

    def test_even_mean_population(self, basic_env, square_torus):
        # mean total = 100/pi = 31.83 -> nearest even 32 -> 16 + 16
        assert even_mean_population(basic_env, square_torus, 0.0) == (16, 16)

    def test_rejects_bad_inputs(self, basic_env, square_torus):
        with pytest.raises(ValueError):
            mean_population(basic_env, square_torus, -1.0)
        cold = ThermalEnv(mass=1.0, eta=1.0, temperature=0.0)
        with pytest.raises(ValueError):
            mean_population(cold, square_torus, 1.0)


class TestClosedFormRates:
    def test_analytic_rate_substitution(self, square_torus):
        env = ThermalEnv(mass=1.0, eta=2.0, temperature=1.0)
        est = analytic_rate(env, square_torus, 50, 50)
        assert est.gamma_rate == pytest.approx(0.5, rel=1e-15)
        assert est.stderr == 0.0
        assert est.method == "Analytic"

    def test_analytic_rate_empty(self, basic_env, square_torus):
        assert analytic_rate(basic_env, square_torus, 0, 0).gamma_rate == 0.0

    def test_no_volume_enhancement_in_formula(self, basic_env):
        small = analytic_rate(basic_env, TorusGeometry(10.0, 10.0), 50, 50)
        large = analytic_rate(basic_env, TorusGeometry(20.0, 20.0), 200, 200)
        assert small.gamma_rate == pytest.approx(large.gamma_rate, rel=1e-15)

    def test_predicted_rate_substitution(self):
        env = ThermalEnv(mass=1.0, eta=np.pi, temperature=1.0)
        est = predicted_rate(env, TorusGeometry(7.0, 7.0), 0.0)
        assert est.gamma_rate == pytest.approx(1.0 / np.pi**2, rel=1e-12)
        assert est.storage_time == pytest.approx(np.pi**2, rel=1e-12)

    def test_boltzmann_factor(self, basic_env, square_torus):
        bare = predicted_rate(basic_env, square_torus, 0.0)
        cooled = predicted_rate(basic_env, square_torus,
                                basic_env.temperature * np.log(10.0))
        assert cooled.gamma_rate == pytest.approx(0.1 * bare.gamma_rate,
                                                  rel=1e-12)

    def test_predicted_equals_analytic_at_mean_population(self, basic_env):
        geo = TorusGeometry(l_x=14.0, l_y=5.0)
        f0 = 0.7
        half = mean_population(basic_env, geo, f0) / 2.0
        for axis in ("x", "y"):
            pred = predicted_rate(basic_env, geo, f0, axis=axis)
            ana = analytic_rate(basic_env, geo, half, half, axis=axis)
            assert pred.gamma_rate == pytest.approx(ana.gamma_rate,
                                                    rel=1e-12)

    def test_axis_interchange(self, basic_env):
        geo = TorusGeometry(l_x=20.0, l_y=10.0)
        gx = analytic_rate(basic_env, geo, 50, 50, axis="x").gamma_rate
        gy = analytic_rate(basic_env, geo, 50, 50, axis="y").gamma_rate
        assert gx / gy == pytest.approx(4.0, rel=1e-12)

    def test_zero_temperature_storage_time_infinite(self, square_torus):
        cold = ThermalEnv(mass=1.0, eta=1.0, temperature=0.0)
        est = predicted_rate(cold, square_torus, 0.0)
        assert est.gamma_rate == 0.0
        assert est.storage_time == float("inf")

    def test_validation(self, basic_env, square_torus):
        with pytest.raises(ValueError):
            analytic_rate(basic_env, square_torus, -1, 1)
        with pytest.raises(ValueError):
            predicted_rate(basic_env, square_torus, -0.1)
        with pytest.raises(ValueError):
            analytic_rate(basic_env, square_torus, 1, 1, axis="z")


class TestMsdEstimator:
    def test_constant_series(self):
        times = np.arange(401.0)
        est = rate_from_msd(times, np.ones(401), fit_window=(2.0, 8.0))
        assert est.gamma_rate == 0.0
        assert est.stderr == 0.0
        assert est.method == "MSD"

    def test_synthetic_brownian_oracle(self):
        rng = np.random.default_rng(11)
        rate0, dt, n = 0.3, 0.01, 20_000
        rows = [synthetic_brownian_alpha(rate0, dt, n, rng)[0]
                for _ in range(25)]
        times = np.arange(n + 1) * dt
        est = rate_from_msd(times, np.stack(rows), fit_window=(1.0, 20.0),
                            min_segments=20)
        assert abs(est.gamma_rate - rate0) < 3.0 * est.stderr + 0.01

    def test_diffusive_window_precondition(self):
        times = np.arange(1000.0)
        with pytest.raises(ValueError, match="diffusive"):
            rate_from_msd(times, np.zeros(1000), fit_window=(1.0, 50.0),
                          gamma=1.0)

    def test_insufficient_replicas(self):
        times = np.arange(100.0)
        with pytest.raises(ValueError):
            rate_from_msd(times, np.zeros((5, 100)), fit_window=(2.0, 8.0))

    def test_window_beyond_data(self):
        times = np.arange(0.0, 4.0, 1.0)
        with pytest.raises(ValueError):
            rate_from_msd(times, np.zeros(4), fit_window=(10.0, 20.0),
                          min_segments=1)


class TestGreenKuboEstimator:
    def test_zero_increments(self):
        est = rate_from_green_kubo(np.zeros(4000), dt=0.1, cutoff=5.0)
        assert est.gamma_rate == 0.0
        assert est.stderr == 0.0
        assert est.method == "GreenKubo"

    def test_white_noise_oracle(self):
        rng = np.random.default_rng(23)
        s, dt = 0.8, 0.05
        inc = rng.normal(0.0, s * np.sqrt(dt), size=(20, 40_000))
        est = rate_from_green_kubo(inc, dt=dt, cutoff=2.0)
        assert abs(est.gamma_rate - s**2 / 2.0) < 3.0 * est.stderr + 0.01

    def test_matches_msd_on_same_trajectory(self):
        rng = np.random.default_rng(31)
        rate0, dt, n = 0.3, 0.02, 50_000
        alphas, incs = [], []
        for _ in range(20):
            a, i = synthetic_brownian_alpha(rate0, dt, n, rng)
            alphas.append(a)
            incs.append(i)
        times = np.arange(n + 1) * dt
        msd = rate_from_msd(times, np.stack(alphas), fit_window=(1.0, 30.0))
        gk = rate_from_green_kubo(np.stack(incs), dt=dt, cutoff=3.0)
        combined = np.hypot(msd.stderr, gk.stderr)
        assert abs(msd.gamma_rate - gk.gamma_rate) <= 2.0 * combined + 1e-3

    def test_cutoff_validation(self):
        with pytest.raises(ValueError):
            rate_from_green_kubo(np.zeros(100), dt=0.1, cutoff=20.0,
                                 min_segments=1)


class TestSimulatedDiffusion:
    def test_msd_linear_with_no_quadratic_term(self, basic_env):
        # gamma = 2: beyond 10/gamma the winding MSD is a straight line
        geo = TorusGeometry(l_x=10.0, l_y=10.0)
        dt, n_steps = 0.05, 40_000
        curves = []
        for r in range(20):
            res = run_replica(basic_env, geo, 20, 20, dt, n_steps,
                              master_seed=77, stream_id=r, sample_stride=20)
            curves.append(res.alpha_x)
        times = np.arange(0.0, n_steps * dt + 1e-9, dt * 20)
        lags = np.arange(5, 101, 5)            # 5 .. 100 time units
        lag_idx = lags
        coeffs = []
        for alpha in curves:
            origins = np.arange(0, len(alpha) - lag_idx[-1], lag_idx[-1])
            msd = np.array([np.mean((alpha[origins + L] - alpha[origins])**2)
                            for L in lag_idx])
            coeffs.append(np.polyfit(lags.astype(float), msd, 2)[0])
        coeffs = np.asarray(coeffs)
        se = coeffs.std(ddof=1) / np.sqrt(len(coeffs))
        assert abs(coeffs.mean()) <= 3.0 * se
        assert times[1] == pytest.approx(1.0)

    def test_simulated_rate_near_analytic(self, basic_env):
        geo = TorusGeometry(l_x=10.0, l_y=10.0)
        dt, n_steps = 0.1, 30_000
        rows = [run_replica(basic_env, geo, 20, 20, dt, n_steps,
                            master_seed=99, stream_id=r, sample_stride=1)
                for r in range(20)]
        times = rows[0].times
        alphas = np.stack([r.alpha_x for r in rows])
        est = rate_from_msd(times, alphas, fit_window=(5.0, 100.0),
                            gamma=basic_env.gamma)
        target = analytic_rate(basic_env, geo, 20, 20).gamma_rate
        assert abs(est.gamma_rate - target) <= 0.15 * target


class TestVacuumWinding:
    @pytest.mark.parametrize("n_x,n_y", [(0, 0), (1, 0), (3, -2)])
    def test_vacuum_windings_recovered(self, n_x, n_y):
        geo = TorusGeometry(l_x=4.0, l_y=2.5, d=0.3)
        ax, ay = winding_of_vacuum(n_x, n_y, geo, grid=16, g_coupling=0.7)
        assert ax == pytest.approx(n_x, rel=1e-10, abs=1e-10)
        assert ay == pytest.approx(n_y, rel=1e-10, abs=1e-10)

    def test_independent_of_coupling(self):
        geo = TorusGeometry(l_x=4.0, l_y=2.5)
        a = winding_of_vacuum(2, 1, geo, grid=8, g_coupling=0.5)
        b = winding_of_vacuum(2, 1, geo, grid=8, g_coupling=5.0)
        assert a == pytest.approx(b, rel=1e-12)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            winding_of_vacuum(1, 0, TorusGeometry(2.0, 1.0), grid=1)
