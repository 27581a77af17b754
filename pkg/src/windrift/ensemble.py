"""Walker ensembles on the torus and the winding-number rate estimators.

Walkers are non-interacting vortices/antivortices performing free Langevin
motion. The real-valued winding accumulators integrate pre-wrap
displacements,

    d(alpha_x) = sum_w charge_w * dy_w / l_y
    d(alpha_y) = sum_w charge_w * dx_w / l_x

so a single vortex carried once around the short loop shifts alpha_x by
exactly +1. The topological transition rate Gamma is then extracted three
independent ways: the slope of <[alpha(t)-alpha(0)]^2> (MSD), the
integrated autocorrelation of alpha-dot (Green-Kubo), and the closed-form
T*(N_v+N_a)/(eta*l^2).

Reproducibility: all noise comes from Philox streams keyed by
(master_seed, stream_id); draws happen in a fixed (step, walker, axis,
role) order. Replicas are the unit of parallelism and are never split, so
results are bit-identical for any worker count.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.signal import lfilter

from .langevin import OUPropagator, ThermalEnv, Walker
from .rng import stream_descriptor, substream


@dataclass(frozen=True)
class TorusGeometry:
    """Torus circumferences (l_x >= l_y > 0) and film thickness."""

    l_x: float
    l_y: float
    d: float = 1.0

    def __post_init__(self):
        if not (self.l_x >= self.l_y > 0.0):
            raise ValueError(f"require l_x >= l_y > 0, got "
                             f"({self.l_x}, {self.l_y})")
        if self.d <= 0.0:
            raise ValueError("thickness d must be positive")

    @property
    def volume_2d(self) -> float:
        return self.l_x * self.l_y


@dataclass(frozen=True)
class RateEstimate:
    """A transition-rate value with uncertainty and provenance tag."""

    gamma_rate: float
    stderr: float
    method: str               # MSD | GreenKubo | Analytic | Predicted
    storage_time: Optional[float] = None

    def __post_init__(self):
        if self.gamma_rate < 0.0 or self.stderr < 0.0:
            raise ValueError("rate and stderr must be nonnegative")


@dataclass
class SimulationState:
    """Mutable ensemble state: walker arrays plus winding accumulators.

    Positions are stored wrapped into [0, l_x) x [0, l_y); the alpha
    accumulators only ever change through step_ensemble, which uses
    pre-wrap displacements.
    """

    pos: np.ndarray           # (n, 2)
    vel: np.ndarray           # (n, 2)
    charges: np.ndarray       # (n,), +1 / -1
    geometry: TorusGeometry
    time: float
    alpha_x: float
    alpha_y: float
    rng: np.random.Generator
    seed_descriptor: dict = field(default_factory=dict)

    @property
    def walkers(self):
        return tuple(Walker(pos=self.pos[i].copy(), vel=self.vel[i].copy(),
                            charge=int(self.charges[i]))
                     for i in range(len(self.charges)))

    @property
    def net_charge(self) -> int:
        return int(self.charges.sum())


def initial_state(env: ThermalEnv, geometry: TorusGeometry, n_v: int,
                  n_a: int, master_seed: int = 0, stream_id: int = 0,
                  rng: Optional[np.random.Generator] = None,
                  init_velocities: str = "stationary") -> SimulationState:
    """Fresh neutral ensemble with positions uniform on the torus.

    Velocities are drawn from the stationary Maxwell distribution
    (variance T/M per axis) or start at zero ("zero"), in which case a
    burn-in of order 20/gamma is needed before sampling.
    """
    if n_v != n_a:
        raise ValueError(f"net vorticity must vanish: n_v={n_v} != n_a={n_a}")
    if n_v < 0:
        raise ValueError("counts must be nonnegative")
    if rng is None:
        rng = substream(master_seed, stream_id)
        descriptor = stream_descriptor(master_seed, stream_id)
    else:
        descriptor = {"scheme": "external"}
    n = n_v + n_a
    pos = rng.random((n, 2)) * [geometry.l_x, geometry.l_y]
    if init_velocities == "stationary":
        vel = rng.normal(0.0, np.sqrt(env.temperature / env.mass),
                         size=(n, 2))
    elif init_velocities == "zero":
        vel = np.zeros((n, 2))
    else:
        raise ValueError(f"unknown init_velocities {init_velocities!r}")
    charges = np.ones(n)
    charges[n_v:] = -1.0
    return SimulationState(pos=pos, vel=vel, charges=charges,
                           geometry=geometry, time=0.0,
                           alpha_x=0.0, alpha_y=0.0, rng=rng,
                           seed_descriptor=descriptor)


def step_ensemble(state: SimulationState, dt: float,
                  env: ThermalEnv) -> SimulationState:
    """Advance every walker by dt and update the winding accumulators.

    Noise layout per step: standard normals of shape (n, 2, 2) indexed
    [walker, axis, role], role 0 driving the velocity and role 1 the
    extra position noise.
    """
    prop = OUPropagator.build(env, dt)
    geo = state.geometry
    n = len(state.charges)
    if n:
        noise = state.rng.standard_normal((n, 2, 2))
        n1 = noise[..., 0]
        n2 = noise[..., 1]
        dxy = prop.drift * state.vel + prop.c1 * n1 + prop.c2 * n2
        state.vel = prop.decay * state.vel + prop.sigma_v * n1
        state.pos = (state.pos + dxy) % [geo.l_x, geo.l_y]
        state.alpha_x = state.alpha_x + (state.charges * dxy[:, 1]).sum() / geo.l_y
        state.alpha_y = state.alpha_y + (state.charges * dxy[:, 0]).sum() / geo.l_x
    state.time += dt
    return state


@dataclass
class ReplicaResult:
    """Everything one replica run emits for the estimators and exporters."""

    dt: float
    sample_stride: int
    times: np.ndarray          # (S+1,), includes t=0
    alpha_x: np.ndarray        # (S+1,)
    alpha_y: np.ndarray        # (S+1,)
    inc_x: np.ndarray          # (N,) per-step alpha_x increments
    inc_y: np.ndarray          # (N,)
    n_v: int
    n_a: int
    state: SimulationState
    vel_series: Optional[np.ndarray] = None       # (N, k) v_y, full rate
    chunk_vy2_sums: Optional[np.ndarray] = None   # per-chunk sum of v_y^2
    chunk_counts: Optional[np.ndarray] = None
    positions: Optional[np.ndarray] = None        # (P, n, 2) unwrapped
    position_times: Optional[np.ndarray] = None


def run_replica(env: ThermalEnv, geometry: TorusGeometry, n_v: int, n_a: int,
                dt: float, n_steps: int, master_seed: int = 0,
                stream_id: int = 0, *,
                rng: Optional[np.random.Generator] = None,
                sample_stride: int = 10,
                burn_in_steps: int = 0,
                init_velocities: str = "stationary",
                velocity_series_walkers: int = 0,
                position_stride: int = 0,
                chunk_steps: int = 8192) -> ReplicaResult:
    """Run one replica with chunked, vectorized propagation.

    Velocities follow the same exact single-step recurrence as
    step_ensemble; within a chunk the recurrence is evaluated by a
    first-order linear filter, which reproduces the stepwise arithmetic
    bit for bit. All noise is consumed in (step, walker, axis, role)
    order, so the trajectory is a pure function of (master_seed,
    stream_id) and the physical arguments.

    The winding accumulators are zeroed after burn-in; sampled series
    start at (t=0, alpha=0) at the first recorded instant.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    state = initial_state(env, geometry, n_v, n_a, master_seed, stream_id,
                          rng=rng, init_velocities=init_velocities)
    prop = OUPropagator.build(env, dt)
    gen = state.rng
    geo = geometry
    n = n_v + n_a
    charges = state.charges

    inc_x = np.zeros(n_steps)
    inc_y = np.zeros(n_steps)
    vel_series = (np.empty((n_steps, velocity_series_walkers))
                  if velocity_series_walkers else None)
    pos_records = []
    pos_record_steps = []
    vy2_sums = []
    counts = []

    vel = state.vel
    pos_unwrapped = state.pos.copy()

    def sweep(total, recording):
        nonlocal vel, pos_unwrapped
        done = 0
        while done < total:
            m = min(chunk_steps, total - done)
            if n == 0:
                done += m
                continue
            noise = gen.standard_normal((m, n, 2, 2))
            n1 = noise[..., 0]
            n2 = noise[..., 1]
            zi = (prop.decay * vel)[None, :, :]
            vseq, _ = lfilter([prop.sigma_v], [1.0, -prop.decay], n1,
                              axis=0, zi=zi)
            vprev = np.concatenate([vel[None, :, :], vseq[:-1]], axis=0)
            dxy = prop.drift * vprev + prop.c1 * n1 + prop.c2 * n2
            vel = vseq[-1].copy()
            if recording:
                inc_x[done:done + m] = \
                    (charges[None, :] * dxy[:, :, 1]).sum(axis=1) / geo.l_y
                inc_y[done:done + m] = \
                    (charges[None, :] * dxy[:, :, 0]).sum(axis=1) / geo.l_x
                if vel_series is not None:
                    vel_series[done:done + m] = \
                        vseq[:, :velocity_series_walkers, 1]
                vy2_sums.append(float((vseq[:, :, 1] ** 2).sum()))
                counts.append(m * n)
                if position_stride:
                    walked = pos_unwrapped + np.cumsum(dxy, axis=0)
                    # record where the global 1-based step index hits the stride
                    start = (position_stride - 1 - done) % position_stride
                    for i in range(start, m, position_stride):
                        pos_records.append(walked[i])
                        pos_record_steps.append(done + i + 1)
                    pos_unwrapped = walked[-1]
                else:
                    pos_unwrapped = pos_unwrapped + dxy.sum(axis=0)
            else:
                pos_unwrapped = pos_unwrapped + dxy.sum(axis=0)
            done += m

    sweep(burn_in_steps, recording=False)
    sweep(n_steps, recording=True)

    state.vel = vel
    state.pos = pos_unwrapped % [geo.l_x, geo.l_y]
    state.time = (burn_in_steps + n_steps) * dt

    alpha_x_full = np.cumsum(inc_x)
    alpha_y_full = np.cumsum(inc_y)
    state.alpha_x = float(alpha_x_full[-1]) if n_steps else 0.0
    state.alpha_y = float(alpha_y_full[-1]) if n_steps else 0.0

    sample_idx = np.arange(sample_stride - 1, n_steps, sample_stride)
    times = np.concatenate([[0.0], (sample_idx + 1) * dt])
    alpha_x = np.concatenate([[0.0], alpha_x_full[sample_idx]])
    alpha_y = np.concatenate([[0.0], alpha_y_full[sample_idx]])

    positions = np.array(pos_records) if pos_records else None
    position_times = (np.array(pos_record_steps, dtype=float) * dt
                      if pos_records else None)
    return ReplicaResult(
        dt=dt, sample_stride=sample_stride, times=times,
        alpha_x=alpha_x, alpha_y=alpha_y, inc_x=inc_x, inc_y=inc_y,
        n_v=n_v, n_a=n_a, state=state, vel_series=vel_series,
        chunk_vy2_sums=np.array(vy2_sums) if vy2_sums else None,
        chunk_counts=np.array(counts, dtype=float) if counts else None,
        positions=positions, position_times=position_times,
    )


def mean_population(env: ThermalEnv, geometry: TorusGeometry,
                    f0: float) -> float:
    """Boltzmann mean of the total vortex+antivortex count: (V/pi) M T e^-F0/T."""
    if f0 < 0.0:
        raise ValueError("vortex free energy f0 must be >= 0")
    if env.temperature <= 0.0:
        raise ValueError("population sampling requires T > 0")
    return (geometry.volume_2d / np.pi * env.mass * env.temperature
            * np.exp(-f0 / env.temperature))


def sample_population(env: ThermalEnv, geometry: TorusGeometry, f0: float,
                      rng: Optional[np.random.Generator] = None):
    """Draw (n_v, n_a): Poisson total, rounded to the nearest even, split equally.

    An odd total sits exactly between two even numbers; the tie is broken
    by a fair coin so the Boltzmann mean is preserved. A mean below 2
    simply makes (0, 0) the likely outcome ("empty ensemble"); it is not
    an error.
    """
    mean = mean_population(env, geometry, f0)
    if rng is None:
        rng = np.random.default_rng()
    total = int(rng.poisson(mean))
    if total % 2:
        total += 1 if rng.random() < 0.5 else -1
    return total // 2, total // 2


def even_mean_population(env: ThermalEnv, geometry: TorusGeometry,
                         f0: float):
    """Deterministic variant: the Boltzmann mean rounded to the nearest even."""
    mean = mean_population(env, geometry, f0)
    half = int(np.rint(mean / 2.0))
    return half, half


def analytic_rate(env: ThermalEnv, geometry: TorusGeometry, n_v: int,
                  n_a: int, axis: str = "x") -> RateEstimate:
    """Closed-form rate T (N_v+N_a) / (eta l^2), l = l_y for axis x."""
    if n_v < 0 or n_a < 0:
        raise ValueError("counts must be nonnegative")
    length = _axis_length(geometry, axis)
    rate = env.temperature * (n_v + n_a) / (env.eta * length**2)
    return RateEstimate(gamma_rate=rate, stderr=0.0, method="Analytic")


def predicted_rate(env: ThermalEnv, geometry: TorusGeometry, f0: float,
                   axis: str = "x") -> RateEstimate:
    """Design-level rate (M T^2 / pi eta) (l_x/l_y) e^-F0/T, plus storage time.

    The y-axis rate interchanges l_x and l_y.
    """
    if f0 < 0.0:
        raise ValueError("vortex free energy f0 must be >= 0")
    ratio = (geometry.l_x / geometry.l_y if axis == "x"
             else geometry.l_y / geometry.l_x)
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    t = env.temperature
    rate = env.mass * t**2 / (np.pi * env.eta) * ratio * np.exp(-f0 / t) \
        if t > 0.0 else 0.0
    storage = 1.0 / rate if rate > 0.0 else float("inf")
    return RateEstimate(gamma_rate=rate, stderr=0.0, method="Predicted",
                        storage_time=storage)


def _axis_length(geometry: TorusGeometry, axis: str) -> float:
    if axis == "x":
        return geometry.l_y
    if axis == "y":
        return geometry.l_x
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def _as_segments(series, min_segments):
    """Rows of independent series; a single series is cut into blocks."""
    arr = np.asarray(series, dtype=float)
    if arr.ndim == 1:
        block = arr.size // min_segments
        if block < 2:
            raise ValueError(
                f"series of length {arr.size} too short for "
                f"{min_segments} blocks")
        arr = arr[:block * min_segments].reshape(min_segments, block)
    elif arr.shape[0] < min_segments:
        raise ValueError(f"need >= {min_segments} replicas, got {arr.shape[0]}")
    return arr


def rate_from_msd(times, alphas, fit_window=None, *, gamma=None,
                  min_segments: int = 20, max_fit_points: int = 40
                  ) -> RateEstimate:
    """Rate from the slope of the winding-number MSD.

    Parameters
    ----------
    times : (S,) array
        Uniform sample times of the alpha series.
    alphas : (S,) or (R, S) array
        Winding-number samples; rows are independent replicas. A single
        row is split into min_segments consecutive blocks.
    fit_window : (t_min, t_max), optional
        Lag-time window for the least-squares line. Defaults to
        (10/gamma, duration/2), which requires passing gamma.
    gamma : float, optional
        Velocity relaxation rate eta/M, used for the default window and
        the diffusive-regime precondition t_min >= 10/gamma.

    Returns
    -------
    RateEstimate
        method="MSD"; stderr is the standard error over replica slopes.
    """
    times = np.asarray(times, dtype=float)
    dt_s = times[1] - times[0]
    duration = times[-1] - times[0]
    if fit_window is None:
        if gamma is None:
            raise ValueError("need fit_window or gamma for the default")
        fit_window = (10.0 / gamma, duration / 2.0)
    t_min, t_max = fit_window
    if gamma is not None and t_min < 10.0 / gamma - 1e-12:
        raise ValueError(f"fit window starts at {t_min}, below the "
                         f"diffusive regime 10/gamma = {10.0 / gamma}")

    rows = _as_segments(alphas, min_segments)
    n_cols = rows.shape[1]
    lag_lo = max(1, int(round(t_min / dt_s)))
    lag_hi = min(n_cols - 1, int(round(t_max / dt_s)))
    if lag_hi <= lag_lo:
        raise ValueError(f"fit window ({t_min}, {t_max}) leaves no usable "
                         f"lags at sample spacing {dt_s}")
    lags = np.unique(np.linspace(lag_lo, lag_hi,
                                 min(max_fit_points, lag_hi - lag_lo + 1)
                                 ).astype(int))
    origins = np.arange(0, n_cols - lag_hi, lag_hi)

    rates = np.empty(rows.shape[0])
    for i, row in enumerate(rows):
        msd = np.array([np.mean((row[origins + L] - row[origins]) ** 2)
                        for L in lags])
        slope = np.polyfit(lags * dt_s, msd, 1)[0]
        rates[i] = max(slope / 2.0, 0.0)
    stderr = (float(np.std(rates, ddof=1) / np.sqrt(len(rates)))
              if len(rates) > 1 else 0.0)
    return RateEstimate(gamma_rate=float(np.mean(rates)), stderr=stderr,
                        method="MSD")


def rate_from_green_kubo(increments, dt: float, cutoff: float,
                         min_segments: int = 20) -> RateEstimate:
    """Rate from the integrated autocorrelation of alpha-dot.

    Gamma = (1/2) [C(0) dt + 2 sum_k>=1 C(k) dt] with C the lag
    autocorrelation of Delta(alpha)/dt, summed to the cutoff lag time.
    The rectangle sum telescopes to the exact long-time MSD growth rate
    for any dt, so no small-dt extrapolation is needed.

    increments may be (N,) (split into min_segments blocks for the error
    bar) or (R, N) per-replica rows.
    """
    rows = _as_segments(increments, min_segments)
    n_cols = rows.shape[1]
    lag_max = int(round(cutoff / dt))
    if lag_max >= n_cols:
        raise ValueError(f"cutoff {cutoff} (lag {lag_max}) exceeds series "
                         f"length {n_cols}")
    rates = np.empty(rows.shape[0])
    for i, row in enumerate(rows):
        adot = row / dt
        acf = np.array([np.dot(adot[:n_cols - k], adot[k:]) / (n_cols - k)
                        for k in range(lag_max + 1)])
        rates[i] = max(dt * (0.5 * acf[0] + acf[1:].sum()), 0.0)
    stderr = (float(np.std(rates, ddof=1) / np.sqrt(len(rates)))
              if len(rates) > 1 else 0.0)
    return RateEstimate(gamma_rate=float(np.mean(rates)), stderr=stderr,
                        method="GreenKubo")


def winding_of_vacuum(n_x: int, n_y: int, geometry: TorusGeometry,
                      grid: int = 8, g_coupling: float = 1.0):
    """Winding numbers of the classical vacuum gauge field, by grid integration.

    The vacuum has constant A = (2 pi / g)(n_x/l_x, n_y/l_y); the volume
    integrals g/(2 pi l_y d) int A_x and g/(2 pi l_x d) int A_y then
    return exactly (n_x, n_y) for any resolution. The integral really is
    evaluated on the grid; g cancels.
    """
    if grid < 2:
        raise ValueError("grid must have at least 2 points per axis")
    geo = geometry
    ax = 2.0 * np.pi / g_coupling * n_x / geo.l_x
    ay = 2.0 * np.pi / g_coupling * n_y / geo.l_y
    cell = (geo.l_x / grid) * (geo.l_y / grid) * geo.d
    ax_grid = np.full((grid, grid), ax)
    ay_grid = np.full((grid, grid), ay)
    alpha_x = g_coupling / (2.0 * np.pi * geo.l_y * geo.d) \
        * float(ax_grid.sum()) * cell
    alpha_y = g_coupling / (2.0 * np.pi * geo.l_x * geo.d) \
        * float(ay_grid.sum()) * cell
    return alpha_x, alpha_y
