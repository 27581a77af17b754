"""Single-vortex Langevin dynamics: M r'' + eta r' = f(t).

The force is Gaussian white noise with <f_i(t) f_j(t')> =
2 eta T delta_ij delta(t-t'), the unique normalization for which the
stationary velocity variance is T/M per axis (equipartition).

There is no potential term, so the velocity is an Ornstein-Uhlenbeck
process and the position-velocity update over any finite dt has an exact
Gaussian propagator. Stepping uses that propagator, never Euler-Maruyama:
results carry no time-step bias, only statistics.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import curve_fit


@dataclass(frozen=True)
class ThermalEnv:
    """Vortex mass, viscosity, temperature; gamma = eta/mass is cached."""

    mass: float
    eta: float
    temperature: float

    def __post_init__(self):
        for name in ("mass", "eta"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"ThermalEnv.{name} must be positive")
        if self.temperature < 0.0:
            raise ValueError("ThermalEnv.temperature must be >= 0")

    @property
    def gamma(self) -> float:
        return self.eta / self.mass


@dataclass(frozen=True)
class Walker:
    """One vortex (charge +1) or antivortex (charge -1)."""

    pos: np.ndarray   # (x, y)
    vel: np.ndarray   # (vx, vy)
    charge: int

    def __post_init__(self):
        if self.charge not in (+1, -1):
            raise ValueError(f"charge must be +1 or -1, got {self.charge}")


@dataclass(frozen=True)
class OUPropagator:
    """Exact one-step propagator coefficients for step dt.

    v' = decay * v + sigma_v * n1
    dx = drift * v + c1 * n1 + c2 * n2

    with n1, n2 independent standard normals per axis. (c1, c2) is the
    Cholesky factor of the exact position-noise covariance, so the pair
    (dx, v') has the exact joint distribution of the free underdamped
    process for any dt.
    """

    dt: float
    decay: float
    drift: float
    sigma_v: float
    c1: float
    c2: float

    @classmethod
    def build(cls, env: ThermalEnv, dt: float) -> "OUPropagator":
        if dt <= 0.0:
            raise ValueError(f"dt must be positive, got {dt}")
        gamma = env.gamma
        x = gamma * dt
        decay = np.exp(-x)
        drift = -np.expm1(-x) / gamma
        t_over_m = env.temperature / env.mass
        var_v = t_over_m * (-np.expm1(-2.0 * x))
        cov_xv = (t_over_m / gamma) * np.expm1(-x) ** 2
        # 2x - 3 + 4e^-x - e^-2x cancels catastrophically for small x
        if x < 1e-2:
            f = x**3 * (2.0 / 3.0 + x * (-0.5 + x * (7.0 / 30.0
                        + x * (-1.0 / 12.0 + x * (31.0 / 1260.0)))))
        else:
            f = 2.0 * x - 3.0 + 4.0 * np.exp(-x) - np.exp(-2.0 * x)
        var_x = t_over_m / gamma**2 * f
        sigma_v = np.sqrt(var_v)
        if sigma_v > 0.0:
            c1 = cov_xv / sigma_v
            c2 = np.sqrt(max(var_x - c1 * c1, 0.0))
        else:
            c1 = c2 = 0.0
        return cls(dt=dt, decay=decay, drift=drift, sigma_v=sigma_v,
                   c1=c1, c2=c2)

    def advance(self, vel, n1, n2):
        """Return (displacement, new velocity); shapes broadcast over vel."""
        dx = self.drift * vel + self.c1 * n1 + self.c2 * n2
        new_vel = self.decay * vel + self.sigma_v * n1
        return dx, new_vel


def step_walker(w: Walker, dt: float, env: ThermalEnv, noise) -> Walker:
    """Advance one walker by dt with the exact propagator.

    Parameters
    ----------
    noise : array_like, shape (2, 2)
        Standard normals, noise[axis, role]: role 0 feeds the velocity
        update, role 1 the extra position noise.
    """
    prop = OUPropagator.build(env, dt)
    noise = np.asarray(noise, dtype=float)
    if noise.shape != (2, 2):
        raise ValueError(f"noise must have shape (2, 2), got {noise.shape}")
    dx, new_vel = prop.advance(w.vel, noise[:, 0], noise[:, 1])
    return Walker(pos=w.pos + dx, vel=new_vel, charge=w.charge)


@dataclass(frozen=True)
class AcfFit:
    """Exponential fit C(tau) = amplitude * exp(-rate * tau)."""

    amplitude: float
    rate: float
    amplitude_err: float
    rate_err: float


def velocity_autocorrelation(series, dt: float, max_lag: int
                             ) -> Tuple[np.ndarray, np.ndarray, AcfFit]:
    """Lagged velocity products and an exponential fit.

    Parameters
    ----------
    series : array_like, shape (N,) or (R, N)
        Sampled velocity component; rows are independent series whose
        correlations are averaged.
    dt : float
        Sample spacing.
    max_lag : int
        Largest lag (in samples); series length must be >= 10 * max_lag.

    Returns
    -------
    (tau, c, fit)
        Lag times, unbiased product averages, and the fitted
        amplitude/decay with standard errors.
    """
    series = np.atleast_2d(np.asarray(series, dtype=float))
    n = series.shape[1]
    if n < 10 * max_lag:
        raise ValueError(f"series length {n} < 10 * max_lag = {10 * max_lag}")
    c = np.empty(max_lag + 1)
    for k in range(max_lag + 1):
        c[k] = np.mean(series[:, :n - k] * series[:, k:]) if k else \
            np.mean(series * series)
    tau = np.arange(max_lag + 1) * dt

    def model(t, amp, rate):
        return amp * np.exp(-rate * t)

    rate0 = _initial_rate_guess(c, dt)
    try:
        popt, pcov = curve_fit(model, tau, c, p0=(c[0], rate0),
                               maxfev=10000)
        perr = np.sqrt(np.diag(pcov))
    except RuntimeError:
        popt, perr = (c[0], rate0), (np.nan, np.nan)
    fit = AcfFit(amplitude=float(popt[0]), rate=float(popt[1]),
                 amplitude_err=float(perr[0]), rate_err=float(perr[1]))
    return tau, c, fit


def _initial_rate_guess(c, dt):
    """Decay-rate seed: first 1/e crossing, else one sample interval."""
    below = np.nonzero(c < c[0] / np.e)[0]
    if below.size and below[0] > 0:
        return 1.0 / (below[0] * dt)
    return 1.0 / dt


@dataclass(frozen=True)
class DiffusionCheck:
    """Measured diffusion coefficient against the Einstein value T/eta."""

    d_measured: float
    d_expected: float
    ratio: float
    ratio_err: float


def einstein_diffusion_check(positions, dt: float, env: ThermalEnv,
                             fit_window: Optional[Tuple[float, float]] = None
                             ) -> DiffusionCheck:
    """Compare the MSD slope of free trajectories with D = T/eta.

    Parameters
    ----------
    positions : array_like, shape (S, 2) or (S, n, 2)
        Unwrapped positions sampled every dt (S samples, n walkers).
    fit_window : (t_min, t_max), optional
        Lag window for the slope fit; defaults to (10/gamma, 50/gamma).

    Returns
    -------
    DiffusionCheck
        Per-coordinate, per-walker slopes are averaged; the quoted error
        is the standard error of that scatter.
    """
    pos = np.asarray(positions, dtype=float)
    if pos.ndim == 2:
        pos = pos[:, None, :]
    n_samples = pos.shape[0]
    gamma = env.gamma
    duration = (n_samples - 1) * dt
    if duration < 10.0 / gamma:
        raise ValueError(f"trajectory duration {duration} < 10/gamma "
                         f"= {10.0 / gamma}")
    if fit_window is None:
        fit_window = (10.0 / gamma, min(50.0 / gamma, duration / 2.0))
    lag_lo = max(1, int(round(fit_window[0] / dt)))
    lag_hi = min(n_samples - 1, int(round(fit_window[1] / dt)))
    n_lags = min(24, lag_hi - lag_lo + 1)
    lags = np.unique(np.linspace(lag_lo, lag_hi, n_lags).astype(int))

    slopes = []
    for w in range(pos.shape[1]):
        for axis in range(2):
            x = pos[:, w, axis]
            msd = np.array([np.mean((x[L:] - x[:-L]) ** 2) for L in lags])
            slope = np.polyfit(lags * dt, msd, 1)[0]
            slopes.append(slope / 2.0)
    slopes = np.asarray(slopes)
    d_measured = float(np.mean(slopes))
    d_expected = env.temperature / env.eta
    if len(slopes) > 1:
        err = float(np.std(slopes, ddof=1) / np.sqrt(len(slopes)))
    else:
        err = float("nan")
    if d_expected > 0.0:
        ratio, ratio_err = d_measured / d_expected, err / d_expected
    else:
        ratio = 1.0 if d_measured == 0.0 else float("inf")
        ratio_err = 0.0
    return DiffusionCheck(d_measured=d_measured, d_expected=d_expected,
                          ratio=ratio, ratio_err=ratio_err)
