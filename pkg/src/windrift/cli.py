"""Experiment orchestration and deterministic file output.

The only module with side effects. Artifacts:

* trajectory.csv   header t,alpha_x,alpha_y (replica 0, sampled)
* summary.json     rate estimates, per-replica records, config echo, seed
* fields.csv       header r,B,Ex,Ey,E2 (fields subcommand)
* design.json      design-calculator report

Numbers are serialized with 17 significant digits so binary doubles
round-trip exactly; JSON keys are sorted. Reruns with the same config and
seed are byte-identical except for the timestamp field, regardless of how
many worker lanes execute the replicas.
"""

import argparse
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import design as design_mod
from .bessel import bessel_k
from .config import ConfigError, RunConfig, parse_config
from .ensemble import (RateEstimate, TorusGeometry, analytic_rate,
                       even_mean_population, mean_population, predicted_rate,
                       rate_from_green_kubo, rate_from_msd, run_replica)
from .fields import field_table, helmholtz_residual
from .langevin import ThermalEnv
from .materials import classify_regime, derive_scales
from .rng import substream


# ---------------------------------------------------------------------------
# deterministic serialization

def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def json_text(obj, indent: int = 0) -> str:
    """Render JSON with sorted keys and 17-significant-digit floats."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key in sorted(obj):
            rendered = json_text(obj[key], indent + 1)
            items.append(f'{pad}  "{key}": {rendered}')
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [pad + "  " + json_text(v, indent + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        import json as _json
        return _json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj)}")


def write_json(path: Path, obj) -> None:
    path.write_text(json_text(obj) + "\n")


def write_csv(path: Path, header, columns) -> None:
    cols = [np.asarray(c, dtype=float) for c in columns]
    lines = [",".join(header)]
    for i in range(len(cols[0])):
        lines.append(",".join(format(c[i], ".17g") for c in cols))
    path.write_text("\n".join(lines) + "\n")


def _rate_dict(est: RateEstimate) -> dict:
    out = {"gamma": est.gamma_rate, "stderr": est.stderr,
           "method": est.method}
    if est.storage_time is not None:
        out["storage_time"] = est.storage_time
    return out


# ---------------------------------------------------------------------------
# subcommand runners

def _resolve_counts(config: RunConfig):
    """Per-replica (n_v, n_a, rng); boltzmann mode draws from the replica stream."""
    pop = config.population
    counts = []
    rngs = []
    for r in range(config.replicas):
        rng = substream(config.master_seed, r)
        if pop.mode == "fixed":
            pair = (pop.n_v, pop.n_a)
        elif pop.mode == "mean":
            pair = even_mean_population(config.env, config.geometry, pop.f0)
        else:  # boltzmann: Poisson draw first, then the stream feeds the run
            from .ensemble import sample_population
            pair = sample_population(config.env, config.geometry, pop.f0,
                                     rng=rng)
        counts.append(pair)
        rngs.append(rng)
    return counts, rngs


def _run_ensemble(config: RunConfig, lanes: int):
    n_steps = int(round(config.total_time / config.dt))
    burn_steps = int(round(config.burn_in / config.dt))
    counts, rngs = _resolve_counts(config)

    def one(r):
        n_v, n_a = counts[r]
        return run_replica(config.env, config.geometry, n_v, n_a,
                           config.dt, n_steps, rng=rngs[r],
                           sample_stride=config.sample_stride,
                           burn_in_steps=burn_steps)

    with ThreadPoolExecutor(max_workers=lanes) as pool:
        results = list(pool.map(one, range(config.replicas)))
    return results, counts


def _rates_summary(config: RunConfig, results, counts) -> dict:
    times = results[0].times
    window = (config.fit_t_min, config.fit_t_max)
    gamma = config.env.gamma
    mean_nv = float(np.mean([c[0] for c in counts]))
    mean_na = float(np.mean([c[1] for c in counts]))

    rates = {}
    per_replica = {}
    for axis, alpha_key, inc_key in (("x", "alpha_x", "inc_x"),
                                     ("y", "alpha_y", "inc_y")):
        alphas = np.stack([getattr(res, alpha_key) for res in results])
        incs = np.stack([getattr(res, inc_key) for res in results])
        min_seg = min(20, config.replicas)
        msd = rate_from_msd(times, alphas, window, gamma=gamma,
                            min_segments=min_seg)
        gk = rate_from_green_kubo(incs, config.dt, config.gk_cutoff,
                                  min_segments=min_seg)
        analytic = analytic_rate(config.env, config.geometry,
                                 mean_nv, mean_na, axis=axis)
        axis_rates = {"msd": _rate_dict(msd), "green_kubo": _rate_dict(gk),
                      "analytic": _rate_dict(analytic)}
        if config.f0 is not None:
            axis_rates["predicted"] = _rate_dict(
                predicted_rate(config.env, config.geometry, config.f0,
                               axis=axis))
        else:
            axis_rates["predicted"] = None
        rates[axis] = axis_rates
        per_replica[axis] = {
            "msd": [rate_from_msd(times, getattr(res, alpha_key), window,
                                  gamma=gamma, min_segments=1).gamma_rate
                    for res in results],
            "green_kubo": [rate_from_green_kubo(getattr(res, inc_key),
                                                config.dt, config.gk_cutoff,
                                                min_segments=1).gamma_rate
                           for res in results],
        }
    return {
        "rates": rates,
        "per_replica_rates": per_replica,
        "population": {
            "per_replica_n_v": [c[0] for c in counts],
            "per_replica_n_a": [c[1] for c in counts],
            "mean_total": mean_nv + mean_na,
            "empty_ensemble": mean_nv + mean_na == 0,
        },
        "final_alpha_x": [res.state.alpha_x for res in results],
        "final_alpha_y": [res.state.alpha_y for res in results],
    }


def _config_echo(config: RunConfig) -> dict:
    """Physics-relevant config fields (excludes output paths and lane count)."""
    echo = {"subcommand": config.subcommand, "dt": config.dt,
            "total_time": config.total_time, "burn_in": config.burn_in,
            "replicas": config.replicas,
            "sample_stride": config.sample_stride,
            "fit_t_min": config.fit_t_min, "fit_t_max": config.fit_t_max,
            "green_kubo_cutoff": config.gk_cutoff}
    if config.env:
        echo["env"] = {"mass": config.env.mass, "eta": config.env.eta,
                       "temperature": config.env.temperature}
    if config.geometry:
        echo["geometry"] = {"l_x": config.geometry.l_x,
                            "l_y": config.geometry.l_y,
                            "d": config.geometry.d}
    if config.population:
        echo["population"] = {"mode": config.population.mode,
                              "n_v": config.population.n_v,
                              "n_a": config.population.n_a,
                              "f0": config.population.f0}
    return echo


def run_rates(config: RunConfig, out_dir: Path, lanes: int) -> dict:
    results, counts = _run_ensemble(config, lanes)
    summary = {
        "schema": "windrift.rates.v1",
        "master_seed": config.master_seed,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "config_echo": _config_echo(config),
    }
    summary.update(_rates_summary(config, results, counts))
    traj = results[0]
    write_csv(out_dir / "trajectory.csv", ["t", "alpha_x", "alpha_y"],
              [traj.times, traj.alpha_x, traj.alpha_y])
    write_json(out_dir / "summary.json", summary)
    return summary


def run_simulate(config: RunConfig, out_dir: Path, lanes: int) -> dict:
    results, counts = _run_ensemble(config, lanes)
    summary = {
        "schema": "windrift.simulate.v1",
        "master_seed": config.master_seed,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "config_echo": _config_echo(config),
        "population": {
            "per_replica_n_v": [c[0] for c in counts],
            "per_replica_n_a": [c[1] for c in counts],
        },
        "final_alpha_x": [res.state.alpha_x for res in results],
        "final_alpha_y": [res.state.alpha_y for res in results],
    }
    traj = results[0]
    write_csv(out_dir / "trajectory.csv", ["t", "alpha_x", "alpha_y"],
              [traj.times, traj.alpha_x, traj.alpha_y])
    write_json(out_dir / "summary.json", summary)
    return summary


def run_fields(config: RunConfig, out_dir: Path, lanes: int) -> dict:
    scales = derive_scales(config.material, c_light=config.c_light)
    spec = config.field_table
    r_min = spec.r_min if spec.r_min is not None else scales.xi
    r_max = spec.r_max if spec.r_max is not None else 5.0 * scales.delta
    if r_min >= r_max:
        raise ConfigError("'fields.r_min' must be below 'fields.r_max'")
    r = np.geomspace(r_min, r_max, spec.n_points)
    table = field_table(scales, r, spec.speed, config.c_light,
                        angle=np.deg2rad(spec.angle_deg))
    write_csv(out_dir / "fields.csv", ["r", "B", "Ex", "Ey", "E2"],
              [table[:, i] for i in range(5)])
    regime = classify_regime(config.material, scales)
    summary = {
        "schema": "windrift.fields.v1",
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "scales": {
            "delta": scales.delta, "xi": scales.xi, "psi0": scales.psi0,
            "kappa": scales.kappa, "flux_quantum": scales.flux_quantum,
            "h_c2": scales.h_c2, "mass": scales.mass, "eta": scales.eta,
            "gamma": scales.gamma,
            "estimate_fields": list(scales.estimate_fields),
        },
        "regime": {
            "extreme_type_ii": regime.extreme_type_ii,
            "dirty_limit": regime.dirty_limit,
            "type_ii_ratio": regime.type_ii_ratio,
            "dirty_ratio": regime.dirty_ratio,
        },
        "grid": {"r_min": r_min, "r_max": r_max, "n_points": spec.n_points,
                 "speed": spec.speed, "angle_deg": spec.angle_deg},
    }
    write_json(out_dir / "summary.json", summary)
    return summary


def run_design(config: RunConfig, out_dir: Path, lanes: int) -> dict:
    dev = config.device
    split = design_mod.level_splitting(dev, r_unit_m=config.r_unit_m)
    flux_quantum = 2.0 * math.pi / config.design_g_coupling
    current = design_mod.loop_current_scale(dev.l_x, dev.l_y, flux_quantum,
                                            config.c_light) \
        if dev.l_x > dev.l_y else None
    report = {
        "schema": "windrift.design.v1",
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "level_splitting": {
            "energy_natural": split.energy_natural,
            "wavelength": split.wavelength,
            "energy_si_joule": split.energy_si_joule,
            "wavelength_si_m": split.wavelength_si_m,
            "wavelength_si_mm": split.wavelength_si_m * 1e3,
            "label": split.label,
        },
        "boltzmann_suppression": design_mod.solid_torus_suppression(dev),
        "equivalence_classes": {
            "level_1": design_mod.equivalence_class(dev.n1, 0),
            "level_2": design_mod.equivalence_class(dev.n2, 0),
            "distinct": (design_mod.equivalence_class(dev.n1, 0)
                         != design_mod.equivalence_class(dev.n2, 0)),
        },
        "loop_current": (None if current is None else {
            "inductance": current.inductance,
            "current": current.current,
            "label": current.label,
        }),
        "anyon_prefactor_log": (
            design_mod.anyon_prefactor_log(config.anyon.l_prime,
                                           config.anyon.rho_min)
            if config.anyon else None),
    }
    write_json(out_dir / "design.json", report)
    return report


def run_selftest(config: RunConfig, out_dir: Path, lanes: int) -> dict:
    """Fast internal consistency checks; one PASS/FAIL line each."""
    from .materials import MaterialParams
    checks = []

    def check(name, ok):
        checks.append((name, bool(ok)))
        print(f"{'PASS' if ok else 'FAIL'}  {name}")

    params = MaterialParams(zeta=0.5, a_coeff=1.0, b_coeff=50.0,
                            g_coupling=0.1, sigma=1.0, d_thickness=1.0)
    scales = derive_scales(params)
    check("derived scales (psi0, xi, delta)",
          np.allclose([scales.psi0, scales.xi, scales.delta],
                      [0.1, 0.5, 100.0], rtol=1e-12))
    check("bessel K0(1), K1(1)",
          abs(bessel_k(0, 1.0) - 0.42102443824070834) < 1e-12
          and abs(bessel_k(1, 1.0) - 0.6019072301972346) < 1e-12)
    check("screening equation residual at r=delta",
          helmholtz_residual(scales.delta, scales, scales.delta / 1000.0)
          < 1e-4 * abs(bessel_k(0, 1.0) / (params.g_coupling
                                           * scales.delta**2)))
    env = ThermalEnv(mass=1.0, eta=2.0, temperature=1.0)
    geo = TorusGeometry(l_x=10.0, l_y=10.0)
    pred = predicted_rate(env, geo, 0.5)
    # identity holds exactly at the continuous Boltzmann mean
    half = mean_population(env, geo, 0.5) / 2.0
    exact = analytic_rate(env, geo, half, half)
    check("predicted rate equals analytic rate at the Boltzmann mean",
          abs(pred.gamma_rate / exact.gamma_rate - 1.0) < 1e-12)
    res = run_replica(env, geo, 8, 8, 0.05, 4000, master_seed=7, stream_id=0)
    check("ensemble runs and stays neutral", res.state.net_charge == 0)
    ok = all(flag for _, flag in checks)
    return {"passed": ok,
            "checks": [{"name": n, "ok": o} for n, o in checks]}


_RUNNERS = {"simulate": run_simulate, "rates": run_rates,
            "fields": run_fields, "design": run_design,
            "selftest": run_selftest}


def run(config: RunConfig, lanes: int = 1, output_dir=None) -> dict:
    """Execute a validated config; returns the summary dict."""
    out_dir = Path(output_dir if output_dir is not None else config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return _RUNNERS[config.subcommand](config, out_dir, lanes)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="windrift",
        description="Vortex-diffusion winding-number transport: simulate, "
                    "estimate rates, export field profiles, size devices.")
    parser.add_argument("subcommand",
                        choices=["simulate", "rates", "fields", "design",
                                 "selftest"])
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int, default=None,
                        help="override master_seed")
    parser.add_argument("--out", default=None, help="override output_dir")
    parser.add_argument("--lanes", type=int, default=1,
                        help="parallel replica lanes (does not affect "
                             "results)")
    args = parser.parse_args(argv)

    try:
        text = Path(args.config).read_text() if args.config else "{}"
        config = parse_config(text, args.subcommand)
        if args.seed is not None:
            from dataclasses import replace
            config = replace(config, master_seed=args.seed)
        summary = run(config, lanes=args.lanes, output_dir=args.out)
    except (ConfigError, ValueError, OSError) as err:
        print(f"windrift: error: {err}", file=sys.stderr)
        return 2
    if args.subcommand == "selftest" and not summary.get("passed", True):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
