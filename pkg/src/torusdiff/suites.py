"""Named verification suites and the configuration-driven runner.

Each suite exercises one certified statement of the torus calculus at desk
scale and returns a SuiteReport.  Suites draw every random object from
seeds recorded in their parameters, so reports are reproducible bit for
bit; trial loops go through _map_trials, which runs them in a thread pool
unless `serial` is set.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import calculus, geodesic
from .algebra import divide, multiply, one_plus, quotient_rule_residual, uset_membership
from .diffeo import (
    Diffeo,
    chain_rule_residual,
    compose_diffeo,
    compose_function,
    inverse_derivative_residual,
    invert,
    make_diffeo,
)
from .grid import (
    GridFunction,
    GridSpec,
    Spectrum,
    differentiate,
    forward_transform,
    fourier_truncate,
    inverse_transform,
    random_field,
    refine,
)
from .norms import (
    cr_norm,
    embedding_constant,
    hs_norm,
    hs_norm_derivative,
    norm_equivalence_constant,
    slobodeckij_seminorm,
)
from .report import SCHEMA_VERSION, SuiteReport

TWO_PI = 2.0 * np.pi


def _map_trials(fn, items, serial: bool):
    if serial:
        return [fn(item) for item in items]
    with ThreadPoolExecutor() as pool:
        return list(pool.map(fn, items))


def _require_positive(params: dict, keys: tuple[str, ...]):
    for key in keys:
        value = params[key]
        if not np.all(np.asarray(value, dtype=float) > 0):
            raise ValueError(f"tolerance {key!r} must be positive, got {value}")


def _sine_displacement(spec: GridSpec, amplitude: float) -> Spectrum:
    """u(x) = amplitude * sin(2 pi x) as a displacement spectrum (dim 1)."""
    coeffs = np.zeros((1,) + spec.shape, dtype=np.complex128)
    coeffs[0, 1] = amplitude / (2.0 * 1j)
    coeffs[0, -1] = -amplitude / (2.0 * 1j)
    return Spectrum(spec, coeffs)


def _cosine_field(spec: GridSpec, k: int, amplitude: float = 1.0) -> GridFunction:
    x = spec.axis_coordinates()
    return GridFunction(spec, amplitude * np.cos(TWO_PI * k * x)[None])


def gradient_sup(u: Spectrum, refine_factor: int = 4) -> float:
    """sup over the refined grid of the operator norm of du."""
    from .diffeo import _det_and_opnorm, _displacement_gradient

    fine = refine(_displacement_gradient(u), refine_factor)
    _, opnorm = _det_and_opnorm(fine.values, u.spec.dim)
    return float(np.max(opnorm))


def random_certified_displacement(
    spec: GridSpec, seed: int, modes: int, amplitude: float, s: float = 3.0
) -> Spectrum:
    """Band-limited random displacement scaled to sup|du|_op = amplitude."""
    w = random_field(spec, s, seed, components=spec.dim)
    w = fourier_truncate(w, modes, mode="sharp")
    top = gradient_sup(w)
    if top == 0.0:
        raise ValueError("degenerate random displacement")
    return Spectrum(spec, (amplitude / top) * w.coeffs)


# ---------------------------------------------------------------------------
# norm suites


def run_norm_equivalence(params: dict) -> SuiteReport:
    p = {
        "s_values": [1, 2],
        "size": 64,
        "dim": 1,
        "trials": 100,
        "seed": 1,
        "tol_identity": 1e-10,
        "tol_bracket": 1e-12,
        "serial": False,
    }
    p.update(params)
    _require_positive(p, ("tol_identity", "tol_bracket"))
    spec = GridSpec(p["dim"], p["size"])
    trials, aggregate = [], {}
    passed = True
    for s in p["s_values"]:
        bound = norm_equivalence_constant(s, spec.dim)

        def one(i, s=s):
            F = random_field(spec, float(s), p["seed"] + i)
            ratio = hs_norm(F, float(s)) / hs_norm_derivative(inverse_transform(F), s)
            return {"s": s, "seed": p["seed"] + i, "ratio": ratio}

        records = _map_trials(one, range(p["trials"]), p["serial"])
        ratios = np.array([rec["ratio"] for rec in records])
        if s <= 1:
            ok = bool(np.max(np.abs(ratios - 1.0)) < p["tol_identity"])
        else:
            ok = bool(
                np.all(ratios >= 1.0 - p["tol_bracket"])
                and np.all(ratios <= bound * (1.0 + p["tol_bracket"]))
            )
        aggregate[f"s={s}"] = {
            "min_ratio": float(np.min(ratios)),
            "max_ratio": float(np.max(ratios)),
            "bound": bound,
            "pass": ok,
        }
        trials.extend(records)
        passed = passed and ok
    return SuiteReport("norm-equivalence", p, trials, aggregate, passed)


def run_embedding(params: dict) -> SuiteReport:
    p = {
        "s": 1.0,
        "r": 0,
        "size": 64,
        "dim": 1,
        "trials": 100,
        "seed": 3,
        "serial": False,
    }
    p.update(params)
    spec = GridSpec(p["dim"], p["size"])
    bound = embedding_constant(spec, p["s"])

    def one(i):
        F = random_field(spec, p["s"] + p["r"], p["seed"] + i)
        ratio = cr_norm(inverse_transform(F), p["r"]) / hs_norm(F, p["s"] + p["r"])
        return {"seed": p["seed"] + i, "ratio": ratio}

    records = _map_trials(one, range(p["trials"]), p["serial"])
    ratios = [rec["ratio"] for rec in records]
    aggregate = {
        "max_ratio": max(ratios),
        "min_ratio": min(ratios),
        "bound": bound,
        "violations": int(sum(r > bound for r in ratios)),
    }
    passed = aggregate["violations"] == 0
    return SuiteReport("embedding", p, records, aggregate, passed)


def run_algebra(params: dict) -> SuiteReport:
    p = {
        "s": 2.0,
        "s_prime": 1.0,
        "sizes": [64, 128, 256],
        "dim": 1,
        "trials": 200,
        "seed": 9,
        "stability": 0.10,
        "k_max": None,
        "serial": False,
    }
    p.update(params)
    _require_positive(p, ("stability",))
    envelopes = {}
    trials = []
    for size in p["sizes"]:
        spec = GridSpec(p["dim"], size)

        def one(i):
            f = random_field(spec, p["s"], p["seed"] + 2 * i)
            g = random_field(spec, p["s_prime"], p["seed"] + 2 * i + 1)
            fg = multiply(inverse_transform(f), inverse_transform(g))
            ratio = hs_norm(forward_transform(fg), p["s_prime"]) / (
                hs_norm(f, p["s"]) * hs_norm(g, p["s_prime"])
            )
            return {"size": size, "trial": i, "ratio": ratio}

        records = _map_trials(one, range(p["trials"]), p["serial"])
        envelopes[size] = max(rec["ratio"] for rec in records)
        trials.append({"size": size, "envelope": envelopes[size]})
    values = np.array(list(envelopes.values()))
    mean = float(np.mean(values))
    spread = float(np.max(np.abs(values - mean)) / mean)
    passed = spread <= p["stability"]
    if p["k_max"] is not None:
        passed = passed and bool(np.all(values <= p["k_max"]))
    aggregate = {
        "envelopes": {str(k): v for k, v in envelopes.items()},
        "mean": mean,
        "relative_spread": spread,
        "stability": p["stability"],
        "k_max": p["k_max"],
    }
    return SuiteReport("algebra", p, trials, aggregate, passed)


def run_quotient_rule(params: dict) -> SuiteReport:
    p = {
        "size": 128,
        "dim": 1,
        "epsilon": 0.5,
        "seed": 21,
        "tol_bundled": 1e-8,
        "tol_closure": 1e-8,
        "tol_random_scale": 1e-6,
        "serial": False,
    }
    p.update(params)
    _require_positive(p, ("tol_bundled", "tol_closure", "tol_random_scale"))
    spec = GridSpec(p["dim"], p["size"])
    x = spec.axis_coordinates()
    bundled = GridFunction(spec, (0.2 * np.sin(TWO_PI * x))[None])
    res_bundled = quotient_rule_residual(bundled, bundled, p["epsilon"])

    f_rand = inverse_transform(
        fourier_truncate(random_field(spec, 2.0, p["seed"]), spec.size // 4, "sharp")
    )
    g_raw = inverse_transform(
        fourier_truncate(random_field(spec, 2.0, p["seed"] + 1), spec.size // 4, "sharp")
    )
    g_rand = GridFunction(spec, 0.3 * g_raw.values / np.max(np.abs(g_raw.values)))
    res_random = quotient_rule_residual(f_rand, g_rand, p["epsilon"])
    fb = forward_transform(f_rand)
    gb = forward_transform(g_rand)
    scale = (
        (1.0 + hs_norm(fb, 2.0)) * (1.0 + hs_norm(gb, 2.0)) ** 2 * p["tol_random_scale"]
    )

    closure = divide(multiply(f_rand, one_plus(g_rand)), g_rand, p["epsilon"])
    res_closure = float(np.max(np.abs(closure.values - f_rand.values)))

    trials = [
        {"case": "bundled", "residual": res_bundled, "tol": p["tol_bundled"]},
        {"case": "random", "residual": res_random, "tol": scale},
        {"case": "closure", "residual": res_closure, "tol": p["tol_closure"]},
    ]
    passed = all(t["residual"] < t["tol"] for t in trials)
    aggregate = {
        "max_residual": max(t["residual"] for t in trials),
        "inf_one_plus_g": uset_membership(g_rand, p["epsilon"]).inf_value,
    }
    return SuiteReport("quotient-rule", p, trials, aggregate, passed)


# ---------------------------------------------------------------------------
# group and calculus suites


def run_group(params: dict) -> SuiteReport:
    p = {
        "size": 256,
        "dim": 1,
        "trials": 20,
        "seed": 13,
        "amplitude": 0.2,
        "tol_identity": 1e-10,
        "tol_residual": 1e-7,
        "serial": False,
    }
    p.update(params)
    _require_positive(p, ("tol_identity", "tol_residual"))
    spec = GridSpec(p["dim"], p["size"])
    u_modes = spec.size // 16
    f_modes = spec.size // 8

    def one(i):
        u = random_certified_displacement(
            spec, p["seed"] + i, u_modes, p["amplitude"]
        )
        phi = make_diffeo(u)
        psi = invert(phi)
        id_defect = float(np.max(np.abs(compose_diffeo(phi, psi).disp_values)))
        f = fourier_truncate(
            random_field(spec, 3.0, p["seed"] + 500 + i), f_modes, "sharp"
        )
        chain = chain_rule_residual(f, phi)
        inv_res = inverse_derivative_residual(phi, psi=psi)
        return {
            "trial": i,
            "min_det": phi.min_det,
            "identity_defect": id_defect,
            "chain_rule_residual": chain,
            "inverse_derivative_residual": inv_res,
        }

    records = _map_trials(one, range(p["trials"]), p["serial"])
    worst_id = max(rec["identity_defect"] for rec in records)
    worst_chain = max(rec["chain_rule_residual"] for rec in records)
    worst_inv = max(rec["inverse_derivative_residual"] for rec in records)
    passed = (
        worst_id < p["tol_identity"]
        and worst_chain < p["tol_residual"]
        and worst_inv < p["tol_residual"]
    )
    aggregate = {
        "max_identity_defect": worst_id,
        "max_chain_rule_residual": worst_chain,
        "max_inverse_derivative_residual": worst_inv,
    }
    return SuiteReport("group", p, records, aggregate, passed)


def _bundled_calculus_data(spec: GridSpec):
    """Analytic base data for the Taylor suites: u, phi, du, dphi."""
    x = spec.axis_coordinates()
    u = forward_transform(GridFunction(spec, np.sin(TWO_PI * x)[None]))
    phi = make_diffeo(_sine_displacement(spec, 0.05))
    du = forward_transform(GridFunction(spec, (0.02 * np.cos(2 * TWO_PI * x))[None]))
    dphi = _cosine_field(spec, 1, 0.01)
    return u, phi, du, dphi


def run_taylor_identity(params: dict) -> SuiteReport:
    p = {
        "size": 256,
        "dim": 1,
        "r_values": [1, 2],
        "s": 2.0,
        "tol_scale": 1e-7,
        "serial": False,
    }
    p.update(params)
    _require_positive(p, ("tol_scale",))
    spec = GridSpec(p["dim"], p["size"])
    u, phi, du, dphi = _bundled_calculus_data(spec)
    trials = []
    for r in p["r_values"]:
        defect = calculus.taylor_defect(u, phi, du, dphi, r)
        tol = p["tol_scale"] * (1.0 + hs_norm(u, p["s"] + r))
        trials.append({"r": r, "defect": defect, "tol": tol})
    passed = all(t["defect"] < t["tol"] for t in trials)
    aggregate = {"max_defect": max(t["defect"] for t in trials)}
    return SuiteReport("taylor-identity", p, trials, aggregate, passed)


def run_taylor_order(params: dict) -> SuiteReport:
    p = {
        "size": 256,
        "dim": 1,
        "r_values": [1, 2],
        "seeds": [101, 102, 103],
        "s": 2.0,
        "slope_margin": 0.9,
        "serial": False,
    }
    p.update(params)
    _require_positive(p, ("slope_margin",))
    spec = GridSpec(p["dim"], p["size"])
    u, phi, _, _ = _bundled_calculus_data(spec)

    def one(args):
        r, seed = args
        du_dir = fourier_truncate(random_field(spec, p["s"] + r, seed), 8, "sharp")
        du_dir = Spectrum(spec, du_dir.coeffs / hs_norm(du_dir, p["s"] + r))
        dphi_raw = random_certified_displacement(spec, seed + 7, 8, 0.5)
        dphi_dir = inverse_transform(dphi_raw)
        probe = calculus.remainder_order_probe(u, phi, du_dir, dphi_dir, r, s=p["s"])
        return {"r": r, "seed": seed, **probe.as_dict()}

    cases = [(r, seed) for r in p["r_values"] for seed in p["seeds"]]
    records = _map_trials(one, cases, p["serial"])
    passed = all(
        rec["degenerate"]
        or (rec["monotone"] and rec["slope"] >= rec["r"] + p["slope_margin"])
        for rec in records
    )
    aggregate = {
        "slopes": {f"r={rec['r']},seed={rec['seed']}": rec["slope"] for rec in records}
    }
    return SuiteReport("taylor-order", p, records, aggregate, passed)


def run_inverse_differential(params: dict) -> SuiteReport:
    p = {
        "size": 256,
        "dim": 1,
        "amplitude": 0.1,
        "eps": [1e-3, 5e-4],
        "ratio_band": [3.5, 4.5],
        "serial": False,
    }
    p.update(params)
    _require_positive(p, ("eps", "ratio_band"))
    spec = GridSpec(p["dim"], p["size"])
    phi = make_diffeo(_sine_displacement(spec, p["amplitude"]))
    psi = invert(phi)
    dphi = _cosine_field(spec, 1)
    errors = [
        calculus.inv_differential_fd_error(phi, dphi, eps, psi=psi) for eps in p["eps"]
    ]
    ratio = errors[0] / errors[1]
    lo, hi = p["ratio_band"]
    passed = lo <= ratio <= hi
    trials = [
        {"eps": eps, "fd_error": err} for eps, err in zip(p["eps"], errors)
    ]
    aggregate = {"richardson_ratio": ratio, "band": [lo, hi]}
    return SuiteReport("inverse-differential", p, trials, aggregate, passed)


def run_lipschitz(params: dict) -> SuiteReport:
    p = {
        "size": 128,
        "dim": 1,
        "s": 2.0,
        "trials": 50,
        "seed": 31,
        "radius": 0.05,
        "stability": 0.15,
        "serial": False,
    }
    p.update(params)
    _require_positive(p, ("radius", "stability"))
    spec = GridSpec(p["dim"], p["size"])
    x = spec.axis_coordinates()
    f = forward_transform(
        GridFunction(spec, (np.sin(TWO_PI * x) + 0.3 * np.cos(2 * TWO_PI * x))[None])
    )
    phi0 = make_diffeo(_sine_displacement(spec, 0.05))
    maxima = {}
    for radius in (p["radius"], p["radius"] / 2.0):
        quots = calculus.right_translation_quotients(
            f, phi0, radius, p["trials"], p["seed"], p["s"]
        )
        maxima[radius] = max(quots)
    vals = list(maxima.values())
    change = abs(vals[0] - vals[1]) / vals[0]
    passed = change <= p["stability"]
    trials = [{"radius": r, "max_quotient": v} for r, v in maxima.items()]
    aggregate = {"relative_change": change, "stability": p["stability"]}
    return SuiteReport("lipschitz", p, trials, aggregate, passed)


def run_loss_of_derivative(params: dict) -> SuiteReport:
    p = {
        "size": 256,
        "dim": 1,
        "s": 2.0,
        "octaves": 5,
        "base_amplitude": 0.09,
        "growth_min": 1.5,
        "right_band": 0.20,
        "serial": False,
    }
    p.update(params)
    _require_positive(p, ("growth_min", "right_band"))
    spec = GridSpec(p["dim"], p["size"])
    phi = make_diffeo(_sine_displacement(spec, p["base_amplitude"]))
    dphi_dir = _cosine_field(spec, 1)
    data = calculus.loss_of_derivative_probe(
        phi, dphi_dir, p["s"], octaves=p["octaves"]
    )
    growth_ok = all(g >= p["growth_min"] for g in data["growth_factors"])
    right = np.array(data["right_quotients"])
    median = float(np.median(right))
    right_ok = bool(np.all(np.abs(right - median) <= p["right_band"] * median))
    passed = growth_ok and right_ok
    aggregate = {
        "growth_factors": data["growth_factors"],
        "right_quotients": data["right_quotients"],
        "right_median": median,
    }
    return SuiteReport("loss-of-derivative", p, [data], aggregate, passed)


# ---------------------------------------------------------------------------
# geodesic and fractional suites


def run_geodesic(params: dict) -> SuiteReport:
    p = {
        "size": 64,
        "seed": 19,
        "steps": 256,
        "scaling_steps": 512,
        "tol_flat": 1e-12,
        "tol_scaling": 1e-8,
        "tol_energy": 1e-8,
        "d0_band": [1.7, 2.3],
        "rk4_band": [3.7, 4.3],
        "serial": False,
    }
    p.update(params)
    _require_positive(p, ("tol_flat", "tol_scaling", "tol_energy"))
    spec = GridSpec(1, p["size"])
    x = spec.axis_coordinates()
    trials = []

    # Flat metric: exp is literal translation.
    flat = geodesic.flat_metric(1)
    f1 = GridFunction(spec, x[None])
    y1 = inverse_transform(
        fourier_truncate(random_field(spec, 3.0, p["seed"]), 8, "sharp")
    )
    moved = geodesic.exp_field(flat, f1, y1, steps=p["steps"])
    flat_defect = float(np.max(np.abs(moved.values - (f1.values + y1.values))))
    trials.append({"check": "flat_exactness", "defect": flat_defect})

    # Conformal plane: points along a closed curve, small random velocities.
    conf = geodesic.conformal_metric_2d()
    curve = GridFunction(
        spec,
        np.stack([x, 0.3 + 0.2 * np.sin(TWO_PI * x)]),
    )
    vel_raw = inverse_transform(
        fourier_truncate(
            random_field(spec, 3.0, p["seed"] + 4, components=2), 8, "sharp"
        )
    )
    vel = GridFunction(spec, 0.3 * vel_raw.values / np.max(np.abs(vel_raw.values)))

    scaling_defects = {
        lam: geodesic.scaling_defect(conf, curve, vel, lam, steps=p["scaling_steps"])
        for lam in (0.5, 0.3)
    }
    trials.append({"check": "scaling", "defects": scaling_defects})

    eps_ladder = (1e-2, 5e-3, 2.5e-3)
    d0_errors = [
        geodesic.d0_exp_error(conf, curve, vel, eps, steps=p["steps"])
        for eps in eps_ladder
    ]
    d0_ratios = [a / b for a, b in zip(d0_errors, d0_errors[1:])]
    trials.append({"check": "d0_exp", "errors": d0_errors, "ratios": d0_ratios})

    probe_points = curve.flat_points_values()[:: max(1, spec.size // 8)]
    probe_vels = vel.flat_points_values()[:: max(1, spec.size // 8)]
    drifts = []
    for y0, v0 in zip(probe_points, probe_vels):
        traj = geodesic.geodesic_flow(conf, y0, v0, T=1.0, steps=p["steps"])
        e = traj.energies(conf)
        drifts.append(float(np.max(np.abs(e - e[0])) / abs(e[0])))
    energy_drift = max(drifts)
    trials.append({"check": "energy", "max_relative_drift": energy_drift})

    _, rk4_slope = geodesic.rk4_order_errors(conf, probe_points[1], probe_vels[1])
    trials.append({"check": "rk4_order", "slope": rk4_slope})

    d0lo, d0hi = p["d0_band"]
    rklo, rkhi = p["rk4_band"]
    passed = (
        flat_defect < p["tol_flat"]
        and all(v < p["tol_scaling"] for v in scaling_defects.values())
        and all(d0lo <= r <= d0hi for r in d0_ratios)
        and energy_drift < p["tol_energy"]
        and rklo <= rk4_slope <= rkhi
    )
    aggregate = {
        "flat_defect": flat_defect,
        "scaling_defects": {str(k): v for k, v in scaling_defects.items()},
        "d0_ratios": d0_ratios,
        "energy_drift": energy_drift,
        "rk4_slope": rk4_slope,
    }
    return SuiteReport("geodesic", p, trials, aggregate, passed)


def run_fractional(params: dict) -> SuiteReport:
    p = {
        "size": 256,
        "oracle_size": 2048,
        "lam": 0.5,
        "pairs": 20,
        "seed": 5,
        "oracle_rel_tol": 0.02,
        "slack": 1.05,
        "serial": False,
    }
    p.update(params)
    _require_positive(p, ("oracle_rel_tol", "slack"))
    spec = GridSpec(1, p["size"])
    fine_spec = GridSpec(1, p["oracle_size"])
    lam = p["lam"]

    x = spec.axis_coordinates()
    base = np.sin(TWO_PI * x)
    xf = fine_spec.axis_coordinates()
    value = slobodeckij_seminorm(GridFunction(spec, base[None]), lam)
    oracle = slobodeckij_seminorm(
        GridFunction(fine_spec, np.sin(TWO_PI * xf)[None]), lam
    )
    oracle_rel = abs(value - oracle) / oracle

    def one(i):
        f = inverse_transform(
            fourier_truncate(
                random_field(spec, 2.0, p["seed"] + 2 * i), spec.size // 8, "sharp"
            )
        )
        u = random_certified_displacement(spec, p["seed"] + 2 * i + 1, 8, 0.25)
        phi = make_diffeo(u)
        lhs = slobodeckij_seminorm(compose_function(forward_transform(f), phi), lam)
        dphi_fine = 1.0 + refine(differentiate(phi.displacement, 0), 4).values
        M = float(np.min(dphi_fine))
        L = float(np.max(np.abs(dphi_fine)))
        rhs = (1.0 / M) * L ** (0.5 + lam) * slobodeckij_seminorm(f, lam)
        return {"pair": i, "lhs": lhs, "bound": rhs, "ratio": lhs / rhs}

    records = _map_trials(one, range(p["pairs"]), p["serial"])
    worst = max(rec["ratio"] for rec in records)
    passed = oracle_rel <= p["oracle_rel_tol"] and worst <= p["slack"]
    aggregate = {
        "oracle_relative_error": oracle_rel,
        "max_bound_ratio": worst,
        "slack": p["slack"],
    }
    trials = [{"check": "oracle", "relative_error": oracle_rel}] + records
    return SuiteReport("fractional", p, trials, aggregate, passed)


# ---------------------------------------------------------------------------
# registry and runner

SUITES = {
    "norm-equivalence": run_norm_equivalence,
    "embedding": run_embedding,
    "algebra": run_algebra,
    "quotient-rule": run_quotient_rule,
    "group": run_group,
    "taylor-identity": run_taylor_identity,
    "taylor-order": run_taylor_order,
    "inverse-differential": run_inverse_differential,
    "lipschitz": run_lipschitz,
    "loss-of-derivative": run_loss_of_derivative,
    "geodesic": run_geodesic,
    "fractional": run_fractional,
}

_PARAM_ALIASES = {"N": "size", "grid": "size"}


def normalize_params(raw: dict) -> dict:
    out = {}
    for key, value in raw.items():
        out[_PARAM_ALIASES.get(key, key)] = value
    return out


def parse_config(payload: dict) -> list[dict]:
    """Validate a config payload and return the suite entries."""
    if "suites" not in payload or not isinstance(payload["suites"], list):
        raise ValueError("config must contain a 'suites' list")
    entries = []
    for entry in payload["suites"]:
        if "suite" not in entry:
            raise ValueError(f"config entry missing 'suite': {entry}")
        name = entry["suite"]
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}")
        params = normalize_params({k: v for k, v in entry.items() if k != "suite"})
        entries.append({"suite": name, "params": params})
    return entries


def default_config() -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "suites": [{"suite": name} for name in SUITES],
    }


def run_suite(name: str, params: dict | None = None) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    params = normalize_params(params or {})
    start = time.perf_counter()
    report = SUITES[name](params)
    report.wall_time_s = time.perf_counter() - start
    # execution mode is not a mathematical parameter; keep reports
    # byte-identical between threaded and serial runs
    report.params.pop("serial", None)
    return report


def run_all(config: dict, serial: bool = False) -> tuple[list[SuiteReport], dict]:
    """Run every configured suite; errors fail the aggregate but not the run."""
    entries = parse_config(config)
    reports = []
    summary = {"schema_version": SCHEMA_VERSION, "suites": [], "pass": True}
    if not entries:
        summary["warning"] = "empty suite list: vacuous pass"
        return reports, summary
    for entry in entries:
        params = dict(entry["params"])
        if serial:
            params["serial"] = True
        try:
            report = run_suite(entry["suite"], params)
            reports.append(report)
            summary["suites"].append(
                {"suite": entry["suite"], "pass": report.passed}
            )
            summary["pass"] = summary["pass"] and report.passed
        except Exception as exc:  # noqa: BLE001 - surfaced in the summary
            summary["suites"].append(
                {"suite": entry["suite"], "pass": False, "error": str(exc)}
            )
            summary["pass"] = False
    return reports, summary
