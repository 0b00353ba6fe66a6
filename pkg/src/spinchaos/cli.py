"""Batch driver: ``spinchaos <mode> --config <file> [--set key=value ...]``.

Modes
-----
quantum        exact Floquet evolution, per-kick moments -> qmoments.csv
classical-traj single stroboscopic trajectory            -> traj.csv
lyapunov       largest Lyapunov exponent of one IC       -> lyapunov.csv
regime-scan    chaotic fraction over sampled ICs         -> scan.csv
ensemble       Monte Carlo Liouville moments             -> cmoments.csv
compare        quantum vs ensemble + difference + fits   -> qmoments/cmoments/delta.csv, summary.txt
break-scaling  break-times across an l sweep + fit       -> breaktimes.csv, summary.txt
appendix-check sphere-moment obstruction closed forms    -> appendix.csv, summary.txt

Configuration is a flat ``key = value`` text file ('#' comments); any key can
be overridden on the command line with ``--set key=value``.  Initial-condition
angles are given in degrees; the rotation parameter ``a`` is in radians.
Exactly one coupling parameterization may be given: quantum ``c`` or scaled
``gamma`` (they convert via gamma = c sqrt(s(s+1))).

Every run writes ``manifest.txt`` (config echo, derived parameters, code
version, timestamps, seed).  Data CSVs contain no timestamps: rerunning with
an identical config and seed reproduces them byte for byte.

Exit codes: 0 success, 1 configuration error, 2 numerical error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, classical, correspondence, liouville, quantum
from .csvio import write_csv

__all__ = ["main", "run", "parse_config", "params_convert", "choose_s_for_r", "ConfigError"]

MODES = (
    "quantum",
    "classical-traj",
    "lyapunov",
    "regime-scan",
    "ensemble",
    "compare",
    "break-scaling",
    "appendix-check",
)


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration (exit code 1)."""


class NumericalError(RuntimeError):
    """A sub-operation failed numerically (exit code 2)."""


# key -> (parser, default); None default means "no default, maybe required per mode"
_SCHEMA = {
    "outdir": (str, "."),
    "seed": (int, 12345),
    "a": (float, None),
    "gamma": (float, None),
    "c": (float, None),
    "r": (float, None),
    "s": (float, None),
    "l": (float, None),
    "j": (float, None),
    "theta_s": (float, None),
    "phi_s": (float, None),
    "theta_l": (float, None),
    "phi_l": (float, None),
    "n_kicks": (int, 200),
    "n_traj": (int, 1_000_000),
    "chunk_size": (int, 1_000_000),
    "n_steps": (int, 100_000),
    "renorm_every": (int, 1),
    "sample_every": (int, 1000),
    "n_samples": (int, 30_000),
    "scan_steps": (int, 10_000),
    "lambda_threshold": (float, 0.005),
    "intercept": (str, "fixed"),
    "noise_floor_mult": (float, 3.0),
    "delta_cap": (float, 0.3),
    "ma_window": (int, 5),
    "var_threshold": (float, 0.5),
    "p": (float, 0.1),
    "p_list": (str, "0.1"),
    "l_list": (str, "11,22,44,88,154,220"),
    "r_target": (float, 1.1),
    "lyap_steps": (int, 100_000),
    "dump_state": (int, 0),
    "dump_pz": (int, 0),
}


def parse_config(path: str | None, overrides: list[str]) -> dict:
    """Flat key=value file plus --set overrides, validated against the schema."""
    raw: dict[str, str] = {}
    if path is not None:
        text = Path(path).read_text()
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            raw[key] = value
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        raw[key] = value

    cfg = {key: default for key, (_, default) in _SCHEMA.items()}
    for key, value in raw.items():
        if key not in _SCHEMA:
            raise ConfigError(f"unknown configuration key {key!r}")
        parser = _SCHEMA[key][0]
        try:
            cfg[key] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: cannot parse {value!r} as {parser.__name__}") from exc
    return cfg


def _require(cfg: dict, keys: list[str], mode: str) -> None:
    for key in keys:
        if cfg.get(key) is None:
            raise ConfigError(f"missing key {key!r} required for mode {mode!r}")


# ---------------------------------------------------------------------------
# parameter conversion


def params_convert(
    s: float | None = None,
    l: float | None = None,
    c: float | None = None,
    gamma: float | None = None,
) -> dict:
    """Convert between quantum {a,c,s,l} and classical {a,gamma,r} parameters.

    gamma = c sqrt(s(s+1)) and r = sqrt(l(l+1)/s(s+1)); give exactly one of
    (c, gamma).  Returns a dict with both parameterizations.
    """
    if (c is None) == (gamma is None):
        raise ConfigError("give exactly one of 'c' and 'gamma'")
    if s is None or s <= 0 or l is None or l <= 0:
        raise ConfigError("positive quantum numbers 's' and 'l' are required")
    mag_s = math.sqrt(s * (s + 1.0))
    mag_l = math.sqrt(l * (l + 1.0))
    if c is None:
        c = gamma / mag_s
    else:
        gamma = c * mag_s
    return {"s": s, "l": l, "c": c, "gamma": gamma, "r": mag_l / mag_s}


def choose_s_for_r(l: float, r_target: float, tolerance: float = 0.05) -> int:
    """Integer s minimizing |r(s, l) - r_target|; error when nothing is close.

    The quantum-number lattice only approximates a requested ratio; the error
    message lists the nearest candidates so the caller can adjust r_target.
    """
    if r_target < 1.0:
        raise ConfigError(f"r_target={r_target} must be >= 1")
    mag_l2 = l * (l + 1.0)
    best = max(1, int(round(math.sqrt(mag_l2 / r_target**2 + 0.25) - 0.5)))
    candidates = [s for s in range(max(1, best - 2), best + 3) if s <= l]
    ranked = sorted(candidates, key=lambda s: abs(math.sqrt(mag_l2 / (s * (s + 1.0))) - r_target))
    s = ranked[0]
    r_actual = math.sqrt(mag_l2 / (s * (s + 1.0)))
    if abs(r_actual - r_target) > tolerance:
        listing = ", ".join(
            f"s={cand} -> r={math.sqrt(mag_l2 / (cand * (cand + 1.0))):.5f}" for cand in ranked[:3]
        )
        raise ConfigError(
            f"no integer s gives r within {tolerance} of {r_target} for l={l}; nearest: {listing}"
        )
    return s


def _coupling(cfg: dict, mode: str) -> dict:
    """Resolve (a, c, gamma, r, s, l) for quantum-bearing modes."""
    _require(cfg, ["a", "s", "l"], mode)
    if cfg["r"] is not None:
        raise ConfigError("key 'r' conflicts with quantum numbers; r is derived from (s, l)")
    return {"a": cfg["a"], **params_convert(s=cfg["s"], l=cfg["l"], c=cfg["c"], gamma=cfg["gamma"])}


def _classical_params(cfg: dict, mode: str) -> classical.ClassicalParams:
    _require(cfg, ["a", "gamma", "r"], mode)
    if cfg["c"] is not None or cfg["s"] is not None or cfg["l"] is not None:
        raise ConfigError(f"mode {mode!r} is purely classical: give (a, gamma, r) only")
    try:
        return classical.ClassicalParams(cfg["a"], cfg["gamma"], cfg["r"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _angles(cfg: dict, mode: str) -> np.ndarray:
    _require(cfg, ["theta_s", "phi_s", "theta_l", "phi_l"], mode)
    return np.deg2rad([cfg["theta_s"], cfg["phi_s"], cfg["theta_l"], cfg["phi_l"]])


# ---------------------------------------------------------------------------
# artifacts


def _write_manifest(outdir: Path, mode: str, cfg: dict, derived: dict) -> None:
    lines = [
        f"spinchaos {__version__}",
        f"mode: {mode}",
        f"timestamp: {time.strftime('%Y-%m-%dT%H:%M:%S%z')}",
        f"numpy: {np.__version__}",
        "",
        "[config]",
    ]
    lines += [f"{key} = {cfg[key]}" for key in sorted(cfg) if cfg[key] is not None]
    if derived:
        lines += ["", "[derived]"]
        lines += [f"{key} = {value}" for key, value in derived.items()]
    (outdir / "manifest.txt").write_text("\n".join(lines) + "\n")


def _moment_columns(series, prefix_map=(("S", "s"), ("L", "l"))) -> dict:
    cols: dict = {"n": np.asarray(series.kicks, dtype=np.int64)}
    for label, attr in prefix_map:
        mag = series.mag_s if attr == "s" else series.mag_l
        mean = getattr(series, f"{attr}_tilde_mean")
        for i, comp in enumerate("xyz"):
            cols[f"{label}{comp}_mean"] = mag * mean[:, i]
        se = getattr(series, f"{attr}_tilde_se", None)
        if se is not None:
            for i, comp in enumerate("xyz"):
                cols[f"{label}{comp}_se"] = mag * se[:, i]
        cols[f"{label}var_norm"] = getattr(series, f"var_norm_{attr}")
        var_se = getattr(series, f"var_norm_{attr}_se", None)
        if var_se is not None:
            cols[f"{label}var_norm_se"] = var_se
    return cols


def _quantum_series(conv: dict, ang: np.ndarray, n_kicks: int):
    s, l = conv["s"], conv["l"]
    flo = quantum.build_floquet(s, l, conv["a"], conv["c"])
    state = quantum.product_state(
        s, l, quantum.coherent_state(s, ang[0], ang[1]), quantum.coherent_state(l, ang[2], ang[3])
    )
    return state, flo, quantum.evolve_series(state, flo, n_kicks)


def _ensemble_series(conv: dict, ang: np.ndarray, cfg: dict):
    ens = liouville.build_ensemble(
        conv["s"], conv["l"], *ang, n_traj=cfg["n_traj"], seed=cfg["seed"],
        chunk_size=cfg["chunk_size"],
    )
    p = classical.ClassicalParams(conv["a"], conv["gamma"], conv["r"])
    return ens, p, liouville.ensemble_evolve(ens, p, cfg["n_kicks"])


# ---------------------------------------------------------------------------
# mode runners


def _run_quantum(cfg: dict, outdir: Path) -> dict:
    conv = _coupling(cfg, "quantum")
    ang = _angles(cfg, "quantum")
    state, flo, series = _quantum_series(conv, ang, cfg["n_kicks"])
    write_csv(outdir / "qmoments.csv", _moment_columns(series))
    if cfg["dump_state"]:
        final = quantum.evolve(state, flo, cfg["n_kicks"])
        ms = np.repeat(quantum.m_values(conv["s"]), quantum.dim_of(conv["l"]))
        ml = np.tile(quantum.m_values(conv["l"]), quantum.dim_of(conv["s"]))
        write_csv(
            outdir / "state_final.csv",
            {"m_s": ms, "m_l": ml, "re": final.amplitudes.real, "im": final.amplitudes.imag},
        )
    if cfg["dump_pz"]:
        final = quantum.evolve(state, flo, cfg["n_kicks"])
        write_csv(
            outdir / "pz_final.csv",
            {"m_l": quantum.m_values(conv["l"]), "P": quantum.marginal_pz(final)},
        )
    return conv


def _run_classical_traj(cfg: dict, outdir: Path) -> dict:
    p = _classical_params(cfg, "classical-traj")
    ang = _angles(cfg, "classical-traj")
    x = classical.angles_to_state(*ang)
    n = cfg["n_kicks"]
    traj = np.empty((n + 1, 6))
    for k in range(n + 1):
        traj[k] = x
        if k < n:
            x = classical.map_step(x, p)
    write_csv(
        outdir / "traj.csv",
        {
            "n": np.arange(n + 1),
            **{f"S{c}": traj[:, i] for i, c in enumerate("xyz")},
            **{f"L{c}": traj[:, i + 3] for i, c in enumerate("xyz")},
        },
    )
    return {"a": p.a, "gamma": p.gamma, "r": p.r}


def _run_lyapunov(cfg: dict, outdir: Path) -> dict:
    p = _classical_params(cfg, "lyapunov")
    ang = _angles(cfg, "lyapunov")
    x0 = classical.angles_to_state(*ang)
    n_steps, every = cfg["n_steps"], cfg["sample_every"]
    checkpoints = list(range(every, n_steps + 1, every))
    if not checkpoints or checkpoints[-1] != n_steps:
        checkpoints.append(n_steps)
    running = [classical.lyapunov_exponent(x0, p, n) for n in checkpoints]
    lam = running[-1]
    write_csv(outdir / "lyapunov.csv", {"n": np.array(checkpoints), "lambda_running": running})
    (outdir / "summary.txt").write_text(f"lambda_L = {lam:.17g} (n_steps = {n_steps})\n")
    return {"a": p.a, "gamma": p.gamma, "r": p.r, "lambda_L": lam}


def _run_regime_scan(cfg: dict, outdir: Path) -> dict:
    p = _classical_params(cfg, "regime-scan")
    res = classical.regime_scan(
        p, cfg["n_samples"], cfg["scan_steps"], cfg["lambda_threshold"], cfg["seed"]
    )
    write_csv(
        outdir / "scan.csv",
        {
            "S_z": res.points[:, 0],
            "phi_s": res.points[:, 1],
            "L_z": res.points[:, 2],
            "phi_l": res.points[:, 3],
            "lambda": res.lambdas,
            "is_chaotic": res.chaotic_mask.astype(np.int64),
        },
    )
    (outdir / "summary.txt").write_text(
        f"chaotic_fraction = {res.chaotic_fraction:.17g}\n"
        f"n_samples = {cfg['n_samples']}\nn_steps = {cfg['scan_steps']}\n"
        f"lambda_threshold = {cfg['lambda_threshold']}\n"
    )
    return {"a": p.a, "gamma": p.gamma, "r": p.r, "chaotic_fraction": res.chaotic_fraction}


def _run_ensemble(cfg: dict, outdir: Path) -> dict:
    conv = _coupling(cfg, "ensemble")
    ang = _angles(cfg, "ensemble")
    ens, p, series = _ensemble_series(conv, ang, cfg)
    write_csv(outdir / "cmoments.csv", _moment_columns(series))
    if cfg["dump_pz"]:
        states = liouville.evolve_states(ens, p, cfg["n_kicks"])
        write_csv(
            outdir / "pz_final.csv",
            {
                "m_l": quantum.m_values(conv["l"]),
                "P": liouville.marginal_pz_classical(states, conv["l"]),
            },
        )
    return conv


def _fit_report(qs, cs, d, cfg: dict, conv: dict) -> tuple[list[str], dict]:
    """Summary block: lambda_L, lambda_w (both sides), lambda_qc, t*, t_sat, t_b table."""
    lines: list[str] = []
    values: dict = {}
    p = classical.ClassicalParams(conv["a"], conv["gamma"], conv["r"])
    ang = np.deg2rad([cfg["theta_s"], cfg["phi_s"], cfg["theta_l"], cfg["phi_l"]])
    lam_l = classical.lyapunov_exponent(classical.angles_to_state(*ang), p, cfg["lyap_steps"])
    lines.append(f"lambda_L (trajectory at IC, {cfg['lyap_steps']} steps) = {lam_l:.6g}")
    values["lambda_L"] = lam_l

    for label, series in (("quantum", qs), ("classical", cs)):
        try:
            fit = correspondence.variance_growth_fit(
                series.var_norm_l, conv["l"], saturation_threshold=cfg["var_threshold"]
            )
            lines.append(
                f"lambda_w ({label} fit) = {fit.lam:.6g}  window={fit.window} rms={fit.residual:.3g}"
            )
            values[f"lambda_w_{label}"] = fit.lam
            if label == "quantum":
                t_sat = correspondence.saturation_time(fit.lam, conv["l"])
                lines.append(f"t_sat (from quantum lambda_w) = {t_sat:.3g}")
                values["t_sat"] = t_sat
        except ValueError as exc:
            lines.append(f"lambda_w ({label} fit) unavailable: {exc}")

    t_star = correspondence.detect_saturation_kick(d.delta, ma_window=cfg["ma_window"])
    lines.append(f"t_star (difference saturation kick) = {t_star}")
    values["t_star"] = t_star
    try:
        fit = correspondence.fit_growth_exponent(
            d,
            intercept=cfg["intercept"],
            noise_floor_mult=cfg["noise_floor_mult"],
            delta_cap=cfg["delta_cap"],
            ma_window=cfg["ma_window"],
        )
        lines.append(
            f"lambda_qc (direct fit, {fit.intercept_mode} intercept) = {fit.lam:.6g}  "
            f"window={fit.window} points={fit.n_points} rms={fit.residual:.3g}"
        )
        values["lambda_qc"] = fit.lam
    except ValueError as exc:
        lines.append(f"lambda_qc (direct fit) unavailable: {exc}")
    lines.append("lambda_qc (break-scaling) n/a: requires an l sweep (break-scaling mode)")

    lines.append("break-times:")
    for p_tol in (float(tok) for tok in cfg["p_list"].split(",") if tok.strip()):
        rec = correspondence.break_time(d, p_tol)
        shown = rec.t_b if rec.reached else "not reached"
        lines.append(f"  p={p_tol:g} -> t_b = {shown}")
    return lines, values


def _run_compare(cfg: dict, outdir: Path) -> dict:
    conv = _coupling(cfg, "compare")
    ang = _angles(cfg, "compare")
    _, _, qs = _quantum_series(conv, ang, cfg["n_kicks"])
    _, _, cs = _ensemble_series(conv, ang, cfg)
    d = correspondence.difference_series(qs, cs)
    write_csv(outdir / "qmoments.csv", _moment_columns(qs))
    write_csv(outdir / "cmoments.csv", _moment_columns(cs))
    write_csv(
        outdir / "delta.csv",
        {"n": d.kicks.astype(np.int64), "delta_Lz": d.delta, "q_Lz": d.q_lz, "c_Lz": d.c_lz,
         "c_se": d.c_se},
    )
    header = [
        f"parameters: a={conv['a']} gamma={conv['gamma']} r={conv['r']:.6f} "
        f"(s={conv['s']} l={conv['l']} c={conv['c']:.8g})",
        "r is derived from the quantum numbers; both parameterizations above",
        f"initial condition (deg): theta_s={cfg['theta_s']} phi_s={cfg['phi_s']} "
        f"theta_l={cfg['theta_l']} phi_l={cfg['phi_l']}",
        f"n_kicks={cfg['n_kicks']} n_traj={cfg['n_traj']} seed={cfg['seed']}",
    ]
    fit_lines, values = _fit_report(qs, cs, d, cfg, conv)
    (outdir / "summary.txt").write_text("\n".join(header + fit_lines) + "\n")
    return {**conv, **values}


def _run_break_scaling(cfg: dict, outdir: Path) -> dict:
    _require(cfg, ["a", "gamma"], "break-scaling")
    if cfg["c"] is not None:
        raise ConfigError("break-scaling sweeps l at fixed gamma: give 'gamma', not 'c'")
    ang = _angles(cfg, "break-scaling")
    try:
        l_values = [float(tok) for tok in cfg["l_list"].split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"key 'l_list': {exc}") from exc
    if not l_values:
        raise ConfigError("key 'l_list' is empty")
    p_tol = cfg["p"]
    records, rows = [], []
    fits_rows = []
    for idx, l in enumerate(l_values):
        s = choose_s_for_r(l, cfg["r_target"])
        conv = params_convert(s=s, l=l, gamma=cfg["gamma"])
        sub_cfg = dict(cfg, seed=cfg["seed"] + idx)
        _, _, qs = _quantum_series({**conv, "a": cfg["a"]}, ang, cfg["n_kicks"])
        _, _, cs = _ensemble_series({**conv, "a": cfg["a"]}, ang, sub_cfg)
        d = correspondence.difference_series(qs, cs)
        rec = correspondence.break_time(d, p_tol)
        records.append(rec)
        rows.append((l, s, conv["r"], p_tol, -1 if rec.t_b is None else rec.t_b))
        try:
            direct = correspondence.fit_growth_exponent(
                d, intercept=cfg["intercept"], noise_floor_mult=cfg["noise_floor_mult"],
                delta_cap=cfg["delta_cap"], ma_window=cfg["ma_window"],
            )
            fits_rows.append((l, direct.lam, direct.window[0], direct.window[1], direct.residual))
        except ValueError:
            pass
    cols = list(zip(*rows))
    write_csv(
        outdir / "breaktimes.csv",
        {
            "l": np.array(cols[0]),
            "s": np.array(cols[1], dtype=np.int64),
            "r": np.array(cols[2]),
            "p": np.array(cols[3]),
            "t_b": np.array(cols[4], dtype=np.int64),
        },
    )
    if fits_rows:
        fcols = list(zip(*fits_rows))
        write_csv(
            outdir / "fits.csv",
            {
                "l": np.array(fcols[0]),
                "lambda_qc_direct": np.array(fcols[1]),
                "window_lo": np.array(fcols[2], dtype=np.int64),
                "window_hi": np.array(fcols[3], dtype=np.int64),
                "rms_log_residual": np.array(fcols[4]),
            },
        )
    lines = [
        f"tolerance p = {p_tol}",
        f"l sweep: {', '.join(f'{l:g}' for l in l_values)} (s chosen for r ~ {cfg['r_target']})",
    ]
    values: dict = {}
    try:
        lam_scaling = correspondence.fit_break_scaling(records)
        lines.append(f"lambda_qc (break-time scaling fit) = {lam_scaling:.6g}")
        values["lambda_qc_scaling"] = lam_scaling
    except ValueError as exc:
        lines.append(f"lambda_qc (break-time scaling fit) unavailable: {exc}")
    if fits_rows:
        lines.append(f"lambda_qc (direct fit at largest fitted l) = {fits_rows[-1][1]:.6g}")
        values["lambda_qc_direct"] = fits_rows[-1][1]
    (outdir / "summary.txt").write_text("\n".join(lines) + "\n")
    return {"gamma": cfg["gamma"], "p": p_tol, **values}


def _run_appendix_check(cfg: dict, outdir: Path) -> dict:
    if cfg["j"] is None:
        raise ConfigError("missing key 'j' required for mode 'appendix-check'")
    mom = liouville.appendix_moments(cfg["j"])
    mc = liouville.vector_model_mc(cfg["j"], cfg["n_samples"], cfg["seed"])
    write_csv(
        outdir / "appendix.csv",
        {
            "j": [mom.j],
            "qm_Jx2": [mom.qm_jx2],
            "qm_Jx4": [mom.qm_jx4],
            "cl_Jx2": [mom.cl_jx2],
            "cl_Jx4": [mom.cl_jx4],
            "delta_Jx4": [mom.delta_jx4],
            "mc_Jx2": [mc.jx2],
            "mc_Jx2_se": [mc.jx2_se],
            "mc_Jx4": [mc.jx4],
            "mc_Jx4_se": [mc.jx4_se],
            "n_samples": [mc.n_samples],
        },
    )
    (outdir / "summary.txt").write_text(
        f"j = {mom.j:g}\n"
        f"quantum <Jx^2> = {mom.qm_jx2:.10g}\n"
        f"quantum <Jx^4> = {mom.qm_jx4:.10g}\n"
        f"classical <Jx^2> = {mom.cl_jx2:.10g}\n"
        f"classical <Jx^4> = {mom.cl_jx4:.10g}\n"
        f"delta Jx^4 = {mom.delta_jx4:.10g}\n"
        f"vector-model MC <Jx^2> = {mc.jx2:.10g} +- {mc.jx2_se:.3g}\n"
        f"vector-model MC <Jx^4> = {mc.jx4:.10g} +- {mc.jx4_se:.3g}\n"
    )
    return {"j": mom.j, "delta_Jx4": mom.delta_jx4}


_RUNNERS = {
    "quantum": _run_quantum,
    "classical-traj": _run_classical_traj,
    "lyapunov": _run_lyapunov,
    "regime-scan": _run_regime_scan,
    "ensemble": _run_ensemble,
    "compare": _run_compare,
    "break-scaling": _run_break_scaling,
    "appendix-check": _run_appendix_check,
}


def run(mode: str, cfg: dict) -> int:
    """Execute one mode; returns the process exit code."""
    if mode not in _RUNNERS:
        print(f"error: unknown mode {mode!r}; choose from {', '.join(MODES)}", file=sys.stderr)
        return 1
    try:
        outdir = Path(cfg["outdir"])
        outdir.mkdir(parents=True, exist_ok=True)
        derived = _RUNNERS[mode](cfg, outdir)
        _write_manifest(outdir, mode, cfg, derived)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # domain errors raised by the libraries while running are numerical failures
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="spinchaos",
        description="coupled kicked spins: quantum vs classical Liouville dynamics",
    )
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="override a configuration key (repeatable)",
    )
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(args.config, args.overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    return run(args.mode, cfg)


if __name__ == "__main__":
    sys.exit(main())
