"""Command-line front end.

Subcommands: volume, maximize, sweep, section, survey, calibrate.

Every run writes a plot-ready ``results.csv`` plus a ``manifest.json`` holding
full provenance (seed, sample counts, state, functional, wall time); the
report-style runs (sweep, section, survey) also render a matplotlib figure
next to the CSV unless plotting is disabled. CSV output is byte-identical for
identical command + seed; wall time lives only in the manifest.

Exit codes: 0 success, 2 unparseable flags or config, 3 state/functional
arity mismatch.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .errors import (
    ArityError,
    AxisError,
    ConfigError,
    DimensionError,
    InvalidParameterError,
    NormalizationError,
)
from .experiments import (
    argmax_row,
    noise_sweep,
    section_2d,
    section_fixed_point,
    survey_region,
    sweep_family,
)
from .functionals import BellFunctional, functional_from_name
from .manifest import (
    build_manifest,
    estimate_payload,
    write_csv,
    write_manifest,
    write_mask_rle,
    write_mask_text,
)
from .optimize import OptimizerConfig, maximize_bell
from .sampling import space_for, spheres, torus
from .states import BipartiteState, make_state
from .volume import (
    calibrate_estimator,
    default_workers,
    estimate_volume,
    estimate_volume_target_stderr,
    relative_normalize,
)

_FUNCTIONALS = ("chsh", "bell-original", "i3322", "cglmp3", "cglmp4")

_MAX_ENTANGLED = {"alpha": (0.7071067811865476,), "gamma": (1.0,), "lambda": (1.0, 1.0)}


class CliError(SystemExit):
    def __init__(self, code: int, message: str):
        print(f"error: {message}", file=sys.stderr)
        super().__init__(code)


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def parse_state_spec(spec: str, flag: str = "--state") -> tuple[str, tuple[float, ...], float]:
    """Parse 'alpha=0.707', 'gamma=1.0,noise=0.2' or 'lambda=1.0,1.0'."""
    entries: list[tuple[str, list[str]]] = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        if "=" in token:
            key, value = token.split("=", 1)
            entries.append((key.strip().lower(), [value.strip()]))
        elif entries:
            entries[-1][1].append(token)  # continuation of a multi-valued key
        else:
            raise CliError(2, f"{flag}: cannot parse {spec!r} (token {token!r} has no key)")
    keys = dict(entries)
    if len(keys) != len(entries):
        raise CliError(2, f"{flag}: duplicate key in {spec!r}")
    family = next((k for k in ("alpha", "gamma", "lambda") if k in keys), None)
    if family is None:
        raise CliError(2, f"{flag}: no family parameter in {spec!r} (need alpha=, gamma= or lambda=)")
    unknown = set(keys) - {family, "noise"}
    if unknown:
        raise CliError(2, f"{flag}: unknown key(s) {sorted(unknown)} in {spec!r}")
    try:
        params = tuple(float(v) for v in keys[family])
        noise = float(keys.get("noise", ["0.0"])[0])
    except ValueError as exc:
        raise CliError(2, f"{flag}: {exc} in {spec!r}") from None
    return family, params, noise


def build_state(spec: str, flag: str = "--state") -> tuple[BipartiteState, dict]:
    family, params, noise = parse_state_spec(spec, flag)
    try:
        state = make_state(family, params, noise)
    except InvalidParameterError as exc:
        raise CliError(2, f"{flag}: {exc}") from None
    desc = {"family": family, "params": list(params), "noise": noise}
    return state, desc


def build_functional(name: str, flag: str = "--functional") -> BellFunctional:
    try:
        return functional_from_name(name)
    except ArityError:
        raise CliError(2, f"{flag}: unknown functional {name!r}; choose from {_FUNCTIONALS}") from None


def check_compatible(state: BipartiteState, functional: BellFunctional) -> None:
    if state.local_dim != functional.outcomes:
        raise CliError(
            3,
            f"--state/--functional mismatch: {functional.kind} needs d={functional.outcomes}, "
            f"state has d={state.local_dim}",
        )


def parse_grid(text: str, key: str) -> list[float]:
    """'start:stop:step' (inclusive stop within half a step) or comma list."""
    text = text.strip()
    try:
        if ":" in text:
            start_s, stop_s, step_s = text.split(":")
            start, stop, step = float(start_s), float(stop_s), float(step_s)
            if step <= 0 or stop < start:
                raise ValueError("need start <= stop and step > 0")
            n = int(round((stop - start) / step))
            grid = [round(start + i * step, 12) for i in range(n + 1)]
            return [g for g in grid if g <= stop + step / 2]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse grid {text!r} ({exc})") from None


def read_config(path: str, schema: dict[str, str]) -> dict[str, str]:
    """Flat key=value file; '#' starts a comment; unknown keys are errors."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise CliError(2, f"--config: {exc}") from None
    values: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(2, f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in schema:
            raise CliError(2, f"{path}:{lineno}: unknown key {key!r} (allowed: {sorted(schema)})")
        if key in values:
            raise CliError(2, f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def _require(cfg: dict[str, str], key: str, path: str) -> str:
    if key not in cfg:
        raise CliError(2, f"{path}: missing required key {key!r}")
    return cfg[key]


def _as_int(cfg: dict, key: str, default: int | None, path: str) -> int:
    if key not in cfg:
        if default is None:
            raise CliError(2, f"{path}: missing required key {key!r}")
        return default
    try:
        return int(cfg[key])
    except ValueError:
        raise CliError(2, f"{path}: key {key!r} must be an integer, got {cfg[key]!r}") from None


def _as_float(cfg: dict, key: str, default: float, path: str) -> float:
    try:
        return float(cfg.get(key, default))
    except ValueError:
        raise CliError(2, f"{path}: key {key!r} must be a number, got {cfg[key]!r}") from None


def _as_bool(cfg: dict, key: str, default: bool, path: str) -> bool:
    raw = cfg.get(key)
    if raw is None:
        return default
    if raw.lower() in ("1", "true", "yes", "on"):
        return True
    if raw.lower() in ("0", "false", "no", "off"):
        return False
    raise CliError(2, f"{path}: key {key!r} must be boolean, got {raw!r}")


def _out_dir(args, cfg: dict | None = None) -> Path:
    out = getattr(args, "out", None) or (cfg or {}).get("out") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _space_payload(functional: BellFunctional) -> dict:
    space = space_for(functional)
    return {"kind": space.kind, "size": space.size, "total_volume": space.total_volume}


def _state_label(desc: dict) -> str:
    params = ",".join(repr(p) for p in desc["params"])
    label = f"{desc['family']}={params}"
    if desc["noise"]:
        label += f";noise={desc['noise']!r}"
    return label


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_volume(args) -> int:
    state, desc = build_state(args.state)
    functional = build_functional(args.functional)
    check_compatible(state, functional)
    if args.samples < 1:
        raise CliError(2, "--samples must be >= 1")
    out = _out_dir(args)
    t0 = time.perf_counter()
    if args.target_stderr is not None:
        est = estimate_volume_target_stderr(
            state, functional, args.target_stderr, args.seed, workers=args.workers
        )
    else:
        est = estimate_volume(
            state, functional, samples=args.samples, seed=args.seed, workers=args.workers
        )
    estimates = {"state": est}
    if args.normalization == "relative":
        ref_state = make_state(desc["family"], _MAX_ENTANGLED[desc["family"]], 0.0)
        ref = estimate_volume(
            ref_state, functional, samples=est.samples, seed=args.seed,
            workers=args.workers, sample_offset=est.samples,
        )
        try:
            estimates = relative_normalize({"state": est, "reference": ref}, "reference")
        except NormalizationError as exc:
            raise CliError(1, str(exc)) from None
        est = estimates["state"]
    wall = time.perf_counter() - t0

    header = ["state_params", "functional", "samples", "hits", "fraction",
              "stderr", "ci_low", "ci_high", "value"]
    rows = [[_state_label(desc), functional.kind, est.samples, est.hits, est.fraction,
             est.stderr, est.ci95[0], est.ci95[1], est.value]]
    write_csv(out / "results.csv", header, rows)
    manifest = build_manifest(
        "volume", functional=functional.kind, state=desc, space=_space_payload(functional),
        samples=est.samples, seed=args.seed, workers=args.workers,
        normalization=args.normalization,
        estimates={k: estimate_payload(v) for k, v in estimates.items()},
        wall_time_s=wall,
    )
    write_manifest(out / "manifest.json", manifest)
    print(
        f"V = {est.value:.6g} (fraction {est.fraction:.6g} +- {est.stderr:.2g}, "
        f"{est.hits}/{est.samples} hits, 95% CI [{est.ci95[0]:.3g}, {est.ci95[1]:.3g}], "
        f"seed {args.seed})"
    )
    return 0


def cmd_maximize(args) -> int:
    state, desc = build_state(args.state)
    functional = build_functional(args.functional)
    check_compatible(state, functional)
    out = _out_dir(args)
    t0 = time.perf_counter()
    config = OptimizerConfig(restarts=args.restarts, seed=args.seed)
    result = maximize_bell(state, functional, config=config, workers=args.workers)
    wall = time.perf_counter() - t0
    if functional.is_qubit:
        argmax = {"directions_theta_phi": np.asarray(result.argmax.angles).tolist()}
    else:
        argmax = {
            "alice_phases": np.asarray(result.argmax.alice).tolist(),
            "bob_phases": np.asarray(result.argmax.bob).tolist(),
        }
    header = ["state_params", "functional", "restarts", "seed", "value",
              "bound", "restarts_agreeing"]
    rows = [[_state_label(desc), functional.kind, args.restarts, args.seed,
             result.value, functional.local_bound, result.restarts_agreeing]]
    write_csv(out / "results.csv", header, rows)
    manifest = build_manifest(
        "maximize", functional=functional.kind, state=desc, space=_space_payload(functional),
        seed=args.seed, workers=args.workers,
        estimates={"max_value": result.value, "bound": functional.local_bound,
                   "restarts": args.restarts, "restarts_agreeing": result.restarts_agreeing,
                   "argmax": argmax},
        wall_time_s=wall,
    )
    write_manifest(out / "manifest.json", manifest)
    print(
        f"I_max = {result.value:.8g} (bound {functional.local_bound:g}, "
        f"{result.restarts_agreeing}/{args.restarts} restarts agreeing, seed {args.seed})"
    )
    return 0


_SWEEP_SCHEMA = {
    "family": "alpha|gamma|lambda|noise", "grid": "start:stop:step or comma list",
    "functional": "inequality name", "samples": "int", "seed": "int",
    "noise": "fixed noise fraction", "alpha": "alpha for family=noise",
    "restarts": "optimizer restarts", "workers": "int",
    "normalization": "absolute|relative", "normalize_to": "grid label of reference row",
    "out": "output directory", "plot": "bool",
}


def _sweep_rows_to_csv(rows, param_names, normalization, reference):
    # rows keep their grid order; labels are for the manifest and for naming
    # the relative-normalization reference (duplicate labels get suffixed)
    labels = []
    seen: dict[str, int] = {}
    for r in rows:
        label = ",".join(repr(p) for p in r.params)
        if label in seen:
            seen[label] += 1
            label = f"{label}#{seen[label]}"
        else:
            seen[label] = 0
        labels.append(label)
    estimates = {label: r.volume for label, r in zip(labels, rows)}
    if normalization == "relative":
        if reference not in estimates:
            raise CliError(2, f"normalize_to: reference row {reference!r} not on the grid")
        try:
            estimates = relative_normalize(estimates, reference)
        except NormalizationError as exc:
            raise CliError(1, str(exc)) from None
    header = param_names + ["entanglement", "i_max", "samples", "hits", "fraction",
                            "stderr", "ci_low", "ci_high", "value", "normalization"]
    out_rows = []
    for label, r in zip(labels, rows):
        est = estimates[label]
        out_rows.append(
            list(r.params) + [r.entanglement, r.i_max, est.samples, est.hits, est.fraction,
                              est.stderr, est.ci95[0], est.ci95[1], est.value,
                              est.normalization]
        )
    return header, out_rows, estimates


def cmd_sweep(args) -> int:
    path = args.config
    cfg = read_config(path, _SWEEP_SCHEMA)
    family = _require(cfg, "family", path)
    if family not in ("alpha", "gamma", "lambda", "noise"):
        raise CliError(2, f"{path}: family must be alpha|gamma|lambda|noise, got {family!r}")
    try:
        grid = parse_grid(_require(cfg, "grid", path), "grid")
    except ConfigError as exc:
        raise CliError(2, f"{path}: {exc}") from None
    if not grid:
        raise CliError(2, f"{path}: grid is empty")
    functional = build_functional(_require(cfg, "functional", path), "functional")
    samples = _as_int(cfg, "samples", None, path)
    seed = _as_int(cfg, "seed", 0, path)
    restarts = _as_int(cfg, "restarts", 32, path)
    workers = _as_int(cfg, "workers", args.workers, path)
    noise = _as_float(cfg, "noise", 0.0, path)
    normalization = cfg.get("normalization", "absolute")
    if normalization not in ("absolute", "relative"):
        raise CliError(2, f"{path}: normalization must be absolute|relative")
    out = _out_dir(args, cfg)

    t0 = time.perf_counter()
    try:
        if family == "noise":
            alpha = _as_float(cfg, "alpha", float("nan"), path)
            if not np.isfinite(alpha):
                raise CliError(2, f"{path}: family=noise requires an 'alpha' key")
            rows = noise_sweep(alpha, grid, functional, samples, seed,
                               restarts=restarts, workers=workers)
            param_names = ["noise_fraction"]
        else:
            probe = make_state(family, _MAX_ENTANGLED[family], 0.0)
            if probe.local_dim != functional.outcomes:
                raise CliError(3, f"{path}: family {family!r} is d={probe.local_dim}, "
                                  f"{functional.kind} needs d={functional.outcomes}")
            rows = sweep_family(family, grid, functional, samples, seed, noise,
                                restarts=restarts, workers=workers)
            param_names = [family]
    except (DimensionError, ArityError) as exc:
        raise CliError(3, f"{path}: {exc}") from None
    wall = time.perf_counter() - t0

    header, out_rows, estimates = _sweep_rows_to_csv(
        rows, param_names, normalization, cfg.get("normalize_to")
    )
    write_csv(out / "results.csv", header, out_rows)
    manifest = build_manifest(
        "sweep", functional=functional.kind,
        state={"family": family, "grid": grid, "noise": noise,
               **({"alpha": _as_float(cfg, "alpha", 0.0, path)} if family == "noise" else {})},
        space=_space_payload(functional), samples=samples, seed=seed, workers=workers,
        normalization=normalization,
        estimates={k: estimate_payload(v) for k, v in estimates.items()},
        extra={"restarts": restarts, "argmax_param": list(argmax_row(rows).params)},
        wall_time_s=wall,
    )
    write_manifest(out / "manifest.json", manifest)
    if _as_bool(cfg, "plot", True, path):
        from . import plots

        if family == "noise":
            plots.noise_figure(rows, out / "sweep.png")
        else:
            plots.sweep_figure(rows, out / "sweep.png", param_names[0])
    best = argmax_row(rows)
    print(f"sweep: {len(rows)} rows, V argmax at {param_names[0]}="
          f"{best.params[0]:.6g} (fraction {best.volume.fraction:.6g})")
    return 0


_SECTION_SCHEMA = {
    "gamma": "state parameter", "noise": "noise fraction", "resolution": "int",
    "axis1": "phase coordinate, e.g. a1_j0", "axis2": "phase coordinate, e.g. b2_j2",
    "reading": "ramp|constant|linear", "out": "output directory", "plot": "bool",
}


def cmd_section(args) -> int:
    path = args.config
    cfg = read_config(path, _SECTION_SCHEMA)
    gamma = _as_float(cfg, "gamma", float("nan"), path)
    if not np.isfinite(gamma):
        raise CliError(2, f"{path}: missing required key 'gamma'")
    resolution = _as_int(cfg, "resolution", 512, path)
    if resolution < 2:
        raise CliError(2, f"{path}: resolution must be >= 2")
    noise = _as_float(cfg, "noise", 0.0, path)
    axes = (cfg.get("axis1", "a1_j0"), cfg.get("axis2", "b2_j2"))
    reading = cfg.get("reading", "ramp")
    out = _out_dir(args, cfg)
    functional = functional_from_name("cglmp3")
    state = make_state("gamma", (gamma,), noise)
    t0 = time.perf_counter()
    try:
        fixed = section_fixed_point(reading)
        grid = section_2d(state, functional, fixed, axes, resolution)
    except (AxisError, InvalidParameterError) as exc:
        raise CliError(2, f"{path}: {exc}") from None
    wall = time.perf_counter() - t0

    cell = (2 * np.pi / resolution) ** 2
    header = ["gamma", "noise", "axis1", "axis2", "resolution",
              "violating_cells", "cell_measure", "area"]
    write_csv(out / "results.csv", header,
              [[gamma, noise, axes[0], axes[1], resolution,
                int(grid.violation_mask.sum()), cell, grid.area]])
    write_mask_text(out / "mask.txt", grid.violation_mask)
    write_mask_rle(out / "mask.rle", grid.violation_mask)
    manifest = build_manifest(
        "section", functional=functional.kind,
        state={"family": "gamma", "params": [gamma], "noise": noise},
        space=_space_payload(functional), seed=None, workers=None,
        estimates={"area": grid.area, "violating_cells": int(grid.violation_mask.sum()),
                   "resolution": resolution, "axes": list(axes), "reading": reading,
                   "fixed_alice": np.asarray(grid.fixed_point.alice).tolist(),
                   "fixed_bob": np.asarray(grid.fixed_point.bob).tolist()},
        wall_time_s=wall,
    )
    write_manifest(out / "manifest.json", manifest)
    if _as_bool(cfg, "plot", True, path):
        from . import plots

        plots.section_figure(grid, out / "section.png", title=f"gamma={gamma:g}")
    print(f"section: gamma={gamma:g} resolution={resolution} area={grid.area:.6g} "
          f"({int(grid.violation_mask.sum())} violating cells)")
    return 0


_SURVEY_SCHEMA = {
    "grid1": "lambda1 grid", "grid2": "lambda2 grid", "grid": "shared grid",
    "functional": "inequality name", "samples": "int", "seed": "int",
    "restarts": "optimizer restarts", "workers": "int",
    "ratio_num": "l1,l2 of ratio numerator", "ratio_den": "l1,l2 of ratio denominator",
    "normalization": "absolute|relative", "normalize_to": "grid label of reference row",
    "out": "output directory", "plot": "bool",
}


def cmd_survey(args) -> int:
    path = args.config
    cfg = read_config(path, _SURVEY_SCHEMA)
    if "grid" in cfg and ("grid1" in cfg or "grid2" in cfg):
        raise CliError(2, f"{path}: give either 'grid' or 'grid1'/'grid2', not both")
    try:
        if "grid" in cfg:
            g1 = g2 = parse_grid(cfg["grid"], "grid")
        else:
            g1 = parse_grid(_require(cfg, "grid1", path), "grid1")
            g2 = parse_grid(_require(cfg, "grid2", path), "grid2")
    except ConfigError as exc:
        raise CliError(2, f"{path}: {exc}") from None
    if not g1 or not g2:
        raise CliError(2, f"{path}: survey grid is empty")
    functional = build_functional(cfg.get("functional", "cglmp4"), "functional")
    if functional.is_qubit or functional.outcomes != 4:
        raise CliError(3, f"{path}: survey runs on cglmp4, got {functional.kind}")
    samples = _as_int(cfg, "samples", None, path)
    seed = _as_int(cfg, "seed", 0, path)
    restarts = _as_int(cfg, "restarts", 24, path)
    workers = _as_int(cfg, "workers", args.workers, path)
    normalization = cfg.get("normalization", "absolute")
    out = _out_dir(args, cfg)

    t0 = time.perf_counter()
    rows = survey_region(g1, g2, functional, samples, seed,
                         restarts=restarts, workers=workers)
    # reference ratio between two (possibly off-grid) states, sampled after the grid
    ratio_info = {}
    num = tuple(float(v) for v in cfg.get("ratio_num", "1.0,1.0").split(","))
    den = tuple(float(v) for v in cfg.get("ratio_den", "0.739,0.739").split(","))
    offset = len(rows) * samples
    est_num = estimate_volume(make_state("lambda", num, 0.0), functional, samples=samples,
                              seed=seed, sample_offset=offset, workers=workers)
    est_den = estimate_volume(make_state("lambda", den, 0.0), functional, samples=samples,
                              seed=seed, sample_offset=offset + samples, workers=workers)
    if est_den.fraction > 0:
        ratio_info = {
            "ratio_num_state": list(num), "ratio_den_state": list(den),
            "ratio_num_fraction": est_num.fraction, "ratio_den_fraction": est_den.fraction,
            "volume_ratio": est_num.fraction / est_den.fraction,
        }
    wall = time.perf_counter() - t0

    header, out_rows, estimates = _sweep_rows_to_csv(
        rows, ["lambda1", "lambda2"], normalization, cfg.get("normalize_to")
    )
    write_csv(out / "results.csv", header, out_rows)
    best = argmax_row(rows)
    manifest = build_manifest(
        "survey", functional=functional.kind,
        state={"family": "lambda", "grid1": g1, "grid2": g2},
        space=_space_payload(functional), samples=samples, seed=seed, workers=workers,
        normalization=normalization,
        estimates={k: estimate_payload(v) for k, v in estimates.items()},
        extra={"restarts": restarts, "argmax_param": list(best.params), **ratio_info},
        wall_time_s=wall,
    )
    write_manifest(out / "manifest.json", manifest)
    if _as_bool(cfg, "plot", True, path):
        from . import plots

        plots.survey_figure(rows, out / "survey.png")
    msg = (f"survey: {len(rows)} grid points, V argmax at "
           f"(lambda1, lambda2) = ({best.params[0]:g}, {best.params[1]:g})")
    if ratio_info:
        msg += f", volume ratio {ratio_info['volume_ratio']:.4g}"
    print(msg)
    return 0


_PREDICATES = {
    "half-phase": ("torus", 12, 0.5, "phi_1 < pi"),
    "cap": ("spheres", 4, 0.25, "cos(theta_1) > 0.5"),
    "triangle": ("torus", 2, 0.5, "phi_1 + phi_2 < 2 pi"),
}


def _predicate_fn(name: str):
    if name == "half-phase":
        return lambda batch: batch[:, 0] < np.pi
    if name == "cap":
        return lambda batch: batch[:, 0, 2] > 0.5
    return lambda batch: batch[:, 0] + batch[:, 1] < 2 * np.pi


def cmd_calibrate(args) -> int:
    if args.predicate not in _PREDICATES:
        raise CliError(2, f"--predicate: unknown predicate {args.predicate!r}; "
                          f"choose from {sorted(_PREDICATES)}")
    kind, size, expected, description = _PREDICATES[args.predicate]
    space = spheres(size) if kind == "spheres" else torus(size)
    out = _out_dir(args)
    t0 = time.perf_counter()
    est = calibrate_estimator(space, _predicate_fn(args.predicate), args.samples, args.seed)
    wall = time.perf_counter() - t0
    sigma = est.stderr if est.stderr > 0 else 1.0
    pull = (est.fraction - expected) / sigma
    header = ["predicate", "space", "expected", "samples", "hits", "fraction",
              "stderr", "ci_low", "ci_high", "pull"]
    write_csv(out / "results.csv", header,
              [[args.predicate, f"{kind}({size})", expected, est.samples, est.hits,
                est.fraction, est.stderr, est.ci95[0], est.ci95[1], pull]])
    manifest = build_manifest(
        "calibrate", space={"kind": kind, "size": size, "total_volume": space.total_volume},
        samples=args.samples, seed=args.seed,
        estimates={"predicate": description, "expected": expected,
                   **estimate_payload(est), "pull": pull},
        wall_time_s=wall,
    )
    write_manifest(out / "manifest.json", manifest)
    print(f"calibrate {args.predicate}: fraction {est.fraction:.6g} vs expected "
          f"{expected:g} (pull {pull:+.2f} sigma, seed {args.seed})")
    return 0


# ---------------------------------------------------------------------------
# argument parser
# ---------------------------------------------------------------------------

def _add_common(sub, *, samples=True, seed=True):
    if samples:
        sub.add_argument("--samples", type=int, default=1_000_000,
                         help="Monte Carlo sample count (default 1e6)")
    if seed:
        sub.add_argument("--seed", type=int, default=0, help="random stream seed (default 0)")
    sub.add_argument("--workers", type=int, default=default_workers(),
                     help="parallel worker cap (default $BELLVOLUME_WORKERS or 1); "
                          "results do not depend on it")
    sub.add_argument("--out", help="output directory (default current directory)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellvolume",
        description="Estimate the violation-volume nonlocality measure of bipartite states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("volume", help="Monte Carlo violation volume of one state")
    p.add_argument("--state", required=True,
                   help="state spec, e.g. alpha=0.707 | gamma=1.0,noise=0.2 | lambda=1.0,1.0")
    p.add_argument("--functional", required=True, help="|".join(_FUNCTIONALS))
    p.add_argument("--normalization", choices=("absolute", "relative"), default="absolute",
                   help="relative divides by the maximally entangled state's fraction")
    p.add_argument("--target-stderr", type=float, default=None,
                   help="grow the sample count until this standard error is reached")
    _add_common(p)
    p.set_defaults(fn=cmd_volume)

    p = sub.add_parser("maximize", help="maximum functional value over settings")
    p.add_argument("--state", required=True)
    p.add_argument("--functional", required=True, help="|".join(_FUNCTIONALS))
    p.add_argument("--restarts", type=int, default=64)
    _add_common(p, samples=False)
    p.set_defaults(fn=cmd_maximize)

    for name, handler, blurb in [
        ("sweep", cmd_sweep, "family parameter sweep (entanglement, I_max, V per point)"),
        ("section", cmd_section, "2-D violation-set section through the phase torus"),
        ("survey", cmd_survey, "two-parameter ququart survey"),
    ]:
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--config", required=True, help="key=value config file")
        p.add_argument("--workers", type=int, default=default_workers())
        p.add_argument("--out", help="output directory (overrides config)")
        p.set_defaults(fn=handler)

    p = sub.add_parser("calibrate", help="estimator self-test on known-measure predicates")
    p.add_argument("--predicate", required=True, help="|".join(sorted(_PREDICATES)))
    _add_common(p)
    p.set_defaults(fn=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError:
        raise
    except (DimensionError, ArityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InvalidParameterError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
