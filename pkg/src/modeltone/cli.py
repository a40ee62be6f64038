"""Command-line front end: one scenario per invocation, one JSON report on stdout.

    modeltone eig --kappa 2 --G 0 --R 1
    modeltone bound --kind cylinder --m 4 --G -1 --R 1.5707963
    modeltone spectrum --kind graph --q 2 --R 1 --Hz 0
    modeltone --config run.json --R 2

Exit status: 0 certified, 2 report emitted but a hypothesis failed, 1 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, fields
from typing import Any

from . import bounds, eig, model, spectrum
from .dsl import ExprError, parse, to_string

COMMANDS = ("model", "eig", "bound", "spectrum")
BOUND_KINDS = ("general", "cylinder", "euclidean", "pseudo_hyperbolic", "hyperbolic", "cone", "sphere")
SPECTRUM_KINDS = ("graph", "nonproper")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str | None = None
    kind: str | None = None
    m: int | None = None
    n: int | None = None
    q: int | None = None
    kappa: int | None = None
    j_max: int | None = None
    R: float | None = None
    r: float | None = None
    a: float | None = None
    b: float | None = None
    alpha: float | None = None
    beta: float | None = None
    theta: float | None = None
    r_max: float | None = None
    step: float | None = None
    rel_tol: float | None = None
    s0: float | None = None
    c1: float | None = None
    c2: float | None = None
    H_sup: float | None = None
    C_grad: float | None = None
    G: str | None = None
    f: str | None = None
    Hz: str | None = None
    z_seq: list | None = None
    cut_locus_ok: bool | None = None
    csv_out: str | None = None


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_INTS = {"m", "n", "q", "kappa", "j_max"}
_FLOATS = {"R", "r", "a", "b", "alpha", "beta", "theta", "r_max", "step", "rel_tol", "s0",
           "c1", "c2", "H_sup", "C_grad"}
_STRINGS = {"command", "kind", "G", "f", "Hz", "csv_out"}
_POSITIVE = {"R", "r", "a", "b", "theta", "r_max", "step", "rel_tol", "c1", "C_grad", "m", "n", "q",
             "kappa", "j_max"}
_NONNEG = {"s0", "c2", "H_sup"}

_REQUIRED = {
    ("model", None): ("G", "r_max"),
    ("eig", None): ("kappa", "G", "R"),
    ("bound", "general"): ("m", "G", "R"),
    ("bound", "cylinder"): ("m", "G", "R"),
    ("bound", "euclidean"): ("m", "R"),
    ("bound", "pseudo_hyperbolic"): ("m", "b", "beta", "G", "R"),
    ("bound", "hyperbolic"): ("m", "beta", "R"),
    ("bound", "cone"): ("m", "a", "G", "R"),
    ("bound", "sphere"): ("m", "r", "theta"),
    ("spectrum", "graph"): ("q", "R", "Hz"),
    ("spectrum", "nonproper"): ("m", "c1", "c2", "H_sup", "C_grad", "G", "j_max"),
}


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    if key in _INTS:
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                return int(value)
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return value
    if key in _FLOATS:
        if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "-inf", "infinity", "-infinity"):
            return float(value)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key}: expected a number, got {value!r}")
        return float(value)
    if key in _STRINGS:
        if isinstance(value, (int, float)) and not isinstance(value, bool) and key in ("G", "f", "Hz"):
            return repr(value)
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a string, got {value!r}")
        return value
    if key == "cut_locus_ok":
        if not isinstance(value, bool):
            raise ConfigError(f"cut_locus_ok: expected a boolean, got {value!r}")
        return value
    if key == "z_seq":
        if not isinstance(value, list) or not all(isinstance(x, (int, float)) for x in value):
            raise ConfigError("z_seq: expected a list of numbers")
        return [float(x) for x in value]
    raise ConfigError(f"unknown key {key!r}")


def config_from_mapping(data: dict[str, Any]) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    values = {}
    for key, value in data.items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown key {key!r}")
        values[key] = _coerce(key, value)
    return RunConfig(**values)


def validate(cfg: RunConfig) -> RunConfig:
    if cfg.command not in COMMANDS:
        raise ConfigError(f"command: expected one of {list(COMMANDS)}, got {cfg.command!r}")
    kind = None
    if cfg.command == "bound":
        if cfg.kind not in BOUND_KINDS:
            raise ConfigError(f"kind: expected one of {list(BOUND_KINDS)}, got {cfg.kind!r}")
        kind = cfg.kind
    elif cfg.command == "spectrum":
        if cfg.kind not in SPECTRUM_KINDS:
            raise ConfigError(f"kind: expected one of {list(SPECTRUM_KINDS)}, got {cfg.kind!r}")
        kind = cfg.kind
    elif cfg.kind is not None:
        raise ConfigError(f"kind: not used by command {cfg.command!r}")
    for key in _REQUIRED[(cfg.command, kind)]:
        if getattr(cfg, key) is None:
            raise ConfigError(f"{key}: required for {cfg.command}" + (f" --kind {kind}" if kind else ""))
    if cfg.command == "bound" and kind == "general" and cfg.f is not None and cfg.c1 is not None:
        raise ConfigError("general: give either f (mode a) or c1/c2 (mode b), not both")
    if cfg.csv_out is not None and cfg.command == "bound":
        raise ConfigError("csv_out: not available for bound (no profile to export)")
    for key in _POSITIVE:
        v = getattr(cfg, key)
        if v is not None and not v > 0:
            raise ConfigError(f"{key} must be positive")
    for key in _NONNEG:
        v = getattr(cfg, key)
        if v is not None and v < 0:
            raise ConfigError(f"{key} must be non-negative")
    for key in ("G", "f", "Hz"):
        v = getattr(cfg, key)
        if v is not None:
            try:
                parse(v)
            except ExprError as exc:
                raise ConfigError(f"{key}: {exc}") from None
    return cfg


def load_config(path: str, overrides: dict[str, Any] | None = None) -> RunConfig:
    """Read a JSON config; ``overrides`` (command-line values) win over the file."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    data = dict(data)
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return validate(config_from_mapping(data))


# --- JSON output ----------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# --- dispatch --------------------------------------------------------------------

def _rel_tol(cfg: RunConfig) -> float:
    return cfg.rel_tol if cfg.rel_tol is not None else 1e-8


def _steps(cfg: RunConfig, R: float) -> int:
    if cfg.step is None:
        return eig.DEFAULT_STEPS
    return max(2, math.ceil(R / cfg.step))


def _radius_hypotheses(profile, R, mdl=None) -> dict[str, Any]:
    flags = bounds.radius_flags(profile, R, mdl)
    return flags


def _run_model(cfg: RunConfig):
    profile = model.CurvatureProfile(cfg.G, cfg.s0)
    step = cfg.step if cfg.step is not None else cfg.r_max / 10_000
    mp = model.solve_coefficient(profile, cfg.r_max, step)
    R = cfg.R if cfg.R is not None else cfg.r_max
    flags = _radius_hypotheses(profile, R, mp)
    result = {
        "R0": mp.R0,
        "Rmono": mp.Rmono,
        "grid_points": int(mp.grid.size),
        "h": mp.h,
        "error_estimate": mp.tol,
        "g_end": float(mp.g[-1]),
        "gprime_end": float(mp.gprime[-1]),
        "sup_g_minus": model.sup_g_minus(profile, cfg.r_max),
        "admissible_radius": model.admissible_radius(profile, cfg.r_max),
    }
    if cfg.s0 is not None:
        tail = model.tail_criterion(profile)
        result["tail_criterion"] = {"holds": tail.holds, "sup": tail.sup, "witness": tail.witness}
    hyps = {"radius_admissible": flags["radius_admissible"], "warping_ok": True,
            "gprime_positive": flags["gprime_positive"]}
    return result, hyps, mp, {"step": step}


def _run_eig(cfg: RunConfig):
    profile = model.CurvatureProfile(cfg.G)
    steps = _steps(cfg, cfg.R)
    mp = model.model_for_radius(profile, cfg.R, steps)
    sol = eig.first_eigenvalue(mp if cfg.kappa > 1 else None, cfg.kappa, cfg.R, _rel_tol(cfg), steps)
    flags = _radius_hypotheses(profile, cfg.R, mp)
    margin = None
    if flags["gprime_positive"]:
        margin = eig.wolverine_margin(sol, mp)
    gm = model.sup_g_minus(profile, cfg.R)
    result = {
        "lambda1": sol.lambda1,
        "kappa": sol.kappa,
        "R": sol.R,
        "v_at_R": float(sol.v[-1]),
        "sup_g_minus": gm,
        "margin_hypothesis": sol.lambda1 >= sol.kappa * gm,
        "wolverine_margin": margin,
        "admissible_radius": flags["admissible_radius"],
        "Rmono": flags["Rmono"],
    }
    hyps = {"radius_admissible": flags["radius_admissible"], "warping_ok": True,
            "gprime_positive": flags["gprime_positive"]}
    return result, hyps, sol, {"step": cfg.R / steps, "rel_tol": _rel_tol(cfg)}


def _run_bound(cfg: RunConfig):
    kind = cfg.kind
    tol = cfg.rel_tol if cfg.rel_tol is not None else 1e-10
    if kind == "sphere":
        rep = bounds.tone_bound_sphere(cfg.m, cfg.r, cfg.theta, tol)
    elif kind == "euclidean":
        rep = bounds.tone_bound_euclidean(cfg.m, cfg.R, tol)
    elif kind == "hyperbolic":
        rep = bounds.tone_bound_hyperbolic(cfg.m, cfg.beta, cfg.R, tol)
    else:
        profile = model.CurvatureProfile(cfg.G)
        n = cfg.n if cfg.n is not None else 1
        kappa = cfg.m - n if kind == "general" else cfg.m - 1
        if kappa < 1:
            raise ConfigError("m must exceed n")
        mp = model.model_for_radius(profile, cfg.R)
        lam = eig.first_eigenvalue(mp if kappa > 1 else None, kappa, cfg.R, tol).lambda1
        if kind == "cylinder":
            rep = bounds.tone_bound_cylinder(cfg.m, mp, cfg.R, tol)
        elif kind == "pseudo_hyperbolic":
            rep = bounds.tone_bound_pseudo_hyperbolic(cfg.m, cfg.b, cfg.beta, lam, model=mp, R=cfg.R)
        elif kind == "cone":
            rep = bounds.tone_bound_cone(cfg.m, cfg.a, lam, model=mp, R=cfg.R)
        else:
            alpha = cfg.alpha if cfg.alpha is not None else -math.inf
            beta = cfg.beta if cfg.beta is not None else math.inf
            sc = bounds.WarpedScenario(m=cfg.m, n=n, q=cfg.q, G=profile, R=cfg.R,
                                       f=cfg.f if cfg.c1 is None else None,
                                       base_interval=(alpha, beta), c1=cfg.c1, c2=cfg.c2)
            rep = bounds.tone_bound_general(sc, lam, model=mp)
    return rep.to_dict(), rep.hypotheses(), rep, {"rel_tol": tol}


def _run_spectrum(cfg: RunConfig):
    tol = cfg.rel_tol if cfg.rel_tol is not None else 1e-12
    if cfg.kind == "graph":
        rep = spectrum.graph_discreteness(cfg.q, cfg.R, cfg.Hz, cfg.z_seq, tol)
        hyps = {"radius_admissible": True, "warping_ok": True, "gprime_positive": True,
                "z2Hz_to_zero": rep.details["hypothesis_z2Hz_to_zero"]}
    else:
        n = cfg.n if cfg.n is not None else 1
        rep = spectrum.nonproper_discreteness(cfg.m, n, cfg.c1, cfg.c2, cfg.H_sup, cfg.C_grad, cfg.G,
                                              cfg.j_max, tol)
        hyps = {"radius_admissible": False, "warping_ok": True, "gprime_positive": False}
        if rep.indices:
            tail_start = rep.indices[len(rep.indices) - max(2, len(rep.indices) // 4)]
            flags = _radius_hypotheses(model.CurvatureProfile(cfg.G), 2.0 / tail_start)
            hyps.update(radius_admissible=flags["radius_admissible"],
                        gprime_positive=flags["gprime_positive"])
    result = rep.to_dict()
    if len(rep.lower_bounds) >= 8:
        lim = spectrum.persson_limit(rep.lower_bounds)
        result["persson"] = {"verdict": lim.verdict, "liminf_estimate": lim.liminf_estimate,
                             "converged": lim.converged}
    return result, hyps, rep, {"rel_tol": tol}


_RUNNERS = {"model": _run_model, "eig": _run_eig, "bound": _run_bound, "spectrum": _run_spectrum}


def _inputs(cfg: RunConfig) -> dict[str, Any]:
    return {f.name: getattr(cfg, f.name) for f in fields(RunConfig)
            if getattr(cfg, f.name) is not None and f.name not in ("command", "csv_out")}


def run(cfg: RunConfig) -> tuple[dict[str, Any], int]:
    """Execute a validated config; returns the report and the exit status."""
    validate(cfg)
    t0 = time.perf_counter()
    result, hyps, obj, diag = _RUNNERS[cfg.command](cfg)
    hyps = {k: bool(v) for k, v in hyps.items()}
    hyps["cut_locus_ok"] = True if cfg.cut_locus_ok is None else cfg.cut_locus_ok
    certified = all(hyps.values())
    if cfg.csv_out:
        obj.to_csv(cfg.csv_out)
    diagnostics = {"step": diag.get("step"), "rel_tol": diag.get("rel_tol"),
                   "runtime_ms": (time.perf_counter() - t0) * 1e3}
    from .kernels import BACKEND
    diagnostics["backend"] = BACKEND
    report = {
        "command": cfg.command,
        "inputs": _inputs(cfg),
        "result": result,
        "hypotheses": hyps,
        "certified": certified,
        "diagnostics": diagnostics,
    }
    return report, 0 if certified else 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modeltone", description=__doc__.split("\n\n")[0])
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--kind")
    for name in sorted(_INTS):
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, type=int)
    for name in sorted(_FLOATS):
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float)
    for name in ("G", "f", "Hz"):
        p.add_argument(f"--{name}", dest=name)
    p.add_argument("--z-seq", dest="z_seq", type=lambda s: [float(x) for x in s.split(",")],
                   help="comma-separated, strictly decreasing")
    p.add_argument("--cut-locus-ok", dest="cut_locus_ok", action=argparse.BooleanOptionalAction, default=None,
                   help="assert that B_Q(o, R) avoids the cut locus (default: asserted)")
    p.add_argument("--csv-out", dest="csv_out")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k != "config" and v is not None}
    try:
        if args.config:
            cfg = load_config(args.config, overrides)
        else:
            cfg = validate(config_from_mapping(overrides))
        report, status = run(cfg)
    except (ConfigError, ExprError) as exc:
        print(f"modeltone: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"modeltone: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(dumps(report) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
