"""Command-line front end: ``toeprod <command> --config cfg.json --out DIR``.

Every command reads a JSON config, validates it against a schema (unknown
keys rejected), runs one study and writes CSV/JSON files into ``--out``.
Nothing is written unless the whole command succeeds.  Run metadata
(timestamp, versions, resolved config) goes into a ``.meta.json`` sidecar so
that the data files are byte-identical across reruns.

Exit status: 0 success, 1 invalid config, 2 numerical failure (the error
class name is printed on stderr).
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import os
import sys

import jsonschema
import numpy as np

from . import __version__
from .errors import ToeprodError
from .gauss import SimulationConfig, simulate_quadratic_forms, tail_csv, tail_study
from .ldp import rate_function
from .matrices import default_band, widom_residual
from .spectrum import (
    SpectrumResult,
    convergence_sweep,
    essential_interval,
    example1_limits,
    product_spectrum,
)
from .symbol import DEFAULT_QUAD_POINTS, AR1Density, symbol_from_json

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


class ConfigError(Exception):
    pass


# -- schemas -----------------------------------------------------------------

_SYMBOL = {
    "oneOf": [
        {"type": "string"},
        {"type": "object", "required": ["type"]},
    ]
}
_INT_POS = {"type": "integer", "minimum": 0}
_LIMITS = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "example1": {
                    "type": "object",
                    "properties": {"a": {"type": "number"}, "theta": {"type": "number"}},
                    "required": ["a", "theta"],
                    "additionalProperties": False,
                }
            },
            "required": ["example1"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"lambda_min": {"type": "number"}, "lambda_max": {"type": "number"}},
            "required": ["lambda_min", "lambda_max"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"measure_n": {"type": "integer", "minimum": 1}},
            "required": ["measure_n"],
            "additionalProperties": False,
        },
    ]
}
_XGRID = {
    "oneOf": [
        {"type": "array", "items": {"type": "number"}, "minItems": 1},
        {
            "type": "object",
            "properties": {
                "start": {"type": "number"},
                "stop": {"type": "number"},
                "num": {"type": "integer", "minimum": 1},
            },
            "required": ["start", "stop", "num"],
            "additionalProperties": False,
        },
    ]
}


def _obj(props, required):
    return {"type": "object", "properties": props, "required": required, "additionalProperties": False}


SCHEMAS = {
    "spectrum": _obj(
        {"f": _SYMBOL, "g": _SYMBOL, "n": _INT_POS, "quad_points": {"type": "integer", "minimum": 8}},
        ["f", "g", "n"],
    ),
    "converge": _obj(
        {
            "f": _SYMBOL,
            "g": _SYMBOL,
            "n_list": {"type": "array", "items": _INT_POS, "minItems": 1},
            "reference": _LIMITS,
            "quad_points": {"type": "integer", "minimum": 8},
        },
        ["f", "g", "n_list"],
    ),
    "widom-check": _obj(
        {
            "f": _SYMBOL,
            "g": _SYMBOL,
            "n": {"oneOf": [_INT_POS, {"type": "array", "items": _INT_POS, "minItems": 1}]},
            "band": {"type": "integer", "minimum": 1},
            "tol": {"type": "number", "exclusiveMinimum": 0},
        },
        ["f", "g", "n"],
    ),
    "essential": _obj({"f": _SYMBOL, "g": _SYMBOL}, ["f", "g"]),
    "example1": _obj({"a": {"type": "number"}, "theta": {"type": "number"}}, ["a", "theta"]),
    "ldp": _obj({"f": _SYMBOL, "g": _SYMBOL, "limits": _LIMITS, "x": _XGRID}, ["f", "g", "limits", "x"]),
    "simulate": _obj(
        {
            "f": _SYMBOL,
            "theta": {"type": "number", "exclusiveMinimum": -1, "exclusiveMaximum": 1},
            "n": {"type": "integer", "minimum": 1},
            "replicates": {"type": "integer", "minimum": 1},
            "seed": {"type": "integer", "minimum": 0},
            "thresholds": {"type": "array", "items": {"type": "number"}, "minItems": 1},
            "limits": _LIMITS,
        },
        ["f", "theta", "n", "replicates", "seed", "thresholds"],
    ),
}


# -- helpers -------------------------------------------------------------------

def _symbol(cfg, key):
    try:
        return symbol_from_json(cfg[key])
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad symbol {key!r}: {exc}") from None


def _limits(desc, f, g):
    if "example1" in desc:
        e = desc["example1"]
        try:
            return example1_limits(e["a"], e["theta"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if "measure_n" in desc:
        return product_spectrum(f, g, desc["measure_n"])
    return (desc["lambda_min"], desc["lambda_max"])


def _xgrid(desc):
    if isinstance(desc, list):
        return [float(x) for x in desc]
    return np.linspace(desc["start"], desc["stop"], desc["num"]).tolist()


def _json_text(obj) -> str:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        return v

    return json.dumps(clean(obj), indent=2, sort_keys=True) + "\n"


# -- commands ------------------------------------------------------------------
# each returns (files: dict name -> text, summary: str)

def cmd_spectrum(cfg):
    f, g = _symbol(cfg, "f"), _symbol(cfg, "g")
    res = product_spectrum(f, g, cfg["n"], quad_points=cfg.get("quad_points", DEFAULT_QUAD_POINTS))
    lines = ["k,eigenvalue"] + [f"{k},{float(v)!r}" for k, v in enumerate(res.eigenvalues)]
    summary = {
        "n": res.n,
        "lambda_min": res.lambda_min,
        "lambda_max": res.lambda_max,
        "essential": [res.essential.lo, res.essential.hi],
        "norm_bound": res.norm_bound,
    }
    return {"spectrum.csv": "\n".join(lines) + "\n", "spectrum.json": _json_text(summary)}, (
        f"lambda_min={res.lambda_min:.12g} lambda_max={res.lambda_max:.12g}"
    )


def cmd_converge(cfg):
    f, g = _symbol(cfg, "f"), _symbol(cfg, "g")
    ref = _limits(cfg["reference"], f, g) if "reference" in cfg else None
    if isinstance(ref, SpectrumResult):
        ref = (ref.lambda_min, ref.lambda_max)
    try:
        rep = convergence_sweep(f, g, cfg["n_list"], reference=ref,
                                quad_points=cfg.get("quad_points", DEFAULT_QUAD_POINTS))
    except ValueError as exc:
        if isinstance(exc, ToeprodError):
            raise
        raise ConfigError(str(exc)) from None
    return {"converge.csv": rep.csv_text()}, f"{len(rep.n)} orders"


def cmd_widom(cfg):
    f, g = _symbol(cfg, "f"), _symbol(cfg, "g")
    ns = cfg["n"] if isinstance(cfg["n"], list) else [cfg["n"]]
    band = cfg.get("band", default_band(f, g))
    tol = cfg.get("tol", 1e-10)
    rows = ["n,band,residual"]
    worst = 0.0
    for n in ns:
        r = widom_residual(f, g, n, band=band, tol=tol)
        worst = max(worst, r)
        rows.append(f"{n},{band},{r!r}")
    return {"widom.csv": "\n".join(rows) + "\n"}, f"max residual {worst:.3e}"


def cmd_essential(cfg):
    f, g = _symbol(cfg, "f"), _symbol(cfg, "g")
    iv = essential_interval(f, g)
    return {"essential.json": _json_text({"inf_fg": iv.lo, "sup_fg": iv.hi})}, f"[{iv.lo:.12g}, {iv.hi:.12g}]"


def cmd_example1(cfg):
    try:
        lim = example1_limits(cfg["a"], cfg["theta"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return {"example1.json": _json_text(lim.as_dict())}, (
        f"lambda_min_limit={lim.lambda_min_limit:.12g} lambda_max_limit={lim.lambda_max_limit:.12g}"
    )


def cmd_ldp(cfg):
    f, g = _symbol(cfg, "f"), _symbol(cfg, "g")
    rf = rate_function(f, g, _limits(cfg["limits"], f, g))
    summary = {"mu": rf.mu, "a": rf.a, "b": rf.b, "lambda_min": rf.lambda_min,
               "lambda_max": rf.lambda_max, "notes": rf.notes}
    return {"ldp.csv": rf.csv_text(_xgrid(cfg["x"])), "ldp.json": _json_text(summary)}, (
        f"mu={rf.mu:.12g} a={rf.a:.6g} b={rf.b:.6g}"
    )


def cmd_simulate(cfg):
    f = _symbol(cfg, "f")
    g = AR1Density(cfg["theta"])
    try:
        sim = SimulationConfig(cfg["theta"], cfg["n"], cfg["replicates"], cfg["seed"], tuple(cfg["thresholds"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rf = rate_function(f, g, _limits(cfg.get("limits", {"measure_n": 256}), f, g))
    values = simulate_quadratic_forms(sim, f)
    est = tail_study(sim, f, rf, values=values)
    return {"simulate.csv": tail_csv(est, sim)}, f"{sim.replicates} replicates, mean W = {values.mean():.6g}"


COMMANDS = {
    "spectrum": cmd_spectrum,
    "converge": cmd_converge,
    "widom-check": cmd_widom,
    "essential": cmd_essential,
    "example1": cmd_example1,
    "ldp": cmd_ldp,
    "simulate": cmd_simulate,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="toeprod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", default=".", help="output directory (default: cwd)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--quiet", action="store_true")
    return parser


def load_config(command, path, seed=None):
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    if seed is not None:
        if "seed" not in SCHEMAS[command]["properties"]:
            raise ConfigError(f"command {command!r} takes no seed")
        cfg["seed"] = seed
    try:
        jsonschema.validate(cfg, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config: {exc.message}") from None
    return cfg


def _write_outputs(out_dir, files, meta):
    os.makedirs(out_dir, exist_ok=True)
    for name, text in files.items():
        with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        with open(os.path.join(out_dir, name + ".meta.json"), "w", encoding="utf-8") as fh:
            fh.write(_json_text(meta))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.command, args.config, args.seed)
        files, summary = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ToeprodError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    meta = {
        "command": args.command,
        "config": cfg,
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "toeprod_version": __version__,
        "numpy_version": np.__version__,
    }
    _write_outputs(args.out, files, meta)
    if not args.quiet:
        print(f"{args.command}: {summary}")
        for name in files:
            print(f"  wrote {os.path.join(args.out, name)}")
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
