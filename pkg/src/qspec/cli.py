"""Command-line front end.

A single JSON config file describes the emitter and, where needed, the
pulse and sweep parameters; the subcommand selects which blocks are
required.  CSV outputs carry a ``# schema-version`` / ``model-hash``
header comment tying them to the config, and floats are written with
``repr`` so re-parsing reproduces the in-memory doubles exactly.

Exit codes: 0 success, 2 config error, 3 numerical-certification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import qfi as qfi_mod
from .emitter import EmitterModel, ParameterTag, emitter_from_json
from .errors import (
    GridTooCoarseError,
    InvalidPulseError,
    InvariantViolation,
    NoRootCertifiedError,
    OptimizerFailureError,
    PoleProximityError,
    WindowTooSmallError,
    ZeroFieldError,
)
from .pulses import build_grid, pulse_from_json
from .scattering import scatter_freq
from .search import brackets, find_extrema

SCHEMA_VERSION = 1

_CONFIG_ERRORS = (InvariantViolation, InvalidPulseError, ZeroFieldError)
_NUMERICAL_ERRORS = (
    OptimizerFailureError,
    NoRootCertifiedError,
    WindowTooSmallError,
    GridTooCoarseError,
    PoleProximityError,
)


class _ConfigError(Exception):
    pass


def _fmt(x) -> str:
    return repr(float(x))


def _model_hash(model: EmitterModel) -> str:
    blob = json.dumps(model.to_json_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _ConfigError(f"{path}: cannot read config: {exc}") from exc


def _get_model(config: dict) -> EmitterModel:
    if "emitter" not in config:
        raise _ConfigError("config is missing the 'emitter' block")
    return emitter_from_json(config["emitter"])


def _get_pulse(config: dict):
    if "pulse" not in config:
        raise _ConfigError("config is missing the 'pulse' block (required by this command)")
    return pulse_from_json(config["pulse"])


def _get_tag(config: dict, model: EmitterModel) -> ParameterTag:
    raw = config.get("parameter", "gamma")
    if raw == "gamma":
        return ParameterTag.gamma()
    if isinstance(raw, dict) and "detuning" in raw:
        j = int(raw["detuning"])
        if j > model.n:
            raise _ConfigError(f"parameter index {j} exceeds SES dimension {model.n}")
        return ParameterTag.detuning(j)
    raise _ConfigError(f"bad 'parameter' value {raw!r}; use \"gamma\" or {{\"detuning\": j}}")


def _write_csv(path, model: EmitterModel, header: list[str], rows):
    lines = [f"# schema-version={SCHEMA_VERSION} model-hash={_model_hash(model)}"]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(c if isinstance(c, str) else _fmt(c) for c in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _emit_summary(summary: dict, verbose_extra=None, verbose=False):
    if verbose and verbose_extra:
        summary = dict(summary, diagnostics=verbose_extra)
    json.dump(summary, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _diagnostics(model: EmitterModel, tag: ParameterTag) -> dict:
    ext = find_extrema(model, tag)
    return {
        "intervals": [list(iv) for iv in brackets(model).intervals],
        "candidates": [list(c) for c in ext.candidates],
        "has_dark_states": model.has_dark_states,
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_bounds(config, args, model):
    rate = model.gamma_rate
    tags = [ParameterTag.gamma()] + [ParameterTag.detuning(j) for j in range(1, model.n + 1)]
    rows = []
    summary = []
    for tag in tags:
        res = qfi_mod.qfi_bound(model, tag)
        name = "gamma" if tag.kind == "gamma" else f"detuning_{tag.j}"
        rows.append((name, rate**2 * res.bound, res.omega_max, res.omega_min))
        summary.append(
            {
                "parameter": name,
                "bound_gamma2": rate**2 * res.bound,
                "omega_max": res.omega_max,
                "omega_min": res.omega_min,
                "optimal_pulse": {
                    "shape": "delta_pair",
                    "omega_plus": res.omega_max,
                    "omega_minus": res.omega_min,
                },
            }
        )
    _write_csv(args.out, model, ["parameter", "bound_gamma2", "omega_max", "omega_min"], rows)
    extra = _diagnostics(model, ParameterTag.gamma()) if args.verbose else None
    _emit_summary({"bounds": summary}, extra, args.verbose)


def cmd_qfi(config, args, model):
    tag = _get_tag(config, model)
    pulse = _get_pulse(config)
    field = build_grid(model, pulse, budget=args.grid_budget)
    res = qfi_mod.evaluate(model, field, tag)
    rate = model.gamma_rate
    summary = {
        "parameter": str(tag),
        "qfi_gamma2": rate**2 * res.value,
        "bound_gamma2": rate**2 * res.bound,
        "saturation": res.saturation,
        "omega_max": res.omega_max,
        "omega_min": res.omega_min,
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    extra = _diagnostics(model, tag) if args.verbose else None
    _emit_summary(summary, extra, args.verbose)


def cmd_sweep_kappa(config, args, model):
    tag = _get_tag(config, model)
    rate = model.gamma_rate
    kappas_over = config.get("kappa_over_gamma")
    if kappas_over is None:
        kappas = None
    else:
        kappas = rate * np.asarray([float(k) for k in kappas_over])
    regs = tuple(config.get("regularizations", ("lorentzian", "gaussian", "rectangular")))
    rows = qfi_mod.sweep_kappa(
        model, tag, regs=regs, kappas=kappas, budget=args.grid_budget, threads=_threads()
    )
    _write_csv(args.out, model, ["reg", "kappa_over_gamma", "qfi_gamma2"], rows)


def cmd_bandwidth_sweep(config, args, model):
    rate = model.gamma_rate
    bw_over = config.get("bandwidth_over_gamma")
    bandwidths = None if bw_over is None else rate * np.asarray([float(b) for b in bw_over])
    families = tuple(
        config.get("families", ("gaussian", "rectangular", "decaying_exp", "rising_exp"))
    )
    rows = qfi_mod.bandwidth_sweep(
        model, families=families, bandwidths=bandwidths, budget=args.grid_budget, threads=_threads()
    )
    _write_csv(args.out, model, ["family", "bandwidth_over_gamma", "qfi_gamma2"], rows)
    maxima = {}
    for name, _, q in rows:
        maxima[name] = max(maxima.get(name, 0.0), q)
    _emit_summary({"family_maxima_gamma2": maxima})


def cmd_optimal_pulse(config, args, model):
    tag = _get_tag(config, model)
    kappa = float(config.get("kappa", 1e-3 * model.gamma_rate))
    reg = config.get("regularization", "gaussian")
    pulse = qfi_mod.optimal_pulse(model, tag, kappa, reg)
    summary = {
        "parameter": str(tag),
        "pulse": {
            "shape": "delta_pair",
            "omega_plus": pulse.omega_plus,
            "omega_minus": pulse.omega_minus,
            "kappa": pulse.kappa,
            "reg": pulse.reg,
            "phi": pulse.phi,
        },
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    extra = _diagnostics(model, tag) if args.verbose else None
    _emit_summary(summary, extra, args.verbose)


def cmd_scatter(config, args, model):
    pulse = _get_pulse(config)
    field = build_grid(model, pulse, budget=args.grid_budget)
    res = scatter_freq(model, field)
    rows = [
        (w, a.real, a.imag, b.real, b.imag, ph)
        for w, a, b, ph in zip(field.freqs, field.amps, res.out.amps, res.phase_curve)
    ]
    _write_csv(
        args.out,
        model,
        ["omega", "re_xi_in", "im_xi_in", "re_xi_out", "im_xi_out", "phase"],
        rows,
    )


_COMMANDS = {
    "bounds": cmd_bounds,
    "qfi": cmd_qfi,
    "sweep-kappa": cmd_sweep_kappa,
    "bandwidth-sweep": cmd_bandwidth_sweep,
    "optimal-pulse": cmd_optimal_pulse,
    "scatter": cmd_scatter,
}


def _threads() -> int:
    raw = os.environ.get("QSPEC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qspec",
        description="Precision bounds and optimal single-photon pulses for emitter spectroscopy",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", default=None, help="output CSV/JSON path (default: stdout)")
        p.add_argument("--grid-budget", type=int, default=4096, dest="grid_budget")
        p.add_argument("--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args.config)
        model = _get_model(config)
        _COMMANDS[args.command](config, args, model)
    except (_ConfigError,) + _CONFIG_ERRORS as exc:
        print(f"config error ({args.config}): {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical certification failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
