"""Command-line interface.

    specres filter    --poles 1,0 --k 1 --scales 1,2
    specres estimate  --model circle --k 0 --lambda 1e8 [--dixmier]
    specres sweep     --model torus2 --k 1 --cutoffs 1e4,1e5,1e6 [--format json]
    specres localized --model circle --keep even --k 0 --lambda 1e8
    specres oracle    --model sphere

Exit status: 0 success, 2 usage/configuration, 3 numerical failure,
4 input/output or parse error.  Set SPECRES_QUIET=1 to silence progress
messages on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from specres.errors import ConfigError, InputError, NumericalError, SpecResError
from specres.estimator import (EstimateResult, convergence_slope, dixmier_baseline,
                               estimate_coefficient, sweep, to_zeta_residue)
from specres.filters import Filter, PoleSet, build_filter
from specres.localized import (WeightedSpectrum, circle_projection_heat_trace,
                               circle_projection_weights, estimate_localized,
                               load_weighted_spectrum)
from specres.models import (FIT_TIMES, HEAT_TRACES, MODELS, OracleData, Spectrum,
                            fit_heat_coefficients, load_spectrum)
from specres.special_functions import gamma, is_gamma_pole

COMMANDS = ("filter", "estimate", "sweep", "localized", "oracle")
MODEL_NAMES = ("circle", "torus2", "sphere", "file")
CSV_COLUMNS = ("lambda", "m", "epsilon", "n_terms", "estimate", "oracle", "abs_error", "rel_error")


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: str | None = None
    k: int | None = None
    cutoff: float | None = None
    cutoffs: tuple[float, ...] = ()
    m: float | None = None
    poles: tuple[float, ...] | None = None
    scales: tuple[float, ...] | None = None
    input: Path | None = None
    filter_file: Path | None = None
    keep: str = "even"
    format: str | None = None
    output: Path | None = None
    dixmier: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        fmt = self.output_format
        if fmt not in ("csv", "json"):
            raise ConfigError(f"unknown output format {fmt!r}")
        if self.command in ("filter", "oracle") and fmt != "json":
            raise ConfigError(f"{self.command} only writes json")
        if self.command == "filter":
            if self.poles is None and self.filter_file is None:
                raise ConfigError("filter needs --poles")
            return
        if self.model is None:
            raise ConfigError(f"{self.command} needs --model")
        if self.model not in MODEL_NAMES:
            raise ConfigError(f"unknown model {self.model!r}")
        if self.command == "oracle":
            if self.model == "file":
                raise ConfigError("oracle is only defined for the built-in models")
            return
        if self.model == "file":
            if self.input is None:
                raise ConfigError("--model file requires --input")
            if self.poles is None and self.filter_file is None:
                raise ConfigError("--model file requires --poles (or --filter-file)")
        if self.command == "sweep":
            if len(self.cutoffs) < 2:
                raise ConfigError("sweep needs at least 2 cutoffs")
        elif self.cutoff is None:
            raise ConfigError(f"{self.command} needs --lambda")
        if self.dixmier and self.command != "estimate":
            raise ConfigError("--dixmier applies to estimate only")

    @property
    def output_format(self) -> str:
        if self.format is not None:
            return self.format
        return "csv" if self.command == "sweep" else "json"


# -- formatting ---------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dump_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dump_json(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dump_json(v) for v in obj) + "]"
        items = [pad + dump_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return _fmt_float(value)
    return str(value)


def results_csv(results: Sequence[EstimateResult]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in results:
        row = r.to_dict()
        lines.append(",".join(_csv_cell(row[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _progress(message: str) -> None:
    if os.environ.get("SPECRES_QUIET") != "1":
        print(message, file=sys.stderr)


# -- command implementations -------------------------------------------------

def _load_filter(config: RunConfig, default_poles: Sequence[float] | None) -> Filter:
    if config.filter_file is not None:
        try:
            data = json.loads(Path(config.filter_file).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise InputError(f"{config.filter_file}: invalid JSON ({exc})") from exc
        try:
            return Filter.from_dict(data)
        except (KeyError, TypeError) as exc:
            raise InputError(f"{config.filter_file}: not a filter description ({exc})") from exc
    poles = config.poles if config.poles is not None else default_poles
    k = config.k
    if k is None:
        k = len(poles) - 1 if config.command == "filter" else 0
    return build_filter(PoleSet.of(poles, k), config.scales)


def _spectrum(config: RunConfig, cutoff: float) -> Spectrum:
    if config.model == "file":
        return load_spectrum(config.input)
    return MODELS[config.model](cutoff)


def _weighted(config: RunConfig, cutoff: float) -> WeightedSpectrum:
    if config.model == "file":
        return load_weighted_spectrum(config.input)
    if config.model == "circle":
        return circle_projection_weights(cutoff, config.keep)
    spec = MODELS[config.model](cutoff)
    # Identity localizer: the plain heat coefficients apply.
    wspec = WeightedSpectrum.from_spectrum(spec)
    return WeightedSpectrum(wspec.eigenvalues, wspec.weights, 1.0, wspec.description,
                            spec.oracle)


def _model_poles(config: RunConfig, oracle: OracleData | None) -> tuple[float, ...] | None:
    return oracle.poles if oracle is not None else config.poles


def _run_filter(config: RunConfig) -> str:
    filt = _load_filter(config, None)
    return dump_json(filt.to_dict()) + "\n"


def _emit_results(config: RunConfig, results: list[EstimateResult], extra=None) -> str:
    if config.output_format == "csv":
        return results_csv(results)
    if config.command == "sweep":
        return dump_json([r.to_dict() for r in results]) + "\n"
    data = results[0].to_dict()
    if extra:
        data.update(extra)
    return dump_json(data) + "\n"


def _run_estimate(config: RunConfig) -> str:
    spec = _spectrum(config, config.cutoff)
    filt = _load_filter(config, _model_poles(config, spec.oracle))
    _progress(f"estimate: {spec.description}, k={filt.k}, poles={filt.poles.active}, "
              f"Lambda={config.cutoff:g}")
    result = estimate_coefficient(spec, filt, config.cutoff, config.m)
    extra = {}
    s_k = filt.poles.target
    extra["zeta_residue"] = None if is_gamma_pole(s_k) else to_zeta_residue(result.estimate, s_k)
    if config.dixmier:
        s0 = filt.poles.leading
        value = gamma(s0) * dixmier_baseline(spec, s0, config.cutoff)
        extra["dixmier"] = value
        extra["dixmier_rel_error"] = (abs(value - result.oracle) / abs(result.oracle)
                                      if filt.k == 0 and result.oracle else None)
    return _emit_results(config, [result], extra)


def _run_sweep(config: RunConfig) -> str:
    top = max(config.cutoffs)
    spec = _spectrum(config, top)
    filt = _load_filter(config, _model_poles(config, spec.oracle))
    _progress(f"sweep: {spec.description}, k={filt.k}, {len(config.cutoffs)} cutoffs")
    results = sweep(spec, filt, config.cutoffs, config.m)
    if len(results) >= 3 and all(r.abs_error for r in results):
        _progress(f"sweep: slope of log|error| vs log epsilon = {convergence_slope(results):.4f}")
    return _emit_results(config, results)


def _run_localized(config: RunConfig) -> str:
    wspec = _weighted(config, config.cutoff)
    filt = _load_filter(config, _model_poles(config, wspec.oracle))
    _progress(f"localized: {wspec.description}, k={filt.k}, Lambda={config.cutoff:g}")
    result = estimate_localized(wspec, filt, config.cutoff, config.m)
    return _emit_results(config, [result], {"bound": wspec.bound})


def _run_oracle(config: RunConfig) -> str:
    spec = MODELS[config.model](4.0)
    oracle = spec.oracle
    trace = HEAT_TRACES[config.model]
    times = FIT_TIMES[config.model]
    fit = fit_heat_coefficients(trace, oracle.poles, times)
    check = fit_heat_coefficients(trace, oracle.poles, [t / 10 for t in times])
    data = {
        "model": config.model,
        "poles": list(oracle.poles),
        "coefficients": list(oracle.coefficients),
        "fit_times": list(times),
        "fit": list(fit),
        "fit_times_check": [t / 10 for t in times],
        "fit_check": list(check),
    }
    if config.model == "circle":
        projections = {}
        for keep in ("even", "odd"):
            proj = circle_projection_weights(4.0, keep).oracle
            ptimes = (1e-4, 1e-5)
            projections[keep] = {
                "coefficients": list(proj.coefficients),
                "fit_times": list(ptimes),
                "fit": list(fit_heat_coefficients(
                    lambda t, keep=keep: circle_projection_heat_trace(t, keep),
                    proj.poles, ptimes)),
            }
        data["projections"] = projections
    return dump_json(data) + "\n"


_RUNNERS = {
    "filter": _run_filter,
    "estimate": _run_estimate,
    "sweep": _run_sweep,
    "localized": _run_localized,
    "oracle": _run_oracle,
}


def run(config: RunConfig) -> tuple[int, str]:
    """Execute ``config``; return the exit status and the report text.

    Failures yield an empty report and a one-line diagnostic on stderr.
    """
    try:
        config.validate()
        return 0, _RUNNERS[config.command](config)
    except SpecResError as exc:
        code = exc.exit_code
        message = str(exc)
    except OSError as exc:
        code, message = 4, str(exc)
    except ValueError as exc:
        code, message = 2, str(exc)
    print(f"specres {config.command}: error: {message}", file=sys.stderr)
    return code, ""


# -- argument parsing ----------------------------------------------------------

def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specres",
        description="Heat coefficients and spectral zeta residues from partial spectra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, model=True, cutoff=True):
        if model:
            p.add_argument("--model", choices=MODEL_NAMES)
            p.add_argument("--input", type=Path, help="spectrum file for --model file")
        p.add_argument("--poles", type=_float_list, help="decreasing poles, e.g. 1,0")
        p.add_argument("--k", type=int, help="target pole index (0-based)")
        p.add_argument("--scales", type=_float_list, help="filter scales >= 1")
        p.add_argument("--filter-file", type=Path, help="filter JSON from 'specres filter'")
        if cutoff:
            p.add_argument("--m", type=float, help="schedule parameter, must exceed s_0 - s_k")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--output", type=Path, help="write the report here instead of stdout")

    p = sub.add_parser("filter", help="build a filter and print it as JSON")
    p.add_argument("action", nargs="?", choices=("show",), default="show")
    common(p, model=False, cutoff=False)

    p = sub.add_parser("estimate", help="estimate one heat coefficient")
    common(p)
    p.add_argument("--lambda", dest="cutoff", type=float, required=True)
    p.add_argument("--dixmier", action="store_true",
                   help="also report Gamma(s_0) times the logarithmic (Dixmier) trace")

    p = sub.add_parser("sweep", help="estimates over increasing cutoffs")
    common(p)
    p.add_argument("--cutoffs", type=_float_list, required=True)

    p = sub.add_parser("localized", help="localized coefficient from weighted spectra")
    common(p)
    p.add_argument("--lambda", dest="cutoff", type=float, required=True)
    p.add_argument("--keep", choices=("even", "odd"), default="even",
                   help="parity projection for --model circle")

    p = sub.add_parser("oracle", help="tabulated and brute-force fitted heat coefficients")
    p.add_argument("--model", choices=MODEL_NAMES, required=True)
    p.add_argument("--format", choices=("json",))
    p.add_argument("--output", type=Path)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    get = lambda name, default=None: getattr(args, name, default)  # noqa: E731
    return RunConfig(
        command=args.command,
        model=get("model"),
        k=get("k"),
        cutoff=get("cutoff"),
        cutoffs=tuple(get("cutoffs") or ()),
        m=get("m"),
        poles=get("poles"),
        scales=get("scales"),
        input=get("input"),
        filter_file=get("filter_file"),
        keep=get("keep", "even"),
        format=get("format"),
        output=get("output"),
        dixmier=bool(get("dixmier", False)),
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    code, report = run(config)
    if code != 0:
        return code
    if config.output is None:
        sys.stdout.write(report)
        return 0
    try:
        Path(config.output).write_text(report, encoding="utf-8")
    except OSError as exc:
        print(f"specres {config.command}: error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
