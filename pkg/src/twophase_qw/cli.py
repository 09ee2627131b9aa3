"""Command-line driver: simulations, closed forms, verification reports.

Subcommands: evolve, time-average, stationary, limit, singular, verify,
compare.  Angles accept plain radians or a "pi" suffix ("1.5pi");
initial states take a complex pair "--init 1,0" or the polar quadruple
"--init-polar a,phi1,b,phi2".  Measures are emitted as CSV (header
``x,value``) or JSON ({params, command, rows}) over the symmetric
range [-max(T, L), max(T, L)] with explicit zeros so outputs from
different commands align row-wise.

Exit codes: 0 ok, 2 config error, 3 verification failure, 4 I/O error.
The QW_TOL environment variable overrides the default tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .coin import ModelParams, NormalizationError, QubitState
from .evolution import Measure, distribution, evolve_window, time_average
from .gflimit import BranchAbsentError, lambda0, limit_measure, residue_norm_sq, singular_points
from .spectral import eigenvalues, normalizing_scale, stationary_profile
from .verify import correspondence_report, run_checks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3
EXIT_IO = 4


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    sigma_plus: float = 0.0
    sigma_minus: float = 0.0
    init: QubitState | None = None
    horizon: int | None = None
    radius: int = 30
    eigen_index: int = 1
    scale: complex = 1.0 + 0.0j
    normalize: bool = False
    output: str | None = None
    fmt: str = "csv"
    tol: float = 1e-12


def parse_angle(text: str) -> float:
    """Radians, or a pi-multiple like '1.5pi', '-0.5pi', 'pi'."""
    s = text.strip().lower()
    try:
        if s.endswith("pi"):
            head = s[:-2]
            if head in ("", "+", "-"):
                head += "1"
            value = float(head) * math.pi
        else:
            value = float(s)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"angle must be finite, got {text!r}")
    return value


def parse_complex(text: str) -> complex:
    s = text.strip().replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r}") from None


def parse_init(pair: str | None, polar: str | None) -> QubitState:
    """Initial state from either input form, renormalized per policy:
    accepted within 1e-9, renormalized with a warning within 1e-6,
    rejected beyond."""
    if (pair is None) == (polar is None):
        raise ConfigError("exactly one of --init or --init-polar is required")
    if pair is not None:
        parts = pair.split(",")
        if len(parts) != 2:
            raise ConfigError(f"--init wants two comma-separated components, got {pair!r}")
        state = QubitState(parse_complex(parts[0]), parse_complex(parts[1]))
    else:
        parts = polar.split(",")
        if len(parts) != 4:
            raise ConfigError(f"--init-polar wants a,phi1,b,phi2, got {polar!r}")
        try:
            state = QubitState.from_polar(
                float(parts[0]), parse_angle(parts[1]), float(parts[2]), parse_angle(parts[3])
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    dev = abs(state.norm_sq() - 1.0)
    if dev > 1e-6:
        raise ConfigError(f"initial state norm deviates by {dev:.3e} (> 1e-6); rejected")
    if dev > 1e-9:
        print(f"warning: renormalizing initial state (norm deviation {dev:.3e})", file=sys.stderr)
    nrm = math.sqrt(state.norm_sq())
    return QubitState(state.left / nrm, state.right / nrm)


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def measure_rows(m: Measure) -> list[dict]:
    return [{"x": int(x), "value": float(v)} for x, v in zip(m.positions(), m.mass)]


def format_measure_csv(m: Measure) -> str:
    lines = ["x,value"]
    lines.extend(f"{x},{_fmt(v)}" for x, v in zip(m.positions(), m.mass))
    return "\n".join(lines) + "\n"


def read_measure_csv(path: str) -> Measure:
    """Inverse of the CSV emission (used for round-trip checks)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines or lines[0] != "x,value":
        raise ValueError(f"{path}: not a measure CSV")
    xs = []
    vs = []
    for line in lines[1:]:
        x_str, v_str = line.split(",")
        xs.append(int(x_str))
        vs.append(float(v_str))
    return Measure(origin=xs[0], mass=np.array(vs, dtype=np.float64))


def pad_measure(m: Measure, radius: int) -> Measure:
    """Re-embed over [-radius, radius] with explicit zeros."""
    mass = np.zeros(2 * radius + 1, dtype=np.float64)
    for x, v in zip(m.positions(), m.mass):
        if -radius <= x <= radius:
            mass[x + radius] = v
    return Measure(origin=-radius, mass=mass)


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit_json(payload: dict, path: str | None) -> None:
    _write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", path)


def emit_measure(m: Measure, fmt: str, path: str | None, meta: dict) -> None:
    if fmt == "csv":
        _write_text(format_measure_csv(m), path)
    else:
        payload = dict(meta)
        payload["rows"] = measure_rows(m)
        _emit_json(payload, path)


def _params(config: RunConfig) -> ModelParams:
    return ModelParams(config.sigma_plus, config.sigma_minus)


def _meta(config: RunConfig, **extra) -> dict:
    meta = {
        "command": config.command,
        "params": {"sigma_plus": config.sigma_plus, "sigma_minus": config.sigma_minus},
    }
    meta.update(extra)
    return meta


def _span(config: RunConfig) -> int:
    return max(config.horizon or 0, config.radius)


def _cmd_evolve(config: RunConfig) -> int:
    m = distribution(evolve_window(_params(config), config.init, config.horizon))
    emit_measure(pad_measure(m, _span(config)), config.fmt, config.output, _meta(config, T=config.horizon))
    return EXIT_OK


def _cmd_time_average(config: RunConfig) -> int:
    m = time_average(_params(config), config.init, config.horizon)
    emit_measure(pad_measure(m, _span(config)), config.fmt, config.output, _meta(config, T=config.horizon))
    return EXIT_OK


def _cmd_stationary(config: RunConfig) -> int:
    params = _params(config)
    scale = config.scale
    if config.normalize:
        probe = eigenvalues(params)[config.eigen_index - 1]
        scale = complex(normalizing_scale(probe, params))
    pair = eigenvalues(params, c=scale)[config.eigen_index - 1]
    m = stationary_profile(pair, params, -_span(config), _span(config))
    emit_measure(
        m,
        config.fmt,
        config.output,
        _meta(config, j=config.eigen_index, c=[scale.real, scale.imag]),
    )
    return EXIT_OK


def _cmd_limit(config: RunConfig) -> int:
    params = _params(config)
    span = _span(config)
    mass = np.array(
        [limit_measure(params, config.init, x) for x in range(-span, span + 1)], dtype=np.float64
    )
    emit_measure(Measure(origin=-span, mass=mass), config.fmt, config.output, _meta(config))
    return EXIT_OK


def _cmd_singular(config: RunConfig) -> int:
    import cmath

    params = _params(config)
    pts = singular_points(params)
    rows = []
    for label, z in pts.points():
        family = "theta1" if label.startswith("theta1") else "theta2"
        rows.append(
            {
                "label": label,
                "theta": cmath.phase(z),
                "re": z.real,
                "im": z.imag,
                "abs_lambda0": abs(lambda0(cmath.phase(z), params)),
                "residue_norm_sq": residue_norm_sq(params, family),
            }
        )
    if config.fmt == "csv":
        lines = ["label,theta,re,im,abs_lambda0,residue_norm_sq"]
        lines.extend(
            f"{r['label']},{_fmt(r['theta'])},{_fmt(r['re'])},{_fmt(r['im'])},"
            f"{_fmt(r['abs_lambda0'])},{_fmt(r['residue_norm_sq'])}"
            for r in rows
        )
        _write_text("\n".join(lines) + "\n", config.output)
    else:
        _emit_json(dict(_meta(config), points=rows), config.output)
    return EXIT_OK


def _cmd_verify(config: RunConfig) -> int:
    checks = run_checks(tol=config.tol, horizon=config.horizon or 500)
    rows = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]
    all_passed = all(c.passed for c in checks)
    if config.fmt == "csv":
        lines = ["name,passed,detail"]
        lines.extend(f"{r['name']},{r['passed']},{r['detail']}" for r in rows)
        _write_text("\n".join(lines) + "\n", config.output)
    else:
        _emit_json(dict(_meta(config), checks=rows, passed=all_passed), config.output)
    for r in rows:
        status = "PASS" if r["passed"] else "FAIL"
        print(f"[{status}] {r['name']}: {r['detail']}", file=sys.stderr)
    return EXIT_OK if all_passed else EXIT_VERIFY


def _cmd_compare(config: RunConfig) -> int:
    report = correspondence_report(
        _params(config), config.init, radius=_span(config), horizon=config.horizon
    )
    if config.fmt == "csv":
        lines = ["x,simulated,limit,stationary_plus,stationary_minus"]
        for row in report["rows"]:
            lines.append(
                f"{row['x']},{_fmt(row.get('simulated', 0.0))},{_fmt(row['limit'])},"
                f"{_fmt(row['stationary_plus'])},{_fmt(row['stationary_minus'])}"
            )
        _write_text("\n".join(lines) + "\n", config.output)
    else:
        payload = dict(
            _meta(config, T=config.horizon),
            rows=report["rows"],
            summary={
                "c_plus": report["c_plus"],
                "c_minus": report["c_minus"],
                "max_gap_plus": report["max_gap_plus"],
                "max_gap_minus": report["max_gap_minus"],
                "periodicity_condition": report["periodicity_condition"],
            },
        )
        _emit_json(payload, config.output)
    return EXIT_OK


_HANDLERS = {
    "evolve": _cmd_evolve,
    "time-average": _cmd_time_average,
    "stationary": _cmd_stationary,
    "limit": _cmd_limit,
    "singular": _cmd_singular,
    "verify": _cmd_verify,
    "compare": _cmd_compare,
}

_NEEDS_INIT = {"evolve", "time-average", "limit", "compare"}
_NEEDS_HORIZON = {"evolve", "time-average"}


def run(config: RunConfig) -> int:
    """Dispatch a parsed configuration; returns the process exit code."""
    if config.command not in _HANDLERS:
        raise ConfigError(f"unknown command {config.command!r}")
    if config.command in _NEEDS_INIT and config.init is None:
        raise ConfigError(f"{config.command} requires an initial state")
    if config.command in _NEEDS_HORIZON and config.horizon is None:
        raise ConfigError(f"{config.command} requires --T")
    return _HANDLERS[config.command](config)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twophase-qw",
        description="Two-phase quantum walk with an origin defect: simulations and closed forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, init=False, horizon=None):
        p.add_argument("--sigma-plus", default="0", help="right-side angle (radians or 'pi' suffix)")
        p.add_argument("--sigma-minus", default="0", help="left-side angle")
        p.add_argument("--L", type=int, default=30, dest="radius", help="window radius for emission")
        p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
        p.add_argument("--tol", type=float, default=None, help="tolerance override (also QW_TOL)")
        if init:
            p.add_argument("--init", default=None, help="complex pair, e.g. '1,0' or '0.6,0.8i'")
            p.add_argument("--init-polar", default=None, help="polar quadruple a,phi1,b,phi2")
        if horizon is not None:
            p.add_argument("--T", type=int, default=horizon, dest="horizon", help="time horizon")

    add_common(sub.add_parser("evolve", help="position distribution after T steps"), init=True, horizon=-1)
    add_common(sub.add_parser("time-average", help="finite-horizon averaged distribution"), init=True, horizon=-1)
    p = sub.add_parser("stationary", help="stationary measure of one eigenpair")
    add_common(p)
    p.add_argument("--j", type=int, choices=(1, 2, 3, 4), default=1, dest="eigen_index")
    p.add_argument("--c", default="1", dest="scale", help="free complex scale of the eigenvector")
    p.add_argument("--normalize", action="store_true", help="choose |c| so the measure sums to 1")
    add_common(sub.add_parser("limit", help="time-averaged limit measure"), init=True)
    add_common(sub.add_parser("singular", help="singular points and residue norms"))
    add_common(sub.add_parser("verify", help="run the invariant suite"), horizon=500)
    add_common(sub.add_parser("compare", help="stationary vs limit vs simulation report"), init=True, horizon=1000)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    tol = args.tol
    if tol is None:
        env = os.environ.get("QW_TOL")
        if env is not None:
            try:
                tol = float(env)
            except ValueError:
                raise ConfigError(f"QW_TOL must be a float, got {env!r}") from None
        else:
            tol = 1e-12
    if tol <= 0:
        raise ConfigError(f"tolerance must be positive, got {tol}")
    init = None
    if getattr(args, "init", None) is not None or getattr(args, "init_polar", None) is not None:
        init = parse_init(getattr(args, "init", None), getattr(args, "init_polar", None))
    horizon = getattr(args, "horizon", None)
    if horizon == -1:
        horizon = None
    if horizon is not None and horizon < 1:
        raise ConfigError(f"--T must be a positive integer, got {horizon}")
    radius = args.radius
    if radius < 0:
        raise ConfigError(f"--L must be non-negative, got {radius}")
    return RunConfig(
        command=args.command,
        sigma_plus=parse_angle(args.sigma_plus),
        sigma_minus=parse_angle(args.sigma_minus),
        init=init,
        horizon=horizon,
        radius=radius,
        eigen_index=getattr(args, "eigen_index", 1),
        scale=parse_complex(getattr(args, "scale", "1")),
        normalize=getattr(args, "normalize", False),
        output=args.output,
        fmt=args.fmt,
        tol=tol,
    )


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return run(config)
    except (ConfigError, NormalizationError, BranchAbsentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
