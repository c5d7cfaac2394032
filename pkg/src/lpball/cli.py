"""Experiment runner: sweep p around p_star and emit certified windows
next to empirical Hausdorff estimates as CSV or JSON.

Rows are computed independently per grid point and emitted in ascending p
order; identical configs byte-reproduce the output file.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import numpy as np

from .bounds import BoundLedger, ProblemParams, WindowPreconditionError, delta_window
from .hausdorff import CertificateSandwichError, hausdorff_estimate
from .sampling import SamplerConfig, ball_samples
from .spaces import BallSpec, MeasureSpace, make_space
from .urysohn import (
    Kernel,
    KernelConditionError,
    apply_operator,
    kernel_from_config,
    output_set_distance,
)
from .witness import witness_into_ball

__all__ = ["ExperimentConfig", "ExperimentRow", "ExperimentReport", "ConfigError",
           "run_experiment", "main"]

CSV_COLUMNS = ("p", "in_window", "delta0", "h1_lower", "certified_upper",
               "witness_max_l1", "samples", "seed")

_WITNESS_SAMPLE_CAP = 200


class ConfigError(Exception):
    def __init__(self, code: str, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.code = code
        self.field = field

    def to_json(self) -> str:
        return json.dumps(
            {"code": self.code, "message": str(self), "field": self.field},
            sort_keys=True,
        )


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str  # "ball_continuity" or "urysohn"
    params: ProblemParams
    space: MeasureSpace
    p_grid: tuple
    sampler: SamplerConfig
    output_path: str
    format: str = "csv"  # "csv" or "json"
    kernel: Optional[Kernel] = None

    def __post_init__(self):
        if self.mode not in ("ball_continuity", "urysohn"):
            raise ConfigError("invalid_mode", f"unknown mode {self.mode!r}", "mode")
        if self.format not in ("csv", "json"):
            raise ConfigError("invalid_format", f"unknown format {self.format!r}", "format")
        if not self.p_grid:
            raise ConfigError("empty_grid", "p_grid must be non-empty", "p_grid")
        for p in self.p_grid:
            if not p > 1.0:
                raise ConfigError("invalid_grid", f"p_grid values must be > 1, got {p}", "p_grid")
        if self.mode == "urysohn" and self.kernel is None:
            raise ConfigError("missing_kernel", "urysohn mode requires a kernel config", "kernel")
        if abs(self.space.total_measure - self.params.mu_total) > 1e-9 * max(1.0, self.params.mu_total):
            raise ConfigError(
                "inconsistent_measure",
                f"space total measure {self.space.total_measure} does not match "
                f"mu_total {self.params.mu_total}",
                "weights",
            )


@dataclass(frozen=True)
class ExperimentRow:
    p: float
    in_window: bool
    delta0: float
    h1_lower: float
    certified_upper: Optional[float]
    witness_max_l1: float
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "in_window": self.in_window,
            "delta0": self.delta0,
            "h1_lower": self.h1_lower,
            "certified_upper": self.certified_upper,
            "witness_max_l1": self.witness_max_l1,
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple
    output_path: str
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def _witness_inputs(space: MeasureSpace, p: float, r: float, seed: int, idx: int, n: int):
    rng = np.random.default_rng([seed, idx])
    return ball_samples(space, p, r, rng, n)


def _ball_row(config: ExperimentConfig, ledger: BoundLedger, idx: int, p: float) -> ExperimentRow:
    params = config.params
    est = hausdorff_estimate(
        config.space,
        BallSpec(p=p, r=params.r),
        BallSpec(p=params.p_star, r=params.r),
        config.sampler,
        params=params,
        ledger=ledger,
    )
    n_wit = min(config.sampler.n_samples, _WITNESS_SAMPLE_CAP)
    wit_max = 0.0
    if p == params.p_star:
        sources = [(params.p_star, p)]
    else:
        sources = [(params.p_star, p), (p, params.p_star)]
    for k, (p_from, p_to) in enumerate(sources):
        for f in _witness_inputs(config.space, p_from, params.r, config.sampler.seed, 2 * idx + k, n_wit):
            res = witness_into_ball(f, p_from, p_to, params, ledger)
            wit_max = max(wit_max, res.l1_distance)
    return ExperimentRow(
        p=p,
        in_window=abs(p - params.p_star) < ledger.delta0,
        delta0=ledger.delta0,
        h1_lower=est.lower,
        certified_upper=est.upper,
        witness_max_l1=wit_max,
        samples=config.sampler.n_samples,
        seed=config.sampler.seed,
    )


def _urysohn_row(config: ExperimentConfig, ledger: BoundLedger, idx: int, p: float) -> ExperimentRow:
    params = config.params
    kernel = config.kernel
    est = output_set_distance(
        kernel, p, params.p_star, params.r, params, ledger, config.sampler
    )
    n_wit = min(config.sampler.n_samples, _WITNESS_SAMPLE_CAP)
    wit_max = 0.0
    for f in _witness_inputs(kernel.input_space, p, params.r, config.sampler.seed, idx, n_wit):
        res = witness_into_ball(f, p, params.p_star, params, ledger)
        d = apply_operator(kernel, f).values - apply_operator(kernel, res.witness).values
        out_w = kernel.output_space.weight_array
        wit_max = max(wit_max, float(np.dot(out_w, np.linalg.norm(d, axis=1))))
    return ExperimentRow(
        p=p,
        in_window=abs(p - params.p_star) < ledger.delta0,
        delta0=ledger.delta0,
        h1_lower=est.lower,
        certified_upper=est.upper,
        witness_max_l1=wit_max,
        samples=config.sampler.n_samples,
        seed=config.sampler.seed,
    )


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_csv(rows: List[ExperimentRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        d = row.to_dict()
        lines.append(",".join(_fmt(d[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _render_json(rows: List[ExperimentRow]) -> str:
    return json.dumps({"rows": [r.to_dict() for r in rows]}, indent=2, sort_keys=True) + "\n"


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run the sweep, write the output file, and report sandwich violations."""
    try:
        ledger = delta_window(config.params)
    except WindowPreconditionError as exc:
        raise ConfigError("invalid_epsilon", str(exc), "epsilon")

    grid = sorted(config.p_grid)
    rows = []
    for idx, p in enumerate(grid):
        if config.mode == "ball_continuity":
            rows.append(_ball_row(config, ledger, idx, p))
        else:
            rows.append(_urysohn_row(config, ledger, idx, p))

    violations = tuple(
        f"row p={row.p}: h1_lower {row.h1_lower} > certified_upper {row.certified_upper}"
        for row in rows
        if row.certified_upper is not None and row.h1_lower > row.certified_upper + 1e-9
    )

    text = _render_csv(rows) if config.format == "csv" else _render_json(rows)
    path = Path(config.output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return ExperimentReport(rows=tuple(rows), output_path=str(path), violations=violations)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("invalid_args", message)


def _parse_float_list(text: str, field: str) -> tuple:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise ConfigError("invalid_number", f"could not parse {field} list {text!r}", field)


def build_config(argv) -> ExperimentConfig:
    parser = _Parser(prog="lpball", description=__doc__)
    parser.add_argument("--mode", required=True, help="ball_continuity or urysohn")
    parser.add_argument("--pstar", type=float, required=True)
    parser.add_argument("--r", type=float, required=True)
    parser.add_argument("--epsilon", type=float, required=True)
    parser.add_argument("--weights", default=None, help="comma-separated atom weights")
    parser.add_argument("--dim", type=int, default=1)
    parser.add_argument("--p-grid", dest="p_grid", required=True, help="comma-separated p values")
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--kernel", default=None, help="path to a kernel config JSON")
    parser.add_argument("--out", required=True)
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    args = parser.parse_args(argv)

    kernel = None
    if args.kernel is not None:
        try:
            with open(args.kernel) as fh:
                kernel = kernel_from_config(json.load(fh))
        except FileNotFoundError:
            raise ConfigError("kernel_not_found", f"no kernel config at {args.kernel}", "kernel")
        except (ValueError, KeyError) as exc:
            raise ConfigError("invalid_kernel", f"bad kernel config: {exc}", "kernel")

    if args.mode == "urysohn" and kernel is not None:
        space = kernel.input_space
        if args.weights is not None:
            declared = _parse_float_list(args.weights, "weights")
            if tuple(declared) != tuple(space.weights):
                raise ConfigError(
                    "inconsistent_space",
                    "--weights disagrees with the kernel's input space",
                    "weights",
                )
    else:
        if args.weights is None:
            raise ConfigError("missing_weights", "--weights is required", "weights")
        try:
            space = make_space(_parse_float_list(args.weights, "weights"), args.dim)
        except ValueError as exc:
            raise ConfigError("invalid_space", str(exc), "weights")

    try:
        params = ProblemParams(
            p_star=args.pstar, r=args.r, mu_total=space.total_measure, epsilon=args.epsilon
        )
    except ValueError as exc:
        raise ConfigError("invalid_params", str(exc), None)

    if args.samples < 0:
        raise ConfigError("invalid_samples", "--samples must be >= 0", "samples")

    return ExperimentConfig(
        mode=args.mode,
        params=params,
        space=space,
        p_grid=_parse_float_list(args.p_grid, "p-grid"),
        sampler=SamplerConfig(seed=args.seed, n_samples=args.samples),
        output_path=args.out,
        format=args.format,
        kernel=kernel,
    )


def main(argv=None) -> int:
    try:
        config = build_config(argv if argv is not None else sys.argv[1:])
        report = run_experiment(config)
    except ConfigError as exc:
        print(exc.to_json(), file=sys.stderr)
        return 2
    except (CertificateSandwichError, KernelConditionError) as exc:
        print(json.dumps({"code": "invariant_violation", "message": str(exc), "field": None}),
              file=sys.stderr)
        return 1
    if not report.ok:
        for v in report.violations:
            print(json.dumps({"code": "sandwich_violation", "message": v, "field": None}),
                  file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
