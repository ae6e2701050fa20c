"""Command-line front end.

    repairloop --model chain.json [--mu X] [--method M] [--format F]
               [--samples N] [--seed S] [--tolerance T]

Exit codes: 0 success, 1 model/validation error, 2 I/O or parse error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .analysis import FUNDAMENTAL_MATRIX, MONTE_CARLO, REPAIR_LOOP, analyze
from .augment import DEFAULT_MU
from .errors import CtmcError, ModelSyntaxError, ModelValidationError, NumericalError
from .model import CtmcModel, classify_states, parse_model
from .oracle import DEFAULT_SAMPLES, DEFAULT_SEED, fundamental_matrix_mttf, monte_carlo_mttf
from .solve import DEFAULT_TOLERANCE

METHODS = ("repair-loop", "fundamental", "monte-carlo", "all")
EXIT_OK, EXIT_MODEL, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass(frozen=True)
class CliConfig:
    model_path: str
    mu: float = DEFAULT_MU
    method: str = "all"
    format: str = "table"
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    tolerance: float = DEFAULT_TOLERANCE


def _rel(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(a), abs(b))


def _max_disagreement(rl, fm) -> float:
    diffs = [_rel(rl.mttf, fm.mttf)]
    diffs += [_rel(rl.holding_times[s], fm.tau[s]) for s in fm.tau]
    diffs += [_rel(rl.absorption_probabilities[s], fm.rho[s]) for s in fm.rho]
    return max(diffs)


def build_report(config: CliConfig, model: CtmcModel) -> dict:
    """Run the selected method(s) and assemble the JSON-ready report."""
    if not config.mu > 0:
        raise ModelValidationError(f"repair rate must be positive, got {config.mu!r}",
                                   code="invalid-repair-rate")
    classification = classify_states(model)
    selected = {
        "all": (REPAIR_LOOP, FUNDAMENTAL_MATRIX, MONTE_CARLO),
        "repair-loop": (REPAIR_LOOP,),
        "fundamental": (FUNDAMENTAL_MATRIX,),
        "monte-carlo": (MONTE_CARLO,),
    }[config.method]

    warnings: list[str] = []
    if classification.unreachable:
        warnings.append("dropped unreachable states: "
                        + ", ".join(sorted(classification.unreachable)))
    results: dict[str, dict] = {}
    rl = fm = mc = None

    if REPAIR_LOOP in selected:
        rl = analyze(model, config.mu, config.tolerance)
        warnings.extend(w for w in rl.warnings if w not in warnings)
        results[REPAIR_LOOP] = {
            "mttf": rl.mttf,
            "mttr": rl.mttr,
            "availability": rl.availability,
            "unavailability": rl.unavailability,
            "holding_times": rl.holding_times,
            "absorption_probabilities": rl.absorption_probabilities,
            "residual": rl.residual,
        }
    if FUNDAMENTAL_MATRIX in selected:
        fm = fundamental_matrix_mttf(model, classification)
        results[FUNDAMENTAL_MATRIX] = {
            "mttf": fm.mttf,
            "holding_times": fm.tau,
            "absorption_probabilities": fm.rho,
        }
    if MONTE_CARLO in selected:
        mc = monte_carlo_mttf(model, classification, config.samples, config.seed)
        results[MONTE_CARLO] = {
            "mttf": mc.mean,
            "std_error": mc.std_error,
            "samples": mc.samples,
            "seed": config.seed,
            "absorption_counts": mc.absorption_counts,
            "absorption_probabilities": {s: mc.absorption_fraction(s)
                                         for s in mc.absorption_counts},
        }

    head = results[selected[0]]
    report = {
        "model": {"path": config.model_path, "states": len(model.states),
                  "initial": model.initial},
        "mu": float(config.mu),
        "method": config.method,
        "methods": list(selected),
        "mttf": head["mttf"],
        "mttr": rl.mttr if rl else None,
        "availability": rl.availability if rl else None,
        "unavailability": rl.unavailability if rl else None,
        "holding_times": head.get("holding_times"),
        "absorption_probabilities": head["absorption_probabilities"],
        "residual": rl.residual if rl else None,
        "results": results,
    }
    if config.method == "all":
        z = abs(mc.mean - rl.mttf) / mc.std_error if mc.std_error > 0 else None
        report["cross_check"] = {
            "max_relative_difference": _max_disagreement(rl, fm),
            "monte_carlo_z_score": z,
        }
    report["warnings"] = warnings
    return report


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.6g}"


def format_table(report: dict) -> str:
    lines = [f"model: {report['model']['path']}  "
             f"({report['model']['states']} states, initial {report['model']['initial']})",
             f"mu: {_fmt(report['mu'])}", ""]
    lines.append(f"{'method':<20}{'mttf':>14}{'mttr':>14}{'A':>14}{'U':>14}")
    for name, r in report["results"].items():
        lines.append(f"{name:<20}{_fmt(r['mttf']):>14}{_fmt(r.get('mttr')):>14}"
                     f"{_fmt(r.get('availability')):>14}{_fmt(r.get('unavailability')):>14}")
    if report["holding_times"]:
        lines += ["", "holding times"]
        lines += [f"  {s:<18}{_fmt(v):>14}" for s, v in report["holding_times"].items()]
    lines += ["", "absorption probabilities"]
    lines += [f"  {s:<18}{_fmt(v):>14}" for s, v in report["absorption_probabilities"].items()]
    if report["residual"] is not None:
        lines += ["", f"residual: {_fmt(report['residual'])}"]
    if "cross_check" in report:
        cc = report["cross_check"]
        lines.append(f"cross-check max relative difference: {_fmt(cc['max_relative_difference'])}")
        lines.append(f"monte-carlo z-score: {_fmt(cc['monte_carlo_z_score'])}")
    return "\n".join(lines)


def run(config: CliConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        with open(config.model_path, "rb") as fh:
            document = fh.read()
    except OSError as exc:
        print(f"error: cannot read {config.model_path}: {exc.strerror}", file=stderr)
        return EXIT_IO
    try:
        model = parse_model(document)
        report = build_report(config, model)
    except ModelSyntaxError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_IO
    except ModelValidationError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_MODEL
    except NumericalError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NUMERIC
    except CtmcError as exc:  # pragma: no cover - every subclass is handled above
        print(f"error: {exc}", file=stderr)
        return EXIT_MODEL

    if config.format == "json":
        stdout.write(json.dumps(report, indent=2, allow_nan=False) + "\n")
    else:
        for w in report["warnings"]:
            print(f"warning: {w}", file=stderr)
        stdout.write(format_table(report) + "\n")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="repairloop",
        description="Mean time to failure of an absorbing CTMC via repair-loop augmentation.")
    p.add_argument("--model", required=True, metavar="PATH", help="JSON model document")
    p.add_argument("--mu", type=float, default=DEFAULT_MU, help="repair rate (default 1.0)")
    p.add_argument("--method", choices=METHODS, default="all")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                   help="Monte Carlo trajectories (default 100000)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE,
                   help="maximum steady-state balance residual (default 1e-10)")
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.samples < 1:
        parser.error("--samples must be >= 1")
    if not args.tolerance > 0:
        parser.error("--tolerance must be positive")
    config = CliConfig(args.model, args.mu, args.method, args.format,
                       args.samples, args.seed, args.tolerance)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
