"""Command-line front end: ``eval``, ``sweep``, ``verify`` and ``invert``.

Exit codes: 0 success, 1 verification failure, 2 input or domain error,
3 I/O error.  Output goes to stdout unless ``--out`` is given.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import calibration, ensemble, qei
from .ensemble import DomainSpec
from .exceptions import EnsembleError

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3

QUANTITIES = ("mean", "nu", "variance", "purity", "covariance", "entropy", "weights")

PRESETS = {
    "fig1a": "nu",
    "fig1b": "variance",
    "fig2a": "purity",
    "fig2b": "covariance",
}
PRESET_CAPACITIES = (1, 2, 3)
PRESET_RANGE = (-6.0, 6.0)
PRESET_STEPS = 601


def fmt(value: float) -> str:
    """12 significant digits, locale independent, no negative zero."""
    return format(float(value) + 0.0, ".12g")


def rounded(value: float) -> float:
    return float(fmt(value))


def evaluate(spec: DomainSpec, gamma, quantities: Sequence[str]) -> dict:
    """Named quantities at ``gamma`` (scalar or array), in request order."""
    q = spec.max_capacity
    out = {}
    for name in quantities:
        if name == "mean":
            out["mean"] = ensemble.mean_population(spec, gamma)
        elif name == "nu":
            out["nu"] = ensemble.transferred_charge(q, gamma)
        elif name == "variance":
            out["variance"] = ensemble.variance(q, gamma)
        elif name == "purity":
            out["purity"] = ensemble.purity(q, gamma)
        elif name == "covariance":
            out["covariance"] = ensemble.covariance_rho_m(q, gamma)
        elif name == "entropy":
            out["entropy"] = ensemble.entropy(spec, gamma)
        elif name == "weights":
            w = ensemble.weights(spec, gamma)
            out["w_cation"], out["w_neutral"], out["w_anion"] = w
        else:
            raise EnsembleError(f"unknown quantity {name!r}; choose from {QUANTITIES}")
    return out


def gamma_grid(gamma_min: float, gamma_max: float, steps: int) -> np.ndarray:
    """Uniform grid with both endpoints exact."""
    i = np.arange(steps)
    grid = gamma_min + i * ((gamma_max - gamma_min) / (steps - 1))
    grid[-1] = gamma_max
    return grid


@dataclass(frozen=True)
class SweepConfig:
    n: int
    q: tuple[int, ...]
    gamma_min: float
    gamma_max: float
    steps: int
    quantities: tuple[str, ...]
    format: str = "csv"

    def __post_init__(self):
        if not self.gamma_min < self.gamma_max:
            raise EnsembleError(f"gamma_min must be < gamma_max, got {self.gamma_min}, {self.gamma_max}")
        if self.steps < 2:
            raise EnsembleError(f"steps must be >= 2, got {self.steps}")
        if not self.quantities:
            raise EnsembleError("at least one quantity is required")
        if not self.q:
            raise EnsembleError("at least one q is required")
        for name in self.quantities:
            if name not in QUANTITIES:
                raise EnsembleError(f"unknown quantity {name!r}; choose from {QUANTITIES}")
        if self.format not in ("csv", "json"):
            raise EnsembleError(f"format must be csv or json, got {self.format!r}")
        for q in self.q:
            DomainSpec(self.n, q)

    @classmethod
    def preset(cls, name: str, format: str = "csv") -> "SweepConfig":
        return cls(
            n=max(PRESET_CAPACITIES),
            q=PRESET_CAPACITIES,
            gamma_min=PRESET_RANGE[0],
            gamma_max=PRESET_RANGE[1],
            steps=PRESET_STEPS,
            quantities=(PRESETS[name],),
            format=format,
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "q": list(self.q),
            "gamma_min": self.gamma_min,
            "gamma_max": self.gamma_max,
            "steps": self.steps,
            "quantities": list(self.quantities),
            "format": self.format,
        }


def sweep_table(cfg: SweepConfig) -> tuple[list[str], list[list[float]]]:
    """Column names and rows (grid order) for a sweep."""
    grid = gamma_grid(cfg.gamma_min, cfg.gamma_max, cfg.steps)
    columns = ["gamma"]
    data = [grid]
    for q in cfg.q:
        values = evaluate(DomainSpec(cfg.n, q), grid, cfg.quantities)
        for name, arr in values.items():
            columns.append(name if len(cfg.q) == 1 else f"{name}_q{q}")
            data.append(np.asarray(arr))
    rows = [[float(col[i]) for col in data] for i in range(cfg.steps)]
    return columns, rows


def render_csv(columns: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def render_sweep(cfg: SweepConfig) -> str:
    columns, rows = sweep_table(cfg)
    if cfg.format == "csv":
        return render_csv(columns, rows)
    records = [{c: rounded(v) for c, v in zip(columns, row)} for row in rows]
    return render_json({"config": cfg.as_dict(), "rows": records})


def run_verification(
    n: int,
    capacities: Sequence[int],
    gammas: Sequence[float],
    tolerance: float = qei.DEFAULT_TOLERANCE,
    abs_floor: float = qei.DEFAULT_ABS_FLOOR,
) -> list[qei.QeiReport]:
    """FDT, purity-FDT and the generic identity for every bundled observable."""
    reports = []
    for q in capacities:
        spec = DomainSpec(n, q)
        observables = qei.standard_observables(spec)
        for g in gammas:
            g = float(g)
            reports.append(qei.verify_fdt(spec, g, tolerance=tolerance, abs_floor=abs_floor))
            reports.append(qei.verify_pfdt(spec, g, tolerance=tolerance, abs_floor=abs_floor))
            for obs in observables:
                reports.append(qei.verify_qei(obs, spec, g, tolerance=tolerance, abs_floor=abs_floor))
    return reports


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _quantity_list(text: Optional[str], default: Sequence[str]) -> tuple[str, ...]:
    if text is None:
        return tuple(default)
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    for name in names:
        if name not in QUANTITIES:
            raise EnsembleError(f"unknown quantity {name!r}; choose from {', '.join(QUANTITIES)}")
    return names


def cmd_eval(args) -> int:
    spec = DomainSpec(args.n, args.q)
    quantities = _quantity_list(args.quantities, QUANTITIES)
    record = {"gamma": float(args.gamma)}
    record.update(evaluate(spec, float(args.gamma), quantities))
    if args.format == "json":
        text = render_json({"n": spec.baseline_population, "q": spec.max_capacity,
                            **{k: rounded(v) for k, v in record.items()}})
    else:
        text = render_csv(list(record), [list(record.values())])
    _write(text, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.preset:
        cfg = SweepConfig.preset(args.preset, format=args.format)
    else:
        missing = [flag for flag, v in (("--q", args.q), ("--gamma-min", args.gamma_min),
                                        ("--gamma-max", args.gamma_max)) if v is None]
        if missing:
            raise EnsembleError(f"sweep without --preset needs {', '.join(missing)}")
        qs = tuple(args.q)
        cfg = SweepConfig(
            n=args.n if args.n is not None else max(qs),
            q=qs,
            gamma_min=args.gamma_min,
            gamma_max=args.gamma_max,
            steps=args.steps,
            quantities=_quantity_list(args.quantities, ("nu",)),
            format=args.format,
        )
    _write(render_sweep(cfg), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    qs = tuple(args.q) if args.q else PRESET_CAPACITIES
    n = args.n if args.n is not None else max(qs)
    if args.gamma is not None:
        gammas = [float(args.gamma)]
    else:
        gmin = -6.0 if args.gamma_min is None else args.gamma_min
        gmax = 6.0 if args.gamma_max is None else args.gamma_max
        steps = 121 if args.steps is None else args.steps
        if steps < 2 or not gmin < gmax:
            raise EnsembleError("verify grid needs gamma_min < gamma_max and steps >= 2")
        gammas = gamma_grid(gmin, gmax, steps)
    reports = run_verification(n, qs, gammas, args.tolerance, args.abs_floor)
    failed = [r for r in reports if not r.passed]
    if args.format == "json":
        text = render_json({
            "n": n, "q": list(qs), "points": len(gammas), "checks": len(reports),
            "failed": len(failed), "tolerance": args.tolerance, "abs_floor": args.abs_floor,
            "failures": [r.as_dict() for r in failed],
        })
    else:
        buf = io.StringIO()
        buf.write(f"checks: {len(reports)}  passed: {len(reports) - len(failed)}  failed: {len(failed)}\n")
        buf.write(f"tolerance: {args.tolerance:g}  abs_floor: {args.abs_floor:g}\n")
        if failed:
            buf.write("identity,q,gamma,lhs,rhs,abs_residual,rel_residual\n")
            for r in failed:
                buf.write(",".join([r.label, str(r.max_capacity), fmt(r.gamma), fmt(r.lhs), fmt(r.rhs),
                                    f"{r.abs_residual:.3e}", f"{r.rel_residual:.3e}"]) + "\n")
        text = buf.getvalue()
    _write(text, args.out)
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def cmd_invert(args) -> int:
    if args.nu is not None and args.population is not None:
        raise EnsembleError("give either --nu or --population, not both")
    if args.nu is not None:
        result = calibration.gamma_for_charge(args.q, args.nu)
        record = {"q": args.q}
    elif args.population is not None:
        if args.n is None:
            raise EnsembleError("--population needs --n")
        spec = DomainSpec(args.n, args.q)
        result = calibration.gamma_for_population(spec, args.population)
        record = {"n": args.n, "q": args.q, "target_population": args.population}
    else:
        raise EnsembleError("invert needs --nu or --population")
    record.update(
        gamma=result.gamma,
        target_nu=result.target_nu,
        achieved_nu=result.achieved_nu,
        iterations=result.iterations,
        bracket_width_final=result.bracket_width_final,
    )
    if args.format == "json":
        text = render_json({k: (rounded(v) if isinstance(v, float) else v) for k, v in record.items()})
    else:
        text = render_csv(list(record), [list(record.values())])
    _write(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncanonical", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("eval", help="evaluate quantities at one gamma")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--quantities", help=f"comma-separated subset of {','.join(QUANTITIES)}")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="tabulate quantities over a uniform gamma grid")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int, nargs="+")
    p.add_argument("--gamma-min", type=float)
    p.add_argument("--gamma-max", type=float)
    p.add_argument("--steps", type=int, default=PRESET_STEPS)
    p.add_argument("--quantities")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check FDT, purity-FDT and expectation identities")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int, nargs="+")
    p.add_argument("--gamma", type=float, help="single point instead of a grid")
    p.add_argument("--gamma-min", type=float)
    p.add_argument("--gamma-max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--tolerance", type=float, default=qei.DEFAULT_TOLERANCE)
    p.add_argument("--abs-floor", type=float, default=qei.DEFAULT_ABS_FLOOR)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("invert", help="find gamma for a target charge or population")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--nu", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--population", type=float)
    common(p)
    p.set_defaults(func=cmd_invert)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnsembleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
