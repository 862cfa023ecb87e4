"""Command-line front end: ``platoonctl``.

Subcommands:
    analytic   closed-form statistics and expected cost for one scenario
    simulate   Monte Carlo replications compared against the closed forms
    sweep      threshold sweep emitted as CSV (optionally with simulation)
    optimize   closed-form and golden-section cost-optimal threshold

Input is a single JSON config with sections ``arrival``, ``policy``,
``cost`` (mixed planning units), ``simulation``, and ``output``; see the
README for the schema. All file outputs are deterministic for a fixed
config and seed. Exit codes: 0 success (for ``simulate``: every statistic
consistent with the closed forms), 1 statistical comparison failure,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .analytic import (
    expected_fuel_increase_linearized,
    expected_fuel_saving_cruise,
    expected_platoon_headway,
    expected_platoon_size,
    expected_time_reduction,
    expected_total_cost,
    numeric_optimal_threshold,
    optimal_threshold,
    platoon_size_pmf,
    platoon_statistics,
)
from .domain import (
    ArrivalModel,
    CostParameters,
    PlatoonPolicy,
    RawCostConfig,
    normalize_units,
)
from .simulator import EmpiricalSummary, SimulationConfig, Z_95, run_replications

# Denominator floor for relative errors against near-zero analytic values.
REL_ERROR_FLOOR = 1e-12


@dataclass(frozen=True)
class SweepSpec:
    """Linear threshold grid for the ``sweep`` command."""

    r_min: float
    r_max: float
    n_points: int
    scale: str = "linear"

    def __post_init__(self) -> None:
        if not isinstance(self.r_min, (int, float)) or not math.isfinite(self.r_min) or self.r_min < 0:
            raise ValueError(f"r_min must be a finite number >= 0, got {self.r_min!r}")
        if not isinstance(self.r_max, (int, float)) or not math.isfinite(self.r_max) or self.r_max <= self.r_min:
            raise ValueError(f"r_max must be finite and > r_min, got {self.r_max!r}")
        if not isinstance(self.n_points, int) or isinstance(self.n_points, bool) or self.n_points < 2:
            raise ValueError(f"n_points must be an integer >= 2, got {self.n_points!r}")
        if self.scale != "linear":
            raise ValueError(f"scale must be 'linear', got {self.scale!r}")

    def grid(self) -> list[float]:
        return [float(r) for r in np.linspace(self.r_min, self.r_max, self.n_points)]


@dataclass(frozen=True)
class ComparisonRow:
    """One analytic-vs-empirical statistic comparison."""

    statistic: str
    analytic: float
    empirical: float
    ci_half_width: float
    relative_error: float
    n_samples: int
    passed: bool


@dataclass(frozen=True)
class ComparisonReport:
    """Comparison of a pooled simulation against the closed forms; a row
    passes when |empirical - analytic| <= sigma * ci_half_width."""

    rows: tuple[ComparisonRow, ...]
    sigma: float

    @property
    def all_passed(self) -> bool:
        return all(row.passed for row in self.rows)


def _comparison_row(
    statistic: str, analytic: float, empirical: float, half_width: float, count: int, sigma: float
) -> ComparisonRow:
    gap = abs(empirical - analytic)
    return ComparisonRow(
        statistic=statistic,
        analytic=analytic,
        empirical=empirical,
        ci_half_width=half_width,
        relative_error=gap / max(abs(analytic), REL_ERROR_FLOOR),
        n_samples=count,
        passed=gap <= sigma * half_width,
    )


def build_comparison(
    arrival: ArrivalModel, policy: PlatoonPolicy, summary: EmpiricalSummary, sigma: float = 3.0
) -> ComparisonReport:
    """Compare a pooled empirical summary against the closed forms."""
    if not isinstance(sigma, (int, float)) or not math.isfinite(sigma) or sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma!r}")
    singleton_freq = summary.size_pmf.get(1, 0.0)
    n_platoons = summary.platoon_size.count
    singleton_hw = Z_95 * math.sqrt(singleton_freq * (1.0 - singleton_freq) / n_platoons)
    rows = (
        _comparison_row(
            "mean_platoon_size",
            expected_platoon_size(arrival, policy),
            summary.platoon_size.mean,
            summary.platoon_size.ci_half_width,
            summary.platoon_size.count,
            sigma,
        ),
        _comparison_row(
            "mean_leader_headway",
            expected_platoon_headway(arrival, policy),
            summary.leader_headway.mean,
            summary.leader_headway.ci_half_width,
            summary.leader_headway.count,
            sigma,
        ),
        _comparison_row(
            "mean_time_shift",
            expected_time_reduction(arrival, policy),
            summary.time_shift.mean,
            summary.time_shift.ci_half_width,
            summary.time_shift.count,
            sigma,
        ),
        _comparison_row(
            "singleton_probability",
            platoon_size_pmf(arrival, policy, 1),
            singleton_freq,
            singleton_hw,
            n_platoons,
            sigma,
        ),
    )
    return ComparisonReport(rows=rows, sigma=float(sigma))


@dataclass(frozen=True)
class Scenario:
    """Parsed config file: arrival/policy always present, rest optional."""

    arrival: ArrivalModel
    policy: PlatoonPolicy
    cost: CostParameters | None
    simulation: SimulationConfig | None
    output: dict


def _section(cfg: dict, name: str) -> dict:
    sect = cfg.get(name)
    if sect is None:
        raise ValueError(f"config section '{name}' is missing")
    if not isinstance(sect, dict):
        raise ValueError(f"config section '{name}' must be an object")
    return sect


def _number(sect: dict, key: str, where: str, default: float | None = None) -> float:
    if key not in sect:
        if default is not None:
            return default
        raise ValueError(f"config field {where}.{key} is missing")
    value = sect[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"config field {where}.{key} must be a number, got {value!r}")
    return float(value)


def _integer(sect: dict, key: str, where: str, default: int | None = None) -> int:
    if key not in sect:
        if default is not None:
            return default
        raise ValueError(f"config field {where}.{key} is missing")
    value = sect[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"config field {where}.{key} must be an integer, got {value!r}")
    return value


def load_scenario(path: str | Path) -> Scenario:
    """Parse and validate a scenario config file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(cfg, dict):
        raise ValueError(f"{path}: top level must be a JSON object")

    arrival = ArrivalModel(rate=_number(_section(cfg, "arrival"), "rate", "arrival"))
    policy = PlatoonPolicy(threshold=_number(_section(cfg, "policy"), "threshold", "policy"))

    cost = None
    if "cost" in cfg:
        sect = _section(cfg, "cost")
        raw = RawCostConfig(
            value_of_time_per_h=_number(sect, "value_of_time_per_h", "cost"),
            fuel_price_per_l=_number(sect, "fuel_price_per_l", "cost"),
            drag_fuel_coeff=_number(sect, "drag_fuel_coeff", "cost"),
            fuel_per_100km=_number(sect, "fuel_per_100km", "cost"),
            fuel_saving_fraction=_number(sect, "fuel_saving_fraction", "cost"),
            cruise_speed_mph=_number(sect, "cruise_speed_mph", "cost"),
            merge_zone_km=_number(sect, "merge_zone_km", "cost"),
            cruise_zone_km=_number(sect, "cruise_zone_km", "cost"),
            nominal_merge_time_s=_number(sect, "nominal_merge_time_s", "cost", default=0.0),
        )
        cost = normalize_units(raw)

    simulation = None
    if "simulation" in cfg:
        sect = _section(cfg, "simulation")
        simulation = SimulationConfig(
            arrival=arrival,
            policy=policy,
            n_vehicles=_integer(sect, "n_vehicles", "simulation"),
            n_replications=_integer(sect, "n_replications", "simulation", default=1),
            seed=_integer(sect, "seed", "simulation"),
            warmup_vehicles=_integer(sect, "warmup_vehicles", "simulation", default=0),
        )

    output = cfg.get("output", {})
    if not isinstance(output, dict):
        raise ValueError("config section 'output' must be an object")
    return Scenario(arrival=arrival, policy=policy, cost=cost, simulation=simulation, output=output)


def _require_cost(scenario: Scenario) -> CostParameters:
    if scenario.cost is None:
        raise ValueError("config section 'cost' is required for this command")
    return scenario.cost


def _require_simulation(scenario: Scenario) -> SimulationConfig:
    if scenario.simulation is None:
        raise ValueError("config section 'simulation' is required for this command")
    return scenario.simulation


def _write_csv(path: str | Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def analytic_quantities(params: CostParameters, arrival: ArrivalModel, policy: PlatoonPolicy) -> dict[str, float]:
    """The seven scenario quantities reported by ``analytic`` and ``sweep``."""
    stats = platoon_statistics(arrival, policy)
    return {
        "merge_probability": stats.merge_probability,
        "expected_platoon_size": stats.expected_platoon_size,
        "expected_leader_headway_s": stats.expected_platoon_headway,
        "expected_time_reduction_s": stats.expected_time_reduction,
        "expected_fuel_increase_l": expected_fuel_increase_linearized(params, arrival, policy),
        "expected_fuel_saving_l": expected_fuel_saving_cruise(params, arrival, policy),
        "expected_total_cost": expected_total_cost(params, arrival, policy),
    }


def cmd_analytic(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    params = _require_cost(scenario)
    values = analytic_quantities(params, scenario.arrival, scenario.policy)
    # nominal_merge_time only surfaces here, as the expected merging-zone exit time.
    values["expected_merge_exit_time_s"] = (
        params.nominal_merge_time - values["expected_time_reduction_s"]
    )
    for name, value in values.items():
        print(f"{name:<32} {value:.10g}")
    json_path = args.json or scenario.output.get("json")
    if json_path:
        payload = {
            "arrival_rate": scenario.arrival.rate,
            "threshold_s": scenario.policy.threshold,
            "results": values,
        }
        Path(json_path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {json_path}")
    return 0


def comparison_csv_rows(report: ComparisonReport) -> tuple[list[str], list[list]]:
    header = [
        "statistic",
        "analytic",
        "empirical",
        "ci_half_width",
        "relative_error",
        "n_samples",
        "passed",
    ]
    rows = [
        [
            row.statistic,
            row.analytic,
            row.empirical,
            row.ci_half_width,
            row.relative_error,
            row.n_samples,
            row.passed,
        ]
        for row in report.rows
    ]
    return header, rows


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    sim = _require_simulation(scenario)
    aggregate, _ = run_replications(sim)
    report = build_comparison(scenario.arrival, scenario.policy, aggregate, sigma=args.sigma)

    print(
        f"{'statistic':<24} {'analytic':>14} {'empirical':>14} "
        f"{'ci_hw':>12} {'rel_err':>10}  result"
    )
    for row in report.rows:
        verdict = "pass" if row.passed else "FAIL"
        print(
            f"{row.statistic:<24} {row.analytic:>14.6g} {row.empirical:>14.6g} "
            f"{row.ci_half_width:>12.4g} {row.relative_error:>10.3g}  {verdict}"
        )
    csv_path = args.csv or scenario.output.get("csv")
    if csv_path:
        header, rows = comparison_csv_rows(report)
        _write_csv(csv_path, header, rows)
        print(f"wrote {csv_path}")
    if report.all_passed:
        print(f"all statistics within {report.sigma:g} CI half-widths of the closed forms")
        return 0
    print(f"comparison FAILED at {report.sigma:g} CI half-widths", file=sys.stderr)
    return 1


SWEEP_HEADER = [
    "threshold_s",
    "expected_platoon_size",
    "expected_leader_headway_s",
    "expected_time_reduction_s",
    "expected_fuel_increase_l",
    "expected_fuel_saving_l",
    "expected_total_cost",
]

SWEEP_SIM_HEADER = [
    "sim_platoon_size",
    "sim_platoon_size_hw",
    "sim_leader_headway_s",
    "sim_leader_headway_hw",
    "sim_time_shift_s",
    "sim_time_shift_hw",
]


def sweep_rows(
    params: CostParameters,
    arrival: ArrivalModel,
    spec: SweepSpec,
    sim: SimulationConfig | None = None,
) -> tuple[list[str], list[list]]:
    """Analytic sweep rows over the threshold grid, optionally with pooled
    empirical columns (same seed at every grid point, so runs share draws)."""
    header = list(SWEEP_HEADER) + (list(SWEEP_SIM_HEADER) if sim is not None else [])
    rows = []
    for r in spec.grid():
        policy = PlatoonPolicy(threshold=r)
        values = analytic_quantities(params, arrival, policy)
        row = [
            r,
            values["expected_platoon_size"],
            values["expected_leader_headway_s"],
            values["expected_time_reduction_s"],
            values["expected_fuel_increase_l"],
            values["expected_fuel_saving_l"],
            values["expected_total_cost"],
        ]
        if sim is not None:
            aggregate, _ = run_replications(replace(sim, policy=policy))
            row += [
                aggregate.platoon_size.mean,
                aggregate.platoon_size.ci_half_width,
                aggregate.leader_headway.mean,
                aggregate.leader_headway.ci_half_width,
                aggregate.time_shift.mean,
                aggregate.time_shift.ci_half_width,
            ]
        rows.append(row)
    return header, rows


def cmd_sweep(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    params = _require_cost(scenario)
    spec = SweepSpec(r_min=args.r_min, r_max=args.r_max, n_points=args.points)
    sim = _require_simulation(scenario) if args.with_simulation else None
    header, rows = sweep_rows(params, scenario.arrival, spec, sim)
    _write_csv(args.csv, header, rows)
    print(f"wrote {len(rows)} rows to {args.csv}")
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    params = _require_cost(scenario)
    result = optimal_threshold(params, scenario.arrival, args.r_max)
    numeric = numeric_optimal_threshold(params, scenario.arrival, args.r_max, tol=args.tol)
    print(f"{'regime':<26} {result.regime.value}")
    print(f"{'closed_form_threshold_s':<26} {result.threshold:.10g}")
    print(f"{'numeric_threshold_s':<26} {numeric:.10g}")
    print(f"{'agreement_delta_s':<26} {abs(result.threshold - numeric):.4g}")
    print(f"{'cost_at_threshold':<26} {result.cost_at_threshold:.10g}")
    print(f"{'clamped_to_r_max':<26} {result.clamped}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platoonctl",
        description="Threshold-based platooning statistics, cost optimization, "
        "and Monte Carlo cross-validation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analytic = sub.add_parser("analytic", help="closed-form statistics and cost")
    p_analytic.add_argument("--config", required=True, help="scenario config JSON")
    p_analytic.add_argument("--json", default=None, help="also write results to this JSON file")
    p_analytic.set_defaults(func=cmd_analytic)

    p_sim = sub.add_parser("simulate", help="Monte Carlo comparison against the closed forms")
    p_sim.add_argument("--config", required=True, help="scenario config JSON")
    p_sim.add_argument("--csv", default=None, help="write the comparison table to this CSV file")
    p_sim.add_argument(
        "--sigma",
        type=float,
        default=3.0,
        help="pass tolerance in CI half-widths (default 3)",
    )
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="threshold sweep emitted as CSV")
    p_sweep.add_argument("--config", required=True, help="scenario config JSON")
    p_sweep.add_argument("--r-min", type=float, required=True, help="lowest threshold, seconds")
    p_sweep.add_argument("--r-max", type=float, required=True, help="highest threshold, seconds")
    p_sweep.add_argument("--points", type=int, required=True, help="number of grid points (>= 2)")
    p_sweep.add_argument(
        "--with-simulation",
        action="store_true",
        help="append pooled empirical columns at every grid point",
    )
    p_sweep.add_argument("--csv", required=True, help="output CSV path")
    p_sweep.set_defaults(func=cmd_sweep)

    p_opt = sub.add_parser("optimize", help="cost-optimal threshold")
    p_opt.add_argument("--config", required=True, help="scenario config JSON")
    p_opt.add_argument("--r-max", type=float, required=True, help="largest admissible threshold, seconds")
    p_opt.add_argument(
        "--tol", type=float, default=1e-3, help="golden-section bracket tolerance, seconds"
    )
    p_opt.set_defaults(func=cmd_optimize)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
