"""Closed-form platoon statistics, the per-vehicle cost model, and
threshold optimization (closed form plus a golden-section cross-check).

All operations are pure functions of immutable inputs and are safe to call
concurrently. Scenarios with ``rate * threshold > 50`` are rejected: the
expected platoon size at that point exceeds e^50 and no downstream quantity
is physically meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .domain import ArrivalModel, CostParameters, PlatoonPolicy, validate_scenario

# Upper bound on rate * threshold accepted by every operation here.
MAX_RATE_THRESHOLD_PRODUCT = 50.0


class ThresholdRegime(str, Enum):
    """Shape of the expected-cost curve as a function of the threshold."""

    INTERIOR_OPTIMUM = "interior_optimum"
    UNBOUNDED_DECREASING = "unbounded_decreasing"


@dataclass(frozen=True)
class PlatoonStatistics:
    """Expected platoon characteristics for one (arrival, policy) scenario."""

    merge_probability: float  # dimensionless, in [0, 1)
    expected_platoon_size: float  # vehicles, >= 1
    expected_platoon_headway: float  # seconds, >= mean interarrival gap
    expected_time_reduction: float  # seconds, >= 0


@dataclass(frozen=True)
class OptimalThreshold:
    """Result of cost-optimal threshold selection over [0, r_max]."""

    regime: ThresholdRegime
    threshold: float  # seconds
    cost_at_threshold: float  # currency per vehicle
    clamped: bool = False  # closed-form interior optimum exceeded r_max


def _check_product(rate: float, threshold: float) -> None:
    if rate * threshold > MAX_RATE_THRESHOLD_PRODUCT:
        raise ValueError(
            f"rate * threshold = {rate * threshold:.6g} exceeds "
            f"{MAX_RATE_THRESHOLD_PRODUCT:g}; thresholds this large are outside "
            "the supported range (expected platoon size would exceed e^50)"
        )


def _check_scenario(arrival: ArrivalModel, policy: PlatoonPolicy) -> None:
    validate_scenario(arrival, policy)
    _check_product(arrival.rate, policy.threshold)


def platoon_size_pmf(arrival: ArrivalModel, policy: PlatoonPolicy, y: int) -> float:
    """Probability that a platoon contains exactly ``y`` vehicles.

    Platoon sizes are geometric: a platoon ends exactly when a gap exceeds
    the threshold, which happens with probability exp(-rate * threshold).
    """
    _check_scenario(arrival, policy)
    if isinstance(y, bool) or not isinstance(y, int):
        raise ValueError(f"y must be an integer >= 1, got {y!r}")
    if y < 1:
        raise ValueError(f"y must be an integer >= 1, got {y}")
    boundary_p = math.exp(-arrival.rate * policy.threshold)
    return boundary_p * (1.0 - boundary_p) ** (y - 1)


def merge_probability(arrival: ArrivalModel, policy: PlatoonPolicy) -> float:
    """Probability that an arriving vehicle joins the platoon ahead:
    P(gap <= threshold) = 1 - exp(-rate * threshold)."""
    _check_scenario(arrival, policy)
    return -math.expm1(-arrival.rate * policy.threshold)


def expected_platoon_size(arrival: ArrivalModel, policy: PlatoonPolicy) -> float:
    """Mean number of vehicles per platoon: exp(rate * threshold)."""
    _check_scenario(arrival, policy)
    return math.exp(arrival.rate * policy.threshold)


def expected_platoon_headway(arrival: ArrivalModel, policy: PlatoonPolicy) -> float:
    """Mean leader-to-leader gap between consecutive platoons, seconds.

    Equals expected_platoon_size / rate (one platoon per expected_platoon_size
    arrivals, arrivals come one per 1/rate seconds on average).
    """
    return expected_platoon_size(arrival, policy) / arrival.rate


def expected_time_reduction(arrival: ArrivalModel, policy: PlatoonPolicy) -> float:
    """Mean per-vehicle merging-zone traverse-time reduction, seconds.

    Closed form (expm1(rate * threshold) / rate) - threshold; zero at
    threshold 0 and non-negative everywhere since e^x - 1 >= x.
    """
    _check_scenario(arrival, policy)
    value = math.expm1(arrival.rate * policy.threshold) / arrival.rate - policy.threshold
    return max(0.0, value)


def platoon_statistics(arrival: ArrivalModel, policy: PlatoonPolicy) -> PlatoonStatistics:
    """Bundle the four closed-form statistics for one scenario."""
    return PlatoonStatistics(
        merge_probability=merge_probability(arrival, policy),
        expected_platoon_size=expected_platoon_size(arrival, policy),
        expected_platoon_headway=expected_platoon_headway(arrival, policy),
        expected_time_reduction=expected_time_reduction(arrival, policy),
    )


def truncation_cutoff(arrival: ArrivalModel, policy: PlatoonPolicy, tail_mass: float = 1e-12) -> int:
    """Smallest y_max whose geometric tail (merge probability)^y_max is at
    most ``tail_mass``; summing the size PMF to y_max captures the rest."""
    if not 0.0 < tail_mass < 1.0:
        raise ValueError(f"tail_mass must lie in (0, 1), got {tail_mass}")
    q = merge_probability(arrival, policy)
    if q == 0.0:
        return 1
    if q >= 1.0:
        # Strictly below 1 mathematically, but saturates in double precision
        # around rate * threshold = 38; no finite cutoff is representable.
        raise ValueError(
            "merge probability rounds to 1 at this rate * threshold; "
            "no finite truncation cutoff exists at double precision"
        )
    return max(1, math.ceil(math.log(tail_mass) / math.log(q)))


def exact_fuel_increase(params: CostParameters, t_shift: float) -> float:
    """Extra drag fuel, liters, burned by one vehicle that recovers
    ``t_shift`` seconds inside the merging zone by driving faster.

    The vehicle covers the zone in (free-flow time - t_shift) seconds, so the
    shift must be strictly below the free-flow traverse time.
    """
    if isinstance(t_shift, bool) or not isinstance(t_shift, (int, float)) or not math.isfinite(t_shift):
        raise ValueError(f"t_shift must be a finite number, got {t_shift!r}")
    if t_shift < 0:
        raise ValueError(f"t_shift must be >= 0, got {t_shift}")
    free_flow_time = params.merge_zone_len / params.cruise_speed
    if t_shift >= free_flow_time:
        raise ValueError(
            f"t_shift = {t_shift:g} s cannot be recovered inside the merging zone "
            f"(free-flow traverse time is {free_flow_time:g} s)"
        )
    # Written so that t_shift = 0 gives exactly 0.0.
    boosted_speed = params.cruise_speed * (free_flow_time / (free_flow_time - t_shift))
    return params.drag_fuel_coeff * params.merge_zone_len * (
        boosted_speed * boosted_speed - params.cruise_speed * params.cruise_speed
    )


def expected_fuel_increase_linearized(
    params: CostParameters, arrival: ArrivalModel, policy: PlatoonPolicy
) -> float:
    """First-order expected merging fuel increase, liters:
    2 * drag_fuel_coeff * cruise_speed^3 * expected_time_reduction."""
    return (
        2.0
        * params.drag_fuel_coeff
        * params.cruise_speed**3
        * expected_time_reduction(arrival, policy)
    )


def expected_fuel_saving_cruise(
    params: CostParameters, arrival: ArrivalModel, policy: PlatoonPolicy
) -> float:
    """Expected drafting fuel saving over the cruising zone, liters:
    fuel_saving_fraction * fuel_per_meter * cruise_zone_len * P(merge)."""
    return (
        params.fuel_saving_fraction
        * params.fuel_per_meter
        * params.cruise_zone_len
        * merge_probability(arrival, policy)
    )


def merge_time_cost_rate(params: CostParameters) -> float:
    """Net cost per second of catch-up time: the marginal drag-fuel cost
    2 * drag_fuel_coeff * fuel_price * cruise_speed^3 minus the value of the
    time saved. Its sign decides the optimization regime."""
    return 2.0 * params.drag_fuel_coeff * params.fuel_price * params.cruise_speed**3 - params.value_of_time


def expected_total_cost(
    params: CostParameters, arrival: ArrivalModel, policy: PlatoonPolicy
) -> float:
    """Expected incremental cost of platooning per vehicle, currency.

    merge_time_cost_rate * expected_time_reduction minus the monetized cruise
    fuel saving. Exactly 0 at threshold 0 (nothing merges, nothing changes).
    """
    drafting_value = (
        params.fuel_price
        * params.fuel_saving_fraction
        * params.fuel_per_meter
        * params.cruise_zone_len
    )
    return (
        merge_time_cost_rate(params) * expected_time_reduction(arrival, policy)
        - drafting_value * merge_probability(arrival, policy)
    )


def total_cost_derivative(params: CostParameters, arrival: ArrivalModel, r: float) -> float:
    """Derivative of expected_total_cost with respect to the threshold,
    currency per vehicle per second, evaluated at threshold ``r``."""
    if isinstance(r, bool) or not isinstance(r, (int, float)) or not math.isfinite(r):
        raise ValueError(f"r must be a finite number, got {r!r}")
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    _check_product(arrival.rate, r)
    rate = arrival.rate
    net_rate = merge_time_cost_rate(params)
    drafting_value = (
        params.fuel_price
        * params.fuel_saving_fraction
        * params.fuel_per_meter
        * params.cruise_zone_len
    )
    growth = math.exp(rate * r)
    return (net_rate * (growth * growth - growth) - drafting_value * rate) / growth


def optimal_threshold(
    params: CostParameters, arrival: ArrivalModel, r_max: float
) -> OptimalThreshold:
    """Cost-minimizing threshold over [0, r_max].

    When merge_time_cost_rate <= 0 the cost only falls as the threshold
    grows, so the best admissible choice is r_max (regime
    ``unbounded_decreasing``). Otherwise the unique stationary point

        (1/rate) * ln(1/2 + 1/2 * sqrt(4 * drafting_value * rate / net_rate + 1))

    is returned, clamped to r_max (``clamped`` flags that case).
    """
    if isinstance(r_max, bool) or not isinstance(r_max, (int, float)) or not math.isfinite(r_max):
        raise ValueError(f"r_max must be a finite number, got {r_max!r}")
    if r_max <= 0:
        raise ValueError(f"r_max must be > 0, got {r_max}")
    _check_product(arrival.rate, r_max)

    net_rate = merge_time_cost_rate(params)
    if net_rate <= 0.0:
        regime = ThresholdRegime.UNBOUNDED_DECREASING
        best = float(r_max)
        clamped = False
    else:
        regime = ThresholdRegime.INTERIOR_OPTIMUM
        drafting_value = (
            params.fuel_price
            * params.fuel_saving_fraction
            * params.fuel_per_meter
            * params.cruise_zone_len
        )
        root = math.sqrt(4.0 * drafting_value * arrival.rate / net_rate + 1.0)
        stationary = math.log(0.5 + 0.5 * root) / arrival.rate
        clamped = stationary > r_max
        best = min(stationary, float(r_max))

    cost = expected_total_cost(params, arrival, PlatoonPolicy(threshold=best))
    return OptimalThreshold(regime=regime, threshold=best, cost_at_threshold=cost, clamped=clamped)


def numeric_optimal_threshold(
    params: CostParameters, arrival: ArrivalModel, r_max: float, tol: float = 1e-3
) -> float:
    """Golden-section minimizer of expected_total_cost over [0, r_max],
    refined until the bracket is narrower than ``tol`` seconds.

    The cost derivative changes sign at most once on [0, r_max], so the cost
    is unimodal there and golden-section search is valid; it serves as the
    independent cross-check for :func:`optimal_threshold`.
    """
    if isinstance(r_max, bool) or not isinstance(r_max, (int, float)) or not math.isfinite(r_max):
        raise ValueError(f"r_max must be a finite number, got {r_max!r}")
    if r_max <= 0:
        raise ValueError(f"r_max must be > 0, got {r_max}")
    if not isinstance(tol, (int, float)) or not math.isfinite(tol) or tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol!r}")
    _check_product(arrival.rate, r_max)

    def cost(r: float) -> float:
        return expected_total_cost(params, arrival, PlatoonPolicy(threshold=r))

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 0.0, float(r_max)
    left = hi - inv_phi * (hi - lo)
    right = lo + inv_phi * (hi - lo)
    f_left = cost(left)
    f_right = cost(right)
    while hi - lo > tol:
        if f_left < f_right:
            hi, right, f_right = right, left, f_left
            left = hi - inv_phi * (hi - lo)
            f_left = cost(left)
        else:
            lo, left, f_left = left, right, f_right
            right = lo + inv_phi * (hi - lo)
            f_right = cost(right)
    return 0.5 * (lo + hi)
