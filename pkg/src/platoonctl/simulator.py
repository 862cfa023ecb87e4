"""Seeded Monte Carlo realization of the arrival/merge process.

This is the empirical oracle for every closed form in :mod:`.analytic`: it
draws exponential interarrival gaps, applies the inclusive threshold rule,
and reports platoon sizes, leader-to-leader headways, and per-vehicle
catch-up time shifts with normal-approximation confidence intervals.

Randomness contract: gaps come from numpy's PCG64 generator (period 2^128)
seeded with ``SeedSequence((seed, replication))``. The master seed plus the
replication index fully determines every draw, so runs reproduce
bit-for-bit, and replications own disjoint streams that could execute in any
order (or in parallel) without changing the aggregate. Aggregation pools raw
samples in replication-index order, which keeps it order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import ArrivalModel, PlatoonPolicy, validate_scenario

# Two-sided 95% normal quantile used for all confidence half-widths.
Z_95 = 1.96

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class SimulationConfig:
    """One reproducible simulation campaign."""

    arrival: ArrivalModel
    policy: PlatoonPolicy
    n_vehicles: int
    n_replications: int = 1
    seed: int = 0
    warmup_vehicles: int = 0  # leading vehicles excluded from shift statistics

    def __post_init__(self) -> None:
        validate_scenario(self.arrival, self.policy)
        if not isinstance(self.n_vehicles, int) or isinstance(self.n_vehicles, bool) or self.n_vehicles < 2:
            raise ValueError(f"n_vehicles must be an integer >= 2, got {self.n_vehicles!r}")
        if not isinstance(self.n_replications, int) or isinstance(self.n_replications, bool) or self.n_replications < 1:
            raise ValueError(f"n_replications must be an integer >= 1, got {self.n_replications!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed <= MAX_SEED:
            raise ValueError(f"seed must be an integer in [0, 2^64), got {self.seed!r}")
        if not isinstance(self.warmup_vehicles, int) or isinstance(self.warmup_vehicles, bool) or self.warmup_vehicles < 0:
            raise ValueError(f"warmup_vehicles must be an integer >= 0, got {self.warmup_vehicles!r}")
        if self.warmup_vehicles >= self.n_vehicles:
            raise ValueError(
                f"n_vehicles ({self.n_vehicles}) must exceed warmup_vehicles "
                f"({self.warmup_vehicles})"
            )


@dataclass(frozen=True)
class SimulationRun:
    """One realized arrival/merge trajectory.

    ``leader_indices`` are 1-based vehicle numbers (vehicle 1 always leads
    the first platoon); ``time_shifts[k-1]`` is vehicle k's catch-up shift
    and is exactly 0 at every leader.
    """

    interarrivals: np.ndarray
    platoon_sizes: np.ndarray
    leader_indices: np.ndarray
    leader_headways: np.ndarray
    time_shifts: np.ndarray

    def __post_init__(self) -> None:
        n = self.interarrivals.size
        if n == 0:
            raise ValueError("interarrivals must be non-empty")
        if int(self.platoon_sizes.sum()) != n:
            raise ValueError("platoon sizes must sum to the number of vehicles")
        if self.platoon_sizes.size != self.leader_indices.size:
            raise ValueError("one leader index per platoon required")
        if self.leader_indices[0] != 1 or np.any(np.diff(self.leader_indices) <= 0):
            raise ValueError("leader_indices must be strictly increasing and start at 1")
        if self.leader_headways.size != self.leader_indices.size - 1:
            raise ValueError("one leader headway per consecutive platoon pair required")
        if self.time_shifts.size != n:
            raise ValueError("one time shift per vehicle required")
        if np.any(self.time_shifts[self.leader_indices - 1] != 0.0):
            raise ValueError("time shifts must be exactly 0 at platoon leaders")

    @property
    def n_vehicles(self) -> int:
        return int(self.interarrivals.size)


@dataclass(frozen=True)
class StatEstimate:
    """Sample mean with a 95% normal-approximation confidence half-width."""

    mean: float
    ci_half_width: float
    count: int


@dataclass(frozen=True)
class EmpiricalSummary:
    """Empirical platoon statistics for one run or a pooled campaign.

    ``size_pmf`` maps platoon size y (1..cutoff) to its empirical frequency;
    mass beyond the cutoff is simply absent, so values sum to at most 1.
    """

    platoon_size: StatEstimate
    leader_headway: StatEstimate
    time_shift: StatEstimate
    size_pmf: dict[int, float]


def headway_from_uniform(u, rate: float):
    """Inverse-CDF transform: map uniform draws U in (0, 1] to exponential
    headways X = -ln(U) / rate. U = 1 maps to X = 0, a valid zero gap."""
    if not rate > 0:
        raise ValueError(f"rate must be > 0, got {rate!r}")
    arr = np.asarray(u, dtype=float)
    if arr.size and (np.any(arr <= 0.0) or np.any(arr > 1.0)):
        raise ValueError("u must lie in (0, 1]")
    result = -np.log(arr) / rate
    if result.ndim == 0:
        return float(result)
    return result


def sample_interarrivals(
    seed: int, n: int, arrival: ArrivalModel, replication: int = 0
) -> np.ndarray:
    """Draw ``n`` exponential interarrival gaps for one replication stream.

    Deterministic in (seed, replication); distinct replication indices give
    statistically independent streams from the same master seed.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n!r}")
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    if not isinstance(replication, int) or isinstance(replication, bool) or replication < 0:
        raise ValueError(f"replication must be a non-negative integer, got {replication!r}")
    rng = np.random.default_rng(np.random.SeedSequence((seed, replication)))
    u = 1.0 - rng.random(n)  # rng.random is [0, 1), so u covers (0, 1]
    return headway_from_uniform(u, arrival.rate)


def _as_gap_array(interarrivals) -> np.ndarray:
    gaps = np.asarray(interarrivals, dtype=float)
    if gaps.ndim != 1 or gaps.size == 0:
        raise ValueError("interarrivals must be a non-empty 1-d sequence")
    if np.any(~np.isfinite(gaps)) or np.any(gaps < 0):
        raise ValueError("interarrivals must be finite and >= 0")
    return gaps


def _merge_mask(gaps: np.ndarray, threshold: float) -> np.ndarray:
    merged = gaps <= threshold
    merged[0] = False  # vehicle 1 opens the first platoon; nothing ahead to join
    return merged


def form_platoons(interarrivals, policy: PlatoonPolicy) -> tuple[np.ndarray, np.ndarray]:
    """Group vehicles into platoons under the inclusive threshold rule.

    Returns (platoon_sizes, leader_indices) where leader indices are 1-based
    vehicle numbers; vehicle k (k >= 2) joins the current platoon iff its gap
    is <= threshold, otherwise it leads a new one.
    """
    gaps = _as_gap_array(interarrivals)
    merged = _merge_mask(gaps, policy.threshold)
    leaders0 = np.flatnonzero(~merged)
    sizes = np.diff(np.append(leaders0, gaps.size))
    return sizes.astype(np.int64), (leaders0 + 1).astype(np.int64)


def compute_time_shifts(interarrivals, policy: PlatoonPolicy) -> np.ndarray:
    """Per-vehicle catch-up time shifts, seconds.

    Leaders shift by 0; a vehicle that merges inherits its predecessor's
    shift plus its own gap (it closes the gap onto a predecessor that already
    moved forward, ending at zero headway inside the platoon). Equivalent
    recursion: shift[k] = gap[k] + shift[k-1] if gap[k] <= threshold else 0.
    """
    gaps = _as_gap_array(interarrivals)
    merged = _merge_mask(gaps, policy.threshold)
    gained = np.where(merged, gaps, 0.0)
    running = np.cumsum(gained)
    # Index of the most recent leader at or before each vehicle; subtracting
    # the running sum there resets the accumulation at every platoon start.
    last_leader = np.maximum.accumulate(np.where(~merged, np.arange(gaps.size), -1))
    return running - running[last_leader]


def platoon_leader_headways(interarrivals, leader_indices) -> np.ndarray:
    """Leader-to-leader gaps between consecutive platoons, seconds.

    Element n is the arrival-time difference between the leaders of platoons
    n and n+1, i.e. the sum of the gaps strictly after the first leader up to
    and including the second. Fewer than two platoons give an empty result.
    """
    gaps = _as_gap_array(interarrivals)
    leaders = np.asarray(leader_indices, dtype=np.int64)
    if leaders.size == 0 or leaders[0] != 1 or np.any(np.diff(leaders) <= 0):
        raise ValueError("leader_indices must be strictly increasing and start at 1")
    if leaders[-1] > gaps.size:
        raise ValueError("leader index beyond the number of vehicles")
    if leaders.size < 2:
        return np.empty(0, dtype=float)
    arrival_times = np.cumsum(gaps)
    return np.diff(arrival_times[leaders - 1])


def run_from_interarrivals(interarrivals, policy: PlatoonPolicy) -> SimulationRun:
    """Assemble the full run record for a given gap sequence."""
    gaps = _as_gap_array(interarrivals)
    sizes, leaders = form_platoons(gaps, policy)
    return SimulationRun(
        interarrivals=gaps,
        platoon_sizes=sizes,
        leader_indices=leaders,
        leader_headways=platoon_leader_headways(gaps, leaders),
        time_shifts=compute_time_shifts(gaps, policy),
    )


def run_simulation(
    arrival: ArrivalModel,
    policy: PlatoonPolicy,
    n_vehicles: int,
    seed: int,
    replication: int = 0,
) -> SimulationRun:
    """Sample one seeded replication and assemble its run record."""
    validate_scenario(arrival, policy)
    gaps = sample_interarrivals(seed, n_vehicles, arrival, replication=replication)
    return run_from_interarrivals(gaps, policy)


def _extract_samples(
    run: SimulationRun, warmup_vehicles: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Statistic samples for one run.

    The final platoon is right-censored (no gap > threshold ever terminated
    it) and is dropped from the size sample; vehicles 1..warmup are dropped
    from the shift sample.
    """
    if not isinstance(warmup_vehicles, int) or isinstance(warmup_vehicles, bool) or warmup_vehicles < 0:
        raise ValueError(f"warmup_vehicles must be an integer >= 0, got {warmup_vehicles!r}")
    sizes = run.platoon_sizes[:-1]
    headways = run.leader_headways
    shifts = run.time_shifts[warmup_vehicles:]
    return sizes, headways, shifts


def _estimate(values: np.ndarray, statistic: str) -> StatEstimate:
    if values.size == 0:
        raise ValueError(f"no {statistic} samples to summarize")
    mean = float(np.mean(values))
    if values.size < 2:
        half_width = 0.0
    else:
        half_width = Z_95 * float(np.std(values, ddof=1)) / float(np.sqrt(values.size))
    return StatEstimate(mean=mean, ci_half_width=half_width, count=int(values.size))


def _summarize_samples(
    sizes: np.ndarray, headways: np.ndarray, shifts: np.ndarray, pmf_cutoff: int
) -> EmpiricalSummary:
    if not isinstance(pmf_cutoff, int) or isinstance(pmf_cutoff, bool) or pmf_cutoff < 1:
        raise ValueError(f"pmf_cutoff must be an integer >= 1, got {pmf_cutoff!r}")
    size_est = _estimate(sizes, "platoon-size (all platoons censored)")
    headway_est = _estimate(headways, "leader-headway (fewer than two platoons)")
    shift_est = _estimate(shifts, "time-shift (post-warmup)")
    counts = np.bincount(sizes, minlength=pmf_cutoff + 1)
    pmf = {y: float(counts[y] / sizes.size) for y in range(1, pmf_cutoff + 1)}
    return EmpiricalSummary(
        platoon_size=size_est,
        leader_headway=headway_est,
        time_shift=shift_est,
        size_pmf=pmf,
    )


def summarize(run: SimulationRun, warmup_vehicles: int = 0, pmf_cutoff: int = 10) -> EmpiricalSummary:
    """Empirical means, 95% CI half-widths, and the size PMF for one run."""
    sizes, headways, shifts = _extract_samples(run, warmup_vehicles)
    return _summarize_samples(sizes, headways, shifts, pmf_cutoff)


def run_replications(
    config: SimulationConfig, pmf_cutoff: int = 10
) -> tuple[EmpiricalSummary, list[EmpiricalSummary]]:
    """Run every replication of ``config`` and pool the raw samples.

    Returns (aggregate, per_replication). Pooling concatenates the raw
    statistic samples in replication-index order before summarizing, so the
    aggregate does not depend on execution order.
    """
    size_parts: list[np.ndarray] = []
    headway_parts: list[np.ndarray] = []
    shift_parts: list[np.ndarray] = []
    per_replication: list[EmpiricalSummary] = []
    for rep in range(config.n_replications):
        try:
            run = run_simulation(
                config.arrival, config.policy, config.n_vehicles, config.seed, replication=rep
            )
            sizes, headways, shifts = _extract_samples(run, config.warmup_vehicles)
            per_replication.append(_summarize_samples(sizes, headways, shifts, pmf_cutoff))
        except ValueError as exc:
            raise ValueError(f"replication {rep}: {exc}") from exc
        size_parts.append(sizes)
        headway_parts.append(headways)
        shift_parts.append(shifts)
    aggregate = _summarize_samples(
        np.concatenate(size_parts),
        np.concatenate(headway_parts),
        np.concatenate(shift_parts),
        pmf_cutoff,
    )
    return aggregate, per_replication
