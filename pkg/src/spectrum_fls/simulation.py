"""Random scenarios, decision surfaces and the channel-access traffic model."""

from __future__ import annotations

import csv
import heapq
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ._validation import check_in_range, check_positive
from .fls import infer_many
from .spectrum import PrimaryUser, Scenario, SecondaryUser, fmt, select_user

DEFAULT_SURFACE_STEP = (2.0, 1.0)

TRAFFIC_COLUMNS = (
    "lambda", "offered", "blocked", "blocking_rate", "interference_rate", "channel_utilization",
)


def make_rng(seed):
    """PCG64 stream: a fixed, documented algorithm, so seeds replay across platforms."""
    return np.random.Generator(np.random.PCG64(seed))


def generate_scenario(seed, n_users=20, area=100.0):
    if n_users < 1:
        raise ValueError("n_users must be >= 1")
    check_positive(area, "area")
    rng = make_rng(seed)
    px, py = rng.uniform(0.0, area, size=2)
    pos = rng.uniform(0.0, area, size=(n_users, 2))
    util = rng.uniform(0.0, 100.0, size=n_users)
    mob = rng.uniform(0.0, 10.0, size=n_users)
    users = tuple(
        SecondaryUser(f"SU{k + 1}", float(x), float(y), float(m), float(u))
        for k, ((x, y), m, u) in enumerate(zip(pos, mob, util))
    )
    return Scenario(float(area), PrimaryUser(float(px), float(py)), users, seed=seed)


# -- decision surfaces -------------------------------------------------------


@dataclass(frozen=True)
class SurfaceGrid:
    fixed_axis: str
    fixed_value: float
    step: tuple
    x1: np.ndarray
    x2: np.ndarray
    values: np.ndarray  # shape (len(x1), len(x2))

    @property
    def cells(self):
        return [
            (float(a), float(b), float(self.values[i, j]))
            for i, a in enumerate(self.x1)
            for j, b in enumerate(self.x2)
        ]

    @property
    def mean(self):
        return float(self.values.mean())

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x1", "x2", "possibility"])
        for a, b, y in self.cells:
            w.writerow([fmt(a), fmt(b), fmt(y)])
        return buf.getvalue()

    def to_records(self):
        return [{"x1": a, "x2": b, "possibility": y} for a, b, y in self.cells]


def _axis(lo, hi, step):
    n = math.floor((hi - lo) / step + 1e-9)
    return lo + step * np.arange(n + 1)


def decision_surface(rulebase, fixed_x3, step=DEFAULT_SURFACE_STEP):
    """Possibility over the (utilization, mobility) plane at a fixed distance.

    ``step`` is either one spacing for both axes or a ``(x1_step, x2_step)``
    pair.
    """
    if np.ndim(step) == 0:
        step = (step, step)
    s1, s2 = (check_positive(float(s), "step") for s in step)
    v3 = rulebase.inputs[2]
    check_in_range(float(fixed_x3), *v3.universe, name="fixed_x3")
    x1 = _axis(*rulebase.inputs[0].universe, s1)
    x2 = _axis(*rulebase.inputs[1].universe, s2)
    g1, g2 = np.meshgrid(x1, x2, indexing="ij")
    X = np.stack([g1, g2, np.full_like(g1, float(fixed_x3))], axis=-1)
    values = infer_many(rulebase, X.reshape(-1, 3)).reshape(g1.shape)
    return SurfaceGrid("x3", float(fixed_x3), (s1, s2), x1, x2, values)


# -- traffic -----------------------------------------------------------------


def erlang_b(channels, offered_load):
    """Blocking probability of an M/M/C/C loss system (stable recurrence)."""
    if channels < 0 or int(channels) != channels:
        raise ValueError("channels must be a non-negative integer")
    if offered_load < 0:
        raise ValueError("offered load must be non-negative")
    b = 1.0
    for k in range(1, int(channels) + 1):
        b = offered_load * b / (k + offered_load * b)
    return b


@dataclass(frozen=True)
class TrafficConfig:
    arrival_rate: float
    holding_time: float = 1.0
    channels: int = 5
    threshold: float = 0.0
    interference_radius: float = 20.0
    duration: float = 1000.0
    seed: int = 0
    warmup_fraction: float = 0.1

    def __post_init__(self):
        check_positive(self.arrival_rate, "arrival_rate")
        check_positive(self.holding_time, "holding_time")
        if int(self.channels) != self.channels or self.channels < 1:
            raise ValueError(f"channels must be a positive integer, got {self.channels!r}")
        check_in_range(self.threshold, 0.0, 100.0, "threshold")
        check_in_range(self.interference_radius, 0.0, math.inf, "interference_radius")
        check_positive(self.duration, "duration")
        check_in_range(self.warmup_fraction, 0.0, 0.999, "warmup_fraction")

    @property
    def offered_load(self):
        return self.arrival_rate * self.holding_time


@dataclass(frozen=True)
class TrafficStats:
    offered_calls: int
    blocked_calls: int
    blocking_rate: float
    interference_events: int
    interference_rate: float
    channel_utilization: float
    denied_calls: int  # blocked by the possibility threshold while a channel was free
    busy_time: float
    measured_duration: float

    @property
    def admitted_calls(self):
        return self.offered_calls - self.blocked_calls


def run_traffic(scenario, rulebase, config, observer=None):
    """Event-driven loss system with possibility-threshold admission.

    Each arrival belongs to a uniformly drawn secondary user. It takes a
    channel only if one is free and the user's possibility reaches
    ``config.threshold``; otherwise it is lost. An admitted call from a user
    closer to the primary than ``interference_radius`` metres counts as an
    interference event. Counters and the busy-channel integral cover only
    ``[warmup, duration]``.

    Every arrival draws its inter-arrival gap, user and holding time in that
    order whether or not it is admitted, so two configs sharing a seed see
    the same offered traffic.

    ``observer(time, busy)``, if given, is called after every event.
    """
    if config.duration <= 0:
        raise ValueError("simulation duration must be positive")
    decision = select_user(scenario, rulebase)
    poss = np.array([u.possibility for u in decision.per_user])
    near = np.array([u.distance < config.interference_radius for u in decision.per_user])
    n_users = len(poss)
    rng = make_rng(config.seed)
    horizon = float(config.duration)
    warmup = config.warmup_fraction * horizon
    mean_gap = 1.0 / config.arrival_rate
    C = int(config.channels)

    departures = []
    busy = 0
    clock = 0.0
    busy_time = 0.0
    offered = blocked = denied = interference = 0

    def advance(t):
        nonlocal clock, busy_time
        lo = max(clock, warmup)
        if t > lo:
            busy_time += busy * (t - lo)
        clock = t

    t = 0.0
    while True:
        t += rng.exponential(mean_gap)
        user = int(rng.integers(n_users))
        hold = rng.exponential(config.holding_time)
        if t > horizon:
            break
        while departures and departures[0] <= t:
            dep = heapq.heappop(departures)
            advance(dep)
            busy -= 1
            if observer is not None:
                observer(clock, busy)
        advance(t)
        counted = t >= warmup
        free = busy < C
        if free and poss[user] >= config.threshold:
            busy += 1
            heapq.heappush(departures, t + hold)
            if counted and near[user]:
                interference += 1
        elif counted:
            blocked += 1
            denied += int(free)
        offered += int(counted)
        if observer is not None:
            observer(clock, busy)
    while departures and departures[0] <= horizon:
        advance(heapq.heappop(departures))
        busy -= 1
        if observer is not None:
            observer(clock, busy)
    advance(horizon)

    measured = horizon - warmup
    return TrafficStats(
        offered_calls=offered,
        blocked_calls=blocked,
        blocking_rate=blocked / offered if offered else 0.0,
        interference_events=interference,
        interference_rate=interference / offered if offered else 0.0,
        channel_utilization=busy_time / (C * measured),
        denied_calls=denied,
        busy_time=busy_time,
        measured_duration=measured,
    )


def _run_one(args):
    return run_traffic(*args)


def _run_many(scenario, rulebase, configs, n_jobs):
    jobs = [(scenario, rulebase, c) for c in configs]
    if n_jobs == 1 or len(jobs) == 1:
        return [_run_one(j) for j in jobs]
    # map() yields in submission order, so results never depend on scheduling
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(_run_one, jobs))


def replicate(scenario, rulebase, config, n_replications, n_jobs=1):
    """Independent runs seeded ``config.seed + k`` for ``k`` in ``range(n)``."""
    configs = [replace(config, seed=config.seed + k) for k in range(n_replications)]
    return _run_many(scenario, rulebase, configs, n_jobs)


def sweep_arrival_rates(scenario, rulebase, base_config, rates, n_jobs=1):
    """One run per arrival rate; the run at index ``k`` uses ``seed + k``."""
    rates = [float(r) for r in rates]
    if not rates:
        raise ValueError("need at least one arrival rate")
    configs = [
        replace(base_config, arrival_rate=r, seed=base_config.seed + k)
        for k, r in enumerate(rates)
    ]
    return list(zip(rates, _run_many(scenario, rulebase, configs, n_jobs)))


def sweep_records(series):
    return [
        {
            "lambda": lam,
            "offered": s.offered_calls,
            "blocked": s.blocked_calls,
            "blocking_rate": s.blocking_rate,
            "interference_rate": s.interference_rate,
            "channel_utilization": s.channel_utilization,
        }
        for lam, s in series
    ]


def sweep_to_csv(series):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAFFIC_COLUMNS)
    for rec in sweep_records(series):
        w.writerow(
            [v if isinstance(v, int) else fmt(v) for v in (rec[c] for c in TRAFFIC_COLUMNS)]
        )
    return buf.getvalue()
