"""Cognitive-radio layer: users, distances to the primary, and user selection."""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._validation import check_finite, check_in_range, check_positive
from .config import ConfigError
from .fls import infer_many

DISTANCE_SCALE = 10.0
DISTANCE_MODES = ("relative", "prenormalized")


@dataclass(frozen=True)
class PrimaryUser:
    x: float
    y: float


@dataclass(frozen=True)
class SecondaryUser:
    id: str
    x: float
    y: float
    mobility: float
    utilization: float

    def __post_init__(self):
        check_finite(self.x, f"{self.id}.x")
        check_finite(self.y, f"{self.id}.y")
        check_in_range(self.mobility, 0.0, 10.0, f"{self.id}.mobility")
        check_in_range(self.utilization, 0.0, 100.0, f"{self.id}.utilization")


@dataclass(frozen=True)
class Scenario:
    """Square area with one primary and one or more secondary users.

    ``distance_mode`` picks how raw distances become the 0-10 fuzzy input:
    ``"relative"`` rescales so the farthest user sits at 10, while
    ``"prenormalized"`` reads the raw distance as already on that scale and
    only clamps it.
    """

    area: float
    primary: PrimaryUser
    secondaries: tuple
    seed: int | None = None
    distance_mode: str = "relative"

    def __post_init__(self):
        check_positive(self.area, "area")
        object.__setattr__(self, "secondaries", tuple(self.secondaries))
        if not self.secondaries:
            raise ValueError("a scenario needs at least one secondary user")
        if self.distance_mode not in DISTANCE_MODES:
            raise ValueError(f"distance_mode must be one of {DISTANCE_MODES}")
        ids = [su.id for su in self.secondaries]
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise ValueError(f"duplicate secondary user ids: {dupes}")
        for who, x, y in [("primary", self.primary.x, self.primary.y)] + [
            (su.id, su.x, su.y) for su in self.secondaries
        ]:
            if not (0.0 <= x <= self.area and 0.0 <= y <= self.area):
                raise ValueError(f"{who} at ({x:g}, {y:g}) is outside the {self.area:g} m area")


@dataclass(frozen=True)
class UserAssessment:
    id: str
    distance: float  # metres
    normalized_distance: float  # fuzzy input scale [0, 10]
    possibility: float


@dataclass(frozen=True)
class AccessDecision:
    per_user: tuple
    chosen: str

    def to_rows(self):
        return [
            {
                "id": u.id,
                "d_i": u.distance,
                "D_i": u.normalized_distance,
                "possibility": u.possibility,
                "chosen": int(u.id == self.chosen),
            }
            for u in self.per_user
        ]


def euclidean_distance(su, pu):
    return math.hypot(su.x - pu.x, su.y - pu.y)


def normalize(distances, scale=DISTANCE_SCALE):
    d = np.asarray(distances, dtype=float)
    top = d.max() if d.size else 0.0
    if not top > 0.0:
        raise ValueError("every secondary user coincides with the primary; cannot normalise")
    return (d / top) * scale


def normalize_distances(scenario):
    d = [euclidean_distance(su, scenario.primary) for su in scenario.secondaries]
    if scenario.distance_mode == "prenormalized":
        return np.clip(np.asarray(d), 0.0, DISTANCE_SCALE)
    return normalize(d)


def possibility(su, normalized_distance, rulebase):
    check_in_range(normalized_distance, 0.0, DISTANCE_SCALE, "normalized_distance")
    return float(infer_many(rulebase, [su.utilization, su.mobility, normalized_distance]))


def _natural_key(s):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", s)]


def select_user(scenario, rulebase):
    """Score every secondary user and pick the most likely one.

    Ties go to the lowest id in natural order (``SU2`` before ``SU10``).
    """
    raw = [euclidean_distance(su, scenario.primary) for su in scenario.secondaries]
    norm = normalize_distances(scenario)
    X = np.array(
        [[su.utilization, su.mobility, D] for su, D in zip(scenario.secondaries, norm)]
    )
    ys = infer_many(rulebase, X)
    per_user = tuple(
        UserAssessment(su.id, float(d), float(D), float(y))
        for su, d, D, y in zip(scenario.secondaries, raw, norm, ys)
    )
    best = max(ys)
    chosen = min((u.id for u in per_user if u.possibility == best), key=_natural_key)
    return AccessDecision(per_user, chosen)


def scenario_from_dict(doc):
    if not isinstance(doc, dict):
        raise ConfigError("top level must be an object")
    try:
        primary = PrimaryUser(float(doc["primary"]["x"]), float(doc["primary"]["y"]))
        users = []
        for k, u in enumerate(doc["users"]):
            where = f"users[{k}]"
            try:
                users.append(
                    SecondaryUser(
                        str(u["id"]), float(u["x"]), float(u["y"]),
                        float(u["mobility"]), float(u["utilization"]),
                    )
                )
            except KeyError as exc:
                raise ConfigError(f"missing key {exc}", where) from None
            except (TypeError, ValueError) as exc:
                raise ConfigError(str(exc), where) from None
        return Scenario(
            float(doc["area"]), primary, tuple(users),
            seed=doc.get("seed"), distance_mode=doc.get("distance_mode", "relative"),
        )
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"missing key {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def scenario_to_dict(scenario):
    doc = {
        "area": scenario.area,
        "distance_mode": scenario.distance_mode,
        "primary": {"x": scenario.primary.x, "y": scenario.primary.y},
        "users": [
            {"id": su.id, "x": su.x, "y": su.y,
             "mobility": su.mobility, "utilization": su.utilization}
            for su in scenario.secondaries
        ],
    }
    if scenario.seed is not None:
        doc["seed"] = scenario.seed
    return doc


def load_scenario(path):
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, f"{path}: line {exc.lineno} column {exc.colno}") from None
    try:
        return scenario_from_dict(doc)
    except ConfigError as exc:
        raise ConfigError(str(exc), str(path)) from None


def dump_scenario(scenario, path):
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n", encoding="utf-8")


def fmt(v):
    """Six significant digits, the precision used for every exported number."""
    return f"{v:.6g}"


def decision_to_csv(decision):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "d_i", "D_i", "possibility", "chosen"])
    for r in decision.to_rows():
        w.writerow([r["id"], fmt(r["d_i"]), fmt(r["D_i"]), fmt(r["possibility"]), r["chosen"]])
    return buf.getvalue()
