"""JSON rule-base documents: parsing, serialising and validation."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .fls import FuzzyVariable, Rule, RuleBase, RuleBaseError, rule_consequent_centroid
from .membership import MembershipFunction

DEFAULT_RULEBASE = "default_rulebase.json"


class ConfigError(ValueError):
    """A configuration document is malformed; ``location`` says where."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def _variable_from_dict(doc, where):
    try:
        name = doc["name"]
        lo, hi = doc["universe"]
        labels = []
        for j, lab in enumerate(doc["labels"]):
            try:
                mf = MembershipFunction(lab["shape"], tuple(lab["points"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(str(exc), f"{where}.labels[{j}]") from None
            labels.append((lab["name"], mf))
        return FuzzyVariable(name, (lo, hi), tuple(labels))
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"missing key {exc}", where) from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), where) from None


def _variable_to_dict(var):
    return {
        "name": var.name,
        "universe": list(var.universe),
        "labels": [{"name": n, **mf.to_dict()} for n, mf in var.labels],
    }


def rulebase_from_dict(doc, resolution=1001):
    """Build a :class:`RuleBase` from a parsed document.

    A rule may omit ``centroid`` when it carries ``weights``; the centroid is
    then the weighted average of the output label centroids.
    """
    if not isinstance(doc, dict):
        raise ConfigError("top level must be an object")
    for key in ("inputs", "output", "rules"):
        if key not in doc:
            raise ConfigError(f"missing key {key!r}")
    inputs = tuple(
        _variable_from_dict(v, f"inputs[{k}]") for k, v in enumerate(doc["inputs"])
    )
    output = _variable_from_dict(doc["output"], "output")
    out_centroids = None
    rules = []
    for k, row in enumerate(doc["rules"], start=1):
        where = f"rule {k}"
        try:
            ifs = row["if"]
            if len(ifs) != len(inputs):
                raise ConfigError(f"{len(ifs)} antecedents for {len(inputs)} inputs", where)
            ante = tuple(v.index(lab) for v, lab in zip(inputs, ifs))
            cons = output.index(row["then"])
            weights = row.get("weights")
            if "centroid" in row:
                cent = float(row["centroid"])
            elif weights is not None:
                if out_centroids is None:
                    out_centroids = output.centroids(resolution)
                cent = rule_consequent_centroid(weights, out_centroids)
            else:
                raise ConfigError("needs a centroid or weights", where)
        except ConfigError:
            raise
        except KeyError as exc:
            raise ConfigError(exc.args[0], where) from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc), where) from None
        rules.append(Rule(ante, cons, cent, None if weights is None else tuple(weights)))
    return RuleBase(inputs, output, tuple(rules))


def rulebase_to_dict(rb):
    return {
        "inputs": [_variable_to_dict(v) for v in rb.inputs],
        "output": _variable_to_dict(rb.output),
        "rules": [
            {
                "if": [v.label_names[i] for v, i in zip(rb.inputs, r.antecedent)],
                "then": rb.output.label_names[r.consequent],
                "centroid": r.centroid,
                **({"weights": list(r.weights)} if r.weights is not None else {}),
            }
            for r in rb.rules
        ],
    }


def _read_json(path):
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, f"{path}: line {exc.lineno} column {exc.colno}") from None


def load_rulebase(path=None):
    """Load a rule base from ``path``, or the bundled default when ``path`` is None."""
    if path is None:
        return default_rulebase()
    doc = _read_json(path)
    try:
        return rulebase_from_dict(doc)
    except ConfigError as exc:
        raise ConfigError(str(exc), str(path)) from None


def dump_rulebase(rb, path):
    Path(path).write_text(json.dumps(rulebase_to_dict(rb), indent=2) + "\n", encoding="utf-8")


@lru_cache(maxsize=1)
def default_rulebase():
    """The bundled 27-rule base with the published per-rule centroids."""
    text = resources.files(__package__).joinpath("data", DEFAULT_RULEBASE).read_text("utf-8")
    return rulebase_from_dict(json.loads(text))


def partition_problems(var, n_samples=1000, tol=1e-9):
    xs = np.linspace(*var.universe, n_samples)
    sums = var.degrees(xs).sum(axis=-1)
    worst = int(np.argmax(np.abs(sums - 1.0)))
    if abs(sums[worst] - 1.0) > tol:
        return [
            f"{var.name}: label degrees sum to {sums[worst]:.6g} at x={xs[worst]:.6g}, "
            "not a partition of unity"
        ]
    return []


def validate_document(doc):
    """Return ``(rulebase_or_None, problems)`` for a parsed document.

    Beyond construction-time invariants this also samples every input
    variable for a partition of unity, which inference relies on to never
    meet an input where no rule fires.
    """
    try:
        rb = rulebase_from_dict(doc)
    except RuleBaseError as exc:
        return None, exc.problems
    except ConfigError as exc:
        return None, [str(exc)]
    problems = []
    for var in rb.inputs:
        problems += partition_problems(var)
    return rb, problems
