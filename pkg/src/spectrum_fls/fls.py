"""Single-output fuzzy inference with product firing and center-of-sets output."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .membership import MembershipFunction, centroid, membership


class RuleBaseError(ValueError):
    """A rule base violates one or more structural invariants.

    ``problems`` lists every violation found, not just the first.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ZeroFiringError(ArithmeticError):
    """No rule fires for the given input, so the weighted average is undefined."""


@dataclass(frozen=True)
class FuzzyVariable:
    name: str
    universe: tuple
    labels: tuple  # ((label_name, MembershipFunction), ...)

    def __post_init__(self):
        lo, hi = (float(v) for v in self.universe)
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"{self.name}: universe must satisfy lo < hi, got {self.universe}")
        labels = tuple((str(n), mf) for n, mf in self.labels)
        if not labels:
            raise ValueError(f"{self.name}: needs at least one label")
        names = [n for n, _ in labels]
        if len(set(names)) != len(names):
            raise ValueError(f"{self.name}: duplicate label names in {names}")
        for n, mf in labels:
            if not isinstance(mf, MembershipFunction):
                raise TypeError(f"{self.name}.{n}: expected MembershipFunction")
            a, d = mf.support
            if a < lo or d > hi:
                raise ValueError(
                    f"{self.name}.{n}: support [{a}, {d}] leaves universe [{lo}, {hi}]"
                )
        object.__setattr__(self, "universe", (lo, hi))
        object.__setattr__(self, "labels", labels)

    @property
    def label_names(self):
        return [n for n, _ in self.labels]

    @property
    def mfs(self):
        return [mf for _, mf in self.labels]

    def index(self, label):
        try:
            return self.label_names.index(label)
        except ValueError:
            raise KeyError(f"{self.name} has no label {label!r}") from None

    def clamp(self, x):
        lo, hi = self.universe
        return np.clip(x, lo, hi)

    def degrees(self, x):
        """Degrees of every label at ``x`` (clamped); shape ``(..., n_labels)``."""
        xc = self.clamp(np.asarray(x, dtype=float))
        return np.stack([np.asarray(membership(mf, xc)) for mf in self.mfs], axis=-1)

    def centroids(self, resolution=1001):
        return [centroid(mf, resolution) for mf in self.mfs]


@dataclass(frozen=True)
class Rule:
    antecedent: tuple  # label index per input variable
    consequent: int
    centroid: float
    weights: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "antecedent", tuple(int(i) for i in self.antecedent))
        object.__setattr__(self, "consequent", int(self.consequent))
        object.__setattr__(self, "centroid", float(self.centroid))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))


def rule_consequent_centroid(label_weights, label_centroids):
    """Vote-weighted average of the output label centroids."""
    w = np.asarray(label_weights, dtype=float)
    c = np.asarray(label_centroids, dtype=float)
    if w.shape != c.shape:
        raise ValueError(f"{w.size} weights for {c.size} centroids")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("label weights must be finite and non-negative")
    total = w.sum()
    if total == 0:
        raise ValueError("label weights are all zero; the average is undefined")
    return float(np.dot(w, c) / total)


def rulebase_problems(inputs, output, rules, resolution=1001):
    """Every structural violation as a human-readable string (1-based rule numbers)."""
    problems = []
    n_labels = [len(v.labels) for v in inputs]
    expected = math.prod(n_labels)
    if len(rules) != expected:
        problems.append(f"expected {expected} rules, found {len(rules)}")
    lo, hi = output.universe
    seen = {}
    out_centroids = None
    for k, r in enumerate(rules, start=1):
        if len(r.antecedent) != len(inputs):
            problems.append(
                f"rule {k}: {len(r.antecedent)} antecedents for {len(inputs)} inputs"
            )
            continue
        bad = [
            v.name for v, i, n in zip(inputs, r.antecedent, n_labels) if not 0 <= i < n
        ]
        if bad:
            problems.append(f"rule {k}: antecedent label out of range for {', '.join(bad)}")
            continue
        if r.antecedent in seen:
            problems.append(
                f"rule {k}: duplicates the antecedent combination of rule {seen[r.antecedent]}"
            )
        else:
            seen[r.antecedent] = k
        if not 0 <= r.consequent < len(output.labels):
            problems.append(f"rule {k}: consequent label index {r.consequent} out of range")
        if not (math.isfinite(r.centroid) and lo <= r.centroid <= hi):
            problems.append(
                f"rule {k}: centroid {r.centroid:g} outside output universe [{lo:g}, {hi:g}]"
            )
        if r.weights is not None:
            if out_centroids is None:
                out_centroids = output.centroids(resolution)
            try:
                avg = rule_consequent_centroid(r.weights, out_centroids)
            except ValueError as exc:
                problems.append(f"rule {k}: {exc}")
            else:
                if abs(avg - r.centroid) > 1e-9:
                    problems.append(
                        f"rule {k}: centroid {r.centroid:g} disagrees with its "
                        f"label weights ({avg:.12g})"
                    )
    for combo in itertools.product(*(range(n) for n in n_labels)):
        if combo not in seen:
            names = ", ".join(v.label_names[i] for v, i in zip(inputs, combo))
            problems.append(f"missing rule for ({names})")
    return problems


@dataclass(frozen=True)
class RuleBase:
    """Complete grid rule base: one rule per antecedent label combination."""

    inputs: tuple
    output: FuzzyVariable
    rules: tuple
    _antecedents: np.ndarray = field(init=False, repr=False, compare=False)
    _centroids: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "rules", tuple(self.rules))
        problems = rulebase_problems(self.inputs, self.output, self.rules)
        if problems:
            raise RuleBaseError(problems)
        ante = np.array([r.antecedent for r in self.rules], dtype=int)
        cent = np.array([r.centroid for r in self.rules], dtype=float)
        ante.setflags(write=False)
        cent.setflags(write=False)
        object.__setattr__(self, "_antecedents", ante)
        object.__setattr__(self, "_centroids", cent)

    @property
    def n_inputs(self):
        return len(self.inputs)

    @property
    def centroids(self):
        return self._centroids

    def prototype(self, rule):
        """Input point at the plateau/apex of each of ``rule``'s antecedent labels."""
        return tuple(v.mfs[i].prototype for v, i in zip(self.inputs, rule.antecedent))

    def clamp(self, inputs):
        x = np.asarray(inputs, dtype=float)
        return np.stack([v.clamp(x[..., k]) for k, v in enumerate(self.inputs)], axis=-1)

    def firing_strengths(self, inputs):
        """Product-t-norm firing of every rule; shape ``(..., n_rules)``."""
        x = np.asarray(inputs, dtype=float)
        if x.shape[-1] != self.n_inputs:
            raise ValueError(f"expected {self.n_inputs} inputs, got {x.shape[-1]}")
        firing = None
        for k, var in enumerate(self.inputs):
            deg = var.degrees(x[..., k])[..., self._antecedents[:, k]]
            firing = deg if firing is None else firing * deg
        return firing


def product_tnorm(degrees):
    return float(np.prod(np.asarray(degrees, dtype=float)))


def firing_strength(rulebase, rule, inputs):
    """Firing degree of one rule: the product of its antecedent memberships."""
    x = rulebase.clamp(inputs)
    return product_tnorm(
        [membership(v.mfs[i], xk) for v, i, xk in zip(rulebase.inputs, rule.antecedent, x)]
    )


def infer_many(rulebase, X):
    """Center-of-sets output for each row of ``X``; raises on any zero-firing row."""
    X = np.asarray(X, dtype=float)
    if not np.all(np.isfinite(X)):
        raise ValueError("inputs must be finite")
    firing = rulebase.firing_strengths(X)
    total = firing.sum(axis=-1)
    if np.any(total <= 0.0):
        bad = np.argwhere(np.atleast_1d(total) <= 0.0).ravel()
        raise ZeroFiringError(f"no rule fires for input row(s) {bad.tolist()}")
    # row-wise reduction keeps single-row and batch results bit-identical
    return (firing * rulebase.centroids).sum(axis=-1) / total


def infer(rulebase, inputs):
    """Possibility for a single input triple."""
    x = np.asarray(inputs, dtype=float)
    if x.shape != (rulebase.n_inputs,):
        raise ValueError(f"expected {rulebase.n_inputs} inputs, got shape {x.shape}")
    return float(infer_many(rulebase, x))
