"""scikit-learn wrapper around the spectrum-access fuzzy system."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_inputs
from .config import load_rulebase
from .fls import RuleBase, infer_many


class PossibilityRegressor(RegressorMixin, BaseEstimator):
    """Map ``(utilization, mobility, distance)`` rows to access possibility.

    The rule base is fixed knowledge, so ``fit`` learns nothing: it resolves
    ``rulebase`` (a :class:`RuleBase`, a path to a JSON document, or None for
    the bundled default) and records the input layout. That keeps the
    estimator usable inside pipelines and grid searches that expect one.

    Parameters
    ----------
    rulebase : RuleBase, str, path-like or None
        Source of the rules and membership functions.
    """

    def __init__(self, rulebase=None):
        self.rulebase = rulebase

    def fit(self, X=None, y=None):
        if isinstance(self.rulebase, RuleBase):
            rb = self.rulebase
        else:
            rb = load_rulebase(self.rulebase)
        self.rulebase_ = rb
        self.n_features_in_ = rb.n_inputs
        self.feature_names_in_ = np.array([v.name for v in rb.inputs], dtype=object)
        if X is not None:
            check_inputs(X, rb.n_inputs)
        return self

    def predict(self, X):
        check_is_fitted(self, "rulebase_")
        X = check_inputs(X, self.n_features_in_)
        return infer_many(self.rulebase_, X)

    def memberships(self, X):
        """Per-variable label degrees, concatenated column-wise (after clamping)."""
        check_is_fitted(self, "rulebase_")
        X = check_inputs(X, self.n_features_in_)
        return np.hstack([v.degrees(X[:, k]) for k, v in enumerate(self.rulebase_.inputs)])

    def firing_strengths(self, X):
        check_is_fitted(self, "rulebase_")
        X = check_inputs(X, self.n_features_in_)
        return self.rulebase_.firing_strengths(X)
