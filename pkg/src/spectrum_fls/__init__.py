"""Fuzzy-logic opportunistic spectrum access for cognitive radio."""

from .config import (
    ConfigError, default_rulebase, dump_rulebase, load_rulebase, rulebase_from_dict,
    rulebase_to_dict, validate_document,
)
from .estimator import PossibilityRegressor
from .fls import (
    FuzzyVariable, Rule, RuleBase, RuleBaseError, ZeroFiringError, firing_strength, infer,
    infer_many, product_tnorm, rule_consequent_centroid,
)
from .membership import (
    EmptyFuzzySetError, MembershipFunction, centroid, membership, trapezoid, triangle,
    uniform_partition,
)
from .simulation import (
    SurfaceGrid, TrafficConfig, TrafficStats, decision_surface, erlang_b, generate_scenario,
    replicate, run_traffic, sweep_arrival_rates,
)
from .spectrum import (
    AccessDecision, PrimaryUser, Scenario, SecondaryUser, euclidean_distance, load_scenario,
    normalize_distances, possibility, select_user,
)

__version__ = "0.1.0"
