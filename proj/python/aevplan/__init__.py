"""Fleet sizing and charging-station planning for autonomous electric vehicles."""

import json

from ._aevplan import (
    InfeasibleError,
    InputError,
    capital_recovery,
    compare,
    derive_unit_costs,
    expand_network,
    export_problem,
    run_cli,
)
from ._aevplan import plan_json as _plan_json

__all__ = [
    "InfeasibleError",
    "InputError",
    "capital_recovery",
    "compare",
    "derive_unit_costs",
    "expand_network",
    "export_problem",
    "plan",
    "run_cli",
]


def plan(scenario, overrides=()):
    """Solve the scenario's strategy and return the run record as a dict."""
    return json.loads(_plan_json(str(scenario), list(overrides)))
