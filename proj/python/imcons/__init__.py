"""Constrained output consensus of linear agents tracking a ramp reference."""

import json

from ._imcons import (
    AgentModel,
    Error,
    McaiSet,
    ReferenceModel,
    RegulatorSolution,
    RunConfig,
    builtin_config,
    check_assumptions,
    compute_mcai,
    emit_config,
    in_O_inf,
    mcai_from_text,
    paper_agents,
    paper_reference,
    parse_config,
    s_power,
    simulate,
    solve_phi,
    solve_regulator,
    x_in_Xinf,
)

__all__ = [
    "AgentModel",
    "Error",
    "McaiSet",
    "ReferenceModel",
    "RegulatorSolution",
    "RunConfig",
    "builtin_config",
    "check_assumptions",
    "compute_mcai",
    "emit_config",
    "in_O_inf",
    "mcai_from_text",
    "paper_agents",
    "paper_reference",
    "parse_config",
    "run",
    "s_power",
    "simulate",
    "solve_phi",
    "solve_regulator",
    "x_in_Xinf",
]


def run(scenario="paper-s1", *, seed=0, horizon=None):
    """Simulates a built-in scenario name, a RunConfig or JSON config text.

    Returns the simulate() dictionary with "metrics" parsed from JSON.
    """
    if isinstance(scenario, RunConfig):
        config = scenario
    elif scenario.lstrip().startswith("{"):
        config = parse_config(scenario)
    else:
        config = builtin_config(scenario, seed)
    if horizon is not None:
        config.horizon = horizon
    out = simulate(config)
    out["metrics"] = json.loads(out.pop("metrics_json"))
    return out
