import json
import pathlib

import numpy as np
import pytest

import imcons

SCHEMA = pathlib.Path(__file__).resolve().parents[2] / "schema" / "run_config.schema.json"


def test_regulator_first_agent():
    agent = imcons.paper_agents()[0]
    sol = imcons.solve_regulator(agent, imcons.paper_reference())
    np.testing.assert_allclose(sol.Pi, [[1, 0], [0, 1], [0, 0]], atol=1e-12)
    np.testing.assert_allclose(sol.Gamma, [[0, 2]], atol=1e-12)
    np.testing.assert_allclose(sol.L, [[2.3923, 6.99]], atol=1e-12)


def test_mcai_bounds_and_membership():
    agent = imcons.paper_agents()[3]
    sol = imcons.solve_regulator(agent, imcons.paper_reference())
    s = imcons.compute_mcai(agent, sol)
    assert s.t_star <= 500
    assert s.w2_bounds_untightened[1] == pytest.approx(1.0, abs=1e-9)
    assert s.w2_bounds[1] == pytest.approx(0.99, abs=1e-9)
    w = np.array([5.0, 0.5])
    assert imcons.in_O_inf(s, sol.Pi @ w, w)
    assert not imcons.in_O_inf(s, sol.Pi @ w, np.array([5.0, 1.5]))
    back = imcons.mcai_from_text(s.to_text())
    np.testing.assert_array_equal(back.Hx, s.Hx)


def test_custom_agent_and_assumptions():
    agent = imcons.AgentModel(A=[[1.0]], B=[[1.0]], C=[[1.0]], u_min=[-1.0], u_max=[1.0],
                              K=[[-1.0]])
    ref = imcons.ReferenceModel(h=0.5, Q=[[1.0, 0.0]])
    checks = imcons.check_assumptions(agent, ref)
    assert all(ok for _, ok, _ in checks)
    s = imcons.compute_mcai(agent, imcons.solve_regulator(agent, ref))
    assert s.t_star == 0


def test_errors_carry_codes():
    agent = imcons.paper_agents()[0]
    sol = imcons.solve_regulator(agent, imcons.paper_reference())
    with pytest.raises(imcons.Error, match="HorizonExceeded"):
        imcons.compute_mcai(agent, sol, epsilon=0.0)
    with pytest.raises(imcons.Error, match="Config"):
        imcons.parse_config("{}")


def test_second_scenario_run():
    out = imcons.run("paper-s2")
    m = out["metrics"]
    assert m["passed"]
    assert all(a["violations"] == 0 for a in m["agents"])
    a3 = out["agents"][2]
    entry = a3["entry_step"]
    assert entry and entry > 0
    assert np.all(a3["u"][:entry] == 0.0)
    assert np.all(a3["governor"][:entry] == 0)
    assert np.max(np.abs(np.vstack([a["u"] for a in out["agents"]]))) <= 1.0
    assert abs(m["consensus"][1]) <= 0.1


def test_config_round_trip_and_schema():
    text = imcons.emit_config(imcons.builtin_config("paper-s1"))
    assert imcons.emit_config(imcons.parse_config(text)) == text
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(json.loads(text), json.loads(SCHEMA.read_text()))


def test_runs_are_deterministic():
    a = imcons.run("paper-s1", horizon=120)
    b = imcons.run("paper-s1", horizon=120)
    assert a["csv"] == b["csv"]
    assert a["csv"][0].startswith("t,x1,x2,x3,u1,y,y_r,omega1,omega2,alpha1,alpha2,mu,gate,mode\n")


def test_perturbed_seed():
    m = imcons.run("paper-s1", seed=5)["metrics"]
    assert all(a["violations"] == 0 for a in m["agents"])
