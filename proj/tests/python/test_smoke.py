import json
import math

import pytest

import rwppt


def gaussian_model(d=1):
    return rwppt.TargetModel(d, [rwppt.Region([0.0] * d, 12.0, 1.0, rwppt.MarginalFamily.exp_power(2, 1.0))])


def test_mhat_root():
    m_hat, value = rwppt.mhat_root()
    assert abs(m_hat - 1.1906012483427703) < 1e-9
    assert abs(value - 0.23381016133183664) < 1e-12


def test_gaussian_cumulants():
    c = rwppt.cumulants(rwppt.MarginalFamily.exp_power(2, 1.0), 20.0, 0.5)
    assert c.I == pytest.approx(2.0, rel=1e-8)
    assert c.M == pytest.approx(-1.0, rel=1e-8)


def test_optimizer_homogeneous():
    ell_hat, a_hat = rwppt.optimize_ell(rwppt.InformationProfile([0.5, 0.5], [2.0, 2.0]))
    assert a_hat == pytest.approx(0.2338101613, abs=1e-8)
    assert ell_hat * 2.0 == pytest.approx(2 * rwppt.mhat_root()[0], abs=1e-8)


def test_h_fun_domain():
    with pytest.raises(ValueError):
        rwppt.h_fun(1.0)


def test_ladder_plans_agree():
    model = rwppt.TargetModel(1, [rwppt.Region([0.0], 40.0, 1.0, rwppt.MarginalFamily.exp_power(2, 1.0))])
    geo = rwppt.geometric_ladder(model, 0.1, 100)
    opt = rwppt.optimal_ladder(model, 0.1, 100)
    assert len(geo["betas"]) == len(opt["betas"])
    assert max(abs(a - b) for a, b in zip(geo["betas"], opt["betas"])) < 1e-6


def test_estimate_acceptance_deterministic():
    model = gaussian_model(16)
    a1 = rwppt.estimate_acceptance(model, 0.5, 1.0, 20000, seed=3, threads=1)
    a2 = rwppt.estimate_acceptance(model, 0.5, 1.0, 20000, seed=3, threads=4)
    assert a1 == a2
    assert 0.0 < a1[0] < 1.0


def test_config_round_trip():
    config = rwppt.parse_config(json.dumps({
        "dimension": 1,
        "seed": 1,
        "beta": 1.0,
        "ell_grid": {"start": 0.5, "stop": 2.0, "count": 4},
        "regions": [{"center": [0.0], "half_width": 12.0, "weight": 1.0,
                     "family": {"kind": "exp_power", "z": 2, "sigma": 1.0}}],
    }))
    lines = rwppt.theory_curve_csv(config).splitlines()
    assert lines[0] == "ell,E_ell,a_ell"
    assert len(lines) == 5
    ell, e, a = map(float, lines[1].split(","))
    assert e == pytest.approx(ell * ell * a, rel=1e-10)
    assert math.isfinite(json.loads(rwppt.optimize_json(config))["ell_hat"])


def test_config_unknown_key():
    with pytest.raises(rwppt.ConfigError):
        rwppt.parse_config('{"dimension": 1, "regions": [], "bogus": 1}')
