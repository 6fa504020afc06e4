import math
from fractions import Fraction

import pytest

import cml


def test_system_roundtrip():
    g = cml.System(2, 2, ["x1*y1 - x2*y2"])
    assert (g.n1, g.n2, g.R, g.d1, g.d2) == (2, 2, 1, 1, 1)
    again = cml.System.from_json(g.to_json())
    assert again.to_json() == g.to_json()


def test_worked_densities():
    g = cml.System(2, 2, ["x1*y1 - x2*y2"])
    assert cml.A(g, 2) == 1
    assert cml.A(g, 3) == Fraction(1, 2)
    assert cml.A(g, 6) == cml.A(g, 2) * cml.A(g, 3)
    report = cml.singular_series(g, [2, 3], 2)
    assert all(p["identity_ok"] for p in report["primes"])


def test_counts():
    r = cml.count_prime_solutions(cml.System(1, 1, ["x1*y1 - 6"]), 10, 10)
    assert r["unweighted"] == 2
    assert r["weighted"] == pytest.approx(2 * math.log(2) * math.log(3), rel=1e-12)
    s = cml.count_semiprime_solutions("x1 - 4", 1, 10, 10, 10)
    assert s["weighted"] == pytest.approx(math.log(2) ** 2, rel=1e-12)
    ineq = cml.check_inequality("x1 - x2", 2, 100)
    assert ineq["ok"]


def test_schedule_and_errors():
    ctx = cml.schedule(769)
    assert ctx["K"] == 48.03125
    assert ctx["theta0"] == 0.25
    with pytest.raises(cml.HypothesisError):
        cml.schedule(193)
    with pytest.raises(cml.InputError):
        cml.System(1, 1, ["x1*z1"])
    with pytest.raises(cml.BudgetError):
        cml.count_prime_solutions(cml.System(2, 2, ["x1*y1 - x2*y2"]), 1000, 1000, budget=10)


def test_arcs_and_weyl():
    loc = cml.locate([1 / 3], 0.1, 10, 10)
    assert loc["major"] and loc["q"] == 3
    w = cml.weyl_chain(cml.System(1, 1, ["x1*y1"]), [0.3], 8, 8)
    assert w["ok"]


def test_geometry_and_thresholds():
    h = cml.codim_halving("x1^2 + x2^2", 2, [5, 7])
    assert h["ok"]
    assert cml.rank_locus_count(cml.System(2, 2, ["x1^2*y1^2 + x2^2*y2^2"]), 1, 5) == 81
    assert cml.threshold_two_semiprimes(2) == 384
    assert cml.threshold_bihomogeneous(2, 2, 1, 1) == 192
    assert cml.threshold_semiprime_delta(2, Fraction(1, 2)) == 384


def test_J_and_verify():
    out = cml.J(["x1*x2 - x3*x4"], 4, [8, 16], points=64)
    assert abs(out["J"][-1]["value"] - 2) < 0.5
    rep = cml.verify("identities", 7)
    assert rep["all_passed"]
