import cmath
import math

import pytest

import lfrm

Q3 = lfrm.Field("padic:p=3,prec=12")


def test_field_and_elements():
    assert Q3.p == 3 and Q3.q == 3 and Q3.family == "padic"
    x = lfrm.Element(Q3, "ord=-2,unit=1")
    assert x.valuation == -2
    assert x == lfrm.Element.power(Q3, -2)
    assert lfrm.Element(Q3, 0).valuation is None
    assert (lfrm.Element(Q3, 3) * lfrm.Element(Q3, 2)) == lfrm.Element(Q3, 6)


def test_gauss_sum_magnitude():
    for p in (3, 5, 7):
        for a in range(1, p):
            g = lfrm.gauss_sum(a, p)
            assert abs(abs(g["value"]) ** 2 - p) < 1e-9


def test_theta_closed_form():
    v = lfrm.theta(lfrm.Element(Q3, "ord=-2,unit=1"))
    assert v.to_json() == {"unit": "+1", "half_exp": 2}
    x = lfrm.Element(Q3, "ord=-3,unit=2")
    assert abs(lfrm.theta(x).to_complex(3) - lfrm.theta_bruteforce(x)) < 1e-9


def test_snf_example():
    r = lfrm.snf(Q3, [[0, "ord=1,unit=1"], ["ord=-1,unit=1", 0]])
    assert r["sing"] == [1, -1]


def test_oplus_worked_example():
    a = {"head": [6, 2, 2], "tail": {"const": -3}}
    b = {"head": [4, 3, 0, -1], "tail": "neginf"}
    assert lfrm.oplus(a, b) == {"head": [6, 4, 3, 2, 2, 0, -1], "tail": {"const": -3}}


def test_charfun_and_sampling():
    delta = {"head": [1], "tail": "neginf"}
    v = lfrm.charfun(delta, lfrm.Element(Q3, 1))
    assert v.to_json() == {"unit": "+1", "half_exp": 2}
    m = lfrm.sample(Q3, "mu", 3, seed=4, param=delta)
    assert m["rows"] == 3 and len(m["entries"]) == 9
    assert lfrm.sample(Q3, "mu", 3, seed=4, param=delta) == m


def test_exact_sym_rank_one():
    val = lfrm.exact_orbital_integral(Q3, "sym", ["ord=-1,unit=1"], [1], 1, 1)
    assert abs(val - cmath.exp(2j * math.pi / 3)) < 1e-12


def test_orbital_report_shape():
    rep = lfrm.orbital_integral(Q3, "sym", ["ord=-1,unit=1", 1], [1], 2, samples=2000, seed=3)
    for key in ("kind", "n", "r", "estimate", "stderr", "closed_form", "paper_bound", "pass", "seed"):
        assert key in rep
    assert rep["kind"] == "sym"
    assert lfrm.error_bound("nonsym", 4, 1, 3)["stated"] == "2/6561"


def test_errors_carry_module():
    with pytest.raises(lfrm.LfrmError, match="json"):
        lfrm.Element(Q3, "ord=1,unit=3")


def test_criterion_nine():
    r = lfrm.run_criterion(9)
    assert r["pass"] is True
