import pytest
from hypothesis import given

from nqlag import ScenarioError, corpus_names, load_corpus, parse_scenario, render_scenario
from nqlag.checks import run_checks
from nqlag.report import emit_json, emit_text, sign_fingerprint
from nqlag.scenario import corpus_text, parse_expression, parse_one_form
from nqlag.render import render_poly

from helpers import polys

HEADER = "shift 2\ncoord u : 1\ncoord v : 1\ncoord w : 1\n"


def test_corpus_is_bundled():
    assert set(corpus_names()) >= {"poisson-plane", "so3-courant", "so3-courant-broken", "weil-casimir",
                                   "twisted-courant", "cotangent-graph"}


def test_so3_scenario_shape():
    sc = load_corpus("so3-courant")
    assert sc.n == 2
    assert [c.degree for c in sc.base.coords] == [1, 1, 1]
    assert sc.theta.degrees() == {3}
    assert max(sum(e) for e in sc.theta.terms) == 3


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_round_trip(name):
    sc = load_corpus(name)
    again = parse_scenario(render_scenario(sc), name)
    assert again == sc
    assert render_scenario(again) == render_scenario(sc)


def test_empty_check_list_is_valid():
    sc = parse_scenario(HEADER + "theta = 0\n")
    assert sc.checks == ()
    assert run_checks(sc).passed


def test_theta_of_wrong_degree():
    with pytest.raises(ScenarioError) as info:
        parse_scenario(HEADER + "theta = u*v\n")
    assert info.value.line == 5
    assert "degree 2, expected 3" in str(info.value)


def test_unknown_coordinate_position():
    with pytest.raises(ScenarioError) as info:
        parse_scenario(HEADER + "theta = u*v*p(q)\n")
    assert (info.value.line, info.value.column) == (5, 15)
    with pytest.raises(ScenarioError) as info:
        parse_scenario(HEADER + "theta = 0\nelement f : f = u*zz\n")
    assert (info.value.line, info.value.column) == (6, 19)


def test_syntax_errors():
    bad = [
        "theta = u*v*(p(w)\n",
        "theta = u*v*p(w) +\n",
        "theta = u $ v\n",
        "theta = 0\nelement f : bogus = u*v\n",
        "theta = 0\ncheck nonsense\n",
        "theta = 0\ncheck mc f\n",
        "theta = 0\nelement f : f = u*v\ncheck brackets x\n",
        "theta = 0\nelement l : gauge = u\ncheck mc l\n",
        "theta = 0\nelement f : f = u*p(v)\n",
        "theta = 0\nelement f : f = u*v/u\n",
        "frobnicate\n",
    ]
    for tail in bad:
        with pytest.raises(ScenarioError):
            parse_scenario(HEADER + tail)
    with pytest.raises(ScenarioError):
        parse_scenario("coord u : 1\ntheta = 0\n")
    with pytest.raises(ScenarioError):
        parse_scenario("shift 1\ncoord y : 2\ntheta = 0\n")


def test_expression_features():
    sc = parse_scenario(HEADER + "theta = -(1/2)*v*u*p(w)*2 + 3/3*u*v*p(w)\n")
    assert sc.theta == 2 * sc.cot["u"] * sc.cot["v"] * sc.cot["p(w)"]
    sc = parse_scenario("shift 1\ncoord x : 0\ntheta = 0\nelement g : gauge = (x + 1)^3 - x^3\n")
    x = sc.base["x"]
    assert sc.element("g").value == 3 * x ** 2 + 3 * x + 1


def test_inhomogeneous_element():
    with pytest.raises(ScenarioError):
        parse_scenario("shift 1\ncoord x : 0\ncoord a : 1\ntheta = 0\nelement f : f = a + x*a + 1\n")


def test_one_form_parsing():
    sc = load_corpus("cotangent-graph")
    alpha = sc.element("closed").value
    x, y = sc.base.gens()
    assert alpha.component("x") == 2 * x * y
    assert alpha.component("y") == x ** 2
    with pytest.raises(ScenarioError):
        parse_one_form("d(x)*d(y)", sc.base)
    with pytest.raises(ScenarioError):
        parse_one_form("x*y", sc.base)


@given(polys(load_corpus("twisted-courant").cot, max_terms=5))
def test_polynomial_round_trip(f):
    assert parse_expression(render_poly(f), f.chart) == f


@given(polys(load_corpus("weil-casimir").base, max_terms=5))
def test_polynomial_round_trip_even_and_odd(f):
    assert parse_expression(render_poly(f), f.chart) == f


def test_report_is_deterministic():
    sc = load_corpus("twisted-courant")
    a, b = run_checks(sc), run_checks(sc)
    assert emit_json(a) == emit_json(b)
    assert emit_text(a) == emit_text(b)
    assert a.passed


def test_casimir_report_displays_obstruction():
    rep = run_checks(load_corpus("weil-casimir"))
    kur = next(r for r in rep.results if r.label == "kuranishi D")
    assert not kur.passed
    assert kur.values["obstruction"] == "2*h1^2 + 2*h2^2 + 2*h3^2"
    assert "2*h1^2 + 2*h2^2 + 2*h3^2" in emit_text(rep)


def test_failed_master_report_carries_defect():
    rep = run_checks(load_corpus("so3-courant-broken"))
    assert rep.results[0].values["defect"] == "u*v*w*p(v)"
    assert not rep.passed


def test_sign_fingerprint_is_frozen():
    fp = sign_fingerprint()
    assert fp["n=2 |q|=1 {p(q),q}"] == "-1"
    assert fp["n=1 |q|=0 {q,p(q)}"] == "-1"
    assert fp["n=2 |q|=1 J(d/dq)"] == "-p(q)"
    assert fp["theta=p(x)*p(y), n=1: l^2(x,y)"] == "1"


def test_corpus_text_unknown():
    with pytest.raises(ScenarioError):
        corpus_text("no-such-scenario")
