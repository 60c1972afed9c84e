import random
from fractions import Fraction

import pytest

from nqlag import (ArityCapError, ExtElement, FormalElement, GradedError, LinftyStructure, MasterEquationError,
                   SeriesError, canonical_bracket, canonical_valgebra, decalage_sign, exp_flow, lift, load_corpus,
                   make_chart, shift_cotangent, voronov_bracket, zero_section_pullback)
from nqlag.graded import homogeneous_degree

from helpers import flowed_structure, rand_hom, rand_poly


@pytest.fixture(scope="module")
def plane():
    cot = shift_cotangent(make_chart([("x", 0), ("y", 0)]), 1)
    return LinftyStructure(cot, cot["p(x)"] * cot["p(y)"])


@pytest.fixture(scope="module")
def curved2():
    return flowed_structure(2, 2)


@pytest.fixture(scope="module")
def curved3():
    return flowed_structure(2, 3)


def so3():
    sc = load_corpus("so3-courant")
    return LinftyStructure(sc.cot, sc.theta)


# -- plane oracles ---------------------------------------------------------

def test_plane_binary_bracket_is_frozen(plane):
    x, y = plane.base.gens()
    assert plane.bracket(x, y) == 1
    assert plane.bracket(y, x) == -1
    assert plane.bracket(x ** 2, y) == 2 * x


def test_plane_bracket_vanishes_on_functions_of_x(plane):
    x, _ = plane.base.gens()
    assert plane.bracket(x ** 2, x ** 3 + x) == 0


def test_zero_arity_is_curvature(plane, curved2):
    assert plane.bracket() == 0
    assert plane.strict
    assert not curved2.strict
    assert curved2.bracket() == zero_section_pullback(curved2.theta)


def test_master_equation_is_enforced():
    sc = load_corpus("so3-courant-broken")
    with pytest.raises(MasterEquationError) as info:
        LinftyStructure(sc.cot, sc.theta)
    u, v, w = sc.cot["u"], sc.cot["v"], sc.cot["w"]
    assert info.value.defect == u * v * w * sc.cot["p(v)"]
    S = LinftyStructure(sc.cot, sc.theta, check=False)
    assert not S.master_ok


def test_theta_degree_is_checked():
    cot = shift_cotangent(make_chart([("x", 0)]), 1)
    with pytest.raises(GradedError):
        LinftyStructure(cot, cot["p(x)"])


# -- decalage and Voronov ------------------------------------------------------

def test_decalage_sign_examples():
    assert decalage_sign([5]) == 1
    assert decalage_sign([0, 3]) == -1  # |x_1| - 1 odd
    assert decalage_sign([1, 0]) == 1
    assert decalage_sign([]) == 1


def test_voronov_curvature_and_abelian_delta(curved2):
    V = canonical_valgebra(curved2.cot)
    assert voronov_bracket(V, curved2.theta, []) == curved2.curvature
    cot = curved2.cot
    delta = lift(rand_hom(random.Random(0), cot.base, 3), cot)
    base = cot.base
    assert voronov_bracket(V, delta, [base["x"]]) == 0
    with pytest.raises(GradedError):
        voronov_bracket(V, delta, [cot["p(x)"]])


def test_voronov_rejects_defective_delta():
    sc = load_corpus("so3-courant-broken")
    with pytest.raises(MasterEquationError):
        voronov_bracket(canonical_valgebra(sc.cot), sc.theta, [])


@pytest.mark.parametrize("which", ["curved2", "curved3"])
def test_bracket_evaluators_agree(which, request):
    S = request.getfixturevalue(which)
    rng = random.Random(3)
    for _ in range(40):
        k = rng.randint(0, 4)
        fs = [rand_poly(rng, S.base, range(0, 5)) for _ in range(k)]
        l = S.bracket(*fs)
        assert S.jet_bracket(*fs) == l
        assert S.schouten_bracket_form(*fs) == l
        if all(fs):
            d = decalage_sign([S.linfty_degree(f) for f in fs])
            Q = S.voronov(*fs)
            assert Q.scale(d) == l
            assert l.scale(d) == Q  # round trip


def test_l1_is_homological_field_on_base(curved3):
    Q = curved3.homological_field()
    for g in curved3.base.gens():
        assert curved3.bracket(g) == zero_section_pullback(Q(lift(g, curved3.cot)))


@pytest.mark.parametrize("which", ["curved2", "curved3"])
def test_brackets_are_derivations_in_each_slot(which, request):
    S = request.getfixturevalue(which)
    n = S.n
    rng = random.Random(4)
    for _ in range(20):
        k = rng.randint(1, 3)
        fs = [rand_poly(rng, S.base, range(0, 4)) for _ in range(k)]
        if not all(fs):
            continue
        slot = rng.randrange(k)
        g, h = rand_poly(rng, S.base, range(0, 3)), rand_poly(rng, S.base, range(0, 3))
        if not (g and h):
            continue
        args = lambda v: fs[:slot] + [v] + fs[slot + 1:]
        # nested bracket: {A, g h} = {A, g} h + (-1)^{(|A|-n)|g|} g {A, h}, with |A| the degree
        # after the earlier arguments; h then passes the later arguments, and the prefactor
        # changes by (k - slot - 1) times the degree of the factor removed from the slot
        after = k - slot - 1
        a_deg = 1 + sum(homogeneous_degree(f) - n for f in fs[:slot])
        rest = sum(homogeneous_degree(f) - n for f in fs[slot + 1:])
        dg, dh = homogeneous_degree(g), homogeneous_degree(h)
        lhs = S.bracket(*args(g * h))
        t1 = (S.bracket(*args(g)) * h).scale((-1) ** (dh * (rest + after)))
        t2 = (g * S.bracket(*args(h))).scale((-1) ** (dg * (a_deg + after)))
        assert lhs == t1 + t2


# -- relations ------------------------------------------------------------------

@pytest.mark.parametrize("which", ["curved2", "curved3"])
def test_relations_hold_up_to_arity_four(which, request):
    S = request.getfixturevalue(which)
    rng = random.Random(5)
    for m in range(1, 5):
        for _ in range(4):
            xs = [rand_poly(rng, S.base, range(0, 5), 2) for _ in range(m)]
            assert S.identity_residual(xs) == 0


def test_relations_fail_without_master_equation():
    sc = load_corpus("so3-courant-broken")
    S = LinftyStructure(sc.cot, sc.theta, check=False)
    assert any(S.identity_residual([g]) for g in sc.base.gens())


def test_arity_cap(curved2):
    x = curved2.base["x"]
    with pytest.raises(ArityCapError):
        curved2.identity_residual([x] * 5)
    assert curved2.identity_residual([x] * 5, arity_cap=5) == 0


def test_raw_prefactor_breaks_arity_three(curved2):
    """Without the (-1)^{k(k-1)/2} normalization the displayed relation fails."""
    from nqlag.linfty import _koszul_chi, _shuffles

    rng = random.Random(6)
    found = False
    for _ in range(30):
        xs = [rand_poly(rng, curved2.base, range(0, 5), 2) for _ in range(3)]
        if not all(xs):
            continue
        degs = [curved2.linfty_degree(x) for x in xs]
        out = curved2.base.zero()
        for k in range(0, 4):
            for order in _shuffles(3, k):
                chi = _koszul_chi(degs, order) * (-1) ** (k * (3 - k))
                inner = curved2.bracket(*[xs[i] for i in order[:k]])
                out = out + curved2.bracket(inner, *[xs[i] for i in order[k:]]).scale(chi)
        if out:
            found = True
            break
    assert found


# -- Maurer-Cartan -------------------------------------------------------------

def test_mc_residual_oracles():
    S = so3()
    assert S.mc_residual(S.base.zero()) == 0
    sc = load_corpus("weil-casimir")
    W = LinftyStructure(sc.cot, sc.theta)
    D = sc.element("D").value
    h1, h2, h3 = (sc.base[f"h{i}"] for i in (1, 2, 3))
    assert W.mc_residual(D) == h1 ** 2 + h2 ** 2 + h3 ** 2
    assert W.kuranishi(D) == 2 * (h1 ** 2 + h2 ** 2 + h3 ** 2)


def test_mc_residual_is_half_binary_bracket_for_quadratic_theta():
    cot = shift_cotangent(make_chart([("x", 0), ("a", 1), ("b", 1)]), 1)
    S = LinftyStructure(cot, cot["a"] * cot["p(x)"] * cot["p(b)"])
    rng = random.Random(7)
    for _ in range(10):
        f = rand_hom(rng, cot.base, 1)
        assert S.mc_residual(f) == S.bracket(f, f).scale(Fraction(1, 2))


@pytest.mark.parametrize("which", ["curved2", "curved3"])
def test_flow_identity(which, request):
    S = request.getfixturevalue(which)
    rng = random.Random(8)
    for _ in range(15):
        f = rand_hom(rng, S.base, S.n)
        assert S.mc_residual(f) == zero_section_pullback(exp_flow(f, S.theta))


def test_mc_rejects_wrong_degree(curved2):
    with pytest.raises(GradedError):
        curved2.mc_residual(curved2.base["x"])


def test_exp_flow_oracles():
    cot = shift_cotangent(make_chart([("x", 0)]), 1)
    x, px = cot.base["x"], cot["p(x)"]
    g = lift(x ** 2, cot)
    assert exp_flow(x ** 3, g) == g
    f = x ** 2 + 3 * x  # degree 0, not a valid MC element but fine for the flow
    assert exp_flow(f, px) == px - canonical_bracket(lift(f, cot), px)
    assert exp_flow(f, px) == px + 2 * lift(x, cot) + 3
    with pytest.raises(SeriesError):
        exp_flow(px, px * px)


def test_gauge_oracles(curved3):
    rng = random.Random(9)
    lam = rand_hom(rng, curved3.base, curved3.n - 1)
    zero = curved3.base.zero()
    assert curved3.gauge_rhs(zero, lam) == curved3.bracket(lam)
    f = rand_hom(rng, curved3.base, curved3.n)
    assert curved3.gauge_rhs(f, zero) == 0


def test_gauge_matches_flow_on_strict_structure():
    sc = load_corpus("twisted-courant")
    S = LinftyStructure(sc.cot, sc.theta)
    rng = random.Random(10)
    for _ in range(15):
        f, lam = rand_hom(rng, S.base, 3), rand_hom(rng, S.base, 2)
        assert S.gauge_rhs(f, lam) == S.gauge_flow_rhs(f, lam)


def test_kuranishi_requires_closed_element():
    sc = load_corpus("twisted-courant")
    S = LinftyStructure(sc.cot, sc.theta)
    b = sc.base
    with pytest.raises(GradedError):
        S.kuranishi(b["x1"] * b["y1"] * b["y2"])
    assert S.kuranishi(sc.element("H").value) == 0
    assert S.kuranishi(sc.element("HK").value) != 0


def test_formal_residual_oracles():
    sc = load_corpus("twisted-courant")
    S = LinftyStructure(sc.cot, sc.theta)
    b = sc.base
    f = b["x1"] * b["y1"] * b["y2"]
    res = S.formal_residual(FormalElement.linear_lift(f, 3))
    assert res[0] == S.bracket(f)
    assert S.formal_residual(FormalElement.linear_lift(f, 0)) == []
    H = sc.element("H").value
    assert all(r == 0 for r in S.formal_residual(FormalElement.linear_lift(H, 5)))


def test_formal_residual_matches_exact_series(curved3):
    """For F = t f the order-k residual is l^k(f..f)/k! (order >= 1)."""
    rng = random.Random(11)
    f = rand_hom(rng, curved3.base, 3)
    res = curved3.formal_residual(FormalElement.linear_lift(f, 4))
    terms = curved3.mc_terms(f)
    for k, r in enumerate(res, start=1):
        assert r == terms.get(k, curved3.base.zero())


def test_formal_residual_of_nonlinear_curve():
    sc = load_corpus("twisted-courant")
    S = LinftyStructure(sc.cot, sc.theta)
    H = sc.element("H").value
    F = FormalElement.from_curve([H, H.scale(2), H.chart.zero(), H])
    assert all(r == 0 for r in S.formal_residual(F))


# -- extended structure ------------------------------------------------------------

@pytest.fixture(scope="module")
def twisted():
    sc = load_corpus("twisted-courant")
    return sc, LinftyStructure(sc.cot, sc.theta)


def test_extended_binary_on_ambient(twisted):
    sc, S = twisted
    rng = random.Random(12)
    X = rand_hom(rng, sc.cot, 4)
    Y = rand_hom(rng, sc.cot, 4)
    out = S.extended_bracket(ExtElement(S.base.zero(), X), ExtElement(S.base.zero(), Y))
    assert out.base == 0
    assert out.ambient == -canonical_bracket(X, Y)


def test_extended_restricts_to_base_brackets(twisted):
    sc, S = twisted
    rng = random.Random(13)
    for _ in range(20):
        k = rng.randint(1, 4)
        gs = [rand_poly(rng, S.base, range(0, 5)) for _ in range(k)]
        out = S.extended_bracket(*[ExtElement(g, sc.cot.zero()) for g in gs])
        assert out.base == S.bracket(*gs)
        assert out.ambient == 0


def test_extended_unary(twisted):
    sc, S = twisted
    g = sc.element("H").value
    F = sc.element("tt").value
    out = S.extended_bracket(ExtElement(g, F))
    assert out.base == S.bracket(g) + zero_section_pullback(F)
    assert out.ambient == -canonical_bracket(S.theta, F)


def test_extended_mc_reductions(twisted):
    sc, S = twisted
    f = sc.element("g").value
    tt = sc.element("tt").value
    first, second = S.mc_extended_residual(f, sc.cot.zero())
    assert first == 0 and second == S.mc_residual(f)
    first, second = S.mc_extended_residual(S.base.zero(), tt)
    assert first == canonical_bracket(S.theta, tt) + canonical_bracket(tt, tt).scale(Fraction(1, 2))
    assert second == zero_section_pullback(tt)
    assert S.mc_extended_residual(f, tt) == (0, 0)


def test_extended_split_matches_direct_sum(twisted):
    sc, S = twisted
    rng = random.Random(14)
    for _ in range(8):
        f = rand_hom(rng, S.base, 3)
        tt = rand_hom(rng, sc.cot, 4)
        first, second = S.mc_extended_residual(f, tt)
        direct = S.extended_mc_sum(f, tt)
        assert direct.ambient == -first
        assert direct.base == second


def test_extended_refuses_curved(curved2):
    with pytest.raises(GradedError):
        curved2.extended_bracket(ExtElement(curved2.base["x"], curved2.cot.zero()))
