"""Random inputs shared by the test modules."""
import itertools
import random

from hypothesis import strategies as st

from nqlag import GradedPoly, LinftyStructure, exp_flow, make_chart, shift_cotangent
from nqlag.calculus import Derivation
from nqlag.symplectic import momentum_name


def monomials(chart, max_factors=3):
    """Normal-ordered exponent tuples with at most ``max_factors`` factors, grouped by degree."""
    out = {}
    ranges = [range(0, 2) if c.odd else range(0, max_factors + 1) for c in chart.coords]
    for exps in itertools.product(*ranges):
        if sum(exps) > max_factors:
            continue
        d = sum(e * c.degree for e, c in zip(exps, chart.coords))
        out.setdefault(d, []).append(exps)
    return out


def polys(chart, degree=None, max_terms=4, max_factors=3):
    """Hypothesis strategy: homogeneous polynomials (of ``degree`` if given)."""
    table = monomials(chart, max_factors)
    degs = st.just(degree) if degree is not None else st.sampled_from(sorted(table))

    def build(d):
        monos = table.get(d, [])
        if not monos:
            return st.just(chart.zero())
        term = st.tuples(st.sampled_from(monos), st.integers(-3, 3).filter(bool))
        return st.lists(term, max_size=max_terms).map(
            lambda ts: sum((GradedPoly(chart, {e: c}) for e, c in ts), chart.zero()))

    return degs.flatmap(build)


def rand_hom(rng, chart, deg, nterms=3, max_factors=3):
    """Random homogeneous polynomial of degree ``deg`` (possibly zero)."""
    monos = monomials(chart, max_factors).get(deg, [])
    out = chart.zero()
    for _ in range(nterms):
        if monos:
            out = out + GradedPoly(chart, {rng.choice(monos): rng.choice([-2, -1, 1, 2, 3])})
    return out


def rand_poly(rng, chart, degs, nterms=3):
    return rand_hom(rng, chart, rng.choice(list(degs)), nterms)


def rand_vector_field(rng, base, degree):
    return Derivation(base, degree, {c.name: rand_hom(rng, base, c.degree + degree, 2)
                                     for c in base.coords if c.degree + degree >= 0})


def momenta(cot, *names):
    m = cot.one()
    for c in names:
        m = m * cot[momentum_name(c)]
    return m


MIXED_BASE = [("x", 0), ("a", 1), ("b", 1), ("y", 2)]


def flowed_structure(seed, n, flows=2):
    """A curved structure with brackets up to arity >= 2: constant-coefficient
    multivectors moved by Hamiltonian flows of random base functions."""
    rng = random.Random(seed)
    base = make_chart(MIXED_BASE)
    cot = shift_cotangent(base, n)
    if n == 2:
        theta = momenta(cot, "x", "a") + momenta(cot, "x", "b", "y", "y")
    else:
        theta = momenta(cot, "a", "b") + momenta(cot, "x", "y") + momenta(cot, "a", "a")
    for _ in range(flows):
        theta = exp_flow(rand_hom(rng, base, n), theta)
    return LinftyStructure(cot, theta)
