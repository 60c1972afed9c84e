"""Canonical text rendering of polynomials.

The output is accepted back by the scenario expression parser, so
``parse(render(f)) == f``.
"""
from fractions import Fraction

from .graded import GradedPoly, monomial_degree


def render_rational(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def render_monomial(chart, exps) -> str:
    parts = []
    for c, e in zip(chart.coords, exps):
        if e == 1:
            parts.append(c.name)
        elif e > 1:
            parts.append(f"{c.name}^{e}")
    return "*".join(parts)


def term_order(chart, exps):
    """Sort key: total degree, then polynomial degree, then chart-order lex (descending)."""
    return (-monomial_degree(chart, exps), -sum(exps), tuple(-e for e in exps))


def render_poly(f: GradedPoly) -> str:
    if not f.terms:
        return "0"
    chart = f.chart
    out = []
    for exps in sorted(f.terms, key=lambda k: term_order(chart, k)):
        c = f.terms[exps]
        mono = render_monomial(chart, exps)
        neg = c < 0
        mag = -c if neg else c
        if not mono:
            body = render_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{render_rational(mag)}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
