"""Shifted cotangent charts ``T*[n]L`` and their canonical Poisson bracket.

On canonical coordinates ``(q, p_q)`` with ``|q| = i`` and ``|p_q| = n - i``::

    {q, p_q} = -1,   {p_q, q} = (-1)^{i(n-i)},   {q, q'} = {p, p'} = 0

The bracket of arbitrary polynomials is the constant-coefficient
bidifferential operator ``{f, g} = sum_{a,b} (f <-d_a) {x_a, x_b} (d_b-> g)``,
with a right derivative in the first slot and a left derivative in the second.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple, Union

from .calculus import (Derivation, OneForm, contract, coordinate_field, one_form_closed,
                       partial_derivative, right_derivative)
from .graded import (Chart, Coordinate, GradedError, GradedPoly, INHOMOGENEOUS, degree_of,
                     homogeneous_degree)


def momentum_name(base_name: str) -> str:
    return f"p({base_name})"


@dataclass(frozen=True)
class CotangentChart(Chart):
    """A chart of ``T*[n]L``: base coordinates first, then one momentum per base coordinate."""

    base: Optional[Chart] = field(default=None)

    @property
    def n(self) -> int:
        return self.shift

    @property
    def nbase(self) -> int:
        return len(self.base)

    def base_names(self) -> Tuple[str, ...]:
        return self.base.names

    def momentum(self, base_name: str) -> str:
        return momentum_name(base_name)

    def is_momentum(self, name: str) -> bool:
        return self.index(name) >= self.nbase

    def pairs(self) -> Iterable[Tuple[Coordinate, Coordinate]]:
        for b, m in self.pairing:
            yield self.coords[b], self.coords[m]

    def sign(self, base_name: str) -> int:
        """``(-1)^{i(n-i)}`` for the base coordinate of degree ``i``."""
        i = self.base.coordinate(base_name).degree
        return -1 if (i * (self.n - i)) % 2 else 1


def shift_cotangent(base: Chart, n: int) -> CotangentChart:
    """``T*[n]`` of a base chart: adds ``p(q)`` of degree ``n - |q|`` for each ``q``."""
    if isinstance(base, CotangentChart):
        raise GradedError("iterated cotangent charts are not supported")
    if base.coords and n < max(base.degrees):
        raise GradedError(f"shift {n} is smaller than the top base degree {max(base.degrees)}")
    if n < 0:
        raise GradedError("negative shift")
    coords = list(base.coords)
    k = len(coords)
    for c in base.coords:
        name = momentum_name(c.name)
        if name in base:
            raise GradedError(f"momentum name {name!r} clashes with a base coordinate")
        coords.append(Coordinate(name, n - c.degree, len(coords)))
    pairing = tuple((i, i + k) for i in range(k))
    return CotangentChart(tuple(coords), shift=n, pairing=pairing, base=base)


def _require_cotangent(chart) -> CotangentChart:
    if not isinstance(chart, CotangentChart):
        raise GradedError("operation needs a shifted cotangent chart")
    return chart


def lift(f: GradedPoly, cot: CotangentChart) -> GradedPoly:
    """``pi^*``: a base polynomial viewed on the cotangent chart."""
    if f.chart == cot:
        return f
    if f.chart != cot.base:
        raise GradedError("polynomial is not on the base chart")
    pad = (0,) * cot.nbase
    return GradedPoly(cot, {exps + pad: c for exps, c in f.terms.items()})


def zero_section_pullback(F: GradedPoly) -> GradedPoly:
    """``0^*``: kill all momenta; the result lives on the base chart."""
    cot = _require_cotangent(F.chart)
    k = cot.nbase
    return GradedPoly(cot.base, {exps[:k]: c for exps, c in F.terms.items() if not any(exps[k:])})


def zero_section_projection(F: GradedPoly) -> GradedPoly:
    """``pi^* 0^*``: kill all momenta, staying on the cotangent chart."""
    cot = _require_cotangent(F.chart)
    k = cot.nbase
    return GradedPoly(cot, {exps: c for exps, c in F.terms.items() if not any(exps[k:])})


def momentum_degree(F: GradedPoly) -> int:
    """Largest total momentum exponent in ``F`` (-1 for zero)."""
    cot = _require_cotangent(F.chart)
    k = cot.nbase
    return max((sum(exps[k:]) for exps in F.terms), default=-1)


def momentum_components(F: GradedPoly) -> Dict[int, GradedPoly]:
    """Split by momentum multidegree; component ``i`` is an ``i``-vector field under ``J``."""
    cot = _require_cotangent(F.chart)
    k = cot.nbase
    return dict(sorted(F.split(lambda exps: sum(exps[k:])).items()))


def _as_cot(f, cot):
    if isinstance(f, Multivector):
        f = f.poly
    return lift(f, cot) if f.chart != cot else f


def canonical_bracket(f: GradedPoly, g: GradedPoly) -> GradedPoly:
    """The degree ``-n`` canonical Poisson bracket ``{f, g}``.

    Inhomogeneous inputs are handled termwise (the formula is bilinear).
    Base-chart polynomials are lifted automatically.
    """
    cot = f.chart if isinstance(f.chart, CotangentChart) else g.chart
    cot = _require_cotangent(cot)
    f = _as_cot(f, cot)
    g = _as_cot(g, cot)
    out = cot.zero()
    if not f or not g:
        return out
    for q, p in cot.pairs():
        # {q, p} = -1
        a = right_derivative(f, q.name)
        if a:
            b = partial_derivative(g, p.name)
            if b:
                out = out - a * b
        # {p, q} = (-1)^{i(n-i)}
        a = right_derivative(f, p.name)
        if a:
            b = partial_derivative(g, q.name)
            if b:
                term = a * b
                out = out + (term if cot.sign(q.name) == 1 else -term)
    return out


def bracket_degree(f: GradedPoly, n: int) -> int:
    """Degree of ``f`` in the shifted Lie algebra ``C[n]``."""
    return homogeneous_degree(f) - n


def hamiltonian_vf(f: GradedPoly) -> Derivation:
    """``X_f = {f, .}`` as a derivation of degree ``|f| - n``."""
    cot = _require_cotangent(f.chart)
    d = degree_of(f)
    if d is INHOMOGENEOUS:
        raise GradedError("Hamiltonian vector field of an inhomogeneous function")
    images = {c.name: canonical_bracket(f, GradedPoly.generator(cot, c.name)) for c in cot.coords}
    return Derivation(cot, d - cot.n, images)


def j_map(X: Derivation, cot: CotangentChart) -> GradedPoly:
    """``J``: vector fields on the base to functions linear in momenta.

    ``J(d/dq) = (-1)^{i(n-i)} p(q)``, extended as a left module map.
    """
    if X.chart != cot.base:
        raise GradedError("J is defined on derivations of the base chart")
    out = cot.zero()
    for name, img in X.images.items():
        out = out + lift(img, cot) * GradedPoly.generator(cot, momentum_name(name)).scale(cot.sign(name))
    return out


def j_multivector(fields: Iterable[Derivation], cot: CotangentChart) -> GradedPoly:
    """``J(X_1 ... X_k) = J(X_1) ... J(X_k)``, the multiplicative extension."""
    out = cot.one()
    for X in fields:
        out = out * j_map(X, cot)
    return out


@dataclass(frozen=True)
class Multivector:
    """A function on ``T*[n]L`` read as a sum of multivector fields on ``L``."""

    poly: GradedPoly

    @property
    def components(self) -> Dict[int, GradedPoly]:
        return momentum_components(self.poly)

    def component(self, k: int) -> GradedPoly:
        return self.components.get(k, self.poly.chart.zero())

    def is_zero(self) -> bool:
        return self.poly.is_zero()


def schouten_bracket(P: Union[Multivector, GradedPoly], R: Union[Multivector, GradedPoly]) -> Multivector:
    """Schouten bracket of multivector fields, transported through ``J``."""
    P = P.poly if isinstance(P, Multivector) else P
    R = R.poly if isinstance(R, Multivector) else R
    return Multivector(canonical_bracket(P, R))


def graph_generators(alpha: OneForm, cot: CotangentChart) -> Dict[str, GradedPoly]:
    """Generators ``J(d/dq) - pi^* iota_{d/dq} alpha`` of the vanishing ideal of ``graph(alpha)``."""
    base = cot.base
    return {q.name: j_map(coordinate_field(base, q.name), cot) - lift(contract(coordinate_field(base, q.name), alpha), cot)
            for q in base.coords}


def graph_pullback(F: GradedPoly, alpha: OneForm, cot: CotangentChart) -> GradedPoly:
    """``alpha^* F``: restrict to ``graph(alpha)`` by ``p(q) -> (-1)^{i(n-i)} alpha_q``."""
    from .graded import substitute

    assignment = {momentum_name(q.name): lift(alpha.component(q.name), cot).scale(cot.sign(q.name))
                  for q in cot.base.coords}
    return zero_section_pullback(substitute(F, assignment))


def _check_form(alpha: OneForm, cot: CotangentChart):
    if alpha.chart != cot.base:
        raise GradedError("1-form must live on the base chart")
    if alpha.degree is not None and alpha.degree != cot.n:
        raise GradedError(f"1-form of degree {alpha.degree} does not define a section of T*[{cot.n}]")


def graph_is_lagrangian(alpha: OneForm, cot: CotangentChart) -> bool:
    """``graph(alpha)`` is Lagrangian iff ``alpha`` is closed."""
    _check_form(alpha, cot)
    return one_form_closed(alpha)


def graph_ideal_closed(alpha: OneForm, cot: CotangentChart) -> bool:
    """Brute-force coisotropy: every bracket of ideal generators vanishes on the graph."""
    _check_form(alpha, cot)
    gens = list(graph_generators(alpha, cot).values())
    for i, g in enumerate(gens):
        for h in gens[i:]:
            if graph_pullback(canonical_bracket(g, h), alpha, cot):
                return False
    return True
