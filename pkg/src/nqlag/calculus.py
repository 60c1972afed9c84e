"""Graded derivations, their commutators, and d on functions and 1-forms."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Optional

from .graded import (Chart, GradedError, GradedPoly, INHOMOGENEOUS, degree_of,
                     homogeneous_degree)


def _parity_before(chart: Chart, exps, i: int) -> int:
    return sum(e * d for e, d in zip(exps[:i], chart.degrees[:i])) % 2


def _parity_after(chart: Chart, exps, i: int) -> int:
    return sum(e * d for e, d in zip(exps[i + 1:], chart.degrees[i + 1:])) % 2


def partial_derivative(f: GradedPoly, c) -> GradedPoly:
    """Left derivative ``d f / d c``.

    The operator has degree ``-|c|`` and is moved in from the left, so removing
    a factor of ``c`` picks up ``(-1)^{|c| * (degree of the preceding factors)}``.
    """
    chart = f.chart
    i = chart.index(c if isinstance(c, str) else c.name)
    odd = chart.degrees[i] % 2
    out: Dict[tuple, Fraction] = {}
    for exps, coeff in f.terms.items():
        e = exps[i]
        if not e:
            continue
        sign = -1 if odd and _parity_before(chart, exps, i) else 1
        new = exps[:i] + (e - 1,) + exps[i + 1:]
        out[new] = out.get(new, 0) + sign * e * coeff
    return GradedPoly(chart, out)


def right_derivative(f: GradedPoly, c) -> GradedPoly:
    """Right derivative: remove ``c`` after moving it to the right end."""
    chart = f.chart
    i = chart.index(c if isinstance(c, str) else c.name)
    odd = chart.degrees[i] % 2
    out: Dict[tuple, Fraction] = {}
    for exps, coeff in f.terms.items():
        e = exps[i]
        if not e:
            continue
        sign = -1 if odd and _parity_after(chart, exps, i) else 1
        new = exps[:i] + (e - 1,) + exps[i + 1:]
        out[new] = out.get(new, 0) + sign * e * coeff
    return GradedPoly(chart, out)


class Derivation:
    """A degree-``k`` vector field, stored by its values on the coordinates."""

    __slots__ = ("chart", "degree", "images")

    def __init__(self, chart: Chart, degree: int, images: Optional[Mapping[str, GradedPoly]] = None):
        self.chart = chart
        self.degree = degree
        clean = {}
        for name, val in (images or {}).items():
            c = chart.coordinate(name)
            if isinstance(val, (int, Fraction)):
                val = GradedPoly.constant(chart, val)
            if val.chart != chart:
                raise GradedError("derivation image on a different chart")
            if not val:
                continue
            d = degree_of(val)
            if d is INHOMOGENEOUS or d != c.degree + degree:
                raise GradedError(
                    f"image of {c.name} must have degree {c.degree + degree}, got {val}")
            clean[c.name] = val
        self.images: Dict[str, GradedPoly] = clean

    def __call__(self, f: GradedPoly) -> GradedPoly:
        return apply_derivation(self, f)

    def image(self, name: str) -> GradedPoly:
        return self.images.get(name, self.chart.zero())

    def is_zero(self) -> bool:
        return not self.images

    def __add__(self, other: "Derivation") -> "Derivation":
        _same(self, other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise GradedError("cannot add derivations of different degree")
        names = set(self.images) | set(other.images)
        return Derivation(self.chart, self.degree, {n: self.image(n) + other.image(n) for n in names})

    def __neg__(self):
        return Derivation(self.chart, self.degree, {n: -v for n, v in self.images.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Derivation":
        return Derivation(self.chart, self.degree, {n: v.scale(c) for n, v in self.images.items()})

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        if self.chart != other.chart:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.images == other.images

    def __repr__(self):
        body = ", ".join(f"{n}: {v}" for n, v in sorted(self.images.items(),
                                                          key=lambda kv: self.chart.index(kv[0])))
        return f"Derivation(degree={self.degree}, {{{body}}})"


def _same(X, Y):
    if X.chart != Y.chart:
        raise GradedError("chart mismatch")


def coordinate_field(chart: Chart, name: str) -> Derivation:
    """The coordinate vector field ``d/d name``."""
    c = chart.coordinate(name)
    return Derivation(chart, -c.degree, {name: chart.one()})


def apply_derivation(X: Derivation, f: GradedPoly) -> GradedPoly:
    """``X(f) = sum_c X(c) * (d f / d c)`` with left derivatives."""
    if X.chart != f.chart:
        raise GradedError("chart mismatch")
    out = f.chart.zero()
    for name, img in X.images.items():
        df = partial_derivative(f, name)
        if df:
            out = out + img * df
    return out


def lie_bracket(X: Derivation, Y: Derivation) -> Derivation:
    """Graded commutator ``XY - (-1)^{|X||Y|} YX``."""
    _same(X, Y)
    sign = -1 if (X.degree * Y.degree) % 2 else 1
    images = {}
    for c in X.chart.coords:
        v = X(Y.image(c.name)) - Y(X.image(c.name)).scale(sign)
        images[c.name] = v
    return Derivation(X.chart, X.degree + Y.degree, images)


def is_homological(Q: Derivation) -> bool:
    if Q.degree != 1:
        raise GradedError(f"a homological vector field has degree 1, got {Q.degree}")
    return lie_bracket(Q, Q).is_zero()


def euler_field(chart: Chart) -> Derivation:
    return Derivation(chart, 0, {c.name: GradedPoly.generator(chart, c.name).scale(c.degree)
                                 for c in chart.coords if c.degree})


class OneForm:
    """``alpha = sum_c dc * alpha_c``, coefficients written on the right.

    ``degree`` is the total degree ``|c| + |alpha_c|`` shared by all
    components; ``None`` for the zero form.
    """

    __slots__ = ("chart", "components", "degree")

    def __init__(self, chart: Chart, components: Optional[Mapping[str, GradedPoly]] = None,
                 degree: Optional[int] = None):
        self.chart = chart
        clean = {}
        degs = set()
        for name, val in (components or {}).items():
            c = chart.coordinate(name)
            if isinstance(val, (int, Fraction)):
                val = GradedPoly.constant(chart, val)
            if not val:
                continue
            degs.add(c.degree + homogeneous_degree(val))
            clean[c.name] = val
        if len(degs) > 1:
            raise GradedError(f"inhomogeneous 1-form (degrees {sorted(degs)})")
        if degs:
            found = degs.pop()
            if degree is not None and degree != found:
                raise GradedError(f"1-form has degree {found}, expected {degree}")
            degree = found
        self.components: Dict[str, GradedPoly] = clean
        self.degree = degree

    def component(self, name: str) -> GradedPoly:
        return self.components.get(name, self.chart.zero())

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __add__(self, other: "OneForm") -> "OneForm":
        names = set(self.components) | set(other.components)
        return OneForm(self.chart, {n: self.component(n) + other.component(n) for n in names})

    def __repr__(self):
        return f"OneForm({render_one_form(self)})"

    def left_components(self) -> Dict[str, GradedPoly]:
        """Coefficients for the presentation ``sum_c a_c * dc`` (left module).

        Moving ``alpha_c`` past ``dc`` costs ``(-1)^{|c| |alpha_c|}``.
        """
        out = {}
        for name, v in self.components.items():
            dc = self.chart.coordinate(name).degree
            out[name] = v.scale(-1) if (dc * homogeneous_degree(v)) % 2 else v
        return out


def render_one_form(alpha: OneForm, left: bool = False) -> str:
    """Render as ``d(x)*(...) + ...``; ``left=True`` uses ``(...)*d(x)``."""
    if alpha.is_zero():
        return "0"
    comps = alpha.left_components() if left else alpha.components
    parts = []
    for c in alpha.chart.coords:
        if c.name in comps:
            if left:
                parts.append(f"({comps[c.name]})*d({c.name})")
            else:
                parts.append(f"d({c.name})*({comps[c.name]})")
    return " + ".join(parts)


def exterior_derivative(f: GradedPoly) -> OneForm:
    """``df = sum_c dc * (d f / d c)``."""
    chart = f.chart
    comps = {}
    for c in chart.coords:
        df = partial_derivative(f, c.name)
        if df:
            comps[c.name] = df
    if not comps:
        return OneForm(chart)
    return OneForm(chart, comps)


def contract(X: Derivation, alpha: OneForm) -> GradedPoly:
    """``iota_X alpha = sum_c X(c) * alpha_c``, so that ``iota_X df = X(f)``."""
    out = alpha.chart.zero()
    for name, v in alpha.components.items():
        img = X.image(name)
        if img:
            out = out + img * v
    return out


def one_form_curl(alpha: OneForm) -> Dict[tuple, GradedPoly]:
    """Nonzero entries of the graded curl ``d alpha_c / d c' - (-1)^{|c||c'|} d alpha_{c'} / d c``.

    The diagonal only matters for odd ``c``, where it reads ``2 d alpha_c / d c``.
    """
    chart = alpha.chart
    out = {}
    for i, c in enumerate(chart.coords):
        for c2 in chart.coords[i:]:
            sign = -1 if (c.degree * c2.degree) % 2 else 1
            curl = (partial_derivative(alpha.component(c.name), c2.name)
                    - partial_derivative(alpha.component(c2.name), c.name).scale(sign))
            if curl:
                out[(c.name, c2.name)] = curl
    return out


def one_form_closed(alpha: OneForm) -> bool:
    return not one_form_curl(alpha)
