"""Free N-graded commutative polynomial algebras with exact rational coefficients.

A :class:`Chart` fixes an ordered list of coordinates with non-negative
degrees.  A :class:`GradedPoly` is stored as a dict mapping exponent tuples
(one slot per coordinate, in chart order) to nonzero :class:`Fraction`
coefficients.  Every stored monomial is normal ordered, i.e. its factors
appear in chart order; the Koszul sign of reordering is absorbed into the
coefficient when products are formed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


class GradedError(ValueError):
    """Raised on malformed charts, chart mismatches and degree violations."""


class _Inhomogeneous:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INHOMOGENEOUS"


#: Returned by :func:`degree_of` for polynomials mixing several degrees.
INHOMOGENEOUS = _Inhomogeneous()


@dataclass(frozen=True)
class Coordinate:
    name: str
    degree: int
    ordinal: int

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


@dataclass(frozen=True)
class Chart:
    """Ordered coordinates, optionally with a cotangent shift and pairing.

    ``pairing`` holds ``(base_ordinal, momentum_ordinal)`` pairs.
    """

    coords: Tuple[Coordinate, ...]
    shift: Optional[int] = None
    pairing: Tuple[Tuple[int, int], ...] = ()
    _index: Dict[str, int] = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index = {}
        for i, c in enumerate(self.coords):
            if c.ordinal != i:
                raise GradedError(f"coordinate {c.name!r} has ordinal {c.ordinal}, expected {i}")
            if c.degree < 0:
                raise GradedError(f"coordinate {c.name!r} has negative degree {c.degree}")
            if c.name in index:
                raise GradedError(f"duplicate coordinate name {c.name!r}")
            index[c.name] = i
        seen = set()
        for b, m in self.pairing:
            if b in seen or m in seen:
                raise GradedError("coordinate used in more than one pairing slot")
            seen.update((b, m))
            if self.shift is None:
                raise GradedError("pairing requires a shift")
            if self.coords[b].degree + self.coords[m].degree != self.shift:
                raise GradedError(
                    f"pair {self.coords[b].name}/{self.coords[m].name} degrees do not add to {self.shift}")
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.coords)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.coords)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(c.degree for c in self.coords)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise GradedError(f"unknown coordinate {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def coordinate(self, key: Union[str, int, Coordinate]) -> Coordinate:
        if isinstance(key, Coordinate):
            return self.coords[self.index(key.name)]
        if isinstance(key, int):
            return self.coords[key]
        return self.coords[self.index(key)]

    def __getitem__(self, name: str) -> "GradedPoly":
        """The coordinate function ``name`` as a polynomial."""
        return GradedPoly.generator(self, name)

    def gens(self) -> Tuple["GradedPoly", ...]:
        return tuple(GradedPoly.generator(self, c.name) for c in self.coords)

    def one(self) -> "GradedPoly":
        return GradedPoly.constant(self, 1)

    def zero(self) -> "GradedPoly":
        return GradedPoly(self, {})

    @property
    def dimension(self) -> Tuple[int, ...]:
        """Counts of coordinates per degree, ``m_0|m_1|...``."""
        if not self.coords:
            return (0,)
        top = max(self.degrees)
        return tuple(sum(1 for d in self.degrees if d == i) for i in range(top + 1))


def make_chart(decls: Iterable[Tuple[str, int]]) -> Chart:
    """Build a chart from ``(name, degree)`` pairs, in declaration order."""
    coords = tuple(Coordinate(name, int(deg), i) for i, (name, deg) in enumerate(decls))
    return Chart(coords)


def _koszul_merge(chart: Chart, a: Exponents, b: Exponents) -> Tuple[int, Optional[Exponents]]:
    """Sign and exponents of the normal-ordered product of monomials ``a*b``.

    Returns ``(0, None)`` if an odd coordinate would appear squared.
    """
    sign = 0
    odd_in_a_after = 0  # odd factors of a with ordinal > current position
    degrees = chart.degrees
    for i in range(len(a) - 1, -1, -1):
        if degrees[i] % 2:
            if a[i] and b[i]:
                return 0, None
            if b[i]:
                sign += odd_in_a_after
            if a[i]:
                odd_in_a_after += 1
    exps = tuple(x + y for x, y in zip(a, b))
    return (-1 if sign % 2 else 1), exps


def monomial_degree(chart: Chart, exps: Exponents) -> int:
    return sum(e * d for e, d in zip(exps, chart.degrees))


class GradedPoly:
    """Immutable element of the graded polynomial algebra of a chart."""

    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[Exponents, Scalar]):
        self.chart = chart
        clean = {}
        for k, v in terms.items():
            if v:
                clean[k] = Fraction(v)
        self.terms: Dict[Exponents, Fraction] = clean
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def constant(cls, chart: Chart, value: Scalar) -> "GradedPoly":
        return cls(chart, {(0,) * len(chart): value})

    @classmethod
    def generator(cls, chart: Chart, name: str) -> "GradedPoly":
        i = chart.index(name)
        exps = [0] * len(chart)
        exps[i] = 1
        return cls(chart, {tuple(exps): 1})

    @classmethod
    def monomial(cls, chart: Chart, factors: Sequence[str], coeff: Scalar = 1) -> "GradedPoly":
        """Product of the named coordinates in the given (source) order."""
        out = cls.constant(chart, coeff)
        for name in factors:
            out = out * cls.generator(chart, name)
        return out

    # basic protocol -------------------------------------------------------
    def _coerce(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            if other.chart != self.chart:
                raise GradedError("chart mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return GradedPoly.constant(self.chart, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return GradedPoly(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(self.chart, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise GradedError("negative power")
        out = self.chart.one()
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c: Scalar) -> "GradedPoly":
        c = Fraction(c)
        if not c:
            return self.chart.zero()
        return GradedPoly(self.chart, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GradedPoly.constant(self.chart, other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    # queries --------------------------------------------------------------
    def degrees(self) -> set:
        return {monomial_degree(self.chart, k) for k in self.terms}

    def homogeneous_parts(self) -> Dict[int, "GradedPoly"]:
        parts: Dict[int, dict] = {}
        for k, v in self.terms.items():
            parts.setdefault(monomial_degree(self.chart, k), {})[k] = v
        return {d: GradedPoly(self.chart, t) for d, t in sorted(parts.items())}

    def split(self, key) -> Dict[object, "GradedPoly"]:
        """Group terms by ``key(exponents)``."""
        parts: Dict[object, dict] = {}
        for k, v in self.terms.items():
            parts.setdefault(key(k), {})[k] = v
        return {g: GradedPoly(self.chart, t) for g, t in parts.items()}

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.chart), Fraction(0))

    def coefficient(self, factors: Sequence[str]) -> Fraction:
        """Coefficient of the normal-ordered monomial with the given factors."""
        exps = [0] * len(self.chart)
        for name in factors:
            exps[self.chart.index(name)] += 1
        return self.terms.get(tuple(exps), Fraction(0))

    def __repr__(self):
        from .render import render_poly

        return f"GradedPoly({render_poly(self)!r})"

    def __str__(self):
        from .render import render_poly

        return render_poly(self)


def multiply(f: GradedPoly, g: GradedPoly) -> GradedPoly:
    """Normal-ordered product ``f*g``."""
    if f.chart != g.chart:
        raise GradedError("chart mismatch")
    out: Dict[Exponents, Fraction] = {}
    chart = f.chart
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            sign, exps = _koszul_merge(chart, a, b)
            if not sign:
                continue
            out[exps] = out.get(exps, 0) + sign * ca * cb
    return GradedPoly(chart, out)


def degree_of(f: GradedPoly):
    """Common degree of all terms, 0 for zero, or :data:`INHOMOGENEOUS`."""
    degs = f.degrees()
    if not degs:
        return 0
    if len(degs) > 1:
        return INHOMOGENEOUS
    return degs.pop()


def homogeneous_degree(f: GradedPoly) -> int:
    d = degree_of(f)
    if d is INHOMOGENEOUS:
        raise GradedError(f"expected a homogeneous element, got {f}")
    return d


def substitute(f: GradedPoly, assignment: Mapping[Union[str, Coordinate], GradedPoly],
               target: Optional[Chart] = None) -> GradedPoly:
    """Image of ``f`` under the algebra morphism sending coordinates to polynomials.

    Unassigned coordinates map to themselves (which requires ``target`` to
    contain a coordinate of the same name and degree).  Assigned values must be
    homogeneous of the coordinate's degree, or zero.
    """
    src = f.chart
    target = target if target is not None else src
    images = []
    for c in src.coords:
        key = c.name if c.name in _names(assignment) else None
        if key is not None:
            val = _lookup(assignment, c.name)
            if isinstance(val, (int, Fraction)):
                val = GradedPoly.constant(target, val)
            if val.chart != target:
                raise GradedError("assigned value lives on a different chart")
            d = degree_of(val)
            if val and d != c.degree:
                raise GradedError(
                    f"cannot send {c.name} (degree {c.degree}) to {val} (degree {d})")
            images.append(val)
        else:
            if c.name not in target:
                raise GradedError(f"coordinate {c.name!r} missing from target chart")
            tc = target.coordinate(c.name)
            if tc.degree != c.degree:
                raise GradedError(f"coordinate {c.name!r} changes degree")
            images.append(GradedPoly.generator(target, c.name))
    out = target.zero()
    for exps, coeff in f.terms.items():
        term = GradedPoly.constant(target, coeff)
        for i, e in enumerate(exps):
            for _ in range(e):
                term = term * images[i]
            if not term:
                break
        out = out + term
    return out


def _names(assignment) -> set:
    return {k.name if isinstance(k, Coordinate) else k for k in assignment}


def _lookup(assignment, name):
    for k, v in assignment.items():
        if (k.name if isinstance(k, Coordinate) else k) == name:
            return v
    raise KeyError(name)
