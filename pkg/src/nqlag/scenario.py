"""Scenario files: a small line-oriented language describing a deformation problem.

Example::

    # so(3) as a degree-2 Courant algebroid over a point
    shift 2
    coord u : 1
    coord v : 1
    coord w : 1
    theta = v*w*p(u) + w*u*p(v) + u*v*p(w)
    element f : f = u*v
    check master
    check mc f

Statements are ``shift <n>``, ``coord <name> : <degree>``, ``theta = <expr>``,
``element <name> : <role> = <expr>`` and ``check <kind> [args]``.  ``#``
starts a comment.  Expressions use integers, ``/`` by a constant, ``+ - *``,
``^`` with an integer exponent, parentheses, coordinate names, ``p(<coord>)``
for momenta and ``d(<coord>)`` in 1-forms.  Factors are multiplied in source
order; the algebra applies the Koszul signs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Dict, List, Optional, Tuple, Union

from .calculus import OneForm, render_one_form
from .graded import Chart, Coordinate, GradedError, GradedPoly, INHOMOGENEOUS, degree_of
from .render import render_poly
from .symplectic import CotangentChart, shift_cotangent

ROLES = ("f", "gauge", "ambient", "form")

# kind -> argument spec; names are element roles, "int" a non-negative integer
CHECKS: Dict[str, Tuple[str, ...]] = {
    "master": (),
    "brackets": ("int",),
    "mc": ("f",),
    "mc-formal": ("f", "int"),
    "gauge": ("f", "gauge"),
    "kuranishi": ("f",),
    "extended": ("f", "ambient"),
    "graph-lagrangian": ("form",),
}


class ScenarioError(GradedError):
    """Syntax or validation error, with a 1-based source position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column
        self.message = message


# --------------------------------------------------------------------------
# expressions
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text) - len(text[pos:].lstrip())
            raise ScenarioError(f"unexpected character {text[bad]!r}", line, col0 + bad + 1)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), col0 + start + 1))
        pos = m.end()
    out.append(("end", "", col0 + len(text) + 1))
    return out


class _ExprParser:
    """Recursive descent over a token list; ``symbol`` resolves names to polynomials."""

    def __init__(self, text: str, line: int, col0: int, chart: Chart, symbol: Callable):
        self.tokens = _tokenize(text, line, col0)
        self.i = 0
        self.line = line
        self.chart = chart
        self.symbol = symbol

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ScenarioError(f"expected {value!r}, found {tok[1] or 'end of line'!r}", self.line, tok[2])
        return tok

    def parse(self) -> GradedPoly:
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ScenarioError(f"unexpected {tok[1]!r}", self.line, tok[2])
        return out

    def expr(self):
        out = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.factor()
        while self.peek()[1] in ("*", "/"):
            _, op, col = self.take()
            rhs = self.factor()
            if op == "*":
                out = out * rhs
            else:
                if any(any(e) for e in rhs.terms) or not rhs:
                    raise ScenarioError("division only by a nonzero constant", self.line, col)
                out = out.scale(1 / rhs.constant_term())
        return out

    def factor(self):
        if self.peek()[1] in ("-", "+"):
            op = self.take()[1]
            val = self.factor()
            return -val if op == "-" else val
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, col = self.take()
            if kind != "num":
                raise ScenarioError("exponent must be a non-negative integer", self.line, col)
            base = base ** int(val)
        return base

    def atom(self):
        kind, val, col = self.take()
        if kind == "num":
            return GradedPoly.constant(self.chart, int(val))
        if val == "(":
            out = self.expr()
            self.expect(")")
            return out
        if kind == "name":
            if val in ("p", "d") and self.peek()[1] == "(":
                self.take()
                k2, inner, c2 = self.take()
                if k2 != "name":
                    raise ScenarioError(f"expected a coordinate inside {val}(...)", self.line, c2)
                self.expect(")")
                return self.symbol(f"{val}({inner})", self.line, c2)
            return self.symbol(val, self.line, col)
        raise ScenarioError(f"unexpected {val or 'end of line'!r}", self.line, col)


def _resolver(chart: Chart, what: str):
    def symbol(name, line, col):
        if name in chart:
            return GradedPoly.generator(chart, name)
        if name.startswith("p("):
            raise ScenarioError(f"momenta are not allowed in {what}", line, col)
        if name.startswith("d("):
            raise ScenarioError("d(...) is only allowed in 1-forms", line, col)
        raise ScenarioError(f"unknown coordinate {name!r}", line, col)
    return symbol


def parse_expression(text: str, chart: Chart, line: int = 1, column: int = 0, what: str = "expression") -> GradedPoly:
    """Parse ``text`` to a polynomial on ``chart``."""
    return _ExprParser(text, line, column, chart, _resolver(chart, what)).parse()


def form_chart(base: Chart) -> Chart:
    """``d(c)`` symbols (degree ``|c|``) followed by the base coordinates."""
    decls = [(f"d({c.name})", c.degree) for c in base.coords] + [(c.name, c.degree) for c in base.coords]
    return Chart(tuple(Coordinate(n, d, i) for i, (n, d) in enumerate(decls)))


def parse_one_form(text: str, base: Chart, line: int = 1, column: int = 0) -> OneForm:
    """Parse ``sum d(c)*(...)``; every term must contain exactly one ``d`` factor."""
    aux = form_chart(base)
    k = len(base)

    def symbol(name, ln, col):
        if name in aux:
            return GradedPoly.generator(aux, name)
        if name.startswith("p("):
            raise ScenarioError("momenta are not allowed in 1-forms", ln, col)
        raise ScenarioError(f"unknown coordinate {name!r}", ln, col)

    poly = _ExprParser(text, line, column, aux, symbol).parse()
    comps: Dict[str, dict] = {}
    for exps, c in poly.terms.items():
        dpart = exps[:k]
        if sum(dpart) != 1:
            raise ScenarioError("1-form terms must contain exactly one d(...) factor", line, column + 1)
        name = base.coords[dpart.index(1)].name
        comps.setdefault(name, {})[exps[k:]] = c
    try:
        return OneForm(base, {n: GradedPoly(base, t) for n, t in comps.items()})
    except GradedError as exc:
        raise ScenarioError(str(exc), line, column + 1) from None


# --------------------------------------------------------------------------
# scenarios
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Element:
    name: str
    role: str
    value: Union[GradedPoly, OneForm]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Check:
    kind: str
    args: Tuple[str, ...] = ()
    line: int = field(default=0, compare=False)

    def label(self) -> str:
        return " ".join((self.kind,) + self.args)


@dataclass(frozen=True)
class Scenario:
    name: str
    base: Chart
    cot: CotangentChart
    theta: GradedPoly
    elements: Dict[str, Element]
    checks: Tuple[Check, ...]

    @property
    def n(self) -> int:
        return self.cot.n

    def element(self, name: str, role: Optional[str] = None) -> Element:
        try:
            el = self.elements[name]
        except KeyError:
            raise ScenarioError(f"unknown element {name!r}") from None
        if role is not None and el.role != role:
            raise ScenarioError(f"element {name!r} has role {el.role}, expected {role}")
        return el

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return (self.base == other.base and self.cot == other.cot and self.theta == other.theta
                and self.elements == other.elements and self.checks == other.checks)

    __hash__ = None


_COORD = re.compile(r"coord\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(-?\d+)\s*$")
_SHIFT = re.compile(r"shift\s+(-?\d+)\s*$")
_THETA = re.compile(r"theta\s*=(.*)$")
_ELEMENT = re.compile(r"element\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*([A-Za-z_-]+)\s*=(.*)$")
_CHECK = re.compile(r"check\s+(\S+)((?:\s+\S+)*)\s*$")
_RESERVED = {"p", "d", "theta"}


def _strip(raw: str) -> Tuple[str, int]:
    body = raw.split("#", 1)[0].rstrip()
    indent = len(body) - len(body.lstrip())
    return body.strip(), indent


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    """Parse and validate a scenario.  Degree checks are done here; the master
    equation is not (a defective ``theta`` is a check failure, not a syntax error)."""
    lines = text.splitlines()
    coords: List[Tuple[str, int, int]] = []
    shift = None
    exprs = []
    for ln, raw in enumerate(lines, start=1):
        body, indent = _strip(raw)
        if not body:
            continue
        head = body.split(None, 1)[0]
        col = indent + 1
        if head == "coord":
            m = _COORD.match(body)
            if not m:
                raise ScenarioError("expected 'coord <name> : <degree>'", ln, col)
            cname, deg = m.group(1), int(m.group(2))
            if cname in _RESERVED:
                raise ScenarioError(f"{cname!r} is reserved", ln, col)
            if deg < 0:
                raise ScenarioError("degrees must be non-negative", ln, col)
            if any(c[0] == cname for c in coords):
                raise ScenarioError(f"coordinate {cname!r} declared twice", ln, col)
            coords.append((cname, deg, ln))
        elif head == "shift":
            m = _SHIFT.match(body)
            if not m:
                raise ScenarioError("expected 'shift <n>'", ln, col)
            if shift is not None:
                raise ScenarioError("shift declared twice", ln, col)
            shift = int(m.group(1))
        elif head in ("theta", "element", "check"):
            exprs.append((ln, indent, body, raw))
        else:
            raise ScenarioError(f"unknown statement {head!r}", ln, col)
    if shift is None:
        raise ScenarioError("missing 'shift <n>' declaration", len(lines) or 1, 1)
    base = Chart(tuple(Coordinate(c, d, i) for i, (c, d, _) in enumerate(coords)))
    try:
        cot = shift_cotangent(base, shift)
    except GradedError as exc:
        raise ScenarioError(str(exc), 1, 1) from None
    n = shift

    theta = None
    elements: Dict[str, Element] = {}
    checks: List[Check] = []
    for ln, indent, body, raw in exprs:
        head = body.split(None, 1)[0]
        col = indent + 1
        if head == "theta":
            m = _THETA.match(body)
            if not m:
                raise ScenarioError("expected 'theta = <expr>'", ln, col)
            if theta is not None:
                raise ScenarioError("theta declared twice", ln, col)
            src = m.group(1)
            theta = parse_expression(src, cot, ln, indent + m.start(1), "theta")
            _require_degree(theta, n + 1, "theta", ln, col)
        elif head == "element":
            m = _ELEMENT.match(body)
            if not m:
                raise ScenarioError("expected 'element <name> : <role> = <expr>'", ln, col)
            ename, role, src = m.groups()
            if role not in ROLES:
                raise ScenarioError(f"unknown role {role!r} (expected one of {', '.join(ROLES)})",
                                    ln, indent + m.start(2) + 1)
            if ename in elements:
                raise ScenarioError(f"element {ename!r} declared twice", ln, col)
            ecol = indent + m.start(3)
            if role == "form":
                value = parse_one_form(src, base, ln, ecol)
                if value.degree is not None and value.degree != n:
                    raise ScenarioError(f"1-form {ename!r} has degree {value.degree}, expected {n}", ln, col)
            elif role == "ambient":
                value = parse_expression(src, cot, ln, ecol, "ambient deformations")
                _require_degree(value, n + 1, f"element {ename!r}", ln, col)
            else:
                value = parse_expression(src, base, ln, ecol, "base elements")
                _require_degree(value, n if role == "f" else n - 1, f"element {ename!r}", ln, col)
            elements[ename] = Element(ename, role, value, ln)
        else:
            m = _CHECK.match(body)
            if not m:
                raise ScenarioError("expected 'check <kind> [args]'", ln, col)
            kind = m.group(1)
            args = tuple(m.group(2).split())
            if kind not in CHECKS:
                raise ScenarioError(f"unknown check {kind!r}", ln, indent + m.start(1) + 1)
            spec = CHECKS[kind]
            if len(args) != len(spec):
                raise ScenarioError(f"check {kind} takes {len(spec)} argument(s), got {len(args)}", ln, col)
            for a, want in zip(args, spec):
                if want == "int":
                    if not a.isdigit():
                        raise ScenarioError(f"expected a non-negative integer, got {a!r}", ln, col)
                elif a not in elements:
                    raise ScenarioError(f"unknown element {a!r}", ln, col)
                elif elements[a].role != want:
                    raise ScenarioError(f"element {a!r} has role {elements[a].role}, check {kind} needs {want}",
                                        ln, col)
            checks.append(Check(kind, args, ln))
    if theta is None:
        raise ScenarioError("missing 'theta = <expr>'", len(lines) or 1, 1)
    return Scenario(name, base, cot, theta, elements, tuple(checks))


def _require_degree(value: GradedPoly, want: int, what: str, ln: int, col: int):
    if not value:
        return
    d = degree_of(value)
    if d is INHOMOGENEOUS:
        raise ScenarioError(f"{what} is not homogeneous (degrees {sorted(value.degrees())})", ln, col)
    if d != want:
        raise ScenarioError(f"{what} has degree {d}, expected {want}", ln, col)


def render_scenario(sc: Scenario) -> str:
    """Canonical text; ``parse_scenario(render_scenario(s)) == s``."""
    out = [f"shift {sc.n}"]
    out += [f"coord {c.name} : {c.degree}" for c in sc.base.coords]
    out.append(f"theta = {render_poly(sc.theta)}")
    for el in sc.elements.values():
        body = render_one_form(el.value) if el.role == "form" else render_poly(el.value)
        out.append(f"element {el.name} : {el.role} = {body}")
    out += [f"check {c.label()}" for c in sc.checks]
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# bundled corpus
# --------------------------------------------------------------------------

SUFFIX = ".scenario"


def corpus_names() -> List[str]:
    root = resources.files("nqlag.corpus")
    return sorted(p.name[: -len(SUFFIX)] for p in root.iterdir() if p.name.endswith(SUFFIX))


def corpus_text(name: str) -> str:
    path = resources.files("nqlag.corpus") / (name + SUFFIX)
    if not path.is_file():
        raise ScenarioError(f"no bundled scenario named {name!r}")
    return path.read_text(encoding="utf-8")


def load_corpus(name: str) -> Scenario:
    return parse_scenario(corpus_text(name), name)
