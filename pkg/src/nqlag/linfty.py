"""Derived L-infinity brackets of a Hamiltonian on ``T*[n]L`` and their Maurer-Cartan theory.

Base functions ``f`` in ``C_L`` sit in the L-infinity algebra ``C_L[n-1]``
with degree ``|f| - n + 1``.  Given ``theta`` of degree ``n + 1`` with
``{theta, theta} = 0`` the brackets are::

    l^k(f_1, ..., f_k) = (-1)^{sum_i (k-i)(|f_i|-n)} 0^*{...{theta, f_1}, ..., f_k}

Every ``{pi^* f, .}`` lowers momentum degree by one, so for polynomial
``theta`` only finitely many brackets are nonzero and every exponential
series below is a finite sum.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .calculus import Derivation, partial_derivative, right_derivative
from .graded import GradedError, GradedPoly, INHOMOGENEOUS, degree_of, homogeneous_degree
from .symplectic import (CotangentChart, canonical_bracket, hamiltonian_vf, lift, momentum_components,
                         momentum_degree, momentum_name, zero_section_pullback)

DEFAULT_ARITY_CAP = 4
DEFAULT_SERIES_CAP = 64


class MasterEquationError(GradedError):
    """``{theta, theta} != 0``; ``defect`` holds ``{theta, theta} / 2``."""

    def __init__(self, defect: GradedPoly):
        super().__init__(f"master equation fails: {{theta,theta}}/2 = {defect}")
        self.defect = defect


class SeriesError(GradedError):
    """A bracket or exponential series could not be certified to terminate."""


class ArityCapError(GradedError):
    pass


def decalage_sign(degrees: Sequence[int]) -> int:
    """``(-1)^{sum_i (k-i)(|x_i|-1)}`` for L-infinity degrees ``|x_i|``, ``k = len(degrees)``."""
    k = len(degrees)
    e = sum((k - i) * (d - 1) for i, d in enumerate(degrees, start=1))
    return -1 if e % 2 else 1


# --------------------------------------------------------------------------
# V-algebras
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class VAlgebra:
    """A graded Lie algebra with an abelian subalgebra and a compatible projection."""

    bracket: Callable
    include: Callable
    project: Callable
    in_subalgebra: Callable


def canonical_valgebra(cot: CotangentChart) -> VAlgebra:
    """``(C(T*[n]L)[n], C(L)[n], 0^*)`` with the canonical bracket."""
    def in_sub(a):
        return a.chart == cot.base or (a.chart == cot and momentum_degree(a) <= 0)

    return VAlgebra(bracket=canonical_bracket,
                    include=lambda a: lift(a, cot),
                    project=zero_section_pullback,
                    in_subalgebra=in_sub)


def voronov_bracket(V: VAlgebra, delta, args: Sequence) -> object:
    """``Q^i(a_1..a_i) = p[...[delta, iota a_1], ..., iota a_i]``; ``i = 0`` gives the curvature ``p(delta)``."""
    sq = V.bracket(delta, delta)
    if sq:
        raise MasterEquationError(sq.scale(Fraction(1, 2)))
    acc = delta
    for a in args:
        if not V.in_subalgebra(a):
            raise GradedError("argument is not in the abelian subalgebra")
        acc = V.bracket(acc, V.include(a))
    return V.project(acc)


# --------------------------------------------------------------------------
# The structure of a Hamiltonian
# --------------------------------------------------------------------------

def _homogeneous_split(f: GradedPoly) -> List[GradedPoly]:
    return list(f.homogeneous_parts().values())


def _koszul_chi(degrees: Sequence[int], order: Sequence[int]) -> int:
    """``sign(sigma) * epsilon(sigma)`` for listing elements in ``order``."""
    sign = 1
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            i, j = order[a], order[b]
            if i > j:
                sign *= -1
                if degrees[i] % 2 and degrees[j] % 2:
                    sign *= -1
    return sign


def _norm(k: int) -> int:
    return k * (k - 1) // 2


def _shuffles(m: int, k: int):
    for first in itertools.combinations(range(m), k):
        rest = tuple(i for i in range(m) if i not in first)
        yield first + rest


class LinftyStructure:
    """Derived brackets ``l^k`` of a Hamiltonian ``theta`` on a shifted cotangent chart.

    Construction checks that ``theta`` is homogeneous of degree ``n + 1`` and
    solves the master equation ``{theta, theta} = 0``; pass ``check=False`` to
    build a structure for a defective ``theta`` (used to report the defect).
    """

    def __init__(self, cot: CotangentChart, theta: GradedPoly, check: bool = True,
                 arity_cap: int = DEFAULT_ARITY_CAP, series_cap: int = DEFAULT_SERIES_CAP):
        if not isinstance(cot, CotangentChart):
            raise GradedError("LinftyStructure needs a shifted cotangent chart")
        theta = lift(theta, cot) if theta.chart != cot else theta
        d = degree_of(theta)
        if theta and d != cot.n + 1:
            raise GradedError(f"theta must have degree {cot.n + 1}, got {d}")
        self.cot = cot
        self.base = cot.base
        self.n = cot.n
        self.theta = theta
        self.arity_cap = arity_cap
        self.series_cap = series_cap
        self.defect = canonical_bracket(theta, theta).scale(Fraction(1, 2))
        if check and self.defect:
            raise MasterEquationError(self.defect)
        self.top_arity = max(momentum_degree(theta), 0)
        if self.top_arity > series_cap:
            raise SeriesError(f"theta has momentum degree {self.top_arity} > cap {series_cap}")

    # -- basic data --------------------------------------------------------
    @property
    def curvature(self) -> GradedPoly:
        return zero_section_pullback(self.theta)

    @property
    def strict(self) -> bool:
        return self.curvature.is_zero()

    @property
    def master_ok(self) -> bool:
        return self.defect.is_zero()

    def linfty_degree(self, f: GradedPoly) -> int:
        return homogeneous_degree(f) - self.n + 1

    def _base(self, f: GradedPoly) -> GradedPoly:
        if f.chart == self.base:
            return f
        if f.chart == self.cot and momentum_degree(f) <= 0:
            return zero_section_pullback(f)
        raise GradedError("expected a function on the base")

    def homological_field(self) -> Derivation:
        """``Q = X_theta``."""
        return hamiltonian_vf(self.theta)

    # -- brackets ----------------------------------------------------------
    def bracket(self, *fs: GradedPoly) -> GradedPoly:
        """``l^k(f_1, ..., f_k)``, extended multilinearly over homogeneous parts."""
        fs = [self._base(f) for f in fs]
        out = self.base.zero()
        if len(fs) > self.top_arity:
            return out
        for parts in itertools.product(*[_homogeneous_split(f) for f in fs]):
            out = out + self._bracket_homogeneous(parts)
        return out

    def _bracket_homogeneous(self, fs: Sequence[GradedPoly]) -> GradedPoly:
        k = len(fs)
        acc = self.theta
        for f in fs:
            acc = canonical_bracket(acc, lift(f, self.cot))
            if not acc:
                return self.base.zero()
        e = sum((k - i) * (homogeneous_degree(f) - self.n) for i, f in enumerate(fs, start=1))
        out = zero_section_pullback(acc)
        return -out if e % 2 else out

    def jet_bracket(self, *fs: GradedPoly) -> GradedPoly:
        """``l^k`` from momentum derivatives of ``theta`` at the zero section.

        ``sum_J eps_J 0^*(theta <-d p_{j_1} ... <-d p_{j_k}) prod_m s_{j_m} (d f_m / d q_{j_m})``,
        where ``s_j = (-1)^{i(n-i)}`` and ``eps_J`` collects the Koszul signs of
        moving each right momentum derivative past the earlier factors.
        """
        fs = [self._base(f) for f in fs]
        out = self.base.zero()
        for parts in itertools.product(*[_homogeneous_split(f) for f in fs]):
            out = out + self._jet_homogeneous(parts)
        return out

    def _jet_homogeneous(self, fs):
        base, n = self.base, self.n
        k = len(fs)
        qs = base.coords
        out = base.zero()
        for J in itertools.product(range(len(qs)), repeat=k):
            Bs = [partial_derivative(f, qs[j].name) for f, j in zip(fs, J)]
            if any(not B for B in Bs):
                continue
            D = self.theta
            for j in J:
                D = right_derivative(D, momentum_name(qs[j].name))
                if not D:
                    break
            if not D:
                continue
            D = zero_section_pullback(D)
            if not D:
                continue
            sign = 1
            acc_deg = 0
            for m, j in enumerate(J):
                p_deg = n - qs[j].degree
                if m and (p_deg * acc_deg) % 2:
                    sign = -sign
                acc_deg += homogeneous_degree(Bs[m])
                if (qs[j].degree * (n - qs[j].degree)) % 2:
                    sign = -sign
            term = D
            for B in Bs:
                term = term * B
            out = out + term.scale(sign)
        e = sum((k - i) * (homogeneous_degree(f) - n) for i, f in enumerate(fs, start=1))
        return -out if e % 2 else out

    def schouten_bracket_form(self, *fs: GradedPoly) -> GradedPoly:
        """``l^k`` read through multivector fields: ``+/-[...[pi^k, f_1], ..., f_k]``.

        ``pi^k`` is the momentum-degree-``k`` component of ``theta``; for ``k = 1``
        this is ``X(f)`` with ``X`` the vector-field part.
        """
        fs = [self._base(f) for f in fs]
        k = len(fs)
        comp = momentum_components(self.theta).get(k)
        out = self.base.zero()
        if comp is None:
            return out
        for parts in itertools.product(*[_homogeneous_split(f) for f in fs]):
            acc = comp
            for f in parts:
                acc = canonical_bracket(acc, lift(f, self.cot))
            e = sum((k - i) * (homogeneous_degree(f) - self.n) for i, f in enumerate(parts, start=1))
            val = zero_section_pullback(acc)
            out = out + (-val if e % 2 else val)
        return out

    def voronov(self, *fs: GradedPoly) -> GradedPoly:
        """Taylor coefficient ``Q^k`` of the canonical V-algebra (no decalage sign)."""
        V = canonical_valgebra(self.cot)
        return voronov_bracket(V, self.theta, [self._base(f) for f in fs])

    # -- L-infinity relations ---------------------------------------------
    def identity_residual(self, xs: Sequence[GradedPoly], arity_cap: Optional[int] = None) -> GradedPoly:
        """Generalized Jacobi combination at ``xs``; zero iff the relation of arity ``len(xs)`` holds.

        ``sum_{k} sum_{sigma in Sh(k, m-k)} chi(sigma) (-1)^{k(m-k)} l^{m-k+1}(l^k(x_sigma...), x_sigma...)``,
        including the ``k = 0`` curvature term.  Inside the relation each
        bracket is taken with the normalization ``(-1)^{k(k-1)/2} l^k``; with the
        raw prefactor of :meth:`bracket` the relation fails at arity 3.
        """
        cap = self.arity_cap if arity_cap is None else arity_cap
        m = len(xs)
        if m > cap:
            raise ArityCapError(f"arity {m} exceeds cap {cap}")
        xs = [self._base(x) for x in xs]
        out = self.base.zero()
        for parts in itertools.product(*[_homogeneous_split(x) for x in xs]):
            out = out + self._identity_homogeneous(parts)
        return out

    def _identity_homogeneous(self, xs):
        m = len(xs)
        degs = [self.linfty_degree(x) for x in xs]
        out = self.base.zero()
        for k in range(0, m + 1):
            for order in _shuffles(m, k):
                chi = _koszul_chi(degs, order)
                if (k * (m - k) + _norm(k) + _norm(m - k + 1)) % 2:
                    chi = -chi
                inner = self.bracket(*[xs[i] for i in order[:k]])
                if not inner:
                    continue
                outer = self.bracket(inner, *[xs[i] for i in order[k:]])
                out = out + outer.scale(chi)
        return out

    # -- Maurer-Cartan -------------------------------------------------------
    def _check_degree(self, f, want, what):
        f = self._base(f)
        d = degree_of(f)
        if f and d != want:
            raise GradedError(f"{what} must have degree {want}, got {d if d is not INHOMOGENEOUS else 'mixed'}")
        return f

    def mc_terms(self, f: GradedPoly) -> Dict[int, GradedPoly]:
        """``{k: l^k(f, ..., f) / k!}`` for every arity that can be nonzero."""
        f = self._check_degree(f, self.n, "Maurer-Cartan candidate")
        return {k: self.bracket(*([f] * k)).scale(Fraction(1, math.factorial(k)))
                for k in range(0, self.top_arity + 1)}

    def mc_residual(self, f: GradedPoly) -> GradedPoly:
        """``sum_k l^k(f, ..., f) / k!``; zero iff ``f`` is Maurer-Cartan."""
        out = self.base.zero()
        for v in self.mc_terms(f).values():
            out = out + v
        return out

    def is_mc(self, f: GradedPoly) -> bool:
        return self.mc_residual(f).is_zero()

    def gauge_rhs(self, f: GradedPoly, lam: GradedPoly) -> GradedPoly:
        """``sum_k l^{1+k}(f, ..., f, lambda) / k!``."""
        f = self._check_degree(f, self.n, "Maurer-Cartan candidate")
        lam = self._check_degree(lam, self.n - 1, "gauge parameter")
        out = self.base.zero()
        for k in range(0, self.top_arity):
            out = out + self.bracket(*([f] * k), lam).scale(Fraction(1, math.factorial(k)))
        return out

    def gauge_flow_rhs(self, f: GradedPoly, lam: GradedPoly) -> GradedPoly:
        """``0^*{pi^* lambda, exp(-{pi^* f, .}) theta}``."""
        f = self._check_degree(f, self.n, "Maurer-Cartan candidate")
        lam = self._check_degree(lam, self.n - 1, "gauge parameter")
        return zero_section_pullback(canonical_bracket(lift(lam, self.cot), exp_flow(f, self.theta)))

    def kuranishi(self, f: GradedPoly) -> GradedPoly:
        """``l^2(f, f)`` for an infinitesimal deformation ``f`` (``l^1(f) = 0``)."""
        f = self._check_degree(f, self.n, "infinitesimal deformation")
        d = self.bracket(f)
        if d:
            raise GradedError(f"not an infinitesimal deformation: l^1(f) = {d}")
        return self.bracket(f, f)

    def formal_residual(self, F: "FormalElement") -> List[GradedPoly]:
        """Residual of the formal MC equation at orders ``1..N``.

        Order ``k`` collects ``sum_l 1/l! sum_{i_1+...+i_l = k} l^l(a_{i_1}, ..., a_{i_l})``
        for ``F = sum_i a_i nu^i``.
        """
        coeffs = [self._check_degree(a, self.n, "formal coefficient") for a in F.coefficients]
        N = F.order
        out = []
        for k in range(1, N + 1):
            acc = self.base.zero()
            for l in range(1, min(k, self.top_arity) + 1):
                inv = Fraction(1, math.factorial(l))
                for comp in _compositions(k, l):
                    args = [coeffs[i - 1] for i in comp]
                    if any(not a for a in args):
                        continue
                    acc = acc + self.bracket(*args).scale(inv)
            out.append(acc)
        return out

    # -- simultaneous deformations -----------------------------------------
    def _require_strict(self):
        if not self.strict:
            raise GradedError("extended brackets are only defined for strict structures (0^*theta = 0)")

    def extended_bracket(self, *args: "ExtElement") -> "ExtElement":
        """``L^k`` on ``C_L[n-1] (+) C_{T*[n]L}[n]``, multilinear in the arguments."""
        self._require_strict()
        args = [a if isinstance(a, ExtElement) else ExtElement.of(self, a) for a in args]
        out = ExtElement(self.base.zero(), self.cot.zero())
        pieces = []
        for a in args:
            opts = [("b", p) for p in _homogeneous_split(a.base)]
            opts += [("a", p) for p in _homogeneous_split(a.ambient)]
            pieces.append(opts)
        for combo in itertools.product(*pieces):
            out = out + self._extended_pure(list(combo))
        return out

    def _ext_degree(self, kind, p):
        # L-infinity degree: base f -> |f| - n + 1, ambient F -> |F| - n
        return homogeneous_degree(p) - self.n + (1 if kind == "b" else 0)

    def _extended_pure(self, combo) -> "ExtElement":
        k = len(combo)
        zero = ExtElement(self.base.zero(), self.cot.zero())
        amb = [i for i, (kind, _) in enumerate(combo) if kind == "a"]
        if k == 0:
            return zero
        if not amb:
            return ExtElement(self.bracket(*[p for _, p in combo]), self.cot.zero())
        if k == 1:
            F = combo[0][1]
            return ExtElement(zero_section_pullback(F), -canonical_bracket(self.theta, F))
        if len(amb) == 2 and k == 2:
            return ExtElement(self.base.zero(), -canonical_bracket(combo[0][1], combo[1][1]))
        if len(amb) != 1:
            return zero
        # move the ambient argument to the front
        i0 = amb[0]
        order = [i0] + [i for i in range(k) if i != i0]
        degs = [self._ext_degree(kind, p) for kind, p in combo]
        chi = _koszul_chi(degs, order)
        F = combo[i0][1]
        gs = [combo[i][1] for i in order[1:]]
        m = len(gs)
        acc = F
        for g in gs:
            acc = canonical_bracket(acc, lift(g, self.cot))
        e = m * (homogeneous_degree(F) - self.n + 1) + sum(
            (m - i) * (homogeneous_degree(g) - self.n) for i, g in enumerate(gs, start=1))
        val = zero_section_pullback(acc)
        if e % 2:
            val = -val
        return ExtElement(val.scale(chi), self.cot.zero())

    def extended_arity_bound(self, theta_t: GradedPoly) -> int:
        return max(self.top_arity, momentum_degree(theta_t), 1) + 1

    def mc_extended_residual(self, f: GradedPoly, theta_t: GradedPoly) -> Tuple[GradedPoly, GradedPoly]:
        """The two components of the Maurer-Cartan equation for ``f + theta_t``.

        Returns ``({theta, theta_t} + {theta_t, theta_t}/2,
        sum_k (L^k(f..f) + L^{k+1}(theta_t, f..f)) / k!)``.
        """
        self._require_strict()
        f = self._check_degree(f, self.n, "Maurer-Cartan candidate")
        theta_t = lift(theta_t, self.cot) if theta_t.chart != self.cot else theta_t
        d = degree_of(theta_t)
        if theta_t and d != self.n + 1:
            raise GradedError(f"ambient deformation must have degree {self.n + 1}")
        first = canonical_bracket(self.theta, theta_t) + canonical_bracket(theta_t, theta_t).scale(Fraction(1, 2))
        second = self.base.zero()
        amb = ExtElement(self.base.zero(), theta_t)
        fb = ExtElement(f, self.cot.zero())
        for k in range(0, self.extended_arity_bound(theta_t) + 1):
            inv = Fraction(1, math.factorial(k))
            if k:
                second = second + self.bracket(*([f] * k)).scale(inv)
            second = second + self.extended_bracket(amb, *([fb] * k)).base.scale(inv)
        return first, second

    def extended_mc_sum(self, f: GradedPoly, theta_t: GradedPoly) -> "ExtElement":
        """``sum_{k>=1} L^k(x, ..., x) / k!`` for ``x = f + theta_t``, expanded directly."""
        f = self._check_degree(f, self.n, "Maurer-Cartan candidate")
        theta_t = lift(theta_t, self.cot) if theta_t.chart != self.cot else theta_t
        x = ExtElement(f, theta_t)
        out = ExtElement(self.base.zero(), self.cot.zero())
        for k in range(1, self.extended_arity_bound(theta_t) + 2):
            out = out + self.extended_bracket(*([x] * k)).scale(Fraction(1, math.factorial(k)))
        return out


@dataclass(frozen=True)
class ExtElement:
    """An element ``g + F`` of ``C_L[n-1] (+) C_{T*[n]L}[n]``."""

    base: GradedPoly
    ambient: GradedPoly

    @classmethod
    def of(cls, S: LinftyStructure, p: GradedPoly) -> "ExtElement":
        if p.chart == S.base:
            return cls(p, S.cot.zero())
        return cls(S.base.zero(), p)

    def __add__(self, other: "ExtElement") -> "ExtElement":
        return ExtElement(self.base + other.base, self.ambient + other.ambient)

    def scale(self, c) -> "ExtElement":
        return ExtElement(self.base.scale(c), self.ambient.scale(c))

    def is_zero(self) -> bool:
        return self.base.is_zero() and self.ambient.is_zero()


def _compositions(k: int, parts: int):
    """Ordered tuples of ``parts`` positive integers summing to ``k``."""
    if parts == 1:
        yield (k,)
        return
    for first in range(1, k - parts + 2):
        for rest in _compositions(k - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class FormalElement:
    """``F = sum_{i=1}^N a_i nu^i`` with every ``a_i`` of degree ``n``."""

    coefficients: Tuple[GradedPoly, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @classmethod
    def linear_lift(cls, f: GradedPoly, order: int) -> "FormalElement":
        """Taylor series of the straight curve ``t -> t f``, truncated at ``order``."""
        zero = f.chart.zero()
        return cls(tuple([f] + [zero] * (order - 1))[:order])

    @classmethod
    def from_curve(cls, coefficients: Sequence[GradedPoly]) -> "FormalElement":
        return cls(tuple(coefficients))


def exp_flow(f: GradedPoly, g: GradedPoly, cap: int = DEFAULT_SERIES_CAP) -> GradedPoly:
    """``exp(-{pi^* f, .}) g = sum_k (-1)^k / k! {f, {f, ... {f, g}}}``.

    ``f`` must be momentum free, which makes ``{f, .}`` lower momentum degree
    and certifies that the series stops after ``momentum_degree(g) + 1`` terms.
    """
    cot = g.chart
    if not isinstance(cot, CotangentChart):
        raise GradedError("exp_flow acts on functions of a cotangent chart")
    f = lift(f, cot) if f.chart != cot else f
    if momentum_degree(f) > 0:
        raise SeriesError("nilpotence certificate fails: f depends on momenta")
    steps = momentum_degree(g) + 1
    if steps > cap:
        raise SeriesError(f"series needs {steps} terms, cap is {cap}")
    out = g
    term = g
    for k in range(1, steps + 1):
        term = canonical_bracket(f, term)
        if not term:
            break
        out = out + term.scale(Fraction((-1) ** k, math.factorial(k)))
    else:
        if term and canonical_bracket(f, term):
            raise SeriesError("series did not terminate")
    return out


# Functional spellings ------------------------------------------------------

def linfty_bracket(S: LinftyStructure, *fs: GradedPoly) -> GradedPoly:
    return S.bracket(*fs)


def linfty_identity_residual(S: LinftyStructure, xs: Sequence[GradedPoly], arity_cap: Optional[int] = None):
    return S.identity_residual(xs, arity_cap)


def mc_residual(S: LinftyStructure, f: GradedPoly) -> GradedPoly:
    return S.mc_residual(f)


def mc_formal_residual(S: LinftyStructure, F: FormalElement) -> List[GradedPoly]:
    return S.formal_residual(F)


def gauge_rhs(S: LinftyStructure, f: GradedPoly, lam: GradedPoly) -> GradedPoly:
    return S.gauge_rhs(f, lam)


def kuranishi(S: LinftyStructure, f: GradedPoly) -> GradedPoly:
    return S.kuranishi(f)


def extended_brackets(S: LinftyStructure, *args) -> ExtElement:
    return S.extended_bracket(*args)


def mc_extended_residual(S: LinftyStructure, f: GradedPoly, theta_t: GradedPoly):
    return S.mc_extended_residual(f, theta_t)
