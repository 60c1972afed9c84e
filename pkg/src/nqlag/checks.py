"""Evaluate scenario checks against the engine."""
from __future__ import annotations

import itertools
import time
from typing import Iterable, Optional

from .calculus import one_form_curl
from .graded import GradedError
from .linfty import DEFAULT_ARITY_CAP, ArityCapError, FormalElement, LinftyStructure
from .render import render_poly
from .report import CheckResult, Report, sign_fingerprint
from .scenario import Check, Scenario
from .symplectic import graph_ideal_closed, graph_is_lagrangian


def structure(sc: Scenario, arity_cap: int = DEFAULT_ARITY_CAP) -> LinftyStructure:
    """The structure of a scenario, built even when the master equation fails."""
    return LinftyStructure(sc.cot, sc.theta, check=False, arity_cap=arity_cap)


def run_checks(sc: Scenario, checks: Optional[Iterable[Check]] = None,
               arity_cap: int = DEFAULT_ARITY_CAP) -> Report:
    S = structure(sc, arity_cap)
    results, timings = [], {}
    for chk in (sc.checks if checks is None else checks):
        t0 = time.perf_counter()
        try:
            res = _RUNNERS[chk.kind](sc, S, *chk.args)
        except (ArityCapError, GradedError) as exc:
            res = CheckResult(chk.label(), False, {}, str(exc))
        res.label = chk.label()
        if chk.kind != "master" and chk.kind != "graph-lagrangian" and not S.master_ok:
            res.passed = False
            res.note = (res.note + "; " if res.note else "") + "master equation fails"
        results.append(res)
        timings[chk.label()] = time.perf_counter() - t0
    return Report(sc.name, results, sign_fingerprint(), timings)


def _poly(sc, name):
    return sc.element(name).value


def check_master(sc, S):
    return CheckResult("master", S.master_ok, {"defect": render_poly(S.defect)})


def check_brackets(sc, S, k):
    k = int(k)
    gens = sc.base.gens()
    values = {"curvature": render_poly(S.curvature)}
    for j in range(1, k + 1):
        for combo in itertools.combinations_with_replacement(range(len(gens)), j):
            val = S.bracket(*[gens[i] for i in combo])
            if val:
                names = ",".join(sc.base.coords[i].name for i in combo)
                values[f"l^{j}({names})"] = render_poly(val)
    ok = True
    note = ""
    top = min(k, S.arity_cap)
    if top < k:
        note = f"relations checked up to arity {top} (cap)"
    for m in range(1, top + 1):
        bad = None
        for combo in itertools.combinations_with_replacement(range(len(gens)), m):
            r = S.identity_residual([gens[i] for i in combo])
            if r:
                bad = (combo, r)
                break
        if bad is None:
            values[f"relations arity {m}"] = "0"
        else:
            ok = False
            names = ",".join(sc.base.coords[i].name for i in bad[0])
            values[f"relations arity {m}"] = f"({names}) -> {render_poly(bad[1])}"
    return CheckResult("", ok, values, note)


def check_mc(sc, S, name):
    f = _poly(sc, name)
    values = {}
    for k, term in S.mc_terms(f).items():
        if term:
            values[f"l^{k}/{k}!"] = render_poly(term)
    r = S.mc_residual(f)
    values["residual"] = render_poly(r)
    return CheckResult("", r.is_zero(), values)


def check_mc_formal(sc, S, name, order):
    F = FormalElement.linear_lift(_poly(sc, name), int(order))
    res = S.formal_residual(F)
    values = {f"order {k}": render_poly(r) for k, r in enumerate(res, start=1)}
    return CheckResult("", all(r.is_zero() for r in res), values,
                       "formal element nu*f")


def check_gauge(sc, S, fname, lname):
    f, lam = _poly(sc, fname), _poly(sc, lname)
    rhs = S.gauge_rhs(f, lam)
    values = {"rhs": render_poly(rhs)}
    if not S.strict:
        return CheckResult("", True, values, "flow identity applies to strict structures only")
    flow = S.gauge_flow_rhs(f, lam)
    values["flow form"] = render_poly(flow)
    return CheckResult("", rhs == flow, values)


def check_kuranishi(sc, S, name):
    f = _poly(sc, name)
    d = S.bracket(f)
    if d:
        return CheckResult("", False, {"l^1": render_poly(d)}, "not an infinitesimal deformation")
    obs = S.kuranishi(f)
    return CheckResult("", obs.is_zero(), {"l^1": "0", "obstruction": render_poly(obs)})


def check_extended(sc, S, fname, tname):
    f, tt = _poly(sc, fname), _poly(sc, tname)
    first, second = S.mc_extended_residual(f, tt)
    direct = S.extended_mc_sum(f, tt)
    agree = direct.ambient == -first and direct.base == second
    values = {"ambient equation": render_poly(first), "base equation": render_poly(second),
              "direct sum agrees": "yes" if agree else "no"}
    return CheckResult("", agree and first.is_zero() and second.is_zero(), values)


def check_graph(sc, S, name):
    alpha = sc.element(name, "form").value
    closed = graph_is_lagrangian(alpha, sc.cot)
    brute = graph_ideal_closed(alpha, sc.cot)
    values = {"closed": "yes" if closed else "no", "ideal closed": "yes" if brute else "no"}
    for (a, b), c in one_form_curl(alpha).items():
        values[f"curl({a},{b})"] = render_poly(c)
    return CheckResult("", closed and brute, values)


_RUNNERS = {
    "master": check_master,
    "brackets": check_brackets,
    "mc": check_mc,
    "mc-formal": check_mc_formal,
    "gauge": check_gauge,
    "kuranishi": check_kuranishi,
    "extended": check_extended,
    "graph-lagrangian": check_graph,
}
