"""Check results and their text / JSON rendering.

Both renderings are deterministic: values are canonical polynomial strings and
keys keep insertion order.  Timings are kept on the report object but never
enter either rendering.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List

from .graded import make_chart
from .render import render_poly
from .symplectic import canonical_bracket, j_map, momentum_name, shift_cotangent


@dataclass
class CheckResult:
    label: str
    passed: bool
    values: Dict[str, str] = field(default_factory=dict)
    note: str = ""

    def as_dict(self) -> dict:
        out = {"check": self.label, "passed": self.passed, "values": dict(self.values)}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    scenario: str
    results: List[CheckResult]
    fingerprint: Dict[str, str]
    timings: Dict[str, float] = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> int:
        return sum(not r.passed for r in self.results)

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "passed": self.passed,
            "checks": [r.as_dict() for r in self.results],
            "sign_conventions": dict(self.fingerprint),
        }


def emit_json(report: Report) -> str:
    return json.dumps(report.as_dict(), indent=2, ensure_ascii=False) + "\n"


def emit_text(report: Report) -> str:
    lines = [f"scenario {report.scenario}"]
    for r in report.results:
        lines.append(f"  {'PASS' if r.passed else 'FAIL'} {r.label}")
        for k, v in r.values.items():
            lines.append(f"       {k} = {v}")
        if r.note:
            lines.append(f"       note: {r.note}")
    total = len(report.results)
    if report.passed:
        lines.append(f"result: PASS ({total} check{'s' if total != 1 else ''})")
    else:
        lines.append(f"result: FAIL ({report.failures} of {total} failed)")
    lines.append("sign conventions:")
    for k, v in report.fingerprint.items():
        lines.append(f"  {k}: {v}")
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str = "text") -> str:
    if fmt == "json":
        return emit_json(report)
    if fmt == "text":
        return emit_text(report)
    raise ValueError(f"unknown report format {fmt!r}")


def sign_fingerprint() -> Dict[str, str]:
    """The resolved sign conventions, evaluated on small reference charts.

    A change in any value means the bracket or bracket-prefactor conventions
    moved, which changes the meaning of every residual in a report.
    """
    from .calculus import coordinate_field
    from .linfty import LinftyStructure

    out = {}
    for n, deg in ((1, 0), (2, 1), (3, 1)):
        cot = shift_cotangent(make_chart([("q", deg)]), n)
        q, p = cot["q"], cot[momentum_name("q")]
        out[f"n={n} |q|={deg} {{q,p(q)}}"] = render_poly(canonical_bracket(q, p))
        out[f"n={n} |q|={deg} {{p(q),q}}"] = render_poly(canonical_bracket(p, q))
        out[f"n={n} |q|={deg} J(d/dq)"] = render_poly(j_map(coordinate_field(cot.base, "q"), cot))
    plane = shift_cotangent(make_chart([("x", 0), ("y", 0)]), 1)
    S = LinftyStructure(plane, plane["p(x)"] * plane["p(y)"])
    out["theta=p(x)*p(y), n=1: l^2(x,y)"] = render_poly(S.bracket(plane.base["x"], plane.base["y"]))
    out["l^k prefactor"] = "(-1)^(sum_i (k-i)(|f_i|-n))"
    out["relations use"] = "(-1)^(k(k-1)/2) l^k"
    return out
