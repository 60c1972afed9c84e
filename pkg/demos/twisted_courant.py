"""Deformations of the zero section in a twisted standard Courant algebroid.

theta is obtained from the pairing p(x_i) p(y_i) by flowing along the cubic
alpha = x1 x2 y3 - x1 x3 y2 + x2 x3 y1, so it satisfies the master equation
by construction.  H = x1 x2 x3 and K = y1 y2 y3 each solve the Maurer-Cartan
equation while their sum does not.  The last part deforms theta and the
Lagrangian together and checks both components of the extended equation.

    python3 demos/twisted_courant.py
"""
from nqlag import LinftyStructure, load_corpus, render_poly
from nqlag.linfty import FormalElement

sc = load_corpus("twisted-courant")
S = LinftyStructure(sc.cot, sc.theta)
H, K, HK = (sc.element(name).value for name in ("H", "K", "HK"))

print(f"strict: {S.strict}, top arity: {S.top_arity}")
for name, f in (("H", H), ("K", K), ("H+K", HK)):
    print(f"MC residual of {name:3s} =", render_poly(S.mc_residual(f)))

print("l^1(H+K)      =", render_poly(S.bracket(HK)))
print("Kuranishi H+K =", render_poly(S.kuranishi(HK)))

# a nonlinear formal curve through H stays Maurer-Cartan at every order
curve = FormalElement.from_curve([H, H.scale(2), H.scale(-1), H.chart.zero(), H])
print("formal residuals:", [render_poly(r) for r in S.formal_residual(curve)])

g, tt = sc.element("g").value, sc.element("tt").value
ambient, base = S.mc_extended_residual(g, tt)
print("extended residual (ambient, base):", render_poly(ambient), render_poly(base))
