"""Why the cubic Dirac element of so(3) cannot be deformed along a straight line.

On the Weil-algebra chart (e_i of degree 1, h_i of degree 2, shift 3) the
element D = sum h_i e_i - 1/2 e1 e2 e3 is closed under l^1, so it is an
infinitesimal deformation.  Its Kuranishi class l^2(D, D) is the quadratic
Casimir (times two), which is not zero: the first-order deformation is
obstructed at second order.

    python3 demos/casimir_obstruction.py
"""
from nqlag import LinftyStructure, load_corpus, render_poly

sc = load_corpus("weil-casimir")
S = LinftyStructure(sc.cot, sc.theta)  # raises if {theta, theta} != 0
D = sc.element("D").value

print("theta          =", render_poly(sc.theta))
print("D              =", render_poly(D))
print("l^1(D)         =", render_poly(S.bracket(D)))
print("l^2(D, D)      =", render_poly(S.kuranishi(D)))
print("MC residual(D) =", render_poly(S.mc_residual(D)))
