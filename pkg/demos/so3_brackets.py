"""Derived brackets of the Chevalley-Eilenberg Hamiltonian of so(3).

With u, v, w of degree 1 and shift 2 the only nonzero bracket is l^1, the
Chevalley-Eilenberg differential.  Perturbing a vanishing structure constant
breaks the master equation, and the defect shows which Jacobi term fails.

    python3 demos/so3_brackets.py
"""
from nqlag import LinftyStructure, MasterEquationError, load_corpus, render_poly

sc = load_corpus("so3-courant")
S = LinftyStructure(sc.cot, sc.theta)
u, v, w = sc.base.gens()

for g in (u, v, w, u * v):
    print(f"l^1({render_poly(g)}) =", render_poly(S.bracket(g)))
print("l^2(u, v) =", render_poly(S.bracket(u, v)))

f = sc.element("g").value
print("MC residual of", render_poly(f), "=", render_poly(S.mc_residual(f)))

cot = sc.cot
try:
    LinftyStructure(cot, sc.theta + cot["u"] * cot["v"] * cot["p(u)"])
except MasterEquationError as err:
    print("perturbed theta rejected, defect =", render_poly(err.defect))
