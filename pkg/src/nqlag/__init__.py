"""Exact symbolic engine for deformations of Lagrangian NQ-submanifolds.

Polynomials live on graded charts (:mod:`nqlag.graded`), the shifted
cotangent chart ``T*[n]L`` carries the canonical bracket
(:mod:`nqlag.symplectic`), and a Hamiltonian ``theta`` with
``{theta, theta} = 0`` induces curved L-infinity brackets on base functions
(:mod:`nqlag.linfty`) whose Maurer-Cartan elements are the deformations.
"""
from .calculus import (Derivation, OneForm, apply_derivation, contract, coordinate_field, euler_field,
                       exterior_derivative, is_homological, lie_bracket, one_form_closed, partial_derivative,
                       right_derivative)
from .graded import (INHOMOGENEOUS, Chart, Coordinate, GradedError, GradedPoly, degree_of, make_chart,
                     multiply, substitute)
from .linfty import (ArityCapError, ExtElement, FormalElement, LinftyStructure, MasterEquationError,
                     SeriesError, VAlgebra, canonical_valgebra, decalage_sign, exp_flow, extended_brackets,
                     gauge_rhs, kuranishi, linfty_bracket, linfty_identity_residual, mc_extended_residual,
                     mc_formal_residual, mc_residual, voronov_bracket)
from .render import render_poly
from .scenario import Scenario, ScenarioError, corpus_names, load_corpus, parse_scenario, render_scenario
from .symplectic import (CotangentChart, Multivector, canonical_bracket, graph_ideal_closed,
                         graph_is_lagrangian, graph_pullback, hamiltonian_vf, j_map, lift, schouten_bracket,
                         shift_cotangent, zero_section_pullback)

__version__ = "0.1.0"

__all__ = [
    "apply_derivation", "ArityCapError", "canonical_bracket", "canonical_valgebra", "Chart",
    "contract", "Coordinate", "coordinate_field", "corpus_names", "CotangentChart", "decalage_sign",
    "degree_of", "Derivation", "euler_field", "exp_flow", "ExtElement", "extended_brackets",
    "exterior_derivative", "FormalElement", "gauge_rhs", "GradedError", "GradedPoly",
    "graph_ideal_closed", "graph_is_lagrangian", "graph_pullback", "hamiltonian_vf",
    "INHOMOGENEOUS", "is_homological", "j_map", "kuranishi", "lie_bracket", "lift",
    "linfty_bracket", "linfty_identity_residual", "LinftyStructure", "load_corpus", "make_chart",
    "MasterEquationError", "mc_extended_residual", "mc_formal_residual", "mc_residual", "multiply",
    "Multivector", "one_form_closed", "OneForm", "parse_scenario", "partial_derivative",
    "render_poly", "render_scenario", "right_derivative", "Scenario", "ScenarioError",
    "schouten_bracket", "SeriesError", "shift_cotangent", "substitute", "VAlgebra",
    "voronov_bracket", "zero_section_pullback",
]

