"""Exact workbench for graph Ramsey dichotomies, cohesive sets and their reductions."""

from .epsets import UPSet, make, combine, SetOp, Extensional, Intensional, Delta02Desc, a_sigma, subset_star, nth_element, is_finite

__all__ = [
    "UPSet", "make", "combine", "SetOp", "Extensional", "Intensional", "Delta02Desc",
    "a_sigma", "subset_star", "nth_element", "is_finite",
]
