"""Exact level distributions of regions of real hyperplane arrangements."""

from .arrangement import Arrangement, Flat, Hyperplane, intersection_poset, parse_arrangement
from .posets import IntPolynomial, RankedPoset, char_poly, parse_poset
from .regions import enumerate_regions, level_histogram, levels_via_formula
from .semilattice import GeometricSemilattice, cone, level_distribution

__all__ = [
    "Arrangement",
    "Flat",
    "GeometricSemilattice",
    "Hyperplane",
    "IntPolynomial",
    "RankedPoset",
    "char_poly",
    "cone",
    "enumerate_regions",
    "intersection_poset",
    "level_distribution",
    "level_histogram",
    "levels_via_formula",
    "parse_arrangement",
    "parse_poset",
]
