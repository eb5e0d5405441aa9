"""Exact arithmetic: field towers, ordered value groups, sparse polynomials."""
from .fields import FieldTower, ModP, ReducibleError, TowerElement, tower_extend
from .poly import NotDivisibleError, Poly, parse_poly, parse_univariate
from .values import (LexOrder, QuadraticWeightOrder, RationalOrder, SubgroupView, Value,
                     module_generators, semigroup_members)

__all__ = [
    "FieldTower", "ModP", "ReducibleError", "TowerElement", "tower_extend",
    "NotDivisibleError", "Poly", "parse_poly", "parse_univariate",
    "LexOrder", "QuadraticWeightOrder", "RationalOrder", "SubgroupView", "Value",
    "module_generators", "semigroup_members",
]
