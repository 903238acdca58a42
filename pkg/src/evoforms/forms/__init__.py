"""Exterior and evolutionary form algebra."""
from __future__ import annotations

from .commutator import Commutator, commutator_with_connection
from .core import (
    Chart,
    DForm,
    ParamMap,
    VectorField,
    basis_string,
    d,
    determinant,
    exterior_derivative,
    form_string,
    forms_equal,
    interior_product,
    perm_sign,
    pullback,
    scale_form,
    substitute_form,
    wedge,
)
from .hodge import hodge_star
from .homotopy import ClosureVerdict, closure_classify, integrate_unit_interval, potential
from .parse import parse_form

__all__ = [
    "Commutator", "commutator_with_connection", "Chart", "DForm", "ParamMap", "VectorField", "basis_string",
    "d", "determinant", "exterior_derivative", "form_string", "forms_equal", "interior_product", "perm_sign",
    "pullback", "scale_form", "substitute_form", "wedge", "hodge_star", "ClosureVerdict", "closure_classify",
    "integrate_unit_interval", "potential", "parse_form",
]
