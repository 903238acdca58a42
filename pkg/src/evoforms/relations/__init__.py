"""Relations d(psi) = omega: classification, integrability, loci, descent."""
from __future__ import annotations

from .descent import DescentReport, DescentStep, degree_descent
from .integrability import FrobeniusResult, find_integrating_factor, frobenius_test
from .loci import (
    Constraint,
    IntegratingDirection,
    Pseudostructure,
    degenerate_loci,
    factor_expr,
    integrating_direction,
    restrict_relation,
)
from .relation import (
    IDENTICAL,
    NONIDENTICAL,
    ComponentReport,
    EvolutionaryRelation,
    RelationReport,
    attribute_terms,
    build_relation,
    classify_relation,
    fresh_unknown,
)
from .structure import LABELS, StructureClass, classify_structure

__all__ = [
    "DescentReport", "DescentStep", "degree_descent", "FrobeniusResult", "find_integrating_factor",
    "frobenius_test", "Constraint", "IntegratingDirection", "Pseudostructure", "degenerate_loci", "factor_expr",
    "integrating_direction", "restrict_relation", "IDENTICAL", "NONIDENTICAL", "ComponentReport",
    "EvolutionaryRelation", "RelationReport", "attribute_terms", "build_relation", "classify_relation",
    "fresh_unknown", "LABELS", "StructureClass", "classify_structure",
]
