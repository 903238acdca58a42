"""Worked case studies, each producing a structured report."""
from __future__ import annotations

from .common import CaseReport, parse_specfile
from .em import EMSpec, em_poynting
from .gasdyn import FlowSpec, gasdyn_relation
from .hamiltonian import HamiltonianSpec, hamiltonian_check
from .maxwell import MaxwellSpec, maxwell_check
from .thermo import ThermoSpec, thermo_ideal_gas

CASES = {
    "thermo": (ThermoSpec, thermo_ideal_gas),
    "gas": (FlowSpec, gasdyn_relation),
    "em": (EMSpec, em_poynting),
    "maxwell": (MaxwellSpec, maxwell_check),
    "hamiltonian": (HamiltonianSpec, hamiltonian_check),
}


def run_case(name: str, text: str) -> CaseReport:
    spec_cls, fn = CASES[name]
    return fn(spec_cls.from_spec(parse_specfile(text)))


__all__ = [
    "CASES", "CaseReport", "EMSpec", "FlowSpec", "HamiltonianSpec", "MaxwellSpec", "ThermoSpec",
    "em_poynting", "gasdyn_relation", "hamiltonian_check", "maxwell_check", "parse_specfile", "run_case",
    "thermo_ideal_gas",
]
