"""The (p, k, n) structure table."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError

LABELS = {0: "strong", 1: "weak", 2: "electromagnetic", 3: "gravitation"}


@dataclass(frozen=True)
class StructureClass:
    p: int
    k: int
    n: int
    interaction: str
    pseudostructure_dim: int
    metric_dim: int

    def as_dict(self) -> dict:
        return {"interaction": self.interaction, "pseudostructure_dim": self.pseudostructure_dim,
                "metric_dim": self.metric_dim}


def classify_structure(p: int, k: int, n: int) -> StructureClass:
    """p interacting laws, k the degree of the realized closed form, n the space dimension."""
    for name, v in (("p", p), ("k", k), ("n", n)):
        if isinstance(v, bool) or not isinstance(v, int):
            raise InputError(f"{name} must be an integer")
    if not 0 <= k <= p <= 3:
        raise InputError(f"need 0 <= k <= p <= 3, got p={p}, k={k}")
    if n < 0:
        raise InputError(f"need n >= 0, got n={n}")
    dim = n + 1 - k
    if dim < 0:
        raise InputError(f"pseudostructure dimension n+1-k = {dim} is negative")
    return StructureClass(p, k, n, LABELS[k], dim, n + 1)
