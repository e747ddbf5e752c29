import json

from ._tenspec import (
    CapabilityError,
    ConvergenceError,
    DomainError,
    ParseError,
    ShapeError,
    __version__,
    apply,
    collatz_wielandt,
    diagonal_equivalence,
    donsker_varadhan,
    donsker_varadhan_exp,
    entropy_objective,
    load_tensor,
    optimal_measure,
    perturbation_coefficient,
    random_tensor,
    rho_infinity,
    spectral_norm,
    spectral_radius,
    structure,
    symmetrize_tail,
    tropical,
)
from ._tenspec import audit_json


def audit(t, suite="all", seed=0):
    return json.loads(audit_json(t, suite, seed))


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
