"""QED long-range interaction between an excited and a ground-state hydrogen atom.

The energy shift splits into a smooth Wick-rotated term W and an oscillatory
pole term Q = P - i Gamma / 2 from virtual states below the excited level.
All quantities are in atomic units (Hartree, Bohr radius) unless noted.
"""

__version__ = "0.1.0"

from .atomic import AveragingScheme, BoundState
from .coefficients import (
    CoefficientSet,
    coefficient_set,
    cp_tail_direct,
    cp_tail_mixing,
    crossover_radius,
    d6_direct,
    dbar6_closed_form,
    dbar6_numeric,
    m6_mixing,
    mbar6_numeric,
    parametric_envelope,
    pole_tail_direct,
    pole_tail_mixing,
)
from .interaction import PairSpec, pole_term, total_energy, wick_term, width_gamma
from .kernels import BACKEND
from .response import Settings, polarizability_tensor, static_scalar_polarizability

__all__ = [
    "AveragingScheme",
    "BACKEND",
    "BoundState",
    "CoefficientSet",
    "PairSpec",
    "Settings",
    "coefficient_set",
    "cp_tail_direct",
    "cp_tail_mixing",
    "crossover_radius",
    "d6_direct",
    "dbar6_closed_form",
    "dbar6_numeric",
    "m6_mixing",
    "mbar6_numeric",
    "parametric_envelope",
    "pole_tail_direct",
    "pole_tail_mixing",
    "pole_term",
    "polarizability_tensor",
    "static_scalar_polarizability",
    "total_energy",
    "wick_term",
    "width_gamma",
]
