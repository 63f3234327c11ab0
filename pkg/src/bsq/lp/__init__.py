"""Littlewood-Paley operators on the unit disc and for the 1-d heat flow."""

from .disc import (
    CircleWeight,
    DiscGrid,
    TrigPoly,
    g_sq_disc,
    gstar_disc,
    gstar_sq_disc,
    lusin_area_sq_disc,
    poisson_a2_disc,
    poisson_ar_disc,
    poisson_grad_sq,
    verify_thm_disc,
)
from .heat import (
    HeatGrid,
    G_heat,
    Gstar_heat,
    PA_alpha_heat,
    compare_a2_classical_heat,
    heat_a2,
    heat_extension,
    heat_grad,
    verify_thm_heat,
)
from .quadrule import gauss_legendre01, gauss_log_rule

__all__ = [
    "CircleWeight",
    "DiscGrid",
    "TrigPoly",
    "g_sq_disc",
    "gstar_disc",
    "gstar_sq_disc",
    "lusin_area_sq_disc",
    "poisson_a2_disc",
    "poisson_ar_disc",
    "poisson_grad_sq",
    "verify_thm_disc",
    "HeatGrid",
    "G_heat",
    "Gstar_heat",
    "PA_alpha_heat",
    "compare_a2_classical_heat",
    "heat_a2",
    "heat_extension",
    "heat_grad",
    "verify_thm_heat",
    "gauss_legendre01",
    "gauss_log_rule",
]
