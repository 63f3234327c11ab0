"""Numerical verification toolkit for weighted L2 square-function bounds.

Layers:

  dyadic      Haar analysis, projections, the dyadic square function
  weights     A_p characteristics, hyperbolic bands, segment geometry
  bellman     the three special functions and their sampling certificates
  certify     the dyadic induction engine and end-to-end inequalities
  stochastic  Monte Carlo checks for the continuous-martingale analogues
  lp          Littlewood-Paley operators on the disc and for the heat flow
  cli         seeded orchestration with JSON reports
"""

from . import bellman, certify, dyadic, lp, stochastic, weights
from .dyadic import GridFunction
from .weights import WeightFunction

__version__ = "0.1.0"

__all__ = [
    "bellman",
    "certify",
    "dyadic",
    "lp",
    "stochastic",
    "weights",
    "GridFunction",
    "WeightFunction",
    "__version__",
]
