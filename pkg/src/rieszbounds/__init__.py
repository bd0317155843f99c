"""Bounds on Riesz means of Dirichlet Laplacians and Schrödinger operators on
horn-shaped and spiny-urchin domains, with numerical cross-checks."""

__version__ = "0.1.0"

from .horn import HornRegion, horn_bound_thm32, horn_critical_thm34
from .report import BoundReport
from .riesz import EigenvalueSpectrum, IntervalPartition, riesz_mean
from .specfun import lcl_constant, lcl_value
from .urchin import UrchinSequence, urchin_lower_lemma37, urchin_upper_lemma36

__all__ = [
    "BoundReport",
    "EigenvalueSpectrum",
    "HornRegion",
    "IntervalPartition",
    "UrchinSequence",
    "__version__",
    "horn_bound_thm32",
    "horn_critical_thm34",
    "lcl_constant",
    "lcl_value",
    "riesz_mean",
    "urchin_lower_lemma37",
    "urchin_upper_lemma36",
]
