"""Executable forcing model for constructive Cauchy reals: exact conditions,
forcing verdicts, completion constructions and refutation engines with
checkable witnesses."""

from .exact import EMPTY, REALS, OpenInterval, Q
from .line import CondLine
from .product import CondProd

__all__ = ["EMPTY", "REALS", "OpenInterval", "Q", "CondLine", "CondProd"]
