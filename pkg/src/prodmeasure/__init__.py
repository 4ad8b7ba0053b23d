"""Exact computation with countable product measures and their L_p spaces."""

from .errors import (InconclusiveConvergenceError, MeasureError, NotACoverError, OverlapError,
                     PreconditionError, ProblemFileError)
from .factor_space import FactorSpace, GeneratorSet, interval_set, atom_set
from .product_arith import ProductValue, classify_product, plus_product
from .rectangle_algebra import FactorSequence, Rectangle, vol

__version__ = "0.1.0"
