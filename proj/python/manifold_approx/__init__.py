"""Localized spherical-polynomial kernels for approximation on unknown manifolds."""

from ._core import *  # noqa: F401,F403
from ._core import (
    DegenerateDenominatorError,
    HarmonicBasis,
    LabeledDataset,
    LocalizedKernel,
    NumericalError,
    UltrasphericalFamily,
)

__version__ = "0.1.0"
