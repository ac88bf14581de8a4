"""Kernel least mean absolute third (KLMAT) adaptive filters and the
benchmark harness around them."""

from .analysis import gradient_oracle, l_lower_bound, mse_db, step_size_bound, testing_mse_curve
from .errors import (
    ConfigError,
    ContractError,
    DivergenceError,
    IngestionError,
    KlmatError,
    NumericalError,
)
from .filters import (
    KLMAT,
    KLMS,
    LMAT,
    FixedStepSize,
    LorentzianStepSize,
    NcParams,
    nc_gate,
    vss_step,
)
from .kernel import KernelParams, gaussian_kernel, gram_matrix, lambda_max
from .signals import MgParams, Sample, Series, embed, load_sunspot, mackey_glass, split

__version__ = "0.1.0"

__all__ = [
    "KLMAT", "KLMS", "LMAT", "FixedStepSize", "LorentzianStepSize", "NcParams", "nc_gate", "vss_step",
    "KernelParams", "gaussian_kernel", "gram_matrix", "lambda_max",
    "MgParams", "Sample", "Series", "embed", "load_sunspot", "mackey_glass", "split",
    "gradient_oracle", "l_lower_bound", "mse_db", "step_size_bound", "testing_mse_curve",
    "ConfigError", "ContractError", "DivergenceError", "IngestionError", "KlmatError", "NumericalError",
]
