"""Kicked-rotor ratchet: closed-form current, classical and quantum ensembles."""

__version__ = "0.1.0"

from .units import (  # noqa: E402
    DimensionlessParams,
    LabParams,
    ParameterError,
    cesium_lab,
    to_dimensionless,
)
from .special import bessel_j, bessel_j_orders  # noqa: E402
from .analytic import current, max_current, predict  # noqa: E402
from .classical import evolve_ensemble, sample_initial  # noqa: E402
from .quantum import QuantumRunSpec, run_quantum  # noqa: E402

__all__ = [
    "__version__",
    "DimensionlessParams",
    "LabParams",
    "ParameterError",
    "cesium_lab",
    "to_dimensionless",
    "bessel_j",
    "bessel_j_orders",
    "current",
    "max_current",
    "predict",
    "sample_initial",
    "evolve_ensemble",
    "QuantumRunSpec",
    "run_quantum",
]
