"""qpkelab: a simulation lab for deterministic quantum-public-key bit
encryption, the symmetry-test forward-search attack against it, and the
parity-encoded randomized countermeasure.

The package splits into three layers:

* simulation substrate: :mod:`qpkelab.linalg`, :mod:`qpkelab.rng`
* scheme and adversary models: :mod:`qpkelab.keyfamily`,
  :mod:`qpkelab.symtest`, :mod:`qpkelab.scheme`, :mod:`qpkelab.adversary`
* analysis and validation: :mod:`qpkelab.analysis`, :mod:`qpkelab.oracles`,
  :mod:`qpkelab.report`, :mod:`qpkelab.figures`, :mod:`qpkelab.cli`
"""

__version__ = "0.1.0"

from .errors import (
    CorruptedCiphertextError,
    FamilyInvalidError,
    ParameterError,
    QpkeLabError,
    ResourceError,
    SimulationSizeError,
    UnsupportedModeError,
)

__all__ = [
    "__version__",
    "QpkeLabError",
    "ParameterError",
    "ResourceError",
    "SimulationSizeError",
    "FamilyInvalidError",
    "CorruptedCiphertextError",
    "UnsupportedModeError",
]
