"""Exception taxonomy shared by all qpkelab modules.

The CLI maps these onto exit codes: parameter/usage problems exit 2,
simulation-size guard trips exit 3, I/O failures exit 4.
"""


class QpkeLabError(Exception):
    """Base class for all qpkelab errors."""


class ParameterError(QpkeLabError, ValueError):
    """A value is outside its documented domain (bad dimension, bad bit,
    mismatched lengths, violated precondition)."""


class ResourceError(QpkeLabError):
    """The requested computation exceeds a configured resource limit."""


class SimulationSizeError(ResourceError):
    """A Hilbert-space or permutation-enumeration guard was exceeded."""


class FamilyInvalidError(QpkeLabError):
    """A key family violates its own overlap constraint (duplicate or
    near-duplicate states, or an unsatisfiable packing)."""


class CorruptedCiphertextError(QpkeLabError):
    """A ciphertext register matches none of the expected encryptions."""


class UnsupportedModeError(QpkeLabError):
    """An operation was invoked in a mode its contract excludes
    (e.g. decryption of a non-orthogonal scheme)."""
