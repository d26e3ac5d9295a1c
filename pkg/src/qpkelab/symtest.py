"""The (1, N-1)-copy equality test and its outcome statistics.

Given one register holding |xi> and N-1 registers holding copies of
|chi>, projecting onto the symmetric subspace answers "0" with
probability

    q(N, lam) = (1 + (N - 1) * lam**2) / N,    lam = |<xi|chi>|,

which is 1 exactly when the states are equal: the test never reports
"different" for equal states, and wrongly reports "equal" for
different states with probability q. The projector is applied
directly; no ancilla-register circuit is materialized because the
outcome-"0" probability reduces to the squared norm of the
symmetrized input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import ParameterError, SimulationSizeError
from .linalg import PERM_GUARD, StateVector, TensorLayout, overlap, symmetric_projector_apply, tensor_power, tensor_product

# squared norms within this of 1 snap to exactly 1, preserving the
# one-sided error guarantee under float noise
_P_ONE_SNAP = 1e-12

_COPY_CONSISTENCY_TOL = 1e-10

Outcome = Literal["zero", "nonzero"]
Verdict = Literal["equal", "different"]


@dataclass(frozen=True)
class SymmetryTestSpec:
    num_registers: int
    register_dim: int

    def __post_init__(self) -> None:
        if self.num_registers < 1:
            raise ParameterError(f"need at least one register, got {self.num_registers}")
        if self.register_dim < 2:
            raise ParameterError(f"register_dim must be >= 2, got {self.register_dim}")
        # brute-force paths enumerate N! permutations
        if self.num_registers > PERM_GUARD:
            raise SimulationSizeError(
                f"num_registers {self.num_registers} exceeds permutation guard {PERM_GUARD}"
            )


@dataclass(frozen=True)
class SymmetryTestOutcome:
    outcome: Outcome
    p_zero: float

    def __post_init__(self) -> None:
        if self.outcome not in ("zero", "nonzero"):
            raise ParameterError(f"unknown outcome {self.outcome!r}")
        if not 0.0 <= self.p_zero <= 1.0:
            raise ParameterError(f"p_zero must lie in [0,1], got {self.p_zero}")


def q_closed_form(num_registers: int, lam: float) -> float:
    """(1 + (N-1)*lam^2) / N: outcome-"0" probability at overlap lam."""
    n = num_registers
    if n < 1:
        raise ParameterError(f"need at least one register, got {n}")
    if not 0.0 <= lam <= 1.0:
        raise ParameterError(f"overlap magnitude must lie in [0,1], got {lam}")
    return (1.0 + (n - 1) * lam * lam) / n


def p_zero_exact(xi: StateVector, chi: StateVector, num_registers: int) -> float:
    """Outcome-"0" probability from the actual states.

    Builds |xi> (x) |chi>^(N-1), applies the symmetric projector, and
    returns the squared norm. Agrees with q_closed_form(N, |<xi|chi>|)
    to 1e-10; the property suite pins that equivalence down.
    """
    if xi.dim != chi.dim:
        raise ParameterError(f"register dimensions differ: {xi.dim} vs {chi.dim}")
    spec = SymmetryTestSpec(num_registers, xi.dim)
    xi.require_normalized("xi")
    chi.require_normalized("chi")
    if spec.num_registers == 1:
        return 1.0
    layout = TensorLayout(spec.num_registers, spec.register_dim)
    joint = tensor_product(xi, tensor_power(chi, spec.num_registers - 1))
    p = symmetric_projector_apply(joint, layout).squared_norm()
    if p > 1.0 - _P_ONE_SNAP:
        return 1.0
    return max(p, 0.0)


def run_symmetry_test(
    xi: StateVector,
    chi: StateVector,
    num_registers: int,
    rng: np.random.Generator,
) -> SymmetryTestOutcome:
    """Sample one outcome.

    Draws a uniform variate against the exactly computed p_zero rather
    than simulating measurement collapse; every use here is terminal,
    so only the outcome statistics matter. p_zero = 1 can never yield
    "nonzero" because the variate is drawn from [0, 1).
    """
    p = p_zero_exact(xi, chi, num_registers)
    outcome: Outcome = "zero" if rng.random() < p else "nonzero"
    return SymmetryTestOutcome(outcome, p)


def _checked_copies(chi_copies: Sequence[StateVector]) -> None:
    first = chi_copies[0]
    for i, c in enumerate(chi_copies[1:], start=1):
        if c.dim != first.dim or abs(overlap(first, c)) < 1.0 - _COPY_CONSISTENCY_TOL:
            raise ParameterError(f"copy {i} differs from copy 0: copies must be identical states")


def distinguish_with_outcome(
    xi: StateVector,
    chi_copies: Sequence[StateVector],
    rng: np.random.Generator,
) -> tuple[Verdict, SymmetryTestOutcome]:
    """distinguish plus the raw test outcome, for per-trial records."""
    if not chi_copies:
        return "equal", SymmetryTestOutcome("zero", 1.0)
    _checked_copies(chi_copies)
    result = run_symmetry_test(xi, chi_copies[0], len(chi_copies) + 1, rng)
    return ("equal" if result.outcome == "zero" else "different"), result


def distinguish(
    xi: StateVector,
    chi_copies: Sequence[StateVector],
    rng: np.random.Generator,
) -> Verdict:
    """Equal-or-different verdict for |xi> against N-1 reference copies.

    Verdict "equal" iff the test answers "0". One-sided: equal states
    always come back "equal"; states at overlap lam < 1 come back
    "equal" (wrongly) with probability q(N, lam). With no copies at all
    the test is vacuous and every state is judged "equal".
    """
    return distinguish_with_outcome(xi, chi_copies, rng)[0]
