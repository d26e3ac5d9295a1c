"""Dense complex linear algebra over small tensor-product spaces.

State vectors and operators are thin immutable wrappers around
``numpy`` arrays. Everything here is a pure function; nothing mutates
its inputs, so values can be shared freely across threads.

Register-permutation actions and the symmetric-subspace projector are
realized by explicit enumeration of the permutation group on the
register axes. The permutation-and-measure circuit they stand in for is
not simulated with its factorially large control register: projecting
the input onto the permutation-symmetric subspace gives exactly the
same outcome-"0" probability, at dimension d^N instead of N!·d^N.

Hermitian eigenvalues come from a cyclic Jacobi iteration with complex
plane rotations. At the matrix sizes this package touches (<= 1024)
Jacobi is simple, robust, and as accurate as the 1e-9 tolerances used
downstream require.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .errors import ParameterError, QpkeLabError, SimulationSizeError

DIM_GUARD = 1 << 20        # largest total Hilbert-space dimension simulated
PERM_GUARD = 8             # largest register count for S_N enumeration (8! = 40320)
NORM_TOL = 1e-12           # normalization tolerance for states flagged normalized
UNITARY_TOL = 1e-12
HERMITIAN_TOL = 1e-10

# Permutation index tables are cached only while the table fits comfortably
# in memory; beyond this the projector falls back to axis transposes.
_PERM_TABLE_CELL_LIMIT = 4_000_000


def _as_complex_vector(amplitudes) -> np.ndarray:
    arr = np.asarray(amplitudes, dtype=np.complex128)
    if arr.ndim != 1:
        raise ParameterError(f"state amplitudes must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise ParameterError("state dimension must be at least 1")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ParameterError("state amplitudes must be finite")
    return arr


@dataclass(frozen=True)
class StateVector:
    """A dim-dimensional complex vector of probability amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = _as_complex_vector(self.amplitudes)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        if not 0 <= index < dim:
            raise ParameterError(f"basis index {index} outside [0, {dim})")
        amplitudes = np.zeros(dim, dtype=np.complex128)
        amplitudes[index] = 1.0
        return cls(amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def squared_norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.squared_norm() - 1.0) <= tol

    def require_normalized(self, what: str = "state", tol: float = NORM_TOL) -> "StateVector":
        if not self.is_normalized(tol):
            raise ParameterError(f"{what} is not normalized: |amplitudes|^2 = {self.squared_norm()!r}")
        return self

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ParameterError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / n)


def overlap(a: StateVector, b: StateVector) -> complex:
    """Inner product <a|b> (conjugate-linear in the first argument)."""
    if a.dim != b.dim:
        raise ParameterError(f"overlap of states with dims {a.dim} and {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def _as_square_matrix(entries) -> np.ndarray:
    arr = np.asarray(entries, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ParameterError(f"operator entries must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ParameterError("operator dimension must be at least 1")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ParameterError("operator entries must be finite")
    return arr


@dataclass(frozen=True)
class Operator:
    """A dim x dim complex matrix."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _as_square_matrix(self.entries).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "Operator":
        return cls(np.eye(dim, dtype=np.complex128))

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        product = self.entries.conj().T @ self.entries
        return bool(np.max(np.abs(product - np.eye(self.dim))) <= tol)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= tol)

    def apply(self, v: StateVector) -> StateVector:
        if self.dim != v.dim:
            raise ParameterError(f"operator dim {self.dim} does not match state dim {v.dim}")
        return StateVector(self.entries @ v.amplitudes)

    def scaled(self, factor: complex) -> "Operator":
        return Operator(self.entries * factor)

    def minus(self, other: "Operator") -> "Operator":
        if self.dim != other.dim:
            raise ParameterError("operator dimensions differ")
        return Operator(self.entries - other.entries)


@dataclass(frozen=True)
class TensorLayout:
    """N registers of dimension d each, total dimension d**N."""

    num_registers: int
    register_dim: int

    def __post_init__(self):
        if self.num_registers < 1:
            raise ParameterError(f"register count must be >= 1, got {self.num_registers}")
        if self.register_dim < 2:
            raise ParameterError(f"register dimension must be >= 2, got {self.register_dim}")
        if self.register_dim ** self.num_registers > DIM_GUARD:
            raise SimulationSizeError(
                f"total dimension {self.register_dim}**{self.num_registers} exceeds the "
                f"simulation guard {DIM_GUARD}"
            )

    @property
    def dim(self) -> int:
        return self.register_dim ** self.num_registers


def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product a (x) b; the first factor is the most significant register."""
    if a.dim * b.dim > DIM_GUARD:
        raise SimulationSizeError(
            f"tensor product dimension {a.dim * b.dim} exceeds the simulation guard {DIM_GUARD}"
        )
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def tensor_power(v: StateVector, count: int) -> StateVector:
    """v (x) v (x) ... (x) v with `count` factors; count = 0 gives the scalar 1."""
    if count < 0:
        raise ParameterError(f"tensor power count must be >= 0, got {count}")
    out = StateVector(np.ones(1, dtype=np.complex128))
    for _ in range(count):
        out = tensor_product(out, v)
    return out


def _check_permutation(perm: Sequence[int], n: int) -> tuple[int, ...]:
    p = tuple(int(x) for x in perm)
    if sorted(p) != list(range(n)):
        raise ParameterError(f"{p} is not a permutation of 0..{n - 1}")
    return p


def permute_registers(v: StateVector, layout: TensorLayout, perm: Sequence[int]) -> StateVector:
    """Rearrange the register axes of v according to perm.

    The output amplitude at multi-index (i_perm(0), ..., i_perm(N-1))
    equals the input amplitude at (i_0, ..., i_N-1); applying perm and
    then its inverse is the identity.
    """
    if v.dim != layout.dim:
        raise ParameterError(
            f"state dim {v.dim} does not match layout dim {layout.dim} "
            f"({layout.register_dim}**{layout.num_registers})"
        )
    n, d = layout.num_registers, layout.register_dim
    p = _check_permutation(perm, n)
    tensor = v.amplitudes.reshape((d,) * n)
    return StateVector(np.ascontiguousarray(tensor.transpose(p)).reshape(-1))


@lru_cache(maxsize=16)
def _permutation_group(n: int) -> tuple[tuple[int, ...], ...]:
    # Lexicographic enumeration of S_n (itertools guarantees the order).
    return tuple(permutations(range(n)))


@lru_cache(maxsize=8)
def _permutation_index_table(d: int, n: int) -> np.ndarray | None:
    """Flat-index image of every permutation in S_n, or None when too large.

    Row k holds, for permutation k in lexicographic order, the flat input
    index feeding each flat output index, so permuting a vector is a
    single fancy-indexing gather.
    """
    group = _permutation_group(n)
    dim = d ** n
    if len(group) * dim > _PERM_TABLE_CELL_LIMIT:
        return None
    digits = np.indices((d,) * n).reshape(n, dim)  # digits[t, j] = register-t index of j
    weights = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    table = np.empty((len(group), dim), dtype=np.intp)
    for k, perm in enumerate(group):
        # output index j corresponds to input index with digit t taken from
        # output digit position inverse_perm(t); equivalently gather below.
        inverse = np.argsort(np.array(perm))
        table[k] = weights @ digits[list(inverse)]
    return table


def symmetric_projector_apply(v: StateVector, layout: TensorLayout) -> StateVector:
    """Project v onto the permutation-symmetric subspace of the registers.

    Returns the average of sigma(v) over all N! register permutations
    sigma. Idempotent, and its output is invariant under every register
    permutation.
    """
    n = layout.num_registers
    if n > PERM_GUARD:
        raise SimulationSizeError(
            f"symmetric projector over {n} registers exceeds the permutation guard {PERM_GUARD}"
        )
    if v.dim != layout.dim:
        raise ParameterError(f"state dim {v.dim} does not match layout dim {layout.dim}")
    if n == 1:
        return v
    d = layout.register_dim
    table = _permutation_index_table(d, n)
    flat = v.amplitudes
    if table is not None:
        acc = flat[table].sum(axis=0)
    else:
        tensor = flat.reshape((d,) * n)
        acc = np.zeros_like(tensor)
        for perm in _permutation_group(n):
            acc += tensor.transpose(perm)
        acc = acc.reshape(-1)
    return StateVector(acc / math.factorial(n))


def _require_hermitian(m: Operator, tol: float = HERMITIAN_TOL) -> np.ndarray:
    if not m.is_hermitian(tol):
        worst = float(np.max(np.abs(m.entries - m.entries.conj().T)))
        raise ParameterError(f"matrix is not Hermitian within {tol} (max asymmetry {worst:.3e})")
    # Fold residual asymmetry so the iteration works on an exactly Hermitian matrix.
    return (m.entries + m.entries.conj().T) / 2.0


def _off_diagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eig(m: Operator, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Cyclic Jacobi iteration with complex plane rotations: each rotation
    first absorbs the phase of the targeted off-diagonal entry, then
    zeroes it with the classic symmetric 2x2 rotation. Sweeps repeat
    until the off-diagonal Frobenius mass falls below ``tol`` (scaled by
    the matrix norm when that norm exceeds 1).

    Returns (w, V) with w[i] the i-th eigenvalue and V[:, i] its
    eigenvector, so V @ diag(w) @ V^dagger reconstructs the input.
    """
    a = _require_hermitian(m)
    dim = a.shape[0]
    v = np.eye(dim, dtype=np.complex128)
    if dim == 1:
        return np.array([a[0, 0].real]), v

    a = a.copy()
    scale = max(1.0, float(np.linalg.norm(a)))
    threshold = tol * scale
    skip_below = threshold / (2.0 * dim * dim)

    for _ in range(max_sweeps):
        if _off_diagonal_norm(a) <= threshold:
            break
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                apq = a[p, q]
                r = abs(apq)
                if r <= skip_below:
                    continue
                delta = apq.conjugate() / r          # unit phase making a[p,q] real
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c

                # Columns: A <- A J with J = [[c, s], [-delta*s, delta*c]] on (p, q).
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - (delta * s) * col_q
                a[:, q] = s * col_p + (delta * c) * col_q
                # Rows: A <- J^dagger A.
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - np.conj(delta) * s * row_q
                a[q, :] = s * row_p + np.conj(delta) * c * row_q
                # Exact by construction; clear roundoff.
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - (delta * s) * vec_q
                v[:, q] = s * vec_p + (delta * c) * vec_q
    else:
        if _off_diagonal_norm(a) > threshold:
            raise QpkeLabError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps "
                f"(off-diagonal mass {_off_diagonal_norm(a):.3e})"
            )

    eigenvalues = np.diag(a).real
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def hermitian_eigenvalues(m: Operator) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending."""
    w, _ = hermitian_eig(m)
    return w


def trace_norm(m: Operator) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eigenvalues(m))))


def outer_product(v: StateVector) -> Operator:
    """Rank-one projector |v><v|."""
    return Operator(np.outer(v.amplitudes, v.amplitudes.conj()))


def kron_all(vectors: Iterable[np.ndarray]) -> np.ndarray:
    """Kronecker product of raw vectors, left factor most significant."""
    out = np.ones(1, dtype=np.complex128)
    for vec in vectors:
        out = np.kron(out, vec)
        if out.size > DIM_GUARD:
            raise SimulationSizeError(
                f"tensor chain dimension {out.size} exceeds the simulation guard {DIM_GUARD}"
            )
    return out
