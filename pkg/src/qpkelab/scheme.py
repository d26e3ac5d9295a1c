"""Deterministic bit encryption and the parity-encoded randomization on top.

The base scheme applies one of two public unitaries to a public-key
state: ciphertext = U_b |Psi_k>. The randomized scheme hides one
plaintext bit b in the weight parity of a uniformly random codeword w
of length s, encrypting each codeword bit under its own independent
key. The base scheme is used purely as a black box: the compound
routines touch it only through encrypt_bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    CorruptedCiphertextError,
    ParameterError,
    UnsupportedModeError,
)
from .keyfamily import (
    ENUMERATION_GUARD,
    KeyFamilySpec,
    PrivateKey,
    PublicKeyState,
    all_private_keys,
    public_key_state,
)
from .linalg import Operator, StateVector, overlap

_ORTHO_TOL = 1e-12
# decryption accepts a reference state when the overlap magnitude is
# this close to 1
_DECRYPT_TOL = 1e-10
# orthogonality of the flagged spec is checked over at most this many
# keys (all of them when the family is small enough)
_ORTHO_SCAN_LIMIT = ENUMERATION_GUARD


def rotation_operator(angle: float) -> Operator:
    """Real rotation of the plane by the given angle."""
    c, s = math.cos(angle), math.sin(angle)
    return Operator(np.array([[c, -s], [s, c]], dtype=np.complex128))


@dataclass(frozen=True)
class SchemeSpec:
    """Key family plus the two public encryption unitaries.

    The orthogonal flag asserts |<U0 Psi_k | U1 Psi_k>| <= 1e-12 for
    every key; construction verifies it over all keys when the family
    is enumerable and over an evenly strided sample of 4096 keys
    otherwise. Perfect decryption and the error analysis at lam = 0
    both rest on this flag.
    """

    family: KeyFamilySpec
    u0: Operator
    u1: Operator
    orthogonal: bool

    def __post_init__(self) -> None:
        d = self.family.register_dim
        for name, u in (("u0", self.u0), ("u1", self.u1)):
            if u.dim != d:
                raise ParameterError(f"{name} dimension {u.dim} does not match family dim {d}")
            if not u.is_unitary():
                raise ParameterError(f"{name} is not unitary within 1e-12")
        if self.orthogonal:
            worst_key, worst = self._scan_orthogonality()
            if worst > _ORTHO_TOL:
                raise ParameterError(
                    f"orthogonal flag violated: key {worst_key} has ciphertext "
                    f"overlap {worst:.3e}"
                )

    def _scan_orthogonality(self) -> tuple[str, float]:
        n = self.family.key_bits
        if self.family.num_keys <= _ORTHO_SCAN_LIMIT:
            keys = list(all_private_keys(self.family))
        else:
            stride = self.family.num_keys // _ORTHO_SCAN_LIMIT
            keys = [PrivateKey.from_int(v, n) for v in range(0, self.family.num_keys, stride)]
        worst_key, worst = "", -1.0
        for key in keys:
            value = ciphertext_overlap(self, public_key_state(self.family, key))
            if value > worst:
                worst_key, worst = key.bits, value
        return worst_key, worst


def ciphertext_overlap(spec: SchemeSpec, pk: PublicKeyState) -> float:
    """|<U0 psi | U1 psi>| for the given public-key state."""
    return abs(overlap(spec.u0.apply(pk.state), spec.u1.apply(pk.state)))


def orthogonal_scheme(family: KeyFamilySpec) -> SchemeSpec:
    """Default scheme: U0 = identity, U1 = rotation by pi/2.

    The quarter-turn maps every real-amplitude qubit state to an
    orthogonal one, so the rotation family gets exactly orthogonal
    ciphertext pairs.
    """
    if family.register_dim != 2:
        raise ParameterError("built-in schemes are single-qubit (register_dim 2)")
    return SchemeSpec(family, Operator.identity(2), rotation_operator(math.pi / 2), True)


def tilted_scheme(family: KeyFamilySpec, angle: float) -> SchemeSpec:
    """U1 = rotation by the given angle instead of the quarter turn.

    Yields ciphertext overlap |cos(angle)| > 0 for the rotation family,
    for exercising the equality test away from lam = 0. Not flagged
    orthogonal, so decryption refuses it.
    """
    if family.register_dim != 2:
        raise ParameterError("built-in schemes are single-qubit (register_dim 2)")
    if not 0.0 < angle < math.pi / 2:
        raise ParameterError(f"tilt angle must lie in (0, pi/2), got {angle}")
    return SchemeSpec(family, Operator.identity(2), rotation_operator(angle), False)


@dataclass(frozen=True)
class Ciphertext:
    """One encrypted register. Carries no plaintext or key metadata."""

    state: StateVector

    def __post_init__(self) -> None:
        self.state.require_normalized("ciphertext state")

    @property
    def dim(self) -> int:
        return self.state.dim


@dataclass(frozen=True)
class Codeword:
    bits: str

    def __post_init__(self) -> None:
        if not self.bits or any(c not in "01" for c in self.bits):
            raise ParameterError(f"codeword must be a nonempty binary string, got {self.bits!r}")

    @property
    def length(self) -> int:
        return len(self.bits)

    @property
    def weight(self) -> int:
        return self.bits.count("1")

    @property
    def parity(self) -> int:
        return self.weight % 2


@dataclass(frozen=True)
class CompoundCiphertext:
    parts: tuple[Ciphertext, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ParameterError("compound ciphertext needs at least one part")
        d = self.parts[0].dim
        if any(p.dim != d for p in self.parts):
            raise ParameterError("compound ciphertext parts must share one dimension")

    @property
    def length(self) -> int:
        return len(self.parts)


def encrypt_bit(spec: SchemeSpec, pk: PublicKeyState, b: int) -> Ciphertext:
    """ciphertext = U_b applied to the public-key state."""
    if b not in (0, 1):
        raise ParameterError(f"plaintext bit must be 0 or 1, got {b}")
    if pk.dim != spec.family.register_dim:
        raise ParameterError(
            f"public key dimension {pk.dim} does not match scheme dim {spec.family.register_dim}"
        )
    u = spec.u0 if b == 0 else spec.u1
    return Ciphertext(u.apply(pk.state))


def sample_codeword(s: int, b: int, rng: np.random.Generator) -> Codeword:
    """Uniform codeword of length s with weight parity b.

    The first s-1 bits are free coin flips; the last bit fixes the
    parity, which maps the uniform distribution on (s-1)-bit strings
    bijectively onto the 2^(s-1) codewords of the requested parity.
    """
    if s < 1:
        raise ParameterError(f"codeword length must be >= 1, got {s}")
    if b not in (0, 1):
        raise ParameterError(f"parity bit must be 0 or 1, got {b}")
    free = rng.integers(0, 2, size=s - 1)
    last = (int(free.sum()) + b) % 2
    return Codeword("".join("1" if x else "0" for x in free) + str(last))


def encrypt_randomized(
    spec: SchemeSpec,
    pks: Sequence[PublicKeyState],
    b: int,
    rng: np.random.Generator,
) -> tuple[CompoundCiphertext, Codeword]:
    """Parity-encoded encryption of one bit under s independent keys.

    Draws the codeword, then encrypts bit w_i under key i through the
    base scheme. The codeword is returned for harness verification
    only; it never travels with the ciphertext.
    """
    if not pks:
        raise ParameterError("need at least one public key")
    word = sample_codeword(len(pks), b, rng)
    parts = tuple(
        encrypt_bit(spec, pk, int(bit)) for pk, bit in zip(pks, word.bits)
    )
    return CompoundCiphertext(parts), word


def decrypt_randomized(
    spec: SchemeSpec,
    keys: Sequence[PrivateKey],
    ct: CompoundCiphertext,
) -> int:
    """Recover the plaintext as the weight parity of the codeword.

    Per part, the holder of the private key recomputes both reference
    ciphertexts and reads off w_i from which one matches. With the
    orthogonal flag exactly one overlap is 1; anything else marks a
    corrupted register. Non-orthogonal schemes are refused because
    their decryption cannot be error-free.
    """
    if not spec.orthogonal:
        raise UnsupportedModeError("decryption requires an orthogonal-flagged scheme")
    if len(keys) != ct.length:
        raise ParameterError(f"got {len(keys)} keys for {ct.length} ciphertext parts")
    weight = 0
    for i, (key, part) in enumerate(zip(keys, ct.parts)):
        pk = public_key_state(spec.family, key)
        if abs(overlap(part.state, spec.u0.apply(pk.state))) >= 1.0 - _DECRYPT_TOL:
            continue
        if abs(overlap(part.state, spec.u1.apply(pk.state))) >= 1.0 - _DECRYPT_TOL:
            weight += 1
            continue
        raise CorruptedCiphertextError(f"part {i} matches neither reference ciphertext")
    return weight % 2
