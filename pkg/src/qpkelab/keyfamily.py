"""Concrete public-key state families.

A family maps every n-bit private key to a normalized d-dimensional
state, with all pairwise overlaps bounded away from 1. Two built-ins:

* "rotation": real single-qubit states at angles theta_k spread over a
  quarter circle, so every pairwise overlap is cos of a positive angle
  difference below pi/2.
* "seeded-random": d-dimensional states drawn uniformly from the real
  unit sphere under a family seed, rejecting any candidate that comes
  too close to an already accepted state. Real amplitudes keep the
  built-in quarter-turn scheme exactly orthogonal at d = 2.

The module also hosts the information-theoretic sanity check on how
many public-key copies may circulate: with T copies of a log2(d)-qubit
state in the wild, recovering n key bits needs n to dominate
T*log2(d). The check is the ratio of the two with a configurable
margin.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import FamilyInvalidError, ParameterError, SimulationSizeError
from .linalg import StateVector
from .rng import derive_stream

ROTATION = "rotation"
SEEDED_RANDOM = "seeded-random"

ENUMERATION_GUARD = 4096
# reserved stream lane for family materialization, disjoint from
# experiment lanes
_FAMILY_LANE = 0x7FFF
_REJECTION_ATTEMPT_FACTOR = 200

_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class KeyFamilySpec:
    """Parameters of one key family instance.

    family_kind: ROTATION or SEEDED_RANDOM.
    key_bits: n, private keys are n-bit strings.
    register_dim: d, each public key is one d-dimensional register.
    max_copies: T, total public-key copies issued per key.
    overlap_bound: strict upper bound on distinct-pair overlaps; None
        picks a family-appropriate default.
    holevo_margin: required ratio n / (T log2 d) for holevo_check.
    family_seed: seed of the seeded-random family (ignored by rotation).
    """

    family_kind: str
    key_bits: int
    register_dim: int = 2
    max_copies: int = 2
    overlap_bound: float | None = None
    holevo_margin: float = 10.0
    family_seed: int = 0

    def __post_init__(self) -> None:
        if self.family_kind not in (ROTATION, SEEDED_RANDOM):
            raise ParameterError(f"unknown family kind {self.family_kind!r}")
        if self.key_bits < 1:
            raise ParameterError(f"key_bits must be >= 1, got {self.key_bits}")
        if self.register_dim < 2:
            raise ParameterError(f"register_dim must be >= 2, got {self.register_dim}")
        if self.family_kind == ROTATION and self.register_dim != 2:
            raise ParameterError("rotation family is single-qubit (register_dim 2)")
        if self.max_copies < 1:
            raise ParameterError(f"max_copies must be >= 1, got {self.max_copies}")
        if self.overlap_bound is None:
            object.__setattr__(self, "overlap_bound", self._default_overlap_bound())
        if not 0.0 < self.overlap_bound < 1.0:
            raise ParameterError(
                f"overlap_bound must lie in (0,1), got {self.overlap_bound}"
            )
        if self.holevo_margin < 1.0:
            raise ParameterError(f"holevo_margin must be >= 1, got {self.holevo_margin}")
        if not 0 <= self.family_seed < 2 ** 64:
            raise ParameterError("family_seed must fit in 64 bits")

    def _default_overlap_bound(self) -> float:
        if self.family_kind == ROTATION:
            # adjacent angles dominate; nudge up so the realized maximum
            # sits strictly below the bound, but keep the bound itself
            # below 1 even when the cosine rounds to 1 at large n
            nudged = np.nextafter(math.cos(math.pi / 2 ** (self.key_bits + 1)), 1.0)
            return float(min(nudged, np.nextafter(1.0, 0.0)))
        return 0.9

    @property
    def num_keys(self) -> int:
        return 2 ** self.key_bits


@dataclass(frozen=True)
class PrivateKey:
    bits: str

    def __post_init__(self) -> None:
        if not self.bits or any(c not in "01" for c in self.bits):
            raise ParameterError(f"private key must be a nonempty binary string, got {self.bits!r}")

    @property
    def value(self) -> int:
        return int(self.bits, 2)

    @classmethod
    def from_int(cls, value: int, key_bits: int) -> "PrivateKey":
        if not 0 <= value < 2 ** key_bits:
            raise ParameterError(f"key value {value} outside {key_bits}-bit range")
        return cls(format(value, f"0{key_bits}b"))


@dataclass(frozen=True)
class PublicKeyState:
    """One public-key copy.

    key_fingerprint is test-harness bookkeeping that lets round-trip
    checks match states to generating keys without handing adversary
    code the key itself; adversary operations never accept PrivateKey
    arguments and never read this field.
    """

    state: StateVector
    key_fingerprint: str

    def __post_init__(self) -> None:
        self.state.require_normalized("public key state")

    @property
    def dim(self) -> int:
        return self.state.dim


def _fingerprint(spec: KeyFamilySpec, key: PrivateKey) -> str:
    h = hashlib.blake2b(digest_size=8)
    h.update(
        f"{spec.family_kind}|{spec.key_bits}|{spec.register_dim}|{spec.family_seed}|{key.bits}".encode()
    )
    return h.hexdigest()


def sample_private_key(spec: KeyFamilySpec, rng: np.random.Generator) -> PrivateKey:
    """Uniform n-bit private key from the given stream."""
    bits = rng.integers(0, 2, size=spec.key_bits)
    return PrivateKey("".join("1" if b else "0" for b in bits))


def rotation_angle(spec: KeyFamilySpec, key: PrivateKey) -> float:
    """theta_k = pi * int(k) / 2^(n+1), spanning [0, pi/2)."""
    return math.pi * key.value / 2 ** (spec.key_bits + 1)


@lru_cache(maxsize=8)
def _seeded_random_states(spec: KeyFamilySpec) -> np.ndarray:
    """Materialize all 2^n states of a seeded-random family.

    Uniform draws from the real unit sphere, rejection-sampled against
    the configured overlap bound; a family that cannot be packed raises
    rather than looping forever.
    """
    count = spec.num_keys
    if count > ENUMERATION_GUARD:
        raise SimulationSizeError(
            f"seeded-random family needs 2^n <= {ENUMERATION_GUARD} states, got {count}"
        )
    rng = derive_stream(spec.family_seed, lane=_FAMILY_LANE)
    d = spec.register_dim
    accepted = np.empty((count, d), dtype=np.complex128)
    have = 0
    budget = _REJECTION_ATTEMPT_FACTOR * count
    while have < count:
        if budget <= 0:
            raise FamilyInvalidError(
                f"could not pack {count} states of dimension {d} "
                f"with pairwise overlap below {spec.overlap_bound}; "
                "raise the register dimension or loosen the overlap bound"
            )
        budget -= 1
        cand = rng.normal(size=d).astype(np.complex128)
        cand /= np.linalg.norm(cand)
        if have and np.abs(accepted[:have] @ cand.conj()).max() >= spec.overlap_bound:
            continue
        accepted[have] = cand
        have += 1
    accepted.setflags(write=False)
    return accepted


def public_key_state(spec: KeyFamilySpec, key: PrivateKey) -> PublicKeyState:
    """The state |Psi_k| for the given key; pure function of (spec, key)."""
    if len(key.bits) != spec.key_bits:
        raise ParameterError(
            f"key length {len(key.bits)} does not match spec key_bits {spec.key_bits}"
        )
    if spec.family_kind == ROTATION:
        theta = rotation_angle(spec, key)
        amps = np.array([math.cos(theta), math.sin(theta)], dtype=np.complex128)
    else:
        amps = _seeded_random_states(spec)[key.value]
    return PublicKeyState(StateVector(amps), _fingerprint(spec, key))


def all_private_keys(spec: KeyFamilySpec):
    """All 2^n keys in increasing order; guarded against blowup."""
    if spec.num_keys > ENUMERATION_GUARD:
        raise SimulationSizeError(
            f"key enumeration needs 2^n <= {ENUMERATION_GUARD}, got {spec.num_keys}"
        )
    for v in range(spec.num_keys):
        yield PrivateKey.from_int(v, spec.key_bits)


@dataclass(frozen=True)
class OverlapBound:
    """Largest distinct-pair overlap found, with how it was obtained.

    method is "exhaustive" (every pair scanned) or "analytic" (rotation
    family beyond the enumeration guard, where the minimum angle gap
    determines the maximum exactly). Only "exhaustive" sets the
    exhaustive flag; the analytic value is exact regardless.
    """

    value: float
    exhaustive: bool
    method: str
    pairs_checked: int


def pairwise_overlap_bound(spec: KeyFamilySpec) -> OverlapBound:
    """Max over distinct keys of |<Psi_x'|Psi_x>|; must sit strictly below 1."""
    count = spec.num_keys
    if count <= ENUMERATION_GUARD:
        if spec.family_kind == ROTATION:
            angles = math.pi * np.arange(count) / 2 ** (spec.key_bits + 1)
            states = np.stack([np.cos(angles), np.sin(angles)], axis=1).astype(np.complex128)
        else:
            states = _seeded_random_states(spec)
        worst = 0.0
        block = 256
        for lo in range(0, count, block):
            gram = np.abs(states[lo : lo + block] @ states.conj().T)
            for r in range(gram.shape[0]):
                gram[r, lo + r] = 0.0  # self-overlaps excluded
            worst = max(worst, float(gram.max()))
        result = OverlapBound(worst, True, "exhaustive", count * (count - 1) // 2)
    elif spec.family_kind == ROTATION:
        # angles form an arithmetic progression inside [0, pi/2), so the
        # overlap |cos(delta_theta)| is maximal at the single-step gap
        value = math.cos(math.pi / 2 ** (spec.key_bits + 1))
        result = OverlapBound(value, False, "analytic", 0)
    else:
        raise SimulationSizeError(
            f"cannot bound overlaps of {count} seeded-random states "
            f"(guard {ENUMERATION_GUARD})"
        )
    if result.value >= 1.0 - _DEGENERATE_TOL:
        raise FamilyInvalidError(
            f"family contains a (near-)duplicated state: max overlap {result.value}"
        )
    return result


@dataclass(frozen=True)
class HolevoCheck:
    ratio: float
    margin: float
    passed: bool


def holevo_check(spec: KeyFamilySpec) -> HolevoCheck:
    """ratio = n / (T * log2 d); passes iff ratio >= the configured margin.

    T copies of a log2(d)-qubit state carry at most T*log2(d) bits of
    information about the n-bit key, so n must dominate that product
    for the key to stay out of reach.
    """
    ratio = spec.key_bits / (spec.max_copies * math.log2(spec.register_dim))
    return HolevoCheck(ratio, spec.holevo_margin, ratio >= spec.holevo_margin)
