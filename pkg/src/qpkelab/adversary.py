"""Eve's side: forward-search attacks and the optimal-discrimination benchmark.

The single-bit attack turns Eve's T-1 public-key copies into reference
ciphertexts for plaintext 0 and runs the equality test with N = T
registers. It errs one-sidedly: plaintext 0 is always guessed right,
plaintext 1 is misjudged with probability q(T, lam), which is 1/T for
orthogonal ciphertexts.

The compound attack repeats this per codeword bit and takes the parity
of the guesses. It runs in two modes with identical guess
distributions: "quantum" simulates every equality test on the actual
states; "bernoulli" replaces each test by a coin that errs with
probability 1/T exactly on one-bits, which scales to parameter ranges
the quantum mode's tensor products cannot reach.

Adversary operations accept only public material: states, copy counts,
and scheme unitaries. None of their signatures takes a PrivateKey or a
Codeword; harness-side bookkeeping (true plaintext, trial index) is
filled into the TrialRecord afterwards by the caller.

The Helstrom benchmark exposes the best possible discrimination of the
two ciphertext-plus-copies ensembles, as an upper bound to compare the
specific attack against. No optimality of the attack is claimed or
checked; the interesting quantity is the gap.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from .errors import (
    CorruptedCiphertextError,
    ParameterError,
    ResourceError,
    SimulationSizeError,
    UnsupportedModeError,
)
from .keyfamily import PublicKeyState, all_private_keys, public_key_state, sample_private_key
from .linalg import (
    Operator,
    hermitian_eigenvalues,
    outer_product,
    overlap,
    tensor_power,
    tensor_product,
    trace_norm,
)
from .rng import trial_stream
from .scheme import (
    Ciphertext,
    CompoundCiphertext,
    SchemeSpec,
    encrypt_bit,
    encrypt_randomized,
    sample_codeword,
)
from .symtest import SymmetryTestOutcome, distinguish_with_outcome

AttackMode = Literal["quantum", "bernoulli"]

_MATCH_TOL = 1e-10
# density matrices get a full eigendecomposition; keep them small
_DISCRIMINATION_DIM_GUARD = 256
_ENSEMBLE_BITS_GUARD = 10


@dataclass(frozen=True)
class AttackResources:
    """How much material Eve works with per key.

    copies is the total number of public-key copies issued, so Eve
    holds copies-1 of them next to the intercepted ciphertext. The test
    plaintext is the bit whose reference ciphertexts she fabricates; 0
    by convention.
    """

    copies: int
    test_plaintext: int = 0

    def __post_init__(self) -> None:
        if self.copies < 2:
            raise ParameterError(f"a nontrivial attack needs copies >= 2, got {self.copies}")
        if self.test_plaintext not in (0, 1):
            raise ParameterError(f"test plaintext must be 0 or 1, got {self.test_plaintext}")


@dataclass(frozen=True)
class TrialRecord:
    """Bookkeeping for one compound-attack trial.

    true_plaintext and seed_index are filled by the harness after the
    attack returns; adversary code neither receives nor reads them.
    """

    true_plaintext: Optional[int]
    guess: int
    per_bit_outcomes: tuple[SymmetryTestOutcome, ...]
    seed_index: int = 0


def forward_search_attack(
    spec: SchemeSpec,
    ct: Ciphertext,
    pk_copies: Sequence[PublicKeyState],
    rng: np.random.Generator,
) -> int:
    """Guess the plaintext of one ciphertext from T-1 public-key copies.

    Eve encrypts her copies with the public U_0 and asks the equality
    test whether the intercepted ciphertext matches them; verdict
    "equal" means guess 0.
    """
    guess, _ = _forward_search_with_outcome(spec, ct, pk_copies, rng)
    return guess


def _forward_search_with_outcome(
    spec: SchemeSpec,
    ct: Ciphertext,
    pk_copies: Sequence[PublicKeyState],
    rng: np.random.Generator,
) -> tuple[int, SymmetryTestOutcome]:
    if len(pk_copies) < 1:
        raise ResourceError("forward search needs at least one public-key copy (copies >= 2)")
    references = [encrypt_bit(spec, pk, 0).state for pk in pk_copies]
    verdict, outcome = distinguish_with_outcome(ct.state, references, rng)
    return (0 if verdict == "equal" else 1), outcome


def _bernoulli_bit_guess(
    spec: SchemeSpec,
    ct: Ciphertext,
    pk_copies: Sequence[PublicKeyState],
    rng: np.random.Generator,
) -> tuple[int, SymmetryTestOutcome]:
    """Statistical stand-in for one equality test.

    Reads off the encrypted bit from which reference the part matches
    (orthogonal schemes make this unambiguous), then errs with the
    test's exact fooling probability q = 1/T on one-bits. Zero-bits are
    never misjudged, mirroring the one-sided quantum behavior.
    """
    if len(pk_copies) < 1:
        raise ResourceError("bernoulli mode still needs the copy count (copies >= 2)")
    q = 1.0 / (len(pk_copies) + 1)
    pk0 = pk_copies[0]
    if abs(overlap(ct.state, spec.u0.apply(pk0.state))) >= 1.0 - _MATCH_TOL:
        return 0, SymmetryTestOutcome("zero", 1.0)
    if abs(overlap(ct.state, spec.u1.apply(pk0.state))) < 1.0 - _MATCH_TOL:
        raise CorruptedCiphertextError("part matches neither reference ciphertext")
    fooled = rng.random() < q
    if fooled:
        return 0, SymmetryTestOutcome("zero", q)
    return 1, SymmetryTestOutcome("nonzero", q)


def compound_attack(
    spec: SchemeSpec,
    ct: CompoundCiphertext,
    pk_copies_per_key: Sequence[Sequence[PublicKeyState]],
    mode: AttackMode,
    rng: np.random.Generator,
) -> tuple[int, TrialRecord]:
    """Per-bit forward search on every part, then guess the parity."""
    if mode not in ("quantum", "bernoulli"):
        raise ParameterError(f"unknown attack mode {mode!r}")
    if not spec.orthogonal:
        raise UnsupportedModeError("compound attack analysis assumes an orthogonal-flagged scheme")
    if len(pk_copies_per_key) != ct.length:
        raise ParameterError(
            f"got copy sets for {len(pk_copies_per_key)} keys but {ct.length} ciphertext parts"
        )
    bit_guess = _forward_search_with_outcome if mode == "quantum" else _bernoulli_bit_guess
    guessed_weight = 0
    outcomes = []
    for part, copies in zip(ct.parts, pk_copies_per_key):
        g, outcome = bit_guess(spec, part, copies, rng)
        guessed_weight += g
        outcomes.append(outcome)
    guess = guessed_weight % 2
    return guess, TrialRecord(None, guess, tuple(outcomes))


@dataclass(frozen=True)
class DiscriminationInstance:
    """The two hypothesis states of the plaintext-guessing decision problem.

    rho_b mixes, uniformly over all keys, T-1 public-key copies
    together with the plaintext-b ciphertext. prior is the probability
    of plaintext 0.
    """

    rho0: Operator
    rho1: Operator
    prior: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.prior <= 1.0:
            raise ParameterError(f"prior must lie in [0,1], got {self.prior}")
        if self.rho0.dim != self.rho1.dim:
            raise ParameterError("hypothesis states must share a dimension")
        for name, rho in (("rho0", self.rho0), ("rho1", self.rho1)):
            trace = float(np.trace(rho.entries).real)
            if abs(trace - 1.0) > 1e-10:
                raise ParameterError(f"{name} trace {trace} is not 1 within 1e-10")
            if not rho.is_hermitian():
                raise ParameterError(f"{name} is not hermitian within 1e-10")
            if hermitian_eigenvalues(rho)[0] < -1e-10:
                raise ParameterError(f"{name} is not positive semidefinite within 1e-10")


def build_discrimination_instance(
    spec: SchemeSpec, copies: int, prior: float = 0.5
) -> DiscriminationInstance:
    """Assemble rho_0 and rho_1 by enumerating every key.

    copies = T counts the ciphertext register too, so each pure
    component lives on T registers of dimension d; copies = 1 gives the
    bare two-ciphertext mixture with no public-key factors.
    """
    if copies < 1:
        raise ParameterError(f"copies must be >= 1, got {copies}")
    family = spec.family
    dim = family.register_dim**copies
    if dim > _DISCRIMINATION_DIM_GUARD:
        raise SimulationSizeError(
            f"discrimination instance dimension {dim} exceeds guard {_DISCRIMINATION_DIM_GUARD}"
        )
    if family.key_bits > _ENSEMBLE_BITS_GUARD:
        raise SimulationSizeError(
            f"key ensemble 2^{family.key_bits} exceeds guard 2^{_ENSEMBLE_BITS_GUARD}"
        )
    rho = [np.zeros((dim, dim), dtype=np.complex128) for _ in range(2)]
    for key in all_private_keys(family):
        pk = public_key_state(family, key)
        held = tensor_power(pk.state, copies - 1)
        for b in (0, 1):
            joint = tensor_product(held, encrypt_bit(spec, pk, b).state)
            rho[b] += outer_product(joint).entries
    weight = 1.0 / family.num_keys
    return DiscriminationInstance(
        Operator(rho[0] * weight), Operator(rho[1] * weight), prior
    )


def helstrom_success(inst: DiscriminationInstance) -> float:
    """Optimal success probability of the binary decision problem.

    (1/2) (1 + || p rho0 - (1-p) rho1 ||_1), the ceiling for any
    strategy whatsoever, the symmetry-test attack included.
    """
    gap = inst.rho0.scaled(inst.prior).minus(inst.rho1.scaled(1.0 - inst.prior))
    return 0.5 * (1.0 + trace_norm(gap))


@dataclass(frozen=True)
class ForwardSearchStats:
    """Tally of independent single-bit attack trials."""

    trials: int
    copies: int
    b0_trials: int
    b1_trials: int
    b0_errors: int
    b1_errors: int

    @property
    def errors(self) -> int:
        return self.b0_errors + self.b1_errors

    @property
    def successes(self) -> int:
        return self.trials - self.errors


@dataclass(frozen=True)
class CompoundStats:
    """Tally of independent compound-attack trials.

    one_bits counts codeword positions holding a 1 across all trials;
    one_bit_errors counts how many of those the per-bit guess missed.
    Only one-bits can be missed, so their ratio estimates q = 1/T.
    """

    trials: int
    copies: int
    codeword_len: int
    mode: str
    successes: int
    one_bits: int
    one_bit_errors: int


def _forward_search_chunk(args) -> tuple[int, int, int, int]:
    spec, copies, plaintext, prior, master_seed, start, stop = args
    tallies = [0, 0, 0, 0]  # b0 trials, b1 trials, b0 errors, b1 errors
    for index in range(start, stop):
        rng = trial_stream(master_seed, index)
        b = plaintext if plaintext is not None else int(rng.random() >= prior)
        key = sample_private_key(spec.family, rng)
        pk = public_key_state(spec.family, key)
        ct = encrypt_bit(spec, pk, b)
        guess = forward_search_attack(spec, ct, [pk] * (copies - 1), rng)
        tallies[b] += 1
        if guess != b:
            tallies[2 + b] += 1
    return tuple(tallies)


def run_forward_search_trials(
    spec: SchemeSpec,
    copies: int,
    plaintext: Optional[int],
    trials: int,
    master_seed: int,
    prior: float = 0.5,
    jobs: int = 1,
) -> ForwardSearchStats:
    """Independent attack trials with per-trial derived streams.

    Each trial draws, in canonical order from its own stream: the
    plaintext (when not fixed), the private key, then the test
    randomness. Trial index alone determines the stream, so any job
    count produces identical tallies.
    """
    resources = AttackResources(copies)
    if plaintext is not None and plaintext not in (0, 1):
        raise ParameterError(f"plaintext must be 0, 1, or None, got {plaintext}")
    if trials < 0:
        raise ParameterError(f"trials must be >= 0, got {trials}")
    if not 0.0 <= prior <= 1.0:
        raise ParameterError(f"prior must lie in [0,1], got {prior}")
    chunks = _chunk_args(
        (spec, resources.copies, plaintext, prior, master_seed), trials, jobs
    )
    totals = [0, 0, 0, 0]
    for part in _map_chunks(_forward_search_chunk, chunks, jobs):
        totals = [a + b for a, b in zip(totals, part)]
    return ForwardSearchStats(trials, copies, *totals)


def _compound_chunk(args) -> tuple[int, int, int]:
    spec, copies, codeword_len, plaintext, prior, mode, master_seed, start, stop = args
    successes = one_bits = one_bit_errors = 0
    q = 1.0 / copies
    for index in range(start, stop):
        rng = trial_stream(master_seed, index)
        b = plaintext if plaintext is not None else int(rng.random() >= prior)
        if mode == "bernoulli":
            # statistics-only path: the guess distribution depends on the
            # codeword alone, so no key or state material is built
            word = sample_codeword(codeword_len, b, rng)
            errors = sum(1 for bit in word.bits if bit == "1" and rng.random() < q)
            if errors % 2 == 0:
                successes += 1
            one_bits += word.weight
            one_bit_errors += errors
            continue
        keys = [sample_private_key(spec.family, rng) for _ in range(codeword_len)]
        pks = [public_key_state(spec.family, k) for k in keys]
        ct, word = encrypt_randomized(spec, pks, b, rng)
        copy_sets = [[pk] * (copies - 1) for pk in pks]
        guess, record = compound_attack(spec, ct, copy_sets, mode, rng)
        if guess == b:
            successes += 1
        for bit, outcome in zip(word.bits, record.per_bit_outcomes):
            if bit == "1":
                one_bits += 1
                if outcome.outcome == "zero":
                    one_bit_errors += 1
    return successes, one_bits, one_bit_errors


def run_compound_trials(
    spec: SchemeSpec,
    copies: int,
    codeword_len: int,
    plaintext: Optional[int],
    mode: AttackMode,
    trials: int,
    master_seed: int,
    prior: float = 0.5,
    jobs: int = 1,
) -> CompoundStats:
    """Independent compound-attack trials; same stream discipline as above.

    Canonical per-trial draw order in quantum mode: plaintext (when not
    fixed), the s private keys, the codeword, then the per-part test
    randomness. Bernoulli mode draws plaintext, codeword, and one coin
    per one-bit: the guess distribution depends on nothing else, so key
    and state material is skipped entirely. That is the mode's purpose;
    the distributional match to quantum mode is pinned down by the
    equivalence tests at small scale.
    """
    resources = AttackResources(copies)
    if codeword_len < 1:
        raise ParameterError(f"codeword length must be >= 1, got {codeword_len}")
    if plaintext is not None and plaintext not in (0, 1):
        raise ParameterError(f"plaintext must be 0, 1, or None, got {plaintext}")
    if trials < 0:
        raise ParameterError(f"trials must be >= 0, got {trials}")
    if not 0.0 <= prior <= 1.0:
        raise ParameterError(f"prior must lie in [0,1], got {prior}")
    chunks = _chunk_args(
        (spec, resources.copies, codeword_len, plaintext, prior, mode, master_seed),
        trials,
        jobs,
    )
    successes = one_bits = one_bit_errors = 0
    for part in _map_chunks(_compound_chunk, chunks, jobs):
        successes += part[0]
        one_bits += part[1]
        one_bit_errors += part[2]
    return CompoundStats(
        trials, copies, codeword_len, mode, successes, one_bits, one_bit_errors
    )


def _chunk_args(prefix: tuple, trials: int, jobs: int) -> list[tuple]:
    if jobs < 1:
        raise ParameterError(f"jobs must be >= 1, got {jobs}")
    jobs = min(jobs, max(trials, 1))
    bounds = np.linspace(0, trials, jobs + 1).astype(int)
    return [prefix + (int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:])]


def _map_chunks(fn, chunks: list[tuple], jobs: int):
    if jobs <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        return list(pool.map(fn, chunks))
