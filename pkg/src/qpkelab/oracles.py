"""Brute-force oracles that cross-check the closed forms used elsewhere.

These deliberately share no code with the operations they validate:
:func:`oracle_q` re-derives the symmetry-test outcome probability by raw
enumeration of all register permutations on the full tensor-product
vector, and :func:`oracle_p_success` re-derives the compound-attack
success probability by exact rational enumeration of every codeword and
every error pattern. Both are exponentially slower than the formulas
they guard; that is the point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

import numpy as np

from .errors import ParameterError, ResourceError

_ORACLE_DIM_LIMIT = 1 << 18
_ORACLE_REGISTER_LIMIT = 8
_ORACLE_CODEWORD_LIMIT = 20


@dataclass(frozen=True)
class OracleCase:
    """One oracle-vs-formula comparison, kept for reporting."""

    description: str
    inputs: dict
    oracle_value: float
    formula_value: float
    tolerance: float

    @property
    def deviation(self) -> float:
        return abs(self.oracle_value - self.formula_value)

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


def oracle_q(num_registers: int, register_dim: int, xi, chi) -> float:
    """Outcome-"0" probability of the symmetry test, by raw enumeration.

    Computes <in| P_sym |in> for |in> = |xi> (x) |chi>^(N-1) as
    (1/N!) * sum over all permutations sigma of <in| sigma |in>,
    using nothing but explicit index arithmetic on the d^N amplitudes.
    """
    n, d = int(num_registers), int(register_dim)
    if n < 1 or d < 2:
        raise ParameterError(f"need N >= 1 registers of dimension >= 2, got N={n}, d={d}")
    if n > _ORACLE_REGISTER_LIMIT or d ** n > _ORACLE_DIM_LIMIT:
        raise ResourceError(f"oracle enumeration guard exceeded for d={d}, N={n}")

    xi = np.asarray(xi, dtype=np.complex128).reshape(-1)
    chi = np.asarray(chi, dtype=np.complex128).reshape(-1)
    if xi.size != d or chi.size != d:
        raise ParameterError("xi and chi must both have the register dimension")

    dim = d ** n
    # Amplitude of |in> at flat index j: product over registers of the
    # single-register amplitudes selected by j's base-d digits.
    vec = np.ones(dim, dtype=np.complex128)
    factors = [xi] + [chi] * (n - 1)
    for t in range(n):
        place = d ** (n - 1 - t)
        digit_t = (np.arange(dim) // place) % d
        vec *= factors[t][digit_t]

    # digit table: digits[t, j] = base-d digit t of flat index j
    digits = np.empty((n, dim), dtype=np.int64)
    for t in range(n):
        digits[t] = (np.arange(dim) // (d ** (n - 1 - t))) % d
    places = np.array([d ** (n - 1 - t) for t in range(n)], dtype=np.int64)

    total = 0.0 + 0.0j
    for sigma in permutations(range(n)):
        # sigma sends register t's content to position sigma[t]; the
        # matrix element <in|sigma|in> only needs the group as a whole,
        # so any fixed convention works. Permute digits accordingly.
        permuted_index = np.zeros(dim, dtype=np.int64)
        for t in range(n):
            permuted_index += digits[sigma[t]] * places[t]
        total += np.vdot(vec, vec[permuted_index])
    value = total / float(_factorial(n))
    return float(value.real)


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def oracle_p_success(copies: int, codeword_len: int) -> float:
    """Compound-attack success probability, by exact rational enumeration."""
    return float(oracle_p_success_exact(copies, codeword_len))


def oracle_p_success_exact(copies: int, codeword_len: int) -> Fraction:
    """Exact rational compound-attack success probability.

    Enumerates, for each plaintext parity, all 2^(s-1) codewords, and
    for each codeword weight all error patterns over its one-bits. A
    one-bit's test is fooled with probability q = 1/T independently;
    the codeword is recovered iff an even number of its one-bits are
    fooled. Codewords of equal weight share one pattern enumeration
    (the patterns depend only on how many one-bits there are), which
    keeps the total work at 2^(s+1) patterns instead of 3^s. The result
    is the equal-prior average over both parities, as an exact rational.
    """
    t, s = int(copies), int(codeword_len)
    if t < 2:
        raise ParameterError(f"need at least 2 copies, got {t}")
    if not 1 <= s <= _ORACLE_CODEWORD_LIMIT:
        raise ResourceError(f"codeword length {s} outside oracle guard 1..{_ORACLE_CODEWORD_LIMIT}")

    q = Fraction(1, t)
    fooled_weight = [q ** g for g in range(s + 1)]
    clean_weight = [(1 - q) ** g for g in range(s + 1)]

    # success probability of a weight-`ones` codeword, by walking every
    # subset of its one-bits as the set of fooled tests
    success_by_weight = []
    for ones in range(s + 1):
        acc = Fraction(0)
        for pattern in range(1 << ones):
            fooled = bin(pattern).count("1")
            if fooled % 2 == 0:
                acc += fooled_weight[fooled] * clean_weight[ones - fooled]
        success_by_weight.append(acc)

    per_parity = []
    for parity in (0, 1):
        codewords = [w for w in product((0, 1), repeat=s) if sum(w) % 2 == parity]
        total = sum((success_by_weight[sum(w)] for w in codewords), Fraction(0))
        per_parity.append(total / len(codewords))

    return (per_parity[0] + per_parity[1]) / 2
