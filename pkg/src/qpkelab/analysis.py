"""Compound-attack success probabilities and codeword-length bounds.

Everything here is exact arithmetic dressed up as floats at the edge:
the conditional success probabilities are evaluated as the double sums
over codeword weights and even error counts with Fraction weights, the
closed form 1/2 + (T-1)^s / (2 T^s) is available both ways, and the
minimum codeword lengths are certified against the exact inequality
(T-1)^s <= 2 eps T^s rather than trusted to floating-point logs.

The codeword lengths returned by s_min_tight and s_min_simple make the
symmetry-test attack's advantage at most eps. No claim is made about
other attacks; the labels in reports say "sufficient against the
symmetry-test attack" rather than "secure".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ParameterError

_MAX_SUM_LEN = 64


@dataclass(frozen=True)
class SecurityThreshold:
    """Adversary-advantage bound eps, strictly between 0 and 1/2."""

    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 0.5:
            raise ParameterError(f"threshold must lie in (0, 1/2), got {self.epsilon}")

    def exact(self) -> Fraction:
        # the float's exact binary value, so dyadic thresholds like 1/8
        # or 2^-20 are represented with no rounding at all
        return Fraction(self.epsilon)


def _check_copies(copies: int) -> None:
    if not isinstance(copies, int) or copies < 2:
        raise ParameterError(f"need an integer number of copies >= 2, got {copies!r}")


def _p_success_conditional_exact(copies: int, codeword_len: int, b: int) -> Fraction:
    """The double sum with exact rational weights.

    Outer sum over codeword weights alpha of parity b, inner sum over
    even counts gamma of fooled one-bit tests; each term weighs
    C(s,alpha) C(alpha,gamma) q^gamma (1-q)^(alpha-gamma) with q = 1/T,
    normalized by the 2^(s-1) codewords of that parity. Python's native
    big integers make the binomials exact at any s in range.
    """
    t, s = copies, codeword_len
    q = Fraction(1, t)
    total = Fraction(0)
    for alpha in range(b, s + 1, 2):
        inner = Fraction(0)
        for gamma in range(0, alpha + 1, 2):
            inner += math.comb(alpha, gamma) * q**gamma * (1 - q) ** (alpha - gamma)
        total += math.comb(s, alpha) * inner
    return total / 2 ** (s - 1)


def p_success_conditional(copies: int, codeword_len: int, b: int) -> float:
    """Attack success probability given the plaintext bit, by double sum."""
    _check_copies(copies)
    if not 1 <= codeword_len <= _MAX_SUM_LEN:
        raise ParameterError(f"codeword length must lie in 1..{_MAX_SUM_LEN}, got {codeword_len}")
    if b not in (0, 1):
        raise ParameterError(f"plaintext bit must be 0 or 1, got {b}")
    return float(_p_success_conditional_exact(copies, codeword_len, b))


def _p_success_closed_exact(copies: int, codeword_len: int) -> Fraction:
    t, s = copies, codeword_len
    return Fraction(1, 2) + Fraction((t - 1) ** s, 2 * t**s)


def p_success_closed(copies: int, codeword_len: int) -> float:
    """1/2 + (T-1)^s / (2 T^s): average attack success at codeword length s."""
    _check_copies(copies)
    if codeword_len < 1:
        raise ParameterError(f"codeword length must be >= 1, got {codeword_len}")
    return 0.5 + (1.0 - 1.0 / copies) ** codeword_len / 2.0


def _advantage_within(copies: int, codeword_len: int, eps: Fraction) -> bool:
    # p_success_closed <= 1/2 + eps, as exact integers
    t, s = copies, codeword_len
    return (t - 1) ** s * eps.denominator <= 2 * eps.numerator * t**s


def s_min_tight(copies: int, eps: SecurityThreshold) -> int:
    """Smallest s with attack advantage at most eps.

    Seeded from |(1 + log2 eps) / log2((T-1)/T)| and then walked to the
    exact boundary of (T-1)^s <= 2 eps T^s with integer arithmetic, so
    boundary cases (advantage equal to eps) land on the right side.
    Never less than 1.
    """
    _check_copies(copies)
    exact_eps = eps.exact()
    ratio = abs((1.0 + math.log2(eps.epsilon)) / math.log2((copies - 1) / copies))
    s = max(1, math.ceil(ratio - 1e-9))
    while s > 1 and _advantage_within(copies, s - 1, exact_eps):
        s -= 1
    while not _advantage_within(copies, s, exact_eps):
        s += 1
    return s


def s_min_simple(copies: int, eps: SecurityThreshold) -> int:
    """ceil(T * |1 + log2 eps|): looser but log-free bound, never below s_min_tight."""
    _check_copies(copies)
    return max(1, math.ceil(copies * abs(1.0 + math.log2(eps.epsilon))))


@dataclass(frozen=True)
class SuccessRow:
    codeword_len: int
    p_b0: float
    p_b1: float
    p_avg: float
    closed_form: float

    @property
    def deviation(self) -> float:
        return abs(self.p_avg - self.closed_form)


@dataclass(frozen=True)
class SuccessTable:
    """Success probabilities per codeword length, sum vs closed form.

    Construction re-checks its own consistency: the average column must
    be the mean of the conditionals to 1e-12 and must match the closed
    form to 1e-10 in every row.
    """

    copies: int
    rows: tuple[SuccessRow, ...]

    def __post_init__(self) -> None:
        for row in self.rows:
            if abs(row.p_avg - (row.p_b0 + row.p_b1) / 2.0) > 1e-12:
                raise ParameterError(f"row s={row.codeword_len}: average column inconsistent")
            if row.deviation > 1e-10:
                raise ParameterError(
                    f"row s={row.codeword_len}: double sum and closed form disagree "
                    f"by {row.deviation:.3e}"
                )


def success_table(copies: int, codeword_lens: Sequence[int]) -> SuccessTable:
    _check_copies(copies)
    rows = []
    for s in codeword_lens:
        if not 1 <= s <= _MAX_SUM_LEN:
            raise ParameterError(f"codeword length must lie in 1..{_MAX_SUM_LEN}, got {s}")
        p0 = float(_p_success_conditional_exact(copies, s, 0))
        p1 = float(_p_success_conditional_exact(copies, s, 1))
        rows.append(SuccessRow(s, p0, p1, (p0 + p1) / 2.0, p_success_closed(copies, s)))
    return SuccessTable(copies, tuple(rows))
