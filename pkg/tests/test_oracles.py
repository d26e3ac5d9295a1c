"""Brute-force oracles: enumeration-based checks of the two closed forms."""

from fractions import Fraction

import numpy as np
import pytest

from qpkelab.errors import ParameterError, ResourceError
from qpkelab.linalg import StateVector
from qpkelab.oracles import (
    OracleCase,
    oracle_p_success,
    oracle_p_success_exact,
    oracle_q,
)
from qpkelab.rng import derive_stream
from qpkelab.symtest import q_closed_form


def overlapping_pair(gen, dim):
    a = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    b = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    return a / np.linalg.norm(a), b / np.linalg.norm(b)


class TestOracleQ:
    def test_equal_states_give_one(self, rng):
        xi, _ = overlapping_pair(rng, 2)
        for n in range(1, 5):
            assert oracle_q(n, 2, xi, xi) == pytest.approx(1.0, abs=1e-12)

    def test_hand_value_two_qubits_orthogonal(self):
        # N=2, lambda=0: q = 1/2; one basis state each
        xi = StateVector.basis(2, 0).amplitudes
        chi = StateVector.basis(2, 1).amplitudes
        assert oracle_q(2, 2, xi, chi) == pytest.approx(0.5, abs=1e-12)

    def test_hand_value_three_registers_orthogonal(self):
        xi = StateVector.basis(3, 0).amplitudes
        chi = StateVector.basis(3, 2).amplitudes
        assert oracle_q(3, 3, xi, chi) == pytest.approx(1 / 3, abs=1e-12)

    @pytest.mark.parametrize("dim", [2, 3])
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_matches_closed_form(self, dim, n):
        gen = derive_stream(711, lane=dim, index=n)
        for _ in range(5):
            xi, chi = overlapping_pair(gen, dim)
            lam = abs(np.vdot(xi, chi))
            expected = q_closed_form(n, lam)
            assert oracle_q(n, dim, xi, chi) == pytest.approx(expected, abs=1e-10)

    def test_register_guard(self):
        xi = StateVector.basis(2, 0).amplitudes
        with pytest.raises(ResourceError):
            oracle_q(9, 2, xi, xi)

    def test_dim_guard(self):
        xi = StateVector.basis(1 << 17, 0).amplitudes
        with pytest.raises(ResourceError):
            oracle_q(2, 1 << 17, xi, xi)


class TestOraclePSuccess:
    def test_hand_values(self):
        # T=2, s=1: plain attack errs only on b=1 with prob 1/2 -> 3/4
        assert oracle_p_success_exact(2, 1) == Fraction(3, 4)
        # boundary pair from the threshold check
        assert oracle_p_success_exact(2, 2) == Fraction(5, 8)
        assert oracle_p_success_exact(3, 2) == Fraction(1, 2) + Fraction(4, 18)

    def test_float_wrapper(self):
        assert oracle_p_success(2, 2) == pytest.approx(0.625, abs=1e-15)

    def test_decreasing_in_codeword_length(self):
        values = [oracle_p_success_exact(3, s) for s in range(1, 9)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert all(v > Fraction(1, 2) for v in values)

    def test_copies_guard(self):
        with pytest.raises(ParameterError):
            oracle_p_success_exact(1, 3)

    def test_length_guard(self):
        with pytest.raises(ResourceError):
            oracle_p_success_exact(2, 21)
        with pytest.raises(ResourceError):
            oracle_p_success_exact(2, 0)


class TestOracleCase:
    def test_deviation_and_pass(self):
        case = OracleCase(
            description="toy",
            inputs={"x": 1},
            oracle_value=0.5,
            formula_value=0.5 + 1e-12,
            tolerance=1e-10,
        )
        assert case.deviation == pytest.approx(1e-12)
        assert case.passed

    def test_failing_case(self):
        case = OracleCase("toy", {}, 0.5, 0.6, 1e-10)
        assert not case.passed


def derived_value_cases():
    """Each hand-derivable value, oracle on one side, formula on the other."""
    from qpkelab.analysis import p_success_closed

    xi2 = StateVector.basis(2, 0).amplitudes
    chi2 = StateVector.basis(2, 1).amplitudes
    gen = derive_stream(4242)
    a = gen.normal(size=3) + 1j * gen.normal(size=3)
    b = gen.normal(size=3) + 1j * gen.normal(size=3)
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    lam = abs(np.vdot(a, b))

    yield OracleCase(
        "equality test, two orthogonal qubits",
        {"n": 2, "d": 2},
        oracle_q(2, 2, xi2, chi2),
        q_closed_form(2, 0.0),
        1e-10,
    )
    yield OracleCase(
        "equality test, four equal qubits",
        {"n": 4, "d": 2},
        oracle_q(4, 2, xi2, xi2),
        1.0,
        1e-12,
    )
    yield OracleCase(
        "equality test, random qutrit pair",
        {"n": 3, "d": 3, "lam": lam},
        oracle_q(3, 3, a, b),
        (1 + 2 * lam * lam) / 3,
        1e-10,
    )
    for copies, s, value in [(2, 1, 0.75), (2, 2, 0.625), (3, 2, 13 / 18)]:
        yield OracleCase(
            "compound success probability",
            {"copies": copies, "s": s, "hand_value": value},
            oracle_p_success(copies, s),
            p_success_closed(copies, s),
            1e-12,
        )


def test_every_derived_case_passes():
    cases = list(derived_value_cases())
    assert len(cases) == 6
    failed = [c.description for c in cases if not c.passed]
    assert failed == []
    # hand values pin the oracle side as well, not just agreement
    assert cases[3].oracle_value == pytest.approx(0.75, abs=1e-15)
    assert cases[4].oracle_value == pytest.approx(0.625, abs=1e-15)
    assert cases[5].oracle_value == pytest.approx(13 / 18, abs=1e-15)
