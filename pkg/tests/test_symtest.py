"""Symmetry test: exact outcome probability, sampling, verdict semantics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as strat

from qpkelab.errors import ParameterError, SimulationSizeError
from qpkelab.linalg import StateVector
from qpkelab.oracles import oracle_q
from qpkelab.rng import derive_stream
from qpkelab.symtest import (
    SymmetryTestSpec,
    distinguish,
    distinguish_with_outcome,
    p_zero_exact,
    q_closed_form,
    run_symmetry_test,
)


def pair_with_overlap(lam, dim=2):
    """xi = e0, chi with |<xi|chi>| = lam."""
    amps = np.zeros(dim)
    amps[0] = lam
    amps[1] = math.sqrt(1 - lam * lam)
    return StateVector.basis(dim, 0), StateVector(amps).normalized()


def random_state(gen, dim):
    amps = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    return StateVector(amps).normalized()


class TestClosedForm:
    def test_single_register(self):
        assert q_closed_form(1, 0.3) == 1.0

    def test_orthogonal(self):
        assert q_closed_form(2, 0.0) == pytest.approx(0.5)
        assert q_closed_form(3, 0.0) == pytest.approx(1 / 3)

    def test_equal(self):
        for n in range(1, 8):
            assert q_closed_form(n, 1.0) == pytest.approx(1.0)

    @given(
        n=strat.integers(min_value=1, max_value=16),
        lam=strat.floats(min_value=0.0, max_value=1.0),
    )
    def test_range(self, n, lam):
        q = q_closed_form(n, lam)
        assert 1 / n - 1e-12 <= q <= 1 + 1e-12

    @given(
        n=strat.integers(min_value=2, max_value=16),
        lo=strat.floats(min_value=0.0, max_value=0.5),
        hi=strat.floats(min_value=0.5001, max_value=1.0),
    )
    def test_monotone_in_overlap(self, n, lo, hi):
        assert q_closed_form(n, lo) < q_closed_form(n, hi)

    @given(
        n=strat.integers(min_value=1, max_value=15),
        lam=strat.floats(min_value=0.0, max_value=0.999),
    )
    def test_monotone_decreasing_in_copies(self, n, lam):
        assert q_closed_form(n + 1, lam) < q_closed_form(n, lam) + 1e-12


class TestExactProbability:
    def test_hand_case_orthogonal_three(self):
        xi, chi = pair_with_overlap(0.0)
        assert p_zero_exact(xi, chi, 3) == pytest.approx(1 / 3, abs=1e-12)

    def test_hand_case_half_overlap_two(self):
        xi, chi = pair_with_overlap(math.sqrt(0.5))
        assert p_zero_exact(xi, chi, 2) == pytest.approx(0.75, abs=1e-12)

    def test_equal_states_exactly_one(self, rng):
        for n in range(1, 6):
            psi = random_state(rng, 2)
            assert p_zero_exact(psi, psi, n) == 1.0

    @pytest.mark.parametrize("dim", [2, 3])
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_matches_closed_form_random_pairs(self, dim, n):
        gen = derive_stream(883, lane=dim, index=n)
        for _ in range(20):
            xi = random_state(gen, dim)
            chi = random_state(gen, dim)
            lam = abs(np.vdot(xi.amplitudes, chi.amplitudes))
            assert p_zero_exact(xi, chi, n) == pytest.approx(
                q_closed_form(n, lam), abs=1e-10
            )

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_matches_enumeration_oracle(self, n):
        gen = derive_stream(884, index=n)
        xi = random_state(gen, 2)
        chi = random_state(gen, 2)
        assert p_zero_exact(xi, chi, n) == pytest.approx(
            oracle_q(n, 2, xi.amplitudes, chi.amplitudes), abs=1e-10
        )

    def test_dim_mismatch(self):
        with pytest.raises(ParameterError):
            p_zero_exact(StateVector.basis(2, 0), StateVector.basis(3, 0), 2)

    def test_unnormalized_rejected(self):
        with pytest.raises(ParameterError):
            p_zero_exact(StateVector([1.0, 1.0]), StateVector.basis(2, 0), 2)

    def test_register_guard(self):
        xi, chi = pair_with_overlap(0.5)
        with pytest.raises(SimulationSizeError):
            p_zero_exact(xi, chi, 9)


class TestSpecValidation:
    def test_bad_registers(self):
        with pytest.raises(ParameterError):
            SymmetryTestSpec(num_registers=0, register_dim=2)

    def test_bad_dim(self):
        with pytest.raises(ParameterError):
            SymmetryTestSpec(num_registers=2, register_dim=1)


class TestSampling:
    def test_one_sided_equal_states(self):
        # equal inputs must never produce the "nonzero" outcome
        gen = derive_stream(9090)
        psi = random_state(gen, 2)
        for _ in range(2_000):
            outcome = run_symmetry_test(psi, psi, 3, gen)
            assert outcome.outcome == "zero"
            assert outcome.p_zero == 1.0

    def test_orthogonal_rates(self):
        gen = derive_stream(9091)
        xi, chi = pair_with_overlap(0.0)
        trials = 20_000
        zeros = sum(
            run_symmetry_test(xi, chi, 2, gen).outcome == "zero" for _ in range(trials)
        )
        sigma = math.sqrt(trials * 0.25)
        assert abs(zeros - trials / 2) <= 4 * sigma

    def test_deterministic_given_stream(self):
        xi, chi = pair_with_overlap(0.3)
        a = [run_symmetry_test(xi, chi, 2, derive_stream(7, index=i)).outcome for i in range(50)]
        b = [run_symmetry_test(xi, chi, 2, derive_stream(7, index=i)).outcome for i in range(50)]
        assert a == b


class TestDistinguish:
    def test_no_copies_is_vacuously_equal(self, rng):
        verdict, outcome = distinguish_with_outcome(StateVector.basis(2, 0), [], rng)
        assert verdict == "equal"
        assert outcome.p_zero == 1.0

    def test_equal_copies_always_equal(self):
        gen = derive_stream(9092)
        psi = random_state(gen, 2)
        for _ in range(500):
            assert distinguish(psi, [psi, psi], gen) == "equal"

    def test_orthogonal_sometimes_different(self):
        gen = derive_stream(9093)
        xi, chi = pair_with_overlap(0.0)
        verdicts = {distinguish(xi, [chi, chi], gen) for _ in range(300)}
        assert verdicts == {"equal", "different"}

    def test_inconsistent_copies_rejected(self, rng):
        xi, chi = pair_with_overlap(0.0)
        other = StateVector([0.6, 0.8]).normalized()
        with pytest.raises(ParameterError):
            distinguish(xi, [chi, other], rng)

    def test_copy_dim_mismatch(self, rng):
        with pytest.raises(ParameterError):
            distinguish(StateVector.basis(2, 0), [StateVector.basis(3, 0)], rng)
