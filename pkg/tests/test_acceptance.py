"""Acceptance battery: one test per criterion, each timed against its budget.

Every test records its outcome through conftest.record so the run ends
with one pass/fail line per criterion, then asserts normally.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import record
from qpkelab.adversary import (
    build_discrimination_instance,
    helstrom_success,
    run_compound_trials,
    run_forward_search_trials,
)
from qpkelab.analysis import (
    SecurityThreshold,
    _p_success_closed_exact,
    p_success_closed,
    p_success_conditional,
    s_min_simple,
    s_min_tight,
)
from qpkelab.cli import main
from qpkelab.keyfamily import (
    ROTATION,
    KeyFamilySpec,
    all_private_keys,
    public_key_state,
    sample_private_key,
)
from qpkelab.linalg import StateVector
from qpkelab.oracles import oracle_p_success_exact, oracle_q
from qpkelab.rng import derive_stream
from qpkelab.scheme import decrypt_randomized, encrypt_bit, encrypt_randomized, orthogonal_scheme
from qpkelab.symtest import distinguish, p_zero_exact, q_closed_form


def rotation_scheme(n, copies=2, seed=0):
    fam = KeyFamilySpec(family_kind=ROTATION, key_bits=n, max_copies=copies, family_seed=seed)
    return orthogonal_scheme(fam)


def random_pair(gen, dim):
    a = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    b = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    return a / np.linalg.norm(a), b / np.linalg.norm(b)


class Budget:
    """Wall-clock guard; elapsed feeds the acceptance detail line."""

    def __init__(self, limit_s):
        self.limit_s = limit_s
        self.start = time.perf_counter()

    @property
    def elapsed(self):
        return time.perf_counter() - self.start

    def within(self):
        return self.elapsed < self.limit_s


def test_criterion_1_symmetry_test_closed_form():
    budget = Budget(30.0)
    worst = 0.0
    checked = 0
    for dim in (2, 3):
        for n in range(1, 6):
            gen = derive_stream(101, lane=dim, index=n)
            for _ in range(20):
                xi, chi = random_pair(gen, dim)
                lam = abs(np.vdot(xi, chi))
                dev = abs(oracle_q(n, dim, xi, chi) - q_closed_form(n, lam))
                worst = max(worst, dev)
                checked += 1
    ok = worst <= 1e-10 and budget.within()
    record(
        1,
        "symmetry-test closed form",
        ok,
        f"{checked} state pairs, worst deviation {worst:.2e}, {budget.elapsed:.1f}s",
    )
    assert worst <= 1e-10
    assert budget.within()


def test_criterion_2_one_sided_error():
    budget = Budget(5.0)
    gen = derive_stream(102)
    different = 0
    trials = 10_000
    for i in range(trials):
        dim = 2 if i % 2 == 0 else 3
        copies = 2 + i % 4
        amps = gen.normal(size=dim) + 1j * gen.normal(size=dim)
        psi = StateVector(amps).normalized()
        refs = [psi] * (copies - 1)
        if distinguish(psi, refs, gen) == "different":
            different += 1
    ok = different == 0 and budget.within()
    record(
        2,
        "one-sided error",
        ok,
        f"{trials} equal-state trials, {different} false 'different', {budget.elapsed:.1f}s",
    )
    assert different == 0
    assert budget.within()


def test_criterion_3_forward_search_error_rate():
    budget = Budget(60.0)
    details = []
    ok = True
    for copies in (2, 3, 5):
        spec = rotation_scheme(4, copies=copies)
        trials = 100_000
        stats = run_forward_search_trials(
            spec, copies, plaintext=1, trials=trials, master_seed=300 + copies
        )
        expected = trials / copies
        sigma = math.sqrt(trials * (1 / copies) * (1 - 1 / copies))
        dev_sigmas = abs(stats.b1_errors - expected) / sigma
        within = dev_sigmas <= 3.0
        zero_stats = run_forward_search_trials(
            spec, copies, plaintext=0, trials=10_000, master_seed=400 + copies
        )
        clean = zero_stats.b0_errors == 0
        ok = ok and within and clean
        details.append(f"T={copies}: b1 {dev_sigmas:.2f}sigma, b0 errors {zero_stats.b0_errors}")
    ok = ok and budget.within()
    record(3, "forward-search error rate", ok, "; ".join(details) + f", {budget.elapsed:.1f}s")
    assert ok


def test_criterion_4_compound_closed_form():
    budget = Budget(10.0)
    worst = 0.0
    exact_matches = 0
    for copies in range(2, 7):
        for s in range(1, 13):
            avg = (p_success_conditional(copies, s, 0) + p_success_conditional(copies, s, 1)) / 2
            closed = 0.5 + (copies - 1) ** s / (2 * copies ** s)
            worst = max(worst, abs(avg - closed))
            if oracle_p_success_exact(copies, s) == _p_success_closed_exact(copies, s):
                exact_matches += 1
    ok = worst <= 1e-10 and exact_matches == 60 and budget.within()
    record(
        4,
        "compound-attack closed form",
        ok,
        f"worst float deviation {worst:.2e}, {exact_matches}/60 exact rational matches, "
        f"{budget.elapsed:.1f}s",
    )
    assert worst <= 1e-10
    assert exact_matches == 60
    assert budget.within()


def test_criterion_5_mode_equivalence():
    budget = Budget(120.0)
    worst_per_bit = 0.0
    mc_checks = []
    ok = True
    for copies in (2, 3):
        spec = rotation_scheme(3, copies=copies)
        # exact per-bit error probability on every key
        for key in all_private_keys(spec.family):
            pk = public_key_state(spec.family, key)
            ct1 = encrypt_bit(spec, pk, 1)
            ref = encrypt_bit(spec, pk, 0)
            dev = abs(p_zero_exact(ct1.state, ref.state, copies) - 1 / copies)
            worst_per_bit = max(worst_per_bit, dev)
        for s in (1, 2, 3):
            trials = 10_000
            stats = run_compound_trials(
                spec, copies, s, plaintext=None, mode="quantum",
                trials=trials, master_seed=500 + 10 * copies + s,
            )
            expected = p_success_closed(copies, s)
            sigma = math.sqrt(expected * (1 - expected) / trials)
            dev_sigmas = abs(stats.successes / trials - expected) / sigma
            mc_checks.append(dev_sigmas)
            ok = ok and dev_sigmas <= 3.0
    ok = ok and worst_per_bit <= 1e-10 and budget.within()
    record(
        5,
        "quantum/bernoulli mode equivalence",
        ok,
        f"worst per-bit deviation {worst_per_bit:.2e}, "
        f"max MC deviation {max(mc_checks):.2f}sigma over {len(mc_checks)} configs, "
        f"{budget.elapsed:.1f}s",
    )
    assert worst_per_bit <= 1e-10
    assert all(d <= 3.0 for d in mc_checks)
    assert budget.within()


def test_criterion_6_security_parameter_bounds():
    budget = Budget(5.0)
    ok = True
    grid = 0
    for copies in range(2, 101):
        for k in range(2, 21):
            eps = SecurityThreshold(2.0 ** -k)
            tight = s_min_tight(copies, eps)
            simple = s_min_simple(copies, eps)
            guaranteed = p_success_closed(copies, tight) <= 0.5 + eps.epsilon
            exact_guaranteed = (
                Fraction(copies - 1, copies) ** tight / 2 <= eps.exact()
            )
            ok = ok and guaranteed and exact_guaranteed and simple >= tight
            grid += 1
    boundary = SecurityThreshold(0.125)
    boundary_tight = s_min_tight(2, boundary)
    boundary_p = p_success_closed(2, boundary_tight)
    boundary_ok = boundary_tight == 2 and boundary_p == 0.625
    ok = ok and boundary_ok and budget.within()
    record(
        6,
        "security-parameter bounds",
        ok,
        f"{grid} grid points hold, boundary tight={boundary_tight} "
        f"P={boundary_p}, {budget.elapsed:.1f}s",
    )
    assert ok


def test_criterion_7_helstrom_dominance():
    budget = Budget(60.0)
    details = []
    ok = True
    for n in (1, 2, 3):
        spec = rotation_scheme(n, copies=2)
        inst = build_discrimination_instance(spec, copies=2, prior=0.5)
        bound = helstrom_success(inst)
        trials = 20_000
        stats = run_forward_search_trials(
            spec, 2, plaintext=None, trials=trials, master_seed=700 + n
        )
        empirical = (stats.trials - stats.errors) / trials
        sigma = math.sqrt(0.25 / trials)
        dominated = empirical <= bound + 3 * sigma
        ok = ok and 0.5 <= bound <= 1.0 and dominated
        details.append(f"n={n}: bound {bound:.4f}, attack {empirical:.4f}")
    ok = ok and budget.within()
    record(7, "Helstrom dominance", ok, "; ".join(details) + f", {budget.elapsed:.1f}s")
    assert ok


def test_criterion_8_scheme_correctness():
    budget = Budget(10.0)
    gen = derive_stream(108)
    failures = 0
    total = 0
    for s in range(1, 9):
        spec = rotation_scheme(4, seed=s)
        for i in range(1_000):
            keys = [sample_private_key(spec.family, gen) for _ in range(s)]
            pks = [public_key_state(spec.family, k) for k in keys]
            b = i % 2
            ct, _ = encrypt_randomized(spec, pks, b, gen)
            failures += decrypt_randomized(spec, keys, ct) != b
            total += 1
    ok = failures == 0 and budget.within()
    record(
        8,
        "scheme correctness",
        ok,
        f"{total} round trips, {failures} failures, {budget.elapsed:.1f}s",
    )
    assert failures == 0
    assert budget.within()


def test_criterion_9_reproducibility(capsys, tmp_path):
    budget = Budget(10.0)
    checks = []

    def payload_of(args):
        assert main(args) == 0
        return capsys.readouterr().out

    symtest = ["symtest", "--copies", "3", "--overlap", "0.25", "--trials", "2000", "--seed", "17"]
    checks.append(("symtest json", payload_of(symtest) == payload_of(symtest)))

    attack_csv = [
        "attack", "--copies-t", "2", "--plaintext", "1",
        "--trials", "3000", "--seed", "18", "--format", "csv",
    ]
    checks.append(("attack csv", payload_of(attack_csv) == payload_of(attack_csv)))

    compound = [
        "compound", "--copies-t", "3", "--codeword-len", "4", "--mode", "bernoulli",
        "--trials", "4000", "--seed", "19",
    ]
    serial = payload_of(compound + ["--jobs", "1"])
    parallel = payload_of(compound + ["--jobs", "3"])
    checks.append(("compound parallel vs serial", serial == parallel))

    out = tmp_path / "report.json"
    smin = ["smin", "--copies-t", "10", "--epsilon", "0.0009765625", "--seed", "20",
            "--out", str(out)]
    assert main(smin) == 0
    first_bytes = out.read_bytes()
    assert main(smin) == 0
    capsys.readouterr()
    checks.append(("smin file bytes", out.read_bytes() == first_bytes))

    ok = all(flag for _, flag in checks) and budget.within()
    failed = [name for name, flag in checks if not flag]
    record(
        9,
        "reproducibility",
        ok,
        f"{len(checks)} comparisons byte-identical"
        + (f" except {failed}" if failed else "")
        + f", {budget.elapsed:.1f}s",
    )
    assert not failed
    assert budget.within()
