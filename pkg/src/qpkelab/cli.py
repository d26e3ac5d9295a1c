"""Command-line front end.

Every experiment is configured by flags, seeded explicitly (a fresh
random seed is drawn and echoed when none is given), and emitted as a
JSON or CSV report whose results payload is byte-identical across
reruns and job counts. Empirical quantities are always reported next
to their analytic predictions with binomial standard errors and sigma
counts, so a table can be judged at a glance.

Subcommands: symtest, attack, compound, helstrom, psuccess, smin,
keycheck return data only; report runs an analytic battery and renders
PNG figures next to the delimited files.

Exit codes: 0 success, 2 usage or parameter error, 3 resource-guard
trip, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import os
import secrets
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .adversary import (
    build_discrimination_instance,
    helstrom_success,
    run_compound_trials,
    run_forward_search_trials,
)
from .analysis import (
    SecurityThreshold,
    p_success_closed,
    p_success_conditional,
    s_min_simple,
    s_min_tight,
    success_table,
)
from .errors import QpkeLabError, ResourceError
from .figures import (
    save_attack_success_curve,
    save_codeword_bound_chart,
    save_equality_test_curve,
)
from .keyfamily import (
    ROTATION,
    SEEDED_RANDOM,
    KeyFamilySpec,
    holevo_check,
    pairwise_overlap_bound,
)
from .linalg import StateVector, overlap
from .report import ExperimentReport, emit, records_to_csv
from .rng import trial_stream
from .scheme import orthogonal_scheme
from .symtest import q_closed_form, run_symmetry_test

_REPORT_COPIES = (2, 3, 5)
_REPORT_EXPONENTS = range(2, 21)
_REPORT_OVERLAPS = (0.0, 0.3, 0.6, 0.9)


@dataclass(frozen=True)
class RunConfig:
    """One experiment: a command, its parameters, seed, and output plan."""

    command: str
    parameters: dict
    master_seed: int
    trials: int
    output_format: str = "json"
    output_path: str | None = None


def _config_echo(config: RunConfig) -> dict:
    return {
        "command": config.command,
        "parameters": config.parameters,
        "master_seed": config.master_seed,
        "trials": config.trials,
        "output_format": config.output_format,
        "output_path": config.output_path if config.output_path is not None else "-",
    }


def _family(params: dict) -> KeyFamilySpec:
    kind = ROTATION if params.get("family", "rotation") == "rotation" else SEEDED_RANDOM
    return KeyFamilySpec(
        kind,
        key_bits=params.get("key_bits", 4),
        register_dim=params.get("dim", 2),
        max_copies=params.get("copies_t", 2),
        family_seed=params.get("family_seed", 0),
    )


def _binomial_record(count: int, trials: int, expected: float) -> dict:
    """Empirical frequency next to its prediction, with sigma count."""
    rate = count / trials
    std_err = math.sqrt(max(expected * (1.0 - expected), 0.0) / trials)
    deviation = abs(rate - expected)
    return {
        "empirical": rate,
        "expected": expected,
        "std_err": std_err,
        "abs_deviation": deviation,
        "sigma": deviation / std_err if std_err > 0 else 0.0,
    }


def _run_symtest(config: RunConfig, jobs: int) -> list:
    p = config.parameters
    n, lam, d = p["copies"], p["overlap"], p["dim"]
    if not 0.0 <= lam <= 1.0:
        raise QpkeLabError(f"overlap must lie in [0,1], got {lam}")
    amps = np.zeros(d, dtype=np.complex128)
    amps[0] = lam
    amps[1] = math.sqrt(max(1.0 - lam * lam, 0.0))
    xi = StateVector.basis(d, 0)
    chi = StateVector(amps).normalized()
    # trust the states, not the flag: the prediction uses the realized overlap
    realized = abs(overlap(xi, chi))
    expected = q_closed_form(n, realized)
    if config.trials == 0:
        return []
    zeros = 0
    for index in range(config.trials):
        rng = trial_stream(config.master_seed, index)
        if run_symmetry_test(xi, chi, n, rng).outcome == "zero":
            zeros += 1
    record = {
        "copies": n,
        "dim": d,
        "overlap_configured": lam,
        "overlap_realized": realized,
        "trials": config.trials,
        "zeros": zeros,
    }
    stats = _binomial_record(zeros, config.trials, expected)
    record.update(
        p_zero_empirical=stats["empirical"],
        p_zero_expected=stats["expected"],
        std_err=stats["std_err"],
        abs_deviation=stats["abs_deviation"],
        sigma=stats["sigma"],
    )
    return [record]


def _plaintext_param(params: dict) -> int | None:
    raw = params.get("plaintext", "random")
    return None if raw == "random" else int(raw)


def _run_attack(config: RunConfig, jobs: int) -> list:
    p = config.parameters
    spec = orthogonal_scheme(_family(p))
    copies, prior = p["copies_t"], p["prior"]
    plaintext = _plaintext_param(p)
    stats = run_forward_search_trials(
        spec, copies, plaintext, config.trials, config.master_seed, prior=prior, jobs=jobs
    )
    if config.trials == 0:
        return []
    q = 1.0 / copies
    if plaintext == 0:
        expected_error = 0.0
    elif plaintext == 1:
        expected_error = q
    else:
        expected_error = (1.0 - prior) * q
    err = _binomial_record(stats.errors, stats.trials, expected_error)
    return [
        {
            "family": p.get("family", "rotation"),
            "key_bits": p["key_bits"],
            "copies_t": copies,
            "plaintext": p.get("plaintext", "random"),
            "prior": prior,
            "trials": stats.trials,
            "b0_trials": stats.b0_trials,
            "b1_trials": stats.b1_trials,
            "b0_errors": stats.b0_errors,
            "b1_errors": stats.b1_errors,
            "errors": stats.errors,
            "error_rate": err["empirical"],
            "expected_error_rate": err["expected"],
            "std_err": err["std_err"],
            "abs_deviation": err["abs_deviation"],
            "sigma": err["sigma"],
            "success_rate": stats.successes / stats.trials,
            "expected_success_rate": 1.0 - expected_error,
        }
    ]


def _run_compound(config: RunConfig, jobs: int) -> list:
    p = config.parameters
    spec = orthogonal_scheme(_family(p))
    copies, s, mode, prior = p["copies_t"], p["codeword_len"], p["mode"], p["prior"]
    plaintext = _plaintext_param(p)
    stats = run_compound_trials(
        spec, copies, s, plaintext, mode, config.trials, config.master_seed,
        prior=prior, jobs=jobs,
    )
    if config.trials == 0:
        return []
    if plaintext is None:
        expected = prior * p_success_conditional(copies, s, 0) + (1.0 - prior) * p_success_conditional(copies, s, 1)
    else:
        expected = p_success_conditional(copies, s, plaintext)
    succ = _binomial_record(stats.successes, stats.trials, expected)
    record = {
        "family": p.get("family", "rotation"),
        "key_bits": p["key_bits"],
        "copies_t": copies,
        "codeword_len": s,
        "mode": mode,
        "plaintext": p.get("plaintext", "random"),
        "prior": prior,
        "trials": stats.trials,
        "successes": stats.successes,
        "success_rate": succ["empirical"],
        "expected_success_rate": succ["expected"],
        "closed_form_equal_priors": p_success_closed(copies, s),
        "std_err": succ["std_err"],
        "abs_deviation": succ["abs_deviation"],
        "sigma": succ["sigma"],
        "one_bits": stats.one_bits,
        "one_bit_errors": stats.one_bit_errors,
        "one_bit_error_rate": stats.one_bit_errors / stats.one_bits if stats.one_bits else 0.0,
        "expected_one_bit_error_rate": 1.0 / copies,
    }
    return [record]


def _run_helstrom(config: RunConfig, jobs: int) -> list:
    p = config.parameters
    spec = orthogonal_scheme(_family(p))
    copies, prior = p["copies_t"], p["prior"]
    inst = build_discrimination_instance(spec, copies, prior)
    bound = helstrom_success(inst)
    # the specific attack: right on plaintext 0, fooled w.p. 1/T on 1
    attack_analytic = prior + (1.0 - prior) * (1.0 - 1.0 / copies)
    record = {
        "family": p.get("family", "rotation"),
        "key_bits": p["key_bits"],
        "copies_t": copies,
        "prior": prior,
        "dimension": inst.rho0.dim,
        "helstrom_bound": bound,
        "attack_success_analytic": attack_analytic,
        "gap_analytic": bound - attack_analytic,
        "trials": config.trials,
    }
    if config.trials > 0:
        stats = run_forward_search_trials(
            spec, copies, None, config.trials, config.master_seed, prior=prior, jobs=jobs
        )
        emp = _binomial_record(stats.successes, stats.trials, attack_analytic)
        record.update(
            attack_success_empirical=emp["empirical"],
            std_err=emp["std_err"],
            sigma_vs_analytic=emp["sigma"],
            bound_respected=stats.successes / stats.trials
            <= bound + 3.0 * emp["std_err"],
        )
    return [record]


def _run_psuccess(config: RunConfig, jobs: int) -> list:
    p = config.parameters
    table = success_table(p["copies_t"], range(p["s_min"], p["s_max"] + 1))
    return [
        {
            "s": row.codeword_len,
            "p_b0": row.p_b0,
            "p_b1": row.p_b1,
            "p_avg": row.p_avg,
            "closed_form": row.closed_form,
            "deviation": row.deviation,
        }
        for row in table.rows
    ]


def _run_smin(config: RunConfig, jobs: int) -> list:
    p = config.parameters
    eps = SecurityThreshold(p["epsilon"])
    copies = p["copies_t"]
    tight = s_min_tight(copies, eps)
    simple = s_min_simple(copies, eps)
    p_at_tight = p_success_closed(copies, tight)
    return [
        {
            "copies_t": copies,
            "epsilon": eps.epsilon,
            "tight": tight,
            "simple": simple,
            "p_success_at_tight": p_at_tight,
            "advantage_at_tight": p_at_tight - 0.5,
            "verified": p_at_tight <= 0.5 + eps.epsilon,
        }
    ]


def _run_keycheck(config: RunConfig, jobs: int) -> list:
    fam = _family(config.parameters)
    bound = pairwise_overlap_bound(fam)
    hol = holevo_check(fam)
    return [
        {
            "family": config.parameters.get("family", "rotation"),
            "key_bits": fam.key_bits,
            "register_dim": fam.register_dim,
            "num_keys": fam.num_keys,
            "max_copies": fam.max_copies,
            "overlap_max": bound.value,
            "overlap_method": bound.method,
            "overlap_exhaustive": bound.exhaustive,
            "pairs_checked": bound.pairs_checked,
            "overlap_bound_configured": fam.overlap_bound,
            "holevo_ratio": hol.ratio,
            "holevo_margin": hol.margin,
            "holevo_passed": hol.passed,
        }
    ]


def _run_report(config: RunConfig, jobs: int) -> list:
    out_dir = config.parameters["out_dir"]
    s_max = config.parameters["s_max"]
    os.makedirs(out_dir, exist_ok=True)
    written = []

    success_records = []
    for t in _REPORT_COPIES:
        for row in success_table(t, range(1, s_max + 1)).rows:
            success_records.append(
                {
                    "copies_t": t,
                    "s": row.codeword_len,
                    "p_b0": row.p_b0,
                    "p_b1": row.p_b1,
                    "p_avg": row.p_avg,
                    "closed_form": row.closed_form,
                    "deviation": row.deviation,
                }
            )
    path = os.path.join(out_dir, "success_probability.csv")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(records_to_csv(success_records))
    written.append({"file": path, "kind": "csv", "rows": len(success_records)})

    bound_records = []
    for t in _REPORT_COPIES:
        for k in _REPORT_EXPONENTS:
            eps = SecurityThreshold(2.0**-k)
            bound_records.append(
                {
                    "copies_t": t,
                    "epsilon_exponent": k,
                    "epsilon": eps.epsilon,
                    "tight": s_min_tight(t, eps),
                    "simple": s_min_simple(t, eps),
                }
            )
    path = os.path.join(out_dir, "codeword_bounds.csv")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(records_to_csv(bound_records))
    written.append({"file": path, "kind": "csv", "rows": len(bound_records)})

    for name, render in (
        (
            "attack_success.png",
            lambda fp: save_attack_success_curve(fp, _REPORT_COPIES, s_max),
        ),
        (
            "codeword_bounds.png",
            lambda fp: save_codeword_bound_chart(fp, _REPORT_COPIES, list(_REPORT_EXPONENTS)),
        ),
        (
            "equality_test.png",
            lambda fp: save_equality_test_curve(fp, _REPORT_OVERLAPS, 8),
        ),
    ):
        path = os.path.join(out_dir, name)
        render(path)
        written.append({"file": path, "kind": "png"})
    return written


_HANDLERS = {
    "symtest": _run_symtest,
    "attack": _run_attack,
    "compound": _run_compound,
    "helstrom": _run_helstrom,
    "psuccess": _run_psuccess,
    "smin": _run_smin,
    "keycheck": _run_keycheck,
    "report": _run_report,
}


def run(config: RunConfig, jobs: int = 1) -> ExperimentReport:
    """Dispatch one experiment and wrap its records into a report.

    The results payload is a pure function of (config, master_seed);
    jobs and elapsed never influence it.
    """
    if config.command not in _HANDLERS:
        raise QpkeLabError(f"unknown command {config.command!r}")
    start = time.perf_counter()
    results = _HANDLERS[config.command](config, jobs)
    elapsed = time.perf_counter() - start
    return ExperimentReport(_config_echo(config), results, __version__, elapsed)


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _unit_interval(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError("must lie in [0,1]")
    return value


def _add_output_flags(sp: argparse.ArgumentParser, default_trials: int) -> None:
    sp.add_argument("--seed", type=_u64, default=None, metavar="U64",
                    help="master seed; a fresh one is drawn and echoed if omitted")
    sp.add_argument("--trials", type=_nonneg, default=default_trials, metavar="N")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", default="-", metavar="PATH", help="output file, '-' for stdout")


def _add_family_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--family", choices=("rotation", "random"), default="rotation")
    sp.add_argument("--key-bits", type=_positive, default=4, metavar="N")
    sp.add_argument("--dim", type=_positive, default=2, metavar="D",
                    help="register dimension (random family only)")
    sp.add_argument("--family-seed", type=_u64, default=0, metavar="U64")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpkelab",
        description="simulation lab for quantum-public-key bit encryption, "
        "forward-search attacks, and parity-encoded randomization",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("symtest", help="sample the equality test at a chosen overlap")
    sp.add_argument("--copies", type=_positive, default=3, metavar="N",
                    help="total registers N (one probe plus N-1 references)")
    sp.add_argument("--overlap", type=_unit_interval, default=0.0, metavar="L")
    sp.add_argument("--dim", type=_positive, default=2, metavar="D")
    _add_output_flags(sp, 10000)

    sp = sub.add_parser("attack", help="single-bit forward-search attack trials")
    _add_family_flags(sp)
    sp.add_argument("--copies-t", type=_positive, default=2, metavar="T")
    sp.add_argument("--plaintext", choices=("0", "1", "random"), default="random")
    sp.add_argument("--prior", type=_unit_interval, default=0.5, metavar="P",
                    help="prior probability of plaintext 0")
    sp.add_argument("--jobs", type=_positive, default=1, metavar="J")
    _add_output_flags(sp, 10000)

    sp = sub.add_parser("compound", help="parity-scheme attack trials")
    _add_family_flags(sp)
    sp.add_argument("--copies-t", type=_positive, default=2, metavar="T")
    sp.add_argument("--codeword-len", type=_positive, default=2, metavar="S")
    sp.add_argument("--mode", choices=("quantum", "bernoulli"), default="bernoulli")
    sp.add_argument("--plaintext", choices=("0", "1", "random"), default="random")
    sp.add_argument("--prior", type=_unit_interval, default=0.5, metavar="P")
    sp.add_argument("--jobs", type=_positive, default=1, metavar="J")
    _add_output_flags(sp, 10000)

    sp = sub.add_parser("helstrom", help="optimal-discrimination bound, optionally vs trials")
    _add_family_flags(sp)
    sp.add_argument("--copies-t", type=_positive, default=2, metavar="T")
    sp.add_argument("--prior", type=_unit_interval, default=0.5, metavar="P")
    sp.add_argument("--jobs", type=_positive, default=1, metavar="J")
    _add_output_flags(sp, 0)

    sp = sub.add_parser("psuccess", help="attack success table: double sum vs closed form")
    sp.add_argument("--copies-t", type=_positive, default=2, metavar="T")
    sp.add_argument("--s-min", type=_positive, default=1, metavar="S")
    sp.add_argument("--s-max", type=_positive, default=10, metavar="S")
    _add_output_flags(sp, 0)

    sp = sub.add_parser("smin", help="minimum codeword length for a threshold")
    sp.add_argument("--copies-t", type=_positive, default=2, metavar="T")
    sp.add_argument("--epsilon", type=float, required=True, metavar="E")
    _add_output_flags(sp, 0)

    sp = sub.add_parser("keycheck", help="family overlap bound and copy-count check")
    _add_family_flags(sp)
    sp.add_argument("--copies-t", type=_positive, default=2, metavar="T")
    _add_output_flags(sp, 0)

    sp = sub.add_parser("report", help="analytic battery: CSV tables plus PNG figures")
    sp.add_argument("--out-dir", required=True, metavar="DIR")
    sp.add_argument("--s-max", type=_positive, default=12, metavar="S")
    _add_output_flags(sp, 0)

    return parser


_PARAM_KEYS = {
    "symtest": ("copies", "overlap", "dim"),
    "attack": ("family", "key_bits", "dim", "family_seed", "copies_t", "plaintext", "prior"),
    "compound": (
        "family", "key_bits", "dim", "family_seed", "copies_t",
        "codeword_len", "mode", "plaintext", "prior",
    ),
    "helstrom": ("family", "key_bits", "dim", "family_seed", "copies_t", "prior"),
    "psuccess": ("copies_t", "s_min", "s_max"),
    "smin": ("copies_t", "epsilon"),
    "keycheck": ("family", "key_bits", "dim", "family_seed", "copies_t"),
    "report": ("out_dir", "s_max"),
}


def _config_from_args(args: argparse.Namespace) -> tuple[RunConfig, int]:
    params = {key: getattr(args, key) for key in _PARAM_KEYS[args.command]}
    seed = args.seed if args.seed is not None else secrets.randbits(64)
    config = RunConfig(
        command=args.command,
        parameters=params,
        master_seed=seed,
        trials=args.trials,
        output_format=args.format,
        output_path=args.out,
    )
    return config, getattr(args, "jobs", 1)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config, jobs = _config_from_args(args)
        report = run(config, jobs=jobs)
        emit(report, config.output_format, config.output_path)
        # timing goes to stderr so the payload stays byte-reproducible
        print(f"qpkelab: {config.command} finished in {report.elapsed:.3f}s", file=sys.stderr)
    except ResourceError as exc:
        print(f"qpkelab: resource guard: {exc}", file=sys.stderr)
        return 3
    except QpkeLabError as exc:
        print(f"qpkelab: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qpkelab: i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
