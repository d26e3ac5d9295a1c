"""Experiment reports and their serialization.

A report is the config echo, the result records, the package version,
and the elapsed wall time. Serialization rounds every float to 12
significant digits, which makes byte-level comparison of two runs
meaningful: the results payload (everything except the elapsed field)
of two runs with the same config and seed must be identical, whatever
the core count.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from .errors import ParameterError


def round12(x: float) -> float:
    """The float closest to x's 12-significant-digit decimal rendering."""
    return float(format(x, ".12g"))


def _round_tree(obj: Any) -> Any:
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return round12(obj)
    if isinstance(obj, dict):
        return {k: _round_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_tree(v) for v in obj]
    return obj


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    results: list
    version: str
    elapsed: float


def to_json_dict(report: ExperimentReport, with_elapsed: bool = True) -> dict:
    out = {
        "config": _round_tree(report.config),
        "results": _round_tree(report.results),
        "version": report.version,
    }
    if with_elapsed:
        out["elapsed"] = round12(report.elapsed)
    return out


def to_json(report: ExperimentReport) -> str:
    return json.dumps(to_json_dict(report), indent=2, sort_keys=True) + "\n"


def results_payload(report: ExperimentReport, fmt: str) -> bytes:
    """The bytes that must reproduce exactly across reruns and job counts."""
    if fmt == "json":
        text = json.dumps(to_json_dict(report, with_elapsed=False), indent=2, sort_keys=True)
        return (text + "\n").encode()
    if fmt == "csv":
        return to_csv(report).encode()
    raise ParameterError(f"unknown format {fmt!r}")


def _csv_cell(value: Any) -> Any:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".12g")
    return value


def records_to_csv(records: Sequence[dict]) -> str:
    """Header then one row per record; columns from the first record's keys."""
    if not records:
        return ""
    columns = list(records[0].keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        if list(record.keys()) != columns:
            raise ParameterError("records disagree on their columns")
        writer.writerow([_csv_cell(record[c]) for c in columns])
    return buf.getvalue()


def to_csv(report: ExperimentReport) -> str:
    return records_to_csv(report.results)


def render(report: ExperimentReport, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise ParameterError(f"unknown format {fmt!r}")


def emit(report: ExperimentReport, fmt: str, path: str | None) -> None:
    """Write the results payload to a file, or stdout for '-' or None.

    The payload deliberately omits the elapsed-time field so reruns with
    the same seed produce byte-identical output.
    """
    payload = results_payload(report, fmt).decode("utf-8")
    if path is None or path == "-":
        sys.stdout.write(payload)
        return
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(payload)
