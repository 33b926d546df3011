"""Delimited-file ingestion and per-column analysis."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .comparison import plugin_el_ci, plugin_el_test
from .errors import MissingColumnError, PwmError, PwmInputError
from .estimators import SortedSample
from .inference import (
    ajel_confidence_interval,
    ajel_test,
    jel_confidence_interval,
    jel_test,
)
from .simulate import CI_METHODS

__all__ = [
    "ColumnDataset",
    "AnalysisRow",
    "TestRow",
    "load_csv_column",
    "analyze_column",
    "test_column",
]

_NA_TOKENS = {"", "na", "n/a", "nan", "null", "none"}


@dataclass(frozen=True)
class ColumnDataset:
    """One numeric column pulled out of a delimited file."""

    name: str
    values: np.ndarray
    skipped: int


@dataclass(frozen=True)
class AnalysisRow:
    column: str
    method: str
    r: int
    estimate: float | None
    lower: float | None
    upper: float | None
    length: float | None
    error: str | None


@dataclass(frozen=True)
class TestRow:
    column: str
    method: str
    r: int
    statistic: float | None
    threshold: float | None
    p_value: float | None
    reject: bool | None
    error: str | None


def load_csv_column(path, column: str) -> ColumnDataset:
    """Extract one numeric column; blank, NA and non-numeric cells are
    skipped and counted rather than treated as errors."""
    try:
        fh = open(path, "r", encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise PwmInputError(f"cannot read {path}: {exc}") from exc
    values: list[float] = []
    skipped = 0
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise PwmInputError(f"{path} has no header row")
        fields = [f.strip() for f in reader.fieldnames]
        if column not in fields:
            raise MissingColumnError(
                f"column {column!r} not found in {path}; available: {fields}"
            )
        for row in reader:
            cell = row.get(column)
            if cell is None:
                skipped += 1
                continue
            cell = cell.strip()
            if cell.lower() in _NA_TOKENS:
                skipped += 1
                continue
            try:
                value = float(cell)
            except ValueError:
                skipped += 1
                continue
            if not np.isfinite(value):
                skipped += 1
                continue
            values.append(value)
    if not values:
        raise PwmInputError(f"column {column!r} in {path} has no numeric data")
    return ColumnDataset(name=column, values=np.asarray(values), skipped=skipped)


def _check_methods(methods) -> tuple[str, ...]:
    out = tuple(str(m).upper() for m in methods)
    bad = [m for m in out if m not in CI_METHODS]
    if bad:
        raise PwmInputError(f"unknown methods {bad}; expected subset of {CI_METHODS}")
    if not out:
        raise PwmInputError("at least one method is required")
    return out


def analyze_column(data: ColumnDataset, r: int, level: float, methods,
                   ajel_rule: str = "centered", a_n=None) -> list[AnalysisRow]:
    """Point estimate and confidence interval per method.

    Method-level failures (degenerate data, solver breakdown, sample too
    small for the jackknife) are reported inline on their row so the
    remaining methods still produce results.
    """
    methods = _check_methods(methods)
    sample = SortedSample.from_data(data.values)
    rows: list[AnalysisRow] = []
    for method in methods:
        try:
            if method == "JEL":
                ci = jel_confidence_interval(sample, r, level)
            elif method == "AJEL":
                ci = ajel_confidence_interval(sample, r, level, rule=ajel_rule, a_n=a_n)
            else:
                ci = plugin_el_ci(sample, r, level, method)
            rows.append(AnalysisRow(data.name, method, r, ci.point_estimate,
                                    ci.lower, ci.upper, ci.length, None))
        except PwmError as exc:
            rows.append(AnalysisRow(data.name, method, r, None, None, None, None, str(exc)))
    return rows


def test_column(data: ColumnDataset, r: int, beta0: float, alpha: float, methods,
                ajel_rule: str = "centered", a_n=None) -> list[TestRow]:
    """Hypothesis test of ``beta_r = beta0`` per method, failures inline."""
    methods = _check_methods(methods)
    sample = SortedSample.from_data(data.values)
    rows: list[TestRow] = []
    for method in methods:
        try:
            if method == "JEL":
                res = jel_test(sample, r, beta0, alpha)
            elif method == "AJEL":
                res = ajel_test(sample, r, beta0, alpha, rule=ajel_rule, a_n=a_n)
            else:
                res = plugin_el_test(sample, r, beta0, alpha, method)
            rows.append(TestRow(data.name, method, r, res.statistic, res.threshold,
                                res.p_value, res.reject, None))
        except PwmError as exc:
            rows.append(TestRow(data.name, method, r, None, None, None, None, str(exc)))
    return rows
