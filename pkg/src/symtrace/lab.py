"""Trace experiments: estimation, the ellipse counterexample, convergence studies and file I/O."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence

import numpy as np

from .errors import DimensionError, NotSymmetricError
from .hyperoctahedral import MAX_ENUM_DIM, group_average_numerical_value, group_order
from .measure import (
    DEFAULT_BATCHES,
    EstimateReport,
    estimate_surface_average,
    numerical_value_integrand,
    pushforward_sample,
    quadratic_form_integrand,
    quadrature_average_2d,
)
from .norms import NormSpec, parse_norm_spec
from .quadrature import adaptive_integrate
from .rng import DEFAULT_CHUNK_SIZE, check_seed

METHODS = ("montecarlo", "quadrature2d", "groupaverage")


@dataclass(frozen=True)
class MatrixInput:
    rows: np.ndarray
    source: str = "inline"

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[0] != rows.shape[1] or rows.shape[0] == 0:
            raise DimensionError(f"matrix must be square and non-empty, got shape {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise ValueError("matrix has non-finite entries")
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)

    @property
    def n(self):
        return self.rows.shape[0]

    def trace(self):
        return float(np.trace(self.rows))


def _parse_rows_json(text):
    payload = json.loads(text)
    if not isinstance(payload, dict) or "rows" not in payload:
        raise ValueError('matrix JSON must be an object with a "rows" field')
    rows = payload["rows"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValueError("matrix rows must be a list of lists")
    if len({len(r) for r in rows}) > 1:
        raise DimensionError("ragged matrix rows")
    if "n" in payload and payload["n"] != len(rows):
        raise DimensionError(f'"n" is {payload["n"]} but there are {len(rows)} rows')
    return rows


def _parse_rows_csv(text):
    rows = [[float(v) for v in r] for r in csv.reader(io.StringIO(text)) if r]
    if len({len(r) for r in rows}) > 1:
        raise DimensionError("ragged matrix rows")
    return rows


def load_matrix(path) -> MatrixInput:
    """Read a square matrix from JSON ``{"n": N, "rows": [...]}`` or from CSV."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        rows = _parse_rows_json(text)
    else:
        rows = _parse_rows_csv(text)
    return MatrixInput(rows, source=str(path))


@dataclass(frozen=True)
class TraceExperimentConfig:
    norm: NormSpec
    matrix: MatrixInput
    n_samples: int = 10**6
    seed: int = 0
    n_batches: int = DEFAULT_BATCHES
    method: str = "montecarlo"
    tol: float = 1e-10
    chunk_size: int = DEFAULT_CHUNK_SIZE
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.norm, str):
            object.__setattr__(self, "norm", parse_norm_spec(self.norm))
        if not isinstance(self.matrix, MatrixInput):
            object.__setattr__(self, "matrix", MatrixInput(self.matrix))
        check_seed(self.seed)
        if self.matrix.n != self.norm.dim:
            raise DimensionError(f"{self.matrix.n}x{self.matrix.n} matrix for a dim-{self.norm.dim} norm")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.method == "quadrature2d" and self.norm.dim != 2:
            raise DimensionError("quadrature2d needs a two-dimensional norm")
        if self.method == "groupaverage":
            if self.norm.dim > MAX_ENUM_DIM:
                raise DimensionError(f"groupaverage needs dim <= {MAX_ENUM_DIM}")
            if not self.norm.one_symmetric:
                raise NotSymmetricError("groupaverage needs a 1-symmetric norm")


def estimate_trace(config: TraceExperimentConfig) -> EstimateReport:
    """Estimate ``tr A`` as ``N`` times the surface average of ``<A x, x*>``.

    Norms without 1-symmetry are allowed (that is the counterexample path);
    the report then carries ``theorem_hypothesis_violated = True``.
    """
    spec, A, n = config.norm, config.matrix.rows, config.norm.dim
    extra = {
        "method": config.method,
        "trace": config.matrix.trace(),
        "theorem_hypothesis_violated": not spec.one_symmetric,
    }
    tag = "numerical_value"
    if config.method == "montecarlo":
        r = estimate_surface_average(
            spec,
            numerical_value_integrand(spec, A),
            config.n_samples,
            config.seed,
            config.n_batches,
            tag=tag,
            chunk_size=config.chunk_size,
            workers=config.workers,
        )
        extra["n_resampled"] = r.extra["n_resampled"]
        return EstimateReport(n * r.estimate, n * r.stderr, r.n_samples, r.n_batches, r.seed, spec, tag, extra)
    if config.method == "quadrature2d":
        avg = quadrature_average_2d(spec, numerical_value_integrand(spec, A), config.tol / n)
        extra["tol"] = config.tol
        return EstimateReport(n * avg, 0.0, 0, 0, config.seed, spec, tag, extra)
    # groupaverage: one surface-measure point, averaged over its whole orbit.
    x = pushforward_sample(spec, 1, config.seed).points[0]
    avg = group_average_numerical_value(spec, A, x)
    extra["point"] = [float(v) for v in x]
    return EstimateReport(n * avg, 0.0, group_order(n), 0, config.seed, spec, tag, extra)


def estimate_trace_euclidean(matrix, n_samples, seed, n_batches=DEFAULT_BATCHES, workers=1) -> EstimateReport:
    """Euclidean special case: ``N`` times the sphere average of ``<A x, x>``."""
    m = matrix if isinstance(matrix, MatrixInput) else MatrixInput(matrix)
    spec = NormSpec.euclidean(m.n)
    r = estimate_surface_average(
        spec, quadratic_form_integrand(m.rows), n_samples, seed, n_batches, tag="quadratic_form", workers=workers
    )
    extra = {"method": "montecarlo", "trace": m.trace(), "theorem_hypothesis_violated": False}
    return EstimateReport(m.n * r.estimate, m.n * r.stderr, r.n_samples, r.n_batches, r.seed, spec, r.integrand_tag, extra)


def ellipse_average(b, tol=1e-10):
    """Arc-length average of ``x^2`` over the ellipse ``(cos t, b sin t)``.

    ``b = 0`` is the degenerate segment traversed twice, where the speed is ``|sin t|``.
    """
    b = float(b)
    if not 0.0 <= b or not math.isfinite(b):
        raise ValueError(f"b must be a finite non-negative number, got {b}")

    def joint(t):
        speed = np.sqrt(np.sin(t) ** 2 + (b * np.cos(t)) ** 2)
        return np.stack([np.cos(t) ** 2 * speed, speed], axis=1)

    breaks = np.arange(5) * (math.pi / 2)
    (num, den), _ = adaptive_integrate(joint, breaks, 1e-3)
    (num, den), _ = adaptive_integrate(joint, breaks, tol * den / 8.0)
    return num / den


def ellipse_counterexample(b_values: Sequence[float], tol=1e-10):
    """Table of ``(b, average of x^2)``; anything but 1/2 breaks the trace formula for ``diag(1, 0)``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    for b in b_values:
        if not 0.0 <= float(b) <= 1.0:
            raise ValueError(f"b values must lie in [0, 1], got {b}")
    return [(float(b), ellipse_average(b, tol)) for b in b_values]


def convergence_study(config: TraceExperimentConfig, sample_schedule: Sequence[int]) -> List[EstimateReport]:
    """One Monte Carlo report per sample count; run ``i`` uses seed ``config.seed + i``."""
    schedule = [int(n) for n in sample_schedule]
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("sample schedule must be non-empty and strictly increasing")
    reports = []
    for i, n in enumerate(schedule):
        cfg = TraceExperimentConfig(
            config.norm,
            config.matrix,
            n_samples=n,
            seed=config.seed + i,
            n_batches=config.n_batches,
            method="montecarlo",
            chunk_size=config.chunk_size,
            workers=config.workers,
        )
        reports.append(estimate_trace(cfg))
    return reports


def convergence_rows(reports, trace):
    return [(r.n_samples, r.estimate, r.stderr, abs(r.estimate - trace)) for r in reports]


def write_csv(path_or_handle, header, rows):
    """CSV with a header row; floats written with ``repr`` so output is exact and reproducible."""

    def fmt(v):
        return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)

    def emit(handle):
        w = csv.writer(handle, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])

    if hasattr(path_or_handle, "write"):
        emit(path_or_handle)
    else:
        with open(path_or_handle, "w", newline="", encoding="utf-8") as handle:
            emit(handle)
