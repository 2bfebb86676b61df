"""Normalised surface measure on the unit sphere of a norm.

Points are produced by pushing uniform Euclidean-sphere samples ``u`` through
the radial map ``u -> u / rho(u)`` and weighting them by the density of the
pushed-forward area element,

    w(u) = |grad rho(u)|_2 / rho(u)^N,

so that ``sum w_i f(x_i) / sum w_i`` estimates the surface-measure average of
``f``. In two dimensions the same averages are available by quadrature along
the curve.

Integrands are vectorised: they receive an ``(m, N)`` array of points and
return ``m`` values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .duality import norming_functionals
from .errors import DimensionError
from .norms import NormSpec, _as_batch, _gradient, _margin, _norm, norm_gradient
from .quadrature import adaptive_integrate
from .rng import DEFAULT_CHUNK_SIZE, check_seed, map_chunks

DEFAULT_BATCHES = 100

Integrand = Callable[[np.ndarray], np.ndarray]


def _unit_gaussians(rng, count, dim):
    g = rng.standard_normal((count, dim))
    r = np.sqrt(np.sum(g * g, axis=1))
    zero = r == 0
    while np.any(zero):
        g[zero] = rng.standard_normal((int(zero.sum()), dim))
        r[zero] = np.sqrt(np.sum(g[zero] * g[zero], axis=1))
        zero = r == 0
    return g / r[:, None]


def _check_counts(n, dim):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"sample count must be a positive integer, got {n!r}")
    if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)) or dim < 1:
        raise ValueError(f"dim must be a positive integer, got {dim!r}")


def sample_euclidean_sphere(n, dim, seed, chunk_size=DEFAULT_CHUNK_SIZE, workers=1):
    """``n`` uniform points on the Euclidean unit sphere in R^dim, as an ``(n, dim)`` array."""
    _check_counts(n, dim)
    check_seed(seed)
    chunks = map_chunks(lambda rng, c: _unit_gaussians(rng, c, dim), n, seed, chunk_size, workers)
    return np.concatenate(chunks)


def _weights(spec, U):
    rho = _norm(spec, U)
    G = _gradient(spec, U, rho)
    return np.sqrt(np.sum(G * G, axis=1)) / rho**spec.dim


def surface_weight(spec: NormSpec, u):
    """Pushforward density ``|grad rho(u)|_2 / rho(u)^N`` at Euclidean-sphere direction(s) ``u``.

    Refuses non-smooth directions.
    """
    U, single = _as_batch(spec, u, "u")
    norm_gradient(spec, U)
    w = _weights(spec, U)
    return float(w[0]) if single else w


@dataclass
class SampleBatch:
    """Points on the unit sphere of ``spec`` with their pushforward weights."""

    points: np.ndarray
    weights: np.ndarray
    seed: int
    spec: NormSpec
    n_resampled: int = 0

    def __len__(self):
        return self.points.shape[0]


def _pushforward_chunk(spec, rng, count):
    U = _unit_gaussians(rng, count, spec.dim)
    resampled = 0
    if not spec.everywhere_smooth:
        # Exact ties have probability zero; redraw them rather than tie-break.
        bad = _margin(spec, U) == 0
        while np.any(bad):
            k = int(bad.sum())
            resampled += k
            U[bad] = _unit_gaussians(rng, k, spec.dim)
            bad = _margin(spec, U) == 0
    rho = _norm(spec, U)
    G = _gradient(spec, U, rho)
    w = np.sqrt(np.sum(G * G, axis=1)) / rho**spec.dim
    return U / rho[:, None], w, resampled


def pushforward_sample(spec: NormSpec, n, seed, chunk_size=DEFAULT_CHUNK_SIZE, workers=1) -> SampleBatch:
    """Weighted sample of the surface measure on the unit sphere of ``spec``."""
    _check_counts(n, spec.dim)
    seed = check_seed(seed)
    parts = map_chunks(lambda rng, c: _pushforward_chunk(spec, rng, c), n, seed, chunk_size, workers)
    return SampleBatch(
        points=np.concatenate([p[0] for p in parts]),
        weights=np.concatenate([p[1] for p in parts]),
        seed=seed,
        spec=spec,
        n_resampled=sum(p[2] for p in parts),
    )


@dataclass
class EstimateReport:
    estimate: float
    stderr: float
    n_samples: int
    n_batches: int
    seed: int
    spec_echo: NormSpec
    integrand_tag: str
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        d = {
            "estimate": float(self.estimate),
            "stderr": float(self.stderr),
            "n_samples": int(self.n_samples),
            "n_batches": int(self.n_batches),
            "seed": int(self.seed),
            "norm": str(self.spec_echo),
            "integrand": self.integrand_tag,
        }
        d.update(self.extra)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _ratio_with_stderr(values, weights, n_batches):
    """Self-normalised estimate and batch-means standard error.

    Values are centred on the first sample before weighting, which leaves the
    estimator unchanged but makes a constant integrand come back exactly.
    """
    ref = values[0]
    dev = values - ref
    estimate = ref + np.sum(weights * dev) / np.sum(weights)
    wb = weights.reshape(n_batches, -1)
    db = dev.reshape(n_batches, -1)
    batch_dev = np.sum(wb * db, axis=1) / np.sum(wb, axis=1)
    stderr = np.std(batch_dev, ddof=1) / math.sqrt(n_batches)
    return float(estimate), float(stderr)


def _evaluate(integrand, points):
    values = np.asarray(integrand(points), dtype=float)
    if values.shape != (points.shape[0],):
        raise DimensionError(f"integrand returned shape {values.shape}, expected ({points.shape[0]},)")
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(f"integrand is not finite at sampled point {points[i].tolist()}: {values[i]!r}")
    return values


def _batch_layout(n, n_batches):
    if isinstance(n_batches, bool) or not isinstance(n_batches, (int, np.integer)) or n_batches < 2:
        raise ValueError(f"n_batches must be an integer >= 2, got {n_batches!r}")
    if n < n_batches:
        raise ValueError(f"need at least n_batches={n_batches} samples, got {n}")
    # Trailing remainder samples are not drawn, so every batch has equal size.
    return (n // n_batches) * n_batches


def estimate_surface_average(
    spec: NormSpec,
    integrand: Integrand,
    n,
    seed,
    n_batches=DEFAULT_BATCHES,
    tag="custom",
    chunk_size=DEFAULT_CHUNK_SIZE,
    workers=1,
    sample: Optional[SampleBatch] = None,
) -> EstimateReport:
    """Monte Carlo average of ``integrand`` against the normalised surface measure.

    The estimate is the self-normalised ratio ``sum w f / sum w``; ``stderr`` is
    the standard deviation of the per-batch ratios over ``sqrt(n_batches)``.
    ``n`` is rounded down to a multiple of ``n_batches``. A precomputed
    ``sample`` of matching size may be passed to share draws between integrands.
    """
    _check_counts(n, spec.dim)
    used = _batch_layout(n, n_batches)
    if sample is None:
        sample = pushforward_sample(spec, used, seed, chunk_size, workers)
    elif len(sample) != used or sample.spec != spec or sample.seed != seed:
        raise ValueError("supplied sample does not match (spec, n, seed)")
    values = _evaluate(integrand, sample.points)
    estimate, stderr = _ratio_with_stderr(values, sample.weights, n_batches)
    return EstimateReport(
        estimate=estimate,
        stderr=stderr,
        n_samples=used,
        n_batches=n_batches,
        seed=sample.seed,
        spec_echo=spec,
        integrand_tag=tag,
        extra={"n_resampled": sample.n_resampled},
    )


def euclidean_sphere_area(dim):
    """Surface area of the Euclidean unit sphere in R^dim."""
    return 2.0 * math.pi ** (dim / 2) / math.gamma(dim / 2)


def surface_area(spec: NormSpec, n, seed, n_batches=DEFAULT_BATCHES, chunk_size=DEFAULT_CHUNK_SIZE, workers=1):
    """Monte Carlo estimate of the (unnormalised) surface area of the unit sphere of ``spec``."""
    _check_counts(n, spec.dim)
    used = _batch_layout(n, n_batches)
    sample = pushforward_sample(spec, used, seed, chunk_size, workers)
    scale = euclidean_sphere_area(spec.dim)
    wb = sample.weights.reshape(n_batches, -1).mean(axis=1) * scale
    return EstimateReport(
        estimate=float(sample.weights.mean() * scale),
        stderr=float(np.std(wb, ddof=1) / math.sqrt(n_batches)),
        n_samples=used,
        n_batches=n_batches,
        seed=sample.seed,
        spec_echo=spec,
        integrand_tag="surface_area",
        extra={"n_resampled": sample.n_resampled},
    )


# -- two-dimensional quadrature ------------------------------------------------

# Every kink of the supported 2-D norms (coordinate axes and diagonals) sits at
# a multiple of pi/4 in direction space.
KINK_ANGLES = tuple(np.arange(9) * (math.pi / 4))


def _require_2d(spec):
    if spec.dim != 2:
        raise DimensionError(f"two-dimensional quadrature needs dim 2, got {spec.dim}")


def _directions(theta):
    return np.stack([np.cos(theta), np.sin(theta)], axis=1)


def sphere_curve(spec: NormSpec, theta):
    """Point ``G(theta) = u / rho(u)`` of the unit sphere and its speed ``|G'(theta)|_2``."""
    _require_2d(spec)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    U = _directions(theta)
    dU = np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    rho = _norm(spec, U)
    G = _gradient(spec, U, rho)
    drho = np.sum(G * dU, axis=1)
    dX = dU / rho[:, None] - U * (drho / rho**2)[:, None]
    return U / rho[:, None], np.sqrt(np.sum(dX * dX, axis=1))


def quadrature_average_2d(spec: NormSpec, integrand: Integrand, tol=1e-10, max_nodes=None):
    """Arc-length average of ``integrand`` over the unit sphere of a 2-D norm.

    Integrates ``f(G(t)) |G'(t)|`` and ``|G'(t)|`` over ``[0, 2 pi]`` with
    forced breakpoints at the kink angles and returns their ratio.
    """
    _require_2d(spec)
    kwargs = {} if max_nodes is None else {"max_nodes": max_nodes}

    def joint(theta):
        X, speed = sphere_curve(spec, theta)
        return np.stack([_evaluate(integrand, X) * speed, speed], axis=1)

    (num, den), _ = adaptive_integrate(joint, KINK_ANGLES, 1e-3, **kwargs)
    # Absolute tolerance chosen so the ratio is within ``tol``.
    abs_tol = tol * den / (4.0 * (1.0 + abs(num / den)))
    (num, den), _ = adaptive_integrate(joint, KINK_ANGLES, abs_tol, **kwargs)
    return num / den


def perimeter_2d(spec: NormSpec, tol=1e-10):
    """Length of the unit sphere of a 2-D norm, as the integral of the pushforward weight over the circle."""
    _require_2d(spec)
    value, _ = adaptive_integrate(lambda t: _weights(spec, _directions(t)), KINK_ANGLES, tol)
    return value


def arc_length_2d(spec: NormSpec, tol=1e-10):
    """Length of the unit sphere of a 2-D norm from the parametric speed ``|G'(theta)|``."""
    _require_2d(spec)
    value, _ = adaptive_integrate(lambda t: sphere_curve(spec, t)[1], KINK_ANGLES, tol)
    return value


def numerical_value_integrand(spec: NormSpec, a):
    """Vectorised ``x -> <A x, x*> / <x, x*>``.

    On the unit sphere the denominator is one; dividing by it keeps the
    integrand homogeneous of degree zero and makes ``A = I`` give exactly 1.
    """
    A = np.asarray(a, dtype=float)
    if A.shape != (spec.dim, spec.dim):
        raise DimensionError(f"matrix of shape {A.shape} for dim {spec.dim}")

    def f(X):
        F, _ = norming_functionals(spec, X)
        return np.einsum("ij,ij->i", X @ A.T, F) / np.einsum("ij,ij->i", X, F)

    return f


def quadratic_form_integrand(a):
    """Vectorised ``x -> <A x, x> / <x, x>``, the Euclidean special case."""
    A = np.asarray(a, dtype=float)

    def f(X):
        return np.einsum("ij,ij->i", X @ A.T, X) / np.einsum("ij,ij->i", X, X)

    return f
