"""The hyperoctahedral group BC_N of signed permutations.

An element is stored as a pair ``(sigma, beta)`` acting on the standard basis by
``Q e_i = beta[i] e_{sigma[i]}``; indices are 0-based. Dense matrices are only
built on request.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from numbers import Integral, Rational
from typing import Iterator, Tuple

import numpy as np

from .duality import norming_functionals
from .errors import DimensionError, NotSymmetricError, ZeroVectorError
from .norms import NormSpec, _as_batch, _norm

MAX_ENUM_DIM = 8


@dataclass(frozen=True)
class SignedPermutation:
    sigma: Tuple[int, ...]
    beta: Tuple[int, ...]

    def __post_init__(self):
        sigma = tuple(int(s) for s in self.sigma)
        beta = tuple(int(b) for b in self.beta)
        if len(sigma) != len(beta):
            raise ValueError("sigma and beta must have equal length")
        if sorted(sigma) != list(range(len(sigma))):
            raise ValueError(f"sigma {sigma} is not a permutation of 0..{len(sigma) - 1}")
        if any(b not in (-1, 1) for b in beta):
            raise ValueError(f"beta {beta} must contain only +1/-1")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "beta", beta)

    @property
    def n(self):
        return len(self.sigma)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def random(cls, n, rng):
        return cls(tuple(rng.permutation(n)), tuple(rng.choice((-1, 1), size=n)))

    def __call__(self, x):
        return apply(self, x)

    def __matmul__(self, other):
        """Composition: ``(p @ q)(x) == p(q(x))``."""
        if self.n != other.n:
            raise DimensionError("cannot compose signed permutations of different degree")
        sigma = tuple(self.sigma[other.sigma[i]] for i in range(self.n))
        beta = tuple(other.beta[i] * self.beta[other.sigma[i]] for i in range(self.n))
        return SignedPermutation(sigma, beta)

    def inverse(self):
        sigma = [0] * self.n
        beta = [1] * self.n
        for i, (s, b) in enumerate(zip(self.sigma, self.beta)):
            sigma[s] = i
            beta[s] = b
        return SignedPermutation(tuple(sigma), tuple(beta))

    def matrix(self):
        Q = np.zeros((self.n, self.n), dtype=int)
        Q[list(self.sigma), list(range(self.n))] = self.beta
        return Q

    def transpose_action(self, f):
        """``Q^T f``, which for these orthogonal matrices is the inverse action."""
        return apply(self.inverse(), f)


def group_order(n):
    return 2**n * math.factorial(n)


def _check_degree(n):
    if isinstance(n, bool) or not isinstance(n, Integral) or not 1 <= n <= MAX_ENUM_DIM:
        raise ValueError(f"group degree must be an integer in 1..{MAX_ENUM_DIM}, got {n!r}")


def enumerate_group(n: int) -> Iterator[SignedPermutation]:
    """All ``2^n n!`` signed permutations of degree ``n``, in a fixed order."""
    _check_degree(n)
    for sigma in itertools.permutations(range(n)):
        for beta in itertools.product((1, -1), repeat=n):
            yield SignedPermutation(sigma, beta)


@lru_cache(maxsize=None)
def group_arrays(n: int):
    """The group as two ``(2^n n!, n)`` arrays ``sigma`` and ``beta``, same order as :func:`enumerate_group`."""
    _check_degree(n)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    signs = np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int8)
    sigma = np.repeat(perms, len(signs), axis=0)
    beta = np.tile(signs, (len(perms), 1))
    sigma.flags.writeable = False
    beta.flags.writeable = False
    return sigma, beta


def apply(q: SignedPermutation, x):
    """``Qx`` with ``(Qx)[sigma[i]] = beta[i] * x[i]``.

    Works on object arrays too, so exact ``Fraction`` inputs stay exact.
    """
    x = np.asarray(x)
    if x.shape[-1] != q.n:
        raise DimensionError(f"vector of length {x.shape[-1]} for a degree-{q.n} permutation")
    out = np.empty_like(x)
    out[..., list(q.sigma)] = x * np.asarray(q.beta)
    return out


def _apply_all(sigma, beta, x):
    """Every group element applied to ``x``: row g is ``Q_g x``."""
    out = np.empty(sigma.shape, dtype=float)
    rows = np.arange(sigma.shape[0])[:, None]
    out[rows, sigma] = beta * x[None, :]
    return out


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix of Python ints or Fractions."""

    entries: Tuple[Tuple[Rational, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionError("ExactMatrix must be square and non-empty")
        for r in rows:
            for v in r:
                if isinstance(v, bool) or not isinstance(v, Rational):
                    raise TypeError(f"ExactMatrix entries must be int or Fraction, got {type(v).__name__}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows):
        return cls(tuple(tuple(int(v) if isinstance(v, (np.integer,)) else v for v in r) for r in rows))

    @classmethod
    def scalar(cls, value, n):
        return cls(tuple(tuple(value if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def n(self):
        return len(self.entries)

    def trace(self):
        return sum((self.entries[i][i] for i in range(self.n)), 0)

    def to_array(self):
        return np.array(self.entries, dtype=object)


def conjugate_entries(q: SignedPermutation, a):
    """``Q^T A Q`` by index/sign bookkeeping: entry (i, j) is ``beta_i beta_j a[sigma_i, sigma_j]``."""
    s, b = q.sigma, q.beta
    n = q.n
    return [[b[i] * b[j] * a[s[i]][s[j]] for j in range(n)] for i in range(n)]


def conjugation_sum(a: ExactMatrix) -> ExactMatrix:
    """Exact ``sum over Q in BC_N of Q^T A Q``; equals ``(N-1)! 2^N tr(A) I``."""
    if not isinstance(a, ExactMatrix):
        a = ExactMatrix.from_rows(a)
    n = a.n
    _check_degree(n)
    rows = a.entries
    total = [[0] * n for _ in range(n)]
    for sigma in itertools.permutations(range(n)):
        for beta in itertools.product((1, -1), repeat=n):
            for i in range(n):
                ti = total[i]
                ri = rows[sigma[i]]
                bi = beta[i]
                for j in range(n):
                    ti[j] += bi * beta[j] * ri[sigma[j]]
    return ExactMatrix(tuple(tuple(r) for r in total))


def conjugation_constant(a: ExactMatrix):
    """``(N-1)! 2^N tr(A)``, the scalar the conjugation sum collapses to."""
    n = a.n
    return math.factorial(n - 1) * 2**n * a.trace()


def fibre_sum(a: ExactMatrix, sigma):
    """Sum of ``Q^T A Q`` over the ``2^N`` sign choices sharing permutation ``sigma``.

    Off-diagonal entries cancel within each fibre, leaving
    ``2^N diag(a[sigma_i, sigma_i])``.
    """
    n = a.n
    total = [[0] * n for _ in range(n)]
    for beta in itertools.product((1, -1), repeat=n):
        term = conjugate_entries(SignedPermutation(sigma, beta), a.entries)
        for i in range(n):
            for j in range(n):
                total[i][j] += term[i][j]
    return ExactMatrix(tuple(tuple(r) for r in total))


def group_average_numerical_value(spec: NormSpec, a, x) -> float:
    """Orbit average of the numerical value ``<A y, y*>`` over ``y = Qx``, Q in BC_N.

    ``x`` is first scaled onto the unit sphere. For a 1-symmetric norm and a
    smooth ``x`` the result is exactly ``tr(A) / N``; no integration is involved.
    """
    if not spec.one_symmetric:
        raise NotSymmetricError(f"{spec} is not 1-symmetric; the orbit identity is not claimed")
    X, _ = _as_batch(spec, x)
    if X.shape[0] != 1:
        raise DimensionError("group_average_numerical_value takes a single point")
    A = np.asarray(a, dtype=float)
    if A.shape != (spec.dim, spec.dim):
        raise DimensionError(f"matrix of shape {A.shape} for dim {spec.dim}")
    rho = _norm(spec, X)[0]
    if rho == 0:
        raise ZeroVectorError("the zero vector has no norming functional")
    sigma, beta = group_arrays(spec.dim)
    orbit = _apply_all(sigma, beta, X[0] / rho)
    # Norming functionals of every orbit point; raises if x is non-smooth.
    fstar, _ = norming_functionals(spec, orbit)
    values = np.einsum("gi,gi->g", orbit @ A.T, fstar)
    return float(np.mean(values))
