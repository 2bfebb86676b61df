"""Norm families on R^N: evaluation, gradients, dual norms and descriptors.

Every function accepts either a single vector of shape ``(N,)`` or a batch of
row vectors of shape ``(m, N)``; scalar-valued results come back as a float or
an ``(m,)`` array accordingly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import DimensionError, NonSmoothPointError, NormSpecError, ZeroVectorError

FAMILIES = ("euclidean", "lp", "l1", "linf", "top_k", "weighted_l2")

# Exponent window for the lp family; outside it |x|^(p-1) and the dual
# exponent p/(p-1) lose too much precision. l1/linf cover the limits exactly.
P_MIN = 1.01
P_MAX = 64.0

SMOOTH_EVERYWHERE = math.inf


@dataclass(frozen=True)
class NormSpec:
    """Descriptor of a norm on R^dim.

    Only the parameter belonging to ``family`` is set: ``p`` for lp, ``k`` for
    top_k (sum of the k largest moduli), ``b`` for weighted_l2, where the norm
    is ``sqrt(sum x_i^2 / b_i^2)``.
    """

    dim: int
    family: str
    p: Optional[float] = None
    k: Optional[int] = None
    b: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise NormSpecError(f"dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        if self.family not in FAMILIES:
            raise NormSpecError(f"unknown norm family {self.family!r}")
        if self.family == "lp":
            if self.p is None:
                raise NormSpecError("lp norm needs an exponent p")
            p = float(self.p)
            if not math.isfinite(p):
                raise NormSpecError("lp with p = inf is not accepted; use the linf family")
            if p <= 1.0:
                raise NormSpecError(f"lp needs p > 1 (got {p}); use the l1 family for p = 1")
            if not P_MIN <= p <= P_MAX:
                raise NormSpecError(f"lp exponent {p} outside supported range [{P_MIN}, {P_MAX}]")
            object.__setattr__(self, "p", p)
        elif self.p is not None:
            raise NormSpecError(f"family {self.family} takes no exponent")
        if self.family == "top_k":
            if self.k is None or not 1 <= int(self.k) <= self.dim or int(self.k) != self.k:
                raise NormSpecError(f"top_k needs an integer 1 <= k <= {self.dim}, got {self.k!r}")
            object.__setattr__(self, "k", int(self.k))
        elif self.k is not None:
            raise NormSpecError(f"family {self.family} takes no k")
        if self.family == "weighted_l2":
            if self.b is None:
                raise NormSpecError("weighted_l2 needs weights b")
            b = tuple(float(v) for v in self.b)
            if len(b) != self.dim:
                raise NormSpecError(f"weighted_l2 has {len(b)} weights for dim {self.dim}")
            if not all(math.isfinite(v) and v > 0 for v in b):
                raise NormSpecError("weighted_l2 weights must be positive and finite")
            object.__setattr__(self, "b", b)
        elif self.b is not None:
            raise NormSpecError(f"family {self.family} takes no weights")

    @classmethod
    def euclidean(cls, dim):
        return cls(dim, "euclidean")

    @classmethod
    def lp(cls, p, dim):
        return cls(dim, "lp", p=p)

    @classmethod
    def l1(cls, dim):
        return cls(dim, "l1")

    @classmethod
    def linf(cls, dim):
        return cls(dim, "linf")

    @classmethod
    def top_k(cls, k, dim):
        return cls(dim, "top_k", k=k)

    @classmethod
    def weighted_l2(cls, b):
        b = tuple(b)
        return cls(len(b), "weighted_l2", b=b)

    @property
    def one_symmetric(self):
        if self.family == "weighted_l2":
            return len(set(self.b)) == 1
        return True

    @property
    def everywhere_smooth(self):
        return self.family in ("euclidean", "lp", "weighted_l2")

    def __str__(self):
        return format_norm_spec(self)


def _num(value):
    value = float(value)
    if value.is_integer():
        return str(int(value))
    return repr(value)


def format_norm_spec(spec: NormSpec) -> str:
    """Canonical text form, inverse of :func:`parse_norm_spec`."""
    if spec.family == "euclidean":
        return f"euclidean:{spec.dim}"
    if spec.family == "lp":
        return f"lp:{_num(spec.p)}:{spec.dim}"
    if spec.family == "l1":
        return f"l1:{spec.dim}"
    if spec.family == "linf":
        return f"linf:{spec.dim}"
    if spec.family == "top_k":
        return f"topk:{spec.k}:{spec.dim}"
    return "wl2:" + ",".join(_num(v) for v in spec.b)


_INT = r"([0-9]+)"
_FLOAT = r"(?:[-+]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?|[-+]?inf)"
_REAL = "(" + _FLOAT + ")"


def parse_norm_spec(text: str) -> NormSpec:
    """Parse ``euclidean:N``, ``lp:p:N``, ``l1:N``, ``linf:N``, ``topk:k:N`` or ``wl2:b1,...,bN``.

    ``lp:1:N`` is read as the l1 norm; ``lp`` with p < 1 or p = inf is rejected.
    """
    if not isinstance(text, str):
        raise NormSpecError(f"norm spec must be a string, got {type(text).__name__}")
    s = text.strip()
    m = re.fullmatch(r"(euclidean|l1|linf):" + _INT, s)
    if m:
        return NormSpec(int(m.group(2)), m.group(1))
    m = re.fullmatch(r"lp:" + _REAL + ":" + _INT, s)
    if m:
        p = float(m.group(1))
        dim = int(m.group(2))
        if p == 1.0:
            return NormSpec.l1(dim)
        if p < 1.0:
            raise NormSpecError(f"lp with p = {p} < 1 is not a norm")
        return NormSpec.lp(p, dim)
    m = re.fullmatch(r"topk:" + _INT + ":" + _INT, s)
    if m:
        return NormSpec.top_k(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"wl2:(" + _FLOAT + r"(?:," + _FLOAT + r")*)", s)
    if m:
        return NormSpec.weighted_l2([float(v) for v in m.group(1).split(",")])
    raise NormSpecError(f"malformed norm spec {text!r}")


def _as_batch(spec, x, name="x"):
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != spec.dim:
        raise DimensionError(f"{name} has shape {np.shape(x)}, expected last axis {spec.dim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr, single


def _unbatch(values, single):
    return float(values[0]) if single else values


def _lp_norm(X, p):
    # Factor out the max modulus before powering to dodge overflow/underflow.
    a = np.abs(X)
    m = a.max(axis=1)
    safe = np.where(m > 0, m, 1.0)
    r = safe * np.sum((a / safe[:, None]) ** p, axis=1) ** (1.0 / p)
    return np.where(m > 0, r, 0.0)


def _l2_norm(X):
    return _lp_norm(X, 2.0)


def _sorted_moduli_desc(X):
    return -np.sort(-np.abs(X), axis=1)


def _norm(spec, X):
    fam = spec.family
    if fam == "euclidean":
        return _l2_norm(X)
    if fam == "lp":
        return _lp_norm(X, spec.p)
    if fam == "l1":
        return np.sum(np.abs(X), axis=1)
    if fam == "linf":
        return np.max(np.abs(X), axis=1)
    if fam == "top_k":
        return np.sum(_sorted_moduli_desc(X)[:, : spec.k], axis=1)
    return _l2_norm(X / np.asarray(spec.b))


def _dual_norm(spec, F):
    fam = spec.family
    if fam == "euclidean":
        return _l2_norm(F)
    if fam == "lp":
        q = spec.p / (spec.p - 1.0)
        return _lp_norm(F, q)
    if fam == "l1":
        return np.max(np.abs(F), axis=1)
    if fam == "linf":
        return np.sum(np.abs(F), axis=1)
    if fam == "top_k":
        a = np.abs(F)
        return np.maximum(a.max(axis=1), a.sum(axis=1) / spec.k)
    return _l2_norm(F * np.asarray(spec.b))


def _margin(spec, X):
    fam = spec.family
    if spec.everywhere_smooth:
        return np.full(X.shape[0], SMOOTH_EVERYWHERE)
    if fam == "l1":
        return np.min(np.abs(X), axis=1)
    s = _sorted_moduli_desc(X)
    k = 1 if fam == "linf" else spec.k
    kth = s[:, k - 1]
    nxt = s[:, k] if k < spec.dim else np.zeros(X.shape[0])
    return np.minimum(kth - nxt, kth)


def _signs(X):
    # Zero coordinates get sign +1 (tie-break for the non-smooth set).
    return np.where(X < 0, -1.0, 1.0)


def _gradient(spec, X, rho):
    """Closed-form gradient, tie-broken on the non-smooth set."""
    fam = spec.family
    if fam == "euclidean":
        return X / rho[:, None]
    if fam == "lp":
        return np.sign(X) * (np.abs(X) / rho[:, None]) ** (spec.p - 1.0)
    if fam == "l1":
        return _signs(X)
    if fam == "weighted_l2":
        return X / np.square(np.asarray(spec.b)) / rho[:, None]
    G = np.zeros_like(X)
    rows = np.arange(X.shape[0])[:, None]
    if fam == "linf":
        idx = np.argmax(np.abs(X), axis=1)[:, None]
    else:
        # Stable sort keeps the lowest index first among tied moduli.
        idx = np.argsort(-np.abs(X), axis=1, kind="stable")[:, : spec.k]
    G[rows, idx] = _signs(X[rows, idx])
    return G


def norm_eval(spec: NormSpec, x):
    """Norm of ``x`` (or of each row of a batch)."""
    X, single = _as_batch(spec, x)
    return _unbatch(_norm(spec, X), single)


def dual_norm_eval(spec: NormSpec, f):
    """Dual norm of the functional ``f``, paired with vectors by the dot product."""
    F, single = _as_batch(spec, f, "f")
    return _unbatch(_dual_norm(spec, F), single)


def smoothness_margin(spec: NormSpec, x):
    """Distance-to-tie diagnostic; zero exactly where the norm has a kink.

    Returns ``inf`` for families that are smooth away from the origin.
    """
    X, single = _as_batch(spec, x)
    if np.any(~X.any(axis=1)):
        raise ZeroVectorError("smoothness margin is undefined at the zero vector")
    return _unbatch(_margin(spec, X), single)


def norm_gradient(spec: NormSpec, x, tol=0.0):
    """Euclidean gradient of the norm at a smooth point.

    Parameters
    ----------
    spec : NormSpec
    x : array_like, shape (N,) or (m, N)
    tol : float
        Points whose smoothness margin is ``<= tol`` are refused.

    Raises
    ------
    ZeroVectorError
        If any row of ``x`` is zero.
    NonSmoothPointError
        If any row sits on (or within ``tol`` of) a kink of the norm.
    """
    X, single = _as_batch(spec, x)
    rho = _norm(spec, X)
    if np.any(rho == 0):
        raise ZeroVectorError("the norm is not differentiable at the zero vector")
    margin = _margin(spec, X)
    bad = margin <= tol
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NonSmoothPointError(
            f"non-smooth point {X[i].tolist()} (margin {margin[i]!r})", margin=float(margin[i])
        )
    G = _gradient(spec, X, rho)
    return G[0] if single else G


def is_one_symmetric(spec: NormSpec) -> bool:
    """Whether signed coordinate permutations are isometries of the norm."""
    return spec.one_symmetric


def symmetry_witness(spec: NormSpec):
    """A pair ``(x, (i, j))`` with ``||x|| != ||swap_ij x||``, or None if the norm is 1-symmetric."""
    if spec.one_symmetric:
        return None
    b = spec.b
    i = 0
    j = next(t for t in range(spec.dim) if b[t] != b[i])
    x = np.zeros(spec.dim)
    x[i] = 1.0
    return x, (i, j)
