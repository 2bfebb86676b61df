"""Norming functionals and the smooth/non-smooth split of the unit sphere."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonSmoothPointError, NotSymmetricError, ZeroVectorError
from .norms import NormSpec, _as_batch, _dual_norm, _gradient, _margin, _norm

EQUIVARIANCE_TOL = 1e-12


@dataclass(frozen=True)
class NormingResult:
    """Norming functional at a point plus diagnostics.

    When ``smooth`` is False the functional is the deterministic tie-break
    choice (lowest index for linf and top_k, sign +1 at zero coordinates for l1);
    it still norms the point but is not the only one that does.
    """

    functional: np.ndarray
    smooth: bool
    margin: float
    pairing: float
    dual_norm_value: float

    def to_dict(self):
        return {
            "functional": [float(v) for v in self.functional],
            "smooth": self.smooth,
            "margin": None if math.isinf(self.margin) else float(self.margin),
            "pairing": self.pairing,
            "dual_norm_value": self.dual_norm_value,
        }


def norming_functionals(spec: NormSpec, X, allow_nonsmooth=False):
    """Batch form: returns ``(F, margins)`` with row i of F norming row i of X.

    Raises :class:`NonSmoothPointError` on a kink unless ``allow_nonsmooth``.
    """
    X, _ = _as_batch(spec, X)
    rho = _norm(spec, X)
    if np.any(rho == 0):
        raise ZeroVectorError("the zero vector has no norming functional")
    margins = _margin(spec, X)
    if not allow_nonsmooth:
        bad = margins == 0
        if np.any(bad):
            i = int(np.argmax(bad))
            raise NonSmoothPointError(f"non-smooth point {X[i].tolist()}", margin=0.0)
    return _gradient(spec, X, rho), margins


def norming_functional(spec: NormSpec, x) -> NormingResult:
    """The functional ``x*`` with dual norm one and ``<x*, x> = ||x||``.

    Off the unit sphere the result is that of ``x / ||x||``; the gradient is
    homogeneous of degree zero so no rescaling is needed.
    """
    X, _ = _as_batch(spec, x)
    if X.shape[0] != 1:
        raise ValueError("norming_functional takes a single vector; use norming_functionals for batches")
    F, margins = norming_functionals(spec, X, allow_nonsmooth=True)
    f = F[0]
    margin = float(margins[0])
    return NormingResult(
        functional=f,
        smooth=margin > 0,
        margin=margin,
        pairing=float(f @ X[0]),
        dual_norm_value=float(_dual_norm(spec, F)[0]),
    )


def check_equivariance(spec: NormSpec, x, q, tol=EQUIVARIANCE_TOL) -> bool:
    """Whether ``(Qx)* == Q(x*)`` to ``tol`` in the sup norm."""
    from .hyperoctahedral import apply

    if not spec.one_symmetric:
        raise NotSymmetricError(f"{spec} is not 1-symmetric")
    x = np.asarray(x, dtype=float)
    xstar, _ = norming_functionals(spec, x)
    qxstar, _ = norming_functionals(spec, apply(q, x))
    return bool(np.max(np.abs(qxstar[0] - apply(q, xstar[0]))) <= tol)
