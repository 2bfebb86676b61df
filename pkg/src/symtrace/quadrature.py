"""Vectorised adaptive Gauss-Legendre quadrature on [a, b] with forced breakpoints.

Every leaf interval carries two estimates: an ``order``-point Gauss rule on
the whole interval and the same rule on its two halves. Their difference is
the leaf's error indicator. While the summed indicators exceed ``tol``, the
leaves carrying the largest share of the error are bisected. Gauss nodes are
interior, so integrands may be non-differentiable (or undefined) exactly at
the breakpoints.
"""

from __future__ import annotations

import numpy as np

from .errors import QuadratureError

DEFAULT_ORDER = 8
DEFAULT_MAX_NODES = 4_000_000


def _gauss(f, a, b, x, w):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    t = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(t.ravel()), dtype=float)
    vals = vals.reshape(t.shape + vals.shape[1:])
    return half.reshape((-1,) + (1,) * (vals.ndim - 2)) * np.einsum("j,ij...->i...", w, vals)


def adaptive_integrate(f, breakpoints, tol, order=DEFAULT_ORDER, max_nodes=DEFAULT_MAX_NODES, min_pieces=4):
    """Integrate a vectorised ``f`` over ``[breakpoints[0], breakpoints[-1]]``.

    ``f`` maps a 1-D array of abscissae to an array whose leading axis matches;
    trailing axes are integrated componentwise (the error test uses the worst
    component). Returns ``(integral, n_nodes)``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    edges = np.asarray(sorted(set(float(v) for v in breakpoints)))
    if edges.size < 2:
        raise ValueError("need at least two distinct breakpoints")
    x, w = np.polynomial.legendre.leggauss(order)

    parts = np.linspace(0.0, 1.0, min_pieces + 1)
    a = np.concatenate([lo + (hi - lo) * parts[:-1] for lo, hi in zip(edges[:-1], edges[1:])])
    b = np.concatenate([lo + (hi - lo) * parts[1:] for lo, hi in zip(edges[:-1], edges[1:])])
    coarse = _gauss(f, a, b, x, w)
    nodes = a.size * order

    def refine(a, b, coarse):
        m = 0.5 * (a + b)
        left = _gauss(f, a, m, x, w)
        right = _gauss(f, m, b, x, w)
        fine = left + right
        err = np.abs(fine - coarse).reshape(a.size, -1).max(axis=1)
        return m, left, right, fine, err

    m, left, right, fine, err = refine(a, b, coarse)
    nodes += 2 * a.size * order
    while True:
        total = err.sum()
        if total <= tol:
            break
        if nodes > max_nodes:
            raise QuadratureError(f"adaptive quadrature did not reach tol={tol} within {max_nodes} nodes")
        # Bisect the fewest leaves that together hold half of the error.
        order_idx = np.argsort(-err, kind="stable")
        k = int(np.searchsorted(np.cumsum(err[order_idx]), 0.5 * total)) + 1
        split = np.zeros(a.size, dtype=bool)
        split[order_idx[:k]] = True
        sa, sm, sb = a[split], m[split], b[split]
        if np.any(sb - sa <= 64 * np.finfo(float).eps * np.maximum(np.abs(sa), np.abs(sb))):
            raise QuadratureError(
                f"adaptive quadrature hit floating-point resolution before tol={tol} ({nodes} nodes used)"
            )
        na = np.concatenate([sa, sm])
        nb = np.concatenate([sm, sb])
        ncoarse = np.concatenate([left[split], right[split]])
        nm, nleft, nright, nfine, nerr = refine(na, nb, ncoarse)
        nodes += 2 * na.size * order
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        m = np.concatenate([m[keep], nm])
        left = np.concatenate([left[keep], nleft])
        right = np.concatenate([right[keep], nright])
        fine = np.concatenate([fine[keep], nfine])
        err = np.concatenate([err[keep], nerr])
    # Sum leaves in left-to-right order so the result does not depend on refinement history.
    result = fine[np.argsort(a, kind="stable")].sum(axis=0)
    if result.ndim == 0:
        return float(result), nodes
    return result, nodes
