"""Eigenvalue-cutoff filter design.

The reflecting operator ``H = Z diag(xi) Z'`` is truncated by zeroing the
eigenvalues below a cutoff, ``H_k = Z diag(xi_k) Z'``. Its interior rows
replace those of the smoother, while the boundary rows keep the chosen
asymmetric filters. High-frequency latent components are then removed
rather than merely shrunk.

Indices of eigenvalues are natural (frequency) order, 0-based: index 0 is
the constant component with eigenvalue 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import TauOperator, tau_eigenvectors
from .smoother import BoundaryPolicy, TimeSeries, build_smoother

__all__ = [
    "CutoffDesign",
    "DesignedSmoother",
    "VarianceReport",
    "cutoff_objective",
    "descending_order",
    "select_cutoff",
    "design_from_k",
    "design_from_threshold",
    "cutoff_from_period",
    "truncated_operator",
    "designed_smoother",
    "latent_decomposition",
    "variance_diagnostics",
    "bias_discrepancy",
]

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class CutoffDesign:
    """Which latent components survive the cutoff.

    ``order`` maps sorted position to natural index: ``xi[order]`` is
    descending, ties broken by ascending natural index.
    """

    k: int
    threshold: float
    retained_indices: np.ndarray
    xi_sorted: np.ndarray
    order: np.ndarray

    @property
    def n(self) -> int:
        return self.order.size

    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[self.retained_indices] = True
        return m


@dataclass(frozen=True)
class DesignedSmoother:
    base: TauOperator
    xi: np.ndarray
    Z: np.ndarray
    truncated: np.ndarray
    final: np.ndarray
    design: CutoffDesign
    delta_h: np.ndarray
    delta_k: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.final if dtype is None else self.final.astype(dtype)


@dataclass(frozen=True)
class VarianceReport:
    """Per-time-point variance factors under unit white noise."""

    original: np.ndarray
    designed: np.ndarray
    interior_reduction: np.ndarray


def descending_order(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    # lexsort: last key is primary
    return np.lexsort((np.arange(xi.size), -xi))


def cutoff_objective(xi) -> np.ndarray:
    """``f(k) = ||1_(k) - xi||^2`` for ``k = 0..n`` with ``xi`` sorted descending."""
    xs = np.asarray(xi, dtype=float)[descending_order(xi)]
    n = xs.size
    return np.array([np.sum((1.0 - xs[:k]) ** 2) + np.sum(xs[k:] ** 2) for k in range(n + 1)])


def design_from_k(xi, k: int) -> CutoffDesign:
    """Keep the ``k`` largest eigenvalues."""
    xi = np.asarray(xi, dtype=float)
    n = xi.size
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    order = descending_order(xi)
    xs = xi[order]
    kept = np.sort(order[:k])
    return CutoffDesign(int(k), float(xs[k - 1]), kept, xs, order)


def design_from_threshold(xi, threshold: float = DEFAULT_THRESHOLD) -> CutoffDesign:
    """Keep every eigenvalue ``>= threshold`` (at least the largest one)."""
    xi = np.asarray(xi, dtype=float)
    k = max(int(np.sum(xi >= threshold)), 1)
    return design_from_k(xi, k)


def select_cutoff(xi) -> CutoffDesign:
    """Cutoff minimising the distance to an ideal 0/1 eigenvalue profile.

    Since ``f(k) - f(k-1) = 1 - 2 xi_k`` for descending eigenvalues, the
    minimiser keeps exactly the eigenvalues ``>= 0.5``.
    """
    return design_from_threshold(xi, DEFAULT_THRESHOLD)


def cutoff_from_period(n: int, period: float) -> int:
    """Components to keep so that cycles shorter than ``period`` are removed.

    With cutoff frequency ``2 pi / period`` the matching count on the
    ``(i-1) pi / n`` grid is ``2 n / period``.
    """
    if period <= 2:
        raise ValueError(f"period must exceed 2 samples, got {period}")
    return max(1, min(n, int(round(2.0 * n / period))))


def truncated_operator(xi, Z, design: CutoffDesign) -> np.ndarray:
    """``H_k = Z diag(xi * retained) Z'``."""
    xi = np.asarray(xi, dtype=float)
    if Z.shape != (xi.size, xi.size) or design.n != xi.size:
        raise ValueError("inconsistent dimensions")
    lam = np.where(design.mask(), xi, 0.0)
    Hk = (Z * lam) @ Z.T
    return 0.5 * (Hk + Hk.T)


def designed_smoother(H: TauOperator, design: CutoffDesign,
                      policy: BoundaryPolicy | None = None) -> DesignedSmoother:
    """Smoother with interior rows from ``H_k`` and boundary rows from ``policy``.

    ``policy`` defaults to Musgrave (LC) real-time rows with reflecting rows
    elsewhere. The decomposition ``S_k = H_k + Delta_k + Delta_H`` is kept:
    ``Delta_H = S - H`` for the undesigned smoother ``S`` and ``Delta_k``
    restores the boundary rows of ``H`` on top of ``H_k``, so it is
    supported on the first and last ``h`` rows.
    """
    if policy is None:
        policy = BoundaryPolicy("lc", replace_scope="realtime_row_only")
    sym = H.source
    n, h = H.n, sym.h
    if n <= 2 * h:
        raise ValueError(f"dimension n={n} must exceed 2h={2 * h}")
    Hd = H.dense()
    xi = H.eigenvalues()
    Z = tau_eigenvectors(n)
    Hk = truncated_operator(xi, Z, design)
    S = np.asarray(build_smoother(sym, policy, n))
    delta_h = S - Hd
    # interior rows come from H_k, boundary rows from the policy
    final = S.copy()
    final[h:n - h] = Hk[h:n - h]
    delta_k = final - Hk - delta_h
    return DesignedSmoother(H, xi, Z, Hk, final, design, delta_h, delta_k)


def latent_decomposition(y, Z) -> np.ndarray:
    """Coordinates ``theta = Z' y`` of a series in the orthonormal basis ``Z``."""
    vals = y.values if isinstance(y, TimeSeries) else np.asarray(y, dtype=float)
    if vals.size != Z.shape[0]:
        raise ValueError("series length does not match basis")
    return Z.T @ vals


def variance_diagnostics(S, Sk: DesignedSmoother) -> VarianceReport:
    """Variance factors ``diag(S S')`` and ``diag(S_k S_k')``.

    ``interior_reduction`` is ``diag(Z (Xi^2 - Xi_k^2) Z')``, the main
    interior term of the variance difference; it is non-negative.
    """
    A = np.asarray(S, dtype=float)
    B = Sk.final
    if A.shape != B.shape:
        raise ValueError("smoothers differ in size")
    lam2 = np.where(Sk.design.mask(), 0.0, Sk.xi ** 2)
    reduction = np.sum(Sk.Z ** 2 * lam2, axis=1)
    return VarianceReport(np.sum(A * A, axis=1), np.sum(B * B, axis=1), reduction)


def bias_discrepancy(xi, design: CutoffDesign) -> float:
    """``(1/n) tr(Xi_k - Xi)``: minus the mean of the zeroed eigenvalues."""
    xi = np.asarray(xi, dtype=float)
    if design.n != xi.size:
        raise ValueError("inconsistent sizes")
    zeroed = xi[~design.mask()]
    return -float(np.sum(zeroed)) / xi.size
