"""Local polynomial trend filters.

Symmetric (two-sided) weights come from a weighted least squares fit of a
degree-``p`` polynomial over a window of ``2h + 1`` equally spaced points.
Boundary (asymmetric) filters come either from refitting the polynomial on
the truncated window (LPR) or from the constrained minimum mean square
revision error class (LC / QL / CQ families).

Weight vectors are stored in lag order ``j = -h, ..., h``: index ``0`` holds
the weight of the oldest observation, index ``h`` the weight of the
observation at the estimation time, and the tail the future observations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

__all__ = [
    "MUSGRAVE_NOISE_RATIO",
    "KernelSpec",
    "LocalPolySpec",
    "SymmetricFilter",
    "AsymmetricFilter",
    "MmsreSpec",
    "SingularSystemError",
    "kernel_weights",
    "design_matrix",
    "symmetric_filter",
    "identity_filter",
    "asymmetric_lpr_filter",
    "mmsre_operators",
    "mmsre_weights",
    "mmsre_filter",
]

#: slope-to-noise ratio that turns the LC family into the Musgrave end weights
#: of the 13-term Henderson filter (I/C ratio 3.5)
MUSGRAVE_NOISE_RATIO = 4.0 / (3.5**2 * math.pi)

_FAMILY_SPLIT = {"LC": 1, "QL": 2, "CQ": 3}


class SingularSystemError(np.linalg.LinAlgError):
    """A normal-equation matrix is singular for the requested filter."""


@dataclass(frozen=True)
class KernelSpec:
    kind: Literal["henderson", "uniform"] = "henderson"
    h: int = 6

    def __post_init__(self):
        if self.kind not in ("henderson", "uniform"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.h < 0:
            raise ValueError(f"bandwidth must be non-negative, got h={self.h}")


@dataclass(frozen=True)
class LocalPolySpec:
    h: int
    p: int
    kernel: KernelSpec = None

    def __post_init__(self):
        if self.kernel is None:
            object.__setattr__(self, "kernel", KernelSpec("henderson", self.h))
        if self.kernel.h != self.h:
            raise ValueError("kernel bandwidth differs from filter bandwidth")
        if self.p < 0:
            raise ValueError(f"degree must be non-negative, got p={self.p}")
        if self.p > 2 * self.h:
            raise ValueError(f"degree p={self.p} violates p <= 2h = {2 * self.h}")


@dataclass(frozen=True)
class SymmetricFilter:
    """Two-sided filter with weights for lags ``-h..h``."""

    weights: np.ndarray
    h: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size != 2 * self.h + 1:
            raise ValueError(f"expected {2 * self.h + 1} weights, got shape {w.shape}")
        if not np.allclose(w, w[::-1], rtol=0, atol=1e-12):
            raise ValueError("weights are not symmetric")
        if abs(w.sum() - 1.0) > 1e-10:
            raise ValueError(f"weights sum to {w.sum():.15g}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def half(self) -> np.ndarray:
        """Weights ``w_0, w_1, ..., w_h``."""
        return self.weights[self.h:]

    @classmethod
    def from_half(cls, half) -> "SymmetricFilter":
        half = np.asarray(half, dtype=float)
        return cls(np.concatenate([half[:0:-1], half]), half.size - 1)


@dataclass(frozen=True)
class AsymmetricFilter:
    """Boundary filter using ``h`` past, the current and ``q`` future points."""

    weights: np.ndarray
    h: int
    q: int
    family: str = ""

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size != self.h + self.q + 1:
            raise ValueError(f"expected {self.h + self.q + 1} weights, got {w.size}")
        if not 0 <= self.q <= self.h:
            raise ValueError(f"q={self.q} outside 0..h={self.h}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def lags(self) -> np.ndarray:
        return np.arange(-self.h, self.q + 1)


@dataclass(frozen=True)
class MmsreSpec:
    """Revision-error filter family.

    ``noise_ratio`` is the squared trend coefficient over the noise variance
    for the first polynomial term the filter does *not* reproduce.
    ``dispersion`` optionally replaces the identity noise covariance by a
    diagonal one (lags ``-h..h``).
    """

    family: Literal["LC", "QL", "CQ"] = "LC"
    noise_ratio: float = MUSGRAVE_NOISE_RATIO
    h: int = 6
    dispersion: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        fam = self.family.upper()
        if fam not in _FAMILY_SPLIT:
            raise ValueError(f"unknown MMSRE family {self.family!r}")
        object.__setattr__(self, "family", fam)
        if self.noise_ratio < 0:
            raise ValueError("noise_ratio must be >= 0")

    @property
    def n_constraints(self) -> int:
        return _FAMILY_SPLIT[self.family]


def kernel_weights(spec: KernelSpec) -> np.ndarray:
    """Kernel weights ``kappa_j`` for ``j = -h..h``.

    The Henderson kernel is
    ``[(h+1)^2 - j^2] [(h+2)^2 - j^2] [(h+3)^2 - j^2]``.
    """
    j = np.arange(-spec.h, spec.h + 1, dtype=float)
    if spec.kind == "uniform":
        return np.ones_like(j)
    h = spec.h
    return ((h + 1) ** 2 - j**2) * ((h + 2) ** 2 - j**2) * ((h + 3) ** 2 - j**2)


def design_matrix(h: int, degree: int) -> np.ndarray:
    """Rows ``[1, j, j^2, ..., j^degree]`` for ``j = -h..h``."""
    j = np.arange(-h, h + 1, dtype=float)
    return np.vander(j, degree + 1, increasing=True)


def _solve(A, b, what):
    # LU with partial pivoting; reject numerically singular systems
    if np.linalg.cond(A) > 1e14:
        raise SingularSystemError(f"singular normal matrix for {what}")
    return np.linalg.solve(A, b)


def symmetric_filter(spec: LocalPolySpec) -> SymmetricFilter:
    """Two-sided WLS filter ``w' = e1' (X'KX)^{-1} X'K``."""
    X = design_matrix(spec.h, spec.p)
    kappa = kernel_weights(spec.kernel)
    XtK = X.T * kappa
    e1 = np.zeros(spec.p + 1)
    e1[0] = 1.0
    beta = _solve(XtK @ X, e1, spec)
    w = XtK.T @ beta
    # enforce exact symmetry lost to rounding
    w = 0.5 * (w + w[::-1])
    return SymmetricFilter(w, spec.h)


def identity_filter() -> SymmetricFilter:
    return SymmetricFilter(np.ones(1), 0)


def asymmetric_lpr_filter(spec: LocalPolySpec, q: int, degree: int | None = None
                          ) -> AsymmetricFilter:
    """Boundary filter from a local polynomial fit on lags ``-h..q``.

    Parameters
    ----------
    spec : LocalPolySpec
        Interior specification; its kernel is truncated to the window.
    q : int
        Number of available future observations, ``0 <= q <= h``.
    degree : int, optional
        Degree of the boundary fit; defaults to ``spec.p``.
    """
    h = spec.h
    if not 0 <= q <= h:
        raise ValueError(f"q={q} outside 0..h={h}")
    d = spec.p if degree is None else degree
    if d > spec.p:
        raise ValueError(f"boundary degree {d} exceeds interior degree {spec.p}")
    if d > h + q:
        raise ValueError(f"boundary degree {d} exceeds h+q={h + q}")
    m = h + q + 1
    Xp = design_matrix(h, d)[:m]
    kp = kernel_weights(spec.kernel)[:m]
    e1 = np.zeros(d + 1)
    e1[0] = 1.0
    coef = _solve((Xp.T * kp) @ Xp, e1, f"{spec}, q={q}")
    return AsymmetricFilter(kp * (Xp @ coef), h, q, family="LPR")


def mmsre_operators(Up: np.ndarray, Qmat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(M, L)`` for constraint matrix ``Up`` and metric ``Qmat``.

    ``L = Q^-1 Up (Up' Q^-1 Up)^-1`` and ``M = Q^-1 - L Up' Q^-1``, so that
    ``Up' M = 0`` and ``Up' L = I``.
    """
    Qi_Up = np.linalg.solve(Qmat, Up)
    G = Up.T @ Qi_Up
    if np.linalg.cond(G) > 1e14:
        raise SingularSystemError("singular constraint matrix Up' Q^-1 Up")
    L = np.linalg.solve(G, Qi_Up.T).T
    M = np.linalg.inv(Qmat) - L @ Qi_Up.T
    return M, L


def mmsre_weights(w: np.ndarray, q: int, U: np.ndarray, Z: np.ndarray | None,
                  D: np.ndarray, delta_sq: float) -> np.ndarray:
    """Revision-error weights for a generic column split.

    ``v = w_p + L U_f' w_f + M Z_p delta^2 Z_f' w_f`` with the metric
    ``Q = D_p + delta^2 Z_p Z_p'`` that makes ``v`` the minimiser of the
    constrained revision objective.

    Parameters
    ----------
    w : (2h+1,) array
        Symmetric weights in lag order.
    q : int
        Available future observations.
    U, Z : arrays with 2h+1 rows
        Reproduced and non-reproduced design columns. ``Z`` may be ``None``
        (no bias term).
    D : (2h+1,) array
        Diagonal of the noise covariance.
    delta_sq : float
        Squared coefficient of the ``Z`` column relative to the noise scale.
    """
    w = np.asarray(w, dtype=float)
    m = (w.size - 1) // 2 + q + 1
    wp, wf = w[:m], w[m:]
    Up = U[:m]
    r = Up.shape[1]
    if r > m:
        raise SingularSystemError(f"{r} constraints but only {m} weights")
    # Same minimiser as the (M, L) formula, computed by the nullspace method:
    # v = wp + x, x = x0 + N y with Up' x0 = Uf' wf and N spanning null(Up').
    # Forming Q^-1 explicitly loses several digits when Z has large entries.
    Qo, Ro = np.linalg.qr(Up, mode="complete")
    if np.linalg.cond(Ro[:r]) > 1e14:
        raise SingularSystemError("rank-deficient constraint columns")
    x0 = Qo[:, :r] @ np.linalg.solve(Ro[:r].T, U[m:].T @ wf)
    N = Qo[:, r:]
    if N.shape[1] == 0:
        return wp + x0
    d = np.sqrt(np.asarray(D, dtype=float)[:m])
    A, rhs = d[:, None] * N, -d * x0
    if Z is not None and delta_sq:
        s, Zp = math.sqrt(delta_sq), Z[:m]
        A = np.vstack([A, s * (Zp.T @ N)])
        rhs = np.concatenate([rhs, s * (Z[m:].T @ wf - Zp.T @ x0)])
    y = np.linalg.lstsq(A, rhs, rcond=None)[0]
    return wp + x0 + N @ y


def mmsre_filter(sym: SymmetricFilter, spec: MmsreSpec, q: int) -> AsymmetricFilter:
    """Asymmetric filter minimising the mean square revision error.

    The LC, QL and CQ families reproduce polynomials of degree 0, 1 and 2 and
    guard against revisions caused by the next power of time. With
    ``noise_ratio = MUSGRAVE_NOISE_RATIO`` and the 13-term Henderson filter,
    LC gives the Musgrave end weights.
    """
    h = sym.h
    if spec.h != h:
        raise ValueError(f"spec bandwidth {spec.h} differs from filter bandwidth {h}")
    if not 0 <= q <= h:
        raise ValueError(f"q={q} outside 0..h={h}")
    r = spec.n_constraints
    X = design_matrix(h, r)
    D = np.ones(2 * h + 1) if spec.dispersion is None else spec.dispersion
    v = mmsre_weights(sym.weights, q, X[:, :r], X[:, r:r + 1], D, spec.noise_ratio)
    return AsymmetricFilter(v, h, q, family=spec.family)
