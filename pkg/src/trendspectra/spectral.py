"""Dense eigen-machinery and eigenvalue perturbation reports.

The solvers here are deliberately self-contained: they serve as independent
oracles for the analytic eigenvalue formulas of :mod:`trendspectra.algebra`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .algebra import (
    circulant_eigenvalues,
    circulant_matrix,
    tau_eigenvalues,
    tau_eigenvectors,
    tau_matrix,
)
from .filters import SymmetricFilter
from .smoother import BoundaryPolicy, SmootherMatrix, build_smoother

__all__ = [
    "ConvergenceError",
    "EigenSystem",
    "PerturbationReport",
    "spectral_norm",
    "symmetric_eigen",
    "hessenberg",
    "general_eigenvalues",
    "reference_matrix",
    "perturbation_report",
    "eigenvector_perturbation",
]

_POWER_SEED = 20080306


class ConvergenceError(ArithmeticError):
    """An iterative solver hit its iteration cap."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray | None
    residual: float


@dataclass(frozen=True)
class PerturbationReport:
    """Bauer-Fike comparison of a smoother against an algebra operator.

    ``match_distances[k]`` is the distance of ``smoother_values[k]`` to the
    nearest reference eigenvalue and ``nearest_index[k]`` its position in
    ``reference_values``.
    """

    algebra: str
    delta: float
    reference_values: np.ndarray
    smoother_values: np.ndarray
    match_distances: np.ndarray
    nearest_index: np.ndarray
    containment: bool

    @property
    def violations(self) -> int:
        return int(np.sum(self.match_distances > self.delta + _containment_slack(self)))

    @property
    def max_imag(self) -> float:
        return float(np.max(np.abs(self.smoother_values.imag), initial=0.0))


def _containment_slack(rep) -> float:
    # absorbs rounding in the computed spectrum (e.g. delta = 0 exactly)
    return 1e-9 * max(1.0, float(np.max(np.abs(rep.reference_values), initial=0.0)))


def _power_run(A, v, maxiter, tol, patience):
    mu_prev = None
    calm = 0
    for it in range(maxiter):
        u = A.T @ (A @ v)
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return 0.0, v, True
        mu = float(v @ u)
        v = u / nu
        if mu_prev is not None and abs(mu - mu_prev) <= tol * abs(mu):
            calm += 1
            if calm >= patience:
                return mu, v, True
        else:
            calm = 0
        mu_prev = mu
    return mu_prev, v, False


def spectral_norm(A, maxiter: int = 20000, tol: float = 1e-12) -> float:
    """Largest singular value by power iteration on ``A'A``.

    Iteration starts from the normalised all-ones vector. A second run from a
    fixed pseudo-random vector follows, because the all-ones vector can be
    orthogonal to the dominant singular subspace (it is for ``S - H``, whose
    rows sum to zero, and it never excites skew-symmetric vectors of
    centrosymmetric matrices). The larger estimate wins.

    Raises
    ------
    ConvergenceError
        If either run exceeds ``maxiter`` iterations.
    """
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    n = A.shape[1]
    if n == 0 or not np.any(A):
        return 0.0
    starts = [np.ones(n) / math.sqrt(n)]
    r = np.random.default_rng(_POWER_SEED).standard_normal(n)
    starts.append(r / np.linalg.norm(r))
    best = 0.0
    for v0 in starts:
        mu, v, ok = _power_run(A, v0, maxiter, tol, patience=5)
        if not ok:
            res = np.linalg.norm(A.T @ (A @ v) - mu * v)
            raise ConvergenceError("power iteration did not converge", res)
        best = max(best, mu)
    return math.sqrt(max(best, 0.0))


def _round_robin(n):
    """Pairings covering every index pair once over ``n - 1`` rounds (n even)."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        half = n // 2
        rounds.append((np.array(players[:half]), np.array(players[half:][::-1])))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def symmetric_eigen(A, tol: float = 1e-13, max_sweeps: int = 50) -> EigenSystem:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order so
    that the rotations of one round act on disjoint index pairs and can be
    applied together. Iteration stops when the off-diagonal Frobenius norm
    drops below ``tol * ||A||_F``.

    Returns values in ascending order with matching orthonormal columns.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    scale = np.linalg.norm(A)
    if np.max(np.abs(A - A.T), initial=0.0) > 1e-12 * max(1.0, scale):
        raise ValueError("matrix is not symmetric")
    A = 0.5 * (A + A.T)
    A0 = A.copy()
    V = np.eye(n)
    m = n + (n % 2)
    rounds = _round_robin(m) if n > 1 else []

    offdiag = ~np.eye(n, dtype=bool)

    def off(M):
        return math.sqrt(np.sum(M[offdiag] ** 2))

    sweeps = 0
    while off(A) > tol * scale:
        if sweeps == max_sweeps:
            raise ConvergenceError("Jacobi sweeps exhausted", off(A))
        for P, Q in rounds:
            keep = (P < n) & (Q < n)
            p, q = P[keep], Q[keep]
            apq = A[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            tau = (A[q, q] - A[p, p]) / (2.0 * apq)
            sgn = np.where(tau >= 0, 1.0, -1.0)
            atau = np.abs(tau)
            # t ~ 1/(2|tau|) for huge |tau|; avoids overflow in tau**2
            big = atau > 1e150
            root = np.sqrt(1.0 + np.where(big, 0.0, tau) ** 2)
            t = sgn / np.where(big, 2.0 * atau, atau + root)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            Ap, Aq = A[p, :].copy(), A[q, :].copy()
            A[p, :] = c[:, None] * Ap - s[:, None] * Aq
            A[q, :] = s[:, None] * Ap + c[:, None] * Aq
            Ap, Aq = A[:, p].copy(), A[:, q].copy()
            A[:, p] = Ap * c - Aq * s
            A[:, q] = Ap * s + Aq * c
            Vp, Vq = V[:, p].copy(), V[:, q].copy()
            V[:, p] = Vp * c - Vq * s
            V[:, q] = Vp * s + Vq * c
        sweeps += 1
    vals = np.diag(A).copy()
    order = np.argsort(vals, kind="stable")
    vals, V = vals[order], V[:, order]
    residual = float(np.max(np.abs(A0 @ V - V * vals), initial=0.0))
    return EigenSystem(vals, V, residual)


def hessenberg(A) -> np.ndarray:
    """Upper Hessenberg form by Householder reflections (similarity)."""
    H = np.array(A, dtype=float)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(alpha, x[0])
        v /= np.linalg.norm(v)
        H[k + 1:, k:] -= 2.0 * np.outer(v, v @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v)
        H[k + 2:, k] = 0.0
    return H


def general_eigenvalues(A, deflate: float = 1e-12, maxits: int = 30) -> np.ndarray:
    """All eigenvalues of a real square matrix.

    Hessenberg reduction followed by Francis double-shift QR iterations with
    exceptional shifts after 10 and 20 stalled steps. Eigenvalues come back as
    a complex array in the order they deflate.

    Raises
    ------
    ConvergenceError
        If an eigenvalue needs more than ``maxits`` iterations.
    """
    a = hessenberg(A)
    n = a.shape[0]
    wr = np.zeros(n)
    wi = np.zeros(n)
    anorm = np.sum(np.abs(np.triu(a, -1)))
    nn = n - 1
    t = 0.0
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = abs(a[l - 1, l - 1]) + abs(a[l, l])
                if s == 0.0:
                    s = anorm
                if abs(a[l, l - 1]) <= deflate * s:
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                wr[nn], wi[nn] = x + t, 0.0
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    wr[nn - 1] = wr[nn] = x + z
                    if z:
                        wr[nn] = x - w / z
                    wi[nn - 1] = wi[nn] = 0.0
                else:
                    wr[nn - 1] = wr[nn] = x + p
                    wi[nn - 1], wi[nn] = -z, z
                nn -= 2
                break
            if its == maxits:
                raise ConvergenceError(
                    f"QR iteration exceeded {maxits} steps at index {nn}",
                    abs(a[nn, nn - 1]))
            if its in (10, 20):
                # exceptional shift
                t += x
                a[np.arange(nn + 1), np.arange(nn + 1)] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                x = y = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p, q, r = p / s, q / s, r / s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u + v == v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
                if i != m + 2:
                    a[i, i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = a[k + 2, k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p, q, r = p / x, q / x, r / x
                s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        a[k, k - 1] = -a[k, k - 1]
                else:
                    a[k, k - 1] = -s * x
                p += s
                x, y, z = p / s, q / s, r / s
                q, r = q / p, r / p
                # row modification
                cols = slice(k, nn + 1)
                pr = a[k, cols] + q * a[k + 1, cols]
                if k != nn - 1:
                    pr = pr + r * a[k + 2, cols]
                    a[k + 2, cols] -= pr * z
                a[k + 1, cols] -= pr * y
                a[k, cols] -= pr * x
                # column modification
                rows = slice(l, min(nn, k + 3) + 1)
                pc = x * a[rows, k] + y * a[rows, k + 1]
                if k != nn - 1:
                    pc = pc + z * a[rows, k + 2]
                    a[rows, k + 2] -= pc * r
                a[rows, k + 1] -= pc * q
                a[rows, k] -= pc
    return wr + 1j * wi


def reference_matrix(sym: SymmetricFilter, n: int,
                     algebra: Literal["circulant", "tau11"]) -> tuple[np.ndarray, np.ndarray]:
    """Dense algebra operator and its analytic eigenvalues."""
    if algebra == "circulant":
        return circulant_matrix(sym, n), circulant_eigenvalues(sym, n)
    if algebra == "tau11":
        return tau_matrix(sym, n), tau_eigenvalues(sym, n)
    raise ValueError(f"unknown algebra {algebra!r}")


def perturbation_report(S, algebra: Literal["circulant", "tau11"],
                        sym: SymmetricFilter | None = None) -> PerturbationReport:
    """Distance of ``sigma(S)`` from the analytic spectrum of an algebra operator.

    ``delta = ||S - A||_2`` with ``A`` the circulant or tau_11 matrix of the
    symmetric filter. Every eigenvalue of ``S`` lies within ``delta`` of some
    analytic eigenvalue of ``A``.

    Parameters
    ----------
    S : SmootherMatrix or array
        Smoother; a bare array needs ``sym``.
    """
    if sym is None:
        if not isinstance(S, SmootherMatrix):
            raise ValueError("a bare matrix needs its symmetric filter")
        sym = S.source
    M = np.asarray(S, dtype=float)
    n = M.shape[0]
    if n <= 2 * sym.h:
        raise ValueError(f"dimension n={n} must exceed 2h={2 * sym.h}")
    A, ref = reference_matrix(sym, n, algebra)
    delta = spectral_norm(M - A)
    lam = general_eigenvalues(M)
    dist = np.abs(lam[:, None] - ref[None, :])
    nearest = np.argmin(dist, axis=1)
    dmin = dist[np.arange(lam.size), nearest]
    rep = PerturbationReport(algebra, delta, ref, lam, dmin, nearest, True)
    ok = bool(np.all(dmin <= delta + _containment_slack(rep)))
    return PerturbationReport(algebra, delta, ref, lam, dmin, nearest, ok)


def eigenvector_perturbation(S, i: int, sym: SymmetricFilter | None = None) -> np.ndarray:
    """``(S - H) z_i`` for the tau_11 eigenvector with 0-based index ``i``.

    Nonzero only in the first and last ``h`` coordinates. ``H`` is taken
    as the reflecting smoother, equal to the tau_11 matrix but with interior
    rows holding the symmetric weights exactly, so those coordinates vanish
    without rounding noise.
    """
    if sym is None:
        sym = S.source
    M = np.asarray(S, dtype=float)
    n = M.shape[0]
    H = np.asarray(build_smoother(sym, BoundaryPolicy("reflecting"), n))
    z = tau_eigenvectors(n)[:, i]
    return (M - H) @ z
