"""Circulant and reflecting (tau_11) operators of a symmetric filter.

Both algebras have eigensystems known in closed form, and both analytic
spectra are samplings of the filter's transfer function: the circulant on
the grid ``2 pi (i-1) / n`` and tau_11 on ``(i-1) pi / n``.

All arithmetic is real. Eigenvalues are returned in natural index order
``i = 1..n`` (index ``0`` in the arrays).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .filters import SymmetricFilter

__all__ = [
    "CirculantOperator",
    "TauOperator",
    "circulant_operator",
    "circulant_matrix",
    "circulant_eigenvalues",
    "circulant_nodes",
    "t11_matrix",
    "tau_first_row",
    "tau_coefficients_solve",
    "tau_coefficients_closed",
    "tau_operator",
    "tau_matrix",
    "tau_eigenvalues",
    "tau_eigenvectors",
    "tau_nodes",
    "transfer_function_value",
    "transfer_function",
]


def _check_dim(sym, n):
    if n <= 2 * sym.h:
        raise ValueError(f"dimension n={n} must exceed 2h={2 * sym.h}")


@dataclass(frozen=True)
class CirculantOperator:
    first_row: np.ndarray
    source: SymmetricFilter

    @property
    def n(self) -> int:
        return self.first_row.size

    def dense(self) -> np.ndarray:
        n = self.n
        idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
        return self.first_row[idx]

    def eigenvalues(self) -> np.ndarray:
        return circulant_eigenvalues(self.source, self.n)


@dataclass(frozen=True)
class TauOperator:
    first_row: np.ndarray
    coeffs: np.ndarray
    source: SymmetricFilter

    @property
    def n(self) -> int:
        return self.first_row.size

    def dense(self) -> np.ndarray:
        return _horner_matrix(self.coeffs, t11_matrix(self.n))

    def eigenvalues(self) -> np.ndarray:
        return _horner(self.coeffs, 2.0 * np.cos(tau_nodes(self.n)))

    def eigenvectors(self) -> np.ndarray:
        return tau_eigenvectors(self.n)


def circulant_operator(sym: SymmetricFilter, n: int) -> CirculantOperator:
    _check_dim(sym, n)
    row = np.zeros(n)
    for d in range(-sym.h, sym.h + 1):
        row[d % n] += sym.weights[d + sym.h]
    return CirculantOperator(row, sym)


def circulant_matrix(sym: SymmetricFilter, n: int) -> np.ndarray:
    """Dense circulant ``W = sum_d w_d C^(d mod n)``."""
    return circulant_operator(sym, n).dense()


def circulant_nodes(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


def circulant_eigenvalues(sym: SymmetricFilter, n: int) -> np.ndarray:
    """``zeta_i = w_0 + 2 sum_d w_d cos(2 pi (i-1) d / n)``."""
    _check_dim(sym, n)
    return transfer_function(sym, circulant_nodes(n))


def t11_matrix(n: int) -> np.ndarray:
    """Tridiagonal generator of tau_11: ones off the diagonal and at both corners."""
    T = np.eye(n, k=1) + np.eye(n, k=-1)
    T[0, 0] += 1.0
    T[-1, -1] += 1.0
    return T


def tau_first_row(sym: SymmetricFilter, n: int) -> np.ndarray:
    """``[w0+w1, w1+w2, ..., w_{h-1}+w_h, w_h, 0, ..., 0]``."""
    _check_dim(sym, n)
    half = sym.half
    row = np.zeros(n)
    row[:sym.h + 1] = half
    row[:sym.h] += half[1:]
    return row


def tau_coefficients_solve(first_row: np.ndarray, n: int | None = None) -> np.ndarray:
    """Coefficients ``c`` with ``H = sum_j c_j T11^(j-1)`` by back substitution.

    ``Q c = first_row`` where column ``j`` of ``Q`` is the first column of
    ``T11^(j-1)``; ``Q`` is unit upper triangular.
    """
    row = np.asarray(first_row, dtype=float)
    n = row.size if n is None else n
    if row.size != n:
        raise ValueError("first row length differs from n")
    T = t11_matrix(n)
    Q = np.empty((n, n))
    col = np.zeros(n)
    col[0] = 1.0
    for j in range(n):
        Q[:, j] = col
        col = T @ col
    return solve_triangular(Q, row, lower=False, unit_diagonal=True)


def _pochhammer(j: int, q: int) -> int:
    out = 1
    for k in range(q):
        out *= j + k
    return out


def tau_coefficients_closed(sym: SymmetricFilter) -> np.ndarray:
    """Closed-form ``c_1..c_{h+1}`` from the symmetric weights.

    ``c_j = w_{j-1} + sum_q (-1)^{q+1} (j)_q / (q+1)! (j+2q+1) w_{j+2q+1}``
    for ``q = 0..floor((h-j-1)/2)``; the sum is empty when ``h-j-1 < 0``.
    """
    h = sym.h
    w = sym.half
    c = np.empty(h + 1)
    for j in range(1, h + 2):
        acc = w[j - 1]
        top = h - j - 1
        for q in range(top // 2 + 1 if top >= 0 else 0):
            acc += ((-1) ** (q + 1) * _pochhammer(j, q) / math.factorial(q + 1)
                    * (j + 2 * q + 1) * w[j + 2 * q + 1])
        c[j - 1] = acc
    return c


def _horner(coeffs, x):
    out = np.zeros_like(x, dtype=float)
    for c in coeffs[::-1]:
        out = out * x + c
    return out


def _horner_matrix(coeffs, T):
    n = T.shape[0]
    out = np.zeros((n, n))
    for c in coeffs[::-1]:
        out = T @ out
        out[np.diag_indices(n)] += c
    return out


def tau_operator(sym: SymmetricFilter, n: int) -> TauOperator:
    _check_dim(sym, n)
    return TauOperator(tau_first_row(sym, n), tau_coefficients_closed(sym), sym)


def tau_matrix(sym: SymmetricFilter, n: int) -> np.ndarray:
    """Dense ``H = sum_{j=1}^{h+1} c_j T11^(j-1)``, evaluated by Horner's rule."""
    return tau_operator(sym, n).dense()


def tau_nodes(n: int) -> np.ndarray:
    return np.pi * np.arange(n) / n


def tau_eigenvalues(sym: SymmetricFilter, n: int) -> np.ndarray:
    """``xi_i = sum_j c_j (2 cos((i-1) pi / n))^(j-1)``."""
    return tau_operator(sym, n).eigenvalues()


def tau_eigenvectors(n: int) -> np.ndarray:
    """Orthogonal DCT-II basis diagonalising every tau_11 matrix.

    Column ``i`` is ``sqrt(2/n) k_i cos((2j-1)(i-1) pi / (2n))`` with
    ``k_1 = 1/sqrt(2)`` and ``k_i = 1`` otherwise.
    """
    if n < 1:
        raise ValueError("n must be positive")
    j = np.arange(1, n + 1)[:, None]
    i = np.arange(n)[None, :]
    Z = np.sqrt(2.0 / n) * np.cos((2 * j - 1) * i * np.pi / (2 * n))
    Z[:, 0] /= np.sqrt(2.0)
    return Z


def transfer_function(sym: SymmetricFilter, nu) -> np.ndarray:
    nu = np.asarray(nu, dtype=float)
    w = sym.half
    out = np.full_like(nu, w[0])
    for d in range(1, sym.h + 1):
        out = out + 2.0 * w[d] * np.cos(nu * d)
    return out


def transfer_function_value(sym: SymmetricFilter, nu: float) -> float:
    """``H(nu) = w_0 + 2 sum_{d>=1} w_d cos(nu d)``; real for symmetric weights."""
    return float(transfer_function(sym, nu))
