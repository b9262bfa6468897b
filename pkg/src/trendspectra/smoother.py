"""Smoother matrices for finite series.

Interior rows carry the symmetric filter; the last ``h`` rows carry the
boundary filters for ``q = h-1, ..., 0`` future observations and the first
``h`` rows are their exchange images, so the result is centrosymmetric by
construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .filters import (
    MUSGRAVE_NOISE_RATIO,
    AsymmetricFilter,
    LocalPolySpec,
    MmsreSpec,
    SymmetricFilter,
    asymmetric_lpr_filter,
    mmsre_filter,
)

__all__ = [
    "BoundaryPolicy",
    "SmootherMatrix",
    "TimeSeries",
    "reflecting_filter",
    "reflecting_realtime_filter",
    "boundary_filters",
    "build_smoother",
    "apply",
    "exchange",
    "polynomial_reproduction_residual",
]

BoundaryKind = Literal["lpr", "lc", "ql", "cq", "reflecting", "circulant", "custom"]


@dataclass(frozen=True)
class BoundaryPolicy:
    """How the first and last ``h`` rows of a smoother are filled.

    Parameters
    ----------
    kind : str
        ``lpr`` (local polynomial refit), ``lc``/``ql``/``cq`` (revision-error
        families), ``reflecting`` (folded symmetric weights), ``circulant``
        (wrap-around) or ``custom`` (explicit rows).
    noise_ratio : float
        Parameter of the ``lc``/``ql``/``cq`` families.
    lpr : LocalPolySpec, optional
        Local polynomial specification for ``lpr``; required for that kind.
    degree : int, optional
        Boundary fit degree for ``lpr`` (defaults to the interior degree).
    rows : sequence of array, optional
        For ``custom``: boundary filters for ``q = 0, ..., h-1``, the ``q``-th
        of length ``h + q + 1`` in lag order.
    replace_scope : str
        ``all_boundary_rows`` or ``realtime_row_only``. With the latter only
        the ``q = 0`` rows come from ``kind``; the remaining boundary rows
        come from ``fill``.
    fill : str
        ``reflecting`` or ``circulant``; rows used outside the replaced set
        when ``replace_scope`` is ``realtime_row_only``.
    """

    kind: BoundaryKind = "lpr"
    noise_ratio: float = MUSGRAVE_NOISE_RATIO
    lpr: LocalPolySpec | None = None
    degree: int | None = None
    rows: Sequence[np.ndarray] | None = field(default=None, compare=False)
    replace_scope: Literal["all_boundary_rows", "realtime_row_only"] = "all_boundary_rows"
    fill: Literal["reflecting", "circulant"] = "reflecting"

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        if kind not in ("lpr", "lc", "ql", "cq", "reflecting", "circulant", "custom"):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.replace_scope not in ("all_boundary_rows", "realtime_row_only"):
            raise ValueError(f"unknown replace_scope {self.replace_scope!r}")
        if self.fill not in ("reflecting", "circulant"):
            raise ValueError(f"unknown fill {self.fill!r}")
        if kind == "custom":
            if self.rows is None:
                raise ValueError("custom policy needs explicit rows")
            for q, r in enumerate(self.rows):
                r = np.asarray(r, dtype=float)
                if abs(r.sum() - 1.0) > 1e-10:
                    raise ValueError(f"custom row q={q} sums to {r.sum():.12g}, not 1")


@dataclass(frozen=True)
class SmootherMatrix:
    entries: np.ndarray
    h: int
    policy: BoundaryPolicy
    source: SymmetricFilter

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def is_banded(self) -> bool:
        i, j = np.indices(self.entries.shape)
        return bool(np.all(self.entries[np.abs(i - j) > 2 * self.h] == 0))


@dataclass(frozen=True)
class TimeSeries:
    timestamps: tuple
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if not np.all(np.isfinite(v)):
            raise ValueError("series contains missing or non-finite values")
        ts = tuple(self.timestamps) if self.timestamps is not None else tuple(range(1, v.size + 1))
        if len(ts) != v.size:
            raise ValueError("timestamps and values differ in length")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


def exchange(n: int) -> np.ndarray:
    """Exchange matrix: ones on the anti-diagonal."""
    return np.eye(n)[::-1]


def reflecting_filter(sym: SymmetricFilter, q: int) -> AsymmetricFilter:
    """Boundary filter that mirrors missing future points about the last one.

    The first missing observation is replaced by the last available one, the
    second by the one before it, and so on.
    """
    h = sym.h
    w = sym.weights
    v = w[:h + q + 1].copy()
    for k in range(1, h - q + 1):
        v[h + q + 1 - k] += w[h + q + k]
    return AsymmetricFilter(v, h, q, family="reflecting")


def reflecting_realtime_filter(sym: SymmetricFilter) -> AsymmetricFilter:
    """``[w_h, w_{h-1} + w_h, ..., w_1 + w_2, w_0 + w_1]``."""
    return reflecting_filter(sym, 0)


def _kind_filter(sym, policy, q):
    kind = policy.kind
    if kind == "reflecting":
        return reflecting_filter(sym, q)
    if kind in ("lc", "ql", "cq"):
        spec = MmsreSpec(kind.upper(), policy.noise_ratio, sym.h)
        return mmsre_filter(sym, spec, q)
    if kind == "lpr":
        if policy.lpr is None:
            raise ValueError("lpr policy needs its LocalPolySpec")
        return asymmetric_lpr_filter(policy.lpr, q, policy.degree)
    if kind == "custom":
        rows = policy.rows
        if q >= len(rows):
            raise ValueError(f"custom policy has no row for q={q}")
        r = np.asarray(rows[q], dtype=float)
        if r.size != sym.h + q + 1 or r.size > 2 * sym.h:
            raise ValueError(f"custom row q={q} has length {r.size}, expected {sym.h + q + 1}")
        return AsymmetricFilter(r, sym.h, q, family="custom")
    raise ValueError(f"no boundary filter for kind {kind!r}")


def boundary_filters(sym: SymmetricFilter, policy: BoundaryPolicy) -> list[AsymmetricFilter | None]:
    """Right-boundary filters for ``q = 0..h-1``.

    ``None`` entries mean wrap-around (circulant) rows.
    """
    out = []
    for q in range(sym.h):
        realtime = q == 0
        if policy.replace_scope == "realtime_row_only" and not realtime:
            out.append(None if policy.fill == "circulant" else reflecting_filter(sym, q))
        elif policy.kind == "circulant":
            out.append(None)
        else:
            out.append(_kind_filter(sym, policy, q))
    return out


def build_smoother(sym: SymmetricFilter, policy: BoundaryPolicy, n: int) -> SmootherMatrix:
    """Assemble the ``n x n`` smoother matrix.

    Raises
    ------
    ValueError
        If ``n <= 2h``.
    """
    h = sym.h
    if n <= 2 * h:
        raise ValueError(f"dimension n={n} must exceed 2h={2 * h}")
    w = sym.weights
    S = np.zeros((n, n))
    for t in range(n):
        if h <= t < n - h:
            S[t, t - h:t + h + 1] = w
    filters = boundary_filters(sym, policy)
    for q, f in enumerate(filters):
        t = n - 1 - q
        if f is None:
            S[t, (t + np.arange(-h, h + 1)) % n] = w
        else:
            S[t, t - h:t + q + 1] = f.weights
    # left boundary is the exchange image of the right one
    S[:h] = S[::-1, ::-1][:h]
    return SmootherMatrix(S, h, policy, sym)


def apply(S, y):
    """Trend estimate ``S y``.

    Returns a :class:`TimeSeries` when given one, else an array.
    """
    A = np.asarray(S)
    vals = y.values if isinstance(y, TimeSeries) else np.asarray(y, dtype=float)
    if vals.shape[0] != A.shape[1]:
        raise ValueError(f"series length {vals.shape[0]} does not match matrix size {A.shape[1]}")
    out = A @ vals
    if isinstance(y, TimeSeries):
        return TimeSeries(y.timestamps, out)
    return out


def polynomial_reproduction_residual(S, r: int) -> float:
    """``max_t |(S x_r - x_r)_t|`` with ``x_r = [1^r, 2^r, ..., n^r]``."""
    if r < 0:
        raise ValueError("degree must be non-negative")
    A = np.asarray(S)
    x = np.arange(1, A.shape[0] + 1, dtype=float) ** r
    return float(np.max(np.abs(A @ x - x)))
