"""
Henderson filter and its end weights
====================================

The 13-term Henderson filter is a cubic local fit with a smooth kernel.
Near the end of a series the future observations are missing, so each of
the last six points needs its own asymmetric filter. Four ways to build
them are compared here.
"""

import numpy as np

from trendspectra import (
    BoundaryPolicy,
    LocalPolySpec,
    MmsreSpec,
    asymmetric_lpr_filter,
    build_smoother,
    mmsre_filter,
    polynomial_reproduction_residual,
    symmetric_filter,
)

np.set_printoptions(precision=5, suppress=True, linewidth=100)

spec = LocalPolySpec(h=6, p=3)
w = symmetric_filter(spec)
print("symmetric weights, lags -6..6")
print(w.weights)

# real-time filters (q = 0): the last point sees no future at all
print("\nreal-time filters, lags -6..0")
print("lpr", asymmetric_lpr_filter(spec, 0).weights)
for fam in ("LC", "QL", "CQ"):
    print(fam.lower(), " ", mmsre_filter(w, MmsreSpec(fam, h=6), 0).weights)

# LC with the default noise ratio gives the classic X-11 end weights
# -0.092 -0.058 0.012 0.120 0.244 0.353 0.421

# how much of a polynomial does each smoother pass through unchanged
print("\nmax |S x - x| for x = t^r, n = 51")
print("policy   r=0       r=1       r=2       r=3")
for kind in ("lc", "ql", "cq", "lpr"):
    S = build_smoother(w, BoundaryPolicy(kind, lpr=spec), 51)
    res = [polynomial_reproduction_residual(S, r) for r in range(4)]
    print(f"{kind:6s}" + "".join(f"{x:10.2e}" for x in res))
