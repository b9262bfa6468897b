"""
Eigenvalues as samples of the gain
==================================

The eigenvalues of the circulant and of the reflecting operator are the
transfer function H(nu) of the filter sampled on two grids: 2 pi (i-1)/n
for the circulant and (i-1) pi/n for tau_11. The circulant grid visits each
frequency twice, so its eigenvalues pair up; the tau_11 grid is twice as
fine and its eigenvalues are distinct.
"""

import numpy as np

from trendspectra import (
    LocalPolySpec,
    circulant_eigenvalues,
    symmetric_filter,
    tau_eigenvalues,
    tau_matrix,
    transfer_function,
)
from trendspectra.spectral import symmetric_eigen

w = symmetric_filter(LocalPolySpec(h=6, p=3))
n = 51
i = np.arange(n)

xi = tau_eigenvalues(w, n)
zeta = circulant_eigenvalues(w, n)
print("max |xi_i - H((i-1) pi/n)|   =", np.abs(xi - transfer_function(w, i * np.pi / n)).max())
print("max |zeta_i - H(2pi(i-1)/n)| =", np.abs(zeta - transfer_function(w, 2 * np.pi * i / n)).max())

# numeric check with the package's own Jacobi solver
num = symmetric_eigen(tau_matrix(w, n)).values
print("max |sorted xi - Jacobi|     =", np.abs(np.sort(xi) - num).max())

# a coarse look at the gain curve and where the eigenvalues fall on it
print("\n  nu/pi   H(nu)")
for nu in np.linspace(0, 1, 11):
    g = float(transfer_function(w, nu * np.pi))
    bar = "#" * int(round(40 * max(g, 0)))
    print(f"  {nu:4.1f}  {g:+.4f} {bar}")

print("\ncirculant pairs zeta_2 = zeta_51:", zeta[1], zeta[50])
print("smallest gap between tau eigenvalues:", np.diff(np.sort(xi)).min())
print("negative eigenvalues (side lobe):", int(np.sum(xi < 0)))
