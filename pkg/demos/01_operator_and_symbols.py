"""
The block operator and its pair symbols.

Builds the BFD operator for a few (c1, c2), checks it against the
three-stencil construction, and compares the closed-form eigenvalues of each
(omega, nu) pair with a dense eigensolve.
"""

# %%
import numpy as np

from blockfd import SchemeParams, assemble_bfd, assemble_bfd_stencils, build_grid, to_dense
from blockfd.symbol import decompose_all

grid = build_grid(8, 1.0)
print("nodes:", np.round(grid.nodes, 4))

# %% block form against the stencil form
for c1, c2 in [(0, 0), (1, -0.5), (0.5, 0.5)]:
    params = SchemeParams(c1, c2)
    op = assemble_bfd(grid, params)
    gap = np.abs(to_dense(op) - assemble_bfd_stencils(grid, params)).max()
    print(f"bfd({c1},{c2}): block vs stencil max diff {gap:.1e}")

# %% closed-form spectrum
params = SchemeParams(1.0, -0.5)
Q = to_dense(assemble_bfd(grid, params))
dense = np.linalg.eigvals(Q)
print(" omega  nu   Qhat1               Qhat2              cos(theta)")
for d in decompose_all(8, grid.h, params):
    nearest = min(abs(dense - d.Qhat1))
    print(f"{d.mode.omega:5d} {d.mode.nu:4d}  {d.Qhat1:.6f}  {d.Qhat2:.6f}  {d.cos_theta:.4f}"
          f"   (dense gap {nearest:.1e})")

# %% the physical branch tracks -i omega; the partner is damped
for N in (16, 64, 256):
    g = build_grid(N, 1.0)
    d = decompose_all(N, g.h, params)[(N - 1) // 2 + 1]   # omega = 1
    print(f"N={N:4d}: Qhat1 + 2 pi i = {d.Qhat1 + 2j * np.pi:.3e}, Re Qhat2 h = {d.Qhat2.real * g.h:.3f}")
