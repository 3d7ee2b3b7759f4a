"""
BFD as a penalized discontinuous Galerkin scheme.

The p=1 nodal DG scheme on the same two nodes per cell, plus eight interface
penalties, reproduces every BFD operator.  The penalty weights come out of a
linear solve against the BFD blocks and match the closed form.
"""

# %%
import numpy as np

from blockfd.dg import (block_discrepancy, closed_form_penalties, element_basis,
                        solve_penalties, standard_dg_blocks)

h = 0.1
eb = element_basis(h)
print("mass matrix * 12/h:\n", np.round(eb.mass * 12 / h, 12))
b = standard_dg_blocks(h)
print("standard DG blocks * 4h:\n", np.round(np.stack([b.A, b.B, b.C]) * 4 * h, 12))

# %%
for c1, c2 in [(0.5, 0.5), (0.0, 0.0), (1.0, -0.5), (0.3, -0.7)]:
    pc = solve_penalties(c1, c2, h)
    gap = np.abs(pc.as_array() - closed_form_penalties(c1, c2).as_array()).max()
    print(f"bfd({c1},{c2}): E1={pc.E1:+.5f} E2={pc.E2:+.5f} F1={pc.F1:+.5f} F2={pc.F2:+.5f}"
          f"  closed-form gap {gap:.1e}  block gap {block_discrepancy(c1, c2, h):.1e}")
