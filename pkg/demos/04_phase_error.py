"""
A 180 degree phase error.

sin(4 pi x) on 32 blocks transported to T=4800: the classical fourth-order
central scheme (bfd with c1=c2=0) ends up exactly out of phase, while
c1=c2=1/2 stays on top of the exact solution.
"""

# %%
import numpy as np

from blockfd.experiments import ExperimentConfig, cmd_phase_demo

profiles = cmd_phase_demo(ExperimentConfig(N=(32,), T=4800.0))
for p in profiles:
    corr = np.corrcoef(p.exact, p.numeric)[0, 1]
    print(f"{p.label:22s} Linf error {p.linf_error:.4f}  correlation with exact {corr:+.3f}")

# %% a few nodes side by side
p0, p1 = profiles[0], profiles[2]
print("   x       exact    bfd(0,0)  bfd(.5,.5)")
for i in range(0, 64, 8):
    print(f"{p0.x[i]:.4f}  {p0.exact[i]:+.4f}  {p0.numeric[i]:+.4f}  {p1.numeric[i]:+.4f}")
