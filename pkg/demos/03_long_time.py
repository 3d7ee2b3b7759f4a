"""
Long-time behaviour through the exact modal propagator.

For c1=c2=1/2 the filtered error is dominated by phase error, which is sixth
order in h.  Against time, classical central schemes grow linearly from the
start while the BFD error sits on a plateau first.
"""

# %%
import numpy as np

from blockfd.experiments import ExperimentConfig, cmd_convergence, cmd_error_vs_time, log_times

for T in (100.0, 1000.0):
    rep = cmd_convergence(ExperimentConfig(T=T, post_process=True, propagator="modal"))
    print(f"T={T:g}: slope over N=48..72 is {rep.fit('l2', slice(0, 3)).slope:.2f}")

# %% error against time up to 1e10
curves = cmd_error_vs_time(ExperimentConfig(N=(16, 128), propagator="modal"), log_times())
for c in curves:
    marks = {t: c.error[np.argmin(abs(c.t - t))] for t in (1, 1e2, 1e4, 1e6)}
    row = "  ".join(f"t={t:g}:{e:.1e}" for t, e in marks.items())
    print(f"N={c.N:3d} {c.label:22s} plateau {c.plateau:.1e}  {row}")
