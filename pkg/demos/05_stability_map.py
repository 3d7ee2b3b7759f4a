"""
Where is the scheme stable?

Scans a lattice of (c1, c2) and prints a character map: '.' stable, 'x'
unstable although c1 >= c2, 'o' unstable with c1 < c2.  The slow low-mode
growth for c1 > c2 with c1 + c2 < 0 follows the small-theta series
Re Qhat1 h ~ -(c1 + c2) theta^6 / (384 (c1 - c2)).
"""

# %%
import numpy as np

from blockfd.experiments import cmd_stability

rows = cmd_stability(lattice=17, N=16)
values = sorted({r["c1"] for r in rows})
grid = {(r["c1"], r["c2"]): r for r in rows}
print("rows: c2 from 1 down to -1; columns: c1 from -1 to 1")
for c2 in reversed(values):
    line = ""
    for c1 in values:
        r = grid[(c1, c2)]
        line += "." if r["stable"] else ("x" if c1 >= c2 else "o")
    print(f"{c2:+.3f} {line}")

bad = [r for r in rows if r["claimed_stable"] and not r["stable"]]
print(f"{len(bad)} lattice points with c1 >= c2 are unstable; all have c1 + c2 < 0:",
      all(r["c1"] + r["c2"] < 0 for r in bad))
print("closed form and dense eigensolver agree everywhere:",
      all(r["stable"] == r["dense_stable"] for r in rows))
print("largest cos(theta) with c1 >= c2:",
      round(max(r["max_cos_theta"] for r in rows if r["c1"] >= r["c2"]), 4))
