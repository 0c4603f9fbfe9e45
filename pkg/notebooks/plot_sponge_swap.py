"""
Pentagon sponges
================

Every pentagon ``g-a-x-y-b`` splits into three edges ``ga, gb, xy`` kept in S
and two edges ``ax, yb`` held back in R.  Trading one for the other lowers the
degree of ``g`` by two and nothing else.
"""

import numpy as np

from tfreg import build_alon, build_sponge, induced, plan, sponge_reduce
from tfreg.regularize import sample_subset

A, _ = build_alon(4)
p = plan(3500, "desk")
X, tries = sample_subset(A, 3500, p.conc_slack, np.random.default_rng(0))
G, _ = induced(A, X)
print("sample accepted after", tries, "draw(s); degrees", G.degrees.min(), "to", G.degrees.max())

sp = build_sponge(G, p.sponge, seed=0)
quota = np.array([sp.quota(v) for v in range(G.n)])
print(len(sp.pentagons), "pentagons, at least", quota.min(), "anchored at every vertex")
print("R has", sp.R.m, "edges, S has", sp.S.m)

# lower vertex 0 by 2 and vertex 1 by 4
f = np.zeros(G.n, dtype=int)
f[0], f[1] = 1, 2
H = sponge_reduce(sp, f)
print("degree change", (sp.S.degrees - H.degrees)[:4], "elsewhere", np.abs(sp.S.degrees - H.degrees)[2:].max())
