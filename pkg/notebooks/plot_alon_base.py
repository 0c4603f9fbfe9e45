"""
The base graph and its spectrum
===============================

A Cayley graph on 12-bit vectors with 56 generators.  Because the group is
abelian the eigenvalues are character sums, so the whole spectrum can be read
off a Walsh-Hadamard transform of the generator indicator.
"""

import numpy as np

from tfreg import build_alon, compute_lambda, generator_set, make_field, triangle_count

G, spec = build_alon(4)
print(G, "degree", spec.D, "triangles", triangle_count(G))

# character sums: one eigenvalue per 12-bit vector s
gens = generator_set(make_field(4))
f = np.zeros(G.n)
f[gens] = 1.0
h = 1
while h < len(f):
    f = f.reshape(-1, 2, h)
    f = np.stack([f[:, 0] + f[:, 1], f[:, 0] - f[:, 1]], axis=1).reshape(-1)
    h *= 2
values, counts = np.unique(np.round(f).astype(int), return_counts=True)
print(dict(zip(values.tolist(), counts.tolist())))

# 56 appears four times: the graph has four components of 1024 vertices,
# so lambda equals the degree here; inside a component the largest
# nontrivial eigenvalue is 40 in absolute value
rep = compute_lambda(G, "lanczos", tol=1e-9)
print("lambda", rep.lam, "bound", spec.lambda_bound, "floor", round(spec.lambda_floor, 3))
