"""
Edge counts between vertex sets
===============================

For a d-regular graph the number of ordered edges from S to T stays within
``lambda * sqrt(|S||T|)`` of ``d |S| |T| / n``.  Random sets sit far inside
that band; cosets of subspaces get closer.
"""

import numpy as np

from tfreg import build_alon, compute_lambda, mixing_deviation

A, _ = build_alon(4)
lam = compute_lambda(A, "lanczos", tol=1e-9).lam
rng = np.random.default_rng(1)

ratios = []
for _ in range(200):
    S = np.flatnonzero(rng.random(A.n) < 0.3)
    T = np.flatnonzero(rng.random(A.n) < 0.1)
    ratios.append(mixing_deviation(A, S, T, lam)["bound_ratio"])
print("random sets: worst ratio", round(max(ratios), 4))

# a subspace spanned by 8 random vectors and one of its translates
span = np.zeros(1, dtype=np.int64)
for b in rng.integers(1, A.n, size=8):
    span = np.union1d(span, span ^ b)
r = mixing_deviation(A, span, span ^ 5, lam)
print("subspace coset:", r)
