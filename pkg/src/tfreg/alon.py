"""Alon's triangle-free Cayley graph on GF(2)^{3k}.

Each nonzero field element ``w`` of GF(2^k) is mapped to the 3k-bit vector
``(w, w^3, w^5)``.  The nonzero elements are split by the leading bit of
``w^7`` into ``W0`` (bit 0, size ``2^{k-1}-1``) and ``W1`` (bit 1, size
``2^{k-1}``); this split is a bijective image of the leading-bit split
because ``x -> x^7`` permutes GF(2^k)* whenever 3 does not divide ``k``.
The generator set is ``{vec(a) ^ vec(b) : a in W0, b in W1}`` and two vertices
are adjacent iff their XOR is a generator.

Splitting on the leading bit of ``w`` itself is *not* enough: that bit is a
linear functional of ``vec(w)``, so some character sees ``W0`` and ``W1``
with opposite signs and the graph has eigenvalue ``-D``.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gf2k
from .graph import Graph, triangle_count

SUPPORTED_K = (2, 4, 5, 7)


class ConstructionError(RuntimeError):
    """A built object failed one of its postconditions."""


@dataclass(frozen=True)
class AlonSpec:
    k: int

    def __post_init__(self):
        if self.k < 1 or self.k % 3 == 0:
            raise ValueError(f"k must be a positive integer not divisible by 3, got {self.k}")

    @property
    def N(self):
        return 2 ** (3 * self.k)

    @property
    def D(self):
        return 2 ** (self.k - 1) * (2 ** (self.k - 1) - 1)

    @property
    def lambda_bound(self):
        return 9 * 2 ** self.k + 3 * 2 ** (self.k / 2) + 0.25

    @property
    def lambda_floor(self):
        """sqrt(D(N-D)/(N-1)): no D-regular graph on N vertices does better."""
        N, D = self.N, self.D
        return float(np.sqrt(D * (N - D) / (N - 1)))


def _check_k(k):
    if not isinstance(k, (int, np.integer)) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    if k % 3 == 0:
        raise ValueError(f"k={k} is divisible by 3")


def _moment_vector(ctx, w):
    k = ctx.k
    return w | (gf2k.pow(ctx, w, 3) << k) | (gf2k.pow(ctx, w, 5) << (2 * k))


def generator_set(ctx):
    """Sorted array of the ``D`` generators as 3k-bit integers."""
    _check_k(ctx.k)
    k = ctx.k
    top = 1 << (k - 1)
    w0, w1 = [], []
    for w in range(1, ctx.order):
        (w1 if gf2k.pow(ctx, w, 7) & top else w0).append(_moment_vector(ctx, w))
    spec = AlonSpec(k)
    if len(w0) != 2 ** (k - 1) - 1 or len(w1) != 2 ** (k - 1):
        raise ConstructionError(f"split sizes {len(w0)}/{len(w1)} do not match 2^(k-1)-1 / 2^(k-1)")
    gens = (np.array(w0, dtype=np.int64)[:, None] ^ np.array(w1, dtype=np.int64)[None, :]).ravel()
    gens = np.unique(gens)
    if len(gens) != spec.D:
        raise ConstructionError(f"{spec.D - len(gens)} duplicate generators")
    if gens[0] == 0:
        raise ConstructionError("zero vector among generators")
    return gens


def has_zero_triple(gens):
    """True iff three distinct generators XOR to zero (O(D^2) scan)."""
    members = set(gens.tolist())
    g = gens.tolist()
    for i, a in enumerate(g):
        for b in g[i + 1:]:
            c = a ^ b
            if c > b and c in members:
                return True
    return False


def cayley_graph(nbits, gens):
    """Cayley graph of (Z/2)^nbits with the given generators."""
    N = 1 << nbits
    gens = np.asarray(gens, dtype=np.int64)
    nbr = np.arange(N, dtype=np.int64)[:, None] ^ gens[None, :]
    u = np.broadcast_to(np.arange(N, dtype=np.int64)[:, None], nbr.shape)
    keep = nbr > u
    edges = np.stack([u[keep], nbr[keep]], axis=1)
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return Graph(N, edges[order])


@lru_cache(maxsize=4)
def build_alon(k, check=True):
    """Return ``(graph, spec)`` for the construction at parameter ``k``.

    The result is cached; graphs are immutable so sharing is safe.  With
    ``check`` the regularity and triangle-freeness postconditions are
    verified by full scans.  The eigenvalue bound is checked separately
    (see :func:`tfreg.spectral.compute_lambda`).
    """
    if k not in SUPPORTED_K:
        _check_k(k)
        raise ValueError(f"k={k} is outside the supported set {SUPPORTED_K}")
    spec = AlonSpec(k)
    ctx = gf2k.make_field(k)
    G = cayley_graph(3 * k, generator_set(ctx))
    if check:
        if not G.is_regular(spec.D):
            raise ConstructionError(f"graph is not {spec.D}-regular")
        t = triangle_count(G)
        if t:
            raise ConstructionError(f"graph has {t} triangles")
    return G, spec


def format_generators(k, gens):
    """Generator dump: ``k`` on the first line, then one hex vector per line."""
    width = -(-3 * k // 4)
    return f"{k}\n" + "".join(f"{int(g):0{width}x}\n" for g in gens)
