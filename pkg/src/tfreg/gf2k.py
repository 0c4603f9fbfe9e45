"""Arithmetic in the binary field GF(2^k).

Elements are plain ints whose bits are the coefficients of a polynomial over
GF(2); bit ``i`` is the coefficient of ``x**i``.  Addition is ``^``.
"""

from dataclasses import dataclass

MAX_K = 16


def _poly_mod(a, b):
    """Remainder of ``a`` divided by ``b`` as GF(2) polynomials."""
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def is_irreducible(poly):
    """Trial division by every polynomial of degree 1..deg(poly)//2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(2, 1 << (deg // 2 + 1)):
        if _poly_mod(poly, d) == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldCtx:
    k: int
    modulus: int

    @property
    def order(self):
        return 1 << self.k

    def __post_init__(self):
        if self.modulus.bit_length() != self.k + 1:
            raise ValueError(f"modulus {self.modulus:#b} does not have degree {self.k}")
        if not is_irreducible(self.modulus):
            raise ValueError(f"modulus {self.modulus:#b} is reducible over GF(2)")

    def elements(self):
        return range(self.order)


def make_field(k):
    """Field context for GF(2^k) using the lexicographically smallest
    irreducible modulus of degree ``k`` with constant term 1."""
    if not isinstance(k, int) or not 1 <= k <= MAX_K:
        raise ValueError(f"k must be an integer in [1, {MAX_K}], got {k!r}")
    # odd polynomials only: for k = 1 this picks x + 1 over x, for k >= 2 every
    # irreducible is odd anyway
    for poly in range((1 << k) | 1, 1 << (k + 1), 2):
        if is_irreducible(poly):
            return FieldCtx(k, poly)
    raise AssertionError("no irreducible polynomial found")  # unreachable


def mul(ctx, a, b):
    # shift-and-xor with reduction after every shift
    k, mod = ctx.k, ctx.modulus
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> k) & 1:
            a ^= mod
    return r


def pow(ctx, a, e):
    """Square-and-multiply exponentiation.  ``pow(ctx, 0, 0) == 1``."""
    if e < 0:
        raise ValueError("negative exponents are not supported")
    r = 1
    while e:
        if e & 1:
            r = mul(ctx, r, a)
        a = mul(ctx, a, a)
        e >>= 1
    return r
