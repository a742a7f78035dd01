"""Cantor pairing on N x N, the index arithmetic everything else rides on.

pair is a bijection N^2 -> N; unpair inverts it exactly with integer sqrt.
"""

from math import isqrt


def pair(a: int, b: int) -> int:
    """Diagonal enumeration of N^2: pair(a, b) = (a+b)(a+b+1)/2 + b."""
    if a < 0 or b < 0:
        raise ValueError(f"pair needs nonnegative arguments, got ({a}, {b})")
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple[int, int]:
    """Inverse of pair. Exact for arbitrarily large n (integer sqrt)."""
    if n < 0:
        raise ValueError(f"unpair needs a nonnegative argument, got {n}")
    # Largest s with s(s+1)/2 <= n.
    s = (isqrt(8 * n + 1) - 1) // 2
    b = n - s * (s + 1) // 2
    return s - b, b
