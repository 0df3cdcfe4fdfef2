"""Closed-form copy counts and density limits, in exact rational arithmetic.

Everything here is a direct evaluation (no tree is ever built): copy counts
of stars and caterpillars inside complete d-ary trees, the limiting densities
those counts approach as the host tree grows, and the coefficient of the
leading term of the minimum caterpillar count over all d-ary hosts.

Counts are returned as Python ints and densities as ``fractions.Fraction``;
any formula whose value must be integral is checked for integrality before
returning, so a wrong edit fails loudly instead of silently truncating.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .errors import PreconditionError

__all__ = [
    "star_copies",
    "caterpillar_copies_complete",
    "limit_density_complete",
    "liminf_density",
    "bk_coefficient",
    "bk_lower_bound",
    "asymptotic_min_copies",
]


def _check_r_d(r: int, d: int) -> None:
    if not isinstance(r, int) or r < 2:
        raise PreconditionError(f"pattern arity must be an integer >= 2, got {r!r}")
    if not isinstance(d, int) or d < r:
        raise PreconditionError(f"host arity must be an integer >= {r}, got {d!r}")


def _check_caterpillar_size(r: int, k: int) -> int:
    """Validate that an r-ary caterpillar with k leaves exists; return its
    internal path length (k - 1) / (r - 1)."""
    if not isinstance(k, int) or k < r or (k - 1) % (r - 1) != 0:
        raise PreconditionError(
            f"no {r}-ary caterpillar with {k!r} leaves (need k >= {r}, k % {r - 1} == 1)"
        )
    return (k - 1) // (r - 1)


def _exact_int(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise AssertionError(f"{what} must be integral, got {value}")
    return value.numerator


def star_copies(r: int, d: int, h: int) -> int:
    """Copies of the r-leaf star in the complete d-ary tree of height h.

    Any r leaves hanging below a common vertex with pairwise-distinct first
    steps induce the star; summing C(d, r) * (subtree leaf count)^r over the
    vertices of each depth gives the geometric sum

        C(d, r) / (d^r - d) * (d^(r h) - d^h).
    """
    _check_r_d(r, d)
    if not isinstance(h, int) or h < 0:
        raise PreconditionError(f"height must be an integer >= 0, got {h!r}")
    value = Fraction(comb(d, r) * (d ** (r * h) - d**h), d**r - d)
    return _exact_int(value, "star copy count")


def caterpillar_copies_complete(r: int, k: int, d: int, h: int) -> int:
    """Copies of the r-ary caterpillar with k leaves in the complete d-ary
    tree of height h.

    With q = (k - 1) / (r - 1) internal vertices on the caterpillar's spine,

        C(d, r)^q * (r / d)^(q - 1) * d^(h - 1)
            * prod_{i = 1..q} (d^(h (r - 1)) - d^((i - 1)(r - 1))) / (d^(i (r - 1)) - 1).

    For k == r this collapses to :func:`star_copies`, and for h too small to
    host the spine the product vanishes, so the count is 0.
    """
    _check_r_d(r, d)
    q = _check_caterpillar_size(r, k)
    if not isinstance(h, int) or h < 1:
        raise PreconditionError(f"height must be an integer >= 1, got {h!r}")
    s = r - 1
    value = Fraction(comb(d, r)) ** q * Fraction(r, d) ** (q - 1) * d ** (h - 1)
    for i in range(1, q + 1):
        value *= Fraction(d ** (h * s) - d ** ((i - 1) * s), d ** (i * s) - 1)
    return _exact_int(value, "caterpillar copy count")


def limit_density_complete(r: int, k: int, d: int) -> Fraction:
    """Limit, as the height grows, of the density of the r-ary caterpillar
    with k leaves inside complete d-ary trees:

        (k! / d) * C(d, r)^q * (r / d)^(q - 1) * prod_{j = 1..q} 1 / (d^(j (r - 1)) - 1).
    """
    _check_r_d(r, d)
    q = _check_caterpillar_size(r, k)
    s = r - 1
    value = Fraction(factorial(k), d) * Fraction(comb(d, r)) ** q * Fraction(r, d) ** (q - 1)
    for j in range(1, q + 1):
        value /= d ** (j * s) - 1
    return value


def liminf_density(d: int, k: int) -> Fraction:
    """Smallest limiting density of the k-leaf binary caterpillar over
    growing d-ary trees, attained along complete d-ary trees:

        (k! / 2) * (d - 1)^(k - 1) * prod_{j = 1..k-1} 1 / (d^j - 1).

    Algebraically identical to ``limit_density_complete(2, k, d)``.
    """
    _check_r_d(2, d)
    if not isinstance(k, int) or k < 2:
        raise PreconditionError(f"caterpillar size must be an integer >= 2, got {k!r}")
    value = Fraction(factorial(k), 2) * (d - 1) ** (k - 1)
    for j in range(1, k):
        value /= d**j - 1
    return value


def bk_coefficient(d: int, k: int) -> Fraction:
    """Leading coefficient b_k of the minimum k-caterpillar count in n-leaf
    d-ary trees: (1/2) (d - 1)^(k - 1) prod_{j = 1..k-1} 1 / (d^j - 1).

    Satisfies b_k = b_{k-1} (d - 1) / (d^(k-1) - 1) and relates to the density
    limit by liminf = k! * b_k.
    """
    return liminf_density(d, k) / factorial(k)


def bk_lower_bound(d: int, k: int, n: int) -> Fraction:
    """Lower bound b_k n^k - n^(k-1) / (k - 1)! valid for the k-caterpillar
    count of every strictly d-ary tree with n leaves."""
    if not isinstance(n, int) or n < 0:
        raise PreconditionError(f"leaf count must be an integer >= 0, got {n!r}")
    return bk_coefficient(d, k) * n**k - Fraction(n ** (k - 1), factorial(k - 1))


def asymptotic_min_copies(d: int, k: int, n: int) -> Fraction:
    """Leading term b_k n^k of the minimum k-caterpillar count over d-ary
    trees with n leaves; equals liminf_density(d, k) * n^k / k!."""
    if not isinstance(n, int) or n < 0:
        raise PreconditionError(f"leaf count must be an integer >= 0, got {n!r}")
    return bk_coefficient(d, k) * n**k
