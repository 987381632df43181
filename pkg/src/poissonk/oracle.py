"""Ground truth for h_k(n; lam) by brute-force enumeration of the defining sum.

Every tuple (n_1, ..., n_k) with n_1 + 2 n_2 + ... + k n_k = n contributes
lam**(n_1+...+n_k) / (n_1! ... n_k!). Nothing here shares code with the
recurrences in :mod:`poissonk.core`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import HPolynomial
from .errors import InvalidParamsError, UnsupportedRangeError

__all__ = ["TupleTerm", "iter_tuples", "enumerate_h", "eval_exact", "ORACLE_CAP"]

ORACLE_CAP = 25


@dataclass(frozen=True)
class TupleTerm:
    counts: tuple
    weight: Fraction
    degree: int


def _descend(i, remaining, tail):
    # choose n_i for i = k, k-1, ..., 1; n_1 absorbs what is left
    if i == 1:
        yield (remaining,) + tail
        return
    for c in range(remaining // i, -1, -1):
        yield from _descend(i - 1, remaining - i * c, (c,) + tail)


def iter_tuples(k: int, n: int):
    """Yield every :class:`TupleTerm` of the order-k sum for index n."""
    if k < 1 or n < 0:
        raise InvalidParamsError(f"need k >= 1 and n >= 0, got k={k}, n={n}")
    if k > ORACLE_CAP or n > ORACLE_CAP:
        raise UnsupportedRangeError(f"oracle enumeration is capped at k, n <= {ORACLE_CAP}")
    for counts in _descend(k, n, ()):
        denom = 1
        for c in counts:
            denom *= math.factorial(c)
        yield TupleTerm(counts, Fraction(1, denom), sum(counts))


def enumerate_h(k: int, n: int) -> HPolynomial:
    coeffs = [Fraction(0)] * (n + 1)
    for term in iter_tuples(k, n):
        coeffs[term.degree] += term.weight
    return HPolynomial(k, n, tuple(coeffs))


def eval_exact(poly: HPolynomial, lam) -> Fraction:
    """Sum of c_j lam**j in exact arithmetic (``lam`` int or Fraction)."""
    lam = Fraction(lam)
    return sum((c * lam**j for j, c in enumerate(poly.coeffs)), Fraction(0))
