"""Exact total orders on the integer lattice Z^n.

Every multiplier operator in this package is driven by the sign function of
a positive cone in Z^n.  Two order families are shipped, both decidable in
exact integer arithmetic:

* lexicographic, with an arbitrary axis permutation;
* weighted-quadratic on Z^2, comparing n1 + n2*sqrt(p/q) against zero for a
  non-square rational p/q (so the weight is irrational and the order total).

Floating point is never consulted for a comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable

LatticePoint = tuple  # tuple of ints; dimension is len(point)


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


@dataclass(frozen=True)
class OrderSpec:
    """A translation-invariant total order on Z^n.

    kind "lex": compare coordinates in the order given by ``perm`` (a
    permutation of axis indices), first nonzero decides.
    kind "quad": dimension 2 only; x > 0 iff x[0] + x[1]*sqrt(p/q) > 0.
    """

    kind: str
    perm: tuple = ()
    p: int = 0
    q: int = 0

    def __post_init__(self):
        if self.kind == "lex":
            if not self.perm or sorted(self.perm) != list(range(len(self.perm))):
                raise ValueError(f"lex order needs an axis permutation, got {self.perm!r}")
        elif self.kind == "quad":
            if self.p <= 0 or self.q <= 0:
                raise ValueError("quad order needs positive integers p, q")
            g = math.gcd(self.p, self.q)
            if _is_perfect_square(self.p // g) and _is_perfect_square(self.q // g):
                raise ValueError(
                    f"p/q = {self.p}/{self.q} is the square of a rational; "
                    "the weight sqrt(p/q) must be irrational"
                )
        else:
            raise ValueError(f"unknown order kind {self.kind!r}")

    @property
    def dim(self) -> int:
        return len(self.perm) if self.kind == "lex" else 2

    @staticmethod
    def lex(dim: int, perm: Iterable[int] | None = None) -> "OrderSpec":
        return OrderSpec("lex", perm=tuple(perm) if perm is not None else tuple(range(dim)))

    @staticmethod
    def quad(p: int, q: int) -> "OrderSpec":
        return OrderSpec("quad", p=p, q=q)

    def to_json_dict(self) -> dict:
        if self.kind == "lex":
            return {"kind": "lex", "perm": list(self.perm)}
        return {"kind": "quad", "p": self.p, "q": self.q}

    @staticmethod
    def from_json_dict(d: dict) -> "OrderSpec":
        if d.get("kind") == "lex":
            return OrderSpec.lex(len(d["perm"]), d["perm"])
        if d.get("kind") == "quad":
            return OrderSpec.quad(int(d["p"]), int(d["q"]))
        raise ValueError(f"unknown order kind {d.get('kind')!r}")


def _check_point(x: LatticePoint, order: OrderSpec) -> None:
    if len(x) != order.dim:
        raise ValueError(f"point {x!r} has dimension {len(x)}, order expects {order.dim}")
    for c in x:
        if not isinstance(c, (int,)):
            raise ValueError(f"lattice coordinates must be ints, got {c!r}")


def _sign_quad(n1: int, n2: int, p: int, q: int) -> int:
    # sign of n1 + n2*sqrt(p/q)  ==  sign of n1*sqrt(q) + n2*sqrt(p),
    # resolved by comparing q*n1^2 with p*n2^2 when the terms have mixed signs.
    if n1 == 0 and n2 == 0:
        return 0
    if n1 >= 0 and n2 >= 0:
        return 1
    if n1 <= 0 and n2 <= 0:
        return -1
    lhs = q * n1 * n1
    rhs = p * n2 * n2
    # p/q non-square makes lhs == rhs impossible for nonzero coordinates
    if n1 > 0:  # n2 < 0
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


def sgn_cone(x: LatticePoint, order: OrderSpec) -> int:
    """Sign of x for the positive cone of ``order``: +1, 0, or -1.

    Zero only at the origin; odd under negation.
    """
    _check_point(x, order)
    if order.kind == "lex":
        for axis in order.perm:
            c = x[axis]
            if c != 0:
                return 1 if c > 0 else -1
        return 0
    return _sign_quad(x[0], x[1], order.p, order.q)


def compare(x: LatticePoint, y: LatticePoint, order: OrderSpec) -> Ordering:
    """Total-order comparison of two lattice points (exact)."""
    _check_point(x, order)
    _check_point(y, order)
    diff = tuple(a - b for a, b in zip(x, y))
    return Ordering(sgn_cone(diff, order))


def sign_decomposition(x: LatticePoint) -> tuple:
    """Split the lexicographic sign on Z^2 into its two one-dimensional pieces.

    Returns (s_lex, s1, s2) where s1 is the sign of the first coordinate and
    s2 is the sign supported on the axis {0} x Z; the three satisfy
    s_lex = s1 + s2 (checked).
    """
    if len(x) != 2:
        raise ValueError(f"sign_decomposition needs a point of Z^2, got dimension {len(x)}")
    n1, n2 = x
    s1 = (n1 > 0) - (n1 < 0)
    s2 = ((n2 > 0) - (n2 < 0)) if n1 == 0 else 0
    s_lex = sgn_cone(x, OrderSpec.lex(2))
    assert s_lex == s1 + s2, f"sign split violated at {x!r}"
    return s_lex, s1, s2


def add(x: LatticePoint, y: LatticePoint) -> LatticePoint:
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    return tuple(a + b for a, b in zip(x, y))


def negate(x: LatticePoint) -> LatticePoint:
    return tuple(-a for a in x)
