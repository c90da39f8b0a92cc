"""Order-driven multiplier operators: Riesz projections, the Hilbert
transform, analytic completion, and the norm functionals built from them.

All operators act coefficientwise through the sign of the chosen positive
cone; the plus projection keeps the unit character, so P+ preserves means.
Norm functionals that need an integral take an explicit grid; nothing here
picks a resolution silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridFunction, GridSpec, lp_norm, sample
from .lattice import OrderSpec, sgn_cone
from .trigpoly import SpectralBox, TrigPoly


@dataclass(frozen=True)
class OperatorContext:
    """An order plus an optional truncation window.

    When a truncation box is given it must contain the origin, and inputs
    are required to have their spectra inside it; this keeps experiment
    windows honest.  With ``truncation=None`` operators accept any finite
    polynomial.
    """

    order: OrderSpec
    truncation: SpectralBox | None = None

    def __post_init__(self):
        if self.truncation is not None and not self.truncation.contains_zero:
            raise ValueError("truncation window must contain the zero frequency")

    def _check(self, f: TrigPoly) -> None:
        if f.dim != self.order.dim:
            raise ValueError(f"dimension mismatch: poly {f.dim}, order {self.order.dim}")
        if self.truncation is not None:
            for k in f.coeffs:
                if not self.truncation.contains(k):
                    raise ValueError(f"coefficient at {k} outside the truncation window")


def project(f: TrigPoly, side: str, ctx: OperatorContext) -> TrigPoly:
    """Riesz projection: "plus" keeps sgn >= 0 (mean included), "minus" the rest."""
    ctx._check(f)
    if side == "plus":
        return f.restrict(lambda k: sgn_cone(k, ctx.order) >= 0)
    if side == "minus":
        return f.restrict(lambda k: sgn_cone(k, ctx.order) < 0)
    raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")


def hilbert(f: TrigPoly, ctx: OperatorContext) -> TrigPoly:
    """Conjugate-function operator: multiply each coefficient by -i*sgn(k)."""
    ctx._check(f)
    out = {}
    for k, c in f.coeffs.items():
        s = sgn_cone(k, ctx.order)
        if s:
            out[k] = -1j * s * c
    return TrigPoly(f.dim, out)


def analytic_completion(u: TrigPoly, ctx: OperatorContext) -> TrigPoly:
    """u + i*Hu for real u: the unique analytic function with real part u
    and mean-zero imaginary part."""
    ctx._check(u)
    if not u.is_real():
        raise ValueError("analytic completion is defined for real-valued input")
    return u + 1j * hilbert(u, ctx)


def hilbert_identity_residual(q: TrigPoly, ctx: OperatorContext) -> float:
    """Coefficient-norm residual of  i*H q = 2 P+ q - q - mean(q).

    The identity is exact for every polynomial under the mean-keeping P+
    convention (the mean enters once, not twice: both sides vanish at the
    zero frequency).
    """
    ctx._check(q)
    lhs = 1j * hilbert(q, ctx)
    rhs = 2.0 * project(q, "plus", ctx) - q - TrigPoly.constant(q.dim, q.mean())
    return (lhs - rhs).l2_norm()


def h1_star_norm(q: TrigPoly, grid: GridSpec, ctx: OperatorContext) -> float:
    """||P- q||_1 + ||P+ q||_1 by grid quadrature (the real-H^1 norm)."""
    ctx._check(q)
    if not q.is_real():
        raise ValueError("the star norm is defined on real polynomials")
    minus = lp_norm(sample(project(q, "minus", ctx), grid), 1)
    plus = lp_norm(sample(project(q, "plus", ctx), grid), 1)
    return minus + plus


def hilbert_equiv_norm(q: TrigPoly, grid: GridSpec, ctx: OperatorContext) -> float:
    """||q||_1 + ||H q||_1 by grid quadrature (equivalent to the star norm)."""
    ctx._check(q)
    if not q.is_real():
        raise ValueError("the equivalent norm is defined on real polynomials")
    return lp_norm(sample(q, grid), 1) + lp_norm(sample(hilbert(q, ctx), grid), 1)


def bmo_upper_from_decomposition(f: TrigPoly, g: TrigPoly, grid: GridSpec,
                                 ctx: OperatorContext):
    """Realize phi = f + H g and return (phi, ||f||_sup + ||g||_sup).

    Any bounded pair (f, g) upper-bounds the oscillation norm of phi this
    way; the sups are grid sups.
    """
    ctx._check(f)
    ctx._check(g)
    phi = f + hilbert(g, ctx)
    bound = lp_norm(sample(f, grid), "sup") + lp_norm(sample(g, grid), "sup")
    return phi, bound
