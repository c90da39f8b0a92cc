"""Finite Hankel sections, their operator norms, and the minimax side of
the Nehari problem.

A Hankel section is the matrix of f -> P-(phi*f) between finite character
bases: entry(eta, xi) = phi_hat(eta - xi) for xi in the positive cone and
eta strictly below it.  Its norm never exceeds the norm of the full
operator, which in turn is at most the analytic star-norm of the symbol;
the minimax solver produces feasible upper bounds for that star-norm.  The
pair (section norm, minimax value) therefore brackets the star-norm from
both sides.  Note the two ends measure slightly different infima - the
perturbations here have strictly negative spectrum (the mean is pinned by
P+ h = phi), while the Hankel norm also dispenses with the mean - so the
bracket need not be tight even at convergence.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .grid import GridFunction, GridSpec, sample
from .lattice import LatticePoint, OrderSpec, compare, sgn_cone
from .multiplier import OperatorContext, project
from .trigpoly import SpectralBox, TrigPoly


class ConvergenceError(RuntimeError):
    """Power iteration failed to certify a value within max_iter."""


@dataclass(frozen=True)
class HankelMatrix:
    """Finite section of a Hankel operator in character bases.

    in_basis is sorted ascending in the order, out_basis descending (the
    row closest to zero first); entries[i, j] is the symbol coefficient at
    out_basis[i] - in_basis[j].
    """

    order: OrderSpec
    in_basis: tuple
    out_basis: tuple
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.complex128)
        if e.shape != (len(self.out_basis), len(self.in_basis)):
            raise ValueError("entry matrix shape does not match bases")
        object.__setattr__(self, "entries", e)

    def to_json_dict(self) -> dict:
        return {
            "order": self.order.to_json_dict(),
            "in_basis": [list(k) for k in self.in_basis],
            "out_basis": [list(k) for k in self.out_basis],
            "entries_re": self.entries.real.tolist(),
            "entries_im": self.entries.imag.tolist(),
        }


def _sorted_by_order(points, order: OrderSpec, descending: bool = False):
    key = functools.cmp_to_key(lambda a, b: int(compare(a, b, order)))
    return tuple(sorted(points, key=key, reverse=descending))


def assemble_hankel(phi: TrigPoly, in_box: SpectralBox, out_box: SpectralBox,
                    ctx: OperatorContext) -> HankelMatrix:
    """Section of f -> P-(phi*f) on the cone parts of the given boxes."""
    order = ctx.order
    if phi.dim != order.dim:
        raise ValueError(f"dimension mismatch: symbol {phi.dim}, order {order.dim}")
    ins = [k for k in in_box.points() if sgn_cone(k, order) >= 0]
    outs = [k for k in out_box.points() if sgn_cone(k, order) < 0]
    if not ins or not outs:
        raise ValueError("empty Hankel basis: boxes do not meet the required cones")
    in_basis = _sorted_by_order(ins, order)
    out_basis = _sorted_by_order(outs, order, descending=True)
    entries = np.array(
        [[phi.coeffs.get(tuple(e - x for e, x in zip(eta, xi)), 0.0) for xi in in_basis]
         for eta in out_basis],
        dtype=np.complex128,
    )
    return HankelMatrix(order, in_basis, out_basis, entries)


def operator_norm(h: HankelMatrix, tol: float = 1e-10, max_iter: int = 5000,
                  seed: int = 0) -> float:
    """Largest singular value by power iteration on the Gram operator.

    The start vector is all-ones plus a small seeded perturbation, which
    avoids stagnating on a start orthogonal to the top singular vector.
    Stops once the Gram residual certifies the value to ``tol``; raises
    ConvergenceError instead of returning a silently unconverged number.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    e = h.entries
    if not np.any(e):
        return 0.0
    rng = np.random.default_rng(seed)
    n = e.shape[1]
    v = np.ones(n, dtype=np.complex128)
    v += 0.1 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    v /= np.linalg.norm(v)
    for _ in range(2):  # one re-perturbation allowed if the start is degenerate
        sigma = 0.0
        for _ in range(max_iter):
            w = e @ v
            lam = float(np.vdot(w, w).real)  # = v* G v for unit v
            sigma = float(np.sqrt(lam))
            gv = e.conj().T @ w
            resid = float(np.linalg.norm(gv - lam * v))
            if sigma > 0 and resid <= tol * sigma * max(sigma, 1.0):
                return sigma
            norm_gv = float(np.linalg.norm(gv))
            if norm_gv == 0.0:
                break  # start fell in the kernel; re-perturb
            v = gv / norm_gv
        if sigma == 0.0:
            v = np.ones(n, dtype=np.complex128)
            v += 0.1 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
            v /= np.linalg.norm(v)
            continue
        raise ConvergenceError(
            f"power iteration did not certify the norm within {max_iter} iterations "
            f"(last value {sigma!r})")
    raise ConvergenceError("power iteration stagnated on a kernel vector twice")


def intertwining_residual_matrix(h: HankelMatrix, chi: LatticePoint) -> float:
    """Frobenius residual of the shift intertwining on a stored section.

    For a matrix with true Hankel structure the entry at (eta, xi + chi)
    equals the entry at (eta - chi, xi); the residual over the common
    section is zero exactly, and a corrupted entry shows up as a positive
    residual.
    """
    if sgn_cone(chi, h.order) <= 0:
        raise ValueError("the intertwining shift must be strictly positive")
    in_index = {k: j for j, k in enumerate(h.in_basis)}
    out_index = {k: i for i, k in enumerate(h.out_basis)}
    cols = [(j, in_index[tuple(x + c for x, c in zip(xi, chi))])
            for j, xi in enumerate(h.in_basis)
            if tuple(x + c for x, c in zip(xi, chi)) in in_index]
    rows = [(i, out_index[tuple(e - c for e, c in zip(eta, chi))])
            for i, eta in enumerate(h.out_basis)
            if tuple(e - c for e, c in zip(eta, chi)) in out_index]
    if not cols or not rows:
        raise ValueError("section too small for the requested shift")
    resid = 0.0
    for i, i_shift in rows:
        for j, j_shift in cols:
            d = h.entries[i, j_shift] - h.entries[i_shift, j]
            resid += abs(d) ** 2
    return float(np.sqrt(resid))


def intertwining_residual(phi: TrigPoly, chi: LatticePoint, in_box: SpectralBox,
                          out_box: SpectralBox, ctx: OperatorContext) -> float:
    """Assemble the section of phi and measure the shift-intertwining residual."""
    return intertwining_residual_matrix(assemble_hankel(phi, in_box, out_box, ctx), chi)


@dataclass(frozen=True)
class MinimaxResult:
    """Outcome of the sup-norm minimization: the certified value is the
    grid sup of phi + argument, recomputed from the returned argument."""

    value: float
    argument: TrigPoly
    iterations: int
    tol_achieved: float


def nehari_minimax(phi: TrigPoly, perturbation_box: SpectralBox, grid: GridSpec,
                   ctx: OperatorContext, step_scale: float = 0.2,
                   max_iter: int = 4000) -> MinimaxResult:
    """Minimize the grid sup of |phi + g| over g with strictly negative spectrum.

    phi must be analytic (no strictly negative coefficients).  The solver is
    a projected subgradient method on the real/imaginary coefficients of g
    with step schedule c/sqrt(k), normalized subgradients, and best-iterate
    tracking, so the reported value never increases along the run.  Every
    iterate is feasible, hence the value is always a valid upper bound for
    the analytic star-norm of phi.
    """
    ctx._check(phi)
    if any(sgn_cone(k, ctx.order) < 0 for k in phi.coeffs):
        raise ValueError("symbol must be analytic (no strictly negative spectrum)")
    support = [k for k in perturbation_box.points() if sgn_cone(k, ctx.order) < 0]
    if not support:
        raise ValueError("perturbation box does not meet the strictly negative cone")
    support = sorted(support)

    # bins layout shared by all iterations; aliasing checked once up front
    phi_bins = sample(phi, grid).values  # raises AliasingError if unresolvable
    base_bins = np.fft.fftn(phi_bins) / grid.size
    place = []
    for k in support:
        for ki, n in zip(k, grid.shape):
            if not (-n // 2 < ki < n // 2):
                raise ValueError(f"perturbation frequency {k} exceeds the grid's Nyquist box")
        idx = tuple(ki % n for ki, n in zip(k, grid.shape))
        phase = 1.0 + 0.0j
        for axis, (ki, n) in enumerate(zip(k, grid.shape)):
            if grid.offsets[axis]:
                phase *= np.exp(1j * ki * np.pi / n)
        place.append((idx, phase))
    node_angles = [grid.nodes(axis) for axis in range(grid.dim)]

    def field(x: np.ndarray) -> np.ndarray:
        bins = base_bins.copy()
        for (idx, phase), coeff in zip(place, x):
            bins[idx] += coeff * phase
        return np.fft.ifftn(bins) * grid.size

    x = np.zeros(len(support), dtype=np.complex128)
    s0 = field(x)
    f0 = float(np.abs(s0).max())
    best_val, best_x = f0, x.copy()
    history = [f0]
    if f0 > 0:
        c = step_scale * f0
        for k_it in range(1, max_iter + 1):
            s = field(x)
            mags = np.abs(s)
            flat = int(np.argmax(mags))
            fval = float(mags.flat[flat])
            if fval < best_val:
                best_val, best_x = fval, x.copy()
            history.append(best_val)
            t_star = [node_angles[a][i] for a, i in enumerate(np.unravel_index(flat, grid.shape))]
            unit = s.flat[flat] / fval
            d = np.array([unit * np.exp(-1j * float(np.dot(kk, t_star))) for kk in support])
            d /= np.linalg.norm(d)
            x = x - (c / np.sqrt(k_it)) * d

    g_best = TrigPoly(phi.dim, dict(zip(support, best_x)))
    value = float(np.abs(sample(phi + g_best, grid).values).max())
    tail = history[3 * len(history) // 4]
    return MinimaxResult(value=value, argument=g_best, iterations=max_iter,
                         tol_achieved=float(tail - best_val))


def bmo_star_bracket(phi: TrigPoly, in_box: SpectralBox, out_box: SpectralBox,
                     perturbation_box: SpectralBox, grid: GridSpec,
                     ctx: OperatorContext, norm_tol: float = 1e-10,
                     step_scale: float = 0.2, max_iter: int = 4000):
    """Two-sided bracket for the analytic star-norm of phi.

    lower: operator norm of the Hankel section with symbol conj(phi);
    upper: minimax value over strictly negative perturbations.
    The contract lower <= upper + tol holds for every analytic phi.
    """
    if project(phi, "minus", ctx).coeffs:
        raise ValueError("bracket is defined for analytic symbols")
    lower = operator_norm(assemble_hankel(phi.conjugate(), in_box, out_box, ctx),
                          tol=norm_tol)
    upper = nehari_minimax(phi, perturbation_box, grid, ctx,
                           step_scale=step_scale, max_iter=max_iter).value
    return lower, upper
