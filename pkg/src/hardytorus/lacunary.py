"""Lacunary spectra: the interval-count constant, gap-set generators, and
the seeded experiments that exercise the energy bounds they imply.

A finite set E inside the strictly positive cone is graded by the largest
number of its elements any order interval [chi, 2*chi] can contain (chi
ranging over the strictly positive cone; the multiplicative chi^2 of the
classical definition reads 2*chi in additive notation).  In one dimension
this count is computed exactly: the counting function only changes when an
interval endpoint crosses an element, so the maximum over all chi equals
the maximum over the finite candidate set {xi} U {ceil(xi/2)}.  In higher
dimensions intervals can hold infinitely many lattice points, so only a
certified lower bound over a caller-supplied search box is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, lp_norm, sample
from .hankel import assemble_hankel, bmo_star_bracket, operator_norm
from .lattice import OrderSpec, compare, sgn_cone
from .multiplier import OperatorContext
from .reporting import ExperimentReport, derive_seed
from .trigpoly import SpectralBox, TrigPoly, random_poly


@dataclass(frozen=True)
class LacunarySpectrum:
    """A finite subset of the strictly positive cone (duplicates rejected)."""

    order: OrderSpec
    points: tuple

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in k) for k in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points in spectrum")
        if not pts:
            raise ValueError("empty spectrum")
        for k in pts:
            if sgn_cone(k, self.order) != 1:
                raise ValueError(f"spectrum point {k} is not strictly positive")
        object.__setattr__(self, "points", tuple(sorted(pts)))

    @property
    def dim(self) -> int:
        return self.order.dim


@dataclass(frozen=True)
class KConstantReport:
    """Interval-count constant with the witness interval start and the
    computation mode ("exact" or "search-box")."""

    k: int
    witness: tuple
    mode: str
    search_box: SpectralBox | None = None


def k_constant(e: LacunarySpectrum, search_box: SpectralBox | None = None) -> KConstantReport:
    """Largest count of E inside an order interval [chi, 2*chi].

    Exact in one dimension; for n >= 2 the maximum is taken over the given
    search box only and the report is a certified lower bound.
    """
    if e.dim == 1:
        xs = sorted(k[0] for k in e.points)
        candidates = sorted({x for x in xs} | {(x + 1) // 2 for x in xs})
        best, witness = 0, candidates[0]
        for chi in candidates:
            if chi < 1:
                continue
            count = sum(1 for x in xs if chi <= x <= 2 * chi)
            if count > best:
                best, witness = count, chi
        return KConstantReport(k=best, witness=(witness,), mode="exact")

    if search_box is None:
        raise ValueError("k_constant needs a search box for dimension >= 2")
    best, witness = 0, None
    for chi in search_box.points():
        if sgn_cone(chi, e.order) != 1:
            continue
        two_chi = tuple(2 * c for c in chi)
        count = sum(1 for xi in e.points
                    if compare(chi, xi, e.order) <= 0 and compare(xi, two_chi, e.order) <= 0)
        if count > best:
            best, witness = count, chi
    if witness is None:
        raise ValueError("search box contains no strictly positive point")
    return KConstantReport(k=best, witness=witness, mode="search-box", search_box=search_box)


def hadamard_set(ratio: int, count: int, embed: str = "1d") -> LacunarySpectrum:
    """Geometric gap set {ratio^k : k < count}, on Z or on the first lex axis."""
    if ratio < 2 or count < 1:
        raise ValueError("need an integer ratio >= 2 and count >= 1")
    powers = [ratio ** k for k in range(count)]
    if embed == "1d":
        return LacunarySpectrum(OrderSpec.lex(1), tuple((p,) for p in powers))
    if embed == "lex-axis":
        return LacunarySpectrum(OrderSpec.lex(2), tuple((p, 0) for p in powers))
    raise ValueError(f"unknown embedding {embed!r}")


def exact_k(e: LacunarySpectrum) -> KConstantReport:
    """Exact interval-count constant where the exact algorithm applies.

    In one dimension this is :func:`k_constant`.  A set supported on the
    leading lex axis of Z^2 inherits the constant of its first-axis
    projection: the interval of a point (a, b) meets the axis exactly in
    the 1-D interval, with equality of counts at b = 0.
    """
    if e.dim == 1:
        return k_constant(e)
    if e.order.kind == "lex" and all(all(c == 0 for c in k[1:]) for k in e.points):
        proj = LacunarySpectrum(OrderSpec.lex(1), tuple((k[0],) for k in e.points))
        rep = k_constant(proj)
        return KConstantReport(k=rep.k, witness=rep.witness + (0,) * (e.dim - 1),
                               mode="exact")
    raise ValueError("exact mode needs a 1-D set or a leading-axis embedded set")


def rudin_l2_check(f: TrigPoly, e: LacunarySpectrum, grid: GridSpec,
                   slack: float = 1e-3, k: int | None = None):
    """Restriction inequality ||f_hat|_E||_2 <= 2 sqrt(K_E) ||f||_1 for analytic f.

    Returns (lhs, rhs, pass); the L^1 norm is grid quadrature, so ``slack``
    absorbs the quadrature error multiplicatively.
    """
    ctx = OperatorContext(e.order)
    if any(sgn_cone(key, e.order) < 0 for key in f.coeffs):
        raise ValueError("the restriction inequality applies to analytic polynomials")
    lhs = math.sqrt(sum(abs(f.coeffs.get(k_, 0.0)) ** 2 for k_ in e.points))
    k_val = exact_k(e).k if k is None else k
    rhs = 2.0 * math.sqrt(k_val) * lp_norm(sample(f, grid), 1)
    return lhs, rhs, lhs <= rhs * (1.0 + slack)


def _default_boxes(e: LacunarySpectrum, section: int):
    top = max(k[0] for k in e.points)
    if e.dim != 1:
        raise ValueError("experiment corpora use 1-D spectra")
    n = max(section, 2 * top)
    in_box = SpectralBox(((0, n - 1),))
    out_box = SpectralBox(((-n, -1),))
    return in_box, out_box


def lacunary_star_bound_experiment(e: LacunarySpectrum, trials: int, grid: GridSpec,
                                   seed: int, section: int = 64,
                                   rel_tol: float = 1e-2, norm_slack: float = 1e-9,
                                   minimax_iter: int = 2000) -> ExperimentReport:
    """Check the bracketed star-norm of random E-spectra against 6 sqrt(K) ||.||_2.

    Per trial: a random analytic polynomial with spectrum in E; its Hankel
    lower bound and minimax upper bound; the chained bound
    upper <= 6 sqrt(K) l2 (1 + rel_tol) and the strict section-side bound
    lower <= 6 sqrt(K) l2 + norm_slack.
    """
    rep_k = exact_k(e)
    bound_const = 6.0 * math.sqrt(rep_k.k)
    ctx = OperatorContext(e.order)
    in_box, out_box = _default_boxes(e, section)
    pert_box = SpectralBox(((-section, -1),))
    box = SpectralBox(((0, max(k[0] for k in e.points)),))
    report = ExperimentReport(kind="theorem3", config={})
    for i in range(trials):
        phi = random_poly(box, derive_seed(seed, i), constraint="spectrum",
                          spectrum=e.points)
        l2 = phi.l2_norm()
        lower, upper = bmo_star_bracket(phi, in_box, out_box, pert_box, grid, ctx,
                                        max_iter=minimax_iter)
        bound = bound_const * l2
        ok_upper = upper <= bound * (1.0 + rel_tol)
        ok_lower = lower <= bound + norm_slack
        ok_sandwich = lower <= upper + 1e-3
        report.rows.append({
            "trial": i, "seed": derive_seed(seed, i), "l2": l2,
            "hankel_lower": lower, "minimax_upper": upper, "bound": bound,
            "pass_upper": ok_upper, "pass_lower": ok_lower, "pass_sandwich": ok_sandwich,
            "pass": ok_upper and ok_lower and ok_sandwich,
        })
    report.passed = all(r["pass"] for r in report.rows)
    return report


def lacunary_hankel_bound_experiment(e: LacunarySpectrum, trials: int, seed: int,
                                     section: int = 64, norm_slack: float = 1e-9
                                     ) -> ExperimentReport:
    """Section norms of conjugate symbols against 6 sqrt(K) ||.||_2.

    Requires the zero frequency off E.  Records the empirical minimum of
    ||H|| / ||phi||_2 over the corpus; the aggregate asserts it is positive
    (a measured stand-in for the non-constructive lower-bound constant).
    """
    zero = tuple(0 for _ in range(e.dim))
    if zero in e.points:
        raise ValueError("the spectrum must not contain the zero frequency")
    rep_k = exact_k(e)
    bound_const = 6.0 * math.sqrt(rep_k.k)
    ctx = OperatorContext(e.order)
    in_box, out_box = _default_boxes(e, section)
    box = SpectralBox(((0, max(k[0] for k in e.points)),))
    report = ExperimentReport(kind="theorem4", config={})
    ratios = []
    for i in range(trials):
        phi = random_poly(box, derive_seed(seed, i), constraint="spectrum",
                          spectrum=e.points)
        l2 = phi.l2_norm()
        if l2 == 0.0:
            continue
        h = operator_norm(assemble_hankel(phi.conjugate(), in_box, out_box, ctx))
        ok = h <= bound_const * l2 + norm_slack
        ratios.append(h / l2)
        report.rows.append({
            "trial": i, "seed": derive_seed(seed, i), "l2": l2, "hankel_norm": h,
            "bound": bound_const * l2, "ratio": h / l2, "pass": ok,
        })
    min_ratio = min(ratios) if ratios else 0.0
    report.passed = bool(report.rows) and all(r["pass"] for r in report.rows) and min_ratio > 0
    report.config["empirical_min_ratio"] = min_ratio
    return report
