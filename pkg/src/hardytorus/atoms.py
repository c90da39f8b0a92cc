"""Rectangle atoms on the two-torus and the experiments probing their
uniform real-H^1 bounds.

An atom is either the constant one, or a real function supported on a
rectangle of arcs with sup bound min(1/|J1|, 1/|J2|) and vanishing line
integrals across each arc (only across its own arc for the one-variable
kind).  Arcs snap to grid cell boundaries so the cancellation conditions
hold exactly in grid arithmetic, not just approximately.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .grid import GridFunction, GridSpec, kernel_hilbert_components, lp_norm
from .lattice import OrderSpec
from .multiplier import OperatorContext
from .reporting import ExperimentReport, derive_seed

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Arc:
    """An arc of the circle: center angle in [0, 2*pi), normalized length in (0, 1]."""

    center: float
    length: float

    def __post_init__(self):
        if not (0.0 < self.length <= 1.0):
            raise ValueError(f"arc length must lie in (0, 1], got {self.length}")
        object.__setattr__(self, "center", float(self.center) % TWO_PI)


@dataclass(frozen=True)
class AtomSpec:
    """Recipe for an atom: the distinguished constant ("one"), a
    one-variable atom on axis 1 or 2, or a rectangle atom.

    profile "haar": +-1 halves along each arc.
    profile "piecewise": seeded random block values, mean-corrected along
    every arc line, then rescaled to the sup bound.
    """

    kind: str  # "one" | "t1" | "t2"
    axis: int = 1  # for "t1": which variable the atom depends on (1 or 2)
    j1: Arc | None = None
    j2: Arc | None = None
    profile: str = "haar"
    seed: int = 0
    pieces: int = 4

    def __post_init__(self):
        if self.kind not in ("one", "t1", "t2"):
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if self.profile not in ("haar", "piecewise"):
            raise ValueError(f"unknown profile {self.profile!r}")
        if self.kind == "t1":
            if self.axis not in (1, 2):
                raise ValueError("t1 atoms live on axis 1 or 2")
            if self.arc_for_axis(self.axis) is None:
                raise ValueError("t1 atom needs its arc")
        if self.kind == "t2" and (self.j1 is None or self.j2 is None):
            raise ValueError("t2 atom needs both arcs")

    def arc_for_axis(self, axis: int) -> Arc | None:
        return self.j1 if axis == 1 else self.j2

    def to_json_dict(self) -> dict:
        d = {"kind": self.kind, "profile": self.profile, "seed": self.seed,
             "pieces": self.pieces}
        if self.kind == "t1":
            d["axis"] = self.axis
        for name, arc in (("j1", self.j1), ("j2", self.j2)):
            if arc is not None:
                d[name] = {"center": arc.center, "length": arc.length}
        return d


def snap_arc(arc: Arc, n: int, even: bool = False):
    """Snap an arc to cell boundaries of an n-cell circle.

    Returns (start_cell, n_cells); cells are [j/n, (j+1)/n) in normalized
    coordinates and indices wrap.  ``even`` forces an even cell count (the
    half/half profile needs it); widening is recorded via the return value.
    """
    c = arc.center / TWO_PI
    start = int(round((c - arc.length / 2.0) * n))
    stop = int(round((c + arc.length / 2.0) * n))
    cells = stop - start
    if even and cells % 2:
        cells += 1
    if cells < 4:
        raise ValueError(
            f"arc of length {arc.length} covers only {cells} cells on an {n}-cell grid; "
            "at least 4 are needed")
    if cells > n:
        cells = n
    return start % n, cells


def _profile_1d(n: int, start: int, cells: int, profile: str, seed: int,
                pieces: int) -> np.ndarray:
    """Mean-zero profile on the snapped arc, sup-normalized to 1."""
    idx = (start + np.arange(cells)) % n
    u = np.zeros(n)
    if profile == "haar":
        u[idx[: cells // 2]] = 1.0
        u[idx[cells // 2:]] = -1.0
        return u
    rng = np.random.default_rng(seed)
    blocks = np.array_split(np.arange(cells), min(pieces, cells))
    vals = np.zeros(cells)
    for b in blocks:
        vals[b] = rng.uniform(-1.0, 1.0)
    vals -= vals.mean()
    peak = np.abs(vals).max()
    if peak == 0.0:
        return u  # degenerate; caller re-seeds
    u[idx] = vals / peak
    return u


def _block_noise(rng, n1: int, n2: int, pieces: int) -> np.ndarray:
    w = np.zeros((n1, n2))
    rows = np.array_split(np.arange(n1), min(pieces, n1))
    cols = np.array_split(np.arange(n2), min(pieces, n2))
    for r in rows:
        for c in cols:
            w[np.ix_(r, c)] = rng.uniform(-1.0, 1.0)
    return w


def build_atom(spec: AtomSpec, grid: GridSpec) -> GridFunction:
    """Realize an atom as a grid step function (exact cancellations).

    Degenerate random profiles (identically zero after mean correction)
    are re-seeded a few times with a warning before giving up.
    """
    if grid.dim != 2:
        raise ValueError("atoms live on a 2-D grid")
    n1, n2 = grid.shape
    if spec.kind == "one":
        return GridFunction(grid, np.ones((n1, n2), dtype=np.complex128))

    if spec.kind == "t1":
        axis = spec.axis
        arc = spec.arc_for_axis(axis)
        n = n1 if axis == 1 else n2
        start, cells = snap_arc(arc, n, even=spec.profile == "haar")
        length = cells / n
        for attempt in range(8):
            u = _profile_1d(n, start, cells, spec.profile, spec.seed + attempt, spec.pieces)
            if np.any(u):
                if attempt:
                    warnings.warn(f"degenerate atom profile; re-seeded {attempt} time(s)")
                break
        else:
            raise ValueError("atom profile degenerated to zero after re-seeding")
        u = u / length  # sup bound 1/|J|
        vals = np.repeat(u[:, None], n2, axis=1) if axis == 1 else np.repeat(u[None, :], n1, axis=0)
        return GridFunction(grid, vals.astype(np.complex128))

    start1, cells1 = snap_arc(spec.j1, n1, even=spec.profile == "haar")
    start2, cells2 = snap_arc(spec.j2, n2, even=spec.profile == "haar")
    len1, len2 = cells1 / n1, cells2 / n2
    bound = min(1.0 / len1, 1.0 / len2)
    idx1 = (start1 + np.arange(cells1)) % n1
    idx2 = (start2 + np.arange(cells2)) % n2
    vals = np.zeros((n1, n2))
    if spec.profile == "haar":
        u = _profile_1d(n1, start1, cells1, "haar", 0, 0)
        v = _profile_1d(n2, start2, cells2, "haar", 0, 0)
        vals = np.outer(u, v) * bound
        return GridFunction(grid, vals.astype(np.complex128))

    for attempt in range(8):
        rng = np.random.default_rng(spec.seed + attempt)
        w = _block_noise(rng, cells1, cells2, spec.pieces)
        # two-way mean correction makes every line integral across the
        # rectangle vanish exactly in grid arithmetic
        w = w - w.mean(axis=0, keepdims=True) - w.mean(axis=1, keepdims=True) + w.mean()
        peak = np.abs(w).max()
        if peak > 0.0:
            if attempt:
                warnings.warn(f"degenerate atom profile; re-seeded {attempt} time(s)")
            vals[np.ix_(idx1, idx2)] = w * (bound / peak)
            return GridFunction(grid, vals.astype(np.complex128))
    raise ValueError("atom profile degenerated to zero after re-seeding")


def validate_atom(a: GridFunction, spec: AtomSpec, tol: float = 1e-12):
    """Check support, the sup bound, and the line cancellations.

    Returns (passed, diagnostics); purely diagnostic, never raises on a
    failing atom.
    """
    vals = a.values.real
    n1, n2 = a.spec.shape
    diag: dict = {"kind": spec.kind}
    if np.abs(a.values.imag).max(initial=0.0) > tol:
        diag["imag"] = float(np.abs(a.values.imag).max())
        return False, diag

    if spec.kind == "one":
        dev = float(np.abs(vals - 1.0).max())
        diag["constant_deviation"] = dev
        return dev <= tol, diag

    def line_mask(axis: int):
        arc = spec.arc_for_axis(axis)
        n = n1 if axis == 1 else n2
        start, cells = snap_arc(arc, n, even=spec.profile == "haar")
        mask = np.zeros(n, dtype=bool)
        mask[(start + np.arange(cells)) % n] = True
        return mask, cells / n

    if spec.kind == "t1":
        mask, length = line_mask(spec.axis)
        bound = 1.0 / length
        if spec.axis == 1:
            support_ok = float(np.abs(vals[~mask, :]).max(initial=0.0))
            cancel = float(np.abs(vals[mask, :].sum(axis=0)).max() / n1)
        else:
            support_ok = float(np.abs(vals[:, ~mask]).max(initial=0.0))
            cancel = float(np.abs(vals[:, mask].sum(axis=1)).max() / n2)
        excess = float((np.abs(vals) - bound).max())
        diag.update(support_leak=support_ok, bound_excess=excess, line_residual=cancel)
        return support_ok <= tol and excess <= tol and cancel <= tol, diag

    mask1, len1 = line_mask(1)
    mask2, len2 = line_mask(2)
    bound = min(1.0 / len1, 1.0 / len2)
    outside = vals.copy()
    outside[np.ix_(mask1, mask2)] = 0.0
    support_leak = float(np.abs(outside).max(initial=0.0))
    excess = float((np.abs(vals) - bound).max())
    sub = vals[np.ix_(mask1, mask2)]
    cancel1 = float(np.abs(sub.sum(axis=0)).max() / n1)  # integral over J1 at fixed theta2
    cancel2 = float(np.abs(sub.sum(axis=1)).max() / n2)
    diag.update(support_leak=support_leak, bound_excess=excess,
                line_residual_axis1=cancel1, line_residual_axis2=cancel2)
    ok = support_leak <= tol and excess <= tol and cancel1 <= tol and cancel2 <= tol
    return ok, diag


def _lex_sign_bins(shape, perm) -> np.ndarray:
    """Lexicographic cone sign over FFT bin frequencies of a 2-D grid."""
    n1, n2 = shape
    k1 = np.fft.fftfreq(n1, 1.0 / n1).astype(int)[:, None]
    k2 = np.fft.fftfreq(n2, 1.0 / n2).astype(int)[None, :]
    first, second = (k1, k2) if perm[0] == 0 else (k2, k1)
    return np.sign(first) + (first == 0) * np.sign(second)


def atom_h1_star_norm(a: GridFunction, ctx: OperatorContext):
    """(total, minus, plus) grid L^1 norms of the two cone projections.

    The spectral window is the full alias-free bin set of the grid (the
    Nyquist bin is attributed to its negative-frequency representative),
    so the two projections add back to the data exactly.  Atoms are not
    band-limited, so the window truncation is part of the reported number;
    record the grid size alongside.
    """
    if a.spec.dim != 2:
        raise ValueError("the star norm here is for 2-D grid data")
    if ctx.order.kind != "lex":
        raise ValueError("atoms are graded against a lexicographic order")
    bins = np.fft.fft2(a.values)
    sgn = _lex_sign_bins(a.spec.shape, ctx.order.perm)
    plus = np.fft.ifft2(np.where(sgn >= 0, bins, 0.0))
    minus = np.fft.ifft2(np.where(sgn < 0, bins, 0.0))
    minus_l1 = float(np.mean(np.abs(minus)))
    plus_l1 = float(np.mean(np.abs(plus)))
    return minus_l1 + plus_l1, minus_l1, plus_l1


def hilbert_decomposition(a: GridFunction):
    """Split the lexicographic kernel transform of 2-D data into its
    per-row first-variable part and its averaged second-variable part.

    Both parts live on the common output grid (axis-1 offset toggled), so
    their sum is directly comparable with the multiplier transform.
    """
    return kernel_hilbert_components(a)


def kernel_decay_check(a: GridFunction, spec: AtomSpec) -> float:
    """Empirical constant in the quadratic-decay tail bound.

    For an atom whose first arc is (-delta, delta) (normalized half-length
    delta, centered at zero), the first-variable transform obeys
    |A1(t1, t2)| <= C * delta_rad * ||a(., t2)||_1 / t1^2 away from the
    doubled arc.  This returns the smallest C consistent with the grid
    data: the max of |A1| * t1^2 / (delta_rad * row L^1) over nodes with
    |t1| >= 2*delta (normalized units), skipping rows whose L^1 norm
    vanishes.  Angles enter in radians.
    """
    arc = spec.j1
    if arc is None:
        raise ValueError("decay check needs an atom with a first-axis arc")
    n1 = a.spec.shape[0]
    start, cells = snap_arc(arc, n1, even=spec.profile == "haar")
    delta = cells / n1 / 2.0  # snapped normalized half-length
    if delta >= 0.5:
        raise ValueError("the tail estimate needs delta < 1/2")
    center = ((start + cells / 2.0) / n1) % 1.0
    if min(center, 1.0 - center) > 1.0 / n1:
        raise ValueError("decay check expects the first arc centered at zero")
    if not np.any(a.values):
        return 0.0

    a1, _ = kernel_hilbert_components(a)
    t1 = a1.spec.nodes(0)
    t1 = np.where(t1 > np.pi, t1 - TWO_PI, t1)  # wrap to (-pi, pi]
    mask = np.abs(t1) >= 2.0 * delta * TWO_PI
    if not np.any(mask):
        raise ValueError(f"no grid nodes lie outside the doubled arc (delta={delta})")
    row_l1 = np.mean(np.abs(a.values), axis=0)
    keep = row_l1 > 1e-13 * row_l1.max()
    if not np.any(keep):
        return 0.0
    delta_rad = delta * TWO_PI
    num = np.abs(a1.values[np.ix_(mask, keep)]) * (t1[mask] ** 2)[:, None]
    return float((num / (delta_rad * row_l1[keep][None, :])).max())


def atom_norm_sweep(deltas, profiles, trials_per_cell: int, grid: GridSpec,
                    seed: int, kinds=("t2", "t1-axis1", "t1-axis2"),
                    l1_tol: float = 1e-12) -> ExperimentReport:
    """Sweep atoms over arc half-lengths and profiles; record their norms.

    Per atom: the plain L^1 norm (must stay <= 1), the L^1 norms of the two
    transform components, and the split star-norm.  The aggregate flags a
    growth trend: the max star-norm over the three smallest half-lengths
    must stay within twice the max over the largest one.  Empirical probe
    only; the grid size is recorded with every row.
    """
    report = ExperimentReport(kind="atoms-lemma2", config={})
    deltas = list(deltas)
    case = 0
    for delta in deltas:
        for profile in profiles:
            for kind in kinds:
                for trial in range(trials_per_cell):
                    if profile == "haar" and trial > 0:
                        continue  # the haar profile is deterministic
                    s = derive_seed(seed, case)
                    case += 1
                    arc = Arc(0.0, 2.0 * delta)
                    if kind == "t2":
                        spec = AtomSpec("t2", j1=arc, j2=arc, profile=profile, seed=s)
                    elif kind == "t1-axis1":
                        spec = AtomSpec("t1", axis=1, j1=arc, profile=profile, seed=s)
                    else:
                        spec = AtomSpec("t1", axis=2, j2=arc, profile=profile, seed=s)
                    a = build_atom(spec, grid)
                    ok_atom, _ = validate_atom(a, spec)
                    l1 = lp_norm(a, 1)
                    a1, a2 = hilbert_decomposition(a)
                    total, _, _ = atom_h1_star_norm(
                        a, OperatorContext(OrderSpec.lex(2)))
                    report.rows.append({
                        "kind": kind,
                        "delta1": delta if kind != "t1-axis2" else None,
                        "delta2": delta if kind != "t1-axis1" else None,
                        "profile": profile, "seed": s, "N": grid.shape[0],
                        "l1": l1, "a1_l1": lp_norm(a1, 1), "a2_l1": lp_norm(a2, 1),
                        "h1_star": total,
                        "pass": bool(ok_atom and l1 <= 1.0 + l1_tol),
                    })
    report.passed = all(r["pass"] for r in report.rows)
    if deltas and report.rows:
        coarsest, finest = max(deltas), sorted(deltas)[:3]
        max_coarse = max(r["h1_star"] for r in report.rows
                         if (r["delta1"] or r["delta2"]) == coarsest)
        max_fine = max(r["h1_star"] for r in report.rows
                       if (r["delta1"] or r["delta2"]) in finest)
        report.rows.append({
            "kind": "aggregate", "delta1": None, "delta2": None, "profile": "",
            "seed": seed, "N": grid.shape[0], "l1": None, "a1_l1": None,
            "a2_l1": None, "h1_star": max_fine,
            "pass": bool(max_fine <= 2.0 * max_coarse),
        })
        report.passed = report.passed and report.rows[-1]["pass"]
    return report
