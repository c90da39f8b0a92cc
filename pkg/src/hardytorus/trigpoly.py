"""Trigonometric polynomials on the n-torus as sparse coefficient maps.

A polynomial is a finite map from lattice points (character indices) to
complex coefficients; evaluation is f(t) = sum_k c_k exp(i<k, t>).  Sparse
storage matters: lacunary spectra are exponentially thin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping

import numpy as np

from .lattice import LatticePoint


@dataclass(frozen=True)
class SpectralBox:
    """A product of closed integer intervals, one per axis."""

    intervals: tuple  # ((lo, hi), ...) per axis

    def __post_init__(self):
        for lo, hi in self.intervals:
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}] in spectral box")

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def contains(self, k: LatticePoint) -> bool:
        return len(k) == self.dim and all(
            lo <= c <= hi for c, (lo, hi) in zip(k, self.intervals)
        )

    @property
    def contains_zero(self) -> bool:
        return all(lo <= 0 <= hi for lo, hi in self.intervals)

    def points(self) -> Iterator[LatticePoint]:
        return product(*(range(lo, hi + 1) for lo, hi in self.intervals))

    @staticmethod
    def cube(dim: int, lo: int, hi: int) -> "SpectralBox":
        return SpectralBox(tuple((lo, hi) for _ in range(dim)))


class TrigPoly:
    """Immutable sparse trigonometric polynomial.

    Coefficients that are exactly zero are dropped at construction; no other
    coefficient filtering happens unless ``drop_tol`` is passed explicitly.
    """

    __slots__ = ("dim", "coeffs")

    def __init__(self, dim: int, coeffs: Mapping[LatticePoint, complex] | None = None,
                 drop_tol: float = 0.0):
        object.__setattr__(self, "dim", int(dim))
        cleaned = {}
        for k, c in (coeffs or {}).items():
            k = tuple(int(x) for x in k)
            if len(k) != dim:
                raise ValueError(f"coefficient key {k} has wrong dimension (expected {dim})")
            c = complex(c)
            if abs(c) > drop_tol and c != 0:
                cleaned[k] = c
        object.__setattr__(self, "coeffs", cleaned)

    def __setattr__(self, *a):  # immutability guard
        raise AttributeError("TrigPoly is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def character(k: LatticePoint, coeff: complex = 1.0) -> "TrigPoly":
        k = tuple(int(x) for x in k)
        return TrigPoly(len(k), {k: coeff})

    @staticmethod
    def zero(dim: int) -> "TrigPoly":
        return TrigPoly(dim, {})

    @staticmethod
    def constant(dim: int, value: complex) -> "TrigPoly":
        return TrigPoly(dim, {tuple(0 for _ in range(dim)): value})

    # -- algebra -------------------------------------------------------------

    def _require_same_dim(self, other: "TrigPoly") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        self._require_same_dim(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0.0) + c
        return TrigPoly(self.dim, out)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-1.0) * other

    def __neg__(self) -> "TrigPoly":
        return (-1.0) * self

    def __rmul__(self, scalar: complex) -> "TrigPoly":
        return TrigPoly(self.dim, {k: scalar * c for k, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            self._require_same_dim(other)
            out: dict = {}
            for k1, c1 in self.coeffs.items():
                for k2, c2 in other.coeffs.items():
                    k = tuple(a + b for a, b in zip(k1, k2))
                    out[k] = out.get(k, 0.0) + c1 * c2
            return TrigPoly(self.dim, out)
        return self.__rmul__(other)

    def conjugate(self) -> "TrigPoly":
        """Complex conjugate: coefficients reflect and conjugate."""
        return TrigPoly(self.dim, {tuple(-x for x in k): np.conj(c)
                                   for k, c in self.coeffs.items()})

    def mean(self) -> complex:
        """Coefficient at the unit character (the Haar-measure mean)."""
        return self.coeffs.get(tuple(0 for _ in range(self.dim)), 0.0 + 0.0j)

    # -- analysis ------------------------------------------------------------

    def evaluate(self, t) -> complex:
        """Value at a point of the torus given as n angles."""
        t = np.asarray(t, dtype=float).reshape(-1)
        if t.size != self.dim:
            raise ValueError(f"need {self.dim} angles, got {t.size}")
        total = 0.0 + 0.0j
        for k in sorted(self.coeffs):  # fixed summation order
            total += self.coeffs[k] * np.exp(1j * float(np.dot(k, t)))
        return complex(total)

    def l2_norm(self) -> float:
        """Plancherel norm sqrt(sum |c_k|^2)."""
        return float(np.sqrt(sum(abs(self.coeffs[k]) ** 2 for k in sorted(self.coeffs))))

    def is_real(self, tol: float = 1e-12) -> bool:
        """Whether coefficients are conjugate-symmetric (real-valued function)."""
        for k, c in self.coeffs.items():
            mk = tuple(-x for x in k)
            if abs(np.conj(self.coeffs.get(mk, 0.0)) - c) > tol:
                return False
        return True

    def support(self) -> list:
        return sorted(self.coeffs)

    def restrict(self, keep) -> "TrigPoly":
        """Keep only coefficients whose key satisfies the predicate."""
        return TrigPoly(self.dim, {k: c for k, c in self.coeffs.items() if keep(k)})

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        terms = [{"k": list(k), "re": float(self.coeffs[k].real), "im": float(self.coeffs[k].imag)}
                 for k in sorted(self.coeffs)]
        return {"dim": self.dim, "terms": terms}

    def to_json(self) -> str:
        # repr-style floats round-trip doubles exactly in python's json
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(d: dict) -> "TrigPoly":
        return TrigPoly(int(d["dim"]),
                        {tuple(t["k"]): complex(t["re"], t["im"]) for t in d["terms"]})

    @staticmethod
    def from_json(s: str) -> "TrigPoly":
        return TrigPoly.from_json_dict(json.loads(s))

    # -- misc ----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, TrigPoly) and self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dim, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"TrigPoly(dim={self.dim}, nterms={len(self.coeffs)})"


def dual_pairing(f: TrigPoly, phi: TrigPoly) -> complex:
    """sum_k f_k * conj(phi_k); equals the integral of f * conj(phi)."""
    if f.dim != phi.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {phi.dim}")
    small, large = (f, phi) if len(f.coeffs) <= len(phi.coeffs) else (phi, f)
    total = 0.0 + 0.0j
    for k in sorted(small.coeffs):
        if k in large.coeffs:
            total += f.coeffs[k] * np.conj(phi.coeffs[k])
    return complex(total)


def random_poly(box: SpectralBox, seed: int, constraint: str = "none",
                spectrum=None) -> TrigPoly:
    """Seeded random polynomial with i.i.d. complex Gaussian coefficients.

    constraint "none": every point of the box gets a CN coefficient
    (real and imaginary parts independent N(0,1)).
    constraint "real": conjugate-symmetric coefficients; a key and its
    negation share one draw, the zero key gets a real N(0,1) draw.  Keys
    whose negation falls outside the box are skipped so the symmetry is
    exact.
    constraint "spectrum": coefficients only on ``spectrum`` (subset of box).
    """
    rng = np.random.default_rng(seed)
    coeffs: dict = {}
    if constraint == "spectrum":
        if spectrum is None or not list(spectrum):
            raise ValueError("spectrum constraint needs a nonempty point set")
        pts = sorted(tuple(int(x) for x in k) for k in spectrum)
        for k in pts:
            if not box.contains(k):
                raise ValueError(f"spectrum point {k} outside the box")
            coeffs[k] = complex(rng.standard_normal(), rng.standard_normal())
        return TrigPoly(box.dim, coeffs)

    if constraint == "real":
        for k in sorted(box.points()):
            mk = tuple(-x for x in k)
            if k == mk:
                coeffs[k] = complex(rng.standard_normal(), 0.0)
            elif k > mk and box.contains(mk):
                c = complex(rng.standard_normal(), rng.standard_normal())
                coeffs[k] = c
                coeffs[mk] = np.conj(c)
        return TrigPoly(box.dim, coeffs)

    if constraint != "none":
        raise ValueError(f"unknown constraint {constraint!r}")
    for k in sorted(box.points()):
        coeffs[k] = complex(rng.standard_normal(), rng.standard_normal())
    return TrigPoly(box.dim, coeffs)
