"""Finite Blaschke products with numerically stable factor-wise evaluation.

A product is kept as its zero list and a unimodular rotation; nothing is
ever expanded into polynomial coefficients here, so evaluation stays
accurate arbitrarily close to the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import DuplicatePoint, EvaluationAtZero, IndexOutOfRange
from .geometry import CirclePoint, DiskPoint, PointLike, as_point, one_minus_abs_sq, pairwise_rho

__all__ = [
    "COINCIDENCE_TOL",
    "ZeroSequence",
    "TargetVector",
    "BlaschkeProduct",
    "CarlesonReport",
]

# Two points closer than this (pseudohyperbolically) count as the same point.
COINCIDENCE_TOL = 1e-13


class ZeroSequence(Sequence[DiskPoint]):
    """An ordered list of pairwise distinct points of the unit disk.

    Points within pseudohyperbolic distance 1e-13 of each other are
    rejected as duplicates.  The empty sequence is allowed so that the
    cofactor of a degree-one product (a constant) is representable;
    generators always produce at least one point.
    """

    __slots__ = ("_points", "_values")

    def __init__(self, points: Iterable[PointLike]):
        pts = tuple(as_point(p) for p in points)
        values = np.array([p.z for p in pts], dtype=complex)
        if len(pts) > 1:
            dist = pairwise_rho(values, values)
            np.fill_diagonal(dist, np.inf)
            nearest = float(dist.min())
            if nearest <= COINCIDENCE_TOL:
                j, k = np.unravel_index(int(dist.argmin()), dist.shape)
                raise DuplicatePoint(
                    f"points {j} and {k} coincide (rho = {nearest:.3e})"
                )
        self._points = pts
        self._values = values
        self._values.setflags(write=False)

    @property
    def points(self) -> tuple[DiskPoint, ...]:
        return self._points

    @property
    def values(self) -> np.ndarray:
        """Read-only complex array of the points."""
        return self._values

    @property
    def min_separation(self) -> float:
        """Smallest pairwise pseudohyperbolic distance (inf for fewer than 2 points)."""
        if len(self) < 2:
            return math.inf
        dist = pairwise_rho(self._values, self._values)
        np.fill_diagonal(dist, np.inf)
        return float(dist.min())

    def __len__(self) -> int:
        return len(self._points)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return ZeroSequence(self._points[index])
        return self._points[index]

    def __iter__(self):
        return iter(self._points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZeroSequence):
            return NotImplemented
        return len(self) == len(other) and bool(np.array_equal(self._values, other._values))

    def __repr__(self) -> str:
        return f"ZeroSequence({list(self._values)!r})"


class TargetVector(Sequence[complex]):
    """Complex target values aligned index-for-index with a zero sequence."""

    __slots__ = ("_values",)

    def __init__(self, values: Iterable[complex]):
        vals = np.array([complex(v) for v in values], dtype=complex)
        if vals.size and not np.all(np.isfinite(vals.view(float))):
            raise ValueError("target values must be finite")
        self._values = vals
        self._values.setflags(write=False)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self._values))) if self._values.size else 0.0

    def __len__(self) -> int:
        return self._values.size

    def __getitem__(self, index):
        if isinstance(index, slice):
            return TargetVector(self._values[index])
        return complex(self._values[index])

    def __add__(self, other: "TargetVector") -> "TargetVector":
        other = as_targets(other)
        return TargetVector(self._values + other.values)

    def __rmul__(self, scalar: complex) -> "TargetVector":
        return TargetVector(complex(scalar) * self._values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TargetVector):
            return NotImplemented
        return bool(np.array_equal(self._values, other._values))

    def __repr__(self) -> str:
        return f"TargetVector({list(self._values)!r})"


def as_targets(values: Union[TargetVector, Iterable[complex]]) -> TargetVector:
    if isinstance(values, TargetVector):
        return values
    return TargetVector(values)


@dataclass(frozen=True)
class CarlesonReport:
    """Per-zero uniform-separation quantities and their infimum delta."""

    per_zero: tuple[tuple[int, float], ...]
    delta: float


class BlaschkeProduct:
    """A finite Blaschke product: rotation times one factor per zero.

    Each factor is (|a|/(-a)) (z - a) / (1 - conj(a) z), reducing to z for
    a zero at the origin.  Evaluation accepts scalars or numpy arrays of
    points in the closed disk and multiplies factors directly; cofactors
    share the rotation.  Instances are immutable.
    """

    __slots__ = ("_zeros", "_rotation", "_prefactors")

    def __init__(
        self,
        zeros: Union[ZeroSequence, Iterable[PointLike]],
        rotation: Union[CirclePoint, complex] = CirclePoint(0.0),
    ):
        if not isinstance(zeros, ZeroSequence):
            zeros = ZeroSequence(zeros)
        if not isinstance(rotation, CirclePoint):
            rotation = CirclePoint.from_complex(rotation)
        self._zeros = zeros
        self._rotation = rotation
        zs = zeros.values
        # |a|/(-a) per factor, taken as 1 for a zero at the origin.
        safe = np.where(zs == 0, 1.0, zs)
        self._prefactors = np.where(zs == 0, 1.0, -np.abs(zs) / safe)
        self._prefactors.setflags(write=False)

    @property
    def zeros(self) -> ZeroSequence:
        return self._zeros

    @property
    def rotation(self) -> CirclePoint:
        return self._rotation

    @property
    def degree(self) -> int:
        return len(self._zeros)

    def __repr__(self) -> str:
        return f"BlaschkeProduct(degree={self.degree}, rotation_arg={self._rotation.arg:.6g})"

    def _coerce_arg(self, z) -> tuple[np.ndarray, bool]:
        arr = np.asarray(z, dtype=complex)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        if np.any(np.abs(arr) > 1.0 + 1e-9):
            raise ValueError("evaluation points must lie in the closed unit disk")
        return arr, scalar

    def _factors(self, z: np.ndarray) -> np.ndarray:
        """Matrix of single-factor values, rows over points, columns over zeros."""
        zs = self._zeros.values
        if zs.size == 0:
            return np.ones((z.size, 0), dtype=complex)
        num = z[:, None] - zs[None, :]
        den = 1.0 - np.conj(zs)[None, :] * z[:, None]
        return self._prefactors[None, :] * num / den

    def _cofactor_values(self, z: np.ndarray) -> np.ndarray:
        """B_j(z) for every j at once, via prefix/suffix products.

        Stays exact when z hits a zero (no division by a vanishing factor).
        """
        factors = self._factors(z)
        m, n = factors.shape
        ones = np.ones((m, 1), dtype=complex)
        prefix = np.concatenate([ones, np.cumprod(factors, axis=1)[:, :-1]], axis=1)
        suffix = np.concatenate(
            [np.cumprod(factors[:, ::-1], axis=1)[:, ::-1][:, 1:], ones], axis=1
        )
        return self._rotation.value * prefix * suffix

    def evaluate(self, z) -> Union[complex, np.ndarray]:
        """B(z), factor by factor, for |z| <= 1."""
        arr, scalar = self._coerce_arg(z)
        result = self._rotation.value * np.prod(self._factors(arr), axis=1)
        return complex(result[0]) if scalar else result

    __call__ = evaluate

    def derivative(self, z, exclude: Optional[int] = None) -> Union[complex, np.ndarray]:
        """B'(z) by logarithmic-derivative summation.

        At a zero the plain sum is singular; pass exclude=j to use the
        exact product-rule split around factor j, valid everywhere and in
        particular at z = a_j where it reduces to b_j'(a_j) B_j(a_j).
        """
        arr, scalar = self._coerce_arg(z)
        zs = self._zeros.values

        if exclude is None:
            hit = self._nearest_zero_hits(arr, zs)
            if hit is not None:
                raise EvaluationAtZero(
                    f"point coincides with zero {hit}; pass exclude={hit}"
                )
            result = self.evaluate(arr) * self._log_derivative_sum(arr, zs)
            return complex(result[0]) if scalar else result

        j = self._check_index(exclude)
        a = zs[j]
        cof = self.cofactor(j)
        den = 1.0 - np.conj(a) * arr
        bj = self._prefactors[j] * (arr - a) / den
        bj_prime = self._prefactors[j] * one_minus_abs_sq(a)[()] / den**2
        result = bj_prime * cof.evaluate(arr) + bj * cof.derivative(arr)
        return complex(result[0]) if scalar else result

    def cofactor(self, j: int) -> "BlaschkeProduct":
        """The product with zero j removed, same rotation."""
        j = self._check_index(j)
        pts = self._zeros.points
        return BlaschkeProduct(ZeroSequence(pts[:j] + pts[j + 1:]), self._rotation)

    def carleson(self) -> CarlesonReport:
        """Uniform-separation quantities (1 - |a_j|^2) |B'(a_j)| and their infimum."""
        if self.degree == 0:
            raise ValueError("carleson report requires at least one zero")
        zs = self._zeros.values
        weights = one_minus_abs_sq(zs)
        per_zero = []
        for j in range(self.degree):
            quantity = float(weights[j] * abs(self.derivative(zs[j], exclude=j)))
            per_zero.append((j, quantity))
        delta = min(q for _, q in per_zero)
        return CarlesonReport(per_zero=tuple(per_zero), delta=delta)

    @staticmethod
    def _nearest_zero_hits(arr: np.ndarray, zs: np.ndarray) -> Optional[int]:
        if zs.size == 0:
            return None
        dist = np.abs(arr[:, None] - zs[None, :])
        flat = int(dist.argmin())
        if dist.reshape(-1)[flat] <= COINCIDENCE_TOL:
            return flat % zs.size
        return None

    @staticmethod
    def _log_derivative_sum(arr: np.ndarray, zs: np.ndarray) -> np.ndarray:
        if zs.size == 0:
            return np.zeros(arr.shape, dtype=complex)
        num = one_minus_abs_sq(zs)[None, :]
        den = (arr[:, None] - zs[None, :]) * (1.0 - np.conj(zs)[None, :] * arr[:, None])
        return np.sum(num / den, axis=1)

    def _check_index(self, j: int) -> int:
        j = int(j)
        if not 0 <= j < self.degree:
            raise IndexOutOfRange(
                f"zero index {j} outside range 0..{self.degree - 1}"
            )
        return j
