"""Named zero sequences, interlaced unions, and perturbation sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .blaschke import TargetVector, ZeroSequence, as_targets
from .errors import DuplicatePoint, PointOutsideDisk, SamplingExhausted, TruncationTooDeep
from .geometry import DiskPoint, pairwise_rho, pseudo_disk_to_euclidean

__all__ = [
    "DEPTH_CAP",
    "PairedSequences",
    "Seed",
    "frostman_example",
    "radial_sequence",
    "interlace",
    "interlace_targets",
    "deinterlace",
    "deinterlace_targets",
    "perturb_sample",
]

# Beyond this depth 1 - |a_n| underflows double precision for the named
# generators; the near-boundary guard usually triggers sooner.
DEPTH_CAP = 60

# Seeds are plain 64-bit integers fed to numpy's Generator; identical seed
# means an identical, bit-exact sample stream.
Seed = Union[int, np.random.SeedSequence]

RESAMPLING_ROUNDS = 1000


@dataclass(frozen=True)
class PairedSequences:
    """Two equal-length zero sequences compared index by index.

    The nearness, separation, and self-separation figures are properties
    recomputed on access, never cached.
    """

    A: ZeroSequence
    Z: ZeroSequence

    def __post_init__(self):
        if len(self.A) != len(self.Z):
            raise ValueError(
                f"paired sequences must have equal length ({len(self.A)} != {len(self.Z)})"
            )
        if len(self.A) == 0:
            raise ValueError("paired sequences must be nonempty")

    @property
    def nearness(self) -> float:
        """sup over n of rho(a_n, z_n)."""
        dist = pairwise_rho(self.A.values, self.Z.values)
        return float(np.max(np.diag(dist)))

    @property
    def separation(self) -> float:
        """inf over all pairs (j, k) of rho(a_j, z_k); the diagonal counts."""
        return float(np.min(pairwise_rho(self.A.values, self.Z.values)))

    @property
    def z_self_separation(self) -> float:
        return self.Z.min_separation


def frostman_example(n: int) -> ZeroSequence:
    """First n terms of (1 - 2^-k) exp(i 2^k / 3^k), k = 1..n.

    The tangential approach to the point 1 keeps the boundary sum bounded
    even though the radii accumulate at the circle.
    """
    _check_depth(n)
    points = []
    for k in range(1, n + 1):
        radius = 1.0 - 0.5**k
        phase = (2.0**k) / (3.0**k)
        points.append(_deep_point(radius * math.cos(phase), radius * math.sin(phase), n))
    return ZeroSequence(points)


def radial_sequence(q: float, n: int, arg: float = 0.0) -> ZeroSequence:
    """Points (1 - q^k) exp(i arg), k = 1..n, all on one ray."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"ratio q = {q} must lie in (0, 1)")
    _check_depth(n)
    phase = complex(math.cos(arg), math.sin(arg))
    points = []
    for k in range(1, n + 1):
        radius = 1.0 - q**k
        w = radius * phase
        points.append(_deep_point(w.real, w.imag, n))
    return ZeroSequence(points)


def _check_depth(n: int) -> None:
    if n < 1:
        raise ValueError(f"need at least one point, got n = {n}")
    if n > DEPTH_CAP:
        raise TruncationTooDeep(
            f"depth {n} exceeds the cap {DEPTH_CAP}; 1 - |a_n| underflows double precision"
        )


def _deep_point(re: float, im: float, n: int) -> DiskPoint:
    try:
        return DiskPoint(re, im)
    except PointOutsideDisk as exc:
        raise TruncationTooDeep(
            f"depth {n} reaches the near-boundary guard: {exc}"
        ) from exc


def interlace(a_seq: ZeroSequence, z_seq: ZeroSequence) -> ZeroSequence:
    """Merge two sequences point by point: a_1, z_1, a_2, z_2, ...

    Raises DuplicatePoint when the merged set is not pairwise distinct.
    """
    if len(a_seq) != len(z_seq):
        raise ValueError("interlace requires equal lengths")
    merged = []
    for a, z in zip(a_seq, z_seq):
        merged.append(a)
        merged.append(z)
    return ZeroSequence(merged)


def interlace_targets(alpha: TargetVector, beta: TargetVector) -> TargetVector:
    """Interleave target values exactly like their points."""
    alpha = as_targets(alpha)
    beta = as_targets(beta)
    if len(alpha) != len(beta):
        raise ValueError("interlace_targets requires equal lengths")
    merged = np.empty(2 * len(alpha), dtype=complex)
    merged[0::2] = alpha.values
    merged[1::2] = beta.values
    return TargetVector(merged)


def deinterlace(merged: ZeroSequence) -> tuple[ZeroSequence, ZeroSequence]:
    if len(merged) % 2:
        raise ValueError("deinterlace requires an even-length sequence")
    return ZeroSequence(merged.values[0::2]), ZeroSequence(merged.values[1::2])


def deinterlace_targets(merged: TargetVector) -> tuple[TargetVector, TargetVector]:
    merged = as_targets(merged)
    if len(merged) % 2:
        raise ValueError("deinterlace_targets requires an even-length vector")
    return TargetVector(merged.values[0::2]), TargetVector(merged.values[1::2])


def perturb_sample(
    a_seq: ZeroSequence,
    r: float,
    seed: Seed,
    min_sep: float = 0.1,
) -> PairedSequences:
    """Draw z_n inside the pseudohyperbolic disk of radius r around a_n.

    Each z_n is uniform in the Euclidean parameterization of the image
    disk.  The whole vector is redrawn until the z's are rho-separated by
    at least min_sep, up to 1000 rounds; min_sep must stay below the
    self-separation of the centers or no draw can ever succeed reliably.
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"perturbation radius {r} must lie in (0, 1)")
    if len(a_seq) == 0:
        raise ValueError("cannot perturb an empty sequence")
    if not min_sep < a_seq.min_separation:
        raise ValueError(
            f"min_sep = {min_sep} must be below the self-separation "
            f"{a_seq.min_separation:.6g} of the centers"
        )

    disks = [pseudo_disk_to_euclidean(a, r) for a in a_seq]
    centers = np.array([d.center for d in disks], dtype=complex)
    radii = np.array([d.radius for d in disks])
    rng = np.random.default_rng(seed)
    count = len(a_seq)

    for _ in range(RESAMPLING_ROUNDS):
        u = rng.random(count)
        t = rng.random(count)
        draws = centers + radii * np.sqrt(u) * np.exp(2j * math.pi * t)
        if np.max(np.diag(pairwise_rho(a_seq.values, draws))) > r:
            continue
        sep = pairwise_rho(draws, draws)
        np.fill_diagonal(sep, np.inf)
        if count > 1 and float(sep.min()) < min_sep:
            continue
        try:
            z_seq = ZeroSequence(draws)
        except DuplicatePoint:
            continue
        return PairedSequences(A=a_seq, Z=z_seq)

    raise SamplingExhausted(
        f"no rho-separated draw with min_sep = {min_sep} in {RESAMPLING_ROUNDS} rounds; "
        f"radius {r} is too large for the separation of the centers"
    )
