"""Constructive interpolation in finite model spaces.

For a finite Blaschke product B of degree N the model space K_B is the
N-dimensional span of the Cauchy kernels at the zeros, and the unique
element matching prescribed node values has the closed Lagrange form

    f(z) = sum_j alpha_j (B_j(z) / B_j(a_j)) (1 - |a_j|^2) / (1 - conj(a_j) z)

with B_j the cofactor at zero j.  On top of that form this module builds
the norm constant of the interpolation map, the union construction that
interpolates across two disjoint zero sets at once, the iterative scheme
that transports an interpolant to a nearby node set, and the preimages of
a point under B.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Union

import numpy as np

from .blaschke import (
    COINCIDENCE_TOL,
    BlaschkeProduct,
    TargetVector,
    ZeroSequence,
    as_targets,
)
from .criteria import CircleGrid, scan_circle
from .errors import (
    ContractionViolated,
    DegreeCapExceeded,
    EvaluationAtZero,
    MaxIterExceeded,
    PointOutsideDisk,
    RootVerificationFailed,
    SeparationTooSmall,
    ZeroCollision,
)
from .geometry import DiskPoint, PointLike, as_point, one_minus_abs_sq, pairwise_rho

__all__ = [
    "DEGREE_CAP",
    "InterpolantRep",
    "UnionConstruction",
    "IterationTrace",
    "solve_kb",
    "sup_norm",
    "lebesgue_constant",
    "interpolate_union",
    "nearby_iterate",
    "frostman_shift_zeros",
]

# Expanded-coefficient root finding degrades beyond this degree.
DEGREE_CAP = 40

KERNEL_RESIDUAL_TOL = 1e-6
UNION_SEPARATION_FLOOR = 1e-6
ROOT_RESIDUAL_TOL = 1e-8


def _kernel_ratios(zeros: np.ndarray, points: np.ndarray) -> np.ndarray:
    """(1 - |a_j|^2) / (1 - conj(a_j) z_i) for every point/zero pair.

    The denominator is accumulated as (1 - |a|^2) + conj(a) (a - z), which
    is exact when a point coincides with a zero; the naive 1 - conj(a) z
    loses all accuracy there once the zero sits deep near the boundary.
    """
    sizes = one_minus_abs_sq(zeros)[None, :]
    shifted = zeros[None, :] - points[:, None]
    return sizes / (sizes + np.conj(zeros)[None, :] * shifted)


def _lagrange_matrix(b: BlaschkeProduct, points: np.ndarray) -> np.ndarray:
    """Rows of Lagrange basis values L_j at the given points.

    A point equal to a node gets the exact unit row, so interpolants
    reproduce their node values without roundoff.
    """
    zeros = b.zeros.values
    node_cof = np.diag(b._cofactor_values(zeros))
    cof = b._cofactor_values(points)
    rows = (cof / node_cof[None, :]) * _kernel_ratios(zeros, points)
    hits = points[:, None] == zeros[None, :]
    if hits.any():
        rows[hits.any(axis=1)] = 0.0
        rows[hits] = 1.0
    return rows


class InterpolantRep:
    """An element of K_B held in Lagrange form, with a kernel-form cross-check.

    lagrange_coeffs are exactly the node values; kernel_coeffs solve the
    Cauchy-kernel linear system and are None when that solve was too
    ill-conditioned to trust, with ill_conditioned flagging the skip.
    """

    __slots__ = ("space", "lagrange_coeffs", "kernel_coeffs", "ill_conditioned", "kernel_residual")

    def __init__(
        self,
        space: BlaschkeProduct,
        lagrange_coeffs: TargetVector,
        kernel_coeffs: Optional[np.ndarray],
        ill_conditioned: bool,
        kernel_residual: float,
    ):
        self.space = space
        self.lagrange_coeffs = lagrange_coeffs
        self.kernel_coeffs = kernel_coeffs
        self.ill_conditioned = ill_conditioned
        self.kernel_residual = kernel_residual

    def __call__(self, z) -> Union[complex, np.ndarray]:
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        values = _lagrange_matrix(self.space, arr) @ self.lagrange_coeffs.values
        return complex(values[0]) if np.ndim(z) == 0 else values

    def eval_kernel(self, z) -> Union[complex, np.ndarray]:
        """Evaluate the kernel-form representation; requires a trusted solve."""
        if self.kernel_coeffs is None:
            raise ValueError("kernel form unavailable: the cross-check solve was ill-conditioned")
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        values = _kernel_ratios(self.space.zeros.values, arr) @ self.kernel_coeffs
        return complex(values[0]) if np.ndim(z) == 0 else values

    def __repr__(self) -> str:
        return (
            f"InterpolantRep(degree={self.space.degree}, "
            f"ill_conditioned={self.ill_conditioned})"
        )


@dataclass(frozen=True)
class UnionConstruction:
    """Interpolant across two disjoint zero sets, kept as G = G1 + G2.

    G1 carries the factor C and therefore vanishes on the second zero
    set; G2 carries B and vanishes on the first.  tilde_gamma stores the
    conjugated normalized coefficients in interleaved order (even slots
    from the first set, odd from the second).
    """

    B: BlaschkeProduct
    C: BlaschkeProduct
    tilde_gamma: tuple[complex, ...]
    G: Callable[[np.ndarray], np.ndarray]
    G1: Callable[[np.ndarray], np.ndarray]
    G2: Callable[[np.ndarray], np.ndarray]

    def __call__(self, z):
        return self.G(z)


@dataclass(frozen=True)
class IterationTrace:
    """Per-step residual history of the nearby-node iteration.

    bound_curve[m] = sup|alpha| (2 M (1 - epsilon))^m is the geometric
    envelope guaranteed when nearness = 1 - epsilon stays below 1/(2M);
    in the marginal band beyond that threshold the curve is recorded but
    carries no guarantee (contraction_marginal is then set).
    """

    residual_sup: tuple[float, ...]
    bound_curve: tuple[float, ...]
    M_used: float
    epsilon_used: float
    converged: bool
    contraction_marginal: bool = False


def solve_kb(b: BlaschkeProduct, targets) -> InterpolantRep:
    """The unique element of K_B taking the given values at the zeros of B.

    Built directly in Lagrange form; the Cauchy-kernel linear system is
    solved as an independent cross-check and dropped (ill_conditioned set,
    kernel_coeffs None) when its residual exceeds 1e-6 times the target
    size.
    """
    alpha = as_targets(targets)
    if len(alpha) != b.degree:
        raise ValueError(
            f"target length {len(alpha)} does not match degree {b.degree}"
        )
    if b.degree == 0:
        raise ValueError("cannot interpolate on a degree-zero product")

    zeros = b.zeros.values
    kernel_matrix = _kernel_ratios(zeros, zeros)
    try:
        coeffs = np.linalg.solve(kernel_matrix, alpha.values)
        residual = float(np.max(np.abs(kernel_matrix @ coeffs - alpha.values)))
    except np.linalg.LinAlgError:
        coeffs = None
        residual = math.inf
    if not math.isfinite(residual):
        residual = math.inf
    ill = residual > KERNEL_RESIDUAL_TOL * alpha.sup_norm
    return InterpolantRep(
        space=b,
        lagrange_coeffs=alpha,
        kernel_coeffs=None if ill else coeffs,
        ill_conditioned=bool(ill),
        kernel_residual=residual,
    )


def _callable_and_grid(f, grid: Optional[CircleGrid]) -> tuple[Callable, CircleGrid]:
    grid = grid or CircleGrid()
    if isinstance(f, InterpolantRep):
        return f, grid.with_injected(f.space.zeros)
    if isinstance(f, UnionConstruction):
        return f, grid.with_injected(f.B.zeros, f.C.zeros)
    return f, grid


def sup_norm(f, grid: Optional[CircleGrid] = None) -> float:
    """Estimated sup of |f| over the unit circle, never below the grid max.

    f may be an InterpolantRep, a UnionConstruction, or any callable that
    accepts an array of circle points.
    """
    func, grid = _callable_and_grid(f, grid)

    def magnitude(angles: np.ndarray) -> np.ndarray:
        return np.abs(func(np.exp(1j * angles)))

    value, _, _ = scan_circle(magnitude, grid, mode="max")
    return float(value)


def lebesgue_constant(b: BlaschkeProduct, grid: Optional[CircleGrid] = None) -> float:
    """Circle supremum of the absolute Lagrange basis row sum, clamped to >= 1.

    This is the norm of the interpolation map from bounded node values to
    (K_B, sup norm): the worst target vector aligns all basis phases at
    the maximizing circle point.
    """
    if b.degree == 0:
        raise ValueError("lebesgue constant requires at least one zero")
    grid = (grid or CircleGrid()).with_injected(b.zeros)

    def row_sum(angles: np.ndarray) -> np.ndarray:
        return np.sum(np.abs(_lagrange_matrix(b, np.exp(1j * angles))), axis=1)

    value, _, _ = scan_circle(row_sum, grid, mode="max")
    return max(float(value), 1.0)


def _phase_unit(a: complex) -> complex:
    """-|a|/a with the origin convention -|a|/a = 1 for a = 0."""
    return 1.0 if a == 0 else -abs(a) / a


def interpolate_union(
    b: BlaschkeProduct,
    c: BlaschkeProduct,
    alpha,
    beta,
) -> UnionConstruction:
    """Interpolate alpha on the zeros of B and beta on the zeros of C at once.

    Targets are first normalized to alpha_j / C(a_j) and beta_j / B(z_j),
    then folded into conjugated coefficients

        tilde_gamma_a[j] = (-conj(a_j)/|a_j|) conj(alpha_j') / conj(B_j(a_j))

    (origin convention as in the product factors) and the symmetric
    C-side expression.  The result is assembled as

        G1(z) = sum_j conj(tilde_gamma_a[j]) (-|a_j|/a_j) B_j(z) C(z) (1-|a_j|^2)/(1-conj(a_j) z)

    plus the mirrored G2 with B and the C-cofactors, so G = G1 + G2 hits
    both target sets while each part vanishes on the other node set.
    """
    alpha = as_targets(alpha)
    beta = as_targets(beta)
    if len(alpha) != b.degree or len(beta) != c.degree:
        raise ValueError("target lengths must match the two degrees")
    if b.degree == 0 or c.degree == 0:
        raise ValueError("both products need at least one zero")

    a_vals = b.zeros.values
    z_vals = c.zeros.values
    cross = pairwise_rho(a_vals, z_vals)
    if float(cross.min()) <= COINCIDENCE_TOL:
        j, k = np.unravel_index(int(cross.argmin()), cross.shape)
        raise ZeroCollision(f"shared zero: a_{j} coincides with z_{k}")
    sep = float(cross.min())
    if sep < UNION_SEPARATION_FLOOR:
        raise SeparationTooSmall(
            f"separation {sep:.3e} below {UNION_SEPARATION_FLOOR:g}; "
            "normalization would divide by vanishing cross values"
        )

    alpha_norm = alpha.values / c.evaluate(a_vals)
    beta_norm = beta.values / b.evaluate(z_vals)

    b_cof_at_nodes = np.diag(b._cofactor_values(a_vals))
    c_cof_at_nodes = np.diag(c._cofactor_values(z_vals))

    phase_a = np.array([_phase_unit(a) for a in a_vals])
    phase_z = np.array([_phase_unit(z) for z in z_vals])

    tilde_a = phase_a * np.conj(alpha_norm) / np.conj(b_cof_at_nodes)
    tilde_z = phase_z * np.conj(beta_norm) / np.conj(c_cof_at_nodes)

    weight_a = np.conj(tilde_a) * phase_a
    weight_z = np.conj(tilde_z) * phase_z

    def g1(z) -> Union[complex, np.ndarray]:
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        terms = b._cofactor_values(arr) * _kernel_ratios(a_vals, arr) * weight_a[None, :]
        values = c.evaluate(arr) * np.sum(terms, axis=1)
        return complex(values[0]) if np.ndim(z) == 0 else values

    def g2(z) -> Union[complex, np.ndarray]:
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        terms = c._cofactor_values(arr) * _kernel_ratios(z_vals, arr) * weight_z[None, :]
        values = b.evaluate(arr) * np.sum(terms, axis=1)
        return complex(values[0]) if np.ndim(z) == 0 else values

    def g(z) -> Union[complex, np.ndarray]:
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        values = g1(arr) + g2(arr)
        return complex(values[0]) if np.ndim(z) == 0 else values

    tilde = []
    for j in range(max(len(tilde_a), len(tilde_z))):
        if j < len(tilde_a):
            tilde.append(complex(tilde_a[j]))
        if j < len(tilde_z):
            tilde.append(complex(tilde_z[j]))
    return UnionConstruction(
        B=b,
        C=c,
        tilde_gamma=tuple(tilde),
        G=g,
        G1=g1,
        G2=g2,
    )


def nearby_iterate(
    b: BlaschkeProduct,
    z_seq: Union[ZeroSequence, Iterable[PointLike]],
    targets,
    max_iter: int = 30,
    tol: float = 1e-8,
    grid: Optional[CircleGrid] = None,
) -> tuple[InterpolantRep, IterationTrace]:
    """Interpolate targets on a node set near the zeros of B, by correction.

    Solve on the zeros, evaluate at the nearby nodes, re-solve on the
    residual, and accumulate.  With M the interpolation norm constant and
    nu the index-wise nearness, each sweep contracts the residual by at
    least 2 M nu, so nu < 1/(2M) guarantees geometric convergence; up to
    1.5x that threshold the iteration is still attempted with a warning,
    beyond it ContractionViolated is raised.
    """
    if not isinstance(z_seq, ZeroSequence):
        z_seq = ZeroSequence(z_seq)
    alpha = as_targets(targets)
    if len(z_seq) != b.degree or len(alpha) != b.degree:
        raise ValueError("node and target lengths must equal the degree")
    if max_iter < 1:
        raise ValueError("max_iter must be positive")

    m_const = lebesgue_constant(b, grid)
    nu = float(np.max(np.diag(pairwise_rho(b.zeros.values, z_seq.values))))
    threshold = 1.0 / (2.0 * m_const)
    marginal = nu >= threshold
    if nu >= 1.5 * threshold:
        raise ContractionViolated(
            f"nearness {nu:.6g} is beyond 1.5/(2M) = {1.5 * threshold:.6g}; "
            "the correction iteration has no contraction to offer"
        )
    if marginal:
        warnings.warn(
            f"nearness {nu:.6g} exceeds the guaranteed radius 1/(2M) = {threshold:.6g}; "
            "attempting the iteration without a convergence guarantee",
            RuntimeWarning,
            stacklevel=2,
        )

    transfer = _lagrange_matrix(b, z_seq.values)
    total = np.zeros(b.degree, dtype=complex)
    achieved = np.zeros(b.degree, dtype=complex)
    residual = alpha.values.copy()
    residual_sup = []
    converged = False
    for _ in range(max_iter):
        total = total + residual
        achieved = achieved + transfer @ residual
        residual = alpha.values - achieved
        residual_sup.append(float(np.max(np.abs(residual))))
        if residual_sup[-1] <= tol:
            converged = True
            break

    ratio = 2.0 * m_const * nu
    bound_curve = tuple(alpha.sup_norm * ratio**m for m in range(len(residual_sup)))
    trace = IterationTrace(
        residual_sup=tuple(residual_sup),
        bound_curve=bound_curve,
        M_used=m_const,
        epsilon_used=1.0 - nu,
        converged=converged,
        contraction_marginal=marginal,
    )
    if not converged:
        raise MaxIterExceeded(
            f"residual {residual_sup[-1]:.3e} above tol {tol:.3e} "
            f"after {max_iter} steps (contraction ratio bound {ratio:.3f})"
        )
    return solve_kb(b, TargetVector(total)), trace


def _expanded_fraction(b: BlaschkeProduct) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients (low to high) of the numerator and denominator of B."""
    num = np.array([b.rotation.value], dtype=complex)
    den = np.array([1.0], dtype=complex)
    for a, pre in zip(b.zeros.values, b._prefactors):
        num = np.convolve(num, np.array([-a * pre, pre]))
        den = np.convolve(den, np.array([1.0, -np.conj(a)]))
    return num, den


def frostman_shift_zeros(b: BlaschkeProduct, a: PointLike) -> ZeroSequence:
    """All solutions in the disk of B(z) = a, the zeros of the shifted product.

    Found as eigenvalue roots of the expanded polynomial p - a q (p, q the
    numerator and denominator of B), then polished by Newton steps on the
    factored form, which stays stable where the expansion does not.  Each
    root must verify |B(root) - a| <= 1e-8 inside the disk.
    """
    target = as_point(a).z
    degree = b.degree
    if degree == 0:
        raise ValueError("cannot shift a degree-zero product")
    if degree > DEGREE_CAP:
        raise DegreeCapExceeded(
            f"degree {degree} exceeds the expansion cap {DEGREE_CAP}"
        )

    num, den = _expanded_fraction(b)
    poly = num.astype(complex)
    poly[: den.size] -= target * den
    roots = np.polynomial.polynomial.polyroots(poly)

    def _residual(w: complex) -> float:
        if abs(w) > 1.0:
            return math.inf
        return abs(b.evaluate(w) - target)

    polished = []
    for root in roots:
        w = complex(root)
        for _ in range(12):
            if abs(w) > 1.0:
                break
            value = b.evaluate(w) - target
            if abs(value) <= 1e-14 * (1.0 + abs(target)):
                break
            try:
                slope = b.derivative(w)
            except EvaluationAtZero:
                break
            step = value / slope
            if abs(step) > 0.5:
                break
            candidate = w - step
            if abs(candidate) >= 1.0:
                break
            w = candidate
        polished.append(w)

    residuals = [_residual(w) for w in polished]
    bad = [i for i, res in enumerate(residuals) if res > ROOT_RESIDUAL_TOL or abs(polished[i]) >= 1.0]
    if len(polished) != degree or bad:
        raise RootVerificationFailed(
            f"{len(bad)} of {len(polished)} roots failed verification "
            f"(worst residual {max(residuals):.3e}, degree {degree})"
        )

    order = sorted(
        range(degree),
        key=lambda i: (cmath.phase(polished[i]) % (2.0 * math.pi), abs(polished[i])),
    )
    try:
        points = [DiskPoint.from_complex(polished[i]) for i in order]
    except PointOutsideDisk as exc:
        raise RootVerificationFailed(f"root grazes the boundary guard: {exc}") from exc
    return ZeroSequence(points)
