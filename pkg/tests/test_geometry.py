import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blaschke_lab import (
    BOUNDARY_MARGIN,
    CirclePoint,
    DiskPoint,
    EuclideanDisk,
    PointOutsideDisk,
    beta,
    kernel_bounds_check,
    mobius,
    one_minus_abs_sq,
    pairwise_rho,
    pseudo_disk_to_euclidean,
    rho,
)
from blaschke_lab.sequences import perturb_sample
from tests.conftest import random_separated


def disk_points(max_mod=0.999):
    return st.builds(
        lambda r, t: DiskPoint(r * math.cos(t), r * math.sin(t)),
        st.floats(0.0, max_mod),
        st.floats(0.0, 2.0 * math.pi),
    )


class TestDiskPoint:
    def test_roundtrip(self):
        p = DiskPoint(0.3, -0.4)
        assert complex(p) == 0.3 - 0.4j
        assert DiskPoint.from_complex(0.3 - 0.4j) == p

    def test_rejects_boundary(self):
        with pytest.raises(PointOutsideDisk):
            DiskPoint(1.0, 0.0)
        with pytest.raises(PointOutsideDisk):
            DiskPoint(1.0 - 1e-16, 0.0)
        with pytest.raises(PointOutsideDisk):
            DiskPoint(0.8, 0.7)

    def test_rejects_non_finite(self):
        with pytest.raises(PointOutsideDisk):
            DiskPoint(math.nan, 0.0)
        with pytest.raises(PointOutsideDisk):
            DiskPoint(0.0, math.inf)

    def test_margin_interior_accepted(self):
        p = DiskPoint(1.0 - 1e-14, 0.0)
        assert abs(p.z) < 1.0 - BOUNDARY_MARGIN


class TestCirclePoint:
    def test_normalizes_argument(self):
        assert CirclePoint(2.0 * math.pi + 0.5).arg == pytest.approx(0.5)
        assert CirclePoint(-0.5).arg == pytest.approx(2.0 * math.pi - 0.5)

    def test_from_complex(self):
        w = CirclePoint.from_complex(1j)
        assert w.arg == pytest.approx(math.pi / 2)
        assert complex(w) == pytest.approx(1j)

    def test_from_complex_rejects_off_circle(self):
        with pytest.raises(ValueError):
            CirclePoint.from_complex(0.5)
        # a hair off the circle is tolerated
        CirclePoint.from_complex((1.0 + 1e-10) * 1j)


class TestRho:
    def test_distance_from_origin_is_modulus(self):
        assert rho(0, 0.3 + 0.4j) == pytest.approx(0.5)

    def test_known_value(self):
        # |(-0.5) - 0.5| / |1 - 0.5 * (-0.5)| = 1 / 1.25
        assert rho(0.5, -0.5) == pytest.approx(0.8, abs=1e-15)

    def test_identity_of_indiscernibles(self):
        assert rho(0.3 + 0.2j, 0.3 + 0.2j) == 0.0

    @given(disk_points(), disk_points())
    def test_symmetry(self, a, z):
        assert rho(a, z) == pytest.approx(rho(z, a), abs=1e-12)

    @given(disk_points(0.99), disk_points(0.99), disk_points(0.99))
    @settings(max_examples=60)
    def test_mobius_invariance(self, w, a, z):
        moved = rho(mobius(w, a), mobius(w, z))
        assert moved == pytest.approx(rho(a, z), abs=1e-9)

    @given(disk_points(0.99), disk_points(0.99), st.floats(0.0, 2.0 * math.pi))
    @settings(max_examples=60)
    def test_rotation_invariance(self, a, z, t):
        u = complex(math.cos(t), math.sin(t))
        rotated = rho(
            DiskPoint.from_complex(u * a.z), DiskPoint.from_complex(u * z.z)
        )
        assert rotated == pytest.approx(rho(a, z), abs=1e-12)

    @given(disk_points(0.99), disk_points(0.99))
    def test_one_minus_rho_sq_identity(self, a, z):
        lhs = 1.0 - rho(a, z) ** 2
        rhs = (
            float(one_minus_abs_sq([a.z])[0])
            * float(one_minus_abs_sq([z.z])[0])
            / abs(1.0 - a.z.conjugate() * z.z) ** 2
        )
        assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_pairwise_matches_scalar(self):
        a = [0.1 + 0.2j, -0.5j]
        z = [0.3, 0.7j, -0.2 - 0.2j]
        mat = pairwise_rho(a, z)
        assert mat.shape == (2, 3)
        for j, aw in enumerate(a):
            for k, zw in enumerate(z):
                assert mat[j, k] == pytest.approx(rho(aw, zw), abs=1e-15)


class TestBeta:
    def test_atanh_of_rho(self):
        assert beta(0, 0.5) == pytest.approx(math.atanh(0.5))

    @given(disk_points(0.99), disk_points(0.99))
    def test_dominates_rho(self, a, z):
        assert beta(a, z) >= rho(a, z) - 1e-15


class TestMobius:
    def test_swaps_center_and_origin(self):
        a = DiskPoint(0.4, -0.3)
        assert complex(mobius(a, 0)) == pytest.approx(a.z)
        assert complex(mobius(a, a)) == pytest.approx(0.0)

    @given(disk_points(0.99), disk_points(0.99))
    @settings(max_examples=60)
    def test_involution(self, a, z):
        assert complex(mobius(a, mobius(a, z))) == pytest.approx(z.z, abs=1e-10)


class TestCancellationSafety:
    def test_one_minus_abs_sq_near_boundary(self):
        # naive 1 - |z|^2 loses half the digits here; the factored form keeps them
        gap = 1e-12
        z = (1.0 - gap) * np.exp(0.7j)
        value = float(one_minus_abs_sq([z])[0])
        expected = gap * (2.0 - gap)
        assert value == pytest.approx(expected, rel=1e-12)


class TestPseudoDiskConversion:
    def test_known_disk(self):
        disk = pseudo_disk_to_euclidean(DiskPoint(0.5, 0.0), 0.5)
        assert disk.center == pytest.approx(0.4)
        assert disk.radius == pytest.approx(0.4)

    def test_centered_at_origin(self):
        disk = pseudo_disk_to_euclidean(DiskPoint(0.0, 0.0), 0.3)
        assert disk.center == 0.0
        assert disk.radius == pytest.approx(0.3)

    def test_rejects_bad_radius(self):
        with pytest.raises(ValueError):
            pseudo_disk_to_euclidean(DiskPoint(0.1, 0.0), 0.0)
        with pytest.raises(ValueError):
            pseudo_disk_to_euclidean(DiskPoint(0.1, 0.0), 1.0)

    @given(disk_points(0.95), st.floats(0.05, 0.95))
    @settings(max_examples=80)
    def test_boundary_has_constant_rho(self, c, r):
        disk = pseudo_disk_to_euclidean(c, r)
        for w in disk.boundary_points(16):
            assert rho(c, w) == pytest.approx(r, abs=1e-10)

    @given(disk_points(0.95), st.floats(0.05, 0.95))
    @settings(max_examples=80)
    def test_stays_inside_unit_disk(self, c, r):
        disk = pseudo_disk_to_euclidean(c, r)
        assert abs(disk.center) + disk.radius <= 1.0 + 1e-12

    def test_rotation_equivariance(self):
        c = DiskPoint(0.3, 0.4)
        disk = pseudo_disk_to_euclidean(c, 0.6)
        m = abs(c.z)
        axis = pseudo_disk_to_euclidean(DiskPoint(m, 0.0), 0.6)
        assert disk.radius == pytest.approx(axis.radius, abs=1e-14)
        assert abs(disk.center) == pytest.approx(axis.center.real, abs=1e-14)
        assert disk.center / abs(disk.center) == pytest.approx(c.z / m)


class TestEuclideanDisk:
    def test_contains(self):
        disk = EuclideanDisk(center=0.2, radius=0.3)
        assert disk.contains(0.4)
        assert not disk.contains(0.6)

    def test_rejects_disk_leaving_unit_disk(self):
        with pytest.raises(ValueError):
            EuclideanDisk(center=0.8, radius=0.3)
        with pytest.raises(ValueError):
            EuclideanDisk(center=0.0, radius=-0.1)


class TestKernelBounds:
    def test_origin_pair_all_slack(self):
        report = kernel_bounds_check([0.0], [0.0], 1.0)
        assert report.min_slack() >= 0.0
        assert report.s == pytest.approx(math.tanh(1.0))

    def test_spec_pair(self):
        r = beta(0.5, 0.6)
        report = kernel_bounds_check([0.5], [0.6], r)
        assert report.min_slack() >= -1e-12
        assert report.witness == (0, 0)

    def test_rejects_distant_pair(self):
        with pytest.raises(ValueError):
            kernel_bounds_check([0.0], [0.9], beta(0.0, 0.5))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            kernel_bounds_check([], [0.1], 1.0)

    def test_monte_carlo_paired_samples(self):
        for seed in range(40):
            a_seq = random_separated(seed, 6, min_rho=0.3, rmax=0.8)
            paired = perturb_sample(a_seq, 0.2, seed, min_sep=0.05)
            rho_max = float(
                np.max(pairwise_rho(paired.A.values, paired.Z.values))
            )
            r = math.atanh(min(rho_max, 1.0 - 1e-12)) + 1e-9
            report = kernel_bounds_check(paired.A, paired.Z, r)
            assert report.min_slack() >= -1e-12
