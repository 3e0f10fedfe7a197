import numpy as np
import pytest

from kohnspec import (
    DenseSymmetric,
    NoConvergence,
    SectorRegion,
    SymTridiagonal,
    Tridiagonal,
    char_poly_tridiagonal,
    eig_dense_symmetric,
    eig_general_tridiagonal,
    eig_periodic_sym_tridiagonal,
    point_in_sector,
    sector_exclusion_certificate,
    sturm_count,
)
from kohnspec.eigen import eig_sym_tridiagonal
from kohnspec.whittakerhill import ince_matrix


def charpoly_bisection_roots(a, samples=20000):
    """Oracle: roots of det(A - x I) by sign-change bisection.

    Uses LU determinants and plain bisection, sharing nothing with the
    Householder + QL path it checks.  Assumes simple eigenvalues.
    """
    radius = np.max(np.sum(np.abs(a), axis=1))
    xs = np.linspace(-radius, radius, samples)
    dets = np.array([np.linalg.det(a - x * np.eye(len(a))) for x in xs])
    roots = []
    for i in range(len(xs) - 1):
        if dets[i] == 0.0:
            roots.append(xs[i])
        elif dets[i] * dets[i + 1] < 0.0:
            lo, hi = xs[i], xs[i + 1]
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                dm = np.linalg.det(a - mid * np.eye(len(a)))
                if dm == 0.0:
                    lo = hi = mid
                    break
                if np.sign(dm) == np.sign(np.linalg.det(a - lo * np.eye(len(a)))):
                    lo = mid
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
    return np.array(roots)


class TestDenseSymmetric:
    def test_identity(self):
        np.testing.assert_allclose(eig_dense_symmetric(np.eye(3)), [1, 1, 1])

    def test_two_by_two(self):
        np.testing.assert_allclose(eig_dense_symmetric(np.array([[2.0, 1], [1, 2]])),
                                   [1.0, 3.0], atol=1e-14)

    def test_random_vs_charpoly_oracle(self):
        rng = np.random.default_rng(42)
        a = rng.standard_normal((6, 6))
        a = a + a.T
        mine = eig_dense_symmetric(a)
        oracle = charpoly_bisection_roots(a)
        assert len(oracle) == 6
        np.testing.assert_allclose(mine, oracle, atol=1e-9)

    def test_ascending_and_trace(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((40, 40))
        a = a + a.T
        vals = eig_dense_symmetric(a)
        assert np.all(np.diff(vals) >= 0)
        assert vals.sum() == pytest.approx(np.trace(a), rel=1e-9)

    def test_first_k(self):
        vals = eig_dense_symmetric(np.diag([3.0, 1.0, 2.0]), k=2)
        np.testing.assert_allclose(vals, [1.0, 2.0])

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            DenseSymmetric(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_no_convergence_raised(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((8, 8))
        a = a + a.T
        with pytest.raises(NoConvergence):
            eig_dense_symmetric(a, max_sweeps=0)

    def test_matches_ql_on_tridiagonal_input(self):
        rng = np.random.default_rng(11)
        tri = SymTridiagonal(rng.standard_normal(30), rng.standard_normal(29))
        np.testing.assert_allclose(eig_dense_symmetric(tri.to_dense()),
                                   eig_sym_tridiagonal(tri), atol=1e-10)

    def test_sturm_counts_agree(self):
        rng = np.random.default_rng(12)
        tri = SymTridiagonal(rng.standard_normal(25), rng.standard_normal(24))
        vals = eig_sym_tridiagonal(tri)
        scale = np.max(np.abs(vals))
        for i, lam in enumerate(vals):
            assert sturm_count(tri, lam - 1e-9 * scale) == i
            assert sturm_count(tri, lam + 1e-9 * scale) >= i + 1


class TestPeriodicTridiagonal:
    def test_against_dense_path(self):
        rng = np.random.default_rng(17)
        n = 60
        d = rng.uniform(1.0, 5.0, n)
        e = rng.standard_normal(n - 1)
        corner = 0.7
        dense = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        dense[0, -1] += corner
        dense[-1, 0] += corner
        ref = eig_dense_symmetric(dense, k=5)
        mine = eig_periodic_sym_tridiagonal(d, e, corner, k=5)
        np.testing.assert_allclose(mine, ref, atol=1e-9)

    def test_handles_degenerate_pairs(self):
        # free periodic second difference has doubly degenerate eigenvalues
        n = 64
        d = np.full(n, 2.0)
        e = np.full(n - 1, -1.0)
        vals = eig_periodic_sym_tridiagonal(d, e, -1.0, k=5)
        expected = 4 * np.sin(np.pi * np.array([0, 1, 1, 2, 2]) / n) ** 2
        np.testing.assert_allclose(vals, expected, atol=1e-10)


class TestGeneralTridiagonal:
    def test_diagonal_only(self):
        tri = Tridiagonal([1.0, 4.0, 9.0, 16.0], np.zeros(3), np.zeros(3))
        np.testing.assert_allclose(eig_general_tridiagonal(tri).real, [1, 4, 9, 16])

    def test_truncation_order_two_real(self):
        vals = eig_general_tridiagonal(ince_matrix(1.0, 2))
        np.testing.assert_allclose(vals, [2.0 + 0j, 3.0 + 0j], atol=1e-12)

    def test_truncation_order_two_complex(self):
        vals = eig_general_tridiagonal(ince_matrix(2.0, 2))
        expected = np.array([2.5 - 1j * np.sqrt(23) / 2, 2.5 + 1j * np.sqrt(23) / 2])
        np.testing.assert_allclose(vals, expected, atol=1e-12)

    def test_conjugate_pairs(self):
        rng = np.random.default_rng(23)
        tri = Tridiagonal(rng.uniform(0, 3, 20), rng.uniform(0.1, 2, 19),
                          -rng.uniform(0.1, 2, 19))
        vals = eig_general_tridiagonal(tri)
        complex_vals = vals[np.abs(vals.imag) > 1e-10]
        assert len(complex_vals) % 2 == 0
        paired = np.sort_complex(complex_vals)
        np.testing.assert_allclose(paired, np.sort_complex(paired.conj()), atol=1e-9)

    def test_diagonal_similarity_invariance(self):
        rng = np.random.default_rng(29)
        n = 15
        diag = rng.standard_normal(n)
        up = rng.standard_normal(n - 1)
        lo = rng.standard_normal(n - 1)
        scale = rng.uniform(0.5, 2.0, n)
        tri = Tridiagonal(diag, up, lo)
        similar = Tridiagonal(diag, up * scale[:-1] / scale[1:], lo * scale[1:] / scale[:-1])
        a = eig_general_tridiagonal(tri)
        b = eig_general_tridiagonal(similar)
        np.testing.assert_allclose(a, b, atol=1e-9)

    def test_char_poly_vanishes_at_eigenvalues(self):
        rng = np.random.default_rng(31)
        tri = Tridiagonal(rng.uniform(0.5, 4.0, 12), rng.standard_normal(11),
                          rng.standard_normal(11))
        scale = np.prod(np.maximum(1.0, np.abs(tri.diag)))
        for z in eig_general_tridiagonal(tri):
            assert abs(char_poly_tridiagonal(tri, z)) < 1e-6 * scale


class TestCharPoly:
    def test_two_by_two_at_zero(self):
        assert char_poly_tridiagonal(ince_matrix(1.0, 2), 0.0) == pytest.approx(6.0)

    def test_diag_root(self):
        tri = Tridiagonal([2.0, 5.0], [0.0], [0.0])
        assert char_poly_tridiagonal(tri, 2.0) == 0.0

    def test_matches_determinant(self):
        rng = np.random.default_rng(37)
        tri = Tridiagonal(rng.standard_normal(7), rng.standard_normal(6),
                          rng.standard_normal(6))
        for z in (0.0, 1.3, -0.7 + 0.4j):
            det = np.linalg.det(tri.to_dense() - z * np.eye(7))
            assert char_poly_tridiagonal(tri, z) == pytest.approx(det, rel=1e-10)


class TestSectorCertificate:
    def test_ince_truncations_pass(self):
        for N in (2, 4, 20, 60, 200):
            cert = sector_exclusion_certificate(ince_matrix(3.0, N), 3 / np.pi)
            assert cert.hypotheses_ok, cert.failures
            assert cert.region.mu == 1.0
            # sum k^-2 < pi^2/6 keeps the admissible delta above 3/pi for all N

    def test_positive_offdiagonal_product_fails(self):
        tri = Tridiagonal([1.0, 2.0], [1.0], [1.0])
        cert = sector_exclusion_certificate(tri, 0.1)
        assert not cert.hypotheses_ok

    def test_oversized_delta_fails(self):
        cert = sector_exclusion_certificate(ince_matrix(1.0, 10), 10.0)
        assert not cert.hypotheses_ok

    def test_nonpositive_diagonal_fails(self):
        tri = Tridiagonal([1.0, -2.0], [1.0], [-1.0])
        cert = sector_exclusion_certificate(tri, 0.1)
        assert not cert.hypotheses_ok

    def test_point_membership(self):
        region = SectorRegion(mu=1.0, delta=3 / np.pi)
        assert point_in_sector(0.5, region)
        assert not point_in_sector(1.0, region)
        assert not point_in_sector(2.5 + 1j * np.sqrt(23) / 2, region)
        assert not point_in_sector(0.5 + 0.5j, region)  # above the slanted edge

    def test_certified_spectra_avoid_sector(self):
        for a in (0.0, 0.5, 2.0, 7.0):
            tri = ince_matrix(a, 40)
            cert = sector_exclusion_certificate(tri, 3 / np.pi)
            assert cert.hypotheses_ok
            for z in eig_general_tridiagonal(tri):
                assert not point_in_sector(z, cert.region)
