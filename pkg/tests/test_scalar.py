"""Polynomial pipeline: para-conjugation, root clustering, the parity
split of mu, spectral factorization, and the explicit 2 x 2 extension."""
import numpy as np
import numpy.polynomial.polynomial as npp
import pytest

from darlington import (
    compute_mu,
    evaluate,
    minimize_symmetric,
    poly_para,
    poly_roots,
    scalar_minimal_extension,
    spectral_factor_poly,
)
from darlington.errors import ValidationError
from darlington.extension import innerness_residual
from darlington.realization import minimal_realization, symmetry_residual
from darlington.scalar import siso_realization

SQ3 = np.sqrt(3.0)


class TestPolyBasics:
    def test_para_of_linear(self):
        # (s + 1)* = -s + 1
        assert np.allclose(poly_para([1.0, 1.0]), [1.0, -1.0])

    def test_para_gives_modulus_on_axis(self):
        q = np.array([1.0, 1.0])
        qqs = npp.polymul(q, poly_para(q))
        val = npp.polyval(2j, qqs)
        assert abs(val - 5.0) < 1e-14  # |q(2i)|^2 = 5

    def test_roots_of_biquadratic(self):
        roots, _ = poly_roots([3.0, 0.0, -4.0, 0.0, 1.0])  # s^4 - 4 s^2 + 3
        vals = sorted(z.real for z, m in roots)
        assert np.allclose(vals, [-SQ3, -1.0, 1.0, SQ3], atol=1e-8)
        assert all(m == 1 for _, m in roots)

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ValidationError):
            poly_roots([0.0])


class TestComputeMu:
    def test_half_over_lag(self):
        fac = compute_mu([0.5], [1.0, 1.0])
        assert np.allclose(fac.mu, [0.75, 0.0, -1.0])
        assert fac.kappa == 1
        assert np.allclose(fac.r1, [1.0])
        assert np.allclose(fac.r2, [SQ3 / 2, 1.0], atol=1e-10)
        assert abs(fac.constant - 1.0) < 1e-10

    def test_perfect_square(self):
        p1 = 0.6 * np.array([1.0, -2.0, 1.0])   # 0.6 (s-1)^2
        q = np.array([1.0, 2.0, 1.0])           # (s+1)^2
        fac = compute_mu(p1, q)
        assert fac.kappa == 0
        assert np.allclose(fac.mu, [0.64, 0.0, -1.28, 0.0, 0.64], atol=1e-12)
        assert np.allclose(fac.r1, [1.0, 1.0], atol=1e-8)  # s + 1
        assert fac.r2.size == 1
        assert abs(fac.constant - 0.64) < 1e-10

    def test_two_simple_pairs(self):
        # p1 = s - 1, q = s^2 + 3 s + 2: mu = s^4 - 4 s^2 + 3
        fac = compute_mu([-1.0, 1.0], [2.0, 3.0, 1.0])
        assert np.allclose(fac.mu, [3.0, 0.0, -4.0, 0.0, 1.0], atol=1e-12)
        assert fac.kappa == 2

    def test_axis_root_does_not_count(self):
        # q = (s+1)^2, p1 = s^2 + beta s + 1 gives mu = (4 - beta^2) w^2
        # at s = i w: a double axis root at 0 and kappa = 0
        beta = 1.0
        fac = compute_mu([1.0, beta, 1.0], [1.0, 2.0, 1.0])
        assert fac.kappa == 0
        assert fac.r2_axis.size == 2  # simple axis factor s
        roots, _ = poly_roots(fac.mu)
        assert len(roots) == 1 and roots[0][1] == 2
        assert abs(roots[0][0]) < 1e-8

    def test_rejects_unstable_q(self):
        with pytest.raises(ValidationError):
            compute_mu([0.5], [-1.0, 1.0])  # root at +1

    def test_rejects_common_roots(self):
        p1 = npp.polyfromroots([-1.0]) * 0.5
        q = npp.polyfromroots([-1.0, -2.0])
        with pytest.raises(ValidationError):
            compute_mu(p1, q)

    def test_rejects_contractivity_violation(self):
        with pytest.raises(ValidationError):
            compute_mu([2.0], [1.0, 1.0])  # |2| > |i w + 1| at w = 0


class TestSpectralFactor:
    def test_simple(self):
        p2 = spectral_factor_poly([1.0, 0.0, -1.0])  # 1 - s^2
        assert np.allclose(p2.real, [1.0, 1.0], atol=1e-10)

    def test_square(self):
        m = np.array([0.64, 0.0, -1.28, 0.0, 0.64])  # 0.64 (1 - s^2)^2
        p2 = spectral_factor_poly(m)
        assert np.allclose(p2.real, [0.8, 1.6, 0.8], atol=1e-8)

    def test_shifted(self):
        p2 = spectral_factor_poly([0.75, 0.0, -1.0])  # 3/4 - s^2
        assert np.allclose(p2.real, [SQ3 / 2, 1.0], atol=1e-10)

    def test_rejects_negative(self):
        with pytest.raises(ValidationError):
            spectral_factor_poly([-1.0, 0.0, -1.0])

    def test_axis_roots_halved(self):
        # m = w^2 (1 + w^2) at s = i w: -s^2 (1 - s^2)
        m = npp.polymul([0.0, 0.0, -1.0], [1.0, 0.0, -1.0])
        p2 = spectral_factor_poly(m)
        roots, _ = poly_roots(p2)
        res = sorted((round(z.real, 6), round(z.imag, 6)) for z, _ in roots)
        assert res == [(-1.0, 0.0), (0.0, 0.0)]


class TestScalarExtension:
    def test_half_over_lag_degree_two(self):
        ext, deg = scalar_minimal_extension([0.5], [1.0, 1.0])
        assert deg == 2
        assert innerness_residual(ext) <= 1e-8
        assert symmetry_residual(ext) <= 1e-8

    def test_scaled_blaschke(self):
        # p1 = 0.9 (1 - s), q = s + 1: mu = 0.19 (1 - s^2), kappa = 1
        fac = compute_mu([0.9, -0.9], [1.0, 1.0])
        assert fac.kappa == 1
        ext, deg = scalar_minimal_extension([0.9, -0.9], [1.0, 1.0])
        assert deg == 2

    def test_axis_factor_cancels_in_degree(self):
        # double axis zero of mu at 0: the axis factor of r2 cancels and
        # the extension stays at degree deg q = 2
        ext, deg = scalar_minimal_extension([1.0, 1.0, 1.0], [1.0, 2.0, 1.0])
        assert deg == 2
        assert innerness_residual(ext) <= 1e-8

    def test_matches_matrix_pipeline(self, scalar_suite):
        for p1, q in scalar_suite[:6]:
            fac = compute_mu(p1, q)
            ext, deg = scalar_minimal_extension(p1, q)
            R, _ = minimal_realization(siso_realization(p1, q))
            res = minimize_symmetric(R)
            assert res.degree == deg
            assert res.kappa == fac.kappa
            # both lower-right blocks realize p1/q
            s = 0.7 + 0.4j
            want = npp.polyval(s, np.asarray(p1, dtype=complex)) / \
                npp.polyval(s, np.asarray(q, dtype=complex))
            assert abs(evaluate(ext, s)[1, 1] - want) < 1e-8
            assert abs(evaluate(res.extension, s)[1, 1] - want) < 1e-7
