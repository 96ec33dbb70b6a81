"""
Testes da ponte bola/intervalo: integrais zonais, Schläfli e transferência em d = 1.
"""

import math

import numpy as np
import pytest
from scipy import special

from app.errors import DomainError, UnsupportedCaseError
from app.services.spectrum import get_basis
from app.services.transference import (
    ball_radial_coefficient,
    dirichlet_interval_kernel,
    dirichlet_interval_tail_bound,
    gaussian_sphere_closed,
    interval_transference_check,
    schlafli_integral,
    sphere_area,
    zonal_integral,
)


class TestSphere:
    """Testes de áreas e integrais zonais."""

    @pytest.mark.parametrize("d,expected", [(1, 2.0), (2, 2.0 * math.pi), (3, 4.0 * math.pi)])
    def test_area(self, d, expected):
        """σ(S⁰) = 2, σ(S¹) = 2π, σ(S²) = 4π."""
        assert sphere_area(d) == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("d", [1, 2, 3, 5])
    def test_zonal_constant(self, d):
        """∫ 1 dσ = σ(S^{d−1})."""
        assert zonal_integral(d, np.ones_like) == pytest.approx(sphere_area(d), rel=1e-12)

    @pytest.mark.parametrize("d", [1, 2, 3, 5])
    @pytest.mark.parametrize("x,y,t", [(0.3, 0.6, 0.1), (0.9, 0.8, 0.01), (0.5, 0.5, 1.0)])
    def test_gaussian_identity(self, d, x, y, t):
        """Quadratura zonal da gaussiana contra a forma com I_{d/2−1}."""
        c = 2.0

        def profile(u: np.ndarray) -> np.ndarray:
            return np.exp(-(x * x + y * y - 2.0 * x * y * u) / (c * t))

        assert zonal_integral(d, profile) == pytest.approx(gaussian_sphere_closed(d, x, y, t, c), rel=1e-10)

    def test_gaussian_at_center(self):
        """x = 0: σ(S²) e^{−y²/(ct)} sem 0·∞."""
        value = gaussian_sphere_closed(3, 0.0, 0.5, 0.1, 1.0)
        assert value == pytest.approx(4.0 * math.pi * math.exp(-2.5), rel=1e-12)

    def test_dimension_domain(self):
        """d ≥ 1."""
        with pytest.raises(DomainError):
            sphere_area(0)
        with pytest.raises(DomainError):
            zonal_integral(0, np.ones_like)


class TestSchlafli:
    """Testes da representação integral de I_ν."""

    @pytest.mark.parametrize("nu", [0.0, 0.5, 1.3, 3.0])
    @pytest.mark.parametrize("z", [0.5, 5.0, 40.0])
    def test_matches_scipy(self, nu, z):
        """Gauss–Jacobi contra scipy.special.iv."""
        assert schlafli_integral(nu, z) == pytest.approx(special.iv(nu, z), rel=1e-10)

    def test_zero_argument(self):
        """I_0(0) = 1 e I_ν(0) = 0 para ν > 0."""
        assert schlafli_integral(0.0, 0.0) == 1.0
        assert schlafli_integral(1.5, 0.0) == 0.0

    def test_order_domain(self):
        """ν ≤ −1/2 fora da representação."""
        with pytest.raises(DomainError):
            schlafli_integral(-0.5, 1.0)


class TestIntervalTransference:
    """Testes da identidade exata em d = 1."""

    def test_dirichlet_kernel_vanishes_on_boundary(self):
        """𝒢_t(±1, y) = 0."""
        values = [dirichlet_interval_kernel(0.2, edge, 0.3)[0] for edge in (-1.0, 1.0)]
        assert np.allclose(values, 0.0, atol=1e-12)

    def test_dirichlet_kernel_is_vectorized(self):
        """Um valor por tempo."""
        values = dirichlet_interval_kernel(np.array([0.01, 0.1, 1.0]), 0.2, 0.4)
        assert values.shape == (3,)
        assert np.all(values > 0)

    def test_tail_bound_covers_truncation(self):
        """Cortar em J = 1 muda o valor menos que a cota das imagens omitidas."""
        coarse = dirichlet_interval_kernel(1.0, 0.2, 0.4, image_count=1)[0]
        fine = dirichlet_interval_kernel(1.0, 0.2, 0.4)[0]
        bound = dirichlet_interval_tail_bound(1.0, image_count=1)
        assert 0.0 < abs(coarse - fine) <= bound

    def test_default_tail_is_negligible(self):
        """Com o J padrão a cota fica abaixo de 1e−15."""
        assert dirichlet_interval_tail_bound(0.1) < 1e-15
        assert dirichlet_interval_tail_bound(4.0) < 1e-15

    def test_explicit_zero_images_rejected(self):
        """image_count = 0 não vira o padrão."""
        with pytest.raises(DomainError):
            dirichlet_interval_kernel(0.1, 0.2, 0.4, image_count=0)
        with pytest.raises(DomainError):
            dirichlet_interval_tail_bound(0.1, image_count=0)

    def test_identity_reports_image_tail(self):
        """α = 2 devolve a cota das imagens; α = 1 não."""
        assert interval_transference_check(2.0, 0.1, 0.3, 0.6).tail_estimate < 1e-15
        assert interval_transference_check(1.0, 0.1, 0.3, 0.6).tail_estimate is None

    @pytest.mark.parametrize("alpha", [1.0, 2.0])
    @pytest.mark.parametrize("t,x,y", [(0.1, 0.3, 0.6), (0.02, 0.5, 0.55), (1.0, 0.1, 0.9)])
    def test_identity(self, alpha, t, x, y):
        """G^{−1/2,α} = soma em S⁰ do núcleo de (−1, 1)."""
        result = interval_transference_check(alpha, t, x, y)
        assert result.rel_err < 1e-8
        assert result.lhs == pytest.approx(result.rhs, rel=1e-8)

    def test_higher_dimensions_unsupported(self):
        """d ≥ 2 não tem checagem independente."""
        with pytest.raises(UnsupportedCaseError):
            interval_transference_check(2.0, 0.1, 0.3, 0.6, d=3)

    def test_fractional_alpha_unsupported(self):
        """α ∉ {1, 2} é recusado."""
        with pytest.raises(UnsupportedCaseError):
            interval_transference_check(1.5, 0.1, 0.3, 0.6)


class TestRadialCoefficients:
    """Testes dos coeficientes de funções radiais na bola."""

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_eigenfunction_coefficients(self, d):
        """f = φ_1^{d/2−1}: coeficiente √σ(S^{d−1}) em n = 1 e zero em n = 2."""
        phi_1 = get_basis(0.5 * d - 1.0, 2).eigenfunction(1)
        assert ball_radial_coefficient(d, phi_1, 1) == pytest.approx(math.sqrt(sphere_area(d)), rel=1e-10)
        assert ball_radial_coefficient(d, phi_1, 2) == pytest.approx(0.0, abs=1e-10)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
