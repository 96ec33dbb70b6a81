"""
Testes das funções especiais.
Compara Gamma, J_ν e I_ν com scipy.special como oráculo independente.
"""

import math

import numpy as np
import pytest
from scipy import special

from app.errors import DomainError
from app.numerics.specfun import (
    Order,
    bessel_i,
    bessel_i_scaled,
    bessel_j,
    bessel_j_half_integer,
    bessel_j_values,
    gamma,
    log_bessel_i,
    log_gamma,
    log_reduced_bessel_i,
    reduced_bessel_j,
)


# ============== Order ==============

class TestOrder:
    """Testes do índice de tipo."""

    def test_rejects_orders_at_or_below_minus_one(self):
        """ν ≤ −1 vira DomainError."""
        with pytest.raises(DomainError):
            Order.of(-1.0)

    @pytest.mark.parametrize("nu,dimension", [(-0.5, 1), (0.0, 2), (0.5, 3), (1.0, 4)])
    def test_half_integer_dimension(self, nu, dimension):
        """ν = d/2 − 1 recupera d."""
        assert Order.of(nu).dimension == dimension

    def test_general_order_has_no_dimension(self):
        """ν = 0.3 não corresponde a uma bola."""
        assert Order.of(0.3).dimension is None

    @pytest.mark.parametrize("nu,expected", [(-0.5, True), (0.5, True), (2.5, True), (0.0, False), (1.0, False)])
    def test_trigonometric_form(self, nu, expected):
        """Formas elementares só para ordens semi-inteiras ímpares."""
        assert Order.of(nu).has_trigonometric_form() is expected


# ============== Gamma ==============

class TestGamma:
    """Testes da função Gamma."""

    @pytest.mark.parametrize("x", [0.25, 0.5, 1.0, 1.5, 3.7, 10.0, 25.5])
    def test_matches_scipy(self, x):
        """Γ(x) com 12 dígitos."""
        assert gamma(x) == pytest.approx(special.gamma(x), rel=1e-12)

    @pytest.mark.parametrize("x", [-0.5, -1.5, -2.25])
    def test_reflection_for_negative_arguments(self, x):
        """Reflexão para x < 1/2."""
        assert gamma(x) == pytest.approx(special.gamma(x), rel=1e-12)

    def test_poles_raise(self):
        """Γ não existe em inteiros não positivos."""
        with pytest.raises(DomainError):
            gamma(-2.0)

    @pytest.mark.parametrize("x", [0.1, 2.0, 50.0, 300.0])
    def test_log_gamma(self, x):
        """log Γ(x) para x > 0."""
        assert log_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-12)


# ============== J_ν ==============

class TestBesselJ:
    """Testes de J_ν em todos os regimes de argumento."""

    @pytest.mark.parametrize("nu", [0.0, 0.3, 0.9, 1.0, 1.7, 3.9, 5.0])
    def test_values_across_regimes(self, nu):
        """Série, Miller e Hankel contra scipy.special.jv com erro relativo ≤ 1e−12."""
        z = np.concatenate((
            [0.01, 0.5, 0.99, 1.0, 1.5, 5.0],
            np.linspace(11.5, 14.0, 26),
            [20.0, 24.9, 25.0, 25.1, 30.0, 250.0],
        ))
        expected = special.jv(nu, z)
        got = np.array([bessel_j(nu, float(v)) for v in z])
        # longe dos zeros, onde o erro relativo faz sentido
        measured = (z < 1.0) | (np.abs(expected) > 0.02)
        rel = np.abs(got[measured] - expected[measured]) / np.abs(expected[measured])
        assert rel.max() < 1e-12

    def test_batch_path_matches_scalar(self):
        """bessel_j_values e bessel_j concordam fora das ordens semi-inteiras."""
        z = np.array([0.3, 2.0, 13.0, 26.0, 80.0])
        scalar = [bessel_j(1.3, float(v)) for v in z]
        assert np.allclose(bessel_j_values(1.3, z), scalar, rtol=1e-14, atol=0.0)

    @pytest.mark.parametrize("nu", [0.5, 1.3, 2.0, 3.7])
    def test_three_term_recurrence(self, nu):
        """J_{ν−1} + J_{ν+1} = (2ν/z) J_ν em 0.5 ≤ z ≤ 100."""
        for z in [0.5, 3.0, 11.0, 24.9, 25.1, 60.0, 100.0]:
            lower, upper, mid = bessel_j(nu - 1.0, z), bessel_j(nu + 1.0, z), bessel_j(nu, z)
            rhs = 2.0 * nu / z * mid
            scale = abs(lower) + abs(upper) + abs(rhs)
            assert abs(lower + upper - rhs) <= 1e-10 * scale

    @pytest.mark.parametrize("nu", [-0.5, 0.0, 0.8, 2.0])
    def test_derivative_identity(self, nu):
        """d/dz[z^{−ν} J_ν] = −z^{−ν} J_{ν+1}, por diferenças centrais (h = 1e−6)."""
        h = 1e-6
        for z in [0.7, 1.0, 5.0, 20.0, 25.0, 40.0]:
            plus, minus = reduced_bessel_j(nu, np.array([z + h, z - h]))
            numeric = (plus - minus) / (2.0 * h)
            exact = -bessel_j(nu + 1.0, z) / z ** nu
            assert numeric == pytest.approx(exact, abs=1e-6)

    @pytest.mark.parametrize("nu", [-0.5, 0.0, 0.3, 1.7, 5.0])
    def test_continuity_at_branch_switches(self, nu):
        """Salto < 1e−12 em z = 1 (série → Miller) e em z_c = 25 (Miller → Hankel)."""
        for edge in [1.0, 25.0]:
            before = bessel_j(nu, float(np.nextafter(edge, 0.0)))
            assert abs(bessel_j(nu, edge) - before) < 1e-12

    @pytest.mark.parametrize("nu", [-0.5, 0.0, 0.7, 3.0])
    def test_small_argument_ratio(self, nu):
        """J_ν(z) Γ(ν+1) / (z/2)^ν → 1 em z = 1e−8."""
        z = 1e-8
        assert bessel_j(nu, z) * gamma(nu + 1.0) / (0.5 * z) ** nu == pytest.approx(1.0, rel=1e-12)

    def test_negative_half_order_value(self):
        """J_{−1/2}(π/3) = √6/(2π) ≈ 0.38985."""
        expected = math.sqrt(6.0) / (2.0 * math.pi)
        assert bessel_j(-0.5, math.pi / 3.0) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(0.38985, abs=1e-5)

    def test_half_integer_matches_general_path(self):
        """J_{3/2}(5) ≈ −0.16965 pelas duas rotas."""
        closed = bessel_j_half_integer(1.5, 5.0)
        assert closed == pytest.approx(bessel_j(1.5, 5.0), rel=1e-12)
        assert closed == pytest.approx(-0.16965, abs=1e-5)

    def test_scalar_entry_point(self):
        """bessel_j devolve float."""
        assert bessel_j(0.0, 2.404825557695773) == pytest.approx(0.0, abs=1e-13)

    @pytest.mark.parametrize("nu", [-0.5, 0.5, 1.5, 3.5])
    def test_half_integer_closed_forms(self, nu):
        """Formas trigonométricas, inclusive na recorrência descendente."""
        for z in [0.3, 1.0, 2.0, 7.5, 40.0]:
            assert bessel_j_half_integer(nu, z) == pytest.approx(special.jv(nu, z), rel=1e-11, abs=1e-15)

    def test_half_integer_rejects_integer_orders(self):
        """J_0 não tem forma trigonométrica."""
        with pytest.raises(DomainError):
            bessel_j_half_integer(0.0, 1.0)

    def test_negative_half_order_is_singular_at_origin(self):
        """J_{−1/2}(0) não existe."""
        with pytest.raises(DomainError):
            bessel_j_half_integer(-0.5, 0.0)

    def test_negative_argument_raises(self):
        """Argumentos negativos estão fora do domínio."""
        with pytest.raises(DomainError):
            bessel_j_values(0.0, np.array([-1.0]))

    @pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.3])
    def test_reduced_form(self, nu):
        """z^{−ν} J_ν(z), finito em z = 0."""
        z = np.array([0.0, 1e-8, 0.7, 3.0, 20.0])
        got = reduced_bessel_j(nu, z)
        assert got[0] == pytest.approx(1.0 / (2.0 ** nu * special.gamma(nu + 1.0)), rel=1e-13)
        expected = special.jv(nu, z[1:]) / z[1:] ** nu
        assert np.allclose(got[1:], expected, rtol=1e-9)

    def test_batch_independence(self):
        """O valor de um argumento não depende dos outros do lote."""
        alone = bessel_j_values(1.3, np.array([3.0]))[0]
        batched = bessel_j_values(1.3, np.array([0.2, 3.0, 11.0, 60.0]))[1]
        assert alone == pytest.approx(batched, rel=1e-15, abs=0.0)


# ============== I_ν ==============

class TestBesselI:
    """Testes de I_ν em escala logarítmica."""

    @pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.0, 2.3])
    def test_log_values(self, nu):
        """log I_ν contra scipy (ive para argumentos grandes)."""
        z = np.array([0.1, 1.0, 10.0, 29.0, 31.0, 100.0, 1000.0])
        expected = np.log(special.ive(nu, z)) + z
        assert np.allclose(log_bessel_i(nu, z), expected, rtol=1e-10)

    def test_reduced_at_zero(self):
        """log(z^{−ν} I_ν(z)) em z = 0 vale −ν log 2 − log Γ(ν+1)."""
        nu = 0.7
        expected = -nu * math.log(2.0) - special.gammaln(nu + 1.0)
        assert log_reduced_bessel_i(nu, np.array([0.0]))[0] == pytest.approx(expected, rel=1e-13)

    def test_i0_at_two(self):
        """I_0(2) ≈ 2.2795853."""
        assert bessel_i(0.0, 2.0) == pytest.approx(special.iv(0, 2.0), rel=1e-12)

    def test_negative_half_order_value(self):
        """I_{−1/2}(1) = √(2/π) cosh 1 ≈ 1.23120."""
        expected = math.sqrt(2.0 / math.pi) * math.cosh(1.0)
        assert bessel_i(-0.5, 1.0) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(1.23120, abs=1e-5)

    def test_large_argument_asymptotics(self):
        """I_0(50) √(2π·50) e^{−50} ≈ 1 + 1/400."""
        value = bessel_i(0.0, 50.0)
        assert value * math.sqrt(100.0 * math.pi) * math.exp(-50.0) == pytest.approx(1.0, abs=3e-3)
        assert value == pytest.approx(special.iv(0, 50.0), rel=1e-11)

    @pytest.mark.parametrize("nu", [0.0, 1.5, 7.0])
    def test_continuity_at_crossover(self, nu):
        """Salto relativo < 1e−11 entre série e expansão assintótica."""
        edge = max(30.0, nu * nu)
        before = float(log_bessel_i(nu, np.array([np.nextafter(edge, 0.0)]))[0])
        after = float(log_bessel_i(nu, np.array([edge]))[0])
        assert abs(math.expm1(after - before)) < 1e-11

    def test_overflow_is_infinite(self):
        """I_ν(1000) excede o maior float."""
        assert bessel_i(0.0, 1000.0) == math.inf

    def test_scaled_representation(self):
        """Par (e^{−z} I_ν(z), z) finito para z grande."""
        scaled = bessel_i_scaled(1.0, 800.0)
        assert scaled.exponent == 800.0
        assert scaled.mantissa == pytest.approx(special.ive(1.0, 800.0), rel=1e-10)
        assert scaled.log() == pytest.approx(math.log(special.ive(1.0, 800.0)) + 800.0, rel=1e-12)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
