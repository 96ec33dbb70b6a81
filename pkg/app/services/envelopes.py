"""
Envoltórias dos núcleos: expressões fechadas comparáveis a G_t^{ν,α}.

- intervalo (0, 1): calor (α = 2, com constante gaussiana c) e subordinado (α < 2)
- tempos longos: (1−x)(1−y) e^{−t λ_1^α}
- bola B^d: formas radiais e a cota gaussiana grosseira
- lema da integral paramétrica ∫(1−s²)^η / ((D−Bs)(A−Bs)^γ) e seus regimes
"""

import logging
import math
from typing import Optional, Union

import numpy as np

from app.config import settings
from app.errors import DomainError, UnsupportedCaseError
from app.models import EnvelopeBounds, LemmaSurvey
from app.numerics.quadrature import adaptive_gauss_legendre, geometric_edges
from app.numerics.specfun import Order, log_reduced_bessel_i
from app.services.spectrum import get_basis

# Configuração de logging
logger = logging.getLogger(__name__)


# ============== Saturações ==============

def saturate(z: float) -> float:
    """z ∧ 1."""
    return min(z, 1.0)


def rational_saturate(z: float) -> float:
    """z / (1 + z), comparável a z ∧ 1 dentro de um fator 2."""
    return z / (1.0 + z)


def _check_unit(x: float, y: float) -> None:
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise DomainError("x, y devem estar em [0, 1]", {"x": x, "y": y})


def _check_positive_time(t: float) -> None:
    if t <= 0:
        raise DomainError("t deve ser > 0", {"t": t})


def _check_c(c: Optional[float]) -> float:
    if c is None or c <= 1.0:
        raise DomainError("A constante gaussiana c deve ser > 1", {"c": c})
    return c


def _singular_factor(nu: float, xy: float, scale: float) -> float:
    """(xy)^{−ν−1/2} (xy/scale ∧ 1)^{ν+1/2}, sem o produto 0·∞ em xy = 0."""
    base = scale if xy <= scale else xy
    return base ** (-nu - 0.5)


# ============== Intervalo ==============

def heat_envelope_interval(nu: Union[Order, float], t: float, x: float, y: float,
                           c: float) -> EnvelopeBounds:
    """
    Envoltórias do núcleo de calor em (0, 1) para tempos curtos.

    (xy)^{−ν−1/2} (xy/t ∧ 1)^{ν+1/2} [(1−x)(1−y)/t ∧ 1] t^{−1/2} vezes
    e^{−c(x−y)²/t} (inferior) ou e^{−(x−y)²/(ct)} (superior).

    Args:
        nu: Índice de tipo
        t: Tempo > 0
        x: Ponto em [0, 1]
        y: Ponto em [0, 1]
        c: Constante gaussiana > 1

    Returns:
        EnvelopeBounds com constant_c = c
    """
    nu = Order.of(nu).value
    _check_positive_time(t)
    _check_unit(x, y)
    c = _check_c(c)
    base = (
        _singular_factor(nu, x * y, t)
        * saturate((1.0 - x) * (1.0 - y) / t)
        / math.sqrt(t)
    )
    gap = (x - y) ** 2 / t
    return EnvelopeBounds(
        lower=base * math.exp(-c * gap),
        upper=base * math.exp(-gap / c),
        constant_c=c,
    )


def heat_envelope_bessel_form(nu: Union[Order, float], t: float, x: float, y: float,
                              c: float) -> EnvelopeBounds:
    """
    Forma com I_ν, anterior às assintóticas:
    (xy)^{−ν} [(1−x)(1−y)/t ∧ 1] t^{−1} e^{−(x²+y²)/(c't)} I_ν(2xy/(c't)),
    com c' = c na superior e c' = 1/c na inferior.
    """
    order = Order.of(nu)
    _check_positive_time(t)
    _check_unit(x, y)
    c = _check_c(c)
    boundary = saturate((1.0 - x) * (1.0 - y) / t)
    if boundary == 0.0:
        return EnvelopeBounds(lower=0.0, upper=0.0, constant_c=c)

    def evaluate(scale: float) -> float:
        ct = scale * t
        # (xy)^{−ν} I_ν(z) = (2/(c't))^ν z^{−ν} I_ν(z)
        log_value = (
            order.value * math.log(2.0 / ct)
            + float(log_reduced_bessel_i(order, np.array([2.0 * x * y / ct]))[0])
            - math.log(t)
            - (x * x + y * y) / ct
            + math.log(boundary)
        )
        return math.exp(log_value)

    return EnvelopeBounds(lower=evaluate(1.0 / c), upper=evaluate(c), constant_c=c)


def _check_subordination_index(alpha: float) -> None:
    if alpha == 2.0:
        raise DomainError(
            "α = 2 não é subordinado; use heat_envelope_interval",
            {"alpha": alpha},
        )
    if not 0.0 < alpha < 2.0:
        raise DomainError("α deve estar em (0, 2)", {"alpha": alpha})


def subordinated_envelope_interval(nu: Union[Order, float], alpha: float, t: float,
                                   x: float, y: float) -> float:
    """
    Expressão comparável ao núcleo subordinado (0 < α < 2), sem constante gaussiana.

    Com r = t^{2/α} + (x−y)²:
    (xy)^{−ν−1/2} (xy/r ∧ 1)^{ν+1/2} [(1−x)(1−y)/r ∧ 1] t / r^{(α+1)/2}.
    """
    nu = Order.of(nu).value
    _check_subordination_index(alpha)
    _check_positive_time(t)
    _check_unit(x, y)
    r = t ** (2.0 / alpha) + (x - y) ** 2
    return (
        _singular_factor(nu, x * y, r)
        * saturate((1.0 - x) * (1.0 - y) / r)
        * t / r ** (0.5 * (alpha + 1.0))
    )


def subordinated_envelope_rational_form(nu: Union[Order, float], alpha: float, t: float,
                                        x: float, y: float) -> float:
    """Mesma expressão com as saturações trocadas por z/(1+z)."""
    nu = Order.of(nu).value
    _check_subordination_index(alpha)
    _check_positive_time(t)
    _check_unit(x, y)
    r = t ** (2.0 / alpha) + (x - y) ** 2
    # (xy)^{−ν−1/2} (xy/r / (1 + xy/r))^{ν+1/2} = (r + xy)^{−ν−1/2}
    return (
        (r + x * y) ** (-nu - 0.5)
        * rational_saturate((1.0 - x) * (1.0 - y) / r)
        * t / r ** (0.5 * (alpha + 1.0))
    )


def longtime_envelope(nu: Union[Order, float], alpha: float, t: float, x: float, y: float) -> float:
    """(1−x)(1−y) e^{−t λ_{1,ν}^α}, calculada em escala logarítmica."""
    order = Order.of(nu)
    _check_positive_time(t)
    _check_unit(x, y)
    if not 0.0 < alpha <= 2.0:
        raise DomainError("α deve estar em (0, 2]", {"alpha": alpha})
    boundary = (1.0 - x) * (1.0 - y)
    if boundary == 0.0:
        return 0.0
    first = float(get_basis(order, 1).zeros[0])
    return math.exp(math.log(boundary) - t * first ** alpha)


# ============== Bola ==============

def _check_geometry(d: int, rx: float, ry: float, dist: float) -> None:
    if d < 1:
        raise DomainError("d deve ser ≥ 1", {"d": d})
    if not (0.0 <= rx <= 1.0 and 0.0 <= ry <= 1.0):
        raise DomainError("|x| e |y| devem estar em [0, 1]", {"rx": rx, "ry": ry})
    slack = 1e-12 * (1.0 + rx + ry)
    if dist < abs(rx - ry) - slack or dist > rx + ry + slack:
        raise DomainError(
            "Geometria inconsistente: |x−y| viola a desigualdade triangular",
            {"rx": rx, "ry": ry, "dist": dist},
        )
    if d == 1 and not (math.isclose(dist, abs(rx - ry), abs_tol=slack)
                       or math.isclose(dist, rx + ry, abs_tol=slack)):
        raise DomainError(
            "Em d = 1, |x−y| é ||x| − |y|| ou |x| + |y|",
            {"rx": rx, "ry": ry, "dist": dist},
        )


def ball_envelopes(d: int, alpha: float, t: float, rx: float, ry: float, dist: float,
                   c: Optional[float] = None) -> EnvelopeBounds:
    """
    Envoltórias radiais na bola B^d.

    α = 2: [(1−|x|)(1−|y|)/t ∧ 1] t^{−d/2} com e^{−c|x−y|²/t} e e^{−|x−y|²/(ct)}.
    α < 2: expressão única [(1−|x|)(1−|y|)/r ∧ 1] t / r^{(d+α)/2}, r = t^{2/α} + |x−y|².

    Args:
        d: Dimensão ≥ 1
        alpha: Índice de subordinação
        t: Tempo > 0
        rx: |x|
        ry: |y|
        dist: |x − y|
        c: Constante gaussiana (obrigatória para α = 2)

    Returns:
        EnvelopeBounds; para α < 2, lower = upper e constant_c ausente
    """
    _check_geometry(d, rx, ry, dist)
    _check_positive_time(t)
    boundary = (1.0 - rx) * (1.0 - ry)
    if alpha == 2.0:
        c = _check_c(c)
        base = saturate(boundary / t) * t ** (-0.5 * d)
        gap = dist * dist / t
        return EnvelopeBounds(lower=base * math.exp(-c * gap), upper=base * math.exp(-gap / c), constant_c=c)
    _check_subordination_index(alpha)
    r = t ** (2.0 / alpha) + dist * dist
    value = saturate(boundary / r) * t / r ** (0.5 * (d + alpha))
    return EnvelopeBounds(lower=value, upper=value, constant_c=None)


def rough_gaussian_bound(d: int, t: float, dist: float) -> float:
    """(4πt)^{−d/2} e^{−|x−y|²/(4t)}: o núcleo de calor livre em ℝ^d."""
    if d < 1:
        raise DomainError("d deve ser ≥ 1", {"d": d})
    _check_positive_time(t)
    return (4.0 * math.pi * t) ** (-0.5 * d) * math.exp(-dist * dist / (4.0 * t))


# ============== Integral paramétrica ==============

def _check_lemma(gamma: float, eta: float, a: float, b: float, d: float) -> None:
    if not gamma > eta + 1.0 > 0.0:
        raise DomainError("Exige γ > η + 1 > 0", {"gamma": gamma, "eta": eta})
    if not 0.0 < b < a < d:
        raise DomainError("Exige 0 < B < A < D", {"A": a, "B": b, "D": d})


def lemma_int_estimate(gamma: float, eta: float, a: float, b: float, d: float) -> float:
    """1 / ((D−B) A^{η+1} (A−B)^{γ−η−1})."""
    _check_lemma(gamma, eta, a, b, d)
    return math.exp(
        -math.log(d - b)
        - (eta + 1.0) * math.log(a)
        - (gamma - eta - 1.0) * math.log(a - b)
    )


def lemma_int_quadrature(gamma: float, eta: float, a: float, b: float, d: float) -> float:
    """
    ∫_{−1}^{1} (1−s²)^η ds / ((D−Bs)(A−Bs)^γ) por quadratura adaptativa.

    Em cada metade, s = ±(1 − u^k) com k(η+1) ≥ 2 remove a singularidade do peso;
    os painéis em u são geométricos em direção a u = 0, onde mora o pico de
    largura ((A−B)/B)^{1/k} quando A ≈ B.
    """
    _check_lemma(gamma, eta, a, b, d)
    k = max(2, math.ceil(2.0 / (eta + 1.0)))
    width = (a - b) / b
    levels = max(8, math.ceil(-math.log2(min(width, 1.0)) / k) + 10)
    edges = geometric_edges(0.0, 1.0, levels)

    def half(sign: float):
        def integrand(u: np.ndarray) -> np.ndarray:
            uk = u ** k
            s = sign * (1.0 - uk)
            jacobian = k * u ** (k - 1)
            weight = np.power(uk * (2.0 - uk), eta)
            return jacobian * weight / ((d - b * s) * np.power(a - b * s, gamma))
        return integrand

    right = adaptive_gauss_legendre(half(1.0), edges, rtol=settings.QUAD_RTOL)
    left = adaptive_gauss_legendre(half(-1.0), edges, rtol=settings.QUAD_RTOL)
    return right.value + left.value


def sample_lemma_parameters(case: int, rng: np.random.Generator) -> tuple[float, float, float, float, float]:
    """
    Sorteia (γ, η, A, B, D) admissíveis dentro de um regime.

    1: D > A ≥ 2B; 2: D ≥ 2B > A > B; 3: 2B > D > A > B.
    """
    eta = rng.uniform(-0.5, 2.0)
    gamma = eta + 1.0 + rng.uniform(0.25, 3.0)
    b = 10.0 ** rng.uniform(-2.0, 2.0)
    if case == 1:
        a = 2.0 * b * 10.0 ** rng.uniform(0.0, 3.0)
        d = a * (1.0 + 10.0 ** rng.uniform(-4.0, 3.0))
    elif case == 2:
        a = b * (1.0 + 10.0 ** rng.uniform(-4.0, 0.0))
        d = 2.0 * b * 10.0 ** rng.uniform(0.0, 3.0)
    elif case == 3:
        a = b * (1.0 + 10.0 ** rng.uniform(-4.0, 0.0))
        d = a + (2.0 * b - a) * 10.0 ** rng.uniform(-4.0, 0.0)
    else:
        raise DomainError("Regime deve ser 1, 2 ou 3", {"case": case})
    return gamma, eta, a, b, d


def lemma_ratio_survey(case: int, draws: int = 1000, seed: int = 0) -> LemmaSurvey:
    """
    Faixa da razão quadratura/estimativa sobre sorteios de um regime.

    Args:
        case: Regime 1, 2 ou 3
        draws: Número de sorteios
        seed: Semente do gerador

    Returns:
        LemmaSurvey com mínimo, máximo e spread
    """
    if draws < 1:
        raise DomainError("draws deve ser ≥ 1", {"draws": draws})
    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(draws):
        params = sample_lemma_parameters(case, rng)
        ratios.append(lemma_int_quadrature(*params) / lemma_int_estimate(*params))
    low, high = min(ratios), max(ratios)
    logger.info(f"Regime {case}: razão em [{low:.4g}, {high:.4g}] com {draws} sorteios")
    return LemmaSurvey(case=case, draws=draws, min_ratio=low, max_ratio=high, spread=high / low)
