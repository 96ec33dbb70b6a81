"""
Funções especiais da biblioteca.

Implementa, apoiado apenas em numpy:
- Gamma e log-Gamma (aproximação de Lanczos com reflexão)
- J_ν por série de potências (z < 1), recorrência de Miller (até o crossover)
  e expansão assintótica de Hankel (z grande)
- I_ν em escala logarítmica, para não estourar nos fatores e^{z}
- formas fechadas trigonométricas de J_ν para ordens semi-inteiras ímpares

Todas as funções são puras e seguras para uso concorrente.
"""

import logging
import math
from typing import NamedTuple, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from app.config import settings
from app.errors import DomainError

# Configuração de logging
logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

_EPS = float(np.finfo(float).eps)
_SERIES_MAX_TERMS = 2000
_ASYMPTOTIC_MAX_TERMS = 80
_DOWNWARD_EXTRA = 24
_RESCALE = 1e100


# ============== Tipos ==============

class Order(BaseModel):
    """Índice de tipo ν > −1 (ordem das funções de Bessel)."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(..., gt=-1.0, description="Ordem ν, estritamente maior que −1")

    def is_half_integer(self) -> bool:
        """ν = d/2 − 1 para algum inteiro d ≥ 1, isto é, 2ν inteiro ≥ −1."""
        twice = 2.0 * self.value
        return abs(twice - round(twice)) < 1e-12 and round(twice) >= -1

    def has_trigonometric_form(self) -> bool:
        """J_ν é elementar quando ν ∈ {−1/2, 1/2, 3/2, ...}."""
        return self.is_half_integer() and round(2.0 * self.value) % 2 == 1

    @property
    def dimension(self) -> Optional[int]:
        """Dimensão d com ν = d/2 − 1, quando existe."""
        if not self.is_half_integer():
            return None
        return int(round(2.0 * self.value)) + 2

    def shifted(self, k: int = 1) -> "Order":
        return Order(value=self.value + k)

    @classmethod
    def of(cls, nu: Union[float, "Order"]) -> "Order":
        """Converte um real em Order, traduzindo erros de validação para DomainError."""
        if isinstance(nu, Order):
            return nu
        try:
            return cls(value=float(nu))
        except ValidationError as e:
            raise DomainError(f"Ordem inválida nu={nu!r}: exige nu > -1", {"nu": nu}) from e


class ScaledValue(NamedTuple):
    """Valor representado como mantissa · e^{exponent}."""

    mantissa: float
    exponent: float

    def log(self) -> float:
        return math.log(self.mantissa) + self.exponent

    def value(self) -> float:
        """Valor em ponto flutuante; inf se estourar."""
        try:
            return self.mantissa * math.exp(self.exponent)
        except OverflowError:
            return math.inf


# ============== Gamma (Lanczos) ==============

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_sum(x: float) -> float:
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (x + i)
    return acc


def gamma(x: float) -> float:
    """
    Função Gamma via Lanczos (g=7, 9 coeficientes) com reflexão para x < 1/2.

    Args:
        x: Argumento real, não inteiro não positivo

    Returns:
        Γ(x)
    """
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"Gamma não definida em {x}", {"x": x})
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    if x > 140.0:
        return math.exp(log_gamma(x))
    x -= 1.0
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * _lanczos_sum(x)


def log_gamma(x: float) -> float:
    """log Γ(x) para x > 0."""
    if x <= 0:
        raise DomainError(f"log-Gamma exige x > 0, recebido {x}", {"x": x})
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    x -= 1.0
    t = x + _LANCZOS_G + 0.5
    return 0.5 * math.log(2.0 * math.pi) + (x + 0.5) * math.log(t) - t + math.log(_lanczos_sum(x))


# ============== Núcleos vetorizados ==============

def _as_argument(z: ArrayLike) -> np.ndarray:
    arr = np.asarray(z, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("Argumento das funções de Bessel deve ser real ≥ 0", {"z": np.min(arr).item()})
    return arr


def _series_0f1(b: float, w: np.ndarray) -> np.ndarray:
    """
    Soma Σ_k w^k / (k! (b)_k), termo a termo por recorrência.

    Cada elemento para no próprio critério, então o resultado não depende
    dos demais argumentos do lote.
    """
    total = np.ones_like(w)
    term = np.ones_like(w)
    active = np.ones(w.shape, dtype=bool)
    for k in range(_SERIES_MAX_TERMS):
        term = term * w / ((k + 1.0) * (b + k))
        total = np.where(active, total + term, total)
        active &= np.abs(term) > _EPS * np.abs(total)
        if not active.any():
            break
    return total


def _asymptotic_terms(nu: float, z: np.ndarray):
    """
    Gera os termos a_k(ν)/z^k da expansão de Hankel até o menor termo.

    Yields:
        (k, termo) com o termo zerado onde a série já começou a divergir
    """
    mu = 4.0 * nu * nu
    term = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, _ASYMPTOTIC_MAX_TERMS):
        new = term * (mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        active &= np.abs(new) < np.abs(term)
        contribution = np.where(active, new, 0.0)
        yield k, contribution
        term = new
        active &= np.abs(contribution) > 1e-18
        if not active.any():
            break


def _hankel_j(nu: float, z: np.ndarray) -> np.ndarray:
    p = np.ones_like(z)
    q = np.zeros_like(z)
    for k, contribution in _asymptotic_terms(nu, z):
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * contribution
        else:
            q += sign * contribution
    chi = z - (0.5 * nu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * z)) * (p * np.cos(chi) - q * np.sin(chi))


def _j_large(nu: float, z: np.ndarray) -> np.ndarray:
    """J_ν para z acima do crossover; ordens ≥ 1 por recorrência ascendente a partir da parte fracionária."""
    if nu < 1.0:
        return _hankel_j(nu, z)
    m = int(math.floor(nu))
    mu0 = nu - m
    prev = _hankel_j(mu0, z)
    cur = _hankel_j(mu0 + 1.0, z)
    # estável: ν ≤ z/2 no regime assintótico
    for k in range(1, m):
        prev, cur = cur, (2.0 * (mu0 + k) / z) * cur - prev
    return cur


def _j_crossover(nu: float) -> float:
    return max(settings.BESSEL_J_CROSSOVER, 2.0 * abs(nu))


def _i_crossover(nu: float) -> float:
    return max(settings.BESSEL_I_CROSSOVER, nu * nu)


def _j_series(nu: float, z: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        lead = np.power(0.5 * z, nu) / gamma(nu + 1.0)
    return lead * _series_0f1(nu + 1.0, -0.25 * z * z)


def _neumann_weights(mu: float, count: int) -> np.ndarray:
    """Coeficientes c_k de (z/2)^μ = Σ_k c_k J_{μ+2k}(z)."""
    weights = np.empty(count)
    weights[0] = gamma(mu + 1.0)
    for k in range(1, count):
        weights[k] = (mu + 2 * k) * math.exp(log_gamma(mu + k) - log_gamma(k + 1.0))
    return weights


def _j_miller(nu: float, z: np.ndarray) -> np.ndarray:
    """
    J_ν por recorrência descendente de Miller, normalizada pela soma de Neumann.

    Sem cancelamento catastrófico: o erro absoluto fica na ordem de eps · max|J|,
    ao contrário da série de potências perto do crossover.
    """
    if nu >= 0:
        m = int(math.floor(nu))
        mu = nu - m
    else:
        m = -1
        mu = nu + 1.0
    # ponto de partida fixo por ν: z < z_c sempre neste ramo
    top = int(_j_crossover(nu)) + max(m, 0) + 40
    top += top % 2
    weights = _neumann_weights(mu, top // 2 + 1)

    nxt = np.zeros_like(z)
    cur = np.ones_like(z)
    norm = np.zeros_like(z)
    saved = np.zeros_like(z)
    at_one = np.zeros_like(z)
    for k in range(top, -1, -1):
        # cur = f_{μ+k}
        if k % 2 == 0:
            norm += weights[k // 2] * cur
        if k == max(m, 0):
            saved = cur.copy()
        if k == 1:
            at_one = cur.copy()
        if k == 0:
            break
        cur, nxt = (2.0 * (mu + k) / z) * cur - nxt, cur
        big = np.abs(cur) > _RESCALE
        if big.any():
            for arr in (cur, nxt, norm, saved, at_one):
                arr[big] /= _RESCALE
    scale = np.power(0.5 * z, mu) / norm
    if m >= 0:
        return saved * scale
    return (2.0 * mu / z) * (cur * scale) - at_one * scale


def _j_general(nu: float, z: np.ndarray) -> np.ndarray:
    """Série de potências (z < 1), Miller (1 ≤ z < z_c) e Hankel (z ≥ z_c)."""
    out = np.empty_like(z)
    crossover = _j_crossover(nu)
    tiny = z < 1.0
    if tiny.any():
        out[tiny] = _j_series(nu, z[tiny])
    mid = (~tiny) & (z < crossover)
    if mid.any():
        out[mid] = _j_miller(nu, z[mid])
    large = z >= crossover
    if large.any():
        out[large] = _j_large(nu, z[large])
    return out


def _half_integer_downward(m: int, z: np.ndarray, j_minus: np.ndarray, j_plus: np.ndarray) -> np.ndarray:
    """Recorrência descendente de Miller normalizada pelas formas J_{±1/2}."""
    # z < ν neste ramo
    top = 2 * m + _DOWNWARD_EXTRA
    nxt = np.zeros_like(z)
    cur = np.ones_like(z)
    saved = np.zeros_like(z)
    for k in range(top, 0, -1):
        if k == m:
            saved = cur.copy()
        # cur = f_{k-1/2}, nxt = f_{k+1/2}
        cur, nxt = (2.0 * (k - 0.5) / z) * cur - nxt, cur
        big = np.abs(cur) > _RESCALE
        if big.any():
            cur[big] /= _RESCALE
            nxt[big] /= _RESCALE
            saved[big] /= _RESCALE
    # cur = f_{-1/2}, nxt = f_{1/2}
    scale = (j_plus * nxt + j_minus * cur) / (nxt * nxt + cur * cur)
    return saved * scale


def _j_trigonometric(nu: float, z: np.ndarray) -> np.ndarray:
    m = int(round(nu + 0.5))
    with np.errstate(divide="ignore", invalid="ignore"):
        root = np.sqrt(2.0 / (math.pi * z))
        j_minus = root * np.cos(z)
        j_plus = np.where(z > 0, root * np.sin(z), 0.0)
    if m == 0:
        return j_minus
    if m == 1:
        return j_plus
    out = np.zeros_like(z)
    up = z >= nu
    if up.any():
        zu = z[up]
        prev, cur = j_minus[up], j_plus[up]
        for k in range(1, m):
            prev, cur = cur, (2.0 * (k - 0.5) / zu) * cur - prev
        out[up] = cur
    down = (~up) & (z > 1e-6)
    if down.any():
        out[down] = _half_integer_downward(m, z[down], j_minus[down], j_plus[down])
    tiny = (z > 0) & (z <= 1e-6)
    if tiny.any():
        out[tiny] = _j_general(nu, z[tiny])
    return out


# ============== J_ν ==============

def bessel_j(order: Union[Order, float], z: float) -> float:
    """
    J_ν(z) pelo caminho geral: série de potências (z < 1), Miller até
    z_c = max(25, 2|ν|) e expansão de Hankel (truncada no menor termo) acima.

    Args:
        order: Ordem ν > −1
        z: Argumento real ≥ 0

    Returns:
        J_ν(z); +inf em z=0 para ν < 0
    """
    nu = Order.of(order).value
    arr = _as_argument(np.array([z], dtype=float))
    return float(_j_general(nu, arr)[0])


def bessel_j_values(order: Union[Order, float], z: ArrayLike) -> np.ndarray:
    """
    J_ν vetorizado; usa as formas trigonométricas quando ν ∈ {−1/2, 1/2, 3/2, ...}.

    Args:
        order: Ordem ν > −1
        z: Argumentos reais ≥ 0

    Returns:
        Array com J_ν(z)
    """
    order = Order.of(order)
    arr = _as_argument(z)
    flat = np.atleast_1d(arr).astype(float).ravel()
    if order.has_trigonometric_form():
        values = _j_trigonometric(order.value, flat)
    else:
        values = _j_general(order.value, flat)
    return values.reshape(np.shape(arr))


def reduced_bessel_j(order: Union[Order, float], z: ArrayLike) -> np.ndarray:
    """
    z^{−ν} J_ν(z), função inteira de z, finita em z=0 com valor 1/(2^ν Γ(ν+1)).

    Sem o fator z^{ν} a série não sofre com o produto 0·∞ perto da origem.
    """
    order = Order.of(order)
    nu = order.value
    arr = _as_argument(z)
    flat = np.atleast_1d(arr).astype(float).ravel()
    out = np.empty_like(flat)
    small = flat < 1.0
    if small.any():
        zs = flat[small]
        out[small] = _series_0f1(nu + 1.0, -0.25 * zs * zs) / (2.0 ** nu * gamma(nu + 1.0))
    large = ~small
    if large.any():
        zl = flat[large]
        if order.has_trigonometric_form():
            out[large] = _j_trigonometric(nu, zl) / np.power(zl, nu)
        else:
            out[large] = _j_general(nu, zl) / np.power(zl, nu)
    return out.reshape(np.shape(arr))


def bessel_j_half_integer(order: Union[Order, float], z: float) -> float:
    """
    Avaliação por formas fechadas de J_ν para ν ∈ {−1/2, 1/2, 3/2, ...}.

    Recorrência ascendente a partir de J_{±1/2} quando z ≥ ν e descendente
    (Miller, normalizada pelas formas fechadas) quando z < ν.

    Args:
        order: Ordem semi-inteira ímpar
        z: Argumento real ≥ 0 (> 0 para ν = −1/2)

    Returns:
        J_ν(z)
    """
    order = Order.of(order)
    if not order.has_trigonometric_form():
        raise DomainError(
            f"nu={order.value} não tem forma trigonométrica fechada",
            {"nu": order.value},
        )
    if z < 0:
        raise DomainError("Argumento deve ser ≥ 0", {"z": z})
    if z == 0:
        if order.value < 0:
            raise DomainError("J_{-1/2} é singular em z=0", {"nu": order.value, "z": z})
        return 0.0
    return float(_j_trigonometric(order.value, np.array([z], dtype=float))[0])


# ============== I_ν ==============

def _log_i_asymptotic(nu: float, z: np.ndarray) -> np.ndarray:
    s = np.ones_like(z)
    for k, contribution in _asymptotic_terms(nu, z):
        s += (-1.0 if k % 2 else 1.0) * contribution
    return z - 0.5 * np.log(2.0 * math.pi * z) + np.log(s)


def _log_reduced_i(nu: float, z: np.ndarray) -> np.ndarray:
    """log(z^{−ν} I_ν(z))."""
    out = np.empty_like(z)
    small = z < _i_crossover(nu)
    if small.any():
        zs = z[small]
        out[small] = (
            np.log(_series_0f1(nu + 1.0, 0.25 * zs * zs))
            - nu * math.log(2.0)
            - log_gamma(nu + 1.0)
        )
    large = ~small
    if large.any():
        zl = z[large]
        out[large] = _log_i_asymptotic(nu, zl) - nu * np.log(zl)
    return out


def log_bessel_i(order: Union[Order, float], z: ArrayLike) -> np.ndarray:
    """
    log I_ν(z), vetorizado; −inf em z=0 para ν > 0 e +inf para ν < 0.

    Args:
        order: Ordem ν > −1
        z: Argumentos reais ≥ 0

    Returns:
        Array com log I_ν(z)
    """
    nu = Order.of(order).value
    arr = _as_argument(z)
    flat = np.atleast_1d(arr).astype(float).ravel()
    with np.errstate(divide="ignore"):
        power = nu * np.log(flat) if nu != 0 else np.zeros_like(flat)
    out = _log_reduced_i(nu, flat) + power
    return out.reshape(np.shape(arr))


def log_reduced_bessel_i(order: Union[Order, float], z: ArrayLike) -> np.ndarray:
    """log(z^{−ν} I_ν(z)), finito em z=0 com valor −ν log 2 − log Γ(ν+1)."""
    nu = Order.of(order).value
    arr = _as_argument(z)
    flat = np.atleast_1d(arr).astype(float).ravel()
    return _log_reduced_i(nu, flat).reshape(np.shape(arr))


def bessel_i_scaled(order: Union[Order, float], z: float) -> ScaledValue:
    """I_ν(z) como par (e^{−z} I_ν(z), z), sem overflow para z grande."""
    log_value = float(log_bessel_i(order, np.array([z], dtype=float))[0])
    if math.isinf(log_value):
        return ScaledValue(mantissa=math.exp(log_value) if log_value < 0 else math.inf, exponent=0.0)
    return ScaledValue(mantissa=math.exp(log_value - z), exponent=float(z))


def bessel_i(order: Union[Order, float], z: float) -> float:
    """
    I_ν(z); retorna +inf quando o valor excede o maior float.

    Args:
        order: Ordem ν > −1
        z: Argumento real ≥ 0

    Returns:
        I_ν(z)
    """
    return bessel_i_scaled(order, z).value()
