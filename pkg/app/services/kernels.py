"""
Núcleos de Fourier-Bessel em (0, 1).

- G_t^{ν,α}(x, y) = Σ_n exp(−t λ_{n,ν}^α) φ_n^ν(x) φ_n^ν(y), somada com controle de cauda
- formas fechadas para ν = ±1/2 (Poisson, imagens gaussianas e modos trigonométricos)
- núcleo de Hankel W_t^λ do cenário contínuo em (0, ∞)
- subordinação α = 1 ← α = 2, aplicação do semigrupo, massa e composição

Truncamento: |φ_n(x)| ≤ C_ν (1 − x) n^{ν+2} com C_ν calibrada em spectrum, e a
cauda Σ_{n>N} C_ν² (1−x)(1−y) n^{2ν+4} e^{−tλ_n^α} é somada em escala logarítmica.
"""

import logging
import math
import threading
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.special import logsumexp

from app.config import settings
from app.errors import BasisCapacityError, DomainError, TimeBelowMinimumError
from app.models import KernelQuery, KernelValue
from app.numerics.quadrature import QuadratureResult, adaptive_gauss_legendre
from app.numerics.specfun import Order, log_bessel_i
from app.services.spectrum import (
    SpectralBasis,
    get_basis,
    phi_table,
    truncation_constant,
    weighted_nodes,
)

# Configuração de logging
logger = logging.getLogger(__name__)

TermSource = Callable[[int], tuple[np.ndarray, np.ndarray, np.ndarray]]

_TAIL_DROP = 46.0
_MAX_REFINEMENTS = 30
_FIRST_SEARCH = 64
_SPACING_LOWER = math.pi - 0.1
_HEAT_CHUNK = 2048
_PROJECTION_CHUNK = 64


# ============== Truncamento ==============

def minimum_time(alpha: float) -> float:
    """t_min = 1e−3 para α ≥ 1 e (1e−3)^α para α < 1."""
    floor = settings.T_MIN_FLOOR
    return floor if alpha >= 1.0 else floor ** alpha


def _check_time(alpha: float, t: float) -> None:
    t_min = minimum_time(alpha)
    if t < t_min:
        raise TimeBelowMinimumError(t=t, t_min=t_min, alpha=alpha)


def _zero_estimates(basis: SpectralBasis, n: np.ndarray) -> np.ndarray:
    """Zeros exatos dentro da base; além dela, cota inferior por espaçamento ≥ π − 0.1."""
    known = n <= basis.capacity
    out = np.empty(n.shape)
    out[known] = basis.zeros[n[known] - 1]
    last = float(basis.zeros[-1])
    out[~known] = last + _SPACING_LOWER * (n[~known] - basis.capacity)
    return out


def _log_terms(nu: float, alpha: float, t: float, log_prefactor: float, power: float,
               n: np.ndarray, lam: np.ndarray) -> np.ndarray:
    return log_prefactor + power * np.log(n) - t * lam ** alpha


def _estimate_required(nu: float, alpha: float, t: float, log_prefactor: float, power: float,
                       log_target: float) -> int:
    """Índice de truncamento aproximado (zeros ≈ π(n + ν/2 − 1/4)) para mensagens de erro."""
    n = np.unique(np.geomspace(1.0, 1e12, 2000).astype(np.int64))
    lam = math.pi * (n + 0.5 * nu - 0.25)
    logs = _log_terms(nu, alpha, t, log_prefactor, power, n.astype(float), np.maximum(lam, 1.0))
    above = np.nonzero(logs >= log_target)[0]
    return int(n[above[-1]]) if above.size else 1


def truncation_index(order: Order, alpha: float, t: float, log_prefactor: float, log_target: float,
                     power: Optional[float] = None) -> tuple[int, SpectralBasis]:
    """
    Menor N tal que todos os termos majorantes com n > N ficam abaixo do alvo.

    O majorante log = log_prefactor + power·ln n − t λ_n^α é unimodal em n, então
    basta achar o último índice acima do alvo depois do pico.

    Args:
        order: Ordem ν
        alpha: Índice de subordinação
        t: Tempo
        log_prefactor: log(C_ν²(1−x)(1−y)) ou análogo
        log_target: log do alvo por termo
        power: Expoente de n (padrão 2ν + 4)

    Returns:
        (N, base com capacidade ≥ N)

    Raises:
        BasisCapacityError: N excederia MAX_TERMS
    """
    nu = order.value
    power = 2.0 * nu + 4.0 if power is None else power
    limit = settings.MAX_TERMS
    m = min(_FIRST_SEARCH, limit)
    while True:
        basis = get_basis(order, m)
        n = np.arange(1, m + 1)
        logs = _log_terms(nu, alpha, t, log_prefactor, power, n.astype(float), basis.zeros[:m])
        above = np.nonzero(logs >= log_target)[0]
        last = int(above[-1]) + 1 if above.size else 0
        if last < m and m >= 2 and logs[-1] < logs[-2]:
            return max(last, 1), basis
        if m >= limit:
            required = _estimate_required(nu, alpha, t, log_prefactor, power, log_target)
            raise BasisCapacityError(required=max(required, limit + 1), limit=limit)
        m = min(4 * m, limit)


def _log_tail(order: Order, alpha: float, t: float, log_prefactor: float, power: float,
              basis: SpectralBasis, start: int) -> float:
    """log Σ_{n>start} do majorante, até os termos caírem e^{46} abaixo do primeiro."""
    nu = order.value
    pieces = []
    first = None
    lo = start + 1
    size = _FIRST_SEARCH
    while True:
        n = np.arange(lo, lo + size)
        logs = _log_terms(nu, alpha, t, log_prefactor, power, n.astype(float), _zero_estimates(basis, n))
        pieces.append(float(logsumexp(logs)))
        if first is None:
            first = float(logs[0])
        if logs[-1] < first - _TAIL_DROP and logs[-1] < logs[-2]:
            break
        lo += size
        size *= 2
    return float(logsumexp(pieces))


def _series(order: Order, alpha: float, t: float, x: float, y: float, tol: float,
            source: TermSource) -> KernelValue:
    """
    Soma compensada com alvo adaptativo.

    O alvo começa absoluto (escala 1) e passa a tol·max(|S|, menor normal)
    até a cauda caber na tolerância relativa.
    """
    _check_time(alpha, t)
    nu = order.value
    power = 2.0 * nu + 4.0
    log_prefactor = 2.0 * math.log(truncation_constant(order)) + math.log((1.0 - x) * (1.0 - y))
    log_target = math.log(tol)
    n_terms = 0
    for _ in range(_MAX_REFINEMENTS):
        n_terms, basis = truncation_index(order, alpha, t, log_prefactor, log_target, power)
        lam, phi_x, phi_y = source(n_terms)
        terms = np.exp(-t * lam ** alpha) * phi_x * phi_y
        value = math.fsum(terms)
        magnitude = math.fsum(np.abs(terms))
        tail = math.exp(_log_tail(order, alpha, t, log_prefactor, power, basis, n_terms))
        floor = max(abs(value), settings.KERNEL_FLOOR)
        if tail <= tol * floor:
            logger.debug(
                f"G(ν={nu:g}, α={alpha:g}, t={t:g}) com N={n_terms}, cauda {tail:.2e}"
            )
            return KernelValue(
                value=value,
                terms_used=n_terms,
                tail_estimate=tail,
                rounding_estimate=settings.TERM_RELATIVE_ACCURACY * magnitude,
            )
        log_target = min(log_target - 1.0, log_target + math.log(tol * floor) - math.log(tail) - 1.0)
    raise BasisCapacityError(required=n_terms, limit=settings.MAX_TERMS)


def _psi_scaled(result: KernelValue, nu: float, x: float, y: float) -> KernelValue:
    factor = (x * y) ** (nu + 0.5)
    return KernelValue(
        value=result.value * factor,
        terms_used=result.terms_used,
        tail_estimate=result.tail_estimate * factor,
        rounding_estimate=result.rounding_estimate * factor,
    )


# ============== Série ==============

def kernel_series(q: KernelQuery, basis: Optional[SpectralBasis] = None) -> KernelValue:
    """
    G_t^{ν,α}(x, y) pela série de autofunções com truncamento controlado.

    Args:
        q: Consulta (ν, α, t, x, y, tol, psi)
        basis: Base opcional; cresce pelo cache se for pequena

    Returns:
        KernelValue com tail_estimate ≤ tol·max(|valor|, menor normal)

    Raises:
        TimeBelowMinimumError: t < t_min(α)
        BasisCapacityError: truncamento acima de MAX_TERMS
    """
    order = q.order
    if basis is not None and basis.nu != order.value:
        raise DomainError(
            f"Base de ordem {basis.nu:g} não serve para ν={order.value:g}",
            {"basis_nu": basis.nu, "nu": order.value},
        )

    def source(count: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        b = basis if basis is not None and basis.capacity >= count else get_basis(order, count)
        table = phi_table(b, count, [q.x, q.y])
        return b.zeros[:count], table[:, 0], table[:, 1]

    result = _series(order, q.alpha, q.t, q.x, q.y, q.tol, source)
    return _psi_scaled(result, order.value, q.x, q.y) if q.psi else result


class KernelEvaluator:
    """
    Avaliador de G para um ν fixo sobre um conjunto fixo de pontos.

    Mantém uma tabela φ_n(x_j) que cresce sob demanda e é compartilhada por
    todas as avaliações (α, t) da varredura daquele ν.
    """

    def __init__(self, order: Union[Order, float], points: Sequence[float]):
        self.order = Order.of(order)
        self.points = np.asarray(list(points), dtype=float)
        self._index = {float(p): i for i, p in enumerate(self.points)}
        self._zeros = np.empty(0)
        self._table = np.empty((0, self.points.size))
        self._lock = threading.Lock()

    @property
    def rows(self) -> int:
        return self._table.shape[0]

    def _ensure(self, count: int) -> tuple[np.ndarray, np.ndarray]:
        with self._lock:
            have = self._table.shape[0]
            if have < count:
                target = max(count, 2 * have)
                basis = get_basis(self.order, target)
                extra = phi_table(basis, target, self.points, start=have)
                self._table = np.vstack((self._table, extra))
                self._zeros = np.array(basis.zeros[:target])
            return self._zeros, self._table

    def evaluate(self, q: KernelQuery) -> KernelValue:
        """G_t^{ν,α}(x, y) com x, y entre os pontos tabelados."""
        if q.nu != self.order.value:
            raise DomainError(f"Avaliador é de ν={self.order.value:g}", {"nu": q.nu})
        try:
            i, j = self._index[q.x], self._index[q.y]
        except KeyError as e:
            raise DomainError("Ponto fora da tabela do avaliador", {"x": q.x, "y": q.y}) from e

        def source(count: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
            zeros, table = self._ensure(count)
            return zeros[:count], table[:count, i], table[:count, j]

        result = _series(self.order, q.alpha, q.t, q.x, q.y, q.tol, source)
        return _psi_scaled(result, self.order.value, q.x, q.y) if q.psi else result


# ============== Formas fechadas (ν = ±1/2) ==============

def _half_order(nu_half: Union[Order, float]) -> float:
    nu = Order.of(nu_half).value
    if nu not in (-0.5, 0.5):
        raise DomainError(f"Forma fechada existe apenas para ν = ±1/2, recebido {nu:g}", {"nu": nu})
    return nu


def _check_closed_inputs(nu: float, t: float, x: float, y: float) -> None:
    if t <= 0:
        raise DomainError("t deve ser > 0", {"t": t})
    low = 0.0 if nu < 0 else np.nextafter(0.0, 1.0)
    if not (low <= x <= 1.0 and low <= y <= 1.0):
        raise DomainError("x, y fora do domínio da forma fechada", {"x": x, "y": y})


def has_closed_form(nu: float, alpha: float) -> bool:
    return nu in (-0.5, 0.5) and alpha in (1.0, 2.0)


def poisson_closed_form(nu_half: Union[Order, float], t: float, x: float, y: float) -> float:
    """
    Núcleo de Poisson (α = 1) em forma fechada para ν = ±1/2.

    Escrito com e = e^{−πt} e den(u) = (1−e)² + 4e sin²(πu/2) = 1 + e² − 2e cos πu,
    sem estouro para nenhum t.

    Args:
        nu_half: −1/2 ou 1/2
        t: Tempo > 0
        x: Ponto em (0, 1] (ou [0, 1] para ν = −1/2)
        y: Ponto em (0, 1] (ou [0, 1] para ν = −1/2)

    Returns:
        G_t^{ν,1}(x, y)
    """
    nu = _half_order(nu_half)
    _check_closed_inputs(nu, t, x, y)
    e = math.exp(-math.pi * t)
    one_minus = -math.expm1(-math.pi * t)

    def den(u: float) -> float:
        return one_minus * one_minus + 4.0 * e * math.sin(0.5 * math.pi * u) ** 2

    if nu > 0:
        # sin(πx)/x = π sinc(x)
        sines = math.pi ** 2 * float(np.sinc(x)) * float(np.sinc(y))
        return 2.0 * e * one_minus * (1.0 + e) * sines / (den(x - y) * den(x + y))
    return math.sqrt(e) * one_minus * (
        math.cos(0.5 * math.pi * (x - y)) / den(x - y)
        + math.cos(0.5 * math.pi * (x + y)) / den(x + y)
    )


def default_image_count(t: float) -> int:
    """max(8, ⌈2 + 7√t⌉) imagens de cada lado."""
    return max(8, math.ceil(2.0 + 7.0 * math.sqrt(t)))


def gaussian(z: np.ndarray, t: float) -> np.ndarray:
    """Núcleo de calor livre em ℝ: e^{−z²/(4t)} / √(4πt)."""
    return np.exp(-np.square(z) / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)


def image_tail_bound(t: float, image_count: int, period: float, families: int) -> float:
    """Cota gaussiana das imagens com |j| > image_count (argumentos ≥ período·|j| − 4)."""
    j = np.arange(image_count + 1, image_count + 41, dtype=float)
    return 2.0 * families * math.fsum(gaussian(period * j - 4.0, t))


def _heat_mode_series(nu: float, t: float, x: float, y: float) -> KernelValue:
    """
    Calor ν = ±1/2 pela série de senos/cossenos, sem o cancelamento das imagens em t grande.

    ν = 1/2: Σ 2 (nπ)² sinc(nx) sinc(ny) e^{−n²π²t}.
    ν = −1/2: Σ 2 cos(μ_n x) cos(μ_n y) e^{−μ_n² t}, μ_n = π(n − 1/2).
    """
    count = math.ceil(math.sqrt(40.0 / (math.pi ** 2 * t))) + 2
    n = np.arange(1, count + 41, dtype=float)
    if nu > 0:
        freq = math.pi * n
        terms = 2.0 * freq ** 2 * np.sinc(n * x) * np.sinc(n * y) * np.exp(-t * freq ** 2)
        bounds = 2.0 * freq ** 2 * np.exp(-t * freq ** 2)
    else:
        freq = math.pi * (n - 0.5)
        terms = 2.0 * np.cos(freq * x) * np.cos(freq * y) * np.exp(-t * freq ** 2)
        bounds = 2.0 * np.exp(-t * freq ** 2)
    kept = terms[:count]
    return KernelValue(
        value=math.fsum(kept),
        terms_used=count,
        tail_estimate=math.fsum(bounds[count:]),
        rounding_estimate=settings.TERM_RELATIVE_ACCURACY * math.fsum(np.abs(kept)),
    )


def heat_closed_form(nu_half: Union[Order, float], t: float, x: float, y: float,
                     image_count: Optional[int] = None) -> KernelValue:
    """
    Núcleo de calor (α = 2) para ν = ±1/2.

    Até HEAT_IMAGE_MAX_T usa o método das imagens:
    ν = 1/2: imagens ímpares de período 2, divididas por xy.
    ν = −1/2: imagens de período 4, pares em 0 e ímpares em 1.
    Acima disso, a série trigonométrica exata. Um image_count explícito força as imagens;
    em t grande a soma cancela e o rounding_estimate passa a cobrir |valor|.

    Args:
        nu_half: −1/2 ou 1/2
        t: Tempo > 0
        x: Primeiro ponto
        y: Segundo ponto
        image_count: Imagens de cada lado (padrão max(8, ⌈2 + 7√t⌉))

    Returns:
        KernelValue com terms_used = 2J + 1 (imagens) ou o número de modos

    Raises:
        DomainError: image_count < 1
    """
    nu = _half_order(nu_half)
    _check_closed_inputs(nu, t, x, y)
    if image_count is None and t > settings.HEAT_IMAGE_MAX_T:
        return _heat_mode_series(nu, t, x, y)
    count = image_count if image_count is not None else default_image_count(t)
    if count < 1:
        raise DomainError("image_count deve ser ≥ 1", {"image_count": count})
    j = np.arange(-count, count + 1, dtype=float)
    if nu > 0:
        terms = np.concatenate((gaussian(x - y - 2.0 * j, t), -gaussian(x + y - 2.0 * j, t)))
        scale = 1.0 / (x * y)
        tail = image_tail_bound(t, count, 2.0, 2)
    else:
        terms = np.concatenate((
            gaussian(x - y - 4.0 * j, t),
            gaussian(x + y - 4.0 * j, t),
            -gaussian(x - y - 4.0 * j - 2.0, t),
            -gaussian(x + y - 4.0 * j - 2.0, t),
        ))
        scale = 1.0
        tail = image_tail_bound(t, count, 4.0, 4)
    return KernelValue(
        value=scale * math.fsum(terms),
        terms_used=j.size,
        tail_estimate=scale * tail,
        rounding_estimate=scale * settings.TERM_RELATIVE_ACCURACY * math.fsum(np.abs(terms)),
    )


def closed_form_kernel(q: KernelQuery) -> KernelValue:
    """Despacha para a forma fechada de (ν, α) ∈ {±1/2} × {1, 2}."""
    if not has_closed_form(q.nu, q.alpha):
        raise DomainError(
            f"Sem forma fechada para ν={q.nu:g}, α={q.alpha:g}",
            {"nu": q.nu, "alpha": q.alpha},
        )
    if q.alpha == 2.0:
        result = heat_closed_form(q.nu, q.t, q.x, q.y)
    else:
        value = poisson_closed_form(q.nu, q.t, q.x, q.y)
        result = KernelValue(
            value=value,
            terms_used=0,
            tail_estimate=0.0,
            rounding_estimate=settings.TERM_RELATIVE_ACCURACY * abs(value),
        )
    return _psi_scaled(result, q.nu, q.x, q.y) if q.psi else result


# ============== Núcleo de Hankel ==============

def hankel_kernel(lambda_param: float, t: float, x: float, y: float) -> float:
    """
    W_t^λ(x, y) = (xy)^{−λ+1/2} (1/(2t)) e^{−(x²+y²)/(4t)} I_{λ−1/2}(xy/(2t)).

    Avaliado em escala logarítmica; domina G_t^{λ−1/2, 2} em (0, 1).
    """
    if lambda_param <= -0.5:
        raise DomainError("λ deve ser > −1/2", {"lambda": lambda_param})
    if t <= 0 or x <= 0 or y <= 0:
        raise DomainError("t, x, y devem ser > 0", {"t": t, "x": x, "y": y})
    nu = lambda_param - 0.5
    z = x * y / (2.0 * t)
    log_value = (
        -nu * math.log(x * y)
        - math.log(2.0 * t)
        - (x * x + y * y) / (4.0 * t)
        + float(log_bessel_i(nu, np.array([z]))[0])
    )
    return math.exp(log_value)


# ============== Subordinação ==============

def _heat_from_coefficients(s: np.ndarray, lam_sq: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    """Σ_n e^{−s λ_n²} c_n para cada s, em blocos para limitar memória."""
    out = np.empty(s.size)
    for start in range(0, s.size, _HEAT_CHUNK):
        block = s[start:start + _HEAT_CHUNK]
        out[start:start + _HEAT_CHUNK] = np.exp(-block[:, None] * lam_sq[None, :]) @ coefficients
    return out


def subordinated_integral(heat: Callable[[np.ndarray], np.ndarray], t: float, lambda_1: float,
                          tol: Optional[float] = None) -> QuadratureResult:
    """
    ∫_0^∞ (t/(2√π)) s^{−3/2} e^{−t²/(4s)} H(s) ds em u = ln s.

    O intervalo é [t²/400, s_max], com s_max acima do ponto de sela t/(2λ₁)
    e de e^{−s λ₁²} desprezível.

    Args:
        heat: H(s) vetorizado (núcleo de calor no tempo s)
        t: Tempo do núcleo subordinado
        lambda_1: Primeiro zero (taxa de decaimento de H)
        tol: Tolerância que fixa s_max

    Returns:
        QuadratureResult da quadratura adaptativa
    """
    tol = tol or settings.DEFAULT_TOL
    s_lo = t * t / 400.0
    s_hi = max(
        4.0 * t * t,
        (math.log(1.0 / tol) + 40.0) / lambda_1 ** 2,
        10.0 * t / (2.0 * lambda_1),
    )
    log_norm = math.log(t / (2.0 * math.sqrt(math.pi)))

    def integrand(u: np.ndarray) -> np.ndarray:
        s = np.exp(u)
        # ds = s du
        weight = np.exp(log_norm - 0.5 * u - t * t / (4.0 * s))
        return weight * heat(s)

    edges = np.linspace(math.log(s_lo), math.log(s_hi), 33)
    return adaptive_gauss_legendre(integrand, edges, rtol=settings.SUBORDINATION_RTOL)


def subordination_check(q: KernelQuery, basis: Optional[SpectralBasis] = None) -> float:
    """
    G_t^{ν,1}(x, y) pela subordinação 1/2-estável do núcleo de calor.

    A série de calor é truncada no tempo t²/200 e avaliada como produto matricial
    e^{−s λ_n²} · (φ_n(x) φ_n(y)).

    Raises:
        QuadratureError: a quadratura não atingiu SUBORDINATION_RTOL
    """
    if q.alpha != 1.0:
        raise DomainError("A subordinação cobre apenas α = 1", {"alpha": q.alpha})
    order = q.order
    s_cut = q.t * q.t / 200.0
    log_prefactor = 2.0 * math.log(truncation_constant(order)) + math.log((1.0 - q.x) * (1.0 - q.y))
    n_terms, cached = truncation_index(order, 2.0, s_cut, log_prefactor, math.log(q.tol))
    if basis is None or basis.capacity < n_terms:
        basis = cached
    table = phi_table(basis, n_terms, [q.x, q.y])
    coefficients = table[:, 0] * table[:, 1]
    lam_sq = np.square(basis.zeros[:n_terms])

    result = subordinated_integral(
        lambda s: _heat_from_coefficients(s, lam_sq, coefficients),
        q.t,
        float(basis.zeros[0]),
        q.tol,
    )
    logger.debug(f"Subordinação com N={n_terms} e {result.panels} painéis (erro {result.error:.2e})")
    value = result.value
    if q.psi:
        value *= (q.x * q.y) ** (order.value + 0.5)
    return value


# ============== Semigrupo ==============

def _check_point(alpha: float, t: float, x: float) -> None:
    if not 0.0 < alpha <= 2.0:
        raise DomainError("alpha deve estar em (0, 2]", {"alpha": alpha})
    if t <= 0:
        raise DomainError("t deve ser > 0", {"t": t})
    if not 0.0 <= x < 1.0:
        raise DomainError("x deve estar em [0, 1)", {"x": x})


def _project(basis: SpectralBasis, count: int, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """⟨f, φ_n⟩_{dμ_ν} para n ≤ count, com painéis proporcionais a count."""
    nodes, weights = weighted_nodes(basis.order, count // 2 + 16)
    weighted = weights * np.asarray(f(nodes), dtype=float)
    coefficients = np.empty(count)
    for start in range(0, count, _PROJECTION_CHUNK):
        stop = min(start + _PROJECTION_CHUNK, count)
        coefficients[start:stop] = phi_table(basis, stop, nodes, start=start) @ weighted
    return coefficients


def apply_semigroup(order: Union[Order, float], alpha: float, t: float, x: float,
                    f: Union[Sequence[float], Callable[[np.ndarray], np.ndarray]],
                    tol: Optional[float] = None,
                    basis: Optional[SpectralBasis] = None) -> KernelValue:
    """
    (T_t^{ν,α} f)(x) = Σ e^{−tλ_n^α} ⟨f, φ_n⟩ φ_n(x).

    Args:
        order: Ordem ν
        alpha: Índice de subordinação
        t: Tempo > 0
        x: Ponto em [0, 1)
        f: Coeficientes ⟨f, φ_n⟩ (soma finita exata) ou função vetorizada em (0, 1)
           a ser projetada por quadratura
        tol: Tolerância relativa (apenas para f função)
        basis: Base opcional

    Returns:
        KernelValue; para f função, a cauda vem de Cauchy–Schwarz com ‖f‖
    """
    order = Order.of(order)
    _check_point(alpha, t, x)
    tol = tol or settings.DEFAULT_TOL

    if not callable(f):
        coefficients = np.asarray(list(f), dtype=float)
        count = coefficients.size
        if count == 0:
            return KernelValue(value=0.0, terms_used=0, tail_estimate=0.0)
        if basis is None or basis.capacity < count:
            basis = get_basis(order, count)
        phi_x = phi_table(basis, count, [x])[:, 0]
        terms = np.exp(-t * basis.zeros[:count] ** alpha) * coefficients * phi_x
        return KernelValue(
            value=math.fsum(terms),
            terms_used=count,
            tail_estimate=0.0,
            rounding_estimate=settings.TERM_RELATIVE_ACCURACY * math.fsum(np.abs(terms)),
        )

    _check_time(alpha, t)
    nodes, weights = weighted_nodes(order, 64)
    norm = math.sqrt(math.fsum(weights * np.square(np.asarray(f(nodes), dtype=float))))
    if norm == 0.0:
        return KernelValue(value=0.0, terms_used=0, tail_estimate=0.0)

    # Cauchy–Schwarz: |cauda| ≤ ‖f‖ (Σ_{n>N} e^{−2tλ^α} φ_n(x)²)^{1/2}
    log_prefactor = 2.0 * math.log(truncation_constant(order)) + 2.0 * math.log(1.0 - x)
    log_target = 2.0 * (math.log(tol) - math.log(norm))
    power = 2.0 * order.value + 4.0
    n_terms = 0
    for _ in range(_MAX_REFINEMENTS):
        n_terms, cached = truncation_index(order, alpha, 2.0 * t, log_prefactor, log_target, power)
        use = basis if basis is not None and basis.capacity >= n_terms else cached
        coefficients = _project(use, n_terms, f)
        terms = np.exp(-t * use.zeros[:n_terms] ** alpha) * coefficients * phi_table(use, n_terms, [x])[:, 0]
        value = math.fsum(terms)
        tail = norm * math.exp(0.5 * _log_tail(order, alpha, 2.0 * t, log_prefactor, power, use, n_terms))
        floor = max(abs(value), settings.KERNEL_FLOOR)
        if tail <= tol * floor:
            return KernelValue(
                value=value,
                terms_used=n_terms,
                tail_estimate=tail,
                rounding_estimate=settings.TERM_RELATIVE_ACCURACY * math.fsum(np.abs(terms)),
            )
        log_target = min(log_target - 1.0, log_target + 2.0 * (math.log(tol * floor) - math.log(tail)) - 1.0)
    raise BasisCapacityError(required=n_terms, limit=settings.MAX_TERMS)


def submarkovian_mass(order: Union[Order, float], alpha: float, t: float, x: float,
                      tol: Optional[float] = None) -> KernelValue:
    """
    ∫_0^1 G_t(x, y) y^{2ν+1} dy = Σ e^{−tλ_n^α} φ_n(x) ⟨1, φ_n⟩.

    Usa os coeficientes exatos ⟨1, φ_n⟩ = √2 sign(J_{ν+1}(λ_n)) / λ_n.
    """
    order = Order.of(order)
    _check_point(alpha, t, x)
    _check_time(alpha, t)
    tol = tol or settings.DEFAULT_TOL
    first = float(get_basis(order, 1).zeros[0])
    # |⟨1, φ_n⟩| ≤ √2/λ₁
    log_prefactor = math.log(math.sqrt(2.0) * truncation_constant(order) / first) + math.log(1.0 - x)
    power = order.value + 2.0
    log_target = math.log(tol)
    n_terms = 0
    for _ in range(_MAX_REFINEMENTS):
        n_terms, basis = truncation_index(order, alpha, t, log_prefactor, log_target, power)
        lam = basis.zeros[:n_terms]
        coefficients = math.sqrt(2.0) * basis.signs[:n_terms] / lam
        terms = np.exp(-t * lam ** alpha) * coefficients * phi_table(basis, n_terms, [x])[:, 0]
        value = math.fsum(terms)
        tail = math.exp(_log_tail(order, alpha, t, log_prefactor, power, basis, n_terms))
        floor = max(abs(value), settings.KERNEL_FLOOR)
        if tail <= tol * floor:
            return KernelValue(
                value=value,
                terms_used=n_terms,
                tail_estimate=tail,
                rounding_estimate=settings.TERM_RELATIVE_ACCURACY * math.fsum(np.abs(terms)),
            )
        log_target = min(log_target - 1.0, log_target + math.log(tol * floor) - math.log(tail) - 1.0)
    raise BasisCapacityError(required=n_terms, limit=settings.MAX_TERMS)


def semigroup_composition(q: KernelQuery, s: float) -> tuple[float, float]:
    """
    Chapman–Kolmogorov: ∫_0^1 G_t(x, z) G_s(z, y) z^{2ν+1} dz contra G_{t+s}(x, y).

    Returns:
        (valor composto por quadratura, valor direto da série em t + s)
    """
    if s <= 0:
        raise DomainError("s deve ser > 0", {"s": s})
    order = q.order
    direct = kernel_series(q.at(t=q.t + s)).value
    _check_time(q.alpha, min(q.t, s))

    log_prefactor = 2.0 * math.log(truncation_constant(order)) + math.log(1.0 - max(q.x, q.y))
    log_target = math.log(q.tol * max(abs(direct), settings.KERNEL_FLOOR)) - 5.0
    n_terms, basis = truncation_index(order, q.alpha, min(q.t, s), log_prefactor, log_target)

    nodes, weights = weighted_nodes(order, 2 * n_terms + 16)
    lam_alpha = basis.zeros[:n_terms] ** q.alpha
    at_points = phi_table(basis, n_terms, [q.x, q.y])
    left_coefficients = np.exp(-q.t * lam_alpha) * at_points[:, 0]
    right_coefficients = np.exp(-s * lam_alpha) * at_points[:, 1]
    products = []
    for start in range(0, nodes.size, _HEAT_CHUNK):
        on_nodes = phi_table(basis, n_terms, nodes[start:start + _HEAT_CHUNK])
        products.append((left_coefficients @ on_nodes) * (right_coefficients @ on_nodes)
                        * weights[start:start + _HEAT_CHUNK])
    composed = math.fsum(np.concatenate(products))
    return composed, direct
