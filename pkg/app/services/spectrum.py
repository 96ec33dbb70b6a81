"""
Espectro do sistema de Fourier-Bessel em (0, 1).

Calcula os zeros positivos λ_{n,ν} de J_ν, as constantes de normalização d_{n,ν},
avalia as autofunções φ_n^ν, ψ_n^ν e suas derivadas e calibra a constante de
crescimento usada no truncamento das séries de núcleos.

As bases são imutáveis depois de construídas e ficam num cache LRU por ν,
crescendo geometricamente sob demanda.
"""

import logging
import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from cachetools import LRUCache

from app.config import settings
from app.errors import ConvergenceError, DomainError
from app.numerics.quadrature import gauss_jacobi_rule, gauss_legendre_rule
from app.numerics.specfun import ArrayLike, Order, bessel_j_values, reduced_bessel_j

# Configuração de logging
logger = logging.getLogger(__name__)

_EPS = float(np.finfo(float).eps)
_BRACKET_HALF_WIDTH = 0.45 * math.pi
_SCAN_STEP = 0.5
_SCAN_WIDTH = 20.0
_FINE_SCAN_STEP = 0.02
_MIN_ARGUMENT = 1e-6


# ============== Tipos ==============

@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """
    Zeros, normalizadores e sinais de J_{ν+1}(λ_n) para n = 1..capacity.

    Os arrays são somente leitura; a base pode ser compartilhada entre threads.
    """

    order: Order
    zeros: np.ndarray
    normalizers: np.ndarray
    signs: np.ndarray

    @property
    def nu(self) -> float:
        return self.order.value

    @property
    def capacity(self) -> int:
        return int(self.zeros.size)

    def check_index(self, n: int) -> None:
        if not 1 <= n <= self.capacity:
            raise DomainError(
                f"Índice n={n} fora da base (capacidade {self.capacity})",
                {"n": n, "capacity": self.capacity},
            )

    def eigenfunction(self, n: int) -> "Eigenfunction":
        return Eigenfunction(basis=self, n=n)


@dataclass(frozen=True, eq=False)
class Eigenfunction:
    """Autofunção φ_n^ν ligada a uma base."""

    basis: SpectralBasis
    n: int

    def __post_init__(self):
        self.basis.check_index(self.n)

    def __call__(self, x: ArrayLike) -> Union[float, np.ndarray]:
        return eval_phi(self.basis, self.n, x)

    def derivative(self, x: ArrayLike) -> Union[float, np.ndarray]:
        return eval_phi_derivative(self.basis, self.n, x)

    def psi(self, x: ArrayLike) -> Union[float, np.ndarray]:
        return eval_psi(self.basis, self.n, x)


# ============== Zeros ==============

def mcmahon_guess(nu: float, n: np.ndarray) -> np.ndarray:
    """Dois termos de McMahon: β − (4ν² − 1)/(8β), β = π(n + ν/2 − 1/4)."""
    beta = math.pi * (np.asarray(n, dtype=float) + 0.5 * nu - 0.25)
    return beta - (4.0 * nu * nu - 1.0) / (8.0 * beta)


def _scan_brackets(order: Order, start: float, stop: float, step: float) -> tuple[np.ndarray, np.ndarray]:
    """Intervalos [a, b] da grade onde J_ν troca de sinal."""
    grid = np.arange(max(start, _MIN_ARGUMENT), stop + step, step)
    values = bessel_j_values(order, grid)
    change = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
    return grid[change], grid[change + 1]


def _repair_bracket(order: Order, n: int, guess: float, floor: float) -> tuple[float, float]:
    """Busca fina ao redor de um chute de McMahon cujo intervalo não isola o zero."""
    a, b = _scan_brackets(order, max(guess - math.pi, floor), guess + math.pi, _FINE_SCAN_STEP)
    keep = a >= floor
    a, b = a[keep], b[keep]
    if a.size == 0:
        raise ConvergenceError(n=n, nu=order.value, last_iterate=guess, iterations=0)
    best = int(np.argmin(np.abs(0.5 * (a + b) - guess)))
    return float(a[best]), float(b[best])


def _initial_brackets(order: Order, count: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Intervalos iniciais com troca de sinal e chutes para o Newton.

    Para ν > 2 os primeiros zeros vêm de uma varredura em [ν, ν + 20]; os
    demais, de McMahon com meia-largura 0.45π.
    """
    nu = order.value
    scanned_lo = np.empty(0)
    scanned_hi = np.empty(0)
    if nu > 2.0:
        scanned_lo, scanned_hi = _scan_brackets(order, nu, nu + _SCAN_WIDTH, _SCAN_STEP)
        scanned_lo, scanned_hi = scanned_lo[:count], scanned_hi[:count]
    found = scanned_lo.size

    n = np.arange(found + 1, count + 1, dtype=float)
    guess = mcmahon_guess(nu, n)
    floor = float(scanned_hi[-1]) if found else _MIN_ARGUMENT
    lo = np.maximum(guess - _BRACKET_HALF_WIDTH, floor)
    hi = guess + _BRACKET_HALF_WIDTH
    if n.size:
        bad = np.sign(bessel_j_values(order, lo)) * np.sign(bessel_j_values(order, hi)) >= 0
        for i in np.nonzero(bad)[0]:
            logger.debug(f"Chute de McMahon ruim para n={int(n[i])}, ν={nu:g}; varrendo")
            lower = float(hi[i - 1]) if i > 0 else floor
            lo[i], hi[i] = _repair_bracket(order, int(n[i]), float(guess[i]), lower)
            guess[i] = 0.5 * (lo[i] + hi[i])

    start = np.concatenate((0.5 * (scanned_lo + scanned_hi), np.clip(guess, lo, hi)))
    return np.concatenate((scanned_lo, lo)), np.concatenate((scanned_hi, hi)), start


def _safeguarded_newton(order: Order, lo: np.ndarray, hi: np.ndarray, start: np.ndarray) -> np.ndarray:
    """
    Newton vetorizado em J_ν com salvaguarda por bisseção.

    J_ν' = (ν/z) J_ν − J_{ν+1}. Os intervalos são atualizados pelo sinal de J_ν,
    então nenhum iterado cruza zeros vizinhos.
    """
    nu = order.value
    shifted = order.shifted()
    lo = lo.copy()
    hi = hi.copy()
    x = start.copy()
    lo_sign = np.sign(bessel_j_values(order, lo))
    done = np.zeros(x.size, dtype=bool)
    previous = np.full(x.size, np.inf)

    for _ in range(settings.NEWTON_MAX_ITER):
        active = np.nonzero(~done)[0]
        if active.size == 0:
            break
        xa = x[active]
        f = bessel_j_values(order, xa)
        df = (nu / xa) * f - bessel_j_values(shifted, xa)

        same = np.sign(f) == lo_sign[active]
        lo[active] = np.where(same, xa, lo[active])
        hi[active] = np.where(same, hi[active], xa)

        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(f == 0.0, 0.0, f / df)
        candidate = xa - step
        size = np.abs(step)
        converged = (
            (f == 0.0)
            | (size <= 4.0 * _EPS * xa)
            # ruído de arredondamento: passo minúsculo que parou de encolher
            | ((size <= 1e-10 * xa) & (size >= 0.5 * previous[active]))
        )
        outside = ~np.isfinite(candidate) | (candidate <= lo[active]) | (candidate >= hi[active])
        bisect = outside & ~converged
        x[active] = np.where(bisect, 0.5 * (lo[active] + hi[active]), candidate)
        previous[active] = np.where(bisect, np.inf, size)
        done[active] = converged

    if not done.all():
        i = int(np.nonzero(~done)[0][0])
        raise ConvergenceError(n=i + 1, nu=nu, last_iterate=float(x[i]), iterations=settings.NEWTON_MAX_ITER)
    return x


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def compute_zeros(order: Union[Order, float], count: int) -> SpectralBasis:
    """
    Calcula os `count` primeiros zeros positivos de J_ν e as constantes d_{n,ν}.

    Args:
        order: Ordem ν > −1
        count: Número de zeros (≥ 1)

    Returns:
        SpectralBasis imutável com zeros estritamente crescentes

    Raises:
        ConvergenceError: Newton não convergiu para algum n
    """
    order = Order.of(order)
    if count < 1:
        raise DomainError(f"count deve ser ≥ 1, recebido {count}", {"count": count})
    nu = order.value
    n = np.arange(1, count + 1, dtype=float)

    if abs(nu - 0.5) < 1e-15:
        zeros = math.pi * n
    elif abs(nu + 0.5) < 1e-15:
        zeros = math.pi * (n - 0.5)
    else:
        lo, hi, start = _initial_brackets(order, count)
        zeros = _safeguarded_newton(order, lo, hi, start)

    gaps = np.diff(zeros)
    if np.any(gaps <= 0):
        i = int(np.nonzero(gaps <= 0)[0][0]) + 1
        raise ConvergenceError(n=i + 1, nu=nu, last_iterate=float(zeros[i]), iterations=settings.NEWTON_MAX_ITER)

    next_values = bessel_j_values(order.shifted(), zeros)
    normalizers = math.sqrt(2.0) / np.abs(np.sqrt(zeros) * next_values)
    logger.debug(f"Zeros de J_{nu:g}: {count} calculados (maior λ = {zeros[-1]:.6g})")
    return SpectralBasis(
        order=order,
        zeros=_frozen(zeros),
        normalizers=_frozen(normalizers),
        signs=_frozen(np.sign(next_values)),
    )


# ============== Cache de bases ==============

_basis_cache: LRUCache = LRUCache(maxsize=settings.BASIS_CACHE_SIZE)
_basis_lock = threading.Lock()


def get_basis(order: Union[Order, float], count: int = 1) -> SpectralBasis:
    """
    Base em cache com pelo menos `count` zeros.

    A capacidade cresce geometricamente (no mínimo dobra) quando é insuficiente.
    """
    order = Order.of(order)
    with _basis_lock:
        cached: Optional[SpectralBasis] = _basis_cache.get(order.value)
        if cached is not None and cached.capacity >= count:
            return cached
        capacity = count if cached is None else max(count, 2 * cached.capacity)
        basis = compute_zeros(order, capacity)
        _basis_cache[order.value] = basis
        logger.info(f"Base espectral ν={order.value:g} com capacidade {capacity}")
        return basis


def cached_orders() -> list[float]:
    with _basis_lock:
        return sorted(_basis_cache.keys())


def clear_basis_cache() -> None:
    """Esvazia o cache de bases e a calibração de truncamento."""
    with _basis_lock:
        _basis_cache.clear()
    _truncation_constant.cache_clear()


# ============== Autofunções ==============

def _unit_interval(x: ArrayLike) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~((arr >= 0.0) & (arr <= 1.0))):
        raise DomainError("x deve estar em [0, 1]", {"x": np.atleast_1d(arr).tolist()[:5]})
    return arr


def _as_output(values: np.ndarray, like: np.ndarray) -> Union[float, np.ndarray]:
    if np.ndim(like) == 0:
        return float(values.reshape(-1)[0])
    return values.reshape(np.shape(like))


def _phi_rows(basis: SpectralBasis, indices: np.ndarray, x: np.ndarray) -> np.ndarray:
    """φ_n(x) para n = indices + 1, como matriz (len(indices), len(x))."""
    nu = basis.nu
    lam = basis.zeros[indices]
    scale = basis.normalizers[indices] * lam ** (nu + 0.5)
    values = scale[:, None] * reduced_bessel_j(basis.order, lam[:, None] * x[None, :])
    values[:, x == 1.0] = 0.0
    return values


def phi_table(basis: SpectralBasis, count: int, x: ArrayLike, start: int = 0) -> np.ndarray:
    """
    Tabela φ_n^ν(x_j) para n = start+1..count.

    Args:
        basis: Base com capacidade ≥ count
        count: Índice da última autofunção
        x: Pontos em [0, 1]
        start: Quantas autofunções iniciais pular (para crescer tabelas existentes)

    Returns:
        Matriz (count − start, len(x))
    """
    if count > basis.capacity:
        raise DomainError(
            f"Tabela pede {count} autofunções; base tem {basis.capacity}",
            {"count": count, "capacity": basis.capacity},
        )
    points = _unit_interval(x).ravel()
    return _phi_rows(basis, np.arange(start, count), points)


def eval_phi(basis: SpectralBasis, n: int, x: ArrayLike) -> Union[float, np.ndarray]:
    """
    φ_n^ν(x) = d_{n,ν} λ^{ν+1/2} (λx)^{−ν} J_ν(λx).

    A forma reduzida z^{−ν}J_ν(z) torna o limite x → 0 analítico; em x = 1
    o valor é exatamente 0.
    """
    basis.check_index(n)
    arr = _unit_interval(x)
    values = _phi_rows(basis, np.array([n - 1]), np.atleast_1d(arr).ravel())[0]
    return _as_output(values, arr)


def eval_phi_derivative(basis: SpectralBasis, n: int, x: ArrayLike) -> Union[float, np.ndarray]:
    """
    Derivada de φ_n^ν pela regra de diferenciação de z^{−ν}J_ν:
    φ' = −d λ^{ν+3/2} z^{−ν} J_{ν+1}(z), z = λx.

    Em x = 1 e n = 1 vale −√2 λ_1.
    """
    basis.check_index(n)
    arr = _unit_interval(x)
    points = np.atleast_1d(arr).ravel()
    nu = basis.nu
    lam = float(basis.zeros[n - 1])
    z = lam * points
    values = -basis.normalizers[n - 1] * lam ** (nu + 1.5) * z * reduced_bessel_j(basis.order.shifted(), z)
    return _as_output(values, arr)


def eval_psi(basis: SpectralBasis, n: int, x: ArrayLike) -> Union[float, np.ndarray]:
    """ψ_n^ν(x) = x^{ν+1/2} φ_n^ν(x)."""
    basis.check_index(n)
    arr = _unit_interval(x)
    points = np.atleast_1d(arr).ravel()
    phi = _phi_rows(basis, np.array([n - 1]), points)[0]
    with np.errstate(divide="ignore"):
        values = np.power(points, basis.nu + 0.5) * phi
    return _as_output(values, arr)


# ============== Crescimento e truncamento ==============

def growth_bound_check(basis: SpectralBasis, n: int) -> float:
    """
    sup_x |φ_n^ν(x)| / ((1 − x) n^{ν+2}) numa grade de [0, 1).

    Inclui o limite em x → 1⁻, |φ_n'(1)| / n^{ν+2}.

    Args:
        basis: Base espectral
        n: Índice da autofunção

    Returns:
        Cota empírica (positiva e finita)
    """
    basis.check_index(n)
    x = np.linspace(0.0, 1.0, settings.GROWTH_GRID_POINTS + 1)[:-1]
    phi = _phi_rows(basis, np.array([n - 1]), x)[0]
    scale = float(n) ** (basis.nu + 2.0)
    interior = float(np.max(np.abs(phi) / (1.0 - x))) / scale
    boundary = abs(float(eval_phi_derivative(basis, n, 1.0))) / scale
    return max(interior, boundary)


@lru_cache(maxsize=64)
def _truncation_constant(nu: float) -> float:
    count = settings.TRUNCATION_CALIBRATION_TERMS
    basis = get_basis(nu, count)
    worst = max(growth_bound_check(basis, n) for n in range(1, count + 1))
    constant = settings.TRUNCATION_SAFETY * worst
    logger.debug(f"Constante de truncamento C_ν para ν={nu:g}: {constant:.4g}")
    return constant


def truncation_constant(order: Union[Order, float]) -> float:
    """C_ν com |φ_n^ν(x)| ≤ C_ν (1 − x) n^{ν+2}, calibrada nos primeiros termos com folga."""
    return _truncation_constant(Order.of(order).value)


# ============== Quadratura com peso x^{2ν+1} ==============

def weighted_nodes(order: Union[Order, float], panels: int, quad_order: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
    """
    Nós e pesos em [0, 1] para ∫ f(x) x^{2ν+1} dx (medida dμ_ν).

    Gauss–Legendre composto; quando 2ν + 1 < 0 o primeiro painel usa
    Gauss–Jacobi para absorver a singularidade do peso.
    """
    order = Order.of(order)
    exponent = 2.0 * order.value + 1.0
    q = quad_order or settings.QUAD_ORDER
    nodes, weights = gauss_legendre_rule(q)
    edges = np.linspace(0.0, 1.0, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    points = mid[:, None] + half[:, None] * nodes[None, :]
    w = half[:, None] * weights[None, :] * np.power(points, exponent)
    if exponent < 0:
        j_nodes, j_weights = gauss_jacobi_rule(q, 0.0, exponent)
        h = edges[1]
        points[0] = 0.5 * h * (1.0 + j_nodes)
        w[0] = (0.5 * h) ** (exponent + 1.0) * j_weights
    return points.ravel(), w.ravel()


def gram_matrix(basis: SpectralBasis, count: int, panels: Optional[int] = None) -> np.ndarray:
    """
    Matriz de Gram ⟨φ_n, φ_m⟩_{dμ_ν} para n, m ≤ count.

    O número de painéis cresce com count, acompanhando as oscilações de φ_n φ_m.
    """
    panels = panels or 4 * count + 8
    x, w = weighted_nodes(basis.order, panels)
    table = phi_table(basis, count, x)
    return (table * w[None, :]) @ table.T
