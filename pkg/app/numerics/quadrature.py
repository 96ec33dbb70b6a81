"""
Regras de quadratura e drivers adaptativos.

Gauss–Legendre composto com refinamento por bisseção de painéis (dobra até
convergir) e Gauss–Jacobi para pesos (1−s)^a (1+s)^b com singularidades
integráveis nas extremidades.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from app.config import settings
from app.errors import QuadratureError

# Configuração de logging
logger = logging.getLogger(__name__)

VectorFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureResult:
    """Resultado de uma integração adaptativa."""

    value: float
    error: float
    panels: int


@lru_cache(maxsize=64)
def gauss_legendre_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nós e pesos de Gauss–Legendre em [−1, 1] (somente leitura)."""
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=64)
def gauss_jacobi_rule(order: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nós e pesos de Gauss–Jacobi para o peso (1−s)^alpha (1+s)^beta em [−1, 1]."""
    nodes, weights = roots_jacobi(order, alpha, beta)
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def integrate_on_edges(func: VectorFunction, edges: np.ndarray, order: Optional[int] = None) -> float:
    """
    Gauss–Legendre composto sobre os painéis definidos por `edges`.

    Args:
        func: Integrando vetorizado
        edges: Extremidades dos painéis, crescentes
        order: Número de nós por painel

    Returns:
        Valor da integral
    """
    nodes, weights = gauss_legendre_rule(order or settings.QUAD_ORDER)
    edges = np.asarray(edges, dtype=float)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    points = mid[:, None] + half[:, None] * nodes[None, :]
    values = np.asarray(func(points.ravel()), dtype=float).reshape(points.shape)
    return math.fsum((half[:, None] * weights[None, :] * values).ravel())


def composite_gauss_legendre(
    func: VectorFunction,
    a: float,
    b: float,
    panels: int,
    order: Optional[int] = None,
) -> float:
    """Gauss–Legendre composto com `panels` painéis uniformes em [a, b]."""
    return integrate_on_edges(func, np.linspace(a, b, panels + 1), order)


def _refine(edges: np.ndarray) -> np.ndarray:
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(2 * len(edges) - 1)
    out[0::2] = edges
    out[1::2] = mids
    return out


def adaptive_gauss_legendre(
    func: VectorFunction,
    edges: Sequence[float],
    rtol: Optional[float] = None,
    atol: float = 0.0,
    order: Optional[int] = None,
    max_panels: Optional[int] = None,
) -> QuadratureResult:
    """
    Integra dobrando o número de painéis até duas aproximações sucessivas concordarem.

    Args:
        func: Integrando vetorizado
        edges: Painéis iniciais (podem ser graduados)
        rtol: Tolerância relativa
        atol: Tolerância absoluta
        order: Nós por painel
        max_panels: Limite de painéis antes de desistir

    Returns:
        QuadratureResult com valor, erro estimado e painéis usados
    """
    rtol = settings.QUAD_RTOL if rtol is None else rtol
    max_panels = max_panels or settings.QUAD_MAX_PANELS
    current = np.asarray(edges, dtype=float)
    coarse = integrate_on_edges(func, current, order)
    while True:
        current = _refine(current)
        fine = integrate_on_edges(func, current, order)
        error = abs(fine - coarse)
        panels = len(current) - 1
        if error <= max(atol, rtol * abs(fine)):
            logger.debug(f"Quadratura convergiu com {panels} painéis (erro {error:.2e})")
            return QuadratureResult(value=fine, error=error, panels=panels)
        if panels >= max_panels:
            raise QuadratureError(value=fine, error_estimate=error, panels=panels)
        coarse = fine


def geometric_edges(a: float, b: float, levels: int, ratio: float = 0.5) -> np.ndarray:
    """
    Painéis graduados geometricamente em direção a `a`.

    Útil para integrandos com picos ou singularidades integráveis na extremidade esquerda.
    """
    offsets = (b - a) * ratio ** np.arange(levels, -1, -1, dtype=float)
    return np.concatenate(([a], a + offsets))


def jacobi_weighted_integral(
    func: VectorFunction,
    alpha: float,
    beta: float,
    rtol: Optional[float] = None,
    start_order: int = 16,
    max_order: int = 1024,
) -> QuadratureResult:
    """
    ∫_{−1}^{1} func(s) (1−s)^alpha (1+s)^beta ds por Gauss–Jacobi, dobrando a ordem.

    Args:
        func: Parte suave do integrando
        alpha: Expoente em s=1 (> −1)
        beta: Expoente em s=−1 (> −1)
        rtol: Tolerância relativa

    Returns:
        QuadratureResult (panels guarda a ordem final)
    """
    rtol = settings.QUAD_RTOL if rtol is None else rtol
    n = start_order
    nodes, weights = gauss_jacobi_rule(n, alpha, beta)
    previous = math.fsum(weights * func(nodes))
    while n < max_order:
        n *= 2
        nodes, weights = gauss_jacobi_rule(n, alpha, beta)
        value = math.fsum(weights * func(nodes))
        error = abs(value - previous)
        if error <= rtol * abs(value):
            return QuadratureResult(value=value, error=error, panels=n)
        previous = value
    raise QuadratureError(value=previous, error_estimate=error, panels=n)
