"""
Rotas da API REST.
Expõe as mesmas operações da CLI: zeros, núcleos, envoltórias, transferência e varreduras.
"""

import logging

from cachetools import TTLCache
from fastapi import APIRouter, HTTPException, Query

from app.config import settings
from app.errors import SweepBudgetError
from app.models import (
    EnvelopeBounds,
    EnvelopeRequest,
    ErrorResponse,
    HealthResponse,
    KernelQuery,
    KernelValue,
    RatioReport,
    SweepConfig,
    TransferCheckRequest,
    TransferCheckResult,
    VersionResponse,
    ZeroRow,
)
from app.services.envelopes import heat_envelope_interval, subordinated_envelope_interval
from app.services.harness import run_sweep
from app.services.kernels import kernel_series
from app.services.spectrum import cached_orders, get_basis
from app.services.transference import interval_transference_check

# Configuração de logging
logger = logging.getLogger(__name__)

# Router principal
router = APIRouter()

# Cache em memória para núcleos
# Chave: JSON canônico da consulta, Valor: KernelValue
result_cache: TTLCache = TTLCache(
    maxsize=settings.CACHE_MAX_SIZE,
    ttl=settings.CACHE_TTL
)

ERROR_RESPONSES = {
    400: {"model": ErrorResponse, "description": "Parâmetros fora do domínio"},
    422: {"model": ErrorResponse, "description": "Falha numérica (truncamento, quadratura, convergência)"},
    500: {"model": ErrorResponse, "description": "Erro interno do servidor"},
}


def get_cache_key(query: KernelQuery) -> str:
    """Gera chave de cache a partir da consulta validada."""
    return query.model_dump_json()


# ============== Endpoints Principais ==============

@router.get(
    "/zeros",
    response_model=list[ZeroRow],
    response_model_by_alias=True,
    responses=ERROR_RESPONSES,
    summary="Zeros de J_ν",
    description="Tabela n, λ_{n,ν} e d_{n,ν} para os primeiros zeros positivos."
)
def zeros_endpoint(
    nu: float = Query(..., gt=-1.0, description="Índice de tipo ν > −1"),
    count: int = Query(10, ge=1, le=10_000, description="Número de zeros")
) -> list[ZeroRow]:
    """
    Retorna os primeiros `count` zeros de J_ν com as constantes de normalização.

    Args:
        nu: Índice de tipo
        count: Quantidade de linhas

    Returns:
        Linhas {n, lambda, d_norm}
    """
    basis = get_basis(nu, count)
    return [
        ZeroRow(n=n, lam=float(basis.zeros[n - 1]), d_norm=float(basis.normalizers[n - 1]))
        for n in range(1, count + 1)
    ]


@router.post(
    "/kernel",
    response_model=KernelValue,
    responses=ERROR_RESPONSES,
    summary="Núcleo G_t^{ν,α}(x, y)",
    description="Soma a série de autofunções com controle de cauda."
)
def kernel_endpoint(query: KernelQuery) -> KernelValue:
    """
    Avalia o núcleo para uma consulta, usando o cache quando possível.

    Args:
        query: (ν, α, t, x, y, tol, psi)

    Returns:
        Valor, termos usados e cotas de cauda e arredondamento
    """
    cache_key = get_cache_key(query)
    if cache_key in result_cache:
        logger.info("Resultado encontrado em cache")
        return result_cache[cache_key]

    result = kernel_series(query)
    result_cache[cache_key] = result
    logger.info(f"G(ν={query.nu:g}, α={query.alpha:g}, t={query.t:g}) = {result.value:.6g} com {result.terms_used} termos")
    return result


@router.post(
    "/envelope",
    response_model=EnvelopeBounds,
    responses=ERROR_RESPONSES,
    summary="Envoltórias no intervalo",
    description="Gaussiana com constante c para α = 2; expressão comparável única para α < 2."
)
def envelope_endpoint(request: EnvelopeRequest) -> EnvelopeBounds:
    """Envoltórias de tempo curto do núcleo em (0, 1)."""
    if request.alpha == 2.0:
        if request.c is None:
            raise HTTPException(status_code=400, detail="c é obrigatório para alpha = 2")
        return heat_envelope_interval(request.nu, request.t, request.x, request.y, request.c)
    value = subordinated_envelope_interval(request.nu, request.alpha, request.t, request.x, request.y)
    return EnvelopeBounds(lower=value, upper=value, constant_c=None)


@router.post(
    "/transfer-check",
    response_model=TransferCheckResult,
    responses=ERROR_RESPONSES,
    summary="Transferência em d = 1",
    description="Compara a série com ν = −1/2 com o núcleo de imagens em (−1, 1) somado em S⁰."
)
def transfer_check_endpoint(request: TransferCheckRequest) -> TransferCheckResult:
    """Os dois lados da identidade de transferência e o erro relativo."""
    return interval_transference_check(request.alpha, request.t, request.x, request.y)


@router.post(
    "/sweep",
    response_model=RatioReport,
    responses=ERROR_RESPONSES,
    summary="Varredura de razões",
    description="Executa uma varredura pequena (limitada por API_MAX_SWEEP_POINTS)."
)
def sweep_endpoint(config: SweepConfig) -> RatioReport:
    """
    Roda a varredura e devolve o relatório completo.

    Varreduras grandes devem usar a CLI (`fbk sweep`).
    """
    if config.point_count > settings.API_MAX_SWEEP_POINTS:
        raise SweepBudgetError(points=config.point_count, limit=settings.API_MAX_SWEEP_POINTS)
    return run_sweep(config)


# ============== Endpoints de Status ==============

@router.get("/health", response_model=HealthResponse, summary="Health Check")
async def health_check() -> HealthResponse:
    """Ordens ν com base espectral em cache e o limite de termos por série."""
    return HealthResponse(status="healthy", cached_orders=cached_orders(), max_terms=settings.MAX_TERMS)


@router.get("/version", response_model=VersionResponse, summary="Versão da API")
async def get_version() -> VersionResponse:
    return VersionResponse(
        version=settings.APP_VERSION,
        name=settings.APP_NAME,
        description=settings.APP_DESCRIPTION,
    )
