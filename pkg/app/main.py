"""
Aplicação FastAPI dos núcleos de Fourier-Bessel.
Liga as rotas /api/v1, o CORS e a tradução das exceções da biblioteca para ErrorResponse.
"""

import logging
import sys
from contextlib import asynccontextmanager
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from app.api.routes import router
from app.config import configure_logging, settings
from app.errors import DomainError, FourierBesselError
from app.services.spectrum import get_basis

# Configuração de logging
configure_logging(sys.stdout)
logger = logging.getLogger(__name__)


def _error_response(status_code: int, error: str, message: str, details: Optional[Any] = None) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={"error": error, "message": message, "details": jsonable_encoder(details)},
    )


# ============== Ciclo de Vida ==============

@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Sobe a API com as bases mais usadas já no cache.
    Zeros de ν = ±1/2 e ν = 0 são pedidos por quase toda consulta.
    """
    logger.info(f"{settings.APP_NAME} v{settings.APP_VERSION} | tol={settings.DEFAULT_TOL:g} | MAX_TERMS={settings.MAX_TERMS}")
    for nu in settings.WARM_ORDERS:
        basis = get_basis(nu, settings.WARM_TERMS)
        logger.info(f"Base ν={nu:g} pronta com {basis.capacity} zeros")

    yield

    logger.info("Encerrando aplicação...")


app = FastAPI(
    title=settings.APP_NAME,
    description=settings.APP_DESCRIPTION,
    version=settings.APP_VERSION,
    lifespan=lifespan,
    openapi_tags=[
        {"name": "Fourier-Bessel", "description": "Zeros, núcleos, envoltórias, transferência e varreduras"},
        {"name": "Status", "description": "Saúde e versão"},
    ],
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# ============== Exception Handlers ==============

@app.exception_handler(RequestValidationError)
async def validation_exception_handler(request: Request, exc: RequestValidationError):
    """Corpo ou query inválidos: 400."""
    logger.warning(f"Validação falhou em {request.url.path}: {exc.errors()}")
    return _error_response(400, "ValidationError", "Dados de entrada inválidos", {"errors": exc.errors()})


@app.exception_handler(FourierBesselError)
async def library_exception_handler(request: Request, exc: FourierBesselError):
    """Erros da biblioteca: 400 para domínio, 422 para falhas numéricas."""
    status_code = 400 if isinstance(exc, DomainError) else 422
    logger.warning(f"{request.url.path} -> {status_code} {type(exc).__name__}: {exc.message}")
    return JSONResponse(status_code=status_code, content=jsonable_encoder(exc.to_dict()))


@app.exception_handler(StarletteHTTPException)
async def http_exception_handler(request: Request, exc: StarletteHTTPException):
    return _error_response(exc.status_code, "HTTPException", str(exc.detail))


@app.exception_handler(Exception)
async def general_exception_handler(request: Request, exc: Exception):
    """Qualquer outra exceção: 500 sem detalhes fora do modo DEBUG."""
    logger.error(f"Erro não tratado em {request.url.path}: {exc}", exc_info=True)
    details = {"exception": str(exc)} if settings.DEBUG else None
    return _error_response(500, "InternalServerError", "Ocorreu um erro interno no servidor", details)


# ============== Rotas ==============

app.include_router(router, prefix="/api/v1", tags=["Fourier-Bessel"])


@app.get("/", tags=["Status"])
async def root():
    """Nome, versão e onde ficam a documentação e o health check."""
    return {
        "message": f"{settings.APP_NAME}: núcleos G_t^{{ν,α}} em (0, 1)",
        "version": settings.APP_VERSION,
        "docs": "/docs",
        "health": "/api/v1/health",
    }
