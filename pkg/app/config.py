"""
Configurações da aplicação.
Carrega variáveis de ambiente e define as constantes numéricas do sistema.
"""

import logging
import sys
from functools import lru_cache
from typing import TextIO

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """
    Configurações centralizadas da aplicação.
    Valores são carregados de variáveis de ambiente ou .env
    """

    # API Info
    APP_NAME: str = "Fourier-Bessel Kernels API"
    APP_VERSION: str = "1.0.0"
    APP_DESCRIPTION: str = "Núcleos de calor, Poisson e subordinados de Fourier-Bessel em (0,1) e suas estimativas"
    DEBUG: bool = False

    # Funções especiais
    BESSEL_J_CROSSOVER: float = 25.0  # Miller abaixo, Hankel acima
    BESSEL_I_CROSSOVER: float = 30.0

    # Espectro
    NEWTON_MAX_ITER: int = 60
    GROWTH_GRID_POINTS: int = 400
    TRUNCATION_CALIBRATION_TERMS: int = 40
    TRUNCATION_SAFETY: float = 2.0
    BASIS_CACHE_SIZE: int = 32
    WARM_ORDERS: list[float] = [-0.5, 0.0, 0.5]  # bases pré-calculadas na subida da API
    WARM_TERMS: int = 200

    # Núcleos
    DEFAULT_TOL: float = 1e-10
    MAX_TERMS: int = 100_000
    T_MIN_FLOOR: float = 1e-3
    KERNEL_FLOOR: float = 2.2250738585072014e-308
    TERM_RELATIVE_ACCURACY: float = 1e-13
    HEAT_IMAGE_MAX_T: float = 0.5  # acima disso o calor ν = ±1/2 usa a série trigonométrica

    # Quadratura
    QUAD_RTOL: float = 1e-10
    QUAD_ORDER: int = 20
    QUAD_MAX_PANELS: int = 8192
    SUBORDINATION_RTOL: float = 1e-10

    # Varreduras
    SWEEP_MAX_POINTS: int = 10_000_000
    SWEEP_WORKERS: int = 1
    HEAT_BRACKET: float = 10.0
    SUBORDINATED_BRACKET: float = 50.0
    LONG_TIME_BRACKET: float = 100.0
    SHORT_TIME_T: float = 1.0
    LONG_TIME_T: float = 5.0
    C_CANDIDATES: list[float] = [1.1, 1.5, 2.0, 4.0, 8.0, 10.0]

    # Cache
    CACHE_TTL: int = 3600  # 1 hora em segundos
    CACHE_MAX_SIZE: int = 1000
    API_MAX_SWEEP_POINTS: int = 20_000

    # CORS
    CORS_ORIGINS: list[str] = ["*"]

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True


@lru_cache()
def get_settings() -> Settings:
    """
    Retorna instância cacheada das configurações.
    Usar lru_cache evita recarregar o .env a cada chamada.
    """
    return Settings()


# Instância global para uso direto
settings = get_settings()


def configure_logging(stream: TextIO = sys.stdout) -> None:
    """
    Configura o logging raiz com o formato padrão da aplicação.

    Args:
        stream: Destino dos logs (stdout para a API, stderr para a CLI)
    """
    logging.basicConfig(
        level=logging.DEBUG if settings.DEBUG else logging.INFO,
        format="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=[
            logging.StreamHandler(stream)
        ],
        force=True,
    )
