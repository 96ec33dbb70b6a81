"""
Modelos Pydantic para validação de dados.
Define as consultas, os resultados numéricos e os relatórios de varredura
usados pela biblioteca, pela CLI e pela API.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config import settings
from app.numerics.specfun import Order


# ============== Consultas ==============

class KernelQuery(BaseModel):
    """Ponto de avaliação (ν, α, t, x, y) de um núcleo G_t^{ν,α}."""

    nu: float = Field(..., gt=-1.0, description="Índice de tipo ν > −1")
    alpha: float = Field(..., gt=0.0, le=2.0, description="Índice de subordinação α ∈ (0, 2]")
    t: float = Field(..., gt=0.0, description="Tempo t > 0")
    x: float = Field(..., gt=0.0, lt=1.0, description="Primeira variável espacial em (0, 1)")
    y: float = Field(..., gt=0.0, lt=1.0, description="Segunda variável espacial em (0, 1)")
    tol: float = Field(
        default=settings.DEFAULT_TOL,
        gt=0.0,
        le=1e-2,
        description="Tolerância relativa do truncamento",
    )
    psi: bool = Field(
        default=False,
        description="Multiplica por (xy)^{ν+1/2}: núcleo do sistema ψ_n",
    )

    @property
    def order(self) -> Order:
        return Order(value=self.nu)

    def at(self, **changes) -> "KernelQuery":
        """Cópia validada com alguns campos trocados."""
        return KernelQuery(**{**self.model_dump(), **changes})

    class Config:
        json_schema_extra = {
            "example": {
                "nu": 0.5,
                "alpha": 1.0,
                "t": 1.0,
                "x": 0.5,
                "y": 0.5,
                "tol": 1e-10,
                "psi": False
            }
        }


class EnvelopeRequest(BaseModel):
    """Request para as envoltórias no intervalo (0, 1)."""

    nu: float = Field(..., gt=-1.0, description="Índice de tipo ν > −1")
    alpha: float = Field(..., gt=0.0, le=2.0, description="Índice de subordinação")
    t: float = Field(..., gt=0.0, description="Tempo t > 0")
    x: float = Field(..., ge=0.0, le=1.0)
    y: float = Field(..., ge=0.0, le=1.0)
    c: Optional[float] = Field(None, gt=1.0, description="Constante gaussiana (apenas α = 2)")

    class Config:
        json_schema_extra = {
            "example": {"nu": 0.5, "alpha": 2.0, "t": 0.01, "x": 0.5, "y": 0.5, "c": 2.0}
        }


class TransferCheckRequest(BaseModel):
    """Request para a checagem de transferência em d = 1."""

    alpha: float = Field(..., description="Índice de subordinação (1 ou 2)")
    t: float = Field(..., gt=0.0)
    x: float = Field(..., gt=0.0, lt=1.0)
    y: float = Field(..., gt=0.0, lt=1.0)

    class Config:
        json_schema_extra = {
            "example": {"alpha": 2.0, "t": 0.1, "x": 0.3, "y": 0.5}
        }


# ============== Resultados ==============

class KernelValue(BaseModel):
    """Valor de um núcleo com o diagnóstico do truncamento."""

    value: float = Field(..., description="Valor do núcleo")
    terms_used: int = Field(..., ge=0, description="Número de termos somados")
    tail_estimate: float = Field(..., ge=0.0, description="Cota da cauda descartada")
    rounding_estimate: float = Field(
        default=0.0,
        ge=0.0,
        description="Ruído de arredondamento da soma (precisão relativa · Σ|termos|)",
    )

    class Config:
        json_schema_extra = {
            "example": {
                "value": 0.3463582,
                "terms_used": 12,
                "tail_estimate": 1.2e-12,
                "rounding_estimate": 4.1e-14
            }
        }


class EnvelopeBounds(BaseModel):
    """Envoltória inferior/superior com a constante c utilizada."""

    lower: float = Field(..., ge=0.0, description="Envoltória inferior")
    upper: float = Field(
        ..., ge=0.0, description="Envoltória superior; > 0 em (0, 1), 0.0 só em x = 1, y = 1 ou por underflow"
    )
    constant_c: Optional[float] = Field(
        None,
        description="Constante gaussiana c > 1 (ausente nas formas comparáveis sem c)",
    )

    class Config:
        json_schema_extra = {
            "example": {"lower": 40.0, "upper": 40.0, "constant_c": 2.0}
        }


class ZeroRow(BaseModel):
    """Linha da tabela de zeros: n, λ_{n,ν} e d_{n,ν}."""

    model_config = ConfigDict(populate_by_name=True)

    n: int = Field(..., ge=1)
    lam: float = Field(..., alias="lambda", description="Zero λ_{n,ν}")
    d_norm: float = Field(..., gt=0.0, description="Constante de normalização d_{n,ν}")


class TransferCheckResult(BaseModel):
    """Os dois lados da identidade de transferência em d = 1."""

    lhs: float = Field(..., description="Série de Fourier-Bessel com ν = −1/2")
    rhs: float = Field(..., description="Soma em S⁰ do núcleo de Dirichlet em (−1, 1)")
    rel_err: float = Field(..., ge=0.0, description="|lhs − rhs| / |lhs|")
    tail_estimate: Optional[float] = Field(
        None, ge=0.0, description="Cota das imagens omitidas no lado direito (apenas α = 2)"
    )


class LemmaSurvey(BaseModel):
    """Resumo da razão quadratura/estimativa sobre sorteios de um regime."""

    case: int = Field(..., ge=1, le=3)
    draws: int = Field(..., ge=1)
    min_ratio: float
    max_ratio: float
    spread: float = Field(..., description="max_ratio / min_ratio")


# ============== Varreduras ==============

class SweepConfig(BaseModel):
    """Configuração de uma varredura de razões núcleo/envoltória."""

    nu_list: list[float] = Field(..., min_length=1, description="Índices de tipo")
    alpha_list: list[float] = Field(..., min_length=1, description="Índices de subordinação")
    t_grid: list[float] = Field(..., min_length=1, description="Tempos (tipicamente log-espaçados)")
    xy_grid: list[float] = Field(..., min_length=1, description="Pontos em (0, 1); a grade é o produto tensorial")
    tol: float = Field(default=settings.DEFAULT_TOL, gt=0.0, le=1e-2)
    c_candidates: list[float] = Field(default_factory=lambda: list(settings.C_CANDIDATES), min_length=1)
    kernel_method: Literal["auto", "series", "closed"] = "auto"
    envelope: Literal["auto", "oracle"] = "auto"
    heat_bracket: float = Field(default=settings.HEAT_BRACKET, gt=1.0)
    subordinated_bracket: float = Field(default=settings.SUBORDINATED_BRACKET, gt=1.0)
    long_time_bracket: float = Field(default=settings.LONG_TIME_BRACKET, gt=1.0)
    short_time_limit: float = Field(default=settings.SHORT_TIME_T, gt=0.0)
    long_time_start: float = Field(default=settings.LONG_TIME_T, gt=0.0)
    workers: int = Field(default=settings.SWEEP_WORKERS, ge=1)

    @field_validator("nu_list")
    @classmethod
    def _check_nu(cls, values: list[float]) -> list[float]:
        if any(v <= -1.0 for v in values):
            raise ValueError("todos os ν devem ser > −1")
        return values

    @field_validator("alpha_list")
    @classmethod
    def _check_alpha(cls, values: list[float]) -> list[float]:
        if any(not 0.0 < v <= 2.0 for v in values):
            raise ValueError("todos os α devem estar em (0, 2]")
        return values

    @field_validator("t_grid")
    @classmethod
    def _check_t(cls, values: list[float]) -> list[float]:
        if any(v <= 0.0 for v in values):
            raise ValueError("todos os tempos devem ser > 0")
        return values

    @field_validator("xy_grid")
    @classmethod
    def _check_xy(cls, values: list[float]) -> list[float]:
        if any(not 0.0 < v < 1.0 for v in values):
            raise ValueError("os pontos espaciais devem estar em (0, 1)")
        return values

    @field_validator("c_candidates")
    @classmethod
    def _check_c(cls, values: list[float]) -> list[float]:
        if any(v <= 1.0 for v in values):
            raise ValueError("os candidatos a c devem ser > 1")
        return sorted(values)

    @model_validator(mode="after")
    def _check_regimes(self) -> "SweepConfig":
        if self.long_time_start < self.short_time_limit:
            raise ValueError("long_time_start deve ser ≥ short_time_limit")
        return self

    @property
    def point_count(self) -> int:
        return len(self.nu_list) * len(self.alpha_list) * len(self.t_grid) * len(self.xy_grid) ** 2

    class Config:
        json_schema_extra = {
            "example": {
                "nu_list": [-0.5, 0.0, 0.5, 1.0],
                "alpha_list": [2.0],
                "t_grid": [0.01, 0.1, 1.0],
                "xy_grid": [0.01, 0.25, 0.5, 0.75, 0.99],
                "tol": 1e-10
            }
        }


Regime = Literal["short", "intermediate", "long", "oracle"]
Verdict = Literal["WITHIN", "VIOLATED", "INCOMPLETE"]


class GridPoint(BaseModel):
    """Coordenadas (ν, α, t, x, y) de um ponto da varredura."""

    nu: float
    alpha: float
    t: float
    x: float
    y: float


class PointRecord(GridPoint):
    """Resultado de um ponto da varredura."""

    regime: Regime
    kernel: Optional[float] = None
    terms: Optional[int] = None
    env_lo: Optional[float] = None
    env_hi: Optional[float] = None
    ratio_lo: Optional[float] = Field(None, description="kernel / env_lo")
    ratio_hi: Optional[float] = Field(None, description="kernel / env_hi")
    c_used: Optional[float] = None
    error: Optional[str] = Field(None, description="Falha isolada deste ponto")

    def coordinates(self) -> GridPoint:
        return GridPoint(nu=self.nu, alpha=self.alpha, t=self.t, x=self.x, y=self.y)


class NuSummary(BaseModel):
    """Faixa de razões e constante c registradas para um ν."""

    nu: float
    min_ratio: Optional[float] = None
    max_ratio: Optional[float] = None
    c_used: Optional[float] = None
    evaluated: int = 0
    failed: int = 0
    verdict: Verdict


class ReportSummary(BaseModel):
    """Resumo de uma varredura."""

    min_ratio: Optional[float] = None
    max_ratio: Optional[float] = None
    argmin: Optional[GridPoint] = None
    argmax: Optional[GridPoint] = None
    lower_witness: Optional[float] = Field(None, description="Menor ratio_lo")
    upper_witness: Optional[float] = Field(None, description="Maior ratio_hi")
    c_used: Optional[float] = None
    verdict: Verdict
    evaluated: int = 0
    failed: int = 0
    per_nu: list[NuSummary] = Field(default_factory=list)
    t_floor_note: str = ""

    @model_validator(mode="after")
    def _check_order(self) -> "ReportSummary":
        if self.min_ratio is not None and self.max_ratio is not None and self.min_ratio > self.max_ratio:
            raise ValueError("min_ratio deve ser ≤ max_ratio")
        return self


class RatioReport(BaseModel):
    """Relatório completo: configuração, registros por ponto e resumo."""

    config: SweepConfig
    records: list[PointRecord] = Field(default_factory=list)
    summary: ReportSummary


# ============== Status ==============

class HealthResponse(BaseModel):
    """Response do health check."""

    status: str = Field(..., description="Status do serviço")
    cached_orders: list[float] = Field(..., description="Ordens ν com base espectral em cache")
    max_terms: int = Field(..., description="Limite de termos por série")

    class Config:
        json_schema_extra = {
            "example": {
                "status": "healthy",
                "cached_orders": [0.0, 0.5],
                "max_terms": 100000
            }
        }


class VersionResponse(BaseModel):
    """Response da versão da API."""

    version: str = Field(..., description="Versão da API")
    name: str = Field(..., description="Nome da aplicação")
    description: str = Field(..., description="Descrição da aplicação")

    class Config:
        json_schema_extra = {
            "example": {
                "version": "1.0.0",
                "name": "Fourier-Bessel Kernels API",
                "description": "Núcleos de calor, Poisson e subordinados de Fourier-Bessel em (0,1)"
            }
        }


class ErrorResponse(BaseModel):
    """Response de erro padrão."""

    error: str = Field(..., description="Tipo do erro")
    message: str = Field(..., description="Mensagem descritiva do erro")
    details: Optional[dict] = Field(None, description="Detalhes adicionais")

    class Config:
        json_schema_extra = {
            "example": {
                "error": "TimeBelowMinimumError",
                "message": "t=0.0001 está abaixo de t_min=0.001 para alpha=2",
                "details": None
            }
        }
