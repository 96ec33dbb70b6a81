"""
Hierarquia de exceções do domínio.
Compartilhada pela biblioteca numérica, pela CLI e pela API HTTP.
"""

from typing import Any, Optional


class FourierBesselError(Exception):
    """Erro base de todas as operações da biblioteca."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        """Representação no formato ErrorResponse."""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": self.details or None,
        }


class DomainError(FourierBesselError, ValueError):
    """Argumento fora do domínio declarado da operação."""


class UnsupportedCaseError(DomainError):
    """Combinação de parâmetros sem implementação (ex.: transferência com d ≥ 2)."""


class TimeBelowMinimumError(DomainError):
    """Tempo abaixo de t_min: a série exigiria termos demais."""

    def __init__(self, t: float, t_min: float, alpha: float):
        super().__init__(
            f"t={t:g} está abaixo de t_min={t_min:g} para alpha={alpha:g}. "
            "Use as formas fechadas (nu = ±1/2, alpha ∈ {1, 2}) ou a checagem "
            "de transferência d=1 (transfer-check) para tempos menores.",
            {"t": t, "t_min": t_min, "alpha": alpha,
             "alternatives": ["poisson_closed_form", "heat_closed_form", "interval_transference_check"]},
        )


class ConvergenceError(FourierBesselError):
    """Iteração de Newton para zeros de J_ν não convergiu."""

    def __init__(self, n: int, nu: float, last_iterate: float, iterations: int):
        super().__init__(
            f"Zero n={n} de J_{nu:g} não convergiu após {iterations} iterações "
            f"(último iterado {last_iterate!r})",
            {"n": n, "nu": nu, "last_iterate": last_iterate, "iterations": iterations},
        )
        self.n = n
        self.nu = nu
        self.last_iterate = last_iterate


class BasisCapacityError(FourierBesselError):
    """O truncamento pede mais autofunções do que MAX_TERMS permite."""

    def __init__(self, required: int, limit: int):
        super().__init__(
            f"Truncamento exige {required} termos; limite configurado é {limit}",
            {"required": required, "limit": limit},
        )
        self.required = required
        self.limit = limit


class QuadratureError(FourierBesselError):
    """Quadratura adaptativa não atingiu a tolerância."""

    def __init__(self, value: float, error_estimate: float, panels: int):
        super().__init__(
            f"Quadratura não convergiu: valor {value!r}, erro estimado {error_estimate:.3e} "
            f"com {panels} painéis",
            {"value": value, "error_estimate": error_estimate, "panels": panels},
        )
        self.value = value
        self.error_estimate = error_estimate


class SweepBudgetError(FourierBesselError):
    """Varredura excede o número máximo de pontos."""

    def __init__(self, points: int, limit: int):
        super().__init__(
            f"Varredura com {points} pontos excede o limite de {limit}",
            {"points": points, "limit": limit},
        )


class ReportExportError(FourierBesselError):
    """Falha de E/S ao exportar um relatório."""

    def __init__(self, path: str, reason: str):
        super().__init__(
            f"Não foi possível escrever o relatório em {path}: {reason}",
            {"path": path},
        )
        self.path = path
