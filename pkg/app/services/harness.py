"""
Varreduras de razões núcleo/envoltória.

- leitura do arquivo de configuração `chave = valor`
- run_sweep: núcleos por ν (tabela de autofunções compartilhada), envoltórias
  por regime de tempo, escolha da constante c, veredito
- exportação do relatório em CSV ou JSON
"""

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Iterable, Optional, Union

import numpy as np
from pydantic import ValidationError

from app.config import settings
from app.errors import DomainError, FourierBesselError, ReportExportError, SweepBudgetError
from app.models import (
    GridPoint,
    KernelQuery,
    KernelValue,
    NuSummary,
    PointRecord,
    RatioReport,
    Regime,
    ReportSummary,
    SweepConfig,
    Verdict,
)
from app.services.envelopes import heat_envelope_interval, longtime_envelope, subordinated_envelope_interval
from app.services.kernels import KernelEvaluator, closed_form_kernel, has_closed_form, minimum_time

# Configuração de logging
logger = logging.getLogger(__name__)

CSV_COLUMNS = ["nu", "alpha", "t", "x", "y", "kernel", "env_lo", "env_hi", "ratio_lo", "ratio_hi"]

EXIT_CODES: dict[str, int] = {"WITHIN": 0, "VIOLATED": 2, "INCOMPLETE": 3}

_LIST_KEYS = {"nu_list", "alpha_list", "t_grid", "xy_grid", "c_candidates"}


# ============== Configuração ==============

def _parse_numbers(key: str, raw: str, line_no: int) -> list[float]:
    try:
        return [float(item) for item in raw.split(",") if item.strip()]
    except ValueError as e:
        raise DomainError(
            f"Linha {line_no}: lista numérica inválida para '{key}'",
            {"line": line_no, "key": key, "value": raw},
        ) from e


def parse_config_text(text: str) -> SweepConfig:
    """
    Lê a configuração de varredura no formato de linhas `chave = valor`.

    `#` inicia comentário; listas são separadas por vírgulas e
    `t_range = início, fim, quantidade` gera uma grade geométrica.

    Args:
        text: Conteúdo do arquivo

    Returns:
        SweepConfig validada

    Raises:
        DomainError: linha malformada, chave repetida ou valores fora do domínio
    """
    values: dict[str, Any] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise DomainError(f"Linha {line_no}: esperado 'chave = valor'", {"line": line_no, "text": line})
        key, raw = (part.strip() for part in content.split("=", 1))
        if ("t_grid" if key == "t_range" else key) in values:
            raise DomainError(f"Linha {line_no}: chave '{key}' repetida", {"line": line_no, "key": key})
        if key == "t_range":
            numbers = _parse_numbers(key, raw, line_no)
            if len(numbers) != 3 or numbers[0] <= 0 or numbers[1] <= 0 or numbers[2] < 1:
                raise DomainError(
                    f"Linha {line_no}: t_range exige início > 0, fim > 0 e quantidade ≥ 1",
                    {"line": line_no, "value": raw},
                )
            values["t_grid"] = np.geomspace(numbers[0], numbers[1], int(numbers[2])).tolist()
        elif key in _LIST_KEYS:
            values[key] = _parse_numbers(key, raw, line_no)
        else:
            values[key] = raw
    try:
        return SweepConfig(**values)
    except ValidationError as e:
        raise DomainError("Configuração de varredura inválida", {"errors": e.errors(include_url=False)}) from e


def load_config(path: Union[str, Path]) -> SweepConfig:
    """Lê e valida um arquivo de configuração de varredura."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DomainError(f"Não foi possível ler {path}: {e.strerror}", {"path": str(path)}) from e
    return parse_config_text(text)


# ============== Regimes ==============

def classify_regime(config: SweepConfig, t: float) -> Regime:
    """Regime da envoltória: oráculo, tempo longo, intermediário ou curto."""
    if config.envelope == "oracle":
        return "oracle"
    if t >= config.long_time_start:
        return "long"
    if t > config.short_time_limit:
        return "intermediate"
    return "short"


def _bracket(config: SweepConfig, regime: Regime, alpha: float) -> float:
    if regime == "long":
        return config.long_time_bracket
    return config.heat_bracket if alpha == 2.0 else config.subordinated_bracket


def _grid(config: SweepConfig) -> list[GridPoint]:
    """Pontos em ordem fixa: ν, α, t, x, y."""
    return [
        GridPoint(nu=nu, alpha=alpha, t=t, x=x, y=y)
        for nu in config.nu_list
        for alpha in config.alpha_list
        for t in config.t_grid
        for x in config.xy_grid
        for y in config.xy_grid
    ]


# ============== Núcleos ==============

class _KernelTask:
    """Avalia o núcleo de um ponto, devolvendo o valor ou a mensagem de falha."""

    def __init__(self, config: SweepConfig):
        self.config = config
        self.evaluators = {nu: KernelEvaluator(nu, config.xy_grid) for nu in dict.fromkeys(config.nu_list)}

    def _use_closed_form(self, point: GridPoint) -> bool:
        method = self.config.kernel_method
        if method == "closed":
            if not has_closed_form(point.nu, point.alpha):
                raise DomainError(
                    f"Sem forma fechada para ν={point.nu:g}, α={point.alpha:g}",
                    {"nu": point.nu, "alpha": point.alpha},
                )
            return True
        return method == "auto" and has_closed_form(point.nu, point.alpha)

    def __call__(self, point: GridPoint) -> tuple[Optional[KernelValue], Optional[str]]:
        try:
            query = KernelQuery(**point.model_dump(), tol=self.config.tol)
            evaluator = self.evaluators[point.nu]
            if self._use_closed_form(point):
                result = closed_form_kernel(query)
                if self.config.kernel_method == "auto" and abs(result.value) <= result.rounding_estimate:
                    logger.debug(f"Forma fechada cancelou em {point}; usando a série")
                    result = evaluator.evaluate(query)
            else:
                result = evaluator.evaluate(query)
        except FourierBesselError as e:
            return None, f"{type(e).__name__}: {e.message}"
        if abs(result.value) <= result.rounding_estimate:
            return None, (
                f"PrecisionLoss: |G| = {abs(result.value):.3e} não supera o ruído "
                f"de arredondamento {result.rounding_estimate:.3e}"
            )
        return result, None


def _compute_kernels(config: SweepConfig, points: list[GridPoint]) -> list[tuple[Optional[KernelValue], Optional[str]]]:
    task = _KernelTask(config)
    if config.workers == 1:
        return [task(point) for point in points]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(task, points))


# ============== Envoltórias ==============

def _ratio(kernel: float, envelope: float) -> Optional[float]:
    # envoltória abaixo do menor float: razão infinita, não registrada
    return kernel / envelope if envelope > 0.0 else None


def _heat_ratios(point: GridPoint, kernel: float, c: float) -> tuple[float, float, Optional[float], Optional[float]]:
    bounds = heat_envelope_interval(point.nu, point.t, point.x, point.y, c)
    return bounds.lower, bounds.upper, _ratio(kernel, bounds.lower), _ratio(kernel, bounds.upper)


def _heat_ok(ratio_lo: Optional[float], ratio_hi: Optional[float], bracket: float) -> bool:
    lower_ok = ratio_lo is None or ratio_lo >= 1.0 / bracket
    upper_ok = ratio_hi is not None and ratio_hi <= bracket
    return lower_ok and upper_ok


def _two_sided_ok(ratio: Optional[float], bracket: float) -> bool:
    return ratio is not None and 1.0 / bracket <= ratio <= bracket


def _choose_c(config: SweepConfig, items: list[tuple[GridPoint, float]]) -> tuple[float, bool]:
    """Menor c candidato com o qual todos os pontos ficam no intervalo; senão o maior."""
    bracket = config.heat_bracket
    for c in config.c_candidates:
        if all(_heat_ok(*_heat_ratios(point, kernel, c)[2:], bracket) for point, kernel in items):
            return c, True
    return config.c_candidates[-1], False


def _record(point: GridPoint, regime: Regime, **fields) -> PointRecord:
    return PointRecord(**point.model_dump(), regime=regime, **fields)


def _envelope_records(config: SweepConfig, points: list[GridPoint],
                      kernels: list[tuple[Optional[KernelValue], Optional[str]]]) -> tuple[list[PointRecord], list[bool]]:
    regimes = [classify_regime(config, p.t) for p in points]

    # c por ν, escolhido sobre os pontos gaussianos (α = 2, tempos curtos)
    gaussian: dict[float, list[tuple[GridPoint, float]]] = {}
    for point, regime, (value, _) in zip(points, regimes, kernels):
        if value is not None and point.alpha == 2.0 and regime in ("short", "intermediate"):
            gaussian.setdefault(point.nu, []).append((point, value.value))
    chosen = {nu: _choose_c(config, items)[0] for nu, items in gaussian.items()}

    records: list[PointRecord] = []
    within: list[bool] = []
    for point, regime, (value, error) in zip(points, regimes, kernels):
        if value is None:
            logger.warning(f"Ponto {point.model_dump()} falhou: {error}")
            records.append(_record(point, regime, error=error))
            within.append(True)
            continue
        kernel = value.value
        bracket = _bracket(config, regime, point.alpha)
        try:
            if regime == "oracle":
                oracle = closed_form_kernel(KernelQuery(**point.model_dump(), tol=config.tol)).value
                ratio = _ratio(kernel, oracle)
                fields = dict(env_lo=oracle, env_hi=oracle, ratio_lo=ratio, ratio_hi=ratio)
                ok = _two_sided_ok(ratio, bracket)
            elif regime == "long":
                envelope = longtime_envelope(point.nu, point.alpha, point.t, point.x, point.y)
                ratio = _ratio(kernel, envelope)
                fields = dict(env_lo=envelope, env_hi=envelope, ratio_lo=ratio, ratio_hi=ratio)
                ok = _two_sided_ok(ratio, bracket)
            elif point.alpha == 2.0:
                c = chosen[point.nu]
                env_lo, env_hi, ratio_lo, ratio_hi = _heat_ratios(point, kernel, c)
                fields = dict(env_lo=env_lo, env_hi=env_hi, ratio_lo=ratio_lo, ratio_hi=ratio_hi, c_used=c)
                ok = _heat_ok(ratio_lo, ratio_hi, bracket)
            else:
                envelope = subordinated_envelope_interval(point.nu, point.alpha, point.t, point.x, point.y)
                ratio = _ratio(kernel, envelope)
                fields = dict(env_lo=envelope, env_hi=envelope, ratio_lo=ratio, ratio_hi=ratio)
                ok = _two_sided_ok(ratio, bracket)
        except FourierBesselError as e:
            message = f"{type(e).__name__}: {e.message}"
            logger.warning(f"Envoltória do ponto {point.model_dump()} falhou: {message}")
            records.append(_record(point, regime, kernel=kernel, terms=value.terms_used, error=message))
            within.append(True)
            continue
        records.append(_record(point, regime, kernel=kernel, terms=value.terms_used, **fields))
        within.append(ok)
    return records, within


# ============== Resumo ==============

def _verdict(violated: bool, failed: int) -> Verdict:
    if violated:
        return "VIOLATED"
    if failed:
        return "INCOMPLETE"
    return "WITHIN"


def _ratios(record: PointRecord) -> Iterable[float]:
    return (r for r in (record.ratio_lo, record.ratio_hi) if r is not None)


def _extremes(records: list[PointRecord]) -> tuple[Optional[tuple[float, PointRecord]], Optional[tuple[float, PointRecord]]]:
    low = high = None
    for record in records:
        for ratio in _ratios(record):
            if low is None or ratio < low[0]:
                low = (ratio, record)
            if high is None or ratio > high[0]:
                high = (ratio, record)
    return low, high


def _nu_summary(nu: float, records: list[PointRecord], within: list[bool]) -> NuSummary:
    low, high = _extremes(records)
    failed = sum(1 for r in records if r.error is not None)
    c_values = [r.c_used for r in records if r.c_used is not None]
    return NuSummary(
        nu=nu,
        min_ratio=low[0] if low else None,
        max_ratio=high[0] if high else None,
        c_used=max(c_values) if c_values else None,
        evaluated=len(records) - failed,
        failed=failed,
        verdict=_verdict(not all(within), failed),
    )


def _t_floor_note(config: SweepConfig) -> str:
    t_floor = min(config.t_grid)
    floors = ", ".join(f"α={a:g}: {minimum_time(a):g}" for a in config.alpha_list)
    return (
        f"Menor t da grade: {t_floor:g} (t_min da série {floors}). "
        "Efeitos de fronteira abaixo deste tempo não foram sondados."
    )


def summarize(config: SweepConfig, records: list[PointRecord], within: list[bool]) -> ReportSummary:
    """Faixas globais e por ν, testemunhas e veredito."""
    low, high = _extremes(records)
    failed = sum(1 for r in records if r.error is not None)
    lows = [r.ratio_lo for r in records if r.ratio_lo is not None]
    highs = [r.ratio_hi for r in records if r.ratio_hi is not None]
    per_nu = []
    for nu in dict.fromkeys(config.nu_list):
        indices = [i for i, r in enumerate(records) if r.nu == nu]
        per_nu.append(_nu_summary(nu, [records[i] for i in indices], [within[i] for i in indices]))
    c_values = [s.c_used for s in per_nu if s.c_used is not None]
    return ReportSummary(
        min_ratio=low[0] if low else None,
        max_ratio=high[0] if high else None,
        argmin=low[1].coordinates() if low else None,
        argmax=high[1].coordinates() if high else None,
        lower_witness=min(lows) if lows else None,
        upper_witness=max(highs) if highs else None,
        c_used=max(c_values) if c_values else None,
        verdict=_verdict(not all(within), failed),
        evaluated=len(records) - failed,
        failed=failed,
        per_nu=per_nu,
        t_floor_note=_t_floor_note(config),
    )


# ============== Varredura ==============

def run_sweep(config: SweepConfig, max_points: Optional[int] = None) -> RatioReport:
    """
    Executa a varredura completa.

    Args:
        config: Configuração validada
        max_points: Limite de pontos (padrão SWEEP_MAX_POINTS)

    Returns:
        RatioReport determinístico para a mesma configuração

    Raises:
        SweepBudgetError: grade acima do limite, antes de qualquer cálculo
    """
    limit = max_points or settings.SWEEP_MAX_POINTS
    if config.point_count > limit:
        raise SweepBudgetError(points=config.point_count, limit=limit)

    logger.info(
        f"Varredura: {config.point_count} pontos, ν={config.nu_list}, α={config.alpha_list}, "
        f"{config.workers} worker(s)"
    )
    points = _grid(config)
    kernels = _compute_kernels(config, points)
    records, within = _envelope_records(config, points, kernels)
    summary = summarize(config, records, within)
    logger.info(
        f"Veredito {summary.verdict}: razões em [{summary.min_ratio}, {summary.max_ratio}], "
        f"{summary.failed} falha(s)"
    )
    return RatioReport(config=config, records=records, summary=summary)


# ============== Exportação ==============

def format_number(value: Optional[float]) -> str:
    """repr mais curto que reproduz o float exato (no máximo 17 algarismos), o mesmo do JSON."""
    return "" if value is None else repr(float(value))


def render_csv(report: RatioReport) -> str:
    """CSV com as colunas fixas; números como em format_number."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in report.records:
        writer.writerow([
            format_number(r.nu),
            format_number(r.alpha),
            format_number(r.t),
            format_number(r.x),
            format_number(r.y),
            format_number(r.kernel),
            format_number(r.env_lo),
            format_number(r.env_hi),
            format_number(r.ratio_lo),
            format_number(r.ratio_hi),
        ])
    return buffer.getvalue()


def render_json(report: RatioReport) -> str:
    """JSON espelhando RatioReport; floats no mesmo repr mais curto do CSV."""
    return report.model_dump_json(indent=2)


def export_report(report: RatioReport, fmt: str, path: Union[str, Path]) -> None:
    """
    Escreve o relatório em `path`.

    Args:
        report: Relatório da varredura
        fmt: "csv" ou "json"
        path: Destino

    Raises:
        DomainError: formato desconhecido
        ReportExportError: falha de E/S
    """
    renderers = {"csv": render_csv, "json": render_json}
    if fmt not in renderers:
        raise DomainError(f"Formato '{fmt}' não suportado (use csv ou json)", {"format": fmt})
    path = Path(path)
    try:
        path.write_text(renderers[fmt](report), encoding="utf-8")
    except OSError as e:
        raise ReportExportError(path=str(path), reason=e.strerror or str(e)) from e
    logger.info(f"Relatório {fmt} com {len(report.records)} registros salvo em {path}")


def exit_code(verdict: Verdict) -> int:
    """0 = WITHIN, 2 = VIOLATED, 3 = INCOMPLETE."""
    return EXIT_CODES[verdict]
