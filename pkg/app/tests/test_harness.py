"""
Testes das varreduras: configuração, regimes, veredito e exportação.
"""

import csv
import io
import json
from unittest.mock import patch

import numpy as np
import pytest

from app.errors import DomainError, ReportExportError, SweepBudgetError
from app.models import KernelValue, RatioReport, SweepConfig
from app.services.harness import (
    CSV_COLUMNS,
    classify_regime,
    exit_code,
    export_report,
    load_config,
    parse_config_text,
    render_csv,
    render_json,
    run_sweep,
)


# ============== Fixtures ==============

@pytest.fixture
def proved_config():
    """Calor e Poisson com ν ≥ 1/2 em tempos curtos."""
    return SweepConfig(
        nu_list=[0.5, 1.0],
        alpha_list=[1.0, 2.0],
        t_grid=[0.01, 0.1],
        xy_grid=[0.25, 0.5, 0.75],
        heat_bracket=50.0,
        subordinated_bracket=50.0,
    )


@pytest.fixture
def interval_grid_config():
    """ν ∈ {−1/2, 0, 1/2, 1}, pontos de 0.01 a 0.99, t ∈ [0.01, 1], com os intervalos registrados no DESIGN."""
    return SweepConfig(
        nu_list=[-0.5, 0.0, 0.5, 1.0],
        alpha_list=[1.0, 1.5, 2.0],
        t_grid=[float(t) for t in np.geomspace(0.01, 1.0, 5)],
        xy_grid=[0.01, 0.25, 0.5, 0.75, 0.99],
        heat_bracket=1e6,
        subordinated_bracket=1e3,
    )


@pytest.fixture
def small_config():
    """Grade mínima para testes de exportação."""
    return SweepConfig(nu_list=[0.0], alpha_list=[2.0], t_grid=[0.05], xy_grid=[0.3, 0.6])


# ============== Configuração ==============

class TestConfig:
    """Testes do formato `chave = valor`."""

    def test_parse_lists_and_comments(self):
        """Listas, comentários e escalares."""
        config = parse_config_text(
            "# varredura de teste\n"
            "nu_list = -0.5, 0, 1   # três ordens\n"
            "alpha_list = 2\n"
            "t_grid = 0.01, 0.1\n"
            "xy_grid = 0.1, 0.5, 0.9\n"
            "\n"
            "tol = 1e-9\n"
            "kernel_method = series\n"
        )
        assert config.nu_list == [-0.5, 0.0, 1.0]
        assert config.alpha_list == [2.0]
        assert config.tol == 1e-9
        assert config.kernel_method == "series"
        assert config.point_count == 3 * 1 * 2 * 9

    def test_t_range_is_geometric(self):
        """t_range = início, fim, quantidade."""
        config = parse_config_text(
            "nu_list = 0\nalpha_list = 2\nt_range = 0.001, 1, 4\nxy_grid = 0.5\n"
        )
        assert config.t_grid == pytest.approx([0.001, 0.01, 0.1, 1.0])

    def test_duplicate_key(self):
        """Chave repetida (inclusive t_range depois de t_grid) é erro."""
        with pytest.raises(DomainError):
            parse_config_text("nu_list = 0\nnu_list = 1\n")
        with pytest.raises(DomainError):
            parse_config_text("t_grid = 0.1\nt_range = 0.1, 1, 3\n")

    def test_malformed_line(self):
        """Linha sem '=' é recusada com o número da linha."""
        with pytest.raises(DomainError) as info:
            parse_config_text("nu_list = 0\nalpha_list 2\n")
        assert info.value.details["line"] == 2

    def test_invalid_values(self):
        """Validação do modelo vira DomainError."""
        with pytest.raises(DomainError):
            parse_config_text("nu_list = -1\nalpha_list = 2\nt_grid = 0.1\nxy_grid = 0.5\n")
        with pytest.raises(DomainError):
            parse_config_text("nu_list = 0\nalpha_list = 2\nt_grid = 0.1\nxy_grid = 0.5, abc\n")

    def test_load_from_file(self, tmp_path):
        """load_config lê o arquivo em UTF-8."""
        path = tmp_path / "sweep.conf"
        path.write_text("nu_list = 0.5\nalpha_list = 1\nt_grid = 0.1\nxy_grid = 0.5\n", encoding="utf-8")
        assert load_config(path).nu_list == [0.5]

    def test_missing_file(self, tmp_path):
        """Arquivo inexistente é erro de domínio."""
        with pytest.raises(DomainError):
            load_config(tmp_path / "nada.conf")

    def test_regimes(self, small_config):
        """Curto até 1, intermediário até 5, longo depois; oráculo domina."""
        assert classify_regime(small_config, 0.5) == "short"
        assert classify_regime(small_config, 1.0) == "short"
        assert classify_regime(small_config, 2.0) == "intermediate"
        assert classify_regime(small_config, 5.0) == "long"
        oracle = small_config.model_copy(update={"envelope": "oracle"})
        assert classify_regime(oracle, 5.0) == "oracle"


# ============== Varredura ==============

class TestSweep:
    """Testes de run_sweep e do veredito."""

    def test_proved_case_is_within(self, proved_config):
        """Calor e Poisson ficam dentro do intervalo com c ≤ 10."""
        report = run_sweep(proved_config)
        assert len(report.records) == proved_config.point_count
        assert report.summary.failed == 0
        assert report.summary.verdict == "WITHIN"
        assert report.summary.c_used is not None and report.summary.c_used <= 10.0
        assert report.summary.min_ratio <= report.summary.max_ratio
        assert [s.nu for s in report.summary.per_nu] == [0.5, 1.0]
        assert all(r.c_used is None for r in report.records if r.alpha == 1.0)

    def test_interval_grid_within_recorded_brackets(self, interval_grid_config):
        """Grade completa de ν, α ∈ {1, 3/2, 2} e t ∈ [0.01, 1]: WITHIN com c ≤ 10."""
        report = run_sweep(interval_grid_config)
        assert report.summary.failed == 0
        assert report.summary.verdict == "WITHIN"
        assert report.summary.c_used is not None and report.summary.c_used <= 10.0
        assert report.summary.min_ratio >= 1e-6

    def test_default_heat_bracket_misses_unit_time(self):
        """Em t = 1 o fator e^{−tλ₁²} leva a razão inferior de ν = 1 abaixo de 1/10."""
        config = SweepConfig(nu_list=[1.0], alpha_list=[2.0], t_grid=[1.0], xy_grid=[0.01, 0.99])
        report = run_sweep(config)
        assert report.summary.verdict == "VIOLATED"
        assert report.summary.min_ratio < 1e-3

    def test_small_alpha_within_recorded_bracket(self):
        """α = 1/2 só a partir de t = 0.5, onde MAX_TERMS ainda basta."""
        config = SweepConfig(
            nu_list=[-0.5, 0.0, 0.5, 1.0],
            alpha_list=[0.5],
            t_grid=[0.5, 1.0],
            xy_grid=[0.01, 0.5, 0.99],
            subordinated_bracket=1e3,
        )
        report = run_sweep(config)
        assert report.summary.failed == 0
        assert report.summary.verdict == "WITHIN"

    def test_oracle_self_comparison(self):
        """Série contra a forma fechada: razões 1."""
        config = SweepConfig(
            nu_list=[0.5, -0.5],
            alpha_list=[1.0, 2.0],
            t_grid=[0.05, 0.5],
            xy_grid=[0.3, 0.6],
            kernel_method="series",
            envelope="oracle",
        )
        report = run_sweep(config)
        assert report.summary.verdict == "WITHIN"
        assert report.summary.min_ratio == pytest.approx(1.0, rel=1e-8)
        assert report.summary.max_ratio == pytest.approx(1.0, rel=1e-8)
        assert {r.regime for r in report.records} == {"oracle"}

    def test_oracle_without_closed_form_is_incomplete(self):
        """ν = 0 não tem forma fechada: pontos falham, veredito INCOMPLETE."""
        config = SweepConfig(nu_list=[0.0], alpha_list=[2.0], t_grid=[0.1], xy_grid=[0.5], envelope="oracle")
        report = run_sweep(config)
        assert report.summary.verdict == "INCOMPLETE"
        assert report.records[0].kernel is not None
        assert report.records[0].error.startswith("DomainError")
        assert exit_code(report.summary.verdict) == 3

    def test_tight_bracket_is_violated(self, small_config):
        """Intervalo quase 1 não comporta as constantes das envoltórias."""
        report = run_sweep(small_config.model_copy(update={"heat_bracket": 1.01}))
        assert report.summary.verdict == "VIOLATED"
        assert exit_code(report.summary.verdict) == 2

    def test_time_below_minimum_is_recorded(self):
        """α = 1/2 com t < (1e−3)^{1/2}: falha isolada, demais pontos seguem."""
        config = SweepConfig(nu_list=[0.0], alpha_list=[0.5], t_grid=[0.01, 1.0], xy_grid=[0.5])
        report = run_sweep(config)
        failed = [r for r in report.records if r.error is not None]
        assert len(failed) == 1 and failed[0].t == 0.01
        assert "TimeBelowMinimumError" in failed[0].error
        assert report.summary.failed == 1
        assert report.summary.verdict in ("INCOMPLETE", "VIOLATED")

    def test_long_time_regime(self):
        """t ≥ 5 usa (1−x)(1−y) e^{−tλ_1^α}."""
        config = SweepConfig(nu_list=[0.0], alpha_list=[2.0], t_grid=[6.0], xy_grid=[0.3, 0.6])
        report = run_sweep(config)
        assert {r.regime for r in report.records} == {"long"}
        assert report.summary.verdict == "WITHIN"
        assert all(r.env_lo == r.env_hi for r in report.records)

    @pytest.mark.parametrize("nu", [-0.5, 0.5])
    def test_long_time_half_orders(self, nu):
        """ν = ±1/2 em t ∈ [5, 20]: forma fechada sem perda de precisão e razão estável."""
        config = SweepConfig(nu_list=[nu], alpha_list=[2.0], t_grid=[5.0, 10.0, 20.0], xy_grid=[0.3, 0.6])
        report = run_sweep(config)
        assert report.summary.failed == 0
        assert report.summary.verdict == "WITHIN"
        by_time = {(r.t, r.x, r.y): r.ratio_lo for r in report.records}
        for x in (0.3, 0.6):
            for y in (0.3, 0.6):
                assert by_time[(20.0, x, y)] == pytest.approx(by_time[(10.0, x, y)], rel=1e-2)

    def test_cancelled_closed_form_falls_back_to_series(self, small_config):
        """No modo auto, forma fechada abaixo do ruído é refeita pela série."""
        noisy = KernelValue(value=1e-20, terms_used=3, tail_estimate=0.0, rounding_estimate=1e-16)
        config = small_config.model_copy(update={"nu_list": [0.5]})
        with patch("app.services.harness.closed_form_kernel", return_value=noisy):
            report = run_sweep(config)
        assert report.summary.failed == 0
        assert all(r.kernel is not None and r.kernel > 1e-16 for r in report.records)

    def test_precision_loss_is_a_failure(self, small_config):
        """|G| abaixo do ruído com kernel_method = closed não vira razão."""
        noisy = KernelValue(value=1e-20, terms_used=3, tail_estimate=0.0, rounding_estimate=1e-16)
        config = small_config.model_copy(update={"nu_list": [0.5], "kernel_method": "closed"})
        with patch("app.services.harness.closed_form_kernel", return_value=noisy):
            report = run_sweep(config)
        assert all(r.error.startswith("PrecisionLoss") for r in report.records)
        assert report.summary.verdict == "INCOMPLETE"

    def test_budget_guard(self, proved_config):
        """Grade acima do limite falha antes de calcular."""
        with patch("app.services.harness._compute_kernels") as compute:
            with pytest.raises(SweepBudgetError):
                run_sweep(proved_config, max_points=10)
            compute.assert_not_called()

    def test_deterministic(self, small_config):
        """Mesma configuração, mesmo CSV byte a byte."""
        assert render_csv(run_sweep(small_config)) == render_csv(run_sweep(small_config))

    def test_workers_do_not_change_results(self, proved_config):
        """Paralelismo preserva a ordem e os valores."""
        serial = run_sweep(proved_config)
        parallel = run_sweep(proved_config.model_copy(update={"workers": 3}))
        assert render_csv(serial) == render_csv(parallel)

    def test_t_floor_note(self, small_config):
        """O resumo registra o menor t sondado."""
        assert "0.05" in run_sweep(small_config).summary.t_floor_note


# ============== Exportação ==============

class TestExport:
    """Testes de CSV e JSON."""

    def test_csv_layout(self, small_config):
        """Cabeçalho fixo e uma linha por ponto."""
        report = run_sweep(small_config)
        rows = list(csv.reader(io.StringIO(render_csv(report))))
        assert rows[0] == CSV_COLUMNS
        assert len(rows) == 1 + small_config.point_count
        assert float(rows[1][5]) == report.records[0].kernel

    def test_csv_empty_fields_for_failures(self):
        """Pontos com falha têm campos numéricos vazios."""
        config = SweepConfig(nu_list=[0.0], alpha_list=[0.5], t_grid=[0.01], xy_grid=[0.5])
        rows = list(csv.reader(io.StringIO(render_csv(run_sweep(config)))))
        assert rows[1][5:] == ["", "", "", "", ""]

    def test_json_round_trip(self, small_config):
        """JSON reconstrói o relatório exatamente."""
        report = run_sweep(small_config)
        assert RatioReport.model_validate_json(render_json(report)) == report

    def test_csv_and_json_share_number_format(self, small_config):
        """Cada número do CSV é o repr exato do mesmo valor no JSON."""
        report = run_sweep(small_config)
        rows = list(csv.reader(io.StringIO(render_csv(report))))
        records = json.loads(render_json(report))["records"]
        for row, record in zip(rows[1:], records):
            for column, text in zip(CSV_COLUMNS, row):
                assert text == repr(record[column])
                digits = text.split("e")[0].replace("-", "").replace(".", "").strip("0")
                assert len(digits) <= 17

    def test_export_to_file(self, small_config, tmp_path):
        """export_report escreve no caminho pedido."""
        report = run_sweep(small_config)
        target = tmp_path / "report.csv"
        export_report(report, "csv", target)
        assert target.read_text(encoding="utf-8") == render_csv(report)

    def test_unknown_format(self, small_config, tmp_path):
        """Somente csv e json."""
        with pytest.raises(DomainError):
            export_report(run_sweep(small_config), "xml", tmp_path / "r.xml")

    def test_unwritable_path(self, small_config, tmp_path):
        """Diretório inexistente vira ReportExportError."""
        with pytest.raises(ReportExportError):
            export_report(run_sweep(small_config), "json", tmp_path / "nao" / "existe" / "r.json")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
