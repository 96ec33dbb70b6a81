"""
Testes da linha de comando `fbk`.
"""

import csv
import io
import json

import pytest

from app.cli import main


def _csv_rows(text: str) -> list[list[str]]:
    return list(csv.reader(io.StringIO(text)))


class TestSubcommands:
    """Testes dos subcomandos de consulta."""

    def test_zeros(self, capsys):
        """CSV n,lambda,d_norm com o float exato."""
        assert main(["zeros", "--nu", "-0.5", "--count", "2"]) == 0
        rows = _csv_rows(capsys.readouterr().out)
        assert rows[0] == ["n", "lambda", "d_norm"]
        assert float(rows[1][1]) == pytest.approx(1.5707963268, rel=1e-10)
        assert len(rows) == 3

    def test_kernel(self, capsys):
        """JSON com valor e diagnóstico."""
        code = main(["kernel", "--nu", "0.5", "--alpha", "1", "--t", "1", "--x", "0.5", "--y", "0.5"])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data["value"] == pytest.approx(0.346358, rel=1e-6)
        assert set(data) >= {"value", "terms_used", "tail_estimate"}

    def test_kernel_grid(self, capsys):
        """Uma linha por (t, x, y)."""
        code = main([
            "kernel-grid", "--nu", "0", "--alpha", "2",
            "--t", "0.05,0.1", "--points", "0.3,0.6",
        ])
        assert code == 0
        rows = _csv_rows(capsys.readouterr().out)
        assert rows[0] == ["x", "y", "t", "value", "terms"]
        assert len(rows) == 1 + 2 * 2 * 2
        # simetria G(x, y) = G(y, x)
        assert rows[2][3] == rows[3][3]

    def test_envelope(self, capsys):
        """JSON {lower, upper, c}."""
        code = main(["envelope", "--nu", "0.5", "--alpha", "2", "--t", "0.01", "--x", "0.5", "--y", "0.5", "--c", "2"])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data["upper"] == pytest.approx(40.0)
        assert data["c"] == 2.0

    def test_transfer_check(self, capsys):
        """JSON {lhs, rhs, rel_err}."""
        assert main(["transfer-check", "--alpha", "2", "--t", "0.1", "--x", "0.3", "--y", "0.5"]) == 0
        assert json.loads(capsys.readouterr().out)["rel_err"] < 1e-8


class TestErrors:
    """Testes dos erros na CLI."""

    def test_domain_error_is_json_on_stderr(self, capsys):
        """Erro da biblioteca: código 1 e JSON em stderr."""
        code = main(["kernel", "--nu", "0", "--alpha", "2", "--t", "1e-5", "--x", "0.5", "--y", "0.5"])
        assert code == 1
        error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert error["error"] == "TimeBelowMinimumError"

    def test_envelope_without_c(self, capsys):
        """α = 2 exige --c."""
        assert main(["envelope", "--nu", "0.5", "--alpha", "2", "--t", "0.01", "--x", "0.5", "--y", "0.5"]) == 1
        assert "DomainError" in capsys.readouterr().err

    def test_validation_error(self, capsys):
        """Validação do modelo: código 1."""
        assert main(["kernel", "--nu", "-2", "--alpha", "2", "--t", "0.1", "--x", "0.5", "--y", "0.5"]) == 1
        assert "ValidationError" in capsys.readouterr().err

    def test_bad_list(self):
        """Lista numérica inválida é erro do argparse."""
        with pytest.raises(SystemExit):
            main(["kernel-grid", "--nu", "0", "--alpha", "2", "--t", "a,b", "--points", "0.5"])


class TestSweepCommand:
    """Testes do subcomando sweep."""

    @pytest.fixture
    def config_file(self, tmp_path):
        path = tmp_path / "sweep.conf"
        path.write_text(
            "nu_list = 0\nalpha_list = 2\nt_grid = 0.05\nxy_grid = 0.3, 0.6\nheat_bracket = 50\n",
            encoding="utf-8",
        )
        return path

    def test_sweep_to_file(self, config_file, tmp_path, capsys):
        """Formato pelo sufixo e veredito no código de saída."""
        out = tmp_path / "report.csv"
        code = main(["sweep", "--config", str(config_file), "--out", str(out)])
        assert code == 0
        assert out.read_text(encoding="utf-8").startswith("nu,alpha,t,x,y,kernel")
        assert "Veredito: WITHIN" in capsys.readouterr().err

    def test_sweep_json_stdout(self, config_file, capsys):
        """Sem --out, o relatório vai para stdout."""
        code = main(["sweep", "--config", str(config_file), "--format", "json", "--workers", "2"])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data["config"]["workers"] == 2
        assert data["summary"]["verdict"] == "WITHIN"

    def test_sweep_violated_exit_code(self, tmp_path, capsys):
        """VIOLATED sai com 2."""
        path = tmp_path / "tight.conf"
        path.write_text(
            "nu_list = 0\nalpha_list = 2\nt_grid = 0.05\nxy_grid = 0.3, 0.6\nheat_bracket = 1.01\n",
            encoding="utf-8",
        )
        assert main(["sweep", "--config", str(path), "--format", "csv"]) == 2

    def test_missing_config(self, tmp_path, capsys):
        """Arquivo inexistente: código 1."""
        assert main(["sweep", "--config", str(tmp_path / "nada.conf")]) == 1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
