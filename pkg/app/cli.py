"""
Linha de comando `fbk`.

Subcomandos: zeros, kernel, kernel-grid, envelope, transfer-check e sweep.
Resultados vão para stdout (CSV ou JSON); logs e erros para stderr.
"""

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from app.config import configure_logging, settings
from app.errors import DomainError, FourierBesselError
from app.models import EnvelopeRequest, KernelQuery, SweepConfig, TransferCheckRequest
from app.services.envelopes import heat_envelope_interval, subordinated_envelope_interval
from app.services.harness import (
    exit_code,
    export_report,
    format_number,
    load_config,
    render_csv,
    render_json,
    run_sweep,
)
from app.services.kernels import KernelEvaluator, kernel_series
from app.services.spectrum import get_basis
from app.services.transference import interval_transference_check

# Configuração de logging
logger = logging.getLogger(__name__)


def _float_list(raw: str) -> list[float]:
    try:
        return [float(item) for item in raw.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"lista numérica inválida: {raw}") from e


# ============== Subcomandos ==============

def cmd_zeros(args: argparse.Namespace) -> int:
    """CSV n,lambda,d_norm."""
    if args.count < 1:
        raise DomainError("--count deve ser ≥ 1", {"count": args.count})
    basis = get_basis(args.nu, args.count)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "lambda", "d_norm"])
    for n in range(1, args.count + 1):
        writer.writerow([n, format_number(basis.zeros[n - 1]), format_number(basis.normalizers[n - 1])])
    return 0


def cmd_kernel(args: argparse.Namespace) -> int:
    """JSON {value, terms_used, tail_estimate, rounding_estimate}."""
    query = KernelQuery(nu=args.nu, alpha=args.alpha, t=args.t, x=args.x, y=args.y, tol=args.tol, psi=args.psi)
    print(kernel_series(query).model_dump_json())
    return 0


def cmd_kernel_grid(args: argparse.Namespace) -> int:
    """CSV x,y,t,value,terms sobre a grade tensorial, uma linha por ponto."""
    evaluator = KernelEvaluator(args.nu, args.points)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["x", "y", "t", "value", "terms"])
    for t in args.t:
        for x in args.points:
            for y in args.points:
                query = KernelQuery(nu=args.nu, alpha=args.alpha, t=t, x=x, y=y, tol=args.tol, psi=args.psi)
                result = evaluator.evaluate(query)
                writer.writerow([
                    format_number(x), format_number(y), format_number(t),
                    format_number(result.value), result.terms_used,
                ])
    return 0


def cmd_envelope(args: argparse.Namespace) -> int:
    """JSON {lower, upper, c}."""
    request = EnvelopeRequest(nu=args.nu, alpha=args.alpha, t=args.t, x=args.x, y=args.y, c=args.c)
    if request.alpha == 2.0:
        if request.c is None:
            raise DomainError("--c é obrigatório para alpha = 2", {"alpha": request.alpha})
        bounds = heat_envelope_interval(request.nu, request.t, request.x, request.y, request.c)
        payload = {"lower": bounds.lower, "upper": bounds.upper, "c": bounds.constant_c}
    else:
        value = subordinated_envelope_interval(request.nu, request.alpha, request.t, request.x, request.y)
        payload = {"lower": value, "upper": value, "c": None}
    print(json.dumps(payload))
    return 0


def cmd_transfer_check(args: argparse.Namespace) -> int:
    """JSON {lhs, rhs, rel_err, tail_estimate}."""
    request = TransferCheckRequest(alpha=args.alpha, t=args.t, x=args.x, y=args.y)
    print(interval_transference_check(request.alpha, request.t, request.x, request.y).model_dump_json())
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    """Roda a varredura; o código de saída reflete o veredito."""
    config = load_config(args.config)
    if args.workers is not None:
        config = SweepConfig(**{**config.model_dump(), "workers": args.workers})
    report = run_sweep(config)
    fmt = args.format or (Path(args.out).suffix.lstrip(".").lower() if args.out else "json")
    if args.out:
        export_report(report, fmt, args.out)
    elif fmt == "csv":
        sys.stdout.write(render_csv(report))
    elif fmt == "json":
        sys.stdout.write(render_json(report) + "\n")
    else:
        raise DomainError(f"Formato '{fmt}' não suportado (use csv ou json)", {"format": fmt})
    print(f"Veredito: {report.summary.verdict}", file=sys.stderr)
    return exit_code(report.summary.verdict)


# ============== Parser ==============

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fbk",
        description="Núcleos de Fourier-Bessel em (0, 1): zeros, séries, envoltórias e varreduras.",
    )
    parser.add_argument("--debug", action="store_true", help="Logs em nível DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    zeros = sub.add_parser("zeros", help="Tabela de zeros λ_{n,ν} e normalizações d_{n,ν}")
    zeros.add_argument("--nu", type=float, required=True)
    zeros.add_argument("--count", type=int, default=10)
    zeros.set_defaults(handler=cmd_zeros)

    kernel = sub.add_parser("kernel", help="G_t^{ν,α}(x, y) em JSON")
    kernel.add_argument("--nu", type=float, required=True)
    kernel.add_argument("--alpha", type=float, required=True)
    kernel.add_argument("--t", type=float, required=True)
    kernel.add_argument("--x", type=float, required=True)
    kernel.add_argument("--y", type=float, required=True)
    kernel.add_argument("--tol", type=float, default=settings.DEFAULT_TOL)
    kernel.add_argument("--psi", action="store_true", help="Multiplica por (xy)^{ν+1/2}")
    kernel.set_defaults(handler=cmd_kernel)

    grid = sub.add_parser("kernel-grid", help="G sobre uma grade, em CSV")
    grid.add_argument("--nu", type=float, required=True)
    grid.add_argument("--alpha", type=float, required=True)
    grid.add_argument("--t", type=_float_list, required=True, help="Tempos separados por vírgula")
    grid.add_argument("--points", type=_float_list, required=True, help="Pontos em (0, 1) separados por vírgula")
    grid.add_argument("--tol", type=float, default=settings.DEFAULT_TOL)
    grid.add_argument("--psi", action="store_true")
    grid.set_defaults(handler=cmd_kernel_grid)

    envelope = sub.add_parser("envelope", help="Envoltórias no intervalo em JSON")
    envelope.add_argument("--nu", type=float, required=True)
    envelope.add_argument("--alpha", type=float, required=True)
    envelope.add_argument("--t", type=float, required=True)
    envelope.add_argument("--x", type=float, required=True)
    envelope.add_argument("--y", type=float, required=True)
    envelope.add_argument("--c", type=float, default=None)
    envelope.set_defaults(handler=cmd_envelope)

    transfer = sub.add_parser("transfer-check", help="Transferência exata em d = 1")
    transfer.add_argument("--alpha", type=float, required=True)
    transfer.add_argument("--t", type=float, required=True)
    transfer.add_argument("--x", type=float, required=True)
    transfer.add_argument("--y", type=float, required=True)
    transfer.set_defaults(handler=cmd_transfer_check)

    sweep = sub.add_parser("sweep", help="Varredura núcleo/envoltória")
    sweep.add_argument("--config", required=True, help="Arquivo `chave = valor`")
    sweep.add_argument("--out", default=None, help="Destino do relatório (stdout se ausente)")
    sweep.add_argument("--format", choices=["csv", "json"], default=None)
    sweep.add_argument("--workers", type=int, default=None)
    sweep.set_defaults(handler=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Executa a CLI.

    Returns:
        0/2/3 para o veredito de sweep, 0 nos demais sucessos e 1 em erros
    """
    args = build_parser().parse_args(argv)
    configure_logging(sys.stderr)
    if args.debug:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        return args.handler(args)
    except FourierBesselError as e:
        logger.debug("Falha na CLI", exc_info=True)
        print(json.dumps(e.to_dict(), default=str), file=sys.stderr)
        return 1
    except ValidationError as e:
        payload = {
            "error": "ValidationError",
            "message": "Dados de entrada inválidos",
            "details": {"errors": e.errors(include_url=False)},
        }
        print(json.dumps(payload, default=str), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
