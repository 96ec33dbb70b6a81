"""
Script para rodar a API localmente.
Para a linha de comando use `fbk` (ou `python -m app.cli`).
"""

import argparse
import sys

import uvicorn

from app.config import settings


def main():
    parser = argparse.ArgumentParser(description=f"{settings.APP_NAME} v{settings.APP_VERSION}")
    parser.add_argument("--host", default="0.0.0.0")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--reload", action="store_true", help="Recarrega ao editar o código")
    args = parser.parse_args()

    print("=" * 50)
    print(f"∑ {settings.APP_NAME}")
    print("=" * 50)
    print()
    print(f"📡 API:       http://localhost:{args.port}")
    print(f"📚 API Docs:  http://localhost:{args.port}/docs")
    print(f"🩺 Health:    http://localhost:{args.port}/api/v1/health")
    print()

    uvicorn.run(
        "app.main:app",
        host=args.host,
        port=args.port,
        reload=args.reload or settings.DEBUG,
        log_level="debug" if settings.DEBUG else "info",
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
