"""
Línea de comandos: prep, run y report.

Códigos de salida: 0 éxito, 2 error de entrada, 3 falla numérica, 1 otro error.
"""

import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from . import __version__
from .config import configurar_logging, settings
from .core.errors import ConfigError, DatasetError, MctsGaError, NumericError, StructureError
from .models.params import APPROACHES

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def exit_code_for(exc: BaseException) -> int:
    """Mapea una excepción a su código de salida."""
    if isinstance(exc, (NumericError, OverflowError, FloatingPointError)):
        return EXIT_NUMERIC
    if isinstance(exc, (DatasetError, ConfigError, StructureError, ValidationError, FileNotFoundError)):
        return EXIT_INPUT
    return EXIT_ERROR


def cmd_prep(args: argparse.Namespace) -> int:
    from .services.benchmark import run_prep

    rutas = run_prep(args.csv, args.seed, args.out or settings.OUTPUT_DIR, test_fraction=args.test_fraction)
    for nombre, ruta in rutas.items():
        print(f"✅ {nombre}: {ruta}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    from .services.benchmark import run_benchmark, summary_table
    from .services.run_config import load_run_config

    overrides = {
        "seed": args.seed,
        "output_dir": args.out,
        "approach": args.approach,
        "workers": args.workers,
    }
    cfg = load_run_config(args.config, overrides)
    print(f"🚀 Ejecutando {', '.join(cfg.approaches())} (semilla {cfg.seed}, {cfg.workers} workers)")

    report, path = run_benchmark(cfg)
    print(summary_table(report).to_string(float_format=lambda v: f"{v:.4f}"))
    print(f"✅ Reporte guardado en {path}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    from .services.benchmark import load_report, median_table, summary_table

    if len(args.reports) > 1:
        reports = [load_report(ruta) for ruta in args.reports]
        print(f"📊 Mediana de {len(reports)} reportes")
        print(median_table(reports).to_string(float_format=lambda v: f"{v:.4f}"))
        for ruta, report in zip(args.reports, reports):
            semilla = report.config.get("seed")
            print(f"   {ruta}: semilla {semilla}, " + ", ".join(f"{a.approach}={a.metrics.accuracy:.4f}" for a in report.approaches))
        return EXIT_OK

    ruta = args.reports[0]
    report = load_report(ruta)
    print(f"📊 Reporte {ruta} (train={report.train_size}, test={report.test_size})")
    print(summary_table(report).to_string(float_format=lambda v: f"{v:.4f}"))
    for entrada in report.approaches:
        cm = entrada.metrics.confusion
        print(f"   {entrada.approach}: tp={cm.tp} fp={cm.fp} fn={cm.fn} tn={cm.tn} ({entrada.wall_clock_seconds:.1f}s)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mctsga",
        description="Optimización de pesos de redes neuronales con GA guiado por MCTS",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="Nivel de logging (default: MCTSGA_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    prep = sub.add_parser("prep", help="Balancea, escala y particiona el CSV de entrada")
    prep.add_argument("csv", help="CSV con 8 features y la etiqueta en la última columna")
    prep.add_argument("--seed", type=int, default=0)
    prep.add_argument("--out", default=None, help="Directorio de salida")
    prep.add_argument("--test-fraction", type=float, default=None)
    prep.set_defaults(func=cmd_prep)

    run = sub.add_parser("run", help="Ejecuta uno o todos los enfoques y escribe report.json")
    run.add_argument("--config", default=None, help="Archivo clave=valor con claves anidadas por puntos")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--out", default=None, help="Directorio de salida")
    run.add_argument("--approach", choices=list(APPROACHES) + ["compare"], default=None)
    run.add_argument("--workers", type=int, default=None, help="Procesos de evaluación (1 = serie)")
    run.set_defaults(func=cmd_run)

    report = sub.add_parser("report", help="Muestra la tabla de resultados (mediana si se pasan varios report.json)")
    report.add_argument("reports", nargs="+", help="Ruta(s) a report.json")
    report.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logger = configurar_logging(level=args.log_level)

    try:
        return args.func(args)
    except KeyboardInterrupt:
        print("⚠️ Ejecución interrumpida", file=sys.stderr)
        return EXIT_ERROR
    except (MctsGaError, ValidationError, FileNotFoundError, OverflowError, FloatingPointError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return exit_code_for(e)
    except Exception as e:
        logger.exception("Error inesperado")
        print(f"❌ Error inesperado: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
