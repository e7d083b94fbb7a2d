"""
Командная строка: fit, pre-table, simulate, optimize, members.

Коды выхода: 0 успех, 2 ошибка входных данных, 3 недостаточное качество
моделирования (доля неудачных реплик выше порога). Результат пишется в stdout,
диагностика в stderr.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence, TextIO

from pydantic import ValidationError

from cli import commands
from src import APP_ID, APP_VERSION
from src.core.errors import AllReplicatesFailedError, EstimationError, SimulationQualityError
from src.core.models.population import MomentConvention
from src.services.reference import get_printed_reference
from src.services.settings import get_settings

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SIMULATION = 3

CSV_HELP = """\
Формат CSV: две колонки x,y (x вспомогательная переменная, y изучаемая),
разделитель запятая, кодировка UTF-8, неотрицательные целые числа.
Первая строка "x,y" необязательна, пустые строки пропускаются.
"""

ESTIMATORS = "mean|ratio|product|exp-ratio|exp-product|exp-alpha|difference|general|member:<id>"


def _common_parent() -> argparse.ArgumentParser:
    settings = get_settings()
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "tsv"), default="json", help="формат вывода")
    p.add_argument("--convention", choices=[c.value for c in MomentConvention],
                   default=settings.convention.value, help="конвенция моментов для теории")
    p.add_argument("--verbose", action="store_true", help="журнал событий уровня DEBUG в stderr")
    return p


def _gamma_parent() -> argparse.ArgumentParser:
    settings = get_settings()
    g = get_printed_reference().gammas
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--gamma1", type=float, default=g.gamma1)
    p.add_argument("--gamma2", type=float, default=g.gamma2)
    p.add_argument("--gamma3", type=float, default=g.gamma3)
    p.add_argument("--n", type=int, default=settings.sample_size, help="объём выборки")
    return p


def _mc_parent() -> argparse.ArgumentParser:
    settings = get_settings()
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--replicates", type=int, default=settings.replicates)
    p.add_argument("--seed", type=int, default=settings.master_seed, help="главное зерно (uint64)")
    p.add_argument("--workers", type=int, default=settings.workers)
    p.add_argument("--design", choices=("iid", "srswor"), default="iid")
    p.add_argument("--population-size", type=int, default=None, help="N для плана srswor")
    return p


def build_parser() -> argparse.ArgumentParser:
    common, gammas, mc = _common_parent(), _gamma_parent(), _mc_parent()
    parser = argparse.ArgumentParser(prog=APP_ID, description="Оценки среднего пуассоновской популяции")
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="оценка γ и критерий согласия",
                       epilog=CSV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("path", help="CSV с парами x,y")
    p.add_argument("--clamp", action="store_true", help="обнулять отрицательные компоненты вместо ошибки")
    p.set_defaults(handler=commands.cmd_fit)

    p = sub.add_parser("pre-table", parents=[common, gammas], help="смещение, MSE и PRE всех оценок")
    p.set_defaults(handler=commands.cmd_pre_table)

    p = sub.add_parser("simulate", parents=[common, gammas, mc], help="Монте-Карло для одной оценки")
    p.add_argument("--estimator", default="mean", help=ESTIMATORS)
    p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    p.set_defaults(handler=commands.cmd_simulate)

    p = sub.add_parser("optimize", parents=[common, gammas, mc], help="эмпирический оптимум параметра")
    p.add_argument("--family", choices=("alpha", "b", "weights"), required=True)
    p.add_argument("--grid-start", type=float, default=None)
    p.add_argument("--grid-stop", type=float, default=None)
    p.add_argument("--grid-step", type=float, default=None)
    p.add_argument("--member", default="q4", help="член семейства для --family weights")
    p.add_argument("--pin-w2", action="store_true", help="искать только w1 при w2 = 0")
    p.set_defaults(handler=commands.cmd_optimize)

    p = sub.add_parser("members", parents=[common, gammas], help="члены семейства t_m")
    p.set_defaults(handler=commands.cmd_members)
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s %(message)s",
    )
    logging.getLogger().setLevel(logging.DEBUG if verbose else logging.INFO)


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    out = stdout or sys.stdout
    try:
        out.write(args.handler(args))
    except (SimulationQualityError, AllReplicatesFailedError) as e:
        print(f"{APP_ID}: {e}", file=sys.stderr)
        return EXIT_SIMULATION
    except (EstimationError, ValidationError, FileNotFoundError) as e:
        print(f"{APP_ID}: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
