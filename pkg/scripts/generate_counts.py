"""
Генерация CSV с парами счётчиков (x, y) тривариантной редукцией.
По умолчанию параметры опубликованного примера; файл читается `main.py fit`.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.core.errors import EstimationError  # noqa: E402
from src.core.models.population import GammaTriple  # noqa: E402
from src.core.models.sample import SeedSpec  # noqa: E402
from src.infrastructure.csv_source import CsvCountSource  # noqa: E402
from src.services.reference import PrintedReference  # noqa: E402
from src.services.synth import draw_bivariate_sample  # noqa: E402


def main():
    example = PrintedReference().gammas
    parser = argparse.ArgumentParser()
    parser.add_argument("path")
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--gamma1", type=float, default=example.gamma1)
    parser.add_argument("--gamma2", type=float, default=example.gamma2)
    parser.add_argument("--gamma3", type=float, default=example.gamma3)
    args = parser.parse_args()

    try:
        g = GammaTriple(gamma1=args.gamma1, gamma2=args.gamma2, gamma3=args.gamma3)
        sample = draw_bivariate_sample(g, args.n, SeedSpec(master_seed=args.seed))
    except (EstimationError, ValueError) as exc:
        print(f"ERROR: {exc}")
        sys.exit(2)
    CsvCountSource(Path(args.path)).write_sample(sample)
    print(f"Done. pairs={len(sample)}, path={args.path}")


if __name__ == "__main__":
    main()
