"""
foldcast - Command Line Entry Point

Subcommands:

    forecast      fit a model per series and print/write JSON forecasts
    bench         cold/warm timing plus holdout accuracy report
    conformal-cv  dump the K x h conformity score matrix per series
    generate      write a deterministic synthetic dataset as CSV

Exit codes: 0 success, 2 usage, 3 data error, 4 model error.
"""

import argparse
import signal
import sys
from collections.abc import Sequence
from pathlib import Path

import structlog
from prometheus_client import REGISTRY, write_to_textfile
from pydantic import ValidationError

from foldcast.conformal.config import ConformalConfig, ConformalMethod
from foldcast.core.config import settings
from foldcast.core.errors import (
    ConfigurationError,
    DataError,
    FoldcastError,
    LengthError,
    root_cause,
)
from foldcast.core.logging import setup_logging
from foldcast.data.csv_io import Dataset, ingest_csv, write_csv
from foldcast.data.synthetic import GENERATORS, synthetic_dataset
from foldcast.metrics import get_forecast_metrics
from foldcast.models.base import ForecastRequest
from foldcast.models.registry import MODEL_NAMES, build_model, parse_model_list
from foldcast.services.bench_service import run_bench
from foldcast.services.forecast_service import (
    run_conformal_cv,
    run_forecast,
    scores_to_frame,
    serialize_forecasts,
)

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_MODEL = 4


def exit_code_for(error: BaseException) -> int:
    """Map an exception (after unwrapping batch wrappers) to an exit code."""
    cause = root_cause(error)
    if isinstance(cause, ConfigurationError | ValidationError):
        return EXIT_USAGE
    if isinstance(cause, DataError | LengthError):
        return EXIT_DATA
    return EXIT_MODEL


def _levels(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid level list {text!r}") from None


def _load(path: str | None, synthetic: str | None, n_series: int, length: int, seed: int) -> Dataset:
    if synthetic is not None:
        return synthetic_dataset(synthetic, n_series=n_series, length=length, seed=seed)
    if path is None:
        raise ConfigurationError("one of --input or --synthetic is required")
    return ingest_csv(path)


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text + "\n")
    else:
        Path(output).write_text(text + "\n", encoding="utf-8")
        logger.info("Output written", path=output)


def cmd_forecast(args: argparse.Namespace) -> int:
    dataset = ingest_csv(args.input)
    spec = build_model(args.model, season_length=args.season_length, window=args.window)
    request = ForecastRequest(horizon=args.h, levels=args.level, include_fitted=args.fitted)
    conformal = None
    if args.conformal_windows is not None:
        conformal = ConformalConfig(
            n_windows=args.conformal_windows,
            h=args.h,
            method=ConformalMethod(args.conformal_method),
        )
    results = run_forecast(dataset, spec, request, conformal=conformal, workers=args.workers)
    _emit(serialize_forecasts(results), args.output)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    dataset = _load(args.input, args.synthetic, args.n_series, args.length, args.seed)
    report = run_bench(
        dataset,
        parse_model_list(args.models),
        horizon=args.h,
        warm_iters=args.warm_iters,
        seed=args.seed,
        season_length=args.season_length,
        output_dir=args.output,
    )
    failed = [row.model for row in report.rows if row.status != "ok"]
    if failed:
        logger.warning("Some bench cells failed", models=failed)
    return EXIT_OK


def cmd_conformal_cv(args: argparse.Namespace) -> int:
    dataset = ingest_csv(args.input)
    spec = build_model(args.model, season_length=args.season_length, window=args.window)
    config = ConformalConfig(n_windows=args.windows, h=args.h, method=ConformalMethod(args.method))
    frame = scores_to_frame(run_conformal_cv(dataset, spec, config, workers=args.workers))
    _emit(frame.to_csv(index=False).rstrip("\n"), args.output)
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    dataset = synthetic_dataset(args.kind, n_series=args.n_series, length=args.length, seed=args.seed)
    path = write_csv(dataset, args.output)
    logger.info("Synthetic dataset written", path=str(path), kind=args.kind, series=len(dataset))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foldcast", description="Functional time-series forecasting")
    parser.add_argument("--log-level", default=None, help="override FOLDCAST_LOG_LEVEL")
    parser.add_argument("--metrics-file", default=None, help="write Prometheus metrics to this textfile")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_options(p: argparse.ArgumentParser) -> None:
        p.add_argument("--model", required=True, choices=MODEL_NAMES)
        p.add_argument("--input", required=True, help="long-format CSV (unique_id,ds,y[,x...])")
        p.add_argument("--season-length", type=int, default=1)
        p.add_argument("--window", type=int, default=None, help="window for window-average models")
        p.add_argument("--workers", type=int, default=settings.BATCH_WORKERS)
        p.add_argument("--output", default=None)

    p = sub.add_parser("forecast", help="forecast every series of a CSV file")
    model_options(p)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--level", type=_levels, default=(), help="comma list, e.g. 80,95")
    p.add_argument("--fitted", action="store_true", help="include in-sample fitted values")
    p.add_argument("--conformal-windows", type=int, default=None)
    p.add_argument(
        "--conformal-method",
        choices=[m.value for m in ConformalMethod],
        default=ConformalMethod.SYMMETRIC.value,
    )
    p.set_defaults(handler=cmd_forecast)

    p = sub.add_parser("conformal-cv", help="dump conformity scores as CSV")
    model_options(p)
    p.add_argument("--windows", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument(
        "--method",
        choices=[m.value for m in ConformalMethod],
        default=ConformalMethod.SYMMETRIC.value,
    )
    p.set_defaults(handler=cmd_conformal_cv)

    p = sub.add_parser("bench", help="cold/warm timing and holdout accuracy")
    p.add_argument("--models", required=True, help="comma list or 'all'")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--input")
    source.add_argument("--synthetic", choices=sorted(GENERATORS))
    p.add_argument("--n-series", type=int, default=1)
    p.add_argument("--length", type=int, default=7056)
    p.add_argument("--h", type=int, default=settings.BENCH_HOLDOUT)
    p.add_argument("--warm-iters", type=int, default=settings.BENCH_WARM_ITERS)
    p.add_argument("--seed", type=int, default=settings.BENCH_SEED)
    p.add_argument("--season-length", type=int, default=1)
    p.add_argument("--output", required=True, help="directory for report.json and report.csv")
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("generate", help="write a synthetic dataset")
    p.add_argument("--kind", required=True, choices=sorted(GENERATORS))
    p.add_argument("--n-series", type=int, default=1)
    p.add_argument("--length", type=int, default=7056)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(handler=cmd_generate)

    return parser


def handle_signal(signum: int, frame: object) -> None:
    """Handle termination signals."""
    logger.info(f"Received signal {signum}, stopping")
    sys.exit(128 + signum)


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    signal.signal(signal.SIGTERM, handle_signal)

    metrics = get_forecast_metrics()
    metrics.set_build_info(version=settings.VERSION, environment=settings.ENV)

    try:
        code = args.handler(args)
    except (FoldcastError, ValidationError) as e:
        code = exit_code_for(e)
        logger.error("Command failed", command=args.command, error=str(e), exit_code=code)
        sys.stderr.write(f"foldcast: error: {e}\n")
    except (ArithmeticError, ValueError) as e:
        code = EXIT_MODEL
        logger.error("Command failed", command=args.command, error=str(e), exit_code=code)
        sys.stderr.write(f"foldcast: error: {e}\n")
    finally:
        if args.metrics_file:
            write_to_textfile(args.metrics_file, REGISTRY)
    return code


if __name__ == "__main__":
    sys.exit(main())
