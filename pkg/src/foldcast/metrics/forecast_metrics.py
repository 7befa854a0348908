"""
foldcast - Forecast Telemetry

Prometheus metrics for fitting, conformal calibration, batch forecasting and
the benchmark harness.

Metrics Categories:
- Model fits and fit failures
- Optimizer iterations
- Conformal windows
- Bench timings
"""

import time

import structlog
from prometheus_client import REGISTRY, CollectorRegistry, Counter, Gauge, Histogram, Info

from foldcast.core.config import settings

logger = structlog.get_logger(__name__)


class ForecastMetrics:
    """Centralized metrics for the forecasting engine and CLI."""

    def __init__(self, registry: CollectorRegistry = REGISTRY) -> None:
        self.registry = registry
        self._init_fit_metrics()
        self._init_conformal_metrics()
        self._init_batch_metrics()
        self._init_bench_metrics()
        self._init_info_metrics()

    def _init_fit_metrics(self) -> None:
        self.fits_total = Counter(
            "foldcast_fits_total",
            "Models fitted",
            ["model"],
            registry=self.registry,
        )

        self.fit_failures = Counter(
            "foldcast_fit_failures_total",
            "Model fits that raised",
            ["model", "reason"],
            registry=self.registry,
        )

        self.fit_duration = Histogram(
            "foldcast_fit_duration_seconds",
            "Wall time of a single model fit",
            ["model"],
            buckets=[0.0001, 0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0],
            registry=self.registry,
        )

        self.optimizer_iterations = Histogram(
            "foldcast_optimizer_iterations",
            "Projected-gradient iterations per fit",
            ["model"],
            buckets=[1, 5, 10, 25, 50, 100, 250, 500],
            registry=self.registry,
        )

    def _init_conformal_metrics(self) -> None:
        self.conformal_windows = Counter(
            "foldcast_conformal_windows_total",
            "Calibration windows scored",
            ["model"],
            registry=self.registry,
        )

        self.coverage_warnings = Counter(
            "foldcast_conformal_coverage_warnings_total",
            "Requested levels beyond the supportable coverage",
            ["method"],
            registry=self.registry,
        )

    def _init_batch_metrics(self) -> None:
        self.series_forecast = Counter(
            "foldcast_series_forecast_total",
            "Series forecast by the batch service",
            ["result"],
            registry=self.registry,
        )

        self.last_run_timestamp = Gauge(
            "foldcast_last_run_timestamp",
            "Timestamp of the last completed run (Unix epoch)",
            registry=self.registry,
        )

    def _init_bench_metrics(self) -> None:
        self.bench_cold_seconds = Gauge(
            "foldcast_bench_cold_seconds",
            "Cold-start fit_predict time",
            ["model", "dataset"],
            registry=self.registry,
        )

        self.bench_warm_seconds = Gauge(
            "foldcast_bench_warm_seconds",
            "Mean warm fit_predict time",
            ["model", "dataset"],
            registry=self.registry,
        )

        self.bench_failures = Counter(
            "foldcast_bench_failures_total",
            "Bench cells that failed",
            ["model"],
            registry=self.registry,
        )

    def _init_info_metrics(self) -> None:
        self.build_info = Info(
            "foldcast",
            "foldcast build information",
            registry=self.registry,
        )

    # Convenience methods

    def record_fit(self, model: str, duration: float, iterations: int | None = None) -> None:
        """Record a successful fit."""
        if not settings.METRICS_ENABLED:
            return
        self.fits_total.labels(model=model).inc()
        self.fit_duration.labels(model=model).observe(duration)
        if iterations is not None:
            self.optimizer_iterations.labels(model=model).observe(iterations)

    def record_fit_failure(self, model: str, reason: str) -> None:
        """Record a failed fit."""
        if settings.METRICS_ENABLED:
            self.fit_failures.labels(model=model, reason=reason).inc()

    def record_conformal(self, model: str, windows: int) -> None:
        if settings.METRICS_ENABLED:
            self.conformal_windows.labels(model=model).inc(windows)

    def record_coverage_warning(self, method: str) -> None:
        if settings.METRICS_ENABLED:
            self.coverage_warnings.labels(method=method).inc()

    def record_series(self, ok: bool) -> None:
        if settings.METRICS_ENABLED:
            self.series_forecast.labels(result="success" if ok else "failed").inc()

    def record_bench_cell(
        self,
        model: str,
        dataset: str,
        t_cold: float | None,
        t_warm: float | None,
    ) -> None:
        """Record one bench cell; missing timings count as a failure."""
        if not settings.METRICS_ENABLED:
            return
        if t_cold is None or t_warm is None:
            self.bench_failures.labels(model=model).inc()
            return
        self.bench_cold_seconds.labels(model=model, dataset=dataset).set(t_cold)
        self.bench_warm_seconds.labels(model=model, dataset=dataset).set(t_warm)

    def mark_run_complete(self) -> None:
        self.last_run_timestamp.set(time.time())

    def set_build_info(self, version: str, environment: str) -> None:
        """Set build info labels."""
        self.build_info.info({
            "version": version,
            "environment": environment,
        })


# Singleton instance
_forecast_metrics: ForecastMetrics | None = None


def get_forecast_metrics() -> ForecastMetrics:
    """Get global forecast metrics instance."""
    global _forecast_metrics
    if _forecast_metrics is None:
        _forecast_metrics = ForecastMetrics()
    return _forecast_metrics
