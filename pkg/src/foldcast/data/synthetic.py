"""
foldcast - Synthetic Series

Deterministic generators for tests, benchmarks and the ``generate`` command.
Every generator draws from ``numpy.random.Generator(PCG64(seed))``.
"""

from collections.abc import Callable

import numpy as np

from foldcast.core.errors import ConfigurationError
from foldcast.data.csv_io import Dataset

HOURLY_LENGTH = 7056


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def constant_noise(n: int, seed: int, mu: float = 10.0, sigma: float = 1.0) -> np.ndarray:
    """mu plus iid Gaussian noise."""
    return mu + sigma * make_rng(seed).standard_normal(n)


def random_walk(n: int, seed: int, start: float = 100.0) -> np.ndarray:
    return start + np.cumsum(make_rng(seed).standard_normal(n))


def seasonal_trend(
    n: int,
    seed: int,
    season_length: int = 12,
    level: float = 100.0,
    slope: float = 0.5,
    amplitude: float = 0.2,
    noise: float = 1.0,
) -> np.ndarray:
    """Linear trend times a sine seasonal profile, plus Gaussian noise."""
    t = np.arange(n, dtype=np.float64)
    season = 1.0 + amplitude * np.sin(2.0 * np.pi * t / season_length)
    return (level + slope * t) * season + noise * make_rng(seed).standard_normal(n)


def hourly_temperature(n: int = HOURLY_LENGTH, seed: int = 0) -> np.ndarray:
    """Room-temperature-like hourly series: daily cycle, slow drift, AR(1) noise."""
    rng = make_rng(seed)
    t = np.arange(n, dtype=np.float64)
    daily = 1.5 * np.sin(2.0 * np.pi * (t - 6.0) / 24.0)
    drift = 0.8 * np.sin(2.0 * np.pi * t / (24.0 * 7.0))
    shocks = rng.normal(0.0, 0.2, n)
    ar = np.empty(n)
    ar[0] = shocks[0]
    for i in range(1, n):
        ar[i] = 0.8 * ar[i - 1] + shocks[i]
    return 21.0 + daily + drift + ar


def intermittent_demand(n: int, seed: int, p: float = 0.3, mean_size: float = 5.0) -> np.ndarray:
    """Bernoulli(p) occurrences with Poisson sizes (at least 1)."""
    rng = make_rng(seed)
    occurs = rng.random(n) < p
    sizes = 1.0 + rng.poisson(mean_size - 1.0, n)
    return np.where(occurs, sizes, 0.0)


def garch_returns(
    n: int,
    seed: int,
    omega: float = 0.05,
    a: float = 0.1,
    b: float = 0.85,
) -> np.ndarray:
    """Simulated GARCH(1,1) returns started at the unconditional variance."""
    rng = make_rng(seed)
    z = rng.standard_normal(n)
    out = np.empty(n)
    sigma2 = omega / (1.0 - a - b)
    for t in range(n):
        out[t] = np.sqrt(sigma2) * z[t]
        sigma2 = omega + a * out[t] ** 2 + b * sigma2
    return out


GENERATORS: dict[str, Callable[..., np.ndarray]] = {
    "constant": constant_noise,
    "random_walk": random_walk,
    "seasonal": seasonal_trend,
    "hourly": lambda n, seed: hourly_temperature(n, seed),
    "intermittent": intermittent_demand,
    "garch": garch_returns,
}


def synthetic_dataset(kind: str, n_series: int, length: int, seed: int = 0) -> Dataset:
    """``n_series`` independent series of one kind; series i uses seed + i.

    Raises:
        ConfigurationError: For unknown kinds or non-positive sizes
    """
    if kind not in GENERATORS:
        raise ConfigurationError(f"unknown generator {kind!r}; choose from {', '.join(GENERATORS)}")
    if n_series < 1 or length < 1:
        raise ConfigurationError("n_series and length must be positive")
    generate = GENERATORS[kind]
    return Dataset.from_values(
        [generate(length, seed + i) for i in range(n_series)],
        source=f"synthetic:{kind}",
    )
