"""Finite-sample checks for products and Cesàro means of bounded random variables."""
import logging
import math
from typing import List, Literal, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from utils.errors import DomainError

logger = logging.getLogger(__name__)

TRIAL_CHUNK = 1000


class ProductExperiment(BaseModel):
    """i.i.d. factors Z_k in [α, β] and the tail event ∏_{k≤n} Z_k ≥ ε.

    Families:
        constant:  Z ≡ value
        two_point: Z = low with probability p_low, else high
        uniform:   Z ~ U[low, high]
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    family: Literal["constant", "two_point", "uniform"] = "two_point"
    value: float = Field(0.9, gt=0)
    low: float = Field(0.5, gt=0)
    high: float = Field(1.5, gt=0)
    p_low: float = Field(0.5, gt=0, lt=1)
    horizon: int = Field(400, ge=1)
    trials: int = Field(10_000, ge=1)
    eps: float = Field(1.0, gt=0)

    @model_validator(mode="after")
    def _ordered_support(self):
        if self.family != "constant" and self.low > self.high:
            raise ValueError("need low <= high")
        return self

    @property
    def alpha(self) -> float:
        return self.value if self.family == "constant" else self.low

    @property
    def beta(self) -> float:
        return self.value if self.family == "constant" else self.high

    def sample_log_factors(self, rng: np.random.Generator, shape) -> np.ndarray:
        if self.family == "constant":
            return np.full(shape, math.log(self.value))
        u = rng.random(shape)
        if self.family == "two_point":
            return np.where(u < self.p_low, math.log(self.low), math.log(self.high))
        return np.log(self.low + (self.high - self.low) * u)


def expected_log_factor(exp: ProductExperiment) -> float:
    """E[ln Z] for the experiment's factor law."""
    if exp.family == "constant":
        return math.log(exp.value)
    if exp.family == "two_point":
        return exp.p_low * math.log(exp.low) + (1 - exp.p_low) * math.log(exp.high)
    a, b = exp.low, exp.high
    if a == b:
        return math.log(a)
    return ((b * math.log(b) - b) - (a * math.log(a) - a)) / (b - a)


def hoeffding_bound(gamma_n: float, n: int, alpha: float, beta: float, eps: float) -> float:
    """Upper bound exp(−2 (ln ε − γ_n)² / (n (ln β − ln α)²)) on Pr(∏_{k≤n} Z_k ≥ ε).

    γ_n = Σ_{k≤n} E[ln Z_k].

    Raises:
        DomainError: Outside the regime ln ε > γ_n, for α = β, or for
            non-positive arguments
    """
    if not 0 < alpha <= beta:
        raise DomainError(f"Need 0 < alpha <= beta, got ({alpha}, {beta})")
    if alpha == beta:
        raise DomainError("Zero-width factor support: alpha == beta")
    if eps <= 0 or n < 1:
        raise DomainError(f"Need eps > 0 and n >= 1, got eps={eps}, n={n}")
    gap = math.log(eps) - gamma_n
    if gap <= 0:
        raise DomainError(f"Bound needs ln(eps) > gamma_n, got ln(eps) - gamma_n = {gap}")
    return math.exp(-2.0 * gap ** 2 / (n * (math.log(beta) - math.log(alpha)) ** 2))


def empirical_product_tail(exp: ProductExperiment, seed) -> float:
    """Fraction of trials with ∏_{k≤n} Z_k ≥ ε, accumulated as Σ ln Z_k."""
    rng = np.random.default_rng(seed)
    threshold = math.log(exp.eps)
    hits = 0
    remaining = exp.trials
    while remaining > 0:
        chunk = min(TRIAL_CHUNK, remaining)
        log_products = exp.sample_log_factors(rng, (chunk, exp.horizon)).sum(axis=1)
        hits += int(np.count_nonzero(log_products >= threshold))
        remaining -= chunk
    return hits / exp.trials


def tail_table(exp: ProductExperiment, eps_list: Sequence[float], horizons: Sequence[int], seed) -> pd.DataFrame:
    """Empirical tail frequency against the Hoeffding bound, one row per (n, ε) in the bound regime."""
    rows = []
    drift = expected_log_factor(exp)
    for n in horizons:
        for eps in eps_list:
            gamma_n = n * drift
            if math.log(eps) <= gamma_n:
                logger.debug(f"Skipping n={n}, eps={eps}: outside the bound regime")
                continue
            run = exp.model_copy(update={"horizon": int(n), "eps": float(eps)})
            rows.append({
                "n": int(n),
                "eps": float(eps),
                "empirical_freq": empirical_product_tail(run, seed),
                "hoeffding_bound": hoeffding_bound(gamma_n, int(n), exp.alpha, exp.beta, eps),
            })
    return pd.DataFrame(rows, columns=["n", "eps", "empirical_freq", "hoeffding_bound"])


DriftFamily = Literal["zero", "rademacher", "uniform"]


def drift_std(family: str, scale: float = 1.0) -> float:
    """Standard deviation of one zero-mean drift sample."""
    return {"zero": 0.0, "rademacher": scale, "uniform": scale / math.sqrt(3.0)}[family]


def cesaro_path(family: DriftFamily, p: float, horizons: Sequence[int], seed, scale: float = 1.0) -> np.ndarray:
    """n^{−p} Σ_{k≤n} W_k along one seeded path, evaluated at each horizon.

    Longer horizons extend the same path.
    """
    if p <= 0.5:
        raise DomainError(f"Exponent must exceed 1/2, got {p}")
    if family not in ("zero", "rademacher", "uniform"):
        raise DomainError(f"Unknown drift family: {family}")
    horizons = np.asarray(horizons, dtype=int)
    if np.any(horizons < 1):
        raise DomainError("Horizons must be positive")
    n_max = int(horizons.max())
    u = np.random.default_rng(seed).random(n_max)
    if family == "zero":
        w = np.zeros(n_max)
    elif family == "rademacher":
        w = np.where(u < 0.5, -scale, scale)
    else:
        w = scale * (2.0 * u - 1.0)
    partial = np.cumsum(w)
    return partial[horizons - 1] / horizons.astype(float) ** p


def cesaro_drift(family: DriftFamily, p: float, n: int, seed, scale: float = 1.0) -> float:
    """Realised n^{−p} Σ_{k≤n} W_k for zero-mean bounded W_k."""
    return float(cesaro_path(family, p, [n], seed, scale)[0])


def cesaro_table(family: DriftFamily, p: float, horizons: Sequence[int], seeds: int, scale: float = 1.0) -> pd.DataFrame:
    """Drift per (seed, n), long format."""
    rows: List[dict] = []
    for seed in range(seeds):
        values = cesaro_path(family, p, horizons, seed, scale)
        rows.extend({"seed": seed, "n": int(n), "drift": float(v)} for n, v in zip(horizons, values))
    return pd.DataFrame(rows, columns=["seed", "n", "drift"])
