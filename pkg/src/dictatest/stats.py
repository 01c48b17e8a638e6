"""Interval estimates for Monte Carlo acceptance counts."""

from __future__ import annotations

from scipy.stats import norm


def wilson_interval(
    accepts: int, trials: int, confidence: float = 0.99
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= accepts <= trials:
        raise ValueError(f"accepts must be in [0, {trials}], got {accepts}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must be in (0, 1), got {confidence}")
    z = float(norm.ppf(0.5 + confidence / 2.0))
    p_hat = accepts / trials
    denom = 1.0 + z * z / trials
    center = (p_hat + z * z / (2 * trials)) / denom
    half = (z / denom) * (
        p_hat * (1.0 - p_hat) / trials + z * z / (4.0 * trials * trials)
    ) ** 0.5
    return max(0.0, center - half), min(1.0, center + half)


def binomial_stderr(accepts: int, trials: int) -> float:
    """Plug-in standard error sqrt(p(1-p)/trials) of the acceptance rate."""
    p_hat = accepts / trials
    return (p_hat * (1.0 - p_hat) / trials) ** 0.5
