"""Training objective: closed-form KL term plus Gaussian reconstruction term.

Both terms are batch means (not sums), so ``beta`` keeps the same meaning
regardless of batch size. Per sample:

    kl    = 1/2 * sum_j (mean_j^2 + var_j - log var_j - 1)
    recon = 1/2 * sum_j ((x_j - mean'_j)^2 / var'_j + log var'_j)

kl is the divergence from the diagonal posterior to the standard-normal
prior; recon is the negative Gaussian log-likelihood of the input with
the constant d/2*log(2*pi) dropped.
"""

from __future__ import annotations

import numpy as np

from loadgen.cvae.gaussian import GaussianParams
from loadgen.errors import DimensionError


def kl_loss(posterior: GaussianParams) -> float:
    """Batch mean of KL(N(mean, var) || N(0, I))."""
    mean, log_var = posterior.mean, posterior.log_var
    per_sample = 0.5 * np.sum(mean**2 + np.exp(log_var) - log_var - 1.0, axis=-1)
    return float(np.mean(per_sample))


def kl_loss_grads(posterior: GaussianParams) -> tuple[np.ndarray, np.ndarray]:
    """(d kl / d mean, d kl / d log_var) for the batch-mean KL."""
    n = posterior.mean.shape[0]
    d_mean = posterior.mean / n
    d_log_var = 0.5 * (np.exp(posterior.log_var) - 1.0) / n
    return d_mean, d_log_var


def recon_loss(x: np.ndarray, output: GaussianParams) -> float:
    """Batch mean of the negative Gaussian log-likelihood (constant dropped)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != output.mean.shape:
        raise DimensionError(
            f"data shape {x.shape} does not match decoder output {output.mean.shape}"
        )
    sq = (x - output.mean) ** 2 * np.exp(-output.log_var)
    per_sample = 0.5 * np.sum(sq + output.log_var, axis=-1)
    return float(np.mean(per_sample))


def recon_loss_grads(x: np.ndarray, output: GaussianParams) -> tuple[np.ndarray, np.ndarray]:
    """(d recon / d mean', d recon / d log_var') for the batch-mean term."""
    n = x.shape[0]
    inv_var = np.exp(-output.log_var)
    d_mean = (output.mean - x) * inv_var / n
    d_log_var = 0.5 * (1.0 - (x - output.mean) ** 2 * inv_var) / n
    return d_mean, d_log_var


def total_loss(kl: float, recon: float, beta: float) -> float:
    """beta-weighted objective: beta * kl + recon."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    return beta * kl + recon
