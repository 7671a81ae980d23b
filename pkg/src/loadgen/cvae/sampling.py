"""Profile generation from a trained decoder, plus condition builders.

The latent code for each generated profile is drawn from the standard
normal prior; with noise enabled the output is mean' + eps * std', and
without it the bare mean'. Randomness uses one independent child stream
per sample (spawned from the call seed), so chunked, parallel and serial
generation all produce identical output, and the noisy and noise-free
variants share the same latent draws for a given seed.
"""

from __future__ import annotations

import numpy as np

from loadgen.cvae.model import ConditionalVae
from loadgen.errors import DimensionError

SIZE_CLASS_RANGES = {
    "small": (0.0, 0.3),
    "medium": (0.3, 0.7),
    "large": (0.7, 1.0),
}

_DECODE_CHUNK = 8192


def draw_generation_randoms(seed: int, n: int, latent_dim: int, data_dim: int,
                            with_noise: bool):
    """(Z, EPS) drawn from per-sample child streams of ``seed``.

    EPS is None when ``with_noise`` is false; the latent draws are
    identical either way.
    """
    children = np.random.SeedSequence(seed).spawn(n)
    z = np.empty((n, latent_dim))
    eps = np.empty((n, data_dim)) if with_noise else None
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        z[i] = rng.standard_normal(latent_dim)
        if with_noise:
            eps[i] = rng.standard_normal(data_dim)
    return z, eps


def generate(model: ConditionalVae, conditions: np.ndarray, noise: bool, seed: int) -> np.ndarray:
    """Generate one profile per condition row, deterministically per seed."""
    conditions = np.atleast_2d(np.asarray(conditions, dtype=np.float64))
    n = conditions.shape[0]
    if n == 0:
        raise DimensionError("conditions must be non-empty")
    if conditions.shape[1] != model.config.condition_dim:
        raise DimensionError(
            f"conditions have {conditions.shape[1]} columns, model expects "
            f"{model.config.condition_dim}"
        )
    z, eps = draw_generation_randoms(
        seed, n, model.config.latent_dim, model.config.data_dim, noise
    )
    out = np.empty((n, model.config.data_dim))
    for start in range(0, n, _DECODE_CHUNK):
        stop = min(start + _DECODE_CHUNK, n)
        params = model.decode(z[start:stop], conditions[start:stop])
        out[start:stop] = params.mean
        if noise:
            out[start:stop] += eps[start:stop] * params.std
    return out


def match_training_conditions(months: np.ndarray, ranks: np.ndarray) -> np.ndarray:
    """One condition row per training profile: (sin, cos) month encoding + rank.

    Reproduces the training set's month and per-user intensity
    composition exactly (copy semantics).
    """
    months = np.asarray(months, dtype=np.float64)
    ranks = np.asarray(ranks, dtype=np.float64)
    if months.shape != ranks.shape or months.ndim != 1 or months.size == 0:
        raise DimensionError("months and ranks must be equal-length non-empty vectors")
    angle = 2.0 * np.pi * months / 12.0
    return np.column_stack([np.sin(angle), np.cos(angle), ranks])


def class_sample_conditions(month: float, size_class: str, count: int,
                            seed: int) -> np.ndarray:
    """Conditions for a fixed month with ranks sampled uniformly in a size class.

    Classes cover the intensity-rank axis: small = bottom 30%, large =
    top 30%, medium = the 40% in between.
    """
    if size_class not in SIZE_CLASS_RANGES:
        raise ValueError(f"unknown size class {size_class!r}")
    if count < 1:
        raise DimensionError("count must be >= 1")
    lo, hi = SIZE_CLASS_RANGES[size_class]
    rng = np.random.default_rng(seed)
    ranks = rng.uniform(lo, hi, size=count)
    return match_training_conditions(np.full(count, float(month)), ranks)
