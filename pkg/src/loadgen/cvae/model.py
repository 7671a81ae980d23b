"""The conditional VAE: configuration, encoder/decoder, reparameterization."""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, Field, field_validator

from loadgen.cvae.gaussian import GaussianHeadNet, GaussianParams
from loadgen.errors import DimensionError


class CvaeConfig(BaseModel):
    """Model and training hyperparameters.

    Defaults are the full-scale settings (96-dim profiles, three hidden
    layers of 800, 12 latent dims, beta 8.5, lr 1e-5, batch 1280, 1000
    epochs). Desk-scale runs override them via config files.
    """

    data_dim: int = Field(default=96, ge=1)
    latent_dim: int = Field(default=12, ge=1)
    condition_dim: int = Field(default=3, ge=1)
    encoder_hidden: list[int] = Field(default=[800, 800, 800])
    decoder_hidden: list[int] = Field(default=[800, 800, 800])
    beta: float = Field(default=8.5, gt=0)
    learning_rate: float = Field(default=1e-5, gt=0)
    batch_size: int = Field(default=1280, ge=1)
    epochs: int = Field(default=1000, ge=0)
    seed: int = 0

    @field_validator("encoder_hidden", "decoder_hidden")
    @classmethod
    def _positive_sizes(cls, sizes):
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError("hidden sizes must be a non-empty list of positive ints")
        return sizes


class ConditionalVae:
    """Encoder/decoder pair; the condition vector is concatenated to each input."""

    def __init__(self, config: CvaeConfig, encoder: GaussianHeadNet, decoder: GaussianHeadNet):
        self.config = config
        self.encoder = encoder
        self.decoder = decoder

    @classmethod
    def create(cls, config: CvaeConfig) -> "ConditionalVae":
        rng = np.random.default_rng(config.seed)
        encoder = GaussianHeadNet.create(
            config.data_dim + config.condition_dim, config.encoder_hidden,
            config.latent_dim, rng,
        )
        decoder = GaussianHeadNet.create(
            config.latent_dim + config.condition_dim, config.decoder_hidden,
            config.data_dim, rng,
        )
        return cls(config, encoder, decoder)

    def parameters(self) -> list[np.ndarray]:
        return self.encoder.parameters() + self.decoder.parameters()

    def _check_conditions(self, c: np.ndarray, n: int) -> np.ndarray:
        c = np.atleast_2d(np.asarray(c, dtype=np.float64))
        if c.shape != (n, self.config.condition_dim):
            raise DimensionError(
                f"conditions shape {c.shape}, expected ({n}, {self.config.condition_dim})"
            )
        return c

    def encode(self, x: np.ndarray, c: np.ndarray) -> GaussianParams:
        """Posterior parameters for a batch of (profile, condition) rows."""
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if x.shape[1] != self.config.data_dim:
            raise DimensionError(
                f"input has {x.shape[1]} columns, model expects {self.config.data_dim}"
            )
        c = self._check_conditions(c, x.shape[0])
        return self.encoder.forward(np.hstack([x, c]))

    def decode(self, z: np.ndarray, c: np.ndarray) -> GaussianParams:
        """Output-distribution parameters for a batch of (latent, condition) rows."""
        z = np.atleast_2d(np.asarray(z, dtype=np.float64))
        if z.shape[1] != self.config.latent_dim:
            raise DimensionError(
                f"latent has {z.shape[1]} columns, model expects {self.config.latent_dim}"
            )
        c = self._check_conditions(c, z.shape[0])
        return self.decoder.forward(np.hstack([z, c]))


def reparameterize(params: GaussianParams, eps: np.ndarray) -> np.ndarray:
    """z = mean + eps * std, elementwise; eps must match the mean's shape."""
    eps = np.asarray(eps, dtype=np.float64)
    if eps.shape != params.mean.shape:
        raise DimensionError(
            f"eps shape {eps.shape} does not match mean shape {params.mean.shape}"
        )
    return params.mean + eps * params.std
