"""Conditional VAE: model, losses, training loop, checkpointing, sampling."""

from loadgen.cvae.gaussian import GaussianHeadNet, GaussianParams, LOG_VAR_LIMIT
from loadgen.cvae.model import ConditionalVae, CvaeConfig
from loadgen.cvae.losses import kl_loss, recon_loss, total_loss
from loadgen.cvae.training import EpochLosses, TrainResult, train
from loadgen.cvae.checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from loadgen.cvae.sampling import (
    class_sample_conditions,
    draw_generation_randoms,
    generate,
    match_training_conditions,
)

__all__ = [
    "Checkpoint",
    "ConditionalVae",
    "CvaeConfig",
    "EpochLosses",
    "GaussianHeadNet",
    "GaussianParams",
    "LOG_VAR_LIMIT",
    "TrainResult",
    "class_sample_conditions",
    "draw_generation_randoms",
    "generate",
    "kl_loss",
    "load_checkpoint",
    "match_training_conditions",
    "recon_loss",
    "save_checkpoint",
    "total_loss",
    "train",
]
