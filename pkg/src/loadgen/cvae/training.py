"""Seeded minibatch training loop for the conditional VAE."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from loadgen.cvae.losses import kl_loss, kl_loss_grads, recon_loss, recon_loss_grads
from loadgen.cvae.model import ConditionalVae, CvaeConfig, reparameterize
from loadgen.errors import DimensionError, TrainingDivergedError
from loadgen.nn import AdamState, adam_step

log = logging.getLogger(__name__)


@dataclass
class EpochLosses:
    epoch: int
    train_kl_beta: float
    train_recon: float
    test_kl_beta: float
    test_recon: float

    @property
    def train_total(self) -> float:
        return self.train_kl_beta + self.train_recon

    @property
    def test_total(self) -> float:
        return self.test_kl_beta + self.test_recon


@dataclass
class TrainResult:
    model: ConditionalVae
    history: list[EpochLosses]


def step_losses_and_grads(model: ConditionalVae, x: np.ndarray, c: np.ndarray,
                          eps: np.ndarray):
    """One forward/backward pass with a fixed noise draw.

    Returns (kl, recon, grads) where grads follows model.parameters()
    order. Exposed separately from the loop so the gradient can be
    checked against finite differences with eps frozen.
    """
    beta = model.config.beta
    latent = model.config.latent_dim

    posterior, enc_tape = model.encoder.forward(np.hstack([x, c]), want_tape=True)
    z = reparameterize(posterior, eps)
    output, dec_tape = model.decoder.forward(np.hstack([z, c]), want_tape=True)

    kl = kl_loss(posterior)
    recon = recon_loss(x, output)

    d_out_mean, d_out_log_var = recon_loss_grads(x, output)
    dec_grads, d_dec_in = model.decoder.backward(dec_tape, d_out_mean, d_out_log_var)
    d_z = d_dec_in[:, :latent]

    d_kl_mean, d_kl_log_var = kl_loss_grads(posterior)
    # z = mean + eps*exp(log_var/2): the path through z adds to the KL path.
    d_post_mean = d_z + beta * d_kl_mean
    d_post_log_var = d_z * eps * 0.5 * posterior.std + beta * d_kl_log_var
    enc_grads, _ = model.encoder.backward(enc_tape, d_post_mean, d_post_log_var)

    return kl, recon, enc_grads + dec_grads


def evaluate_losses(model: ConditionalVae, x: np.ndarray, c: np.ndarray,
                    rng: np.random.Generator, batch_size: int = 8192):
    """(kl, recon) over a dataset with one noise draw per sample."""
    n = x.shape[0]
    if n == 0:
        return math.nan, math.nan
    kl_sum = 0.0
    re_sum = 0.0
    for start in range(0, n, batch_size):
        xb = x[start:start + batch_size]
        cb = c[start:start + batch_size]
        posterior = model.encode(xb, cb)
        eps = rng.standard_normal(posterior.mean.shape)
        output = model.decode(reparameterize(posterior, eps), cb)
        kl_sum += kl_loss(posterior) * xb.shape[0]
        re_sum += recon_loss(xb, output) * xb.shape[0]
    return kl_sum / n, re_sum / n


def train(train_x: np.ndarray, train_c: np.ndarray, test_x: np.ndarray,
          test_c: np.ndarray, config: CvaeConfig,
          model: ConditionalVae | None = None) -> TrainResult:
    """Train for config.epochs passes over seeded reshuffled minibatches.

    Per-epoch train losses are the batch-size weighted averages of the
    minibatch losses seen during the epoch; test losses are evaluated on
    the held-out set after each epoch. Raises TrainingDivergedError as
    soon as any loss turns non-finite.
    """
    train_x = np.asarray(train_x, dtype=np.float64)
    train_c = np.asarray(train_c, dtype=np.float64)
    if train_x.shape[0] != train_c.shape[0]:
        raise DimensionError("every training profile needs a condition vector")

    if model is None:
        model = ConditionalVae.create(config)
    params = model.parameters()
    adam = AdamState.for_params(params, alpha=config.learning_rate)

    root = np.random.SeedSequence(config.seed)
    shuffle_rng = np.random.default_rng(root.spawn(1)[0])
    eval_rng = np.random.default_rng(root.spawn(1)[0])

    n = train_x.shape[0]
    beta = config.beta
    history: list[EpochLosses] = []
    for epoch in range(config.epochs):
        order = shuffle_rng.permutation(n)
        kl_acc = 0.0
        re_acc = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            xb = train_x[idx]
            cb = train_c[idx]
            eps = shuffle_rng.standard_normal((xb.shape[0], config.latent_dim))
            kl, recon, grads = step_losses_and_grads(model, xb, cb, eps)
            if not (math.isfinite(kl) and math.isfinite(recon)):
                raise TrainingDivergedError(
                    f"non-finite loss at epoch {epoch + 1}, batch {start // config.batch_size}: "
                    f"kl={kl}, recon={recon}"
                )
            adam_step(params, grads, adam)
            kl_acc += kl * xb.shape[0]
            re_acc += recon * xb.shape[0]
        test_kl, test_re = evaluate_losses(model, test_x, test_c, eval_rng)
        entry = EpochLosses(
            epoch=epoch + 1,
            train_kl_beta=beta * kl_acc / n,
            train_recon=re_acc / n,
            test_kl_beta=beta * test_kl,
            test_recon=test_re,
        )
        history.append(entry)
        log.info(
            "epoch %d/%d train=%.5f test=%.5f",
            entry.epoch, config.epochs, entry.train_total, entry.test_total,
        )
    return TrainResult(model=model, history=history)
