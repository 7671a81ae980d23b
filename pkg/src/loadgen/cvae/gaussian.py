"""Networks that parameterize diagonal Gaussians.

A GaussianHeadNet is a ReLU stack followed by two linear heads emitting
the mean and the log-variance of a diagonal normal distribution. The
same structure serves as encoder (over the input+condition) and decoder
(over the latent code+condition). Log-variance keeps the heads
unconstrained while guaranteeing a positive standard deviation; it is
clamped to +-LOG_VAR_LIMIT so exp() cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from loadgen.errors import DimensionError, LoadgenError
from loadgen.nn import (
    DenseLayer,
    GradientTape,
    dense_forward,
    init_dense_stack,
    stack_backward,
    stack_forward,
)
from loadgen.nn.layers import IDENTITY, RELU

LOG_VAR_LIMIT = 12.0


@dataclass
class GaussianParams:
    """Mean and log-variance of a diagonal Gaussian, one row per sample."""

    mean: np.ndarray
    log_var: np.ndarray

    @property
    def std(self) -> np.ndarray:
        return np.exp(0.5 * self.log_var)

    @property
    def var(self) -> np.ndarray:
        return np.exp(self.log_var)


@dataclass
class HeadTape:
    """Forward-pass cache for one GaussianHeadNet, consumed once by backward()."""

    hidden: GradientTape
    mean_record: tuple
    logvar_record: tuple
    clamp_mask: np.ndarray


class GaussianHeadNet:
    """ReLU hidden stack plus linear mean/log-variance heads."""

    def __init__(self, hidden: list[DenseLayer], mean_head: DenseLayer, logvar_head: DenseLayer):
        for layer in hidden:
            if layer.activation != RELU:
                raise LoadgenError("hidden layers must use ReLU")
        if mean_head.activation != IDENTITY or logvar_head.activation != IDENTITY:
            raise LoadgenError("distribution heads must be linear (identity activation)")
        if mean_head.out_dim != logvar_head.out_dim:
            raise DimensionError(
                f"head widths differ: {mean_head.out_dim} vs {logvar_head.out_dim}"
            )
        self.hidden = hidden
        self.mean_head = mean_head
        self.logvar_head = logvar_head

    @classmethod
    def create(cls, in_dim: int, hidden_sizes: list[int], out_dim: int,
               rng: np.random.Generator) -> "GaussianHeadNet":
        sizes = [in_dim] + list(hidden_sizes)
        hidden = init_dense_stack(sizes, [RELU] * len(hidden_sizes), rng)
        mean_head = init_dense_stack([sizes[-1], out_dim], [IDENTITY], rng)[0]
        logvar_head = init_dense_stack([sizes[-1], out_dim], [IDENTITY], rng)[0]
        return cls(hidden=hidden, mean_head=mean_head, logvar_head=logvar_head)

    @property
    def in_dim(self) -> int:
        return self.hidden[0].in_dim if self.hidden else self.mean_head.in_dim

    @property
    def out_dim(self) -> int:
        return self.mean_head.out_dim

    def parameters(self) -> list[np.ndarray]:
        """Flat parameter list: hidden layers in order, then mean head, then log-var head."""
        params = []
        for layer in self.hidden + [self.mean_head, self.logvar_head]:
            params.append(layer.weights)
            params.append(layer.bias)
        return params

    def forward(self, x: np.ndarray, want_tape: bool = False):
        """Map a (batch, in_dim) matrix to GaussianParams (plus a tape when training)."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise DimensionError(f"input shape {x.shape}, expected (batch, {self.in_dim})")
        tape = GradientTape() if want_tape else None
        h = stack_forward(self.hidden, x, tape)
        mean = dense_forward(self.mean_head, h, tape)
        raw_log_var = dense_forward(self.logvar_head, h, tape)
        clamp_mask = (raw_log_var > -LOG_VAR_LIMIT) & (raw_log_var < LOG_VAR_LIMIT)
        log_var = np.clip(raw_log_var, -LOG_VAR_LIMIT, LOG_VAR_LIMIT)
        if not (np.isfinite(mean).all() and np.isfinite(log_var).all()):
            raise LoadgenError("non-finite activations in Gaussian head network")
        params = GaussianParams(mean=mean, log_var=log_var)
        if not want_tape:
            return params
        logvar_record = tape.records.pop()
        mean_record = tape.records.pop()
        head_tape = HeadTape(
            hidden=tape,
            mean_record=mean_record,
            logvar_record=logvar_record,
            clamp_mask=clamp_mask,
        )
        return params, head_tape

    def backward(self, tape: HeadTape, d_mean: np.ndarray, d_log_var: np.ndarray):
        """Gradients of a scalar loss wrt all parameters and the net input.

        Returns (grads, d_input) with grads ordered like parameters().
        """
        d_log_var = d_log_var * tape.clamp_mask  # clamp has zero gradient outside range
        mean_grads, d_h_mean = stack_backward(
            [self.mean_head], GradientTape(records=[tape.mean_record]), d_mean
        )
        logvar_grads, d_h_logvar = stack_backward(
            [self.logvar_head], GradientTape(records=[tape.logvar_record]), d_log_var
        )
        hidden_grads, d_input = stack_backward(
            self.hidden, tape.hidden, d_h_mean + d_h_logvar
        )
        grads: list[np.ndarray] = []
        for lg in hidden_grads + mean_grads + logvar_grads:
            grads.append(lg.d_weights)
            grads.append(lg.d_bias)
        return grads, d_input
