"""Fully connected layers with hand-derived gradients.

Everything operates on 64-bit row-major numpy matrices: rows are batch
samples, columns are features. Only the two activations needed here are
supported (ReLU for hidden layers, identity for distribution heads), so
gradients are written out explicitly instead of going through a general
autodiff graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from loadgen.errors import DimensionError

RELU = "relu"
IDENTITY = "identity"
_ACTIVATIONS = (RELU, IDENTITY)


@dataclass
class DenseLayer:
    """One affine layer ``y = act(x @ W.T + b)``.

    ``weights`` has shape (out, in) and ``bias`` shape (out,).
    """

    weights: np.ndarray
    bias: np.ndarray
    activation: str = RELU

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weights.ndim != 2 or self.bias.ndim != 1:
            raise DimensionError(
                f"layer expects 2-d weights and 1-d bias, got {self.weights.shape} / {self.bias.shape}"
            )
        if self.weights.shape[0] != self.bias.shape[0]:
            raise DimensionError(
                f"weights {self.weights.shape} inconsistent with bias {self.bias.shape}"
            )
        if self.activation not in _ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]


@dataclass
class GradientTape:
    """Per-layer (input, pre-activation) pairs cached by a forward pass."""

    records: list = field(default_factory=list)

    def push(self, layer_input: np.ndarray, pre_activation: np.ndarray):
        self.records.append((layer_input, pre_activation))


@dataclass
class LayerGrads:
    d_weights: np.ndarray
    d_bias: np.ndarray


def dense_forward(layer: DenseLayer, x: np.ndarray, tape: GradientTape | None = None) -> np.ndarray:
    """Apply one layer to a (batch, in_dim) matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != layer.in_dim:
        raise DimensionError(
            f"input shape {x.shape} incompatible with layer weights {layer.weights.shape}"
        )
    pre = x @ layer.weights.T + layer.bias
    if tape is not None:
        tape.push(x, pre)
    if layer.activation == RELU:
        return np.maximum(pre, 0.0)
    return pre


def stack_forward(
    layers: list[DenseLayer], x: np.ndarray, tape: GradientTape | None = None
) -> np.ndarray:
    """Compose layers in order; an empty stack is the identity."""
    out = np.asarray(x, dtype=np.float64)
    for layer in layers:
        out = dense_forward(layer, out, tape)
    return out


def stack_backward(
    layers: list[DenseLayer], tape: GradientTape, upstream: np.ndarray
) -> tuple[list[LayerGrads], np.ndarray]:
    """Backpropagate ``upstream`` (d loss / d stack output) through the stack.

    Returns per-layer gradients in layer order plus the gradient with
    respect to the stack input. The tape must come from the matching
    forward pass; it is consumed once. ReLU uses subgradient 0 at 0.
    """
    if len(tape.records) != len(layers):
        raise DimensionError(
            f"tape holds {len(tape.records)} records for {len(layers)} layers"
        )
    grads: list[LayerGrads] = [None] * len(layers)  # type: ignore[list-item]
    d_out = np.asarray(upstream, dtype=np.float64)
    for i in range(len(layers) - 1, -1, -1):
        layer = layers[i]
        x, pre = tape.records[i]
        if d_out.shape != pre.shape:
            raise DimensionError(
                f"upstream shape {d_out.shape} does not match layer output {pre.shape}"
            )
        if layer.activation == RELU:
            d_pre = d_out * (pre > 0.0)
        else:
            d_pre = d_out
        grads[i] = LayerGrads(d_weights=d_pre.T @ x, d_bias=d_pre.sum(axis=0))
        d_out = d_pre @ layer.weights
    tape.records.clear()
    return grads, d_out


def init_dense_stack(
    sizes: list[int], activations: list[str], seed: int | np.random.Generator
) -> list[DenseLayer]:
    """He-normal weights (std sqrt(2/fan_in)), zero biases, deterministic per seed.

    ``sizes`` is [in, h1, ..., out]; ``activations`` has one entry per layer.
    """
    if len(activations) != len(sizes) - 1:
        raise DimensionError(
            f"{len(sizes) - 1} layers but {len(activations)} activations given"
        )
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    layers = []
    for fan_in, fan_out, act in zip(sizes[:-1], sizes[1:], activations):
        w = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_out, fan_in))
        layers.append(DenseLayer(weights=w, bias=np.zeros(fan_out), activation=act))
    return layers
