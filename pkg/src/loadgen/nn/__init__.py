"""Minimal dense-network engine: layers, analytic gradients, Adam."""

from loadgen.nn.layers import (
    DenseLayer,
    GradientTape,
    LayerGrads,
    dense_forward,
    init_dense_stack,
    stack_backward,
    stack_forward,
)
from loadgen.nn.optim import AdamState, adam_step

__all__ = [
    "AdamState",
    "DenseLayer",
    "GradientTape",
    "LayerGrads",
    "adam_step",
    "dense_forward",
    "init_dense_stack",
    "stack_backward",
    "stack_forward",
]
