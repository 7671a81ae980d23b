"""Checkpoint file: one JSON document holding config, weights and history.

Layer arrays are stored as nested lists in a documented, fixed order
(encoder hidden layers first, then encoder mean/log-var heads, then the
decoder in the same arrangement). Python's float repr round-trips IEEE
doubles exactly, so save -> load reproduces parameters bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from loadgen.cvae.gaussian import GaussianHeadNet
from loadgen.cvae.model import ConditionalVae, CvaeConfig
from loadgen.cvae.training import EpochLosses
from loadgen.errors import CheckpointFormatError
from loadgen.nn import DenseLayer
from loadgen.nn.layers import IDENTITY, RELU

FORMAT_VERSION = 1


@dataclass
class Checkpoint:
    config: CvaeConfig
    model: ConditionalVae
    scale_kw: float
    history: list[EpochLosses]


def _layer_to_dict(layer: DenseLayer) -> dict:
    return {"weights": layer.weights.tolist(), "bias": layer.bias.tolist()}


def _layer_from_dict(d: dict, activation: str) -> DenseLayer:
    return DenseLayer(
        weights=np.array(d["weights"], dtype=np.float64),
        bias=np.array(d["bias"], dtype=np.float64),
        activation=activation,
    )


def _net_to_dict(net: GaussianHeadNet) -> dict:
    return {
        "hidden": [_layer_to_dict(l) for l in net.hidden],
        "mean_head": _layer_to_dict(net.mean_head),
        "logvar_head": _layer_to_dict(net.logvar_head),
    }


def _net_from_dict(d: dict) -> GaussianHeadNet:
    return GaussianHeadNet(
        hidden=[_layer_from_dict(l, RELU) for l in d["hidden"]],
        mean_head=_layer_from_dict(d["mean_head"], IDENTITY),
        logvar_head=_layer_from_dict(d["logvar_head"], IDENTITY),
    )


def save_checkpoint(path: Path | str, checkpoint: Checkpoint) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "config": checkpoint.config.model_dump(),
        "scale_kw": checkpoint.scale_kw,
        "history": [vars(e) for e in checkpoint.history],
        "encoder": _net_to_dict(checkpoint.model.encoder),
        "decoder": _net_to_dict(checkpoint.model.decoder),
    }
    Path(path).write_text(json.dumps(doc))


def load_checkpoint(path: Path | str) -> Checkpoint:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointFormatError(f"cannot read checkpoint {path}: {exc}") from exc
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise CheckpointFormatError(
            f"checkpoint {path} has format version {version}, expected {FORMAT_VERSION}"
        )
    config = CvaeConfig.model_validate(doc["config"])
    model = ConditionalVae(config, _net_from_dict(doc["encoder"]), _net_from_dict(doc["decoder"]))
    history = [EpochLosses(**e) for e in doc["history"]]
    return Checkpoint(config=config, model=model, scale_kw=doc["scale_kw"], history=history)
