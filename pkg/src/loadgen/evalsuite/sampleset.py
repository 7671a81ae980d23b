"""Labelled sets of profiles compared by the validation battery."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from loadgen.errors import DimensionError, PipelineError

_FORMAT = "loadgen-samples-v1"


@dataclass
class SampleSet:
    """Profiles plus the per-profile conditioning metadata.

    ``label`` identifies the set in reports (train, test, gen-noisy,
    gen-noisefree, or ad-hoc labels for interpolation runs). Months may
    be fractional for generated sets.
    """

    label: str
    values: np.ndarray    # (n, 96)
    months: np.ndarray    # (n,) float64
    ranks: np.ndarray     # (n,) float64
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.months = np.asarray(self.months, dtype=np.float64)
        self.ranks = np.asarray(self.ranks, dtype=np.float64)
        if self.values.ndim != 2 or len(self.values) == 0:
            raise DimensionError(f"sample set {self.label!r} must be a non-empty 2-d array")
        if not (len(self.values) == len(self.months) == len(self.ranks)):
            raise DimensionError(f"sample set {self.label!r} has inconsistent column lengths")

    def __len__(self) -> int:
        return self.values.shape[0]


def save_sample_set(path: Path | str, samples: SampleSet) -> None:
    meta = dict(samples.meta)
    meta["format"] = _FORMAT
    meta["label"] = samples.label
    np.savez_compressed(
        Path(path),
        values=samples.values,
        months=samples.months,
        ranks=samples.ranks,
        meta=np.array(json.dumps(meta, sort_keys=True)),
    )


def load_sample_set(path: Path | str) -> SampleSet:
    path = Path(path)
    if not path.exists():
        raise PipelineError(f"sample set not found: {path}")
    with np.load(path) as npz:
        meta = json.loads(str(npz["meta"]))
        if meta.get("format") != _FORMAT:
            raise PipelineError(f"{path} is not a sample-set file")
        return SampleSet(
            label=meta["label"],
            values=npz["values"],
            months=npz["months"],
            ranks=npz["ranks"],
            meta=meta,
        )
