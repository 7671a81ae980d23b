"""Run configuration shared by the CLI and the HTTP service.

One master seed drives the whole pipeline: every randomized stage uses
``derive_seed(master, role)``, the first 8 bytes of
sha256("<master>:<role>"), so a run is reproducible end to end from a
single number while stages stay statistically independent.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from pydantic import BaseModel, Field, ValidationError

from loadgen.cvae.model import CvaeConfig
from loadgen.datapipe.simulator import SimulatorConfig
from loadgen.errors import ConfigError


def derive_seed(master: int, role: str) -> int:
    digest = hashlib.sha256(f"{master}:{role}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class GenerationSettings(BaseModel):
    """Settings for class-sample generation (match-training needs none)."""

    month: float = Field(default=4.0, gt=0, le=12)
    count: int = Field(default=2000, ge=1)


class EvalSettings(BaseModel):
    energy_subsample: int = Field(default=512, ge=2)
    energy_repeats: int = Field(default=20, ge=2)
    kmeans_k: int = Field(default=8, ge=1)
    ae_epochs: int = Field(default=15, ge=0)
    ae_hidden: list[int] | None = None       # defaults to the CVAE encoder widths
    ae_latent: int | None = None             # defaults to the CVAE latent width
    ae_batch_size: int = Field(default=256, ge=1)
    ae_learning_rate: float = Field(default=1e-3, gt=0)
    mean_profile_months: list[int] = Field(default=[4, 7])
    mean_profile_classes: list[str] = Field(default=["small", "large"])
    interpolation_months: list[float] = Field(default=[11.0, 11.5, 12.0])
    interpolation_count: int = Field(default=4000, ge=2)
    charts: bool = True


def _desk_cvae() -> CvaeConfig:
    # Out-of-the-box defaults are the desk-scale settings (minutes on a CPU);
    # the full-scale values live in CvaeConfig itself and configs/full-scale.json.
    return CvaeConfig(
        latent_dim=8, encoder_hidden=[128, 128], decoder_hidden=[128, 128],
        beta=4.0, learning_rate=1e-3, batch_size=256, epochs=60,
    )


class RunConfig(BaseModel):
    """Paths plus per-stage settings; unset paths derive from ``workdir``."""

    workdir: Path = Path("run")
    raw_csv: Path | None = None
    prepared: Path | None = None
    checkpoint: Path | None = None
    history: Path | None = None
    generated_dir: Path | None = None
    reports_dir: Path | None = None
    master_seed: int = Field(default=20200811, ge=0)
    simulator: SimulatorConfig = Field(default_factory=SimulatorConfig)
    cvae: CvaeConfig = Field(default_factory=_desk_cvae)
    evaluation: EvalSettings = Field(default_factory=lambda: EvalSettings(ae_epochs=25))
    generation: GenerationSettings = Field(default_factory=GenerationSettings)

    @property
    def raw_csv_path(self) -> Path:
        return self.raw_csv or self.workdir / "raw.csv"

    @property
    def prepared_path(self) -> Path:
        return self.prepared or self.workdir / "prepared.npz"

    @property
    def checkpoint_path(self) -> Path:
        return self.checkpoint or self.workdir / "checkpoint.json"

    @property
    def history_path(self) -> Path:
        return self.history or self.workdir / "history.csv"

    @property
    def generated_dir_path(self) -> Path:
        return self.generated_dir or self.workdir / "generated"

    @property
    def reports_dir_path(self) -> Path:
        return self.reports_dir or self.workdir / "reports"

    def seed_for(self, role: str) -> int:
        return derive_seed(self.master_seed, role)


def load_run_config(path: Path | str) -> RunConfig:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    try:
        return RunConfig.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError(f"config {path} is invalid: {exc}") from exc
