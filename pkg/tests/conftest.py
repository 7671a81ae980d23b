"""Shared fixtures: a desk-scale-in-miniature run configuration."""

import json

import pytest

from loadgen.config import EvalSettings, GenerationSettings, RunConfig
from loadgen.cvae.model import CvaeConfig
from loadgen.datapipe.simulator import SimulatorConfig


def small_run_config(workdir, **overrides) -> RunConfig:
    """A fast pipeline config: 12 users, 8 weeks, a tiny network."""
    defaults = dict(
        workdir=workdir,
        master_seed=1234,
        simulator=SimulatorConfig(n_users=12, weeks=8, year=2020, seed=0),
        cvae=CvaeConfig(
            data_dim=96, latent_dim=4, condition_dim=3,
            encoder_hidden=[16, 16], decoder_hidden=[16, 16],
            beta=2.0, learning_rate=1e-3, batch_size=64, epochs=3, seed=0,
        ),
        evaluation=EvalSettings(
            energy_subsample=64, energy_repeats=3, kmeans_k=3, ae_epochs=2,
            mean_profile_months=[1], mean_profile_classes=["small", "large"],
            interpolation_count=50, charts=False,
        ),
        generation=GenerationSettings(month=1.0, count=40),
    )
    defaults.update(overrides)
    return RunConfig(**defaults)


@pytest.fixture
def small_config(tmp_path):
    return small_run_config(tmp_path / "run")


def write_config_file(path, config: RunConfig):
    path.write_text(json.dumps(config.model_dump(mode="json")))
    return path
