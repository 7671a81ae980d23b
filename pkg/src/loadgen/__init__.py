"""Synthetic daily load-profile generation with a conditional VAE.

The package covers the full workflow: simulating raw smart-meter data,
preparing training tensors, training the generative model, sampling
conditioned profiles, and statistically validating the output. The
FastAPI service in ``loadgen.service`` and the CLI in ``loadgen.cli``
are thin wrappers over ``loadgen.pipeline``.
"""

__version__ = "0.1.0"
