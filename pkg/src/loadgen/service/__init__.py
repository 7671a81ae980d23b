"""HTTP service exposing the pipeline stages."""

from loadgen.service.app import app, create_app

__all__ = ["app", "create_app"]
