"""Request models for the HTTP service.

Responses reuse the pipeline result models directly; requests carry the
full run configuration inline, so a request is self-contained and the
server needs no state beyond its filesystem.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from loadgen.config import RunConfig


class PipelineRequest(BaseModel):
    config: RunConfig = Field(default_factory=RunConfig)


class GenerateRequest(PipelineRequest):
    mode: str = "match-training"
    noise: bool = True


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorDetail(BaseModel):
    kind: str
    message: str
