"""FastAPI application wrapping the pipeline stages."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

import loadgen
from loadgen import pipeline
from loadgen.errors import ConfigError, LoadgenError, PipelineError
from loadgen.service.schemas import GenerateRequest, HealthResponse, PipelineRequest


def _status_for(exc: LoadgenError) -> int:
    if isinstance(exc, ConfigError):
        return 422
    if isinstance(exc, PipelineError):
        return 404 if "not found" in str(exc) else 409
    return 400


def create_app() -> FastAPI:
    app = FastAPI(title="loadgen", version=loadgen.__version__)

    @app.exception_handler(LoadgenError)
    async def loadgen_error_handler(request: Request, exc: LoadgenError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"detail": {"kind": exc.kind, "message": str(exc)}},
        )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=loadgen.__version__)

    @app.post("/simulate", response_model=pipeline.SimulateResult)
    def simulate(request: PipelineRequest) -> pipeline.SimulateResult:
        return pipeline.run_simulate(request.config)

    @app.post("/prep", response_model=pipeline.PrepResult)
    def prep(request: PipelineRequest) -> pipeline.PrepResult:
        return pipeline.run_prep(request.config)

    @app.post("/train", response_model=pipeline.TrainStepResult)
    def train(request: PipelineRequest) -> pipeline.TrainStepResult:
        return pipeline.run_train(request.config)

    @app.post("/generate", response_model=pipeline.GenerateResult)
    def generate(request: GenerateRequest) -> pipeline.GenerateResult:
        return pipeline.run_generate(request.config, mode=request.mode, noise=request.noise)

    @app.post("/evaluate", response_model=pipeline.EvaluateResult)
    def evaluate(request: PipelineRequest) -> pipeline.EvaluateResult:
        return pipeline.run_evaluate(request.config)

    return app


app = create_app()
