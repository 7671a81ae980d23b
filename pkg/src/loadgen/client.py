"""Runners the CLI dispatches to: in-process, or HTTP against a service."""

from __future__ import annotations

import httpx

from loadgen import pipeline
from loadgen.config import RunConfig
from loadgen.errors import LoadgenError


class LocalRunner:
    """Executes pipeline stages in this process."""

    def simulate(self, config: RunConfig) -> pipeline.SimulateResult:
        return pipeline.run_simulate(config)

    def prep(self, config: RunConfig) -> pipeline.PrepResult:
        return pipeline.run_prep(config)

    def train(self, config: RunConfig) -> pipeline.TrainStepResult:
        return pipeline.run_train(config)

    def generate(self, config: RunConfig, mode: str, noise: bool) -> pipeline.GenerateResult:
        return pipeline.run_generate(config, mode=mode, noise=noise)

    def evaluate(self, config: RunConfig) -> pipeline.EvaluateResult:
        return pipeline.run_evaluate(config)


class RemoteError(LoadgenError):
    kind = "remote"


class HttpRunner:
    """Posts stage requests to a running service; paths are server-local."""

    def __init__(self, base_url: str, client: httpx.Client | None = None):
        self._client = client or httpx.Client(base_url=base_url, timeout=None)

    def _post(self, path: str, payload: dict, model):
        response = self._client.post(path, json=payload)
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", {})
            except ValueError:
                detail = {}
            kind = detail.get("kind", "remote") if isinstance(detail, dict) else "remote"
            message = detail.get("message", response.text) if isinstance(detail, dict) else str(detail)
            error = RemoteError(f"{path} failed ({response.status_code}): {message}")
            error.kind = kind
            raise error
        return model.model_validate(response.json())

    def _payload(self, config: RunConfig) -> dict:
        return {"config": config.model_dump(mode="json")}

    def simulate(self, config: RunConfig) -> pipeline.SimulateResult:
        return self._post("/simulate", self._payload(config), pipeline.SimulateResult)

    def prep(self, config: RunConfig) -> pipeline.PrepResult:
        return self._post("/prep", self._payload(config), pipeline.PrepResult)

    def train(self, config: RunConfig) -> pipeline.TrainStepResult:
        return self._post("/train", self._payload(config), pipeline.TrainStepResult)

    def generate(self, config: RunConfig, mode: str, noise: bool) -> pipeline.GenerateResult:
        payload = self._payload(config)
        payload.update({"mode": mode, "noise": noise})
        return self._post("/generate", payload, pipeline.GenerateResult)

    def evaluate(self, config: RunConfig) -> pipeline.EvaluateResult:
        return self._post("/evaluate", self._payload(config), pipeline.EvaluateResult)
