"""Request/response bodies for the pipeline service."""

from typing import Optional

from pydantic import BaseModel, Field


class RunRequest(BaseModel):
    """A raw config file plus the CLI's override knobs."""

    config: str = Field(description="flat `key = value` config text")
    seed: Optional[int] = Field(
        default=None, ge=0, lt=2**64,
        description="overrides the config's seed key",
    )
    threads: Optional[int] = Field(default=None, ge=1)


class RunResponse(BaseModel):
    summary: str
    artifact_name: str
    artifact_text: str
    exit_code: int
    payload: dict


class HealthResponse(BaseModel):
    status: str
    version: str
    subcommands: list
