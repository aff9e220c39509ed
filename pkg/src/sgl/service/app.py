"""HTTP front end: every pipeline behind POST /run/{subcommand}.

Input problems (bad config, unknown key, domain preconditions) come back
as 422 with a detail message and, when known, the offending config line;
uncertified-but-produced results are HTTP 200 with ``exit_code = 2`` so
clients keep the artifact.
"""

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import parse_config, with_overrides
from ..errors import ConfigError, SglError
from ..pipelines import SCHEMAS, SUBCOMMANDS, run
from .schemas import HealthResponse, RunRequest, RunResponse


def create_app() -> FastAPI:
    app = FastAPI(title="sgl", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(
            status="ok", version=__version__, subcommands=list(SUBCOMMANDS)
        )

    @app.post("/run/{subcommand}", response_model=RunResponse)
    def run_subcommand(subcommand: str, req: RunRequest):
        if subcommand not in SCHEMAS:
            raise HTTPException(
                status_code=404, detail=f"unknown subcommand {subcommand!r}"
            )
        try:
            entries = parse_config(req.config)
            if req.seed is not None:
                if "seed" not in SCHEMAS[subcommand]:
                    raise ConfigError(
                        f"{subcommand!r} does not take a seed"
                    )
                entries = with_overrides(entries, {"seed": str(req.seed)})
            result = run(subcommand, entries, threads=req.threads)
        except ConfigError as exc:
            detail = {"message": str(exc), "line": exc.line}
            raise HTTPException(status_code=422, detail=detail) from None
        except (SglError, ValueError) as exc:
            detail = {"message": str(exc), "line": None}
            raise HTTPException(status_code=422, detail=detail) from None
        return RunResponse(
            summary=result.summary,
            artifact_name=result.artifact_name,
            artifact_text=result.artifact_text,
            exit_code=result.exit_code,
            payload=result.payload,
        )

    return app


app = create_app()
