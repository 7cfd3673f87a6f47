from __future__ import annotations

from dotenv import load_dotenv
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from starlette.responses import JSONResponse

from .activity import ActivityEvent, configure_logging, log_activity
from .config import load_config
from .errors import ConfigError
from .methodRegistry import get_method, get_problem_entry, method_ids, problem_ids
from .routes.api import build_api_router
from .services.bench import render_csv, run_sweep, validate_sweep
from .services.verify import verify_registered

load_dotenv()
configure_logging()

app = FastAPI(title="Oscillatory Integrator Bench")


@app.exception_handler(ConfigError)
async def config_error_handler(request: Request, exc: ConfigError):
    log_activity(
        ActivityEvent.CONFIG_REJECTED,
        str(exc),
        level="warning",
        status="failed",
        source=request.url.path,
    )
    return JSONResponse({"detail": str(exc)}, status_code=400)


@app.exception_handler(RequestValidationError)
async def validation_error_handler(request: Request, exc: RequestValidationError):
    messages = "; ".join(str(item.get("msg")) for item in exc.errors())
    return await config_error_handler(request, ConfigError(f"invalid request: {messages}"))


app.include_router(
    build_api_router(
        load_config=load_config,
        method_ids=method_ids,
        problem_ids=problem_ids,
        get_method=get_method,
        get_problem_entry=get_problem_entry,
        run_sweep=run_sweep,
        validate_sweep=validate_sweep,
        render_csv=render_csv,
        verify_registered=verify_registered,
    )
)
