from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import load_dotenv

from .errors import ConfigError

load_dotenv()

CONFIG_PATH = Path(__file__).resolve().parent.parent / "config.json"
DEFAULT_OUTPUT_DIR = "results"
DEFAULT_WORKERS = 1
DEFAULT_METHODS = ["phasefit8", "fixed8", "numerov"]
DEFAULT_ACCURACY_CAP = 15.0
DEFAULT_PHASE_SHIFT_SAMPLE_X = 14.0
DEFAULT_STEP_GRIDS = {
    "franco-palacios": [4000, 8000, 16000, 32000, 64000],
    "inhomogeneous": [20000, 40000, 80000, 160000],
    "two-body": [4000, 8000, 16000, 32000, 64000],
    "duffing": [4000, 8000, 16000, 32000, 64000],
    "schrodinger-989": [500, 1000, 2000, 4000, 8000],
    "schrodinger-341": [500, 1000, 2000, 4000, 8000],
    "schrodinger-163": [500, 1000, 2000, 4000, 8000],
}
SWEEP_FILE_KEYS = {"problem", "methods", "steps", "metric", "out", "workers"}


@dataclass(frozen=True)
class BenchConfig:
    output_dir: Path
    workers: int = DEFAULT_WORKERS
    default_methods: list[str] = field(default_factory=lambda: list(DEFAULT_METHODS))
    step_grids: dict[str, list[int]] = field(default_factory=lambda: dict(DEFAULT_STEP_GRIDS))
    accuracy_cap: float = DEFAULT_ACCURACY_CAP
    phase_shift_sample_x: float = DEFAULT_PHASE_SHIFT_SAMPLE_X

    def steps_for(self, problem_id: str) -> list[int]:
        return list(self.step_grids.get(problem_id, []))


def _config_path(path: Path | None) -> Path:
    if path is not None:
        return path
    override = (os.getenv("OSCINT_CONFIG") or "").strip()
    return Path(override) if override else CONFIG_PATH


def _clean_grid(entry: object) -> list[int] | None:
    if not isinstance(entry, list) or len(entry) < 2:
        return None
    try:
        values = [int(item) for item in entry]
    except (TypeError, ValueError):
        return None
    if any(value <= 0 for value in values):
        return None
    if any(later <= earlier for earlier, later in zip(values, values[1:])):
        return None
    return values


def _clean_workers(value: object) -> int:
    try:
        workers = int(value)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        return DEFAULT_WORKERS
    return workers if workers >= 1 else DEFAULT_WORKERS


def load_config(path: Path | None = None) -> BenchConfig:
    """Read config.json; missing or invalid entries fall back to the defaults."""
    config_path = _config_path(path)
    raw: dict[str, object] = {}
    if config_path.exists():
        loaded = json.loads(config_path.read_text(encoding="utf-8"))
        if isinstance(loaded, dict):
            raw = loaded
    output_dir = config_path.parent / str(raw.get("output_dir") or DEFAULT_OUTPUT_DIR)

    workers = _clean_workers(raw.get("workers", DEFAULT_WORKERS))
    env_workers = (os.getenv("OSCINT_WORKERS") or "").strip()
    if env_workers:
        workers = _clean_workers(env_workers)

    configured_methods = raw.get("default_methods")
    methods = [str(item).strip() for item in configured_methods if str(item).strip()] if isinstance(
        configured_methods, list
    ) else []

    grids = dict(DEFAULT_STEP_GRIDS)
    configured_grids = raw.get("step_grids")
    if isinstance(configured_grids, dict):
        for problem_id, entry in configured_grids.items():
            cleaned = _clean_grid(entry)
            if cleaned is not None:
                grids[str(problem_id)] = cleaned

    try:
        cap = float(raw.get("accuracy_cap", DEFAULT_ACCURACY_CAP))  # type: ignore[arg-type]
    except (TypeError, ValueError):
        cap = DEFAULT_ACCURACY_CAP
    try:
        sample_x = float(raw.get("phase_shift_sample_x", DEFAULT_PHASE_SHIFT_SAMPLE_X))  # type: ignore[arg-type]
    except (TypeError, ValueError):
        sample_x = DEFAULT_PHASE_SHIFT_SAMPLE_X

    return BenchConfig(
        output_dir=output_dir,
        workers=workers,
        default_methods=methods or list(DEFAULT_METHODS),
        step_grids=grids,
        accuracy_cap=cap if cap > 0 else DEFAULT_ACCURACY_CAP,
        phase_shift_sample_x=sample_x,
    )


def parse_sweep_file(path: Path) -> dict[str, str]:
    """Parse a key=value sweep file; '#' starts a comment."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    values: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"{path}:{number}: expected key=value, got {content!r}")
        key, value = (part.strip() for part in content.split("=", 1))
        if key not in SWEEP_FILE_KEYS:
            raise ConfigError(f"{path}:{number}: unknown key {key!r}")
        values[key] = value
    return values


def split_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def parse_steps(value: str) -> list[int]:
    try:
        return [int(item) for item in split_list(value)]
    except ValueError as exc:
        raise ConfigError(f"step counts must be integers, got {value!r}") from exc
