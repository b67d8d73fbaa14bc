# vlft_lab/sweep/config_loader.py
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import ValidationError

from vlft_lab.core.exceptions import ConfigValidationError
from vlft_lab.schemas.sweep import SweepConfig

logger = logging.getLogger(__name__)

PRESET_DIR = Path(__file__).resolve().parent.parent / "presets"


def preset_path(name: str) -> Optional[Path]:
    path = PRESET_DIR / f"{name}.json"
    return path if path.is_file() else None


def list_presets() -> dict[str, str]:
    """Builtin preset name -> description."""
    out: dict[str, str] = {}
    for path in sorted(PRESET_DIR.glob("*.json")):
        data = json.loads(path.read_text(encoding="utf-8"))
        out[path.stem] = data.get("description", "")
    return out


def _describe(err: dict[str, Any]) -> str:
    loc = ".".join(str(part) for part in err.get("loc", ())) or "<root>"
    if err.get("type") == "extra_forbidden":
        return f"{loc}: unknown key '{err['loc'][-1]}'"
    return f"{loc}: {err.get('msg', 'invalid value')}"


def validate_config(data: Any, source: str = "config") -> SweepConfig:
    try:
        return SweepConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigValidationError([_describe(err) for err in e.errors()], source=source) from e


def load_config(
    source: Union[str, Path],
    overrides: Optional[dict[str, Any]] = None,
) -> SweepConfig:
    """
    Load a sweep config from a JSON file, or a builtin preset by name
    ("fig1", "fig2"). `overrides` replaces top-level keys before validation.
    """
    path = Path(source)
    if not path.exists():
        builtin = preset_path(str(source))
        if builtin is None:
            raise FileNotFoundError(f"Config not found (no file or preset named): {source}")
        path = builtin

    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigValidationError(
            [f"line {e.lineno}, column {e.colno}: {e.msg}"], source=str(path)
        ) from e

    if overrides:
        if not isinstance(data, dict):
            raise ConfigValidationError(["top level must be a JSON object"], source=str(path))
        data.update({k: v for k, v in overrides.items() if v is not None})

    cfg = validate_config(data, source=str(path))
    logger.info("Loaded config '%s' from %s (%d curves, %d k values)", cfg.name, path, len(cfg.curves), len(cfg.k_list))
    return cfg
