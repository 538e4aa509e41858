"""Atomic output files, config hashing and the run-config schema."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import jsonschema

OUTPUT_DIR_ENV = "CURVECHAR_OUTPUT_DIR"

_pair = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "output_dir": {"type": "string"},
        "max_len": {"type": "integer", "minimum": 1, "maximum": 14},
        "include_powers": {"type": "boolean"},
        "width": {"type": "integer", "minimum": 1},
        "annotate": {"type": "boolean"},
        "checks": {"type": "array", "items": {"enum": ["gr", "mcshane"]}},
        "words": {"type": "array", "items": {"type": "string"}},
        "rank": {"type": "integer", "minimum": 1, "maximum": 26},
        "trials": {"type": "integer", "minimum": 1},
        "x": {"type": "number"},
        "y": {"type": "number"},
        "bound": {"type": "integer", "minimum": 4},
        "probes": {"type": "array", "items": {"type": "string"}},
        "grid": {"type": "array", "items": _pair, "minItems": 1},
        "schedule": {
            "oneOf": [
                {"const": "reference"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "steps": {"type": "integer", "minimum": 1},
                        "slack": {"type": "number", "exclusiveMinimum": 1},
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["xs", "ys"],
                    "properties": {
                        "xs": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                        "ys": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                    },
                },
            ]
        },
        "suite": {"type": "string"},
        "out": {"type": "string"},
        "summary": {"type": "string"},
        "json": {"type": "boolean"},
    },
}


class ConfigError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("invalid config:\n" + "\n".join(errors))
        self.errors = errors


def validate_config(cfg: dict) -> None:
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        raise ConfigError([f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors])


def load_config(path: str | os.PathLike | None) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ConfigError(["<root>: config must be a JSON object"])
    validate_config(cfg)
    return cfg


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def output_dir(cfg: dict) -> Path:
    d = os.environ.get(OUTPUT_DIR_ENV) or cfg.get("output_dir") or "."
    return Path(d)


def atomic_write(path: str | os.PathLike, text: str) -> Path:
    """Write via a temp file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def jsonl(header: dict, records) -> str:
    lines = [json.dumps({"type": "header", **header}, sort_keys=True)]
    lines += [json.dumps(r, sort_keys=True) for r in records]
    return "\n".join(lines) + "\n"


def csv_with_header(header: dict, body: str) -> str:
    return f"# config_hash={header['config_hash']} seed={header['seed']}\n" + body
