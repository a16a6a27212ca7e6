"""Reading and writing frame and model documents.

A model document is a JSON (or YAML) object::

    {"worlds": ["s", "t"],
     "relation": [["s", "t"]],
     "valuation": {"p": ["s"], "q": []}}

Frame documents have the same shape without ``valuation``; a model document
is accepted wherever a frame is expected and its valuation is ignored.
"""

import json
import logging
from pathlib import Path
from typing import Any

import yaml
from jsonschema import Draft7Validator

from nckit.core.exceptions import KripkeError, ModelFileError
from nckit.core.kripke import Frame, Model


logger = logging.getLogger(__name__)

_WORLD = {"type": "string", "minLength": 1}

FRAME_SCHEMA: dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "nckit frame",
    "type": "object",
    "required": ["worlds"],
    "properties": {
        "worlds": {"type": "array", "items": _WORLD, "minItems": 1, "uniqueItems": True},
        "relation": {
            "type": "array",
            "items": {"type": "array", "items": _WORLD, "minItems": 2, "maxItems": 2},
        },
        "valuation": {"type": "object"},
        "description": {"type": "string"},
    },
    "additionalProperties": False,
}

MODEL_SCHEMA: dict[str, Any] = {
    **FRAME_SCHEMA,
    "title": "nckit model",
    "properties": {
        **FRAME_SCHEMA["properties"],
        "valuation": {
            "type": "object",
            "propertyNames": {"pattern": "^[A-Za-z][A-Za-z0-9_]*$"},
            "additionalProperties": {"type": "array", "items": _WORLD, "uniqueItems": True},
        },
    },
}

_YAML_SUFFIXES = (".yaml", ".yml")


def read_document(path: Path | str, schema: dict[str, Any]) -> dict[str, Any]:
    """Load a JSON or YAML document and validate it against ``schema``.

    Raises:
        ModelFileError: if the file cannot be read or parsed, or fails the
            schema; the message lists every schema error.
    """
    source = Path(path)
    try:
        with open(source, encoding="utf-8") as f:
            if source.suffix.lower() in _YAML_SUFFIXES:
                document = yaml.safe_load(f)
            else:
                document = json.load(f)
    except (OSError, json.JSONDecodeError, yaml.YAMLError) as e:
        raise ModelFileError(f"cannot read {source}: {e}") from e

    errors = sorted(Draft7Validator(schema).iter_errors(document), key=lambda e: list(e.path))
    if errors:
        details = "; ".join(
            f"{'/'.join(str(p) for p in error.path) or '<root>'}: {error.message}"
            for error in errors
        )
        raise ModelFileError(f"{source} does not match the {schema['title']} schema: {details}")
    logger.debug(f"Loaded {schema['title']} document {source}")
    return document


def frame_from_document(document: dict[str, Any]) -> Frame:
    """Build a frame from a validated document.

    Raises:
        ModelFileError: if the relation mentions unknown worlds.
    """
    try:
        return Frame(tuple(document["worlds"]), frozenset(map(tuple, document.get("relation", []))))
    except KripkeError as e:
        raise ModelFileError(str(e)) from e


def model_from_document(document: dict[str, Any]) -> Model:
    """Build a model from a validated document.

    Raises:
        ModelFileError: if the relation or valuation mentions unknown worlds.
    """
    frame = frame_from_document(document)
    try:
        valuation = document.get("valuation", {})
        return Model(frame, {atom: frozenset(ws) for atom, ws in valuation.items()})
    except KripkeError as e:
        raise ModelFileError(str(e)) from e


def load_frame(path: Path | str) -> Frame:
    """Read a frame file (JSON, or YAML by suffix)."""
    return frame_from_document(read_document(path, FRAME_SCHEMA))


def load_model(path: Path | str) -> Model:
    """Read a model file (JSON, or YAML by suffix)."""
    return model_from_document(read_document(path, MODEL_SCHEMA))


def dump_model(model: Model | Frame, path: Path | str) -> None:
    """Write a model or frame document; YAML when the suffix asks for it."""
    target = Path(path)
    document = model.to_json()
    with open(target, "w", encoding="utf-8") as f:
        if target.suffix.lower() in _YAML_SUFFIXES:
            yaml.safe_dump(document, f, sort_keys=False, allow_unicode=True)
        else:
            json.dump(document, f, indent=2, ensure_ascii=False)
            f.write("\n")
    logger.info(f"Wrote {target}")
