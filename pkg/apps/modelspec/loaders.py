"""Read model files (TOML or YAML) into validated specs."""

# Python modules
import logging

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any

# Third party modules
import yaml

# Project modules
from apps.abstracts.exceptions import SpecValidationError
from apps.modelspec.serializers import ModelFileSerializer
from apps.modelspec.spec import ModelSpec


logger = logging.getLogger(__name__)

YAML_SUFFIXES: tuple[str, ...] = (".yaml", ".yml")


def read_model_document(path: str | Path) -> dict[str, Any]:
    source = Path(path)
    try:
        if source.suffix.lower() in YAML_SUFFIXES:
            with source.open("r", encoding="utf-8") as handle:
                document = yaml.safe_load(handle)
        else:
            with source.open("rb") as handle:
                document = tomllib.load(handle)
    except (tomllib.TOMLDecodeError, yaml.YAMLError) as exc:
        raise SpecValidationError([f"{source.name}: {exc}"])
    if not isinstance(document, dict):
        raise SpecValidationError([f"{source.name}: top level must be a table"])
    return document


def spec_from_document(document: dict[str, Any]) -> ModelSpec:
    serializer = ModelFileSerializer(data=document)
    if not serializer.is_valid():
        raise SpecValidationError(_flatten(serializer.errors))
    return serializer.to_spec()


def load_model(path: str | Path) -> ModelSpec:
    """Parse, validate and build the spec stored at path."""
    spec: ModelSpec = spec_from_document(read_model_document(path))
    logger.info("Loaded model %s (d=%d) from %s", spec, spec.d, path)
    return spec


def _flatten(errors: Any, prefix: str = "") -> list[str]:
    if isinstance(errors, dict):
        out: list[str] = []
        for key, value in errors.items():
            out.extend(_flatten(value, f"{prefix}{key}."))
        return out
    if isinstance(errors, list):
        out = []
        for item in errors:
            out.extend(_flatten(item, prefix))
        return out
    if isinstance(errors, str):
        return [f"{prefix.rstrip('.')}: {errors}" if prefix else str(errors)]
    return [str(errors)]
