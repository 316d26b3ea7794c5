# Python modules
import math
from pathlib import Path
from typing import Any

# Third party modules
from rest_framework import serializers

# Django modules
from django.conf import settings

# Project modules
from apps.hj_halfspin.profile import SELECTIONS
from apps.mc_sim.sampler import DYNAMICS, MIN_PATHS, SEED_LIMIT


LAB_COMMANDS: tuple[str, ...] = (
    "spectrum",
    "oracle-check",
    "hj",
    "lax-oleinik",
    "simulate",
    "sweep-lambda",
    "validate",
)
FORMATS: tuple[str, ...] = ("csv", "json")
CHAINS: tuple[str, ...] = ("feynman-kac", "ground")
DEFAULT_BAND: float = 1e-8
DEFAULT_TOLERANCE: float = 1e-10

REQUIRED: dict[str, tuple[str, ...]] = {
    "spectrum": ("model", "N"),
    "oracle-check": ("model", "N"),
    "hj": ("model",),
    "lax-oleinik": ("model", "mesh", "dt", "T"),
    "simulate": ("model", "N", "T", "paths", "seed"),
    "sweep-lambda": ("model", "lambda_range"),
    "validate": ("model",),
}


def _int_list(value: str, what: str, minimum: int) -> list[int]:
    try:
        items = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise serializers.ValidationError(f"{what} must be comma separated integers, got {value!r}")
    if not items:
        raise serializers.ValidationError(f"{what} is empty")
    if any(item < minimum for item in items):
        raise serializers.ValidationError(f"every {what} entry must be at least {minimum}")
    return items


def lambda_values(start: float, stop: float, step: float) -> list[float]:
    """start, start + step, ... up to stop inclusive."""
    count: int = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


class RunConfigSerializer(serializers.Serializer):
    """
    Options of one lab command after argparse has typed them.

    Which options are required depends on `command`.
    """

    command = serializers.ChoiceField(choices=LAB_COMMANDS)
    model = serializers.CharField(allow_null=True, default=None)
    N = serializers.CharField(allow_null=True, default=None)
    T = serializers.FloatField(allow_null=True, default=None)
    dt = serializers.FloatField(allow_null=True, default=None)
    mesh = serializers.IntegerField(allow_null=True, default=None, min_value=1)
    paths = serializers.IntegerField(allow_null=True, default=None, min_value=MIN_PATHS)
    seed = serializers.IntegerField(allow_null=True, default=None, min_value=0, max_value=SEED_LIMIT - 1)
    lambda_range = serializers.CharField(allow_null=True, default=None)
    out = serializers.CharField(allow_null=True, default=None)
    format = serializers.ChoiceField(choices=FORMATS, default="csv")
    band = serializers.FloatField(allow_null=True, default=None, min_value=0.0)
    selection = serializers.ChoiceField(choices=SELECTIONS, default="chi0")
    m0 = serializers.CharField(allow_null=True, default=None)
    m1 = serializers.CharField(allow_null=True, default=None)
    chain = serializers.ChoiceField(choices=CHAINS, default="feynman-kac")
    dynamics = serializers.ChoiceField(choices=DYNAMICS, default="default")
    stencil = serializers.IntegerField(allow_null=True, default=None, min_value=1)
    tolerance = serializers.FloatField(allow_null=True, default=None)

    def validate_model(self, value: str | None) -> Path | None:
        if value is None:
            return None
        path = Path(value)
        if not path.is_file():
            raise serializers.ValidationError(f"model file {value} does not exist")
        return path

    def validate_N(self, value: str | None) -> list[int] | None:
        return None if value is None else _int_list(value, "N", 1)

    def validate_m0(self, value: str | None) -> list[int] | None:
        return None if value is None else _int_list(value, "m0", 0)

    def validate_m1(self, value: str | None) -> list[int] | None:
        return None if value is None else _int_list(value, "m1", 0)

    def validate_T(self, value: float | None) -> float | None:
        if value is not None and not value > 0:
            raise serializers.ValidationError("T must be positive")
        return value

    def validate_dt(self, value: float | None) -> float | None:
        if value is not None and not value > 0:
            raise serializers.ValidationError("dt must be positive")
        return value

    def validate_tolerance(self, value: float | None) -> float:
        if value is None:
            return DEFAULT_TOLERANCE
        if not value > 0:
            raise serializers.ValidationError("tolerance must be positive")
        return value

    def validate_band(self, value: float | None) -> float:
        return DEFAULT_BAND if value is None else value

    def validate_out(self, value: str | None) -> Path:
        return Path(settings.MFGS_RUNS_DIR if value is None else value)

    def validate_lambda_range(self, value: str | None) -> list[float] | None:
        if value is None:
            return None
        parts = value.split(":")
        if len(parts) != 3:
            raise serializers.ValidationError("lambda range must read A:B:STEP")
        try:
            start, stop, step = (float(part) for part in parts)
        except ValueError:
            raise serializers.ValidationError(f"lambda range {value!r} is not numeric")
        if start <= 0 or step <= 0 or stop < start:
            raise serializers.ValidationError("lambda range needs 0 < A <= B and STEP > 0")
        return lambda_values(start, stop, step)

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        missing = [name for name in REQUIRED[attrs["command"]] if attrs.get(name) is None]
        if missing:
            raise serializers.ValidationError(
                {name: f"required by {attrs['command']}" for name in missing}
            )
        if attrs["command"] == "simulate" and len(attrs["N"]) != 1:
            raise serializers.ValidationError({"N": "simulate takes a single N"})
        return attrs
