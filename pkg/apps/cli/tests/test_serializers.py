from contextlib import nullcontext as does_not_raise
from pathlib import Path

import pytest
from rest_framework import serializers

from apps.cli.serializers import RunConfigSerializer, lambda_values
from apps.mc_sim.sampler import SEED_LIMIT


def config(command: str, **fields) -> dict:
    return {"command": command, **fields}


class TestRunConfigSerializer:
    @pytest.mark.parametrize(
        argnames=["fields", "expectation"],
        argvalues=[
            ({"N": "400"}, does_not_raise()),
            ({"N": "200,400,800"}, does_not_raise()),
            ({"N": "0"}, pytest.raises(serializers.ValidationError)),
            ({"N": "ten"}, pytest.raises(serializers.ValidationError)),
            ({}, pytest.raises(serializers.ValidationError)),
        ],
    )
    def test_spectrum_N(self, cw_file: Path, fields: dict, expectation) -> None:
        with expectation:
            serializer = RunConfigSerializer(data=config("spectrum", model=str(cw_file), **fields))
            serializer.is_valid(raise_exception=True)

    def test_defaults(self, lab_settings, cw_file: Path) -> None:
        serializer = RunConfigSerializer(data=config("hj", model=str(cw_file)))
        assert serializer.is_valid(), f"{serializer.errors} must be empty"
        data = serializer.validated_data
        assert data["out"] == Path(lab_settings.runs_dir), f"{data['out']} must be equal {lab_settings.runs_dir}"
        assert data["band"] == 1e-8, f"{data['band']} must be equal 1e-8"
        assert data["tolerance"] == 1e-10, f"{data['tolerance']} must be equal 1e-10"
        assert data["format"] == "csv", f"{data['format']} must be equal csv"
        assert data["selection"] == "chi0", f"{data['selection']} must be equal chi0"

    def test_missing_model_file(self, tmp_path: Path) -> None:
        serializer = RunConfigSerializer(data=config("hj", model=str(tmp_path / "absent.toml")))
        assert not serializer.is_valid(), "a missing model file must be rejected"
        assert "model" in serializer.errors, f"{serializer.errors} must name the model"

    @pytest.mark.parametrize(
        argnames=["fields", "expectation"],
        argvalues=[
            ({"paths": 1000, "seed": 0}, does_not_raise()),
            ({"paths": 1000, "seed": SEED_LIMIT - 1}, does_not_raise()),
            ({"paths": 1000, "seed": SEED_LIMIT}, pytest.raises(serializers.ValidationError)),
            ({"paths": 1000, "seed": -1}, pytest.raises(serializers.ValidationError)),
            ({"paths": 99, "seed": 1}, pytest.raises(serializers.ValidationError)),
            ({"paths": 1000, "seed": 1, "T": 0.0}, pytest.raises(serializers.ValidationError)),
            ({"paths": 1000, "seed": 1, "N": "16,32"}, pytest.raises(serializers.ValidationError)),
        ],
    )
    def test_simulate(self, cw_file: Path, fields: dict, expectation) -> None:
        data = {"N": "16", "T": 1.0, **fields}
        with expectation:
            serializer = RunConfigSerializer(data=config("simulate", model=str(cw_file), **data))
            serializer.is_valid(raise_exception=True)

    @pytest.mark.parametrize(
        argnames=["fields", "expectation"],
        argvalues=[
            ({"mesh": 100, "dt": 0.01, "T": 0.1}, does_not_raise()),
            ({"mesh": 0, "dt": 0.01, "T": 0.1}, pytest.raises(serializers.ValidationError)),
            ({"mesh": 100, "dt": -0.01, "T": 0.1}, pytest.raises(serializers.ValidationError)),
            ({"mesh": 100, "dt": 0.01}, pytest.raises(serializers.ValidationError)),
        ],
    )
    def test_lax_oleinik(self, cw_file: Path, fields: dict, expectation) -> None:
        with expectation:
            serializer = RunConfigSerializer(data=config("lax-oleinik", model=str(cw_file), **fields))
            serializer.is_valid(raise_exception=True)

    @pytest.mark.parametrize(
        argnames=["value", "expectation"],
        argvalues=[
            ("0.9:1.4:0.01", does_not_raise()),
            ("1:1:0.1", does_not_raise()),
            ("1.4:0.9:0.01", pytest.raises(serializers.ValidationError)),
            ("0:1:0.1", pytest.raises(serializers.ValidationError)),
            ("0.9:1.4", pytest.raises(serializers.ValidationError)),
            ("a:b:c", pytest.raises(serializers.ValidationError)),
            ("0.9:1.4:0", pytest.raises(serializers.ValidationError)),
        ],
    )
    def test_lambda_range(self, cw_file: Path, value: str, expectation) -> None:
        with expectation:
            serializer = RunConfigSerializer(data=config("sweep-lambda", model=str(cw_file), lambda_range=value))
            serializer.is_valid(raise_exception=True)

    def test_counts(self, cw_file: Path) -> None:
        serializer = RunConfigSerializer(
            data=config("simulate", model=str(cw_file), N="16", T=1.0, paths=100, seed=3, m0="8,8", m1="0,16")
        )
        assert serializer.is_valid(), f"{serializer.errors} must be empty"
        assert serializer.validated_data["m0"] == [8, 8], f"{serializer.validated_data['m0']} must be equal [8, 8]"
        assert serializer.validated_data["m1"] == [0, 16], f"{serializer.validated_data['m1']} must be equal [0, 16]"


class TestLambdaValues:
    def test_inclusive_end(self) -> None:
        values = lambda_values(0.9, 1.4, 0.01)
        assert len(values) == 51, f"{len(values)} must be equal 51"
        assert values[-1] == pytest.approx(1.4), f"{values[-1]} must be equal 1.4"

    def test_single_value(self) -> None:
        assert lambda_values(1.0, 1.0, 0.5) == [1.0], "a degenerate range must hold its start"
