# Python modules
from fractions import Fraction

# Third party modules
import numpy as np
from rest_framework import serializers

# Project modules
from apps.modelspec.kernels import CONVENTIONS, half_integer, spin_s_kernel
from apps.modelspec.polynomial import Polynomial, linear_form_power
from apps.modelspec.spec import ModelSpec, p_body_interaction, validate_spec


class SpinPresetSerializer(serializers.Serializer):
    """`kernel.spin_s` block."""

    s = serializers.FloatField()
    convention = serializers.ChoiceField(choices=CONVENTIONS, required=False)

    def get_fields(self) -> dict:
        # `lambda` cannot be declared as a class attribute
        fields = super().get_fields()
        fields["lambda"] = serializers.FloatField(min_value=0.0)
        return fields

    def validate_s(self, value: float) -> float:
        try:
            half_integer(value)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))
        return value


class KernelSerializer(serializers.Serializer):
    """Either an explicit matrix or a spin_s preset."""

    matrix = serializers.ListField(
        child=serializers.ListField(child=serializers.FloatField()),
        required=False,
    )
    spin_s = SpinPresetSerializer(required=False)

    def validate(self, attrs: dict) -> dict:
        if ("matrix" in attrs) == ("spin_s" in attrs):
            raise serializers.ValidationError("kernel needs exactly one of `matrix` or `spin_s`")
        return attrs


class TermSerializer(serializers.Serializer):
    exps = serializers.ListField(child=serializers.IntegerField(min_value=0), allow_empty=False)
    coeff = serializers.FloatField()


class PBodySerializer(serializers.Serializer):
    p = serializers.IntegerField(min_value=1)
    coefficient = serializers.FloatField(required=False, default=1.0)


class InteractionSerializer(serializers.Serializer):
    """Either a monomial list or a p_body preset."""

    terms = TermSerializer(many=True, required=False)
    p_body = PBodySerializer(required=False)

    def validate(self, attrs: dict) -> dict:
        if ("terms" in attrs) == ("p_body" in attrs):
            raise serializers.ValidationError("interaction needs exactly one of `terms` or `p_body`")
        return attrs


class ModelFileSerializer(serializers.Serializer):
    """
    Model file schema.

    `d` and `labels` may be omitted when the kernel is a spin_s preset;
    they are then taken from the preset.
    """

    name = serializers.CharField(required=False, allow_blank=True, default="")
    d = serializers.IntegerField(min_value=2, required=False)
    labels = serializers.ListField(child=serializers.JSONField(), required=False)
    field_strength = serializers.FloatField(min_value=0.0, required=False)
    kernel = KernelSerializer()
    interaction = InteractionSerializer()

    def validate(self, attrs: dict) -> dict:
        kernel_block: dict = attrs["kernel"]
        preset: dict = {}
        if "spin_s" in kernel_block:
            block: dict = kernel_block["spin_s"]
            convention: str = block.get("convention") or (
                "pauli" if half_integer(block["s"]) == Fraction(1, 2) else "spin"
            )
            try:
                labels, kernel = spin_s_kernel(block["s"], block["lambda"], convention)
            except ValueError as exc:
                raise serializers.ValidationError({"kernel": str(exc)})
            preset = {"kernel": "spin_s", "s": str(half_integer(block["s"])), "convention": convention}
            attrs.setdefault("field_strength", block["lambda"])
            attrs.setdefault("labels", list(labels))
        else:
            try:
                kernel = np.array(kernel_block["matrix"], dtype=float)
            except ValueError:
                raise serializers.ValidationError({"kernel": "matrix rows differ in length"})
            if kernel.ndim != 2:
                raise serializers.ValidationError({"kernel": "matrix must be two-dimensional"})
            if "labels" not in attrs:
                raise serializers.ValidationError({"labels": "labels are required with an explicit matrix"})

        d: int = attrs.get("d", kernel.shape[0])
        if kernel.shape != (d, d):
            raise serializers.ValidationError({"kernel": f"expected a {d}x{d} matrix"})
        if len(attrs["labels"]) != d:
            raise serializers.ValidationError({"labels": f"expected {d} labels"})

        interaction_block: dict = attrs["interaction"]
        if "p_body" in interaction_block:
            interaction = self._p_body(interaction_block["p_body"], attrs["labels"], preset)
            preset["p_body"] = interaction_block["p_body"]["p"]
            preset["coefficient"] = interaction_block["p_body"]["coefficient"]
        else:
            terms = [(t["exps"], t["coeff"]) for t in interaction_block["terms"]]
            if any(len(exps) != d for exps, _ in terms):
                raise serializers.ValidationError({"interaction": f"every term needs {d} exponents"})
            try:
                interaction = Polynomial.from_terms(terms)
            except ValueError as exc:
                raise serializers.ValidationError({"interaction": str(exc)})

        spec = ModelSpec(
            d=d,
            labels=tuple(attrs["labels"]),
            kernel=kernel,
            interaction=interaction,
            field_strength=float(attrs.get("field_strength", 0.0)),
            name=attrs.get("name", ""),
            preset=preset,
        )
        report = validate_spec(spec)
        if not report.is_valid:
            raise serializers.ValidationError({"model": list(report.violations)})
        attrs["spec"] = spec
        return attrs

    @staticmethod
    def _p_body(block: dict, labels: list, preset: dict) -> Polynomial:
        if preset.get("kernel") == "spin_s":
            return p_body_interaction(block["p"], Fraction(preset["s"]), block["coefficient"])
        try:
            weights = [float(label) for label in labels]
        except (TypeError, ValueError):
            raise serializers.ValidationError({"labels": "p_body needs numeric labels"})
        return linear_form_power(weights, block["p"], block["coefficient"])

    def to_spec(self) -> ModelSpec:
        return self.validated_data["spec"]

