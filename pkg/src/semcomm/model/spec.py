"""
Declarative description of the convolutional autoencoder.

An AutoencoderSpec lists encoder and decoder layers; ``validate`` runs the
convolution size arithmetic to prove the encoder maps 3x32x32 to
``latent_shape`` and the decoder maps it back.

Example:
    >>> spec = default_spec()
    >>> spec.latent_shape
    (128, 4, 4)
    >>> spec.parameter_count()
    186371
"""

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, Tuple

from ..core.config import DatasetConstants
from ..core.exceptions import SpecError

INPUT_SHAPE: Tuple[int, int, int] = (
    DatasetConstants.CHANNELS,
    DatasetConstants.HEIGHT,
    DatasetConstants.WIDTH,
)


class LayerKind(str, Enum):
    """Layer operator."""

    CONV = "conv"
    TRANSPOSED_CONV = "transposed_conv"


class Activation(str, Enum):
    """Pointwise activation applied after a layer."""

    RELU = "relu"
    TANH = "tanh"
    NONE = "none"


@dataclass(frozen=True)
class LayerSpec:
    """One square-kernel 2-D convolution or transposed convolution."""

    kind: LayerKind
    in_channels: int
    out_channels: int
    kernel: int
    stride: int
    padding: int
    activation: Activation
    output_padding: int = 0

    def output_size(self, size: int) -> int:
        """Spatial output size for a square input of side ``size``."""
        if self.kind is LayerKind.CONV:
            return (size + 2 * self.padding - self.kernel) // self.stride + 1
        return (size - 1) * self.stride - 2 * self.padding + self.kernel + self.output_padding

    @property
    def fan_in(self) -> int:
        """Inputs feeding one output unit, used by the initializer bound."""
        return self.in_channels * self.kernel * self.kernel

    @property
    def weight_shape(self) -> Tuple[int, int, int, int]:
        """Weight tensor shape in torch layout."""
        if self.kind is LayerKind.CONV:
            return (self.out_channels, self.in_channels, self.kernel, self.kernel)
        return (self.in_channels, self.out_channels, self.kernel, self.kernel)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible form."""
        data = asdict(self)
        data["kind"] = self.kind.value
        data["activation"] = self.activation.value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LayerSpec":
        """Inverse of to_dict."""
        return cls(
            kind=LayerKind(data["kind"]),
            in_channels=int(data["in_channels"]),
            out_channels=int(data["out_channels"]),
            kernel=int(data["kernel"]),
            stride=int(data["stride"]),
            padding=int(data["padding"]),
            activation=Activation(data["activation"]),
            output_padding=int(data.get("output_padding", 0)),
        )


@dataclass(frozen=True)
class AutoencoderSpec:
    """Encoder/decoder layer lists and the latent shape they must produce."""

    encoder_layers: Tuple[LayerSpec, ...]
    decoder_layers: Tuple[LayerSpec, ...]
    latent_shape: Tuple[int, int, int]
    num_classes: int = DatasetConstants.NUM_CLASSES

    def _run(self, layers: Tuple[LayerSpec, ...], shape: Tuple[int, int, int], kind: LayerKind, part: str) -> Tuple[int, int, int]:
        channels, height, width = shape
        if not layers:
            raise SpecError(f"{part} has no layers")
        for index, layer in enumerate(layers):
            if layer.kind is not kind:
                raise SpecError(f"{part} layer {index} must be {kind.value}, got {layer.kind.value}")
            if layer.in_channels != channels:
                raise SpecError(
                    f"{part} layer {index} expects {layer.in_channels} channels, receives {channels}"
                )
            if min(layer.kernel, layer.stride) < 1 or layer.padding < 0 or layer.output_padding < 0:
                raise SpecError(f"{part} layer {index} has invalid kernel/stride/padding")
            height, width = layer.output_size(height), layer.output_size(width)
            if height < 1 or width < 1:
                raise SpecError(f"{part} layer {index} collapses the spatial size")
            channels = layer.out_channels
        return channels, height, width

    def validate(self) -> "AutoencoderSpec":
        """Check the shape contract end to end.

        Raises:
            SpecError: If the encoder does not produce ``latent_shape``, the
                decoder does not restore 3x32x32, or the output is unbounded.
        """
        latent = self._run(self.encoder_layers, INPUT_SHAPE, LayerKind.CONV, "encoder")
        if latent != tuple(self.latent_shape):
            raise SpecError(f"Encoder produces {latent}, spec declares {tuple(self.latent_shape)}")
        restored = self._run(self.decoder_layers, latent, LayerKind.TRANSPOSED_CONV, "decoder")
        if restored != INPUT_SHAPE:
            raise SpecError(f"Decoder produces {restored}, expected {INPUT_SHAPE}")
        if self.decoder_layers[-1].activation is not Activation.TANH:
            raise SpecError("Final decoder activation must be tanh to bound output to [-1, 1]")
        return self

    @property
    def latent_size(self) -> int:
        """Scalars per latent code."""
        channels, height, width = self.latent_shape
        return channels * height * width

    @property
    def compression_ratio(self) -> float:
        """Input scalars per latent scalar."""
        return DatasetConstants.PIXELS / self.latent_size

    def parameter_count(self, with_head: bool = False) -> int:
        """Number of trainable scalars, optionally including the class head."""
        total = 0
        for layer in self.encoder_layers + self.decoder_layers:
            total += layer.in_channels * layer.out_channels * layer.kernel**2 + layer.out_channels
        if with_head:
            total += self.latent_size * self.num_classes + self.num_classes
        return total

    def parameter_shapes(self, with_head: bool = False) -> Dict[str, Tuple[int, ...]]:
        """Expected tensor shape of every named parameter."""
        shapes: Dict[str, Tuple[int, ...]] = {}
        for prefix, layers in (("encoder", self.encoder_layers), ("decoder", self.decoder_layers)):
            for index, layer in enumerate(layers):
                shapes[f"{prefix}.{index}.weight"] = layer.weight_shape
                shapes[f"{prefix}.{index}.bias"] = (layer.out_channels,)
        if with_head:
            shapes["head.weight"] = (self.num_classes, self.latent_size)
            shapes["head.bias"] = (self.num_classes,)
        return shapes

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible form."""
        return {
            "encoder_layers": [layer.to_dict() for layer in self.encoder_layers],
            "decoder_layers": [layer.to_dict() for layer in self.decoder_layers],
            "latent_shape": list(self.latent_shape),
            "num_classes": self.num_classes,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AutoencoderSpec":
        """Inverse of to_dict; validates the result."""
        return cls(
            encoder_layers=tuple(LayerSpec.from_dict(d) for d in data["encoder_layers"]),
            decoder_layers=tuple(LayerSpec.from_dict(d) for d in data["decoder_layers"]),
            latent_shape=tuple(int(v) for v in data["latent_shape"]),  # type: ignore[arg-type]
            num_classes=int(data.get("num_classes", DatasetConstants.NUM_CLASSES)),
        ).validate()


def default_spec() -> AutoencoderSpec:
    """Three stride-2 convolutions down to 128x4x4, mirrored back up.

    Widths, kernel size and the tanh output are an assumption of this
    implementation; run manifests flag them as such.
    """

    def conv(cin: int, cout: int) -> LayerSpec:
        return LayerSpec(LayerKind.CONV, cin, cout, 3, 2, 1, Activation.RELU)

    def deconv(cin: int, cout: int, activation: Activation) -> LayerSpec:
        return LayerSpec(LayerKind.TRANSPOSED_CONV, cin, cout, 3, 2, 1, activation, output_padding=1)

    return AutoencoderSpec(
        encoder_layers=(conv(3, 32), conv(32, 64), conv(64, 128)),
        decoder_layers=(
            deconv(128, 64, Activation.RELU),
            deconv(64, 32, Activation.RELU),
            deconv(32, 3, Activation.TANH),
        ),
        latent_shape=(128, 4, 4),
    ).validate()
