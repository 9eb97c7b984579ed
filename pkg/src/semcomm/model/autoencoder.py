"""
Functional semantic codec.

Parameters are plain ordered dicts of named tensors (``encoder.0.weight``,
``decoder.2.bias``, ``head.weight`` ...). ``encode``/``decode``/``forward`` are
pure functions of (params, input), built on ``torch.nn.functional`` so they can
run concurrently. ``transmit`` is the one pass over the simulated link.
"""

import hashlib
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

import torch
import torch.nn.functional as F

from ..channel.awgn import corrupt
from ..channel.config import ChannelConfig, Placement
from ..core.exceptions import ShapeError
from ..core.utils import derive_seed
from ..data.transforms import ImageBatch
from .spec import INPUT_SHAPE, Activation, AutoencoderSpec, LayerKind, LayerSpec, default_spec

Parameters = Dict[str, torch.Tensor]

HEAD_PREFIX = "head."


def _layer_names(prefix: str, index: int) -> Tuple[str, str]:
    return f"{prefix}.{index}.weight", f"{prefix}.{index}.bias"


def _uniform(shape: Tuple[int, ...], bound: float, generator: torch.Generator) -> torch.Tensor:
    return (torch.rand(shape, generator=generator, dtype=torch.float32) * 2.0 - 1.0) * bound


def init_params(spec: Optional[AutoencoderSpec] = None, seed: int = 0, with_head: bool = False) -> Parameters:
    """Fan-in scaled uniform initialization.

    Every weight and bias of a layer is drawn from U(-b, b) with
    b = 1 / sqrt(in_channels * kernel**2). The class head uses its own
    generator so adding it leaves the backbone draws unchanged.

    Args:
        spec: Architecture; defaults to ``default_spec()``.
        seed: Generator seed.
        with_head: Also create ``head.weight``/``head.bias`` for the labelled regime.

    Returns:
        Ordered parameter dict.
    """
    spec = (spec or default_spec()).validate()
    generator = torch.Generator(device="cpu")
    generator.manual_seed(seed)
    params: Parameters = OrderedDict()
    for prefix, layers in (("encoder", spec.encoder_layers), ("decoder", spec.decoder_layers)):
        for index, layer in enumerate(layers):
            bound = 1.0 / math.sqrt(layer.fan_in)
            weight_name, bias_name = _layer_names(prefix, index)
            params[weight_name] = _uniform(layer.weight_shape, bound, generator)
            params[bias_name] = _uniform((layer.out_channels,), bound, generator)
    if with_head:
        head_generator = torch.Generator(device="cpu")
        head_generator.manual_seed(derive_seed(seed, "head"))
        bound = 1.0 / math.sqrt(spec.latent_size)
        params[HEAD_PREFIX + "weight"] = _uniform((spec.num_classes, spec.latent_size), bound, head_generator)
        params[HEAD_PREFIX + "bias"] = _uniform((spec.num_classes,), bound, head_generator)
    return params


def parameter_digest(params: Parameters) -> str:
    """SHA-256 over parameter names, shapes and raw bytes in name order."""
    hasher = hashlib.sha256()
    for name in sorted(params):
        tensor = params[name].detach().to("cpu").contiguous()
        hasher.update(name.encode("utf-8"))
        hasher.update(str(tuple(tensor.shape)).encode("utf-8"))
        hasher.update(tensor.numpy().tobytes())
    return hasher.hexdigest()


def _activate(x: torch.Tensor, activation: Activation) -> torch.Tensor:
    if activation is Activation.RELU:
        return F.relu(x)
    if activation is Activation.TANH:
        return torch.tanh(x)
    return x


def _apply(layer: LayerSpec, x: torch.Tensor, weight: torch.Tensor, bias: torch.Tensor) -> torch.Tensor:
    if layer.kind is LayerKind.CONV:
        y = F.conv2d(x, weight, bias, stride=layer.stride, padding=layer.padding)
    else:
        y = F.conv_transpose2d(
            x,
            weight,
            bias,
            stride=layer.stride,
            padding=layer.padding,
            output_padding=layer.output_padding,
        )
    return _activate(y, layer.activation)


def _data(batch: Union[ImageBatch, torch.Tensor]) -> torch.Tensor:
    return batch.data if isinstance(batch, ImageBatch) else batch


def encode(params: Parameters, batch: Union[ImageBatch, torch.Tensor], spec: Optional[AutoencoderSpec] = None) -> torch.Tensor:
    """Map normalized images (B, 3, 32, 32) to latent codes (B, *latent_shape)."""
    spec = spec or default_spec()
    x = _data(batch)
    if x.dim() != 4 or tuple(x.shape[1:]) != INPUT_SHAPE:
        raise ShapeError(f"encode expects (B, 3, 32, 32), got {tuple(x.shape)}")
    for index, layer in enumerate(spec.encoder_layers):
        weight_name, bias_name = _layer_names("encoder", index)
        x = _apply(layer, x, params[weight_name], params[bias_name])
    return x


def decode(params: Parameters, code: torch.Tensor, spec: Optional[AutoencoderSpec] = None) -> torch.Tensor:
    """Map latent codes back to images bounded in [-1, 1]."""
    spec = spec or default_spec()
    if code.dim() != 4 or tuple(code.shape[1:]) != tuple(spec.latent_shape):
        raise ShapeError(
            f"decode expects (B, {', '.join(map(str, spec.latent_shape))}), got {tuple(code.shape)}"
        )
    x = code
    for index, layer in enumerate(spec.decoder_layers):
        weight_name, bias_name = _layer_names("decoder", index)
        x = _apply(layer, x, params[weight_name], params[bias_name])
    return x


def forward(params: Parameters, batch: Union[ImageBatch, torch.Tensor], spec: Optional[AutoencoderSpec] = None) -> torch.Tensor:
    """Reconstruct images: decode(encode(batch))."""
    return decode(params, encode(params, batch, spec), spec)


def classify(params: Parameters, code: torch.Tensor) -> torch.Tensor:
    """Class logits from the flattened latent code."""
    if HEAD_PREFIX + "weight" not in params:
        raise ShapeError("Parameters carry no classification head")
    return F.linear(code.flatten(1), params[HEAD_PREFIX + "weight"], params[HEAD_PREFIX + "bias"])


@dataclass(frozen=True)
class Transmission:
    """One pass over the simulated link.

    Attributes:
        received: Image entering the encoder; corrupted at ``input`` placement.
        code: Latent code entering the decoder; corrupted at ``latent`` placement.
        reconstruction: Decoder output in [-1, 1].
    """

    received: torch.Tensor
    code: torch.Tensor
    reconstruction: torch.Tensor


def transmit(
    params: Parameters,
    batch: Union[ImageBatch, torch.Tensor],
    channel: ChannelConfig,
    amplitude: Optional[float] = None,
    seed: Optional[int] = None,
    item_seeds: Optional[Sequence[int]] = None,
    spec: Optional[AutoencoderSpec] = None,
) -> Transmission:
    """Encode, corrupt at ``channel.placement`` and decode a batch.

    Both link stages go through ``corrupt``; the one that does not match the
    placement passes its signal through unchanged.

    Args:
        params: Codec parameters.
        batch: Clean normalized images.
        channel: NASAR, placement and seed.
        amplitude: Signal amplitude; defaults to the RMS of the corrupted signal.
        seed: Seed override; defaults to ``channel.seed``.
        item_seeds: One noise seed per image.
        spec: Architecture.
    """
    x = _data(batch)
    received = corrupt(x, channel, amplitude, seed, stage=Placement.INPUT, item_seeds=item_seeds)
    code = encode(params, received, spec)
    code = corrupt(code, channel, amplitude, seed, stage=Placement.LATENT, item_seeds=item_seeds)
    return Transmission(received=received, code=code, reconstruction=decode(params, code, spec))
