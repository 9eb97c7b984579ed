"""Convolutional semantic codec: architecture spec, functional ops, gradient check."""

from .autoencoder import (
    HEAD_PREFIX,
    Transmission,
    Parameters,
    classify,
    decode,
    encode,
    forward,
    init_params,
    parameter_digest,
    transmit,
)
from .gradcheck import ArrayCheck, GradientCheckReport, gradient_check
from .spec import INPUT_SHAPE, Activation, AutoencoderSpec, LayerKind, LayerSpec, default_spec

__all__ = [
    "HEAD_PREFIX",
    "INPUT_SHAPE",
    "Activation",
    "ArrayCheck",
    "AutoencoderSpec",
    "GradientCheckReport",
    "LayerKind",
    "LayerSpec",
    "Parameters",
    "Transmission",
    "classify",
    "decode",
    "default_spec",
    "encode",
    "forward",
    "gradient_check",
    "init_params",
    "parameter_digest",
    "transmit",
]
