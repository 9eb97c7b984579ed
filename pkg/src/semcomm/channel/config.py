"""Channel configuration types."""

from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from ..core.config import ChannelDefaults


class Placement(str, Enum):
    """Where the channel noise enters the link."""

    INPUT = "input"
    LATENT = "latent"


class ChannelConfig(BaseModel):
    """Corruption process of the simulated link.

    Attributes:
        nasar: Noise-amplitude-to-signal-amplitude ratio, >= 0.
        placement: ``input`` corrupts the image before encoding; ``latent``
            corrupts the code between encoder and decoder.
        seed: Base seed of the noise draws.
    """

    model_config = ConfigDict(extra="forbid", frozen=True, use_enum_values=False)

    nasar: float = Field(default=ChannelDefaults.NASAR, ge=0.0)
    placement: Placement = Placement(ChannelDefaults.PLACEMENT)
    seed: int = ChannelDefaults.SEED


@dataclass(frozen=True)
class NoiseDraw:
    """Resolved noise parameters of one corruption.

    Attributes:
        sigma: Standard deviation in the units of the corrupted signal.
        seed_used: Seed of the generator that produced the noise.
    """

    sigma: float
    seed_used: int

    def __post_init__(self) -> None:
        """Reject negative standard deviations."""
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
