"""Training configuration."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from ..channel.config import Placement
from ..core.config import DatasetConstants, TrainingDefaults


class TrainingMode(str, Enum):
    """Training regime."""

    SSL = "ssl"
    SL = "sl"


class TrainingConfig(BaseModel):
    """Hyperparameters of one training run.

    Attributes:
        mode: ``ssl`` (denoising reconstruction only) or ``sl`` (reconstruction
            plus a label-supervised classification head).
        learning_rate: Adam step size.
        epochs: Full passes over the training subset.
        batch_size: Images per optimizer step.
        noise_factor: Training noise standard deviation in normalized units.
        sample_count: Size of the stratified training subset.
        seed: Seed of initialization, subset, shuffles and noise.
        sl_aux_weight: Weight of the cross-entropy term in ``sl`` mode.
        stratified: Draw equal per-class counts when subsetting.
        placement: Where training noise is injected; at ``latent`` the noise
            factor is relative to the RMS of each batch of codes.

    Example:
        >>> TrainingConfig(epochs=1, sample_count=512).batch_size
        128
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    mode: TrainingMode = TrainingMode.SSL
    learning_rate: float = Field(default=TrainingDefaults.LEARNING_RATE, gt=0.0)
    epochs: int = Field(default=TrainingDefaults.EPOCHS, ge=1)
    batch_size: int = Field(default=TrainingDefaults.BATCH_SIZE, ge=1)
    noise_factor: float = Field(default=TrainingDefaults.NOISE_FACTOR, ge=0.0)
    sample_count: int = Field(
        default=TrainingDefaults.SAMPLE_COUNT, ge=1, le=DatasetConstants.TRAIN_RECORDS
    )
    seed: int = TrainingDefaults.SEED
    sl_aux_weight: float = Field(default=TrainingDefaults.SL_AUX_WEIGHT, ge=0.0)
    stratified: bool = True
    placement: Placement = Placement.INPUT
    beta1: float = Field(default=TrainingDefaults.BETA1, ge=0.0, lt=1.0)
    beta2: float = Field(default=TrainingDefaults.BETA2, ge=0.0, lt=1.0)
    adam_epsilon: float = Field(default=TrainingDefaults.EPSILON, gt=0.0)
