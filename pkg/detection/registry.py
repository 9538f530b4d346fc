"""Config-facing model specifications and the closed model registry."""
import logging
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from detection.base_model import DetectionModel
from detection.friis_model import FriisModel, FriisParams
from detection.range_model import ConstantProfile, ExponentialProfile, RangeModel
from detection.tabulated_model import TabulatedModel

logger = logging.getLogger(__name__)


class FriisSpec(FriisParams):
    """Friis/Q-function model section."""
    kind: Literal["friis_q"] = "friis_q"

    def params(self) -> FriisParams:
        return FriisParams(**self.model_dump(exclude={"kind"}))


class RangeSpec(BaseModel):
    """Parametric range profile section."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["generic_range"] = "generic_range"
    family: Literal["constant", "exponential"] = "exponential"
    p: Optional[float] = Field(None, gt=0, lt=1)
    p_near: float = Field(0.9, gt=0, lt=1)
    p_far: float = Field(0.05, gt=0, lt=1)
    length_scale: float = Field(10.0, gt=0)

    @model_validator(mode="after")
    def _constant_needs_p(self):
        if self.family == "constant" and self.p is None:
            raise ValueError("family 'constant' requires p")
        return self


class TabulatedSpec(BaseModel):
    """Distance → probability table section."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["tabulated"] = "tabulated"
    distances: List[float]
    probabilities: List[float]


ModelSpec = Annotated[Union[FriisSpec, RangeSpec, TabulatedSpec], Field(discriminator="kind")]


def build_model(spec) -> DetectionModel:
    """Instantiate the detection model described by a config section."""
    if isinstance(spec, FriisSpec):
        return FriisModel(spec.params())
    if isinstance(spec, RangeSpec):
        if spec.family == "constant":
            return RangeModel(ConstantProfile(spec.p))
        return RangeModel(ExponentialProfile(spec.p_near, spec.p_far, spec.length_scale))
    if isinstance(spec, TabulatedSpec):
        return TabulatedModel(spec.distances, spec.probabilities)
    raise ValueError(f"Unsupported model specification: {type(spec).__name__}")
