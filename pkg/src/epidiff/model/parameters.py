from pydantic import BaseModel, ConfigDict, Field, PositiveFloat

from epidiff.types import GrowthForm


class Parameters(BaseModel):
    """Scalar rates of the SIRS-B system.

    All rates except the bacterial growth rate ``g`` must be strictly
    positive. ``velocity`` holds the bacteria convection speeds, one per axis;
    an empty tuple means no convection.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    d: PositiveFloat = Field(description="natural death rate")
    gamma: PositiveFloat = Field(description="recovery rate")
    sigma: PositiveFloat = Field(description="immunity loss rate")
    delta: PositiveFloat = Field(description="bacterial death rate")
    xi: PositiveFloat = Field(description="shedding rate of bacteria by infected hosts")
    g: float = Field(ge=0, description="bacterial intrinsic growth rate")
    K: PositiveFloat = Field(description="bacterial capacity and half-saturation concentration")
    beta1: PositiveFloat = Field(description="human-human transmission rate")
    beta2: PositiveFloat = Field(description="environment-human transmission rate")
    velocity: tuple[float, ...] = ()
    growth: GrowthForm = GrowthForm.LOGISTIC

    @property
    def has_convection(self) -> bool:
        return any(v != 0.0 for v in self.velocity)
