"""Parameter blocks. Every block is frozen and validated on construction."""

import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from schemas.scenario import Region


class ChannelParams(BaseModel):
    """Air-ground propagation and radio constants, SI units.

    Defaults are the -60 dB reference gain and -94 dBm noise floor. The
    committed experiment configs pin ``beta0 = 1e-4`` and ``noise = 3.98e-14``
    so a 5 MB task can clear a 1 s deadline over 10 MHz; see DESIGN.md.
    """

    model_config = ConfigDict(frozen=True)

    a: float = Field(9.61, gt=0.0)
    b: float = Field(0.16, gt=0.0)
    beta0: float = Field(1.0e-6, gt=0.0)
    pathloss_exp: float = Field(2.3, gt=0.0)
    nlos_atten: float = Field(0.2, gt=0.0, le=1.0)
    bandwidth: float = Field(10.0e6, gt=0.0)
    p_user: float = Field(0.1, gt=0.0)
    p_uav: float = Field(1.0, gt=0.0)
    noise: float = Field(3.98e-13, gt=0.0)


class DeploymentConstraints(BaseModel):
    model_config = ConfigDict(frozen=True)

    h_min: float = Field(100.0, gt=0.0)
    h_max: float = Field(300.0, gt=0.0)
    d_min: float = Field(50.0, ge=0.0)
    region: Region = Field(default_factory=Region)

    @model_validator(mode="after")
    def _check_altitudes(self) -> "DeploymentConstraints":
        if self.h_min > self.h_max:
            raise ValueError(f"h_min ({self.h_min}) exceeds h_max ({self.h_max})")
        return self


class UtilityWeights(BaseModel):
    """F = alpha*Psi + beta*P_succ - gamma*Omega, with Psi and Omega in GHz"""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(0.2, ge=0.0)
    beta: float = Field(1.5e4, ge=0.0)
    gamma: float = Field(0.1, ge=0.0)


class DiskModelParams(BaseModel):
    """Two-UAV disk model. ``mean_capacity`` is in GHz, so capacities come back in GHz."""

    model_config = ConfigDict(frozen=True)

    radius: float = Field(..., ge=0.0)
    density: float = Field(..., ge=0.0)
    mean_capacity: float = Field(..., gt=0.0)
    min_sep: float = Field(0.0, ge=0.0)


class PsoParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_particles: int = Field(30, ge=1)
    iterations: int = Field(100, ge=0)
    inertia: float = Field(0.7, ge=0.0, le=1.0)
    cognitive: float = Field(1.5, ge=0.0)
    social: float = Field(1.5, ge=0.0)
    velocity_clamp: float = Field(0.2, gt=0.0, le=1.0)
    seed: int = Field(0, ge=0)


class BeamParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    step_xy: float = Field(100.0, gt=0.0)
    step_h: float = Field(20.0, gt=0.0)
    horizon: int = Field(3, ge=1)
    discount: float = Field(0.9, ge=0.0, le=1.0)
    width: int = Field(4, ge=1)
    max_passes: int = Field(50, ge=1)


class FixedBaselineParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    local_radius: float = Field(200.0, gt=0.0)
    # None places UAVs at (h_min + h_max) / 2
    altitude: Optional[float] = Field(None, gt=0.0)

    @property
    def unrestricted(self) -> bool:
        return math.isinf(self.local_radius)
