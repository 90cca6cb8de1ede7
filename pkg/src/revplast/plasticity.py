"""Drucker-Prager perfect plasticity: stress invariants, yield value, flow direction.

Zero friction angle reduces the criterion to von Mises with the equivalent
stress capped at the shear failure stress.  Perfect plasticity only: the
surface carries no internal variables.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ApexSingularityError
from .tensors import IVEC

# relative equivalent-stress floor below which the deviatoric direction is undefined
APEX_TOLERANCE = 1e-10


@dataclass(frozen=True)
class DruckerPrager:
    """Pressure-sensitive yield surface F = s_eq + s_m tan(phi) - s0.

    friction_angle in radians, shear_strength (s0) in MPa.  A distinct
    dilation_angle makes the flow non-associated; left None the flow is
    associated (potential = yield function).
    """

    friction_angle: float
    shear_strength: float
    dilation_angle: float | None = None

    def __post_init__(self):
        if self.shear_strength <= 0.0:
            raise ValueError(f"shear strength must be positive, got {self.shear_strength}")
        if not 0.0 <= self.friction_angle < np.pi / 2.0:
            raise ValueError(f"friction angle must lie in [0, pi/2), got {self.friction_angle}")
        if self.dilation_angle is not None and not 0.0 <= self.dilation_angle < np.pi / 2.0:
            raise ValueError(f"dilation angle must lie in [0, pi/2), got {self.dilation_angle}")

    @property
    def potential_angle(self) -> float:
        return self.friction_angle if self.dilation_angle is None else self.dilation_angle


def stress_invariants(sig: np.ndarray) -> tuple[float, float]:
    """(mean stress, equivalent deviatoric stress) of a Mandel stress vector."""
    sig = np.asarray(sig, dtype=float)
    mean = (sig[0] + sig[1] + sig[2]) / 3.0
    dev = sig - mean * IVEC
    return mean, float(np.sqrt(1.5 * np.dot(dev, dev)))


def yield_value(model: DruckerPrager, sig: np.ndarray) -> float:
    """Yield function value in MPa; positive means inadmissible."""
    mean, eq = stress_invariants(sig)
    return eq + mean * np.tan(model.friction_angle) - model.shear_strength


def flow_direction(model: DruckerPrager, sig: np.ndarray,
                   angle: float | None = None) -> np.ndarray:
    """Gradient of the yield function (or potential, via ``angle``) at ``sig``.

    Undefined where the deviatoric stress vanishes; for positive friction that
    is the surface apex, which this model deliberately does not regularize.
    """
    sig = np.asarray(sig, dtype=float)
    mean, eq = stress_invariants(sig)
    if eq <= APEX_TOLERANCE * model.shear_strength:
        raise ApexSingularityError(
            "deviatoric stress vanishes; flow direction undefined at the apex")
    tan_a = np.tan(model.friction_angle if angle is None else angle)
    dev = sig - mean * IVEC
    return 1.5 * dev / eq + (tan_a / 3.0) * IVEC


def potential_direction(model: DruckerPrager, sig: np.ndarray) -> np.ndarray:
    """Plastic flow direction from the potential (associated unless a dilation angle is set)."""
    return flow_direction(model, sig, angle=model.potential_angle)
