"""Total two-photon cross sections, closed-form recoil-limit values, and derived ratios.

The total cross section sums, over the four mode quadruples and ranks X, the
lab-frame scalar product of the two photons' polarization tensors with the
body-frame partial cross section:

    sigma0 = sum_quad sum_X sum_Xi (-1)^(X+Xi) Phi_{X Xi}(e1, e1') Phi_{X -Xi}(e2, e2') Q^(X)_quad

All values are in arbitrary units; only ratios carry physical meaning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import (
    ChannelSpec,
    CollisionKinematics,
    Segment,
    WORKED_CHANNELS,
    q_tensor,
    recoil_kinematics,
)
from .errors import DomainError
from .light import LightSource
from .polarization import enumerate_mode_quadruples, lab_scalar, phi_tensor

__all__ = [
    "CrossSectionResult",
    "segment_correlations",
    "total_cross_section",
    "recoil_oracle",
    "RECOIL_COEFFICIENTS",
    "branching_ratios",
    "normalized_fractions",
    "control_contrast",
]

VANISHING = 1e-12  # relative size below which a cancelling sum counts as zero
UNITS_NOTE = "arbitrary units: only ratios of cross sections are physical"


@dataclass(frozen=True)
class CrossSectionResult:
    sigma0: float
    partials: dict[int, complex]
    channel: ChannelSpec
    parameters: dict = field(default_factory=dict)

    @property
    def imaginary_residue(self) -> float:
        return abs(sum(self.partials.values()).imag)


def segment_correlations(kin: CollisionKinematics, light: LightSource, delay: float = 0.0) -> dict:
    """Correlation table for every active segment, at |segment duration - optical delay|."""
    return {seg: light.correlations(abs(kin.duration(seg) - delay)) for seg in kin.active_segments()}


def total_cross_section(
    channel: ChannelSpec,
    kin: CollisionKinematics | None,
    light: LightSource,
    delay: float = 0.0,
    basis=None,
) -> CrossSectionResult:
    """sigma0 for one channel.

    ``kin=None`` means recoil-limit kinematics.  ``delay`` is the optical
    delay-line offset subtracted from each segment duration before the light
    correlation is evaluated.  ``basis`` overrides the lab orientation of the
    two OPO polarization modes.
    """
    kin = kin if kin is not None else recoil_kinematics()
    corr = segment_correlations(kin, light, delay)
    quads = enumerate_mode_quadruples(basis)
    partials: dict[int, complex] = {}
    for X in (0, 1, 2):
        q = q_tensor(channel, kin, corr, X)
        acc = 0j
        for quad in quads:
            e1, e2, e1p, e2p = quad.vectors
            scalar = lab_scalar(phi_tensor(e1, e1p, X), phi_tensor(e2, e2p, X))
            acc += scalar * q[quad.labels]
        partials[X] = acc
    sigma0 = float(sum(partials.values()).real)
    params = {
        "light": type(light).__name__,
        "phi": getattr(light, "phi", None),
        "kappa": getattr(light, "kappa", None),
        "delay": delay,
        "kinematics": kin.digest(),
        "units": UNITS_NOTE,
    }
    return CrossSectionResult(sigma0, partials, channel, params)


# prefactor, coefficient c in 1 + (1 + c cos(phi)) G
RECOIL_COEFFICIENTS = {
    (0, 0, 0): (1.0 / 15.0, 1.0),
    (0, 1, 0): (1.0 / 15.0, 1.0),
    (0, 0, 1): (4.0 / 15.0, -0.25),
    (0, 1, 1): (4.0 / 15.0, -0.25),
    (0, 1, 2): (1.0 / 5.0, 1.0),
}


def recoil_oracle(channel: ChannelSpec, phi: float, coth2_g: float) -> float:
    """Closed-form recoil-limit cross section with unit Franck-Condon weights.

    ``coth2_g`` is coth(kappa)^2 g(tau).
    """
    try:
        pre, c = RECOIL_COEFFICIENTS[channel.lambdas]
    except KeyError:
        raise DomainError(
            f"no closed form for {channel.label}; supported: "
            + ", ".join(ch.label for ch in WORKED_CHANNELS)
        ) from None
    return pre * (1.0 + (1.0 + c * np.cos(phi)) * coth2_g)


def branching_ratios(
    channels: list[ChannelSpec],
    kin: CollisionKinematics | None,
    light: LightSource,
    delay: float = 0.0,
) -> dict[str, float]:
    results = [total_cross_section(ch, kin, light, delay) for ch in channels]
    return normalized_fractions(results)


def all_vanish(results: list[CrossSectionResult]) -> bool:
    """True when the summed sigma0 is zero to within cancellation error."""
    total = sum(r.sigma0 for r in results)
    scale = sum(abs(v) for r in results for v in r.partials.values())
    return not total > VANISHING * scale


def normalized_fractions(results: list[CrossSectionResult]) -> dict[str, float]:
    if all_vanish(results):
        raise DomainError("all channel cross sections vanish; branching ratios undefined")
    total = sum(r.sigma0 for r in results)
    return {r.channel.label: r.sigma0 / total for r in results}


def control_contrast(
    channel: ChannelSpec,
    phi_a: float,
    phi_b: float,
    kin: CollisionKinematics | None,
    light: LightSource,
    delay: float = 0.0,
) -> float:
    """sigma0(phi_a) / sigma0(phi_b) with everything else held fixed.

    The denominator counts as vanishing when it is below 1e-12 of the rank
    contributions that cancel to produce it.
    """
    num = total_cross_section(channel, kin, light.with_phi(phi_a), delay).sigma0
    den_res = total_cross_section(channel, kin, light.with_phi(phi_b), delay)
    den = den_res.sigma0
    if abs(den) <= VANISHING * sum(abs(v) for v in den_res.partials.values()):
        raise DomainError(f"sigma0 vanishes at phi = {phi_b}; contrast undefined")
    return num / den
