"""Two-mode light sources and their normalized second-order correlation tables.

A correlation table maps a mode-label quadruple ``(p1, p2, p1', p2')`` with
``p in {"x", "y"}`` to a complex number.  Only quadruples with ``p1 != p2``
and ``p1' != p2'`` are populated; unprimed labels belong to the absorbed
(positive-frequency) field, primed labels to its conjugate.

For a sub-threshold OPO with gain ``kappa`` and entanglement phase ``phi``,
writing ``G = coth(kappa)**2 * g(tau)``:

    D[xyxy] = D[yxyx] = 1/2 + G/2
    D[xyyx] = G/2 * exp(-i phi),   D[yxxy] = conj(D[xyyx])

The 1/2 is the part a classical field could produce; ``G`` is the excess
carried by the photon pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Protocol

import numpy as np

from .errors import DomainError

__all__ = [
    "XYXY", "YXYX", "XYYX", "YXXY", "QUADRUPLE_LABELS",
    "ExponentialEnvelope", "RectangularEnvelope", "ConstantEnvelope", "Envelope",
    "OpoLightModel", "WeakLimitLight", "ExcessLight", "ClassicalLight", "LightSource",
    "ModePairCorrelations", "PairState",
    "opo_table", "opo_correlations", "weak_limit_correlations", "classical_correlations",
    "classicality_witness", "pair_state", "g_envelope_eval",
]

XYXY = ("x", "y", "x", "y")
YXYX = ("y", "x", "y", "x")
XYYX = ("x", "y", "y", "x")
YXXY = ("y", "x", "x", "y")
QUADRUPLE_LABELS = (XYXY, XYYX, YXXY, YXYX)


# ---------------------------------------------------------------------------
# time-correlation envelopes


@dataclass(frozen=True)
class ExponentialEnvelope:
    """g(tau) = exp(-|tau| / coherence_time)."""

    coherence_time: float
    name: str = field(default="exponential", init=False)

    def __post_init__(self):
        if not self.coherence_time > 0:
            raise DomainError("coherence_time must be positive")

    def __call__(self, tau: float) -> float:
        return float(np.exp(-abs(tau) / self.coherence_time))


@dataclass(frozen=True)
class RectangularEnvelope:
    """g(tau) = 1 inside the window |tau| <= half_width, 0 outside."""

    half_width: float
    name: str = field(default="rectangular", init=False)

    def __post_init__(self):
        if not self.half_width >= 0:
            raise DomainError("half_width must be non-negative")

    def __call__(self, tau: float) -> float:
        return 1.0 if abs(tau) <= self.half_width else 0.0


@dataclass(frozen=True)
class ConstantEnvelope:
    """g(tau) fixed at ``value`` for every delay, for scans over g directly."""

    value: float
    name: str = field(default="constant", init=False)

    def __post_init__(self):
        if not (self.value >= 0 and np.isfinite(self.value)):
            raise DomainError("g must be finite and non-negative")

    def __call__(self, tau: float) -> float:
        return float(self.value)


Envelope = ExponentialEnvelope | RectangularEnvelope | ConstantEnvelope


# ---------------------------------------------------------------------------
# correlation tables


@dataclass(frozen=True)
class ModePairCorrelations:
    values: dict
    delay: float = 0.0

    def __post_init__(self):
        for key in self.values:
            if key not in QUADRUPLE_LABELS:
                raise DomainError(f"quadruple {key} violates the two-mode restriction")

    def __getitem__(self, labels) -> complex:
        return complex(self.values.get(tuple(labels), 0.0))

    def is_hermitian(self, tol: float = 0.0) -> bool:
        return abs(self[XYYX] - np.conj(self[YXXY])) <= tol


def opo_table(phi: float, excess: float, delay: float = 0.0) -> ModePairCorrelations:
    """Correlation table for a given pair excess ``G = coth^2(kappa) g(tau)``."""
    if excess < 0:
        raise DomainError("the correlation excess cannot be negative")
    cross = 0.5 * excess * np.exp(-1j * phi)
    diag = 0.5 + 0.5 * excess
    return ModePairCorrelations(
        {XYXY: complex(diag), YXYX: complex(diag), XYYX: cross, YXXY: np.conj(cross)},
        delay,
    )


def weak_limit_correlations(phi: float, g_tau: float, delay: float = 0.0) -> ModePairCorrelations:
    """Table with the common divergent factor coth^2(kappa)/2 removed.

    The classical 1/2 is dropped as subdominant, so diagonal entries are ``g``
    and cross entries ``exp(-+i phi) g``.  Only ratios between channels or
    parameter points are meaningful.
    """
    cross = g_tau * np.exp(-1j * phi)
    return ModePairCorrelations(
        {XYXY: complex(g_tau), YXYX: complex(g_tau), XYYX: cross, YXXY: np.conj(cross)},
        delay,
    )


def classical_correlations(delay: float = 0.0) -> ModePairCorrelations:
    """Two independent classical beams of equal intensity: no pair correlation."""
    return ModePairCorrelations({XYXY: 1.0 + 0j, YXYX: 1.0 + 0j, XYYX: 0j, YXXY: 0j}, delay)


# ---------------------------------------------------------------------------
# light sources


class LightSource(Protocol):
    def correlations(self, tau: float) -> ModePairCorrelations: ...

    def with_phi(self, phi: float) -> "LightSource": ...


def _coth2(kappa: float) -> float:
    return 1.0 / np.tanh(kappa) ** 2


@dataclass(frozen=True)
class OpoLightModel:
    kappa: float
    phi: float
    envelope: Envelope = ExponentialEnvelope(1.0)

    def __post_init__(self):
        if not self.kappa > 0:
            raise DomainError(
                "kappa must be positive; for the kappa -> 0 law use the weak-limit correlations"
            )

    def correlations(self, tau: float) -> ModePairCorrelations:
        return opo_correlations(self, tau)

    def with_phi(self, phi: float) -> "OpoLightModel":
        return replace(self, phi=phi)


@dataclass(frozen=True)
class WeakLimitLight:
    phi: float
    envelope: Envelope = ExponentialEnvelope(1.0)

    def correlations(self, tau: float) -> ModePairCorrelations:
        return weak_limit_correlations(self.phi, g_envelope_eval(self, tau), tau)

    def with_phi(self, phi: float) -> "WeakLimitLight":
        return replace(self, phi=phi)


@dataclass(frozen=True)
class ExcessLight:
    """OPO-form table with the excess ``coth^2(kappa) g`` given directly, delay-independent."""

    phi: float
    excess: float

    def correlations(self, tau: float) -> ModePairCorrelations:
        return opo_table(self.phi, self.excess, tau)

    def with_phi(self, phi: float) -> "ExcessLight":
        return replace(self, phi=phi)


@dataclass(frozen=True)
class ClassicalLight:
    def correlations(self, tau: float) -> ModePairCorrelations:
        return classical_correlations(tau)

    def with_phi(self, phi: float) -> "ClassicalLight":
        return self


def g_envelope_eval(model, tau: float) -> float:
    if tau < 0:
        raise DomainError("delay must be non-negative")
    return model.envelope(tau)


def opo_correlations(model: OpoLightModel, tau: float) -> ModePairCorrelations:
    if not model.kappa > 0:
        raise DomainError("kappa = 0 makes coth diverge; use weak_limit_correlations")
    return opo_table(model.phi, _coth2(model.kappa) * g_envelope_eval(model, tau), tau)


def classicality_witness(model: OpoLightModel, tau: float) -> float:
    """coth^2(kappa) g(tau); above 1 no classical field reproduces the diagonal correlation."""
    return _coth2(model.kappa) * g_envelope_eval(model, tau)


# ---------------------------------------------------------------------------
# pair state


@dataclass(frozen=True)
class PairState:
    """Two-photon polarization amplitudes ``amplitudes[p1, p2]`` with x = 0, y = 1."""

    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probability(self, first: str, second: str) -> float:
        i, j = "xy".index(first), "xy".index(second)
        return float(abs(self.amplitudes[i, j]) ** 2)

    def in_linear_basis(self, theta: float) -> np.ndarray:
        """Amplitudes in the linear basis rotated by ``theta`` about the propagation axis."""
        c, s = np.cos(theta), np.sin(theta)
        u = np.array([[c, s], [-s, c]])
        return u @ self.amplitudes @ u.T

    def same_polarization_probability(self, theta: float) -> float:
        a = self.in_linear_basis(theta)
        return float(abs(a[0, 0]) ** 2 + abs(a[1, 1]) ** 2)


def pair_state(phi: float) -> PairState:
    amp = np.zeros((2, 2), dtype=complex)
    amp[0, 1] = 1.0 / np.sqrt(2.0)
    amp[1, 0] = np.exp(1j * phi) / np.sqrt(2.0)
    return PairState(amp)
