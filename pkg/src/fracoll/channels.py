"""Molecular excitation channels and the rank-resolved partial cross sections Q^(X).

A channel is an ordered triple of |Lambda| values (initial, intermediate, final).
In the body frame a photon absorbed on the step Lambda -> Lambda + q contributes
its spherical component q.  Both signed branches of degenerate Pi/Delta terms
are kept; two branch paths interfere when they start and end in the same
signed-Lambda state (for a Sigma initial state this happens only in
Sigma -> Pi -> Sigma).

For each rank X the body-frame kernel is

    K^X_Xi = 1/(2X+1) sum_{p, p'} (-1)^(q1 + q2 + X + Xi)
             C^{X Xi}_{1 q1' 1 -q1} C^{X -Xi}_{1 q2' 1 -q2},   Xi = q1' - q1,

with p = (q1, q2) the amplitude path and p' = (q1', q2') the conjugate one.
Q^(X) for a mode quadruple then carries the trajectory weighting

    Q^(X) = w1 w2 / (2 j0 + 1) sum_Xi K^X_Xi sum_seg theta_seg d^X_{Xi Xi}(xi_seg) D(tau_seg).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .angular import clebsch_gordan, wigner_small_d
from .errors import ConfigurationError, DomainError
from .light import QUADRUPLE_LABELS, ModePairCorrelations

__all__ = [
    "ChannelSpec", "parse_channel", "WORKED_CHANNELS", "TERM_SYMBOLS",
    "Segment", "TrajectoryCase", "CollisionKinematics", "recoil_kinematics",
    "allowed_body_components", "body_paths", "rank_kernel", "q_tensor",
]

TERM_SYMBOLS = ("Σ", "Π", "Δ", "Φ")
_ASCII_TERMS = {"S": 0, "SIGMA": 0, "P": 1, "PI": 1, "D": 2, "DELTA": 2, "F": 3, "PHI": 3}


@dataclass(frozen=True)
class ChannelSpec:
    lambdas: tuple[int, int, int]
    label: str = ""

    def __post_init__(self):
        lam = tuple(int(v) for v in self.lambdas)
        if len(lam) != 3 or min(lam) < 0 or max(lam) >= len(TERM_SYMBOLS):
            raise DomainError(f"|Lambda| triple {self.lambdas} is not supported")
        object.__setattr__(self, "lambdas", lam)
        if not self.label:
            object.__setattr__(self, "label", "→".join(TERM_SYMBOLS[v] for v in lam))

    @property
    def dipole_allowed(self) -> bool:
        return bool(body_paths(self))


def parse_channel(label: str) -> ChannelSpec:
    """Accepts "Σ→Π→Δ" as well as ASCII spellings like "S-P-D" or "Sigma->Pi->Delta"."""
    parts = [p for p in re.split(r"\s*(?:→|->|-|>|,|\s)\s*", label.strip()) if p]
    lam = []
    for p in parts:
        if p in TERM_SYMBOLS:
            lam.append(TERM_SYMBOLS.index(p))
        elif p.upper() in _ASCII_TERMS:
            lam.append(_ASCII_TERMS[p.upper()])
        else:
            raise ConfigurationError(
                f"unknown channel label {label!r}; valid labels: "
                + ", ".join(c.label for c in WORKED_CHANNELS)
            )
    if len(lam) != 3:
        raise ConfigurationError(f"channel {label!r} must name three molecular terms")
    return ChannelSpec(tuple(lam))


WORKED_CHANNELS = (
    ChannelSpec((0, 0, 0)),
    ChannelSpec((0, 1, 0)),
    ChannelSpec((0, 0, 1)),
    ChannelSpec((0, 1, 1)),
    ChannelSpec((0, 1, 2)),
)


# ---------------------------------------------------------------------------
# trajectory segments and kinematics


class Segment(str, Enum):
    INCOMING_OUTGOING = "incoming_outgoing"  # first pass incoming, second outgoing
    INCOMING = "incoming"  # both passes before the turning point
    OUTGOING = "outgoing"  # both passes after it


class TrajectoryCase(str, Enum):
    INCOMING_OUTGOING = "incoming_outgoing"
    INCOMING = "incoming"
    OUTGOING = "outgoing"
    ALL = "all"  # every history compatible with the Condon radii


def _step(x: float) -> float:
    return float(np.heaviside(x, 0.5))


@dataclass(frozen=True)
class CollisionKinematics:
    """Condon radii, per-segment body-frame rotation angles and durations, and weights.

    Angles are the rotation of the interatomic axis accumulated between the two
    Condon passes along each segment.
    """

    R1: float
    R2: float
    case: TrajectoryCase = TrajectoryCase.INCOMING_OUTGOING
    xi_pm: float = 0.0
    xi_minus: float = 0.0
    xi_plus: float = 0.0
    tau_pm: float = 0.0
    tau_minus: float = 0.0
    tau_plus: float = 0.0
    w1: float = 1.0
    w2: float = 1.0
    j0: float = 0

    def __post_init__(self):
        object.__setattr__(self, "case", TrajectoryCase(self.case))
        if min(self.tau_pm, self.tau_minus, self.tau_plus) < 0:
            raise DomainError("segment durations must be non-negative")
        if min(self.w1, self.w2) < 0:
            raise DomainError("Franck-Condon weights must be non-negative")
        if self.j0 < 0:
            raise DomainError("j0 must be non-negative")

    def angle(self, seg: Segment) -> float:
        return {Segment.INCOMING_OUTGOING: self.xi_pm, Segment.INCOMING: self.xi_minus,
                Segment.OUTGOING: self.xi_plus}[seg]

    def duration(self, seg: Segment) -> float:
        return {Segment.INCOMING_OUTGOING: self.tau_pm, Segment.INCOMING: self.tau_minus,
                Segment.OUTGOING: self.tau_plus}[seg]

    def segment_weights(self) -> dict[Segment, float]:
        """Step-function weight of each segment for the configured case."""
        inc, out = _step(self.R1 - self.R2), _step(self.R2 - self.R1)
        if self.case is TrajectoryCase.INCOMING_OUTGOING:
            return {Segment.INCOMING_OUTGOING: 1.0}
        if self.case is TrajectoryCase.INCOMING:
            return {Segment.INCOMING: inc}
        if self.case is TrajectoryCase.OUTGOING:
            return {Segment.OUTGOING: out}
        return {Segment.INCOMING_OUTGOING: 1.0, Segment.INCOMING: inc, Segment.OUTGOING: out}

    def active_segments(self) -> list[Segment]:
        return [s for s, w in self.segment_weights().items() if w > 0]

    def digest(self) -> dict:
        return {
            "R1": self.R1, "R2": self.R2, "case": self.case.value,
            "xi": [self.xi_pm, self.xi_minus, self.xi_plus],
            "tau": [self.tau_pm, self.tau_minus, self.tau_plus],
            "w": [self.w1, self.w2], "j0": float(self.j0),
        }


def recoil_kinematics(tau: float = 0.0) -> CollisionKinematics:
    """No axis rotation, a single incoming-outgoing segment, unit weights."""
    return CollisionKinematics(R1=1.0, R2=1.0, case=TrajectoryCase.INCOMING_OUTGOING, tau_pm=tau)


# ---------------------------------------------------------------------------
# body-frame selection rules


@lru_cache(maxsize=None)
def body_paths(channel: ChannelSpec) -> tuple[tuple[int, int, int, int], ...]:
    """Signed-Lambda histories (L0, q1, q2, L2) permitted by dipole selection."""
    l0, l1, l2 = channel.lambdas
    paths = []
    for s0, s1, s2 in itertools.product(sorted({l0, -l0}), sorted({l1, -l1}), sorted({l2, -l2})):
        q1, q2 = s1 - s0, s2 - s1
        if abs(q1) <= 1 and abs(q2) <= 1:
            paths.append((s0, q1, q2, s2))
    return tuple(paths)


def allowed_body_components(channel: ChannelSpec) -> set[tuple[int, int]]:
    return {(q1, q2) for _, q1, q2, _ in body_paths(channel)}


@lru_cache(maxsize=None)
def rank_kernel(channel: ChannelSpec, X: int) -> dict[int, float]:
    """Body-frame kernel K^X_Xi, keyed by Xi (entries that vanish are omitted)."""
    paths = body_paths(channel)
    n_initial = len({p[0] for p in paths}) or 1
    kernel: dict[int, float] = {}
    for amp, conj in itertools.product(paths, repeat=2):
        if amp[0] != conj[0] or amp[3] != conj[3]:
            continue
        _, q1, q2, _ = amp
        _, q1c, q2c, _ = conj
        xi = q1c - q1
        if abs(xi) > X:
            continue
        sign = -1.0 if (q1 + q2 + X + xi) % 2 else 1.0
        val = sign * clebsch_gordan(1, q1c, 1, -q1, X, xi) * clebsch_gordan(1, q2c, 1, -q2, X, -xi)
        kernel[xi] = kernel.get(xi, 0.0) + val
    return {xi: v / ((2 * X + 1) * n_initial) for xi, v in sorted(kernel.items()) if v != 0.0}


def q_tensor(
    channel: ChannelSpec,
    kin: CollisionKinematics,
    corr: dict[Segment, ModePairCorrelations],
    X: int,
) -> dict[tuple[str, str, str, str], complex]:
    """Partial cross section Q^(X) for each of the four mode quadruples.

    ``corr`` supplies the correlation table of every segment that carries
    weight for ``kin.case``; a missing one raises :class:`ConfigurationError`.
    """
    if X not in (0, 1, 2):
        raise DomainError("rank must be 0, 1 or 2")
    weights = {s: w for s, w in kin.segment_weights().items() if w > 0}
    missing = [s.value for s in weights if s not in corr]
    if missing:
        raise ConfigurationError(f"no correlation table for segment(s) {', '.join(missing)}")

    kernel = rank_kernel(channel, X)
    scale = kin.w1 * kin.w2 / (2 * kin.j0 + 1)
    out = {}
    for labels in QUADRUPLE_LABELS:
        total = 0j
        for seg, w in weights.items():
            rot = sum(k * wigner_small_d(X, xi, xi, kin.angle(seg)) for xi, k in kernel.items())
            total += w * rot * corr[seg][labels]
        out[labels] = scale * total
    return out
