"""Classical single-trajectory kinematics of a fractional optical collision.

The pair approaches on the ground potential with energy E and impact
parameter b.  The first photon is absorbed at the Condon radius R1 and the
relative motion continues on the intermediate potential (kinetic energy and
angular momentum unchanged) until the second photon is absorbed at R2.  The
centrifugal term is written E b^2 / R^2 throughout.

Radial integrals use the substitution R = Rt (1 + u^2), which removes the
inverse-square-root singularity at the turning point Rt.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import roots_genlaguerre

from .channels import CollisionKinematics, Segment, TrajectoryCase
from .errors import ConfigurationError, DomainError
from .potentials import PotentialModel

__all__ = [
    "TrajectoryInputs",
    "SegmentKinematics",
    "condon_points",
    "turning_point",
    "segment_kinematics",
    "classify_case",
    "franck_condon_weight",
    "deflection_function",
    "resolve_kinematics",
    "ThermalAverage",
    "thermal_average",
]

_QUAD = dict(epsabs=0.0, epsrel=1e-12, limit=400)
_U_SMALL = 1e-5


@dataclass(frozen=True)
class TrajectoryInputs:
    collision_energy: float
    impact_parameter: float
    reduced_mass: float
    ground: PotentialModel
    intermediate: PotentialModel
    final: PotentialModel
    photon_detunings: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.collision_energy > 0:
            raise DomainError("collision energy must be positive")
        if not self.reduced_mass > 0:
            raise DomainError("reduced mass must be positive")
        if self.impact_parameter < 0:
            raise DomainError("impact parameter must be non-negative")

    @property
    def speed(self) -> float:
        """Asymptotic relative speed sqrt(2E/mu)."""
        return float(np.sqrt(2.0 * self.collision_energy / self.reduced_mass))

    @property
    def centrifugal(self) -> float:
        return self.collision_energy * self.impact_parameter**2


def _shared_domain(*pots) -> tuple[float, float]:
    lo = max(p.domain[0] for p in pots)
    hi = min(p.domain[1] for p in pots)
    if not lo < hi:
        raise DomainError("potential domains do not overlap")
    return lo, hi


def _scan_roots(fun: Callable, lo: float, hi: float, n_scan: int) -> list[float]:
    grid = np.geomspace(lo, hi, n_scan)
    vals = np.array([fun(r) for r in grid])
    roots = []
    for i in range(n_scan - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(float(grid[i]))
        elif a * b < 0:
            roots.append(brentq(fun, grid[i], grid[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def condon_points(lower: PotentialModel, upper: PotentialModel, detuning: float,
                  n_scan: int = 4096) -> list[float]:
    """Radii where V_upper - V_lower equals ``detuning``, ascending.

    A sign-change scan on a geometric grid brackets every crossing wider than
    the grid spacing; each bracket is refined with Brent's method.
    """
    lo, hi = _shared_domain(lower, upper)
    return _scan_roots(lambda r: float(upper(r) - lower(r)) - detuning, lo, hi, n_scan)


# ---------------------------------------------------------------------------
# radial motion


@dataclass(frozen=True)
class _Radial:
    potential: PotentialModel
    energy: float
    centrifugal: float
    mass: float
    b: float
    speed: float

    def f(self, R: float) -> float:
        """Radial kinetic energy (mu/2) v_R^2 at R."""
        return self.energy - float(self.potential(R)) - self.centrifugal / R**2

    def df(self, R: float) -> float:
        return -float(self.potential.derivative(R)) + 2.0 * self.centrifugal / R**3

    def radial_speed(self, R: float) -> float:
        f = self.f(R)
        if f < 0:
            raise DomainError(f"R = {R} is classically forbidden")
        return float(np.sqrt(2.0 * f / self.mass))

    def turning_below(self, R_start: float, n_scan: int = 4096) -> float:
        """Largest zero of the radial kinetic energy at or below R_start."""
        lo = self.potential.domain[0]
        if self.f(R_start) < 0:
            raise DomainError(f"R = {R_start} is classically forbidden")
        grid = np.geomspace(lo, R_start, n_scan)[::-1]
        prev = grid[0]
        for r in grid[1:]:
            if self.f(r) <= 0:
                return brentq(self.f, r, prev, xtol=1e-300, rtol=4 * np.finfo(float).eps)
            prev = r
        raise DomainError("no classical turning point inside the potential domain")

    def _h(self, u: float, Rt: float) -> float:
        # f(R(u)) / u^2, smooth at the turning point
        if u < _U_SMALL:
            return Rt * self.df(Rt)
        return max(self.f(Rt * (1.0 + u * u)), 0.0) / (u * u)

    def integrals(self, Rt: float, ua: float, ub: float, nodes: list | None = None):
        """(swept angle, elapsed time) for motion between R(ua) and R(ub)."""
        if ub <= ua:
            return 0.0, 0.0
        if Rt * self.df(Rt) <= 0:
            raise DomainError("turning point is stationary (orbiting); quasi-static model breaks down")

        def rate(u):
            h = self._h(u, Rt)
            if nodes is not None:
                R = Rt * (1.0 + u * u)
                nodes.append((R, u * np.sqrt(2.0 * h / self.mass)))
            return np.sqrt(2.0 * h / self.mass)

        def dt(u):
            return 2.0 * Rt / rate(u)

        def dtheta(u):
            R = Rt * (1.0 + u * u)
            return 2.0 * Rt * self.b * self.speed / (R * R * rate(u))

        time = quad(dt, ua, ub, **_QUAD)[0] if np.isfinite(ub) else np.inf
        angle = quad(dtheta, ua, ub, **_QUAD)[0] if self.b > 0 else 0.0
        return angle, time


def _u_of(R: float, Rt: float) -> float:
    return float(np.sqrt(max(R / Rt - 1.0, 0.0)))


def _ground_motion(inputs: TrajectoryInputs) -> _Radial:
    return _Radial(inputs.ground, inputs.collision_energy, inputs.centrifugal,
                   inputs.reduced_mass, inputs.impact_parameter, inputs.speed)


def _motion(potential: PotentialModel, inputs: TrajectoryInputs, energy: float | None = None) -> _Radial:
    e = inputs.collision_energy if energy is None else energy
    return _Radial(potential, e, inputs.centrifugal, inputs.reduced_mass,
                   inputs.impact_parameter, inputs.speed)


def turning_point(potential: PotentialModel, inputs: TrajectoryInputs) -> float:
    """Outermost radius where E - V(R) - E b^2/R^2 vanishes."""
    motion = _motion(potential, inputs)
    R_max = potential.domain[1]
    if motion.f(R_max) <= 0:
        raise DomainError("motion is classically forbidden at the outer edge of the domain")
    return motion.turning_below(R_max)


def deflection_function(potential: PotentialModel, inputs: TrajectoryInputs) -> float:
    """Classical scattering angle pi - 2 * (angle swept from the turning point to infinity)."""
    motion = _motion(potential, inputs)
    Rt = turning_point(potential, inputs)
    half, _ = motion.integrals(Rt, 0.0, np.inf)
    return float(np.pi - 2.0 * half)


# ---------------------------------------------------------------------------
# trajectory segments


@dataclass(frozen=True)
class SegmentKinematics:
    """Per-segment kinematics between the two Condon passes.

    ``rotation`` is the angle swept by the interatomic axis.  ``deflection``
    equals it on same-branch segments and is measured against the reversed
    axis on the segment through the turning point (pi - rotation), i.e. the
    classical deflection of the relative motion: pi for a head-on recoil, 0 for
    a straight line.
    """

    turning_point: float
    energy: float
    rotation: dict[Segment, float]
    deflection: dict[Segment, float]
    duration: dict[Segment, float]
    nodes: dict[Segment, np.ndarray] = field(default_factory=dict, repr=False)

    def as_tuple(self) -> tuple:
        """(xi_pm, xi_minus, xi_plus, tau_pm, tau_minus, tau_plus); None where not computed."""
        order = (Segment.INCOMING_OUTGOING, Segment.INCOMING, Segment.OUTGOING)
        return tuple(self.deflection.get(s) for s in order) + tuple(self.duration.get(s) for s in order)


def _segments_for(case: TrajectoryCase, R1: float, R2: float) -> list[Segment]:
    case = TrajectoryCase(case)
    if case is TrajectoryCase.INCOMING_OUTGOING:
        return [Segment.INCOMING_OUTGOING]
    if case is TrajectoryCase.INCOMING:
        if R1 < R2:
            raise DomainError("both passes incoming requires R1 >= R2")
        return [Segment.INCOMING]
    if case is TrajectoryCase.OUTGOING:
        if R2 < R1:
            raise DomainError("both passes outgoing requires R2 >= R1")
        return [Segment.OUTGOING]
    segs = [Segment.INCOMING_OUTGOING]
    if R1 >= R2:
        segs.append(Segment.INCOMING)
    if R2 >= R1:
        segs.append(Segment.OUTGOING)
    return segs


def segment_energy(inputs: TrajectoryInputs, R1: float) -> float:
    """Total energy on the intermediate potential after absorption at R1."""
    return inputs.collision_energy + float(inputs.intermediate(R1) - inputs.ground(R1))


def segment_kinematics(inputs: TrajectoryInputs, R1: float, R2: float,
                       case: TrajectoryCase = TrajectoryCase.ALL) -> SegmentKinematics:
    ground = _ground_motion(inputs)
    if ground.f(R1) < 0:
        raise DomainError(f"R1 = {R1} is not reached on the ground potential")
    energy = segment_energy(inputs, R1)
    motion = _motion(inputs.intermediate, inputs, energy)
    Rt = motion.turning_below(R1)
    if R2 < Rt:
        raise DomainError(f"R2 = {R2} lies inside the turning point {Rt} of the intermediate motion")

    rotation, deflection, duration, nodes = {}, {}, {}, {}
    u1, u2 = _u_of(R1, Rt), _u_of(R2, Rt)
    for seg in _segments_for(case, R1, R2):
        rec: list = []
        if seg is Segment.INCOMING_OUTGOING:
            a1, t1 = motion.integrals(Rt, 0.0, u1, rec)
            a2, t2 = motion.integrals(Rt, 0.0, u2, rec)
            angle, time = a1 + a2, t1 + t2
            deflection[seg] = float(np.pi - angle)
        else:
            angle, time = motion.integrals(Rt, min(u1, u2), max(u1, u2), rec)
            deflection[seg] = float(angle)
        rotation[seg] = float(angle)
        duration[seg] = float(time)
        nodes[seg] = np.array(rec).reshape(-1, 2)
    return SegmentKinematics(Rt, energy, rotation, deflection, duration, nodes)


def classify_case(R1: float, R2: float, first_on_incoming: bool, second_on_incoming: bool,
                  turning: float) -> TrajectoryCase:
    """Trajectory case of two Condon passes given the branch of each pass."""
    if R1 < turning or R2 < turning:
        raise DomainError("Condon radii must lie outside the turning point")
    if first_on_incoming and not second_on_incoming:
        return TrajectoryCase.INCOMING_OUTGOING
    if first_on_incoming and second_on_incoming:
        if R1 < R2:
            raise DomainError("on the incoming branch the second pass must lie inside the first (R1 >= R2)")
        return TrajectoryCase.INCOMING
    if not first_on_incoming and not second_on_incoming:
        if R2 < R1:
            raise DomainError("on the outgoing branch the second pass must lie outside the first (R2 >= R1)")
        return TrajectoryCase.OUTGOING
    raise DomainError("the second photon cannot be absorbed on the incoming branch after an outgoing first pass")


def franck_condon_weight(lower: PotentialModel, upper: PotentialModel, R_c: float,
                         inputs: TrajectoryInputs, *, energy: float | None = None,
                         reference: tuple[float, float] = (1.0, 1.0)) -> float:
    """Quasi-static transition probability w ~ 1 / (v_R |d(V_upper - V_lower)/dR|) at R_c.

    ``energy`` is the total energy of the motion on ``lower`` (defaults to the
    collision energy).  ``reference`` = (radial speed, slope) at which w = 1.
    """
    v_r = _motion(lower, inputs, energy).radial_speed(R_c)
    slope = abs(float(upper.derivative(R_c) - lower.derivative(R_c)))
    if slope == 0.0:
        raise DomainError("difference potential is stationary at the Condon point; beyond the quasi-static model")
    if v_r == 0.0:
        raise DomainError("zero radial speed at the Condon point")
    return reference[0] * reference[1] / (v_r * slope)


def _pick(roots: list[float], index: int | None, what: str) -> float:
    if not roots:
        raise DomainError(f"no Condon point for {what}")
    if index is None:
        if len(roots) > 1:
            raise ConfigurationError(f"{what} has {len(roots)} Condon points {roots}; choose one by index")
        index = 0
    try:
        return roots[index]
    except IndexError:
        raise ConfigurationError(f"{what}: index {index} out of range for {len(roots)} Condon points") from None


def resolve_kinematics(inputs: TrajectoryInputs, case: TrajectoryCase = TrajectoryCase.ALL,
                       R1_index: int | None = None, R2_index: int | None = None, j0: float = 0,
                       reference: tuple[float, float] = (1.0, 1.0)) -> tuple[CollisionKinematics, dict]:
    """CollisionKinematics for a trajectory, plus a report of the intermediate quantities.

    The d-function angles of the result are the interatomic-axis rotations.
    """
    d1, d2 = inputs.photon_detunings
    R1s = condon_points(inputs.ground, inputs.intermediate, d1)
    R2s = condon_points(inputs.intermediate, inputs.final, d2)
    R1 = _pick(R1s, R1_index, "first photon")
    R2 = _pick(R2s, R2_index, "second photon")
    seg = segment_kinematics(inputs, R1, R2, case)
    w1 = franck_condon_weight(inputs.ground, inputs.intermediate, R1, inputs, reference=reference)
    w2 = franck_condon_weight(inputs.intermediate, inputs.final, R2, inputs, energy=seg.energy,
                              reference=reference)
    rot, dur = seg.rotation, seg.duration
    kin = CollisionKinematics(
        R1=R1, R2=R2, case=case,
        xi_pm=rot.get(Segment.INCOMING_OUTGOING, 0.0),
        xi_minus=rot.get(Segment.INCOMING, 0.0),
        xi_plus=rot.get(Segment.OUTGOING, 0.0),
        tau_pm=dur.get(Segment.INCOMING_OUTGOING, 0.0),
        tau_minus=dur.get(Segment.INCOMING, 0.0),
        tau_plus=dur.get(Segment.OUTGOING, 0.0),
        w1=w1, w2=w2, j0=j0,
    )
    report = {
        "ground_turning_point": turning_point(inputs.ground, inputs),
        "condon_points_first": R1s,
        "condon_points_second": R2s,
        "R1": R1,
        "R2": R2,
        "case": TrajectoryCase(case).value,
        "intermediate_energy": seg.energy,
        "intermediate_turning_point": seg.turning_point,
        "rotation": {s.value: v for s, v in rot.items()},
        "deflection": {s.value: v for s, v in seg.deflection.items()},
        "duration": {s.value: v for s, v in dur.items()},
        "w1": w1,
        "w2": w2,
    }
    return kin, report


# ---------------------------------------------------------------------------
# thermal averaging


@dataclass(frozen=True)
class ThermalAverage:
    value: float
    covered_weight: float  # fraction of the quadrature weight where the observable was defined
    n_excluded: int


def thermal_average(observable: Callable[[TrajectoryInputs], float], inputs: TrajectoryInputs,
                    kT: float, b_max: float, n_energy: int = 12, n_impact: int = 12) -> ThermalAverage:
    """Average an observable over a flux-weighted Maxwell distribution of E and uniform 2 pi b db.

    Energies use generalized Gauss-Laguerre nodes (weight E exp(-E/kT)), impact
    parameters Gauss-Legendre nodes on [0, b_max].  Points where the observable
    raises :class:`DomainError` (no Condon point reached, ...) are dropped and
    reported through ``covered_weight``.
    """
    if not (kT > 0 and b_max > 0):
        raise DomainError("kT and b_max must be positive")
    xe, we = roots_genlaguerre(n_energy, 1.0)
    xb, wb = np.polynomial.legendre.leggauss(n_impact)
    bs = 0.5 * b_max * (xb + 1.0)
    wbs = 0.5 * b_max * wb * 2.0 * np.pi * bs
    total = num = lost = 0.0
    excluded = 0
    for e, w_e in zip(xe * kT, we):
        for b, w_b in zip(bs, wbs):
            w = w_e * w_b
            total += w
            try:
                val = observable(replace(inputs, collision_energy=float(e), impact_parameter=float(b)))
            except DomainError:
                excluded += 1
                lost += w
                continue
            num += w * val
    return ThermalAverage(num / total, 1.0 - lost / total, excluded)
