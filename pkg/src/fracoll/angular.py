"""Angular-momentum algebra in the Varshalovich (Condon-Shortley) phase convention.

Angular momenta and projections may be given as ints, floats or
``fractions.Fraction``; internally everything is carried as twice the value so
half-integers stay exact.

Spherical components of a Cartesian vector are the covariant ones,

    e_{+1} = -(v_x + i v_y)/sqrt(2),   e_0 = v_z,   e_{-1} = (v_x - i v_y)/sqrt(2),

stored in the order (nu = -1, 0, +1).  Euler angles follow the z-y-z
convention, R(alpha, beta, gamma) = Rz(alpha) Ry(beta) Rz(gamma), and

    D^j_{m m'}(alpha, beta, gamma) = exp(-i m alpha) d^j_{m m'}(beta) exp(-i m' gamma).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, sqrt
from numbers import Real

import numpy as np

from .errors import DomainError

__all__ = [
    "HalfIntSpin",
    "SphericalVector",
    "IrreducibleTensor",
    "clebsch_gordan",
    "wigner_small_d",
    "wigner_d_matrix",
    "wigner_D_matrix",
    "to_spherical",
    "to_cartesian",
    "euler_matrix",
    "rotate_tensor",
    "MAX_ROTATION_RANK",
]

MAX_ROTATION_RANK = 8

_SQRT2 = sqrt(2.0)


def _twice(x) -> int:
    """Return 2*x as an int, refusing anything that is not a half-integer."""
    if isinstance(x, HalfIntSpin):
        return x.twice_value
    if isinstance(x, (int, np.integer)):
        return 2 * int(x)
    if isinstance(x, Fraction):
        t = 2 * x
        if t.denominator != 1:
            raise DomainError(f"{x} is not a multiple of 1/2")
        return int(t)
    if isinstance(x, Real):
        t = 2.0 * float(x)
        r = round(t)
        if abs(t - r) > 1e-9:
            raise DomainError(f"{x} is not a multiple of 1/2")
        return int(r)
    raise DomainError(f"cannot interpret {x!r} as an angular momentum")


@dataclass(frozen=True)
class HalfIntSpin:
    """An angular momentum j stored exactly as the integer 2j."""

    twice_value: int

    def __post_init__(self):
        if self.twice_value < 0:
            raise DomainError("angular momentum must be non-negative")

    @classmethod
    def of(cls, j) -> "HalfIntSpin":
        return cls(_twice(j))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    @property
    def dim(self) -> int:
        return self.twice_value + 1

    def projections(self) -> list[Fraction]:
        """Allowed m values in ascending order."""
        return [Fraction(t, 2) for t in range(-self.twice_value, self.twice_value + 1, 2)]

    def check_projection(self, m) -> int:
        tm = _twice(m)
        if abs(tm) > self.twice_value or (tm - self.twice_value) % 2:
            raise DomainError(f"m = {Fraction(tm, 2)} is not a valid projection for j = {self.value}")
        return tm


# ---------------------------------------------------------------------------
# Clebsch-Gordan coefficients


@lru_cache(maxsize=65536)
def _cg_twice(tj1: int, tm1: int, tj2: int, tm2: int, tJ: int, tM: int) -> float:
    if tm1 + tm2 != tM:
        return 0.0
    if tJ < abs(tj1 - tj2) or tJ > tj1 + tj2 or (tj1 + tj2 + tJ) % 2:
        return 0.0
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tM) > tJ:
        return 0.0

    # every quantity below is an integer once expressed through twice-values
    a = (tj1 + tj2 - tJ) // 2
    b = (tj1 - tj2 + tJ) // 2
    c = (-tj1 + tj2 + tJ) // 2
    d = (tj1 + tj2 + tJ) // 2 + 1
    j1pm, j1mm = (tj1 + tm1) // 2, (tj1 - tm1) // 2
    j2pm, j2mm = (tj2 + tm2) // 2, (tj2 - tm2) // 2
    Jpm, Jmm = (tJ + tM) // 2, (tJ - tM) // 2

    prefactor = Fraction(
        (tJ + 1) * factorial(a) * factorial(b) * factorial(c)
        * factorial(j1pm) * factorial(j1mm) * factorial(j2pm) * factorial(j2mm)
        * factorial(Jpm) * factorial(Jmm),
        factorial(d),
    )

    k_min = max(0, (tj2 - tJ - tm1) // 2, (tj1 - tJ + tm2) // 2)
    k_max = min(a, j1mm, j2pm)
    total = Fraction(0)
    for k in range(k_min, k_max + 1):
        den = (
            factorial(k) * factorial(a - k) * factorial(j1mm - k) * factorial(j2pm - k)
            * factorial((tJ - tj2 + tm1) // 2 + k) * factorial((tJ - tj1 - tm2) // 2 + k)
        )
        total += Fraction((-1) ** k, den)
    if total == 0:
        return 0.0
    sign = 1.0 if total > 0 else -1.0
    return sign * sqrt(total * total * prefactor)


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """Clebsch-Gordan coefficient C^{J M}_{j1 m1 j2 m2}.

    Evaluated with Racah's closed sum in exact rational arithmetic; only the
    final square root is taken in floating point.  Couplings that violate the
    triangle rule, m1 + m2 = M or |m| <= j give 0.  A projection whose parity
    does not match its angular momentum raises :class:`DomainError`.
    """
    s1, s2, sJ = HalfIntSpin.of(j1), HalfIntSpin.of(j2), HalfIntSpin.of(J)
    tm1, tm2, tM = _twice(m1), _twice(m2), _twice(M)
    for s, tm in ((s1, tm1), (s2, tm2), (sJ, tM)):
        if abs(tm) > s.twice_value:
            return 0.0
        s.check_projection(Fraction(tm, 2))
    return _cg_twice(s1.twice_value, tm1, s2.twice_value, tm2, sJ.twice_value, tM)


# ---------------------------------------------------------------------------
# Wigner rotation functions


@lru_cache(maxsize=4096)
def _d_coefficients(tj: int, tm1: int, tm2: int) -> tuple[tuple[float, int, int], ...]:
    """Terms (coefficient, power of cos(b/2), power of sin(b/2)) of d^j_{m1 m2}."""
    jpm1, jmm1 = (tj + tm1) // 2, (tj - tm1) // 2
    jpm2, jmm2 = (tj + tm2) // 2, (tj - tm2) // 2
    root = sqrt(factorial(jpm1) * factorial(jmm1) * factorial(jpm2) * factorial(jmm2))
    dm = (tm1 - tm2) // 2
    terms = []
    for s in range(max(0, -dm), min(jpm2, jmm1) + 1):
        den = factorial(jpm2 - s) * factorial(s) * factorial(dm + s) * factorial(jmm1 - s)
        sign = -1.0 if (dm + s) % 2 else 1.0
        terms.append((sign * root / den, tj - dm - 2 * s, dm + 2 * s))
    return tuple(terms)


def wigner_small_d(j, m1, m2, beta: float) -> float:
    """Wigner small-d function d^j_{m1 m2}(beta) from the explicit factorial sum."""
    s = HalfIntSpin.of(j)
    tm1, tm2 = s.check_projection(m1), s.check_projection(m2)
    c, sn = np.cos(0.5 * beta), np.sin(0.5 * beta)
    return float(sum(k * c**p * sn**q for k, p, q in _d_coefficients(s.twice_value, tm1, tm2)))


def wigner_d_matrix(j, beta: float) -> np.ndarray:
    """Matrix d^j(beta) with rows and columns ordered m = -j, ..., +j."""
    s = HalfIntSpin.of(j)
    ms = s.projections()
    return np.array([[wigner_small_d(s, a, b, beta) for b in ms] for a in ms])


def wigner_D_matrix(j, alpha: float, beta: float, gamma: float) -> np.ndarray:
    s = HalfIntSpin.of(j)
    ms = np.array([float(m) for m in s.projections()])
    d = wigner_d_matrix(s, beta)
    return np.exp(-1j * ms * alpha)[:, None] * d * np.exp(-1j * ms * gamma)[None, :]


# ---------------------------------------------------------------------------
# Spherical vectors and tensors


@dataclass(frozen=True)
class SphericalVector:
    """Spherical components of a complex 3-vector, ordered nu = -1, 0, +1.

    The components are the expansion coefficients v = sum_nu v^nu e_nu on the
    basis e_{+1} = -(x + i y)/sqrt(2), e_0 = z, e_{-1} = (x - i y)/sqrt(2),
    i.e. v^nu = conj(e_nu) . v.
    """

    components: np.ndarray

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=complex)
        if comps.shape != (3,):
            raise DomainError("a spherical vector has exactly three components")
        object.__setattr__(self, "components", comps)

    def __getitem__(self, nu: int) -> complex:
        if nu not in (-1, 0, 1):
            raise IndexError(nu)
        return complex(self.components[nu + 1])

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def conjugate_vector(self) -> "SphericalVector":
        """Spherical components of the complex-conjugated Cartesian vector."""
        c = self.components
        return SphericalVector(np.array([-np.conj(c[2]), np.conj(c[1]), -np.conj(c[0])]))

    def __mul__(self, alpha) -> "SphericalVector":
        return SphericalVector(alpha * self.components)

    __rmul__ = __mul__


def to_spherical(v) -> SphericalVector:
    v = np.asarray(v, dtype=complex)
    if v.shape != (3,):
        raise DomainError("expected a Cartesian 3-vector")
    return SphericalVector(
        np.array([(v[0] + 1j * v[1]) / _SQRT2, v[2], -(v[0] - 1j * v[1]) / _SQRT2])
    )


def to_cartesian(s: SphericalVector) -> np.ndarray:
    em, e0, ep = s.components
    return np.array([(em - ep) / _SQRT2, -1j * (em + ep) / _SQRT2, e0])


@dataclass(frozen=True)
class IrreducibleTensor:
    """Components t_Xi of a rank-X tensor, ordered Xi = -X, ..., +X."""

    rank: int
    components: np.ndarray

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=complex)
        if self.rank < 0 or comps.shape != (2 * self.rank + 1,):
            raise DomainError(f"rank-{self.rank} tensor needs {2 * self.rank + 1} components")
        object.__setattr__(self, "components", comps)

    def __getitem__(self, xi: int) -> complex:
        if abs(xi) > self.rank:
            raise IndexError(xi)
        return complex(self.components[xi + self.rank])

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    @classmethod
    def from_vector(cls, v) -> "IrreducibleTensor":
        s = v if isinstance(v, SphericalVector) else to_spherical(v)
        return cls(1, s.components)


def euler_matrix(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Cartesian rotation Rz(alpha) Ry(beta) Rz(gamma)."""

    def rz(a):
        c, s = np.cos(a), np.sin(a)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])

    c, s = np.cos(beta), np.sin(beta)
    ry = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    return rz(alpha) @ ry @ rz(gamma)


def rotate_tensor(t: IrreducibleTensor, alpha: float, beta: float, gamma: float) -> IrreducibleTensor:
    """Actively rotate ``t`` by the Euler angles (alpha, beta, gamma).

    Components transform as t'_m = sum_m' D^X_{m m'} t_m', so a rank-1 tensor
    built from ``v`` maps onto the tensor built from
    ``euler_matrix(alpha, beta, gamma) @ v``.
    """
    if t.rank > MAX_ROTATION_RANK:
        raise DomainError(f"rotation implemented up to rank {MAX_ROTATION_RANK}")
    D = wigner_D_matrix(t.rank, alpha, beta, gamma)
    return IrreducibleTensor(t.rank, D @ t.components)
