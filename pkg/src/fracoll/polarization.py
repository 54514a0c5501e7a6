"""Irreducible polarization tensors of photon pairs and the restricted mode quadruples."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import IrreducibleTensor, SphericalVector, clebsch_gordan, to_spherical
from .errors import DomainError

__all__ = ["phi_tensor", "ModeQuadruple", "enumerate_mode_quadruples", "lab_scalar"]


def _as_spherical(e) -> SphericalVector:
    return e if isinstance(e, SphericalVector) else to_spherical(e)


def phi_tensor(e, e_prime, X: int) -> IrreducibleTensor:
    """Rank-X polarization tensor of an absorbed photon ``e`` and its conjugate partner ``e_prime``.

        Phi_{X Xi} = sum_{nu, nu'} (-1)^(1 + nu') C^{X Xi}_{1 nu' 1 nu} conj(e'_{-nu'}) e_nu

    ``e_prime`` is the polarization vector attached to the negative-frequency
    field, so its components enter conjugated; this keeps Phi linear in ``e``,
    antilinear in ``e_prime`` and covariant under rotations.  The overall minus
    sign is kept although it cancels in bilinear contractions.
    """
    if X not in (0, 1, 2):
        raise DomainError("two rank-1 photons couple to rank 0, 1 or 2 only")
    e, ep = _as_spherical(e), _as_spherical(e_prime)
    comps = np.zeros(2 * X + 1, dtype=complex)
    for nu in (-1, 0, 1):
        for nup in (-1, 0, 1):
            xi = nu + nup
            if abs(xi) > X:
                continue
            sign = -1.0 if (1 + nup) % 2 else 1.0
            comps[xi + X] += sign * clebsch_gordan(1, nup, 1, nu, X, xi) * np.conj(ep[-nup]) * e[nu]
    return IrreducibleTensor(X, comps)


def lab_scalar(t1: IrreducibleTensor, t2: IrreducibleTensor) -> complex:
    """sum_Xi (-1)^(X + Xi) t1_Xi t2_{-Xi}, the rank-0 contraction of two rank-X tensors."""
    X = t1.rank
    if t2.rank != X:
        raise DomainError("tensors of different rank do not contract to a scalar")
    return complex(sum((-1) ** (X + xi) * t1[xi] * t2[-xi] for xi in range(-X, X + 1)))


@dataclass(frozen=True)
class ModeQuadruple:
    """Labels (p1, p2, p1', p2') and the matching Cartesian polarization vectors."""

    labels: tuple[str, str, str, str]
    vectors: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


_QUADRUPLE_ORDER = (("x", "y", "x", "y"), ("x", "y", "y", "x"), ("y", "x", "x", "y"), ("y", "x", "y", "x"))


def enumerate_mode_quadruples(basis=None, tol: float = 1e-12) -> list[ModeQuadruple]:
    """The four quadruples with p1 != p2 and p1' != p2' for a two-mode source.

    ``basis`` is the pair of Cartesian polarization vectors of modes x and y;
    it defaults to the lab x and y axes.
    """
    if basis is None:
        basis = (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]))
    ex, ey = (np.asarray(v, dtype=complex) for v in basis)
    gram = np.array([[np.vdot(a, b) for b in (ex, ey)] for a in (ex, ey)])
    if not np.allclose(gram, np.eye(2), atol=tol, rtol=0.0):
        raise DomainError("mode polarization basis must be orthonormal")
    vec = {"x": ex, "y": ey}
    return [ModeQuadruple(lab, tuple(vec[p] for p in lab)) for lab in _QUADRUPLE_ORDER]
