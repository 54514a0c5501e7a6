"""Independent reference implementations used only by the tests.

Nothing here imports the package's angular algebra: Clebsch-Gordan
coefficients come from diagonalizing J^2 in the product basis, d-matrices
from exponentiating J_y, and orientation-averaged cross sections from a
brute-force quadrature over Cartesian rotation matrices.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm


# ---------------------------------------------------------------------------
# angular momentum matrices, basis ordered m = j, j-1, ..., -j


def _ms(j: float) -> np.ndarray:
    return np.arange(j, -j - 1, -1.0)


def jz(j):
    return np.diag(_ms(j))


def jplus(j):
    ms = _ms(j)
    n = len(ms)
    out = np.zeros((n, n))
    for k in range(1, n):
        m = ms[k]
        out[k - 1, k] = np.sqrt(j * (j + 1) - m * (m + 1))
    return out


def jy(j):
    jp = jplus(j)
    return (jp - jp.T) / 2j


def d_matrix(j: float, beta: float) -> np.ndarray:
    """d^j(beta) ordered m = -j..j, from exp(-i beta J_y)."""
    d = expm(-1j * beta * jy(j)).real
    return d[::-1, ::-1]


def cg_table(j1: float, j2: float) -> dict:
    """{(m1, m2, J, M): C} by building each |J M> from J^2 and lowering with J_-."""
    m1s, m2s = _ms(j1), _ms(j2)
    n1, n2 = len(m1s), len(m2s)
    i1, i2 = np.eye(n1), np.eye(n2)
    Jz = np.kron(jz(j1), i2) + np.kron(i1, jz(j2))
    Jp = np.kron(jplus(j1), i2) + np.kron(i1, jplus(j2))
    Jm = Jp.T
    J2 = Jm @ Jp + Jz @ Jz + Jz
    prod = [(a, b) for a in m1s for b in m2s]
    table = {}
    J = j1 + j2
    while J >= abs(j1 - j2) - 1e-9:
        idx = [k for k, (a, b) in enumerate(prod) if abs(a + b - J) < 1e-9]
        sub = J2[np.ix_(idx, idx)]
        w, v = np.linalg.eigh(sub)
        k = int(np.argmin(abs(w - J * (J + 1))))
        top = np.zeros(len(prod))
        top[idx] = v[:, k]
        # Condon-Shortley: <j1 j1; j2 J-j1 | J J> > 0
        lead = [t for t in idx if abs(prod[t][0] - j1) < 1e-9]
        if lead and top[lead[0]] < 0:
            top = -top
        state, M = top, J
        while M >= -J - 1e-9:
            for t, (a, b) in enumerate(prod):
                if abs(state[t]) > 1e-14:
                    table[(a, b, J, M)] = state[t]
            state = Jm @ state
            nrm = np.linalg.norm(state)
            if nrm < 1e-12:
                break
            state = state / nrm
            M -= 1
        J -= 1
    return table


def cg(j1, m1, j2, m2, J, M) -> float:
    return cg_table(j1, j2).get((m1, m2, J, M), 0.0)


# ---------------------------------------------------------------------------
# brute-force orientation average of the two-photon absorption signal

_EHAT = {
    1: -np.array([1, 1j, 0]) / np.sqrt(2),
    0: np.array([0, 0, 1.0 + 0j]),
    -1: np.array([1, -1j, 0]) / np.sqrt(2),
}


def _ry(b):
    c, s = np.cos(b), np.sin(b)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def _rz(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def signed_paths(lambdas):
    l0, l1, l2 = lambdas
    out = []
    for s0 in sorted({l0, -l0}):
        for s1 in sorted({l1, -l1}):
            for s2 in sorted({l2, -l2}):
                q1, q2 = s1 - s0, s2 - s1
                if abs(q1) <= 1 and abs(q2) <= 1:
                    out.append((s0, q1, q2, s2))
    return out


def orientation_average(lambdas, e1, e2, e1p, e2p, xi: float, n: int = 8) -> complex:
    """<sum_final A(e1, e2) conj(A(e1', e2'))> over all molecular orientations.

    The first photon is absorbed with the interatomic frame B, the second
    after that frame has turned by ``xi`` about its own y axis.  Amplitudes
    through different signed intermediate states add when they connect the
    same initial and final states.
    """
    paths = signed_paths(lambdas)
    n_init = len({p[0] for p in paths})
    xs, ws = np.polynomial.legendre.leggauss(n)
    angles = np.arange(2 * n) * np.pi / n
    tot = 0j
    wsum = 0.0
    ry_xi = _ry(xi)
    for cb, wb in zip(xs, ws):
        b = np.arccos(cb)
        for a in angles:
            for g in angles:
                B1 = _rz(a) @ _ry(b) @ _rz(g)
                B2 = B1 @ ry_xi
                finals = {}
                for s0, q1, q2, s2 in paths:
                    amp = (np.conj(_EHAT[q1]) @ (B1.T @ e1)) * (np.conj(_EHAT[q2]) @ (B2.T @ e2))
                    ampp = (np.conj(_EHAT[q1]) @ (B1.T @ e1p)) * (np.conj(_EHAT[q2]) @ (B2.T @ e2p))
                    acc = finals.setdefault((s0, s2), [0j, 0j])
                    acc[0] += amp
                    acc[1] += ampp
                tot += wb * sum(x * np.conj(y) for x, y in finals.values())
                wsum += wb
    return tot / wsum / n_init


def brute_sigma(lambdas, table: dict, xi: float = 0.0, basis=None) -> float:
    """Total cross section from the orientation average, summed over mode quadruples."""
    if basis is None:
        basis = (np.array([1.0, 0, 0]), np.array([0, 1.0, 0]))
    vec = {"x": np.asarray(basis[0], complex), "y": np.asarray(basis[1], complex)}
    tot = 0j
    for (a, b, c, d), value in table.items():
        tot += value * orientation_average(lambdas, vec[a], vec[b], vec[c], vec[d], xi)
    return tot.real


def opo_excess_table(phi: float, G: float) -> dict:
    cross = 0.5 * G * np.exp(-1j * phi)
    return {("x", "y", "x", "y"): 0.5 + 0.5 * G, ("y", "x", "y", "x"): 0.5 + 0.5 * G,
            ("x", "y", "y", "x"): cross, ("y", "x", "x", "y"): np.conj(cross)}


# ---------------------------------------------------------------------------
# closed-form kinematics


def free_chord_duration(R1, R2, b, v):
    """Time between radii R1 > R2 >= b on one branch of a straight line."""
    return (np.sqrt(R1**2 - b**2) - np.sqrt(R2**2 - b**2)) / v


def free_chord_rotation(R1, R2, b):
    """Axis rotation between radii on the same branch of a straight line."""
    return abs(np.arccos(b / R2) - np.arccos(b / R1))


def free_through_turning(R1, R2, b, v):
    """(axis rotation, duration) from R1 inwards through the closest approach out to R2."""
    rot = np.arccos(b / R1) + np.arccos(b / R2)
    dur = (np.sqrt(R1**2 - b**2) + np.sqrt(R2**2 - b**2)) / v
    return rot, dur


def inverse_square_turning(E, b, C):
    """Turning point for V = C/R^2."""
    return np.sqrt(b * b + C / E)


def inverse_square_rotation(R, Rt, b):
    """Axis rotation from the turning point out to R for V = C/R^2."""
    return (b / Rt) * np.arccos(Rt / R)


def morse_flat_crossings(depth, alpha, r_eq, detuning):
    """Radii where a Morse curve sits ``detuning`` above a flat curve (-depth < detuning < 0)."""
    s = np.sqrt(1.0 + detuning / depth)
    return sorted(r_eq - np.log(x) / alpha for x in (1.0 - s, 1.0 + s))
