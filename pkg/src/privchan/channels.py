"""
Single-qubit unital channels.

Two pictures are used throughout. A ``RandomUnitaryChannel`` is the
encryption object itself: a list of (p_j, U_j) applied as
sum_j p_j U_j rho U_j^dagger. A ``PauliDiagonal`` (lx, ly, lz) is the
Bloch-sphere normal form; every qubit unital map is R_L diag(l) R_R for
two rotations, which ``UnitalChannel`` records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    InvalidDistributionError,
    InvalidRotationError,
    NotCompletelyPositiveError,
    NotUnitaryError,
)
from .qmath import (
    MAXIMALLY_MIXED,
    PAULI_MATRICES,
    PAULIS,
    TOL_PROB,
    TOL_UNIT,
    DensityOperator,
    QubitUnitary,
    bloch_to_density,
    density_to_bloch,
    shannon_entropy,
    von_neumann_entropy,
    BlochVector,
)

CP_TOL = 1e-9


@dataclass(frozen=True)
class PauliDiagonal:
    lx: float
    ly: float
    lz: float

    def __post_init__(self):
        for name in ("lx", "ly", "lz"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"non-finite {name}")
            object.__setattr__(self, name, v)

    @property
    def array(self) -> np.ndarray:
        return np.array([self.lx, self.ly, self.lz])

    def tolist(self) -> list[float]:
        return [self.lx, self.ly, self.lz]


@dataclass(frozen=True)
class RandomUnitaryChannel:
    terms: tuple[tuple[float, QubitUnitary], ...]

    def __post_init__(self):
        terms = tuple((float(p), u) for p, u in self.terms)
        if not terms:
            raise InvalidDistributionError("channel needs at least one term")
        for _, u in terms:
            if not isinstance(u, QubitUnitary):
                raise NotUnitaryError(f"term operator must be a QubitUnitary, got {type(u).__name__}")
        ps = [p for p, _ in terms]
        if min(ps) < -TOL_PROB or abs(sum(ps) - 1.0) > TOL_PROB:
            raise InvalidDistributionError(f"invalid term probabilities {ps}")
        object.__setattr__(self, "terms", terms)

    @property
    def probabilities(self) -> list[float]:
        return [p for p, _ in self.terms]

    @property
    def unitaries(self) -> list[QubitUnitary]:
        return [u for _, u in self.terms]

    def __len__(self):
        return len(self.terms)

    @property
    def key_entropy(self) -> float:
        return shannon_entropy(self.probabilities)


IDENTITY_CHANNEL = RandomUnitaryChannel(((1.0, PAULIS[0]),))


@dataclass(frozen=True)
class EnvironmentState:
    omega: np.ndarray

    def __post_init__(self):
        w = np.array(self.omega, dtype=complex)
        w.setflags(write=False)
        object.__setattr__(self, "omega", w)

    @property
    def entropy(self) -> float:
        return von_neumann_entropy(self.omega)


def _is_rotation(r: np.ndarray, tol: float = TOL_UNIT) -> bool:
    return (
        r.shape == (3, 3)
        and np.allclose(r @ r.T, np.eye(3), atol=tol, rtol=0)
        and abs(np.linalg.det(r) - 1.0) <= tol
    )


@dataclass(frozen=True, eq=False)
class UnitalChannel:
    """Bloch action r -> rot_left @ diag(l) @ rot_right @ r."""

    rot_left: np.ndarray
    diag: PauliDiagonal
    rot_right: np.ndarray

    def __post_init__(self):
        for name in ("rot_left", "rot_right"):
            r = np.array(getattr(self, name), dtype=float)
            if not _is_rotation(r, 1e-9):
                raise InvalidRotationError(f"{name} is not a proper rotation")
            r.setflags(write=False)
            object.__setattr__(self, name, r)

    @classmethod
    def pauli(cls, lam: PauliDiagonal) -> "UnitalChannel":
        return cls(np.eye(3), lam, np.eye(3))

    @property
    def bloch_matrix(self) -> np.ndarray:
        return self.rot_left @ np.diag(self.diag.array) @ self.rot_right

    def decomposition(self) -> RandomUnitaryChannel:
        """Orthogonal random-unitary form: terms (p_j, W_L sigma_j W_R)."""
        pd = pauli_decomposition(self.diag)
        wl = rotation_to_unitary(self.rot_left)
        wr = rotation_to_unitary(self.rot_right)
        return RandomUnitaryChannel(tuple((p, wl @ u @ wr) for p, u in pd.terms))


def rotation_to_unitary(r: np.ndarray) -> QubitUnitary:
    """SU(2) element W with W rho(v) W^dagger = rho(R v).

    The unit quaternion (w, x, y, z) of R is read off from whichever of
    trace and diagonal entries is largest, which stays accurate near
    half turns; then W = w I - i (x sx + y sy + z sz).
    """
    r = np.asarray(r, dtype=float)
    tr = float(np.trace(r))
    d = np.diag(r)
    k = int(np.argmax(d))
    if tr >= d[k]:
        s = 2.0 * math.sqrt(max(0.0, 1.0 + tr))
        q = [s / 4, (r[2, 1] - r[1, 2]) / s, (r[0, 2] - r[2, 0]) / s, (r[1, 0] - r[0, 1]) / s]
    else:
        i, j = k, (k + 1) % 3
        m = (k + 2) % 3
        s = 2.0 * math.sqrt(max(0.0, 1.0 + r[i, i] - r[j, j] - r[m, m]))
        q = [0.0] * 4
        q[0] = (r[m, j] - r[j, m]) / s
        q[1 + i] = s / 4
        q[1 + j] = (r[j, i] + r[i, j]) / s
        q[1 + m] = (r[m, i] + r[i, m]) / s
    q = np.array(q) / np.linalg.norm(q)
    w = q[0] * np.eye(2, dtype=complex) - 1j * sum(c * sig for c, sig in zip(q[1:], PAULI_MATRICES))
    # polish against round-off so the unitarity check is not tripped
    u, _, vh = np.linalg.svd(w)
    return QubitUnitary(u @ vh)


def rotation_taking_x_to(n: Sequence[float]) -> np.ndarray:
    """Smallest proper rotation R with R @ e_x = n (n a unit vector)."""
    n = np.asarray(n, dtype=float)
    n = n / np.linalg.norm(n)
    ex = np.array([1.0, 0.0, 0.0])
    c = float(ex @ n)
    if c < -1.0 + 1e-12:
        return np.diag([-1.0, -1.0, 1.0])
    v = np.cross(ex, n)
    vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + vx + vx @ vx / (1.0 + c)


def probs_from_lambdas(lam: PauliDiagonal) -> tuple[float, float, float, float]:
    """(p0, px, py, pz) of the Pauli channel with Bloch action diag(lam)."""
    lx, ly, lz = lam.lx, lam.ly, lam.lz
    px = 0.25 * (1 + lx - ly - lz)
    py = 0.25 * (1 - lx + ly - lz)
    pz = 0.25 * (1 - lx - ly + lz)
    p0 = 1.0 - px - py - pz
    return (p0, px, py, pz)


def lambdas_from_probs(p0: float, px: float, py: float, pz: float) -> PauliDiagonal:
    ps = [p0, px, py, pz]
    if min(ps) < -TOL_PROB or abs(sum(ps) - 1.0) > TOL_PROB:
        raise InvalidDistributionError(f"invalid distribution {ps}")
    return PauliDiagonal(p0 + px - py - pz, p0 - px + py - pz, p0 - px - py + pz)


def is_completely_positive(lam: PauliDiagonal, tol: float = CP_TOL) -> bool:
    lx, ly, lz = lam.lx, lam.ly, lam.lz
    return (
        1 - lz + tol >= abs(lx - ly)
        and 1 + lz + tol >= abs(lx + ly)
    )


def pauli_decomposition(lam: PauliDiagonal, tol: float = CP_TOL) -> RandomUnitaryChannel:
    """Terms (p0, I), (px, sx), (py, sy), (pz, sz); zero weights are kept."""
    if not is_completely_positive(lam, tol):
        raise NotCompletelyPositiveError(f"lambda {lam.tolist()} is not completely positive")
    ps = [max(0.0, p) for p in probs_from_lambdas(lam)]
    s = sum(ps)
    return RandomUnitaryChannel(tuple((p / s, u) for p, u in zip(ps, PAULIS)))


def apply(ch: RandomUnitaryChannel, rho: DensityOperator) -> DensityOperator:
    out = np.zeros((2, 2), dtype=complex)
    for p, u in ch.terms:
        out += p * (u.m @ rho.m @ u.m.conj().T)
    out = 0.5 * (out + out.conj().T)
    return DensityOperator(out)


def apply_bloch(ch: RandomUnitaryChannel, r: BlochVector) -> BlochVector:
    return density_to_bloch(apply(ch, bloch_to_density(r)))


def bloch_action(ch: RandomUnitaryChannel) -> np.ndarray:
    """3x3 matrix T with T_jk = Tr(s_j E[s_k]) / 2."""
    t = np.empty((3, 3))
    for k, sk in enumerate(PAULI_MATRICES):
        img = sum(p * (u.m @ sk @ u.m.conj().T) for p, u in ch.terms)
        for j, sj in enumerate(PAULI_MATRICES):
            t[j, k] = 0.5 * np.trace(sj @ img).real
    return t


def environment_state(ch: RandomUnitaryChannel, rho: DensityOperator) -> EnvironmentState:
    """omega_jk = sqrt(p_j p_k) Tr[U_j rho U_k^dagger]."""
    ps = np.array(ch.probabilities)
    us = [u.m for u in ch.unitaries]
    n = len(us)
    w = np.empty((n, n), dtype=complex)
    for j in range(n):
        a = us[j] @ rho.m
        for k in range(n):
            w[j, k] = math.sqrt(ps[j] * ps[k]) * np.trace(a @ us[k].conj().T)
    return EnvironmentState(0.5 * (w + w.conj().T))


def entropy_exchange(ch: RandomUnitaryChannel, rho: DensityOperator) -> float:
    return environment_state(ch, rho).entropy


def check_orthogonal_terms(ch: RandomUnitaryChannel, tol: float = 1e-9) -> bool:
    us = ch.unitaries
    for j in range(len(us)):
        for k in range(j + 1, len(us)):
            if abs(np.trace(us[j].m @ us[k].m.conj().T)) > tol:
                return False
    return True


def max_entropy_exchange(ch: RandomUnitaryChannel) -> float:
    """Entropy exchange at the total mixture, where it is maximal for random-unitary maps."""
    return entropy_exchange(ch, MAXIMALLY_MIXED)
