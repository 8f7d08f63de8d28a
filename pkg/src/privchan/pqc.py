"""
Perfect private quantum channels for arbitrary qubit plaintext sets.

A channel encrypts not just the plaintexts but every real affine
combination of them, so a plaintext set is summarised by its affine hull:
a point (dim 0), a line, a plane, or the whole ball. The hull's distance
delta from the origin bounds how pure the ciphertext can be.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .channels import (
    IDENTITY_CHANNEL,
    PauliDiagonal,
    RandomUnitaryChannel,
    UnitalChannel,
    apply,
    entropy_exchange,
    rotation_taking_x_to,
)
from .errors import InfeasibleThetaError, InvalidStateError
from .qmath import (
    MAXIMALLY_MIXED,
    BlochVector,
    DensityOperator,
    bloch_to_density,
    density_to_bloch,
    h_function,
    trace_distance,
    von_neumann_entropy,
)

TOL_RANK = 1e-7
THETA_TOL = 1e-9


@dataclass(frozen=True)
class PlaintextSet:
    states: tuple[BlochVector, ...]

    def __post_init__(self):
        states = tuple(
            s if isinstance(s, BlochVector) else BlochVector.from_array(s) for s in self.states
        )
        if not states:
            raise InvalidStateError("plaintext set must contain at least one state")
        object.__setattr__(self, "states", states)

    @classmethod
    def from_arrays(cls, rs: Iterable[Sequence[float]]) -> "PlaintextSet":
        return cls(tuple(BlochVector.from_array(r) for r in rs))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([s.tolist() for s in self.states])


@dataclass(frozen=True, eq=False)
class TpHullDescriptor:
    """Affine hull of a plaintext set in Bloch coordinates.

    ``anchor`` is the hull point closest to the origin and ``delta`` its
    length; ``basis`` holds orthonormal directions spanning the hull.
    """

    affine_dim: int
    basis: tuple[np.ndarray, ...]
    anchor: BlochVector
    delta: float

    def __post_init__(self):
        if len(self.basis) != self.affine_dim:
            raise ValueError("affine_dim must equal the number of basis vectors")


@dataclass(frozen=True, eq=False)
class PqcSolution:
    channel: UnitalChannel
    decomposition: RandomUnitaryChannel
    ciphertext: BlochVector
    key_entropy: float
    theta: float


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    ciphertext: BlochVector
    max_deviation: float


@dataclass(frozen=True)
class KeyEntropyBounds:
    s_ex_bound: float
    cipher_bound: float


def classify(P: PlaintextSet, tol: float = TOL_RANK) -> TpHullDescriptor:
    r = P.matrix
    r1 = r[0]
    diffs = r[1:] - r1
    if diffs.shape[0] == 0:
        dim = 0
        basis: list[np.ndarray] = []
    else:
        _, sv, vh = np.linalg.svd(diffs)
        dim = int((sv > tol).sum())
        basis = [vh[k].copy() for k in range(dim)]
    if dim == 1:
        # orient the line by the first significant difference so the
        # direction is a covariant function of the input
        for d in diffs:
            s = float(d @ basis[0])
            if abs(s) > tol:
                if s < 0:
                    basis[0] = -basis[0]
                break
    if dim == 3:
        anchor = np.zeros(3)
    else:
        anchor = r1 - sum((r1 @ b) * b for b in basis) if basis else r1.copy()
    delta = float(np.linalg.norm(anchor))
    if dim == 3 or delta < 1e-15:
        anchor = np.zeros(3)
        delta = 0.0
    return TpHullDescriptor(dim, tuple(basis), BlochVector.from_array(anchor), delta)


def verify_pqc(ch: RandomUnitaryChannel, P: PlaintextSet, tol: float = 1e-9) -> VerifyResult:
    images = [apply(ch, bloch_to_density(s)) for s in P.states]
    dev = max(trace_distance(img, images[0]) for img in images)
    return VerifyResult(dev <= tol, density_to_bloch(images[0]), dev)


def key_entropy_bounds(ch: RandomUnitaryChannel, ciphertext: DensityOperator) -> KeyEntropyBounds:
    """Both lower bounds on the key entropy of ``ch``."""
    return KeyEntropyBounds(
        entropy_exchange(ch, MAXIMALLY_MIXED),
        von_neumann_entropy(ciphertext),
    )


def general_pqc_entropy(a: float, b: float) -> float:
    """Key entropy of the ancilla-free qubit PQC with lambda_z = 0.

    a = lx - ly, b = lx + ly; complete positivity means |a|, |b| <= 1.
    """
    if abs(a) > 1 + 1e-12 or abs(b) > 1 + 1e-12:
        raise ValueError(f"complete positivity needs |a|, |b| <= 1, got a={a}, b={b}")
    return 2.0 - 0.25 * (h_function(a) + h_function(b))


def _axis_channel(axis: np.ndarray, lam: float) -> UnitalChannel:
    """Pauli channel diag(lam, 0, 0) rotated so its preserved axis is ``axis``."""
    r = rotation_taking_x_to(axis)
    return UnitalChannel(r, PauliDiagonal(lam, 0.0, 0.0), r.T)


def _unit_orthogonal_to(vs: Sequence[np.ndarray]) -> np.ndarray:
    """A unit vector orthogonal to every vector in ``vs`` (at most two of them)."""
    _, _, vh = np.linalg.svd(np.array(vs, dtype=float).reshape(-1, 3))
    return vh[-1]


def _solution(channel: UnitalChannel, anchor_image: np.ndarray) -> PqcSolution:
    dec = channel.decomposition()
    return PqcSolution(
        channel=channel,
        decomposition=dec,
        ciphertext=BlochVector.from_array(anchor_image),
        key_entropy=dec.key_entropy,
        theta=float(np.linalg.norm(anchor_image)),
    )


def optimal_pqc(hull: TpHullDescriptor, theta: float) -> PqcSolution:
    """Minimum-key-entropy PQC whose ciphertext sits at distance ``theta`` from I/2."""
    delta = hull.delta
    if theta < -THETA_TOL or theta > delta + THETA_TOL:
        raise InfeasibleThetaError(f"theta={theta} outside [0, delta={delta}]")
    theta = min(max(theta, 0.0), delta)
    anchor = hull.anchor.array

    if hull.affine_dim == 0:
        # a lone plaintext needs no key; the ciphertext is the plaintext
        if abs(theta - delta) > THETA_TOL:
            raise InfeasibleThetaError(
                f"a single plaintext is sent unencrypted, so theta must equal delta={delta}"
            )
        return PqcSolution(
            UnitalChannel.pauli(PauliDiagonal(1.0, 1.0, 1.0)),
            IDENTITY_CHANNEL,
            hull.anchor,
            0.0,
            delta,
        )

    if hull.affine_dim == 3:
        if theta > THETA_TOL:
            raise InfeasibleThetaError("a full-ball plaintext set only admits theta = 0")
        ch = UnitalChannel.pauli(PauliDiagonal(0.0, 0.0, 0.0))
        return _solution(ch, np.zeros(3))

    if hull.affine_dim == 1:
        d = hull.basis[0]
        if delta == 0.0:
            m = _unit_orthogonal_to([d])
        else:
            a_hat = anchor / delta
            e_hat = np.cross(a_hat, d)
            e_hat /= np.linalg.norm(e_hat)
            cos_phi = theta / delta
            sin_phi = math.sqrt(max(0.0, 1.0 - cos_phi * cos_phi))
            m = cos_phi * a_hat + sin_phi * e_hat
        ch = _axis_channel(m, 1.0)
        return _solution(ch, (m @ anchor) * m)

    # plane
    if delta == 0.0:
        normal = _unit_orthogonal_to(list(hull.basis))
        ch = _axis_channel(normal, 1.0)
        return _solution(ch, np.zeros(3))
    lam = theta / delta
    ch = _axis_channel(anchor / delta, lam)
    return _solution(ch, lam * anchor)


def optimal_entropy_curve(
    kind: Literal["line", "plane"], delta: float, theta_grid: Iterable[float]
) -> list[tuple[float, float]]:
    if delta <= 0:
        raise ValueError("delta must be positive")
    if kind not in ("line", "plane"):
        raise ValueError(f"kind must be 'line' or 'plane', got {kind!r}")
    out = []
    for theta in theta_grid:
        if theta < 0 or theta > delta * (1 + 1e-12):
            raise InfeasibleThetaError(f"theta={theta} outside [0, {delta}]")
        if kind == "line":
            out.append((theta, 1.0))
        else:
            t = min(theta / delta, 1.0)
            out.append((theta, 2.0 - 0.5 * h_function(t)))
    return out
