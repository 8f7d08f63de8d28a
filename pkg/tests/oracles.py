"""Independent reference computations used only by the tests."""

import math

import numpy as np

from privchan.channels import RandomUnitaryChannel
from privchan.qmath import BlochVector, QubitUnitary


def random_bloch(rng, pure=False) -> BlochVector:
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    if not pure:
        v *= rng.uniform() ** (1 / 3)
    return BlochVector.from_array(v)


def random_su2(rng) -> QubitUnitary:
    a, b, c, d = rng.normal(size=4)
    n = math.sqrt(a * a + b * b + c * c + d * d)
    a, b, c, d = a / n, b / n, c / n, d / n
    return QubitUnitary(np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]]))


def random_rotation(rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_probs(rng, k=4) -> np.ndarray:
    return rng.dirichlet(np.ones(k))


def charpoly_4x4(a: np.ndarray) -> np.ndarray:
    """Coefficients of det(x I - A) via Faddeev-LeVerrier, highest power first."""
    n = a.shape[0]
    coeffs = [1.0 + 0j]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    return np.array(coeffs)


def remix(ch: RandomUnitaryChannel, j: int, k: int, t: float, phase: complex = 1.0) -> RandomUnitaryChannel:
    """Re-mix Kraus operators j and k of a Pauli-type channel by a 2x2 unitary.

    B_j = c A_j + phase s A_k, B_k = -conj(phase) s A_j + c A_k. When the two
    unitaries anticommute up to the phase, each B is proportional to a
    unitary and the new list describes the same channel.
    """
    c, s = math.cos(t), math.sin(t)
    ps = ch.probabilities
    us = [u.m for u in ch.unitaries]
    a = [math.sqrt(p) * u for p, u in zip(ps, us)]
    bj = c * a[j] + phase * s * a[k]
    bk = -np.conj(phase) * s * a[j] + c * a[k]
    terms = []
    for idx, op in enumerate(a):
        if idx == j:
            op = bj
        elif idx == k:
            op = bk
        w = float(np.real(np.trace(op @ op.conj().T)) / 2)
        if w < 1e-15:
            terms.append((0.0, QubitUnitary(np.eye(2))))
            continue
        terms.append((w, QubitUnitary(op / math.sqrt(w))))
    total = sum(p for p, _ in terms)
    return RandomUnitaryChannel(tuple((p / total, u) for p, u in terms))


def brute_channel_image(ch: RandomUnitaryChannel, r: np.ndarray) -> np.ndarray:
    """Bloch image through explicit Pauli expectation values."""
    rho = 0.5 * (np.eye(2) + r[0] * np.array([[0, 1], [1, 0]]) + r[1] * np.array([[0, -1j], [1j, 0]])
                 + r[2] * np.array([[1, 0], [0, -1]]))
    out = sum(p * u.m @ rho @ u.m.conj().T for p, u in ch.terms)
    return np.array([2 * out[0, 1].real, -2 * out[0, 1].imag, (out[0, 0] - out[1, 1]).real])
