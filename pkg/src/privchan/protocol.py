"""
Key-stream driven encryption of qubit messages.

Key streams come from numpy's Philox4x64-10 counter-based generator
(``numpy.random.Philox(seed)``), drawing doubles with
``Generator.random`` and mapping them through the inverse CDF of the
channel's term probabilities, in term order. The same seed, length and
probabilities always give the same indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .apqc import epsilon_for_set
from .channels import RandomUnitaryChannel, apply_bloch
from .errors import LengthMismatchError
from .pqc import PlaintextSet
from .qmath import BlochVector, QubitUnitary, bloch_to_density

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class KeyStream:
    seed: int
    indices: tuple[int, ...]

    def __len__(self):
        return len(self.indices)


@dataclass(frozen=True)
class Message:
    slots: tuple[BlochVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))

    def __len__(self):
        return len(self.slots)


@dataclass(frozen=True)
class TransmissionReport:
    n_slots: int
    max_roundtrip_error: float
    eavesdropper_ciphertext: BlochVector
    max_eavesdropper_deviation: float

    def to_dict(self) -> dict:
        return {
            "n_slots": self.n_slots,
            "max_roundtrip_error": self.max_roundtrip_error,
            "eavesdropper_ciphertext": self.eavesdropper_ciphertext.tolist(),
            "max_eavesdropper_deviation": self.max_eavesdropper_deviation,
        }


def generate_key(ch: RandomUnitaryChannel, n: int, seed: int) -> KeyStream:
    if n < 0:
        raise ValueError("key length must be non-negative")
    seed = int(seed) & SEED_MASK
    if n == 0:
        return KeyStream(seed, ())
    p = np.asarray(ch.probabilities, dtype=float)
    p = np.clip(p, 0.0, None)
    cdf = np.cumsum(p) / p.sum()
    last = int(np.flatnonzero(p > 0)[-1])
    rng = np.random.Generator(np.random.Philox(seed))
    u = rng.random(n)
    idx = np.minimum(np.searchsorted(cdf, u, side="right"), last)
    return KeyStream(seed, tuple(int(i) for i in idx))


def _conjugate(u: np.ndarray, r: BlochVector) -> BlochVector:
    rho = bloch_to_density(r).m
    out = u @ rho @ u.conj().T
    # stay on the physical side of |r| <= 1 after round-off
    v = density_to_bloch_array(0.5 * (out + out.conj().T))
    n = np.linalg.norm(v)
    if n > 1.0:
        v = v / n
    return BlochVector.from_array(v)


def density_to_bloch_array(m: np.ndarray) -> np.ndarray:
    return np.array([2.0 * m[0, 1].real, -2.0 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real])


def _check_lengths(msg: Message, key: KeyStream, ch: RandomUnitaryChannel) -> Sequence[QubitUnitary]:
    if len(msg) != len(key):
        raise LengthMismatchError(f"message has {len(msg)} slots but key has {len(key)} indices")
    us = ch.unitaries
    for i in key.indices:
        if not 0 <= i < len(us):
            raise IndexError(f"key index {i} out of range for {len(us)} terms")
    return us


def encrypt(msg: Message, key: KeyStream, ch: RandomUnitaryChannel) -> Message:
    us = _check_lengths(msg, key, ch)
    return Message(tuple(_conjugate(us[j].m, r) for r, j in zip(msg.slots, key.indices)))


def decrypt(msg: Message, key: KeyStream, ch: RandomUnitaryChannel) -> Message:
    us = _check_lengths(msg, key, ch)
    return Message(tuple(_conjugate(us[j].m.conj().T, r) for r, j in zip(msg.slots, key.indices)))


def eavesdropper_view(rho: BlochVector, ch: RandomUnitaryChannel) -> BlochVector:
    """What someone without the key holds: the fully mixed-over-keys state."""
    return apply_bloch(ch, rho)


def audit(msg: Message, ch: RandomUnitaryChannel, key: KeyStream) -> TransmissionReport:
    cipher = encrypt(msg, key, ch)
    plain = decrypt(cipher, key, ch)
    rt = max(
        (float(np.linalg.norm(a.array - b.array)) for a, b in zip(msg.slots, plain.slots)),
        default=0.0,
    )
    if len(msg) == 0:
        return TransmissionReport(0, 0.0, BlochVector(0.0, 0.0, 0.0), 0.0)
    views = np.array([eavesdropper_view(r, ch).array for r in msg.slots])
    # distinct slots only; the pairwise scan is quadratic
    uniq = np.unique(views, axis=0)
    dev = 0.0
    for i in range(len(uniq)):
        d = np.linalg.norm(uniq[i + 1:] - uniq[i], axis=1)
        if d.size:
            dev = max(dev, float(d.max()))
    return TransmissionReport(len(msg), rt, BlochVector.from_array(views[0]), dev)


def message_from_states(states: PlaintextSet | Sequence[BlochVector], n: int) -> Message:
    """``n`` slots cycling through the given states."""
    ss = states.states if isinstance(states, PlaintextSet) else tuple(states)
    if not ss and n:
        raise ValueError("need at least one state to fill a message")
    return Message(tuple(ss[i % len(ss)] for i in range(n)))


def audit_epsilon(msg: Message, ch: RandomUnitaryChannel) -> float:
    """Independent recomputation of the pairwise eavesdropper spread."""
    if len(msg) < 2:
        return 0.0
    return epsilon_for_set(ch, PlaintextSet(msg.slots))
