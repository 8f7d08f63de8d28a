"""
Small-scale Hermitian linear algebra, Bloch conversions and entropies.

Every state here is a single qubit, written either as a Bloch vector r
or as the density operator rho = (I + r . sigma) / 2. All logarithms are
base 2, so entropies come out in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvalidDistributionError,
    InvalidStateError,
    NotHermitianError,
    NotUnitaryError,
)

TOL_PROB = 1e-9
TOL_STATE = 1e-9
TOL_HERM = 1e-10
TOL_UNIT = 1e-10

JACOBI_OFF_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidStateError(f"non-finite Bloch component {name}={v}")
            object.__setattr__(self, name, v)
        n = self.norm
        if n > 1.0 + TOL_STATE:
            raise InvalidStateError(f"|r| = {n:.12g} exceeds 1 (unphysical state)")

    @classmethod
    def from_array(cls, r: Iterable[float]) -> "BlochVector":
        x, y, z = (float(c) for c in r)
        return cls(x, y, z)

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def is_pure(self, tol: float = TOL_STATE) -> bool:
        return abs(self.norm - 1.0) <= tol

    def tolist(self) -> list[float]:
        return [self.x, self.y, self.z]


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A 2x2 Hermitian, unit-trace, positive semidefinite matrix."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidStateError(f"density operator must be 2x2, got {m.shape}")
        if not np.allclose(m, m.conj().T, atol=TOL_HERM, rtol=0):
            raise InvalidStateError("density operator is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TOL_STATE:
            raise InvalidStateError(f"trace {tr:.12g} != 1")
        # closed form for 2x2: smallest eigenvalue = tr/2 - sqrt((a-d)^2/4 + |b|^2)
        lo = tr / 2 - math.sqrt(((m[0, 0] - m[1, 1]).real / 2) ** 2 + abs(m[0, 1]) ** 2)
        if lo < -TOL_STATE:
            raise InvalidStateError(f"negative eigenvalue {lo:.3g}")
        object.__setattr__(self, "m", _frozen(m))

    def __eq__(self, other):
        if not isinstance(other, DensityOperator):
            return NotImplemented
        return bool(np.array_equal(self.m, other.m))

    def __hash__(self):
        return hash(self.m.tobytes())


@dataclass(frozen=True, eq=False)
class QubitUnitary:
    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=complex)
        if m.shape != (2, 2):
            raise NotUnitaryError(f"qubit unitary must be 2x2, got {m.shape}")
        if not np.allclose(m @ m.conj().T, np.eye(2), atol=TOL_UNIT, rtol=0):
            raise NotUnitaryError("matrix is not unitary")
        object.__setattr__(self, "m", _frozen(m))

    @property
    def dagger(self) -> "QubitUnitary":
        return QubitUnitary(self.m.conj().T)

    def __matmul__(self, other: "QubitUnitary") -> "QubitUnitary":
        return QubitUnitary(self.m @ other.m)

    def __eq__(self, other):
        if not isinstance(other, QubitUnitary):
            return NotImplemented
        return bool(np.array_equal(self.m, other.m))

    def __hash__(self):
        return hash(self.m.tobytes())


_I2 = np.eye(2, dtype=complex)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_MATRICES = (_SX, _SY, _SZ)

IDENTITY = QubitUnitary(_I2)
SIGMA_X = QubitUnitary(_SX)
SIGMA_Y = QubitUnitary(_SY)
SIGMA_Z = QubitUnitary(_SZ)
PAULIS = (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z)

MAXIMALLY_MIXED = DensityOperator(_I2 / 2)


def bloch_to_density(r: BlochVector) -> DensityOperator:
    """rho = (I + rx sx + ry sy + rz sz) / 2."""
    return DensityOperator(0.5 * (_I2 + r.x * _SX + r.y * _SY + r.z * _SZ))


def density_to_bloch(rho: DensityOperator) -> BlochVector:
    m = rho.m
    return BlochVector(
        2.0 * m[0, 1].real,
        -2.0 * m[0, 1].imag,
        (m[0, 0] - m[1, 1]).real,
    )


def trace_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Tr|rho - sigma| (no factor 1/2), so D(rho, I/2) = |r|.

    Computed from the eigenvalues of the traceless difference, which for
    qubits are +-|r_rho - r_sigma| / 2.
    """
    d = rho.m - sigma.m
    half = math.sqrt(((d[0, 0] - d[1, 1]).real / 2) ** 2 + abs(d[0, 1]) ** 2)
    return 2.0 * half


def as_hermitian(a, tol: float = TOL_HERM) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.conj().T, atol=tol, rtol=0):
        raise NotHermitianError("matrix is not Hermitian")
    return 0.5 * (a + a.conj().T)


def _jacobi_hermitian(h: np.ndarray) -> np.ndarray:
    """Cyclic complex Jacobi sweeps; returns the (real) diagonal at convergence.

    Each pivot a_pq = |a_pq| e^{i phi} is first made real by rephasing
    basis vector q, then zeroed by an ordinary real plane rotation.
    """
    a = h.astype(complex)
    n = a.shape[0]
    scale = max(1.0, float(np.abs(a).max()))
    for _ in range(JACOBI_MAX_SWEEPS):
        off = math.sqrt(max(0.0, float((np.abs(a) ** 2).sum() - (np.abs(np.diag(a)) ** 2).sum())))
        if off < JACOBI_OFF_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-18 * scale:
                    a[p, q] = a[q, p] = 0.0
                    continue
                ph = apq / mag
                a[:, q] *= ph.conjugate()
                a[q, :] *= ph
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s_ = t * c
                rp = a[p, :].copy()
                a[p, :] = c * rp - s_ * a[q, :]
                a[q, :] = s_ * rp + c * a[q, :]
                cp = a[:, p].copy()
                a[:, p] = c * cp - s_ * a[:, q]
                a[:, q] = s_ * cp + c * a[:, q]
                a[p, q] = a[q, p] = 0.0
    return np.diag(a).real.copy()


def hermitian_eigenvalues(a) -> list[float]:
    """Eigenvalues of a Hermitian matrix, in descending order (cyclic Jacobi)."""
    h = as_hermitian(a)
    if h.shape[0] == 1:
        return [float(h[0, 0].real)]
    ev = np.sort(_jacobi_hermitian(h))[::-1]
    return [float(v) for v in ev]


def _clean_probs(p: Sequence[float], tol: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidDistributionError("probability list must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(p)):
        raise InvalidDistributionError("non-finite probability")
    if np.any(p < -tol):
        raise InvalidDistributionError(f"negative probability {p.min():.3g}")
    total = math.fsum(p.tolist())
    if abs(total - 1.0) > tol:
        raise InvalidDistributionError(f"probabilities sum to {total:.12g}")
    p = np.clip(p, 0.0, None)
    return p / math.fsum(p.tolist())


def shannon_entropy(p: Sequence[float], tol: float = TOL_PROB) -> float:
    """H = -sum p log2 p, with 0 log 0 = 0."""
    q = _clean_probs(p, tol)
    # fsum is exactly rounded, hence independent of term order
    return max(0.0, -math.fsum(v * math.log2(v) for v in q.tolist() if v > 0))


def von_neumann_entropy(rho, tol: float = TOL_STATE) -> float:
    """Shannon entropy of the spectrum of a state (any dimension)."""
    if isinstance(rho, DensityOperator):
        rho = rho.m
    ev = hermitian_eigenvalues(rho)
    try:
        return shannon_entropy(ev, tol)
    except InvalidDistributionError as exc:
        raise InvalidStateError(f"not a density matrix: {exc}") from None


def h_function(x: float) -> float:
    """h(x) = (1+x) log2(1+x) + (1-x) log2(1-x), defined on [-1, 1]."""
    if not abs(x) <= 1.0 + TOL_PROB:
        raise ValueError(f"h(x) needs |x| <= 1, got {x}")
    x = min(1.0, max(-1.0, x))
    return _xlog2x(1.0 + x) + _xlog2x(1.0 - x)


def _xlog2x(v: float) -> float:
    return v * math.log2(v) if v > 0 else 0.0


def binary_entropy(p: float) -> float:
    return shannon_entropy([p, 1.0 - p])
