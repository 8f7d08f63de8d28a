"""
Approximate private channels over the whole qubit state space.

For a Pauli channel diag(lx, ly, lz) the worst-case distance between two
encrypted states is eps = 2 max|l_j|, and the cheapest key is the Shannon
entropy of its four Pauli weights. This module holds the closed-form
entropy families, the piecewise frontier built from them, and an
exhaustive grid search over the completely positive tetrahedron that
serves as an independent check on any closed form.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .channels import (
    PauliDiagonal,
    RandomUnitaryChannel,
    apply,
    is_completely_positive,
    probs_from_lambdas,
)
from .errors import NotCompletelyPositiveError
from .pqc import PlaintextSet
from .qmath import bloch_to_density, shannon_entropy

LOG2_3 = math.log2(3.0)
THIRD = 1.0 / 3.0


@dataclass(frozen=True)
class FrontierPoint:
    epsilon: float
    entropy: float
    lam: PauliDiagonal


@dataclass(frozen=True)
class FrontierCurve:
    """Per-bin entropy minima from a grid search.

    ``centers[i]`` is the (clamped) centre of the bin that produced
    ``points[i]``. ``min_margin`` is the smallest entropy minus reference
    value seen over every enumerated channel, or None without a reference.
    """

    points: tuple[FrontierPoint, ...]
    bin_width: float
    centers: tuple[float, ...]
    min_margin: Optional[float] = None


def _xlog2x(v):
    v = np.asarray(v, dtype=float)
    safe = np.where(v > 0, v, 1.0)
    return np.where(v > 0, v * np.log2(safe), 0.0)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def epsilon_full_sphere(lam: PauliDiagonal) -> float:
    if not is_completely_positive(lam):
        raise NotCompletelyPositiveError(f"lambda {lam.tolist()} is not completely positive")
    return 2.0 * max(abs(lam.lx), abs(lam.ly), abs(lam.lz))


def epsilon_for_set(ch: RandomUnitaryChannel, P: PlaintextSet) -> float:
    """Largest trace distance between any two encrypted plaintexts."""
    imgs = np.array([apply(ch, bloch_to_density(s)).m for s in P.states])
    eps = 0.0
    for i in range(len(imgs) - 1):
        d = imgs[i + 1:] - imgs[i]
        # Tr|d| for traceless Hermitian 2x2 d is 2 sqrt(((d00 - d11)/2)^2 + |d01|^2)
        td = 2.0 * np.sqrt(((d[:, 0, 0] - d[:, 1, 1]).real / 2) ** 2 + np.abs(d[:, 0, 1]) ** 2)
        eps = max(eps, float(td.max()))
    return eps


def _h_depol(lam):
    lam = np.asarray(lam, dtype=float)
    return 2.0 - 0.25 * (_xlog2x(1 + 3 * lam) + 3 * _xlog2x(1 - lam))


def _h_phase(lam):
    lam = np.asarray(lam, dtype=float)
    return 0.5 * (3 + lam - _xlog2x(1 - lam) - _xlog2x(1 + lam))


def _h_two_axis(eps):
    m = (1.0 - np.asarray(eps, dtype=float) / 2.0) / 2.0
    return -2.0 * _xlog2x(m) - _xlog2x(1.0 - 2.0 * m)


def entropy_depolarizing(lam: float) -> float:
    """Key entropy of the depolarizing channel lx = ly = lz = lam."""
    if not -THIRD - 1e-12 <= lam <= 1.0 + 1e-12:
        raise ValueError(f"depolarizing channel is physical only for -1/3 <= lam <= 1, got {lam}")
    return float(_h_depol(min(1.0, max(-THIRD, lam))))


def entropy_phase_family(lam: float) -> float:
    """Key entropy of lz = -lam, lx = ly = -(1 - lam)/2 (zero weight on I)."""
    if not THIRD - 1e-12 <= lam <= 1.0 + 1e-12:
        raise ValueError(f"phase family needs 1/3 <= lam <= 1, got {lam}")
    return float(_h_phase(min(1.0, max(THIRD, lam))))


def phase_family_lambdas(lam: float) -> PauliDiagonal:
    k = (1.0 - lam) / 2.0
    return PauliDiagonal(-k, -k, -lam)


def entropy_two_axis_family(eps: float) -> float:
    """Key entropy of lambda = (-eps/2, -eps/2, eps - 1), defined for 2/3 <= eps <= 2.

    Weights are (0, m, m, eps/2) with m = (1 - eps/2)/2: two axes sit at the
    allowed bound and the third takes what complete positivity leaves.
    """
    if not 2 * THIRD - 1e-12 <= eps <= 2.0 + 1e-12:
        raise ValueError(f"two-axis family needs 2/3 <= eps <= 2, got {eps}")
    return float(_h_two_axis(min(2.0, max(2 * THIRD, eps))))


def two_axis_family_lambdas(eps: float) -> PauliDiagonal:
    return PauliDiagonal(-eps / 2, -eps / 2, eps - 1.0)


def bisect(f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-10) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"root not bracketed: f({lo})={flo}, f({hi})={fhi}")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class Crossover:
    lambda_star: float
    epsilon_star: float


def crossover() -> Crossover:
    """Where the depolarizing and phase-family entropies meet above lam = 1/3."""
    # both equal log2(3) at lam = 1/3 itself, so bracket just above it
    lam = bisect(lambda x: entropy_depolarizing(x) - entropy_phase_family(x), 0.34, 0.99)
    return Crossover(lam, 2.0 * lam)


def depolarizing_plateau_end() -> float:
    """eps at which a positive depolarizing channel first drops below log2(3)."""
    lam = bisect(lambda x: entropy_depolarizing(x) - LOG2_3, 0.34, 0.99)
    return 2.0 * lam


def _check_eps(eps):
    e = np.asarray(eps, dtype=float)
    if np.any(e < -1e-12) or np.any(e > 2 + 1e-12):
        raise ValueError("epsilon must lie in [0, 2]")
    return np.clip(e, 0.0, 2.0)


_EPS_STAR = crossover().epsilon_star


def analytic_frontier(eps):
    """Piecewise frontier from the depolarizing and phase families.

    Negative depolarizing on [0, 2/3], phase family on [2/3, eps*],
    positive depolarizing on [eps*, 2]. Accepts scalars or arrays.
    """
    e = _check_eps(eps)
    half = e / 2
    out = np.where(
        e <= 2 * THIRD,
        _h_depol(np.maximum(-half, -THIRD)),
        np.where(e <= _EPS_STAR, _h_phase(np.clip(half, THIRD, 1.0)), _h_depol(half)),
    )
    return _scalar(out)


_EPS_ENVELOPE = bisect(lambda e: float(_h_two_axis(e) - _h_depol(e / 2)), 0.7, 1.99)


def envelope_crossover() -> float:
    """eps where the two-axis family and positive depolarizing entropies meet."""
    return _EPS_ENVELOPE


def envelope_frontier(eps):
    """Lower envelope confirmed by exhaustive search.

    Negative depolarizing on [0, 2/3], two-axis family up to
    ``envelope_crossover()``, positive depolarizing beyond.
    """
    e = _check_eps(eps)
    out = np.where(
        e <= 2 * THIRD,
        _h_depol(np.maximum(-e / 2, -THIRD)),
        np.where(e <= _EPS_ENVELOPE, _h_two_axis(np.clip(e, 2 * THIRD, 2.0)), _h_depol(e / 2)),
    )
    return _scalar(out)


def frontier_witness(eps: float, envelope: bool = False) -> PauliDiagonal:
    """A channel attaining ``analytic_frontier`` (or ``envelope_frontier``) at eps."""
    e = float(_check_eps(eps))
    if e <= 2 * THIRD:
        return PauliDiagonal(-e / 2, -e / 2, -e / 2)
    upper = _EPS_ENVELOPE if envelope else _EPS_STAR
    if e <= upper:
        return two_axis_family_lambdas(e) if envelope else phase_family_lambdas(e / 2)
    return PauliDiagonal(e / 2, e / 2, e / 2)


def depolarizing_curve(epsilon_grid: Iterable[float]) -> list[tuple[float, float]]:
    """Best key entropy at each eps using depolarizing channels only.

    Past eps = 2/3 the negative branch is unphysical, but lam = -1/3 still
    meets any looser security target.
    """
    out = []
    for e in epsilon_grid:
        e = float(_check_eps(e))
        cands = [entropy_depolarizing(e / 2)]
        if e <= 2 * THIRD:
            cands.append(entropy_depolarizing(-e / 2))
        else:
            cands.append(LOG2_3)
        out.append((e, min(cands)))
    return out


def _slab_minima(lx_values, grid, bin_width, nbins, reference, cp_tol):
    """Per-bin minima over all (lx, ly, lz) with lx in ``lx_values``."""
    best_h = np.full(nbins, np.inf)
    best_l1 = np.full(nbins, np.inf)
    best_lam = np.zeros((nbins, 3))
    margin = math.inf
    ly, lz = np.meshgrid(grid, grid, indexing="ij")
    ly, lz = ly.ravel(), lz.ravel()
    for lx in lx_values:
        p = np.stack([
            (1 + lx + ly + lz) / 4,
            (1 + lx - ly - lz) / 4,
            (1 - lx + ly - lz) / 4,
            (1 - lx - ly + lz) / 4,
        ])
        ok = (p >= -cp_tol).all(axis=0)
        if not ok.any():
            continue
        p = np.clip(p[:, ok], 0.0, None)
        p /= p.sum(axis=0)
        y, z = ly[ok], lz[ok]
        h = -_xlog2x(p).sum(axis=0)
        eps = 2.0 * np.maximum(abs(lx), np.maximum(np.abs(y), np.abs(z)))
        l1 = abs(lx) + np.abs(y) + np.abs(z)
        if reference is not None:
            margin = min(margin, float((h - reference(np.minimum(eps, 2.0))).min()))
        b = np.minimum(np.floor(eps / bin_width + 1e-9).astype(int), nbins - 1)
        order = np.lexsort((l1, h, b))
        b_sorted = b[order]
        first = order[np.r_[True, b_sorted[1:] != b_sorted[:-1]]]
        lams = np.column_stack([np.full(first.size, lx), y[first], z[first]])
        _merge(best_h, best_l1, best_lam, b[first], h[first], l1[first], lams)
    return best_h, best_l1, best_lam, margin


def _merge(best_h, best_l1, best_lam, bins, h, l1, lams):
    cur_h, cur_l1 = best_h[bins], best_l1[bins]
    better = (h < cur_h) | ((h == cur_h) & (l1 < cur_l1))
    idx = bins[better]
    best_h[idx] = h[better]
    best_l1[idx] = l1[better]
    best_lam[idx] = lams[better]


def brute_force_frontier(
    step: float,
    bin_width: float,
    reference: Optional[Callable] = None,
    workers: int = 1,
    cp_tol: float = 1e-12,
) -> FrontierCurve:
    """Minimum key entropy per eps-bin over the cube [-1, 1]^3, filtered by CP.

    Bins are left-closed, [k w, (k+1) w); the last bin holds eps = 2 alone.
    Ties within a bin go to the smaller |lx| + |ly| + |lz|. With
    ``workers > 1`` the lx axis is split across processes and the partial
    minima merged in slab order, so the result does not depend on
    ``workers``.
    """
    if not 0 < step <= 0.02 + 1e-15:
        raise ValueError("step must lie in (0, 0.02]")
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    n = int(round(2.0 / step))
    if abs(n * step - 2.0) > 1e-9:
        n = int(math.floor(2.0 / step + 1e-9))
    grid = -1.0 + step * np.arange(n + 1)
    nbins = int(math.floor(2.0 / bin_width + 1e-9)) + 1

    best_h = np.full(nbins, np.inf)
    best_l1 = np.full(nbins, np.inf)
    best_lam = np.zeros((nbins, 3))
    margin = math.inf
    if workers <= 1:
        parts = [_slab_minima(grid, grid, bin_width, nbins, reference, cp_tol)]
    else:
        chunks = np.array_split(grid, workers * 4)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [
                pool.submit(_slab_minima, c, grid, bin_width, nbins, reference, cp_tol)
                for c in chunks
            ]
            parts = [f.result() for f in futs]
    for ph, pl1, plam, pm in parts:
        filled = np.flatnonzero(np.isfinite(ph))
        _merge(best_h, best_l1, best_lam, filled, ph[filled], pl1[filled], plam[filled])
        margin = min(margin, pm)

    points, centers = [], []
    for k in np.flatnonzero(np.isfinite(best_h)):
        lam = PauliDiagonal(*best_lam[k])
        points.append(FrontierPoint(epsilon_full_sphere(lam), float(best_h[k]), lam))
        centers.append(min((k + 0.5) * bin_width, 2.0))
    return FrontierCurve(
        tuple(points),
        bin_width,
        tuple(centers),
        None if reference is None else margin,
    )


def frontier_point(lam: PauliDiagonal) -> FrontierPoint:
    """Recompute (eps, H) for a witness channel."""
    return FrontierPoint(epsilon_full_sphere(lam), shannon_entropy(probs_from_lambdas(lam)), lam)
