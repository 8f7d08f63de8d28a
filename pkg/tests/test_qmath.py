import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import charpoly_4x4, random_bloch
from privchan.errors import InvalidDistributionError, InvalidStateError, NotHermitianError
from privchan.qmath import (
    MAXIMALLY_MIXED,
    BlochVector,
    DensityOperator,
    binary_entropy,
    bloch_to_density,
    density_to_bloch,
    h_function,
    hermitian_eigenvalues,
    shannon_entropy,
    trace_distance,
    von_neumann_entropy,
)


class TestBlochConversions:
    def test_origin_is_total_mixture(self):
        assert np.allclose(bloch_to_density(BlochVector(0, 0, 0)).m, np.eye(2) / 2)

    def test_north_pole(self):
        assert np.allclose(bloch_to_density(BlochVector(0, 0, 1)).m, np.diag([1, 0]))

    def test_x_eigenstate(self):
        assert np.allclose(bloch_to_density(BlochVector(1, 0, 0)).m, np.full((2, 2), 0.5))

    def test_unphysical_rejected(self):
        with pytest.raises(InvalidStateError):
            BlochVector(0.8, 0.8, 0.0)

    def test_density_to_bloch_examples(self):
        assert density_to_bloch(MAXIMALLY_MIXED).tolist() == [0, 0, 0]
        assert density_to_bloch(DensityOperator(np.diag([1.0, 0.0]))).tolist() == [0, 0, 1]
        sx = np.array([[0, 1], [1, 0]])
        r = density_to_bloch(DensityOperator(0.5 * (np.eye(2) + 0.3 * sx)))
        assert r.tolist() == pytest.approx([0.3, 0, 0], abs=1e-15)

    def test_invalid_density_rejected(self):
        with pytest.raises(InvalidStateError):
            DensityOperator(np.diag([1.5, -0.5]))
        with pytest.raises(InvalidStateError):
            DensityOperator(np.array([[0.5, 1.0], [0.0, 0.5]]))

    def test_round_trip_1000(self, rng):
        worst = 0.0
        for _ in range(1000):
            r = random_bloch(rng)
            back = density_to_bloch(bloch_to_density(r))
            worst = max(worst, float(np.abs(back.array - r.array).max()))
        assert worst < 1e-12


class TestTraceDistance:
    def test_self_distance(self, rng):
        rho = bloch_to_density(random_bloch(rng))
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure(self):
        up = bloch_to_density(BlochVector(0, 0, 1))
        down = bloch_to_density(BlochVector(0, 0, -1))
        assert trace_distance(up, down) == pytest.approx(2.0, abs=1e-15)

    def test_distance_to_mixture_is_length(self):
        for x in (-0.7, 0.0, 0.25, 1.0):
            rho = bloch_to_density(BlochVector(x, 0, 0))
            assert trace_distance(rho, MAXIMALLY_MIXED) == pytest.approx(abs(x), abs=1e-15)

    def test_matches_bloch_norm(self, rng):
        for _ in range(500):
            a, b = random_bloch(rng), random_bloch(rng)
            d = trace_distance(bloch_to_density(a), bloch_to_density(b))
            # oracle: sum of |eigenvalues| of the difference from numpy
            ev = np.linalg.eigvalsh(bloch_to_density(a).m - bloch_to_density(b).m)
            assert d == pytest.approx(np.abs(ev).sum(), abs=1e-12)
            assert d == pytest.approx(np.linalg.norm(a.array - b.array), abs=1e-12)
            assert d == pytest.approx(trace_distance(bloch_to_density(b), bloch_to_density(a)), abs=0)


class TestEigenvalues:
    def test_identity_and_scaled(self):
        assert hermitian_eigenvalues(np.eye(4)) == pytest.approx([1, 1, 1, 1])
        assert hermitian_eigenvalues(np.eye(4) / 4) == pytest.approx([0.25] * 4)

    def test_descending(self, rng):
        x = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        ev = hermitian_eigenvalues(x + x.conj().T)
        assert ev == sorted(ev, reverse=True)

    def test_non_hermitian_rejected(self):
        with pytest.raises(NotHermitianError):
            hermitian_eigenvalues(np.array([[1, 2], [0, 1]]))

    @pytest.mark.parametrize("seed", range(20))
    def test_random_4x4_against_characteristic_polynomial(self, seed):
        g = np.random.default_rng(seed)
        x = g.normal(size=(4, 4)) + 1j * g.normal(size=(4, 4))
        h = x + x.conj().T
        ev = np.array(hermitian_eigenvalues(h))
        roots = np.sort(np.roots(charpoly_4x4(h)).real)[::-1]
        assert ev == pytest.approx(roots, abs=1e-8)
        # characteristic polynomial vanishes at each computed eigenvalue
        for lam in ev:
            assert abs(np.linalg.det(h - lam * np.eye(4))) < 1e-8 * max(1, np.abs(h).max() ** 4)

    def test_dim2_closed_form(self, rng):
        for _ in range(100):
            a, d = rng.normal(size=2)
            b = complex(*rng.normal(size=2))
            h = np.array([[a, b], [b.conjugate(), d]])
            disc = math.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
            assert hermitian_eigenvalues(h) == pytest.approx([(a + d) / 2 + disc, (a + d) / 2 - disc], abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(2, 16), st.integers(0, 2**32 - 1))
    def test_trace_and_square_trace(self, n, seed):
        g = np.random.default_rng(seed)
        x = g.normal(size=(n, n)) + 1j * g.normal(size=(n, n))
        h = x + x.conj().T
        ev = np.array(hermitian_eigenvalues(h))
        assert ev.sum() == pytest.approx(np.trace(h).real, abs=1e-10 * n)
        assert (ev**2).sum() == pytest.approx(np.trace(h @ h).real, abs=1e-10 * np.abs(h).sum() ** 2 / n)


class TestEntropies:
    def test_shannon_examples(self):
        assert shannon_entropy([0.25] * 4) == 2.0
        assert shannon_entropy([1, 0, 0, 0]) == 0.0
        assert shannon_entropy([0, 1 / 3, 1 / 3, 1 / 3]) == pytest.approx(math.log2(3), abs=1e-12)
        assert shannon_entropy([0, 1 / 3, 1 / 3, 1 / 3]) == pytest.approx(1.585, abs=5e-4)

    def test_shannon_rejects_bad_distributions(self):
        with pytest.raises(InvalidDistributionError):
            shannon_entropy([0.5, 0.6])
        with pytest.raises(InvalidDistributionError):
            shannon_entropy([1.1, -0.1])

    def test_shannon_tiny_negative_clamped(self):
        assert shannon_entropy([1.0 + 1e-12, -1e-12]) == 0.0

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=8).filter(lambda v: sum(v) > 1e-3))
    def test_shannon_bounds(self, w):
        p = np.array(w) / sum(w)
        h = shannon_entropy(p)
        assert -1e-12 <= h <= math.log2(len(p)) + 1e-12

    def test_von_neumann_examples(self, rng):
        assert von_neumann_entropy(MAXIMALLY_MIXED) == pytest.approx(1.0, abs=1e-15)
        pure = bloch_to_density(random_bloch(rng, pure=True))
        assert von_neumann_entropy(pure) == pytest.approx(0.0, abs=1e-9)
        assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0, abs=1e-15)

    def test_von_neumann_matches_shannon_on_diagonals(self, rng):
        for _ in range(50):
            p = rng.dirichlet(np.ones(4))
            assert von_neumann_entropy(np.diag(p)) == shannon_entropy(p)

    def test_h_function_examples(self):
        assert h_function(0.0) == 0.0
        assert h_function(1.0) == 2.0
        assert h_function(-1.0) == 2.0
        ref = float(1.5 * mpmath.log(1.5, 2) + 0.5 * mpmath.log(0.5, 2))
        assert h_function(0.5) == pytest.approx(ref, abs=1e-15)
        assert h_function(0.5) == pytest.approx(0.377443, abs=1e-6)

    def test_h_function_domain(self):
        with pytest.raises(ValueError):
            h_function(1.01)

    @given(st.floats(-1, 1))
    def test_h_function_identity_and_symmetry(self, x):
        assert h_function(x) == pytest.approx(2 - 2 * binary_entropy((1 + x) / 2), abs=1e-12)
        assert h_function(x) == h_function(-x)

    def test_h_function_monotone(self):
        xs = np.linspace(0, 1, 1001)
        vals = [h_function(x) for x in xs]
        assert all(b > a for a, b in zip(vals, vals[1:]))
