import numpy as np
import pytest

from src.errors import ShapeError
from src.tensor import SeededRng, as_tensor, check_shape, clamp, matmul, rng_normal, rng_uniform, sign


def naive_matmul(a, b):
    m, k = a.shape
    _, n = b.shape
    out = np.zeros((m, n))
    for i in range(m):
        for j in range(n):
            total = 0.0
            for t in range(k):
                total += a[i, t] * b[t, j]
            out[i, j] = total
    return out


class TestSign:
    def test_definition(self):
        np.testing.assert_array_equal(sign(np.array([-0.5, 0.0, 2.0])), [-1.0, 0.0, 1.0])

    def test_zero_maps_to_zero(self):
        np.testing.assert_array_equal(sign(np.zeros((3, 4))), np.zeros((3, 4)))

    def test_idempotent(self, rng):
        t = rng.normal((5, 7))
        np.testing.assert_array_equal(sign(sign(t)), sign(t))
        assert set(np.unique(sign(t))) <= {-1.0, 0.0, 1.0}

    def test_rejects_non_finite(self):
        with pytest.raises(FloatingPointError):
            sign(np.array([1.0, np.nan]))


class TestClamp:
    def test_definition(self):
        np.testing.assert_array_equal(clamp(np.array([-0.2, 0.5, 1.3]), 0.0, 1.0), [0.0, 0.5, 1.0])

    def test_wide_bounds_are_identity(self, rng):
        t = rng.normal((4, 4), 0.0, 10.0)
        np.testing.assert_array_equal(clamp(t, -1e300, 1e300), t)

    def test_idempotent(self, rng):
        t = rng.normal((6,), 0.5, 1.0)
        once = clamp(t, 0.0, 1.0)
        np.testing.assert_array_equal(clamp(once, 0.0, 1.0), once)

    def test_inverted_bounds(self):
        with pytest.raises(ValueError):
            clamp(np.zeros(2), 1.0, 0.0)

    def test_input_not_mutated(self):
        t = np.array([-1.0, 2.0])
        clamp(t, 0.0, 1.0)
        np.testing.assert_array_equal(t, [-1.0, 2.0])


class TestMatmul:
    def test_identity(self, rng):
        b = rng.normal((2, 5))
        np.testing.assert_array_equal(matmul(np.eye(2), b), b)

    def test_hand_arithmetic(self):
        np.testing.assert_array_equal(matmul(np.array([[1.0, 2.0], [3.0, 4.0]]), np.ones((2, 1))), [[3.0], [7.0]])

    def test_matches_triple_loop(self, rng):
        a, b = rng.normal((7, 5)), rng.normal((5, 3))
        np.testing.assert_allclose(matmul(a, b), naive_matmul(a, b), rtol=0, atol=1e-12)

    def test_random_sizes_match_triple_loop(self):
        rng = SeededRng(99)
        for _ in range(100):
            m, k, n = (int(v) for v in rng.integers(1, 17, size=3))
            a, b = rng.normal((m, k)), rng.normal((k, n))
            np.testing.assert_allclose(matmul(a, b), naive_matmul(a, b), rtol=0, atol=1e-12)

    def test_inner_mismatch(self):
        with pytest.raises(ShapeError):
            matmul(np.ones((2, 3)), np.ones((2, 3)))

    def test_requires_matrices(self):
        with pytest.raises(ShapeError):
            matmul(np.ones(3), np.ones((3, 1)))


class TestAsTensor:
    def test_float64_contiguous(self):
        t = as_tensor([[1, 2], [3, 4]])
        assert t.dtype == np.float64
        assert t.flags["C_CONTIGUOUS"]

    def test_rejects_inf(self):
        with pytest.raises(FloatingPointError):
            as_tensor([1.0, np.inf])

    def test_check_shape(self):
        check_shape(np.zeros((2, 3)), (2, 3))
        with pytest.raises(ShapeError):
            check_shape(np.zeros((2, 3)), (3, 2))


class TestSeededRng:
    def test_same_seed_same_values(self):
        np.testing.assert_array_equal(SeededRng(5).uniform((10,)), SeededRng(5).uniform((10,)))
        np.testing.assert_array_equal(SeededRng(5).normal((3, 3)), SeededRng(5).normal((3, 3)))

    def test_different_seeds_differ(self):
        assert np.any(SeededRng(5).uniform((10,)) != SeededRng(6).uniform((10,)))

    def test_uniform_range(self, rng):
        values = rng_uniform(rng, (1000,), -2.0, 3.0)
        assert values.min() >= -2.0
        assert values.max() < 3.0

    def test_uniform_mean(self):
        values = SeededRng(2024).uniform((100_000,), 0.0, 1.0)
        assert abs(values.mean() - 0.5) <= 0.01

    def test_invalid_ranges(self, rng):
        with pytest.raises(ValueError):
            rng_uniform(rng, (3,), 1.0, 1.0)
        with pytest.raises(ValueError):
            rng_normal(rng, (3,), 0.0, 0.0)

    def test_seed_must_fit_64_bits(self):
        with pytest.raises(ValueError):
            SeededRng(-1)
        with pytest.raises(ValueError):
            SeededRng(1 << 64)

    def test_spawn_depends_only_on_seed_and_key(self):
        parent = SeededRng(11)
        first = parent.spawn("init").uniform((5,))
        parent.uniform((100,))
        np.testing.assert_array_equal(parent.spawn("init").uniform((5,)), first)
        assert np.any(parent.spawn("shuffle").uniform((5,)) != first)

    def test_permutation(self):
        perm = SeededRng(3).permutation(10)
        assert sorted(perm.tolist()) == list(range(10))
        np.testing.assert_array_equal(perm, SeededRng(3).permutation(10))
