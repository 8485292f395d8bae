import math

import numpy as np
import pytest

from src.nn import softmax, softmax_cross_entropy, softmax_cross_entropy_batch


class TestSoftmaxCrossEntropy:
    def test_uniform_logits(self):
        loss, grad = softmax_cross_entropy(np.array([0.0, 0.0]), 0)
        assert loss.value == pytest.approx(math.log(2), abs=1e-15)
        np.testing.assert_allclose(grad, [-0.5, 0.5], rtol=0, atol=1e-15)

    def test_confident_correct(self):
        loss, _ = softmax_cross_entropy(np.array([10.0, -10.0]), 0)
        expected = math.log1p(math.exp(-20.0))
        assert loss.value == pytest.approx(expected, rel=1e-6)
        assert loss.value == pytest.approx(2.06e-9, rel=1e-2)

    def test_large_logits_stay_finite(self):
        loss, grad = softmax_cross_entropy(np.array([1000.0, -1000.0]), 1)
        assert loss.value == pytest.approx(2000.0)
        assert np.all(np.isfinite(grad))

    def test_gradient_sums_to_zero(self, rng):
        for _ in range(50):
            logits = rng.normal((2,), 0.0, 5.0)
            label = int(rng.integers(0, 2))
            loss, grad = softmax_cross_entropy(logits, label)
            assert abs(grad.sum()) <= 1e-12
            assert abs(loss.probabilities.sum() - 1.0) <= 1e-12
            assert np.all((loss.probabilities >= 0) & (loss.probabilities <= 1))

    def test_label_out_of_range(self):
        with pytest.raises(ValueError):
            softmax_cross_entropy(np.zeros(2), 2)
        with pytest.raises(ValueError):
            softmax_cross_entropy(np.zeros(2), -1)

    def test_batch_matches_single(self, rng):
        logits = rng.normal((5, 2))
        labels = np.array([0, 1, 1, 0, 1])
        losses, probabilities, grad = softmax_cross_entropy_batch(logits, labels)
        for i in range(5):
            loss, single_grad = softmax_cross_entropy(logits[i], int(labels[i]))
            assert losses[i] == pytest.approx(loss.value, rel=1e-15, abs=1e-15)
            np.testing.assert_allclose(grad[i], single_grad, rtol=0, atol=1e-15)
            np.testing.assert_allclose(probabilities[i], softmax(logits[i]), rtol=0, atol=1e-15)
