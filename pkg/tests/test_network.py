import math

import numpy as np
import pytest

from minewarn.data import Sample
from minewarn.genome import chromosome_length, decode, encode
from minewarn.network import (NetworkParams, NetworkShape, evaluate, forward,
                              gradient, hidden_layer_size, mse_from_sse,
                              predict_scores, sse_loss, tansig, tansig_prime)
from minewarn.seeding import named_rng


def _tiny_params():
    return NetworkParams(
        input_weights=np.array([[0.5], [-0.25]]),
        hidden_bias=np.array([0.1, -0.2]),
        output_weights=np.array([[0.3, -0.4]]),
        output_bias=np.array([0.05]),
    )


def _constant_net(value):
    """A one-input network that outputs ``value`` for every input."""
    return NetworkParams(
        input_weights=np.zeros((1, 1)),
        hidden_bias=np.zeros(1),
        output_weights=np.zeros((1, 1)),
        output_bias=np.array([value]),
    )


class TestSizing:
    def test_standard_configuration(self):
        assert hidden_layer_size(19, 1, adjustment=1) == 11

    @pytest.mark.parametrize("n,m,a,expected", [
        (4, 2, 1, 4),
        (4, 2, 10, 13),
        (3, 2, 2, 4),   # the half-sum is floored before the adjustment
    ])
    def test_floor_then_add(self, n, m, a, expected):
        assert hidden_layer_size(n, m, adjustment=a) == expected

    @pytest.mark.parametrize("a", [0, 11, -1])
    def test_adjustment_outside_1_to_10_rejected(self, a):
        with pytest.raises(ValueError, match="adjustment"):
            hidden_layer_size(19, 1, adjustment=a)

    def test_zero_layer_sizes_rejected(self):
        with pytest.raises(ValueError):
            hidden_layer_size(0, 1)

    def test_shape_sized_constructor(self):
        shape = NetworkShape.sized(19, 1, adjustment=1)
        assert (shape.n_inputs, shape.n_hidden, shape.n_outputs) == (19, 11, 1)

    def test_default_shape_is_the_19_11_1_model(self):
        shape = NetworkShape()
        assert (shape.n_inputs, shape.n_hidden, shape.n_outputs) == (19, 11, 1)


class TestTansig:
    def test_matches_logistic_identity(self):
        for z in (-3.0, -0.5, 0.0, 0.7, 2.5):
            by_formula = 2.0 / (1.0 + math.exp(-2.0 * z)) - 1.0
            assert float(tansig(z)) == pytest.approx(by_formula, rel=0, abs=1e-15)

    def test_range_and_antisymmetry(self):
        z = np.linspace(-20, 20, 401)
        a = tansig(z)
        assert np.all(a >= -1.0) and np.all(a <= 1.0)
        np.testing.assert_allclose(tansig(-z), -a, rtol=0, atol=1e-15)

    def test_derivative_identity(self):
        a = tansig(np.linspace(-4, 4, 81))
        np.testing.assert_allclose(tansig_prime(a), 1.0 - a * a, rtol=0)


class TestForward:
    def test_frozen_scalar_oracle(self):
        # values recomputed by hand from 2 / (1 + exp(-2z)) - 1
        hidden, output = forward(_tiny_params(), np.array([0.8]))
        assert hidden[0] == pytest.approx(0.4621171572600098, abs=1e-15)
        assert hidden[1] == pytest.approx(-0.3799489622552249, abs=1e-15)
        assert output[0] == pytest.approx(0.3406147320800929, abs=1e-15)

    def test_frozen_sse_oracle(self):
        sample = Sample(np.array([0.8]), 0.9)
        assert sse_loss(_tiny_params(), [sample]) == pytest.approx(
            0.3129118779658263, abs=1e-15
        )

    def test_predict_scores_shape(self):
        scores = predict_scores(_tiny_params(), np.array([[0.8], [0.1], [-0.3]]))
        assert scores.shape == (3, 1)

    def test_output_is_affine_in_hidden_activations(self):
        params = _tiny_params()
        hidden, output = forward(params, np.array([0.8]))
        manual = params.output_weights @ hidden + params.output_bias
        np.testing.assert_allclose(output, manual, rtol=0, atol=1e-15)

    def test_wrong_input_length_rejected(self):
        with pytest.raises(ValueError, match="features"):
            forward(_tiny_params(), np.array([0.8, 0.2]))
        with pytest.raises(ValueError, match="columns"):
            predict_scores(_tiny_params(), np.zeros((2, 3)))

    def test_mse_from_sse(self):
        assert mse_from_sse(6.0, 3, 1) == 2.0
        assert mse_from_sse(12.0, 3, 2) == 2.0


class TestParamsValidation:
    def test_mismatched_bias_length_rejected(self):
        with pytest.raises(ValueError, match="inconsistent"):
            NetworkParams(
                input_weights=np.zeros((2, 1)),
                hidden_bias=np.zeros(3),
                output_weights=np.zeros((1, 2)),
                output_bias=np.zeros(1),
            )

    def test_shape_property(self):
        assert _tiny_params().shape == NetworkShape(1, 2, 1)

    def test_zeros_factory(self):
        shape = NetworkShape(3, 4, 2)
        params = NetworkParams.zeros(shape)
        assert params.shape == shape
        assert not params.input_weights.any()


class TestGradient:
    def _random_case(self, rng):
        n = int(rng.integers(1, 6))
        q = int(rng.integers(1, 6))
        m = int(rng.integers(1, 6))
        shape = NetworkShape(n, q, m)
        genes = rng.uniform(-1, 1, size=chromosome_length(shape))
        params = decode(genes, shape)
        data = [Sample(rng.uniform(-1, 1, size=n), float(rng.uniform(0, 1)))
                for _ in range(int(rng.integers(1, 8)))]
        return params, data

    def _fd_gradient(self, params, data, step=1e-6):
        genes = encode(params)
        shape = params.shape
        out = np.empty_like(genes)
        for i in range(genes.size):
            up = genes.copy()
            up[i] += step
            down = genes.copy()
            down[i] -= step
            out[i] = (sse_loss(decode(up, shape), data)
                      - sse_loss(decode(down, shape), data)) / (2 * step)
        return out

    def test_matches_central_differences(self):
        rng = named_rng(7, "test-gradient")
        worst = 0.0
        for _ in range(20):
            params, data = self._random_case(rng)
            analytic = encode(gradient(params, data))
            fd = self._fd_gradient(params, data)
            denom = np.maximum(np.abs(fd), 1e-3)
            worst = max(worst, float(np.max(np.abs(analytic - fd) / denom)))
        assert worst < 1e-4

    def test_zero_residual_means_zero_gradient(self):
        params = _tiny_params()
        _, output = forward(params, np.array([0.8]))
        data = [Sample(np.array([0.8]), float(output[0]))]
        grad = gradient(params, data)
        assert np.abs(encode(grad)).max() < 1e-14

    def test_feature_width_mismatch_rejected(self):
        with pytest.raises(ValueError, match="features"):
            gradient(_tiny_params(), [Sample(np.array([0.1, 0.2]), 0.5)])


class TestEvaluate:
    def test_perfect_predictions(self):
        params = _tiny_params()
        _, output = forward(params, np.array([0.8]))
        data = [Sample(np.array([0.8]), float(output[0]))]
        metrics = evaluate(params, data)
        assert metrics.mse == pytest.approx(0.0, abs=1e-30)
        assert metrics.level_accuracy == 1.0

    def test_level_accuracy_counts_band_agreement(self):
        # prediction 0.55 shares the middle band with 0.45 but not with 0.79
        params = _constant_net(0.55)
        data = [Sample(np.zeros(1), 0.45), Sample(np.zeros(1), 0.79)]
        metrics = evaluate(params, data)
        assert metrics.level_accuracy == 0.5
        assert metrics.per_sample_abs_error == pytest.approx((0.10, 0.24))

    def test_mse_definition(self):
        params = _constant_net(0.5)
        data = [Sample(np.zeros(1), 0.3), Sample(np.zeros(1), 0.9)]
        metrics = evaluate(params, data)
        assert metrics.mse == pytest.approx((0.04 + 0.16) / 2, abs=1e-15)

    def test_empty_sample_list_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            evaluate(_tiny_params(), [])
