"""Dense-layer engine: forward cases, gradient oracle, Adam, init."""

import numpy as np
import pytest

from helpers import finite_difference_grads, max_relative_error
from loadgen.errors import DimensionError
from loadgen.nn import (
    AdamState,
    DenseLayer,
    GradientTape,
    adam_step,
    dense_forward,
    init_dense_stack,
    stack_backward,
    stack_forward,
)


def layer(w, b, act):
    return DenseLayer(weights=np.array(w, dtype=float), bias=np.array(b, dtype=float),
                      activation=act)


class TestDenseForward:
    def test_relu_clamps_negatives(self):
        l = layer(np.eye(2), [0, 0], "relu")
        out = dense_forward(l, np.array([[-1.0, 2.0]]))
        assert np.array_equal(out, [[0.0, 2.0]])

    def test_identity_passes_through(self):
        l = layer(np.eye(2), [0, 0], "identity")
        out = dense_forward(l, np.array([[-1.0, 2.0]]))
        assert np.array_equal(out, [[-1.0, 2.0]])

    def test_affine_hand_case(self):
        # [2, 3] . [1, 1] + 0.5 = 5.5
        l = layer([[1.0, 1.0]], [0.5], "identity")
        out = dense_forward(l, np.array([[2.0, 3.0]]))
        assert out.shape == (1, 1)
        assert out[0, 0] == pytest.approx(5.5, abs=1e-15)

    def test_dimension_mismatch_names_shapes(self):
        l = layer(np.eye(2), [0, 0], "relu")
        with pytest.raises(DimensionError, match=r"\(1, 3\).*\(2, 2\)"):
            dense_forward(l, np.ones((1, 3)))

    def test_identity_layer_is_affine(self):
        rng = np.random.default_rng(0)
        l = layer(rng.normal(size=(3, 4)), rng.normal(size=3), "identity")
        x, y = rng.normal(size=(2, 4)), rng.normal(size=(2, 4))
        for alpha in (0.0, 0.25, 0.5, 0.9, 1.0):
            mixed = dense_forward(l, alpha * x + (1 - alpha) * y)
            combo = alpha * dense_forward(l, x) + (1 - alpha) * dense_forward(l, y)
            assert np.allclose(mixed, combo, atol=1e-10)


class TestStackForward:
    def test_empty_stack_is_identity(self):
        x = np.random.default_rng(1).normal(size=(4, 5))
        assert np.array_equal(stack_forward([], x), x)

    def test_single_layer_equals_dense_forward(self):
        rng = np.random.default_rng(2)
        l = layer(rng.normal(size=(3, 5)), rng.normal(size=3), "relu")
        x = rng.normal(size=(4, 5))
        assert np.array_equal(stack_forward([l], x), dense_forward(l, x))

    def test_two_layers_match_manual_composition(self):
        rng = np.random.default_rng(3)
        l1 = layer(rng.normal(size=(6, 4)), rng.normal(size=6), "relu")
        l2 = layer(rng.normal(size=(2, 6)), rng.normal(size=2), "identity")
        x = rng.normal(size=(5, 4))
        expected = dense_forward(l2, dense_forward(l1, x))
        assert np.allclose(stack_forward([l1, l2], x), expected, atol=1e-12)


class TestStackBackward:
    def test_identity_single_layer_grads(self):
        rng = np.random.default_rng(4)
        l = layer(rng.normal(size=(3, 4)), np.zeros(3), "identity")
        x = rng.normal(size=(2, 4))
        g = rng.normal(size=(2, 3))
        tape = GradientTape()
        stack_forward([l], x, tape)
        grads, d_x = stack_backward([l], tape, g)
        assert np.allclose(grads[0].d_weights, g.T @ x, atol=1e-12)
        assert np.allclose(grads[0].d_bias, g.sum(axis=0), atol=1e-12)
        assert np.allclose(d_x, g @ l.weights, atol=1e-12)

    def test_relu_all_negative_preactivations_zero_grads(self):
        l = layer(-np.eye(3), [-1.0, -1.0, -1.0], "relu")
        x = np.abs(np.random.default_rng(5).normal(size=(4, 3))) + 0.1
        tape = GradientTape()
        out = stack_forward([l], x, tape)
        assert np.all(out == 0.0)
        grads, d_x = stack_backward([l], tape, np.ones((4, 3)))
        assert np.all(grads[0].d_weights == 0.0)
        assert np.all(grads[0].d_bias == 0.0)
        assert np.all(d_x == 0.0)

    def test_three_layer_net_matches_finite_differences(self):
        rng = np.random.default_rng(6)
        layers = init_dense_stack([5, 8, 7, 3], ["relu", "relu", "identity"], rng)
        x = rng.normal(size=(6, 5))
        target = rng.normal(size=(6, 3))

        def loss():
            out = stack_forward(layers, x)
            return float(np.sum((out - target) ** 2))

        tape = GradientTape()
        out = stack_forward(layers, x, tape)
        grads, _ = stack_backward(layers, tape, 2.0 * (out - target))
        analytic = []
        for lg in grads:
            analytic.extend([lg.d_weights, lg.d_bias])
        params = []
        for l in layers:
            params.extend([l.weights, l.bias])
        numeric = finite_difference_grads(loss, params)
        assert max_relative_error(analytic, numeric) < 1e-4

    def test_tape_consumed_once(self):
        rng = np.random.default_rng(7)
        layers = init_dense_stack([3, 3], ["identity"], rng)
        tape = GradientTape()
        stack_forward(layers, rng.normal(size=(2, 3)), tape)
        stack_backward(layers, tape, np.ones((2, 3)))
        with pytest.raises(DimensionError):
            stack_backward(layers, tape, np.ones((2, 3)))


class TestAdam:
    def test_zero_grad_leaves_params_unchanged(self):
        params = [np.array([1.0, -2.0]), np.ones((2, 2))]
        before = [p.copy() for p in params]
        state = AdamState.for_params(params, alpha=0.1)
        adam_step(params, [np.zeros_like(p) for p in params], state)
        for p, b in zip(params, before):
            assert np.array_equal(p, b)
        assert state.t == 1

    def test_first_step_is_signed_alpha(self):
        for g in (3.0, -0.004, 1e4):
            params = [np.array([0.0])]
            state = AdamState.for_params(params, alpha=0.1)
            adam_step(params, [np.array([g])], state)
            assert params[0][0] == pytest.approx(-0.1 * np.sign(g), rel=1e-4)

    def test_two_steps_descend_on_quadratic(self):
        w = [np.array([1.0])]
        state = AdamState.for_params(w, alpha=0.1)
        values = [w[0][0]]
        for _ in range(2):
            adam_step(w, [2.0 * w[0]], state)
            values.append(w[0][0])
        assert values[1] < values[0]
        assert values[2] < values[1]

    def test_permutation_invariance(self):
        rng = np.random.default_rng(8)
        params = [rng.normal(size=4), rng.normal(size=3)]
        grads = [rng.normal(size=4), rng.normal(size=3)]
        mirror = [params[1].copy(), params[0].copy()]
        state_a = AdamState.for_params(params, alpha=0.05)
        state_b = AdamState.for_params(mirror, alpha=0.05)
        for _ in range(3):
            adam_step(params, grads, state_a)
            adam_step(mirror, [grads[1], grads[0]], state_b)
        assert np.array_equal(params[0], mirror[1])
        assert np.array_equal(params[1], mirror[0])

    def test_shape_mismatch_raises(self):
        params = [np.zeros(3)]
        state = AdamState.for_params(params, alpha=0.1)
        with pytest.raises(DimensionError):
            adam_step(params, [np.zeros(4)], state)


class TestInit:
    def test_same_seed_is_bit_identical(self):
        a = init_dense_stack([4, 8, 2], ["relu", "identity"], 42)
        b = init_dense_stack([4, 8, 2], ["relu", "identity"], 42)
        for la, lb in zip(a, b):
            assert np.array_equal(la.weights, lb.weights)
            assert np.array_equal(la.bias, lb.bias)

    def test_he_variance_matches_fan_in(self):
        # 800 fan-in, >=1e5 draws: sample variance within 10% of 2/800.
        layers = init_dense_stack([800, 150], ["relu"], 9)
        w = layers[0].weights.ravel()
        assert w.size >= 1e5
        assert np.var(w) == pytest.approx(2.0 / 800.0, rel=0.10)

    def test_biases_are_exactly_zero(self):
        for l in init_dense_stack([4, 5, 6], ["relu", "relu"], 10):
            assert np.all(l.bias == 0.0)

    def test_activation_count_checked(self):
        with pytest.raises(DimensionError):
            init_dense_stack([4, 5, 6], ["relu"], 0)
