"""Conditional VAE: encode/decode contracts, loss oracles, training, generation."""

import numpy as np
import pytest

from helpers import finite_difference_grads, max_relative_error
from loadgen.cvae import (
    Checkpoint,
    ConditionalVae,
    CvaeConfig,
    GaussianParams,
    class_sample_conditions,
    draw_generation_randoms,
    generate,
    kl_loss,
    load_checkpoint,
    match_training_conditions,
    recon_loss,
    save_checkpoint,
    total_loss,
    train,
)
from loadgen.cvae.model import reparameterize
from loadgen.cvae.training import step_losses_and_grads
from loadgen.errors import CheckpointFormatError, DimensionError

TINY = CvaeConfig(
    data_dim=6, latent_dim=2, condition_dim=3, encoder_hidden=[8],
    decoder_hidden=[8], beta=2.0, learning_rate=1e-3, batch_size=4, epochs=3,
    seed=11,
)


def tiny_model(seed=11):
    return ConditionalVae.create(TINY.model_copy(update={"seed": seed}))


def zero_heads(model):
    for net in (model.encoder, model.decoder):
        net.mean_head.weights[:] = 0.0
        net.logvar_head.weights[:] = 0.0
    return model


class TestEncodeDecode:
    def test_encode_is_deterministic(self):
        m = tiny_model()
        x = np.random.default_rng(0).normal(size=(2, 6))
        c = np.random.default_rng(1).normal(size=(2, 3))
        a, b = m.encode(x, c), m.encode(x, c)
        assert np.array_equal(a.mean, b.mean)
        assert np.array_equal(a.log_var, b.log_var)

    def test_wrong_input_length_raises(self):
        m = tiny_model()
        with pytest.raises(DimensionError):
            m.encode(np.zeros((1, 5)), np.zeros((1, 3)))

    def test_zero_weight_heads_give_bias_exactly(self):
        m = zero_heads(tiny_model())
        m.encoder.mean_head.bias[:] = [0.25, -1.5]
        m.encoder.logvar_head.bias[:] = [0.5, 0.125]
        p = m.encode(np.random.default_rng(2).normal(size=(3, 6)), np.zeros((3, 3)))
        assert np.array_equal(p.mean, np.tile([0.25, -1.5], (3, 1)))
        assert np.array_equal(p.log_var, np.tile([0.5, 0.125], (3, 1)))

    def test_decode_mirrors_encode(self):
        m = tiny_model()
        z = np.random.default_rng(3).normal(size=(2, 2))
        c = np.zeros((2, 3))
        a, b = m.decode(z, c), m.decode(z, c)
        assert np.array_equal(a.mean, b.mean)
        with pytest.raises(DimensionError):
            m.decode(np.zeros((1, 3)), np.zeros((1, 3)))

    def test_decode_zero_weight_heads(self):
        m = zero_heads(tiny_model())
        m.decoder.mean_head.bias[:] = np.arange(6, dtype=float)
        p = m.decode(np.ones((2, 2)), np.zeros((2, 3)))
        assert np.array_equal(p.mean, np.tile(np.arange(6.0), (2, 1)))


class TestReparameterize:
    def test_zero_eps_returns_mean(self):
        g = GaussianParams(mean=np.array([[1.0, -2.0]]), log_var=np.array([[0.3, 1.1]]))
        assert np.array_equal(reparameterize(g, np.zeros((1, 2))), g.mean)

    def test_standard_params_return_eps(self):
        eps = np.random.default_rng(4).normal(size=(3, 2))
        g = GaussianParams(mean=np.zeros((3, 2)), log_var=np.zeros((3, 2)))
        assert np.array_equal(reparameterize(g, eps), eps)

    def test_elementwise_formula(self):
        g = GaussianParams(
            mean=np.array([[1.0, 2.0]]),
            log_var=np.log(np.array([[0.25, 4.0]])),  # std 0.5, 2
        )
        z = reparameterize(g, np.array([[2.0, -1.0]]))
        assert np.allclose(z, [[2.0, 0.0]], atol=1e-12)

    def test_length_mismatch(self):
        g = GaussianParams(mean=np.zeros((1, 2)), log_var=np.zeros((1, 2)))
        with pytest.raises(DimensionError):
            reparameterize(g, np.zeros((1, 3)))

    def test_sample_statistics_match_params(self):
        # 1e5 draws: mean within 4*sigma/sqrt(n), variance within 5%.
        n = 100_000
        mean = np.array([0.7, -1.2, 3.0])
        std = np.array([0.5, 1.5, 0.1])
        g = GaussianParams(mean=np.tile(mean, (n, 1)), log_var=np.tile(2 * np.log(std), (n, 1)))
        eps = np.random.default_rng(5).standard_normal((n, 3))
        z = reparameterize(g, eps)
        for j in range(3):
            assert abs(z[:, j].mean() - mean[j]) < 4 * std[j] / np.sqrt(n)
            assert z[:, j].var() == pytest.approx(std[j] ** 2, rel=0.05)


def mc_kl(mean, log_var, n=1_000_000, seed=0):
    """Monte-Carlo estimate of KL(q || N(0,1)) with its standard error."""
    rng = np.random.default_rng(seed)
    std = np.exp(0.5 * log_var)
    z = mean + std * rng.standard_normal((n, mean.size))
    log_q = -0.5 * (((z - mean) / std) ** 2 + log_var + np.log(2 * np.pi))
    log_p = -0.5 * (z**2 + np.log(2 * np.pi))
    diff = (log_q - log_p).sum(axis=1)
    return diff.mean(), diff.std(ddof=1) / np.sqrt(n)


class TestLosses:
    def test_kl_zero_for_standard_posterior(self):
        g = GaussianParams(mean=np.zeros((4, 3)), log_var=np.zeros((4, 3)))
        assert kl_loss(g) == 0.0

    def test_kl_unit_mean_case(self):
        g = GaussianParams(mean=np.array([[1.0]]), log_var=np.array([[0.0]]))
        assert kl_loss(g) == pytest.approx(0.5, abs=1e-15)

    def test_kl_sigma_two_matches_monte_carlo(self):
        mean = np.array([0.0])
        log_var = np.log(np.array([4.0]))
        closed = kl_loss(GaussianParams(mean=mean[None], log_var=log_var[None]))
        assert closed == pytest.approx(0.5 * (4 - np.log(4) - 1), abs=1e-12)
        estimate, stderr = mc_kl(mean, log_var, n=1_000_000, seed=6)
        assert abs(closed - estimate) < 4 * stderr

    def test_recon_zero_residual_unit_sigma(self):
        x = np.random.default_rng(7).normal(size=(3, 4))
        out = GaussianParams(mean=x.copy(), log_var=np.zeros_like(x))
        assert recon_loss(x, out) == 0.0

    def test_recon_unit_residual(self):
        out = GaussianParams(mean=np.array([[0.0]]), log_var=np.array([[0.0]]))
        assert recon_loss(np.array([[1.0]]), out) == pytest.approx(0.5, abs=1e-15)

    def test_recon_matches_independent_log_density(self):
        from scipy.stats import norm

        x = np.array([[0.0]])
        out = GaussianParams(mean=np.array([[0.0]]), log_var=np.log(np.array([[4.0]])))
        expected = -norm.logpdf(0.0, loc=0.0, scale=2.0) - 0.5 * np.log(2 * np.pi)
        assert recon_loss(x, out) == pytest.approx(0.5 * np.log(4), abs=1e-12)
        assert recon_loss(x, out) == pytest.approx(expected, abs=1e-12)

    def test_recon_minimized_at_data(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=(5, 6))
        log_var = rng.normal(size=(5, 6))
        base = recon_loss(x, GaussianParams(mean=x.copy(), log_var=log_var))
        for _ in range(20):
            shifted = x + rng.normal(scale=0.5, size=x.shape)
            assert recon_loss(x, GaussianParams(mean=shifted, log_var=log_var)) >= base

    def test_total_loss_cases(self):
        assert total_loss(2.0, 3.0, 1.0) == 5.0
        assert total_loss(0.0, 3.25, 8.5) == 3.25
        assert total_loss(2.0, 3.0, 8.5) == 20.0
        with pytest.raises(ValueError):
            total_loss(1.0, 1.0, 0.0)

    def test_kl_closed_form_vs_monte_carlo_many_pairs(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            mean = rng.uniform(-2, 2, size=2)
            log_var = rng.uniform(-2, 2, size=2)
            g = GaussianParams(mean=mean[None], log_var=log_var[None])
            estimate, stderr = mc_kl(mean, log_var, n=200_000, seed=int(rng.integers(1 << 30)))
            assert abs(kl_loss(g) - estimate) < 4 * stderr


class TestStepGradients:
    def test_training_step_matches_finite_differences(self):
        model = tiny_model(seed=13)
        rng = np.random.default_rng(14)
        x = rng.normal(size=(3, 6))
        c = rng.normal(size=(3, 3))
        eps = rng.standard_normal((3, 2))

        _, _, analytic = step_losses_and_grads(model, x, c, eps)

        def loss():
            posterior = model.encode(x, c)
            z = reparameterize(posterior, eps)
            out = model.decode(z, c)
            return total_loss(kl_loss(posterior), recon_loss(x, out), model.config.beta)

        numeric = finite_difference_grads(loss, model.parameters())
        assert max_relative_error(analytic, numeric) < 1e-4


class TestTrainLoop:
    def make_data(self, n=32, seed=15):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(n, 6))
        c = match_training_conditions(
            rng.integers(1, 13, size=n).astype(float), rng.uniform(0, 1, size=n)
        )
        return x, c

    def test_zero_epochs_returns_initialization(self):
        x, c = self.make_data()
        config = TINY.model_copy(update={"epochs": 0})
        result = train(x, c, x[:8], c[:8], config)
        reference = ConditionalVae.create(config)
        for a, b in zip(result.model.parameters(), reference.parameters()):
            assert np.array_equal(a, b)
        assert result.history == []

    def test_same_seed_is_bit_identical(self):
        x, c = self.make_data()
        r1 = train(x, c, x[:8], c[:8], TINY)
        r2 = train(x, c, x[:8], c[:8], TINY)
        for a, b in zip(r1.model.parameters(), r2.model.parameters()):
            assert np.array_equal(a, b)
        assert [e.train_total for e in r1.history] == [e.train_total for e in r2.history]

    def test_loss_decreases_on_learnable_data(self):
        rng = np.random.default_rng(16)
        base = rng.normal(size=6)
        x = base + 0.05 * rng.normal(size=(64, 6))
        c = match_training_conditions(np.full(64, 6.0), np.linspace(0, 1, 64))
        config = TINY.model_copy(update={"epochs": 30, "learning_rate": 3e-3})
        result = train(x, c, x[:16], c[:16], config)
        assert result.history[-1].train_total < result.history[0].train_total


class TestGenerate:
    def test_noise_off_equals_decoder_mean_for_fixed_latents(self):
        model = tiny_model(seed=17)
        conditions = match_training_conditions(np.array([4.0, 7.0]), np.array([0.2, 0.9]))
        out = generate(model, conditions, noise=False, seed=99)
        z, _ = draw_generation_randoms(99, 2, 2, 6, with_noise=False)
        expected = model.decode(z, conditions).mean
        assert np.array_equal(out, expected)

    def test_same_seed_same_batch(self):
        model = tiny_model(seed=18)
        conditions = class_sample_conditions(4.0, "small", 5, seed=1)
        a = generate(model, conditions, noise=True, seed=3)
        b = generate(model, conditions, noise=True, seed=3)
        assert np.array_equal(a, b)

    def test_zero_weight_decoder_heads_give_bias(self):
        model = zero_heads(tiny_model(seed=19))
        model.decoder.mean_head.bias[:] = np.arange(6, dtype=float)
        conditions = match_training_conditions(np.array([1.0]), np.array([0.5]))
        out = generate(model, conditions, noise=False, seed=0)
        assert np.array_equal(out, np.arange(6.0)[None, :])

    def test_noisy_minus_noisefree_is_scaled_eps(self):
        model = tiny_model(seed=20)
        conditions = match_training_conditions(
            np.array([3.0, 9.0, 12.0]), np.array([0.1, 0.5, 1.0])
        )
        noisy = generate(model, conditions, noise=True, seed=77)
        clean = generate(model, conditions, noise=False, seed=77)
        z, eps = draw_generation_randoms(77, 3, 2, 6, with_noise=True)
        std = model.decode(z, conditions).std
        assert np.allclose(noisy - clean, eps * std, atol=1e-12)

    def test_empty_conditions_rejected(self):
        model = tiny_model()
        with pytest.raises(DimensionError):
            generate(model, np.zeros((0, 3)), noise=True, seed=0)

    def test_decode_chunk_size_does_not_change_output(self, monkeypatch):
        # Per-sample seed streams make the internal batching invisible.
        import loadgen.cvae.sampling as sampling

        model = tiny_model(seed=21)
        conditions = match_training_conditions(
            np.arange(1, 13, dtype=float), np.linspace(0, 1, 12)
        )
        full = generate(model, conditions, noise=True, seed=8)
        monkeypatch.setattr(sampling, "_DECODE_CHUNK", 5)
        chunked = generate(model, conditions, noise=True, seed=8)
        assert np.array_equal(full, chunked)


class TestConditionBuilders:
    def test_match_training_copies_composition(self):
        months = np.array([1.0, 1.0, 2.0, 5.0, 5.0, 5.0, 12.0, 12.0, 12.0, 12.0])
        ranks = np.linspace(0, 1, 10)
        conditions = match_training_conditions(months, ranks)
        assert conditions.shape == (10, 3)
        angle = 2 * np.pi * months / 12
        assert np.allclose(conditions[:, 0], np.sin(angle))
        assert np.allclose(conditions[:, 1], np.cos(angle))
        assert np.array_equal(conditions[:, 2], ranks)

    def test_class_ranges(self):
        small = class_sample_conditions(4.0, "small", 200, seed=2)
        large = class_sample_conditions(4.0, "large", 200, seed=2)
        assert np.all((small[:, 2] >= 0.0) & (small[:, 2] <= 0.3))
        assert np.all((large[:, 2] >= 0.7) & (large[:, 2] <= 1.0))

    def test_unknown_class_rejected(self):
        with pytest.raises(ValueError):
            class_sample_conditions(4.0, "huge", 10, seed=0)


class TestCheckpoint:
    def test_round_trip_preserves_generation_bit_exactly(self, tmp_path):
        x = np.random.default_rng(21).normal(size=(32, 6))
        c = match_training_conditions(
            np.random.default_rng(22).integers(1, 13, 32).astype(float),
            np.random.default_rng(23).uniform(0, 1, 32),
        )
        result = train(x, c, x[:8], c[:8], TINY.model_copy(update={"epochs": 2}))
        checkpoint = Checkpoint(config=TINY, model=result.model, scale_kw=100.0,
                                history=result.history)
        before = generate(result.model, c, noise=True, seed=5)
        path = tmp_path / "ckpt.json"
        save_checkpoint(path, checkpoint)
        loaded = load_checkpoint(path)
        after = generate(loaded.model, c, noise=True, seed=5)
        assert np.array_equal(before, after)
        assert loaded.scale_kw == 100.0
        assert len(loaded.history) == 2
        assert loaded.history[0].train_total == result.history[0].train_total

    def test_version_mismatch_fails_loudly(self, tmp_path):
        import json

        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"format_version": 999}))
        with pytest.raises(CheckpointFormatError, match="999"):
            load_checkpoint(path)

    def test_unreadable_checkpoint_fails(self, tmp_path):
        with pytest.raises(CheckpointFormatError):
            load_checkpoint(tmp_path / "missing.json")
