import numpy as np
import pytest

from opdiv import NumericalEscapeError, synthetic_corpus
from opdiv.experiments import (
    DEFAULT_GENERATORS,
    HenonSweepConfig,
    MixedSegmentationConfig,
    henon_sweep,
    mixed_segmentation,
    mixed_signal,
    texture_matrix,
)
from opdiv.patterns import ImageEmbedding
from opdiv import experiments as experiments_module


TINY_SWEEP = HenonSweepConfig(
    epsilons=(0.0, 1.0), realizations=3, length=1500, seed=1, transient=200
)


class TestHenonSweep:
    def test_default_grid_has_eleven_couplings(self):
        cfg = HenonSweepConfig()
        assert cfg.epsilons == tuple(round(0.1 * k, 1) for k in range(11))
        assert cfg.realizations == 200 and cfg.length == 100_000
        assert (cfg.d, cfg.tau, cfg.b) == (4, 1, 0.3)

    def test_shapes_and_stats(self):
        result = henon_sweep(TINY_SWEEP)
        assert set(result.values) == set(DEFAULT_GENERATORS)
        assert result.values["log"].shape == (2, 3)
        rows = result.stats_rows("log")
        assert [row["epsilon"] for row in rows] == [0.0, 1.0]
        assert rows[0]["q1"] <= rows[0]["median"] <= rows[0]["q3"]
        assert result.completed(0) == 3

    def test_deterministic_in_seed(self):
        a = henon_sweep(TINY_SWEEP)
        b = henon_sweep(TINY_SWEEP)
        for g in DEFAULT_GENERATORS:
            assert np.array_equal(a.values[g], b.values[g])

    def test_workers_do_not_change_results(self):
        serial = henon_sweep(TINY_SWEEP)
        from dataclasses import replace

        parallel = henon_sweep(replace(TINY_SWEEP, workers=4))
        for g in DEFAULT_GENERATORS:
            assert np.array_equal(serial.values[g], parallel.values[g])

    def test_full_coupling_gives_zero_divergence(self):
        result = henon_sweep(TINY_SWEEP)
        for g in DEFAULT_GENERATORS:
            assert result.medians(g)[1] == 0.0

    def test_escaped_realizations_are_redrawn(self, monkeypatch):
        real = experiments_module.henon_coupled
        failing_seeds = set()

        def flaky(params):
            # fail the first attempt of every task to force one redraw each
            if params.seed < TINY_SWEEP.seed + 2 * 3:
                failing_seeds.add(params.seed)
                raise NumericalEscapeError("forced escape", step=0)
            return real(
                type(params)(epsilon=params.epsilon, b=params.b, n=params.n,
                             seed=params.seed, transient=params.transient,
                             form=params.form)
            )

        monkeypatch.setattr(experiments_module, "henon_coupled", flaky)
        result = henon_sweep(TINY_SWEEP)
        assert len(result.redraws) == 6  # every first attempt failed once
        assert result.completed(0) == 3 and result.completed(1) == 3
        # redraw seeds are offset by the total task count, so they never
        # collide with another realization's first attempt
        assert failing_seeds == set(range(TINY_SWEEP.seed, TINY_SWEEP.seed + 6))

    def test_single_dropped_realization_keeps_run_alive(self, monkeypatch):
        real = experiments_module.henon_coupled

        def flaky(params):
            # one task (base seed == cfg.seed) never succeeds
            if params.seed % (2 * 3) == TINY_SWEEP.seed % (2 * 3):
                raise NumericalEscapeError("forced escape", step=0)
            return real(params)

        monkeypatch.setattr(experiments_module, "henon_coupled", flaky)
        from dataclasses import replace

        result = henon_sweep(replace(TINY_SWEEP, max_redraws=3))
        assert result.completed(0) == 2  # the dropped one is reported missing
        assert result.completed(1) == 3
        assert np.isnan(result.values["log"][0]).sum() == 1
        assert result.stats_rows("log")[0]["n"] == 2

    def test_fully_escaping_grid_point_raises(self, monkeypatch):
        def always_escapes(params):
            raise NumericalEscapeError("forced escape", step=0)

        monkeypatch.setattr(experiments_module, "henon_coupled", always_escapes)
        from dataclasses import replace

        with pytest.raises(NumericalEscapeError):
            henon_sweep(replace(TINY_SWEEP, max_redraws=2))


class TestMixedSignals:
    def test_composition(self):
        signal = mixed_signal("noise-logistic", 500, seed=3)
        assert signal.size == 1000
        # logistic half stays in [0, 1], the noise half does not
        assert signal[500:].min() >= 0.0 and signal[500:].max() <= 1.0
        assert signal[:500].min() < 0.0

    def test_cubic_variant(self):
        signal = mixed_signal("cubic-logistic", 400, seed=4)
        assert signal.size == 800
        assert np.abs(signal[:400]).max() <= 2 / np.sqrt(3) + 1e-12

    def test_deterministic(self):
        assert np.array_equal(
            mixed_signal("noise-logistic", 300, seed=5),
            mixed_signal("noise-logistic", 300, seed=5),
        )

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            mixed_signal("other", 100, seed=0)


class TestMixedSegmentation:
    def test_structure_and_determinism(self):
        cfg = MixedSegmentationConfig(
            kinds=("noise-logistic",), realizations=3, segment_length=300, d=3, seed=2
        )
        result = mixed_segmentation(cfg)
        stats = result["noise-logistic"]
        assert stats.profiles["log"].shape == (3, stats.positions.size)
        assert stats.sigma("log").shape == (stats.positions.size,)
        again = mixed_segmentation(cfg)["noise-logistic"]
        assert np.array_equal(stats.profiles["log"], again.profiles["log"])

    def test_peak_near_transition(self):
        cfg = MixedSegmentationConfig(
            kinds=("noise-logistic",), realizations=5, segment_length=500, d=3, seed=6
        )
        stats = mixed_segmentation(cfg)["noise-logistic"]
        for g in DEFAULT_GENERATORS:
            assert abs(stats.mean_profile_argmax_position(g) - 500) <= 50


@pytest.fixture(scope="module")
def small_matrices():
    corpus = synthetic_corpus(shape=(96, 96), seed=0)
    return corpus, texture_matrix(corpus, ImageEmbedding(2, 2))


class TestTextureMatrix:
    def test_symmetry_and_zero_diagonal(self, small_matrices):
        _, matrices = small_matrices
        for matrix in matrices.values():
            assert np.array_equal(matrix.values, matrix.values.T)
            assert (np.diag(matrix.values) == 0.0).all()

    def test_labels_follow_input_order(self, small_matrices):
        corpus, matrices = small_matrices
        assert matrices["log"].labels == tuple(name for name, _ in corpus)

    def test_corpus_is_deterministic(self):
        a = synthetic_corpus(shape=(64, 64), seed=3)
        b = synthetic_corpus(shape=(64, 64), seed=3)
        assert all(na == nb and np.array_equal(ia, ib) for (na, ia), (nb, ib) in zip(a, b))

    def test_corpus_families(self):
        names = [name for name, _ in synthetic_corpus(shape=(64, 64), seed=0)]
        families = sorted({name.split("_")[0] for name in names})
        assert families == ["checker", "noise", "stripes"]
        assert len(names) == 6
