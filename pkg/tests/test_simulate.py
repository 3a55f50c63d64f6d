import numpy as np
import pytest

from opdiv import (
    HenonParams,
    InvalidInputError,
    MapParams,
    NumericalEscapeError,
    SeriesEmbedding,
    cubic,
    encode_series,
    henon_coupled,
    jensen_shannon,
    logistic,
    pattern_distribution,
    white_noise,
)


class TestHenonCoupled:
    def test_driver_subsystem_from_origin(self):
        params = HenonParams(epsilon=0.0, n=2, transient=0,
                             initial_state=(0.0, 0.0, 0.05, 0.05))
        driver, _ = henon_coupled(params)
        assert driver[0] == pytest.approx(1.4)
        # second iterate: 1.4 - 1.4^2 + 0.3 * (previous y1 = 0)
        assert driver[1] == pytest.approx(1.4 - 1.96)

    def test_full_coupling_synchronises_exactly(self):
        params = HenonParams(epsilon=1.0, n=500, transient=0,
                             initial_state=(0.02, -0.03, 0.02, -0.03))
        driver, response = henon_coupled(params)
        assert np.array_equal(driver, response)

    def test_uncoupled_response_is_plain_henon(self):
        params = HenonParams(epsilon=0.0, n=300, transient=0,
                             initial_state=(0.09, 0.01, 0.04, -0.02))
        _, response = henon_coupled(params)
        x1, x2 = 0.04, -0.02
        expected = np.empty(300)
        for k in range(300):
            x1, x2 = 1.4 - x1 * x1 + 0.3 * x2, x1
            expected[k] = x1
        assert np.allclose(response, expected, rtol=0, atol=0)

    def test_literal_form_first_step(self):
        params = HenonParams(epsilon=0.4, n=1, transient=0, form="literal",
                             initial_state=(0.1, 0.0, 0.2, 0.05))
        _, response = henon_coupled(params)
        assert response[0] == pytest.approx(1.4 - (0.4 * 0.1 + 0.6 * 0.2 + 0.3 * 0.05))

    def test_seed_reproducibility(self):
        a = henon_coupled(HenonParams(epsilon=0.3, n=100, seed=5))
        b = henon_coupled(HenonParams(epsilon=0.3, n=100, seed=5))
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_escape_reports_step(self):
        with pytest.raises(NumericalEscapeError) as excinfo:
            henon_coupled(HenonParams(epsilon=0.0, b=10.0, n=100, seed=0, transient=0))
        assert excinfo.value.step is not None

    def test_boundedness_over_random_seeds(self):
        escapes = 0
        for seed in range(40):
            for eps in (0.0, 0.4):
                try:
                    driver, response = henon_coupled(
                        HenonParams(epsilon=eps, n=5000, seed=seed)
                    )
                except NumericalEscapeError:
                    escapes += 1
                    continue
                assert np.abs(driver).max() < 10
                assert np.abs(response).max() < 10
        assert escapes <= 4  # at most 5% of 80 runs

    def test_parameter_validation(self):
        with pytest.raises(InvalidInputError):
            HenonParams(epsilon=1.5, n=10)
        with pytest.raises(InvalidInputError):
            HenonParams(epsilon=0.5, n=0)
        with pytest.raises(InvalidInputError):
            HenonParams(epsilon=0.5, n=10, form="other")
        with pytest.raises(InvalidInputError):
            HenonParams(epsilon=0.5, n=10, initial_state=(1.0, 2.0))

    def test_marginal_distributions_indistinguishable_without_coupling(self):
        # the two uncoupled subsystems share an attractor: same pattern
        # statistics even though the raw series differ
        driver, response = henon_coupled(HenonParams(epsilon=0.0, n=100_000, seed=11))
        assert not np.array_equal(driver, response)
        params = SeriesEmbedding(4, 1)
        p = pattern_distribution(encode_series(driver, params), 4)
        q = pattern_distribution(encode_series(response, params), 4)
        assert jensen_shannon(p, q) < 0.01


class TestLogistic:
    def test_first_iterate(self):
        out = logistic(MapParams(n=1, x0=0.3, transient=0))
        assert out[0] == pytest.approx(0.84)

    def test_fixed_point(self):
        out = logistic(MapParams(n=5, x0=0.75, transient=0))
        assert np.allclose(out, 0.75)

    def test_degenerate_orbit(self):
        out = logistic(MapParams(n=3, x0=0.5, transient=0))
        assert out.tolist() == [1.0, 0.0, 0.0]

    def test_x0_validation(self):
        for x0 in (0.0, 1.0, -0.2, 1.7):
            with pytest.raises(InvalidInputError):
                logistic(MapParams(n=5, x0=x0, transient=0))

    def test_seeded_start_reproducible(self):
        assert np.array_equal(
            logistic(MapParams(n=50, seed=3)), logistic(MapParams(n=50, seed=3))
        )


class TestCubic:
    def test_first_iterate(self):
        out = cubic(MapParams(n=1, x0=0.5, transient=0))
        assert out[0] == pytest.approx(1.125)

    def test_odd_symmetry(self):
        pos = cubic(MapParams(n=200, x0=0.37, transient=0))
        neg = cubic(MapParams(n=200, x0=-0.37, transient=0))
        assert np.array_equal(pos, -neg)

    def test_boundary_orbit(self):
        out = cubic(MapParams(n=4, x0=1.0, transient=0))
        assert (out == 0.0).all()

    def test_x0_validation(self):
        with pytest.raises(InvalidInputError):
            cubic(MapParams(n=5, x0=1.5, transient=0))

    def test_escape(self):
        with pytest.raises(NumericalEscapeError) as excinfo:
            cubic(MapParams(n=50, a=4.0, x0=0.6, transient=0))
        assert excinfo.value.step is not None

    def test_stays_bounded_at_default_amplitude(self):
        out = cubic(MapParams(n=20_000, seed=8))
        assert np.abs(out).max() <= 2 / np.sqrt(3) + 1e-12


class TestWhiteNoise:
    def test_determinism(self):
        assert np.array_equal(white_noise(1000, seed=4), white_noise(1000, seed=4))

    def test_sample_mean(self):
        assert abs(white_noise(1_000_000, seed=0).mean()) < 0.01

    def test_ordinal_distribution_uniform(self):
        series = white_noise(100_000, seed=21)
        dist = pattern_distribution(encode_series(series, SeriesEmbedding(3, 1)), 3)
        assert np.abs(dist.probs - 1 / 6).max() < 0.02

    def test_rejects_non_positive_length(self):
        with pytest.raises(InvalidInputError):
            white_noise(0, seed=1)
