import numpy as np
import pytest

from opdiv import (
    DivergenceMatrix,
    DivergenceProfile,
    FormatError,
    ImageMatrix,
    InvalidInputError,
    SeriesEmbedding,
    divergence_profile,
    load_image,
    load_image_dir,
    load_results,
    load_series,
    pattern_distribution,
    save_pgm,
    save_results,
    white_noise,
)


class TestLoadSeries:
    def test_single_column(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("1\n2\n3\n")
        assert load_series(path).tolist() == [1.0, 2.0, 3.0]

    def test_column_selection_and_header(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("t,v\n0,0.5\n1,0.7\n")
        assert load_series(path, column=1, skip_header=True).tolist() == [0.5, 0.7]

    def test_error_names_row(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("1\n2\nabc\n4\n")
        with pytest.raises(FormatError, match="row 3"):
            load_series(path)

    def test_error_names_missing_column(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("1,2\n3\n")
        with pytest.raises(FormatError, match="row 2"):
            load_series(path, column=1)

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("1\ninf\n")
        with pytest.raises(FormatError, match="row 2"):
            load_series(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("\n\n")
        with pytest.raises(FormatError, match="no data"):
            load_series(path)

    def test_custom_delimiter(self, tmp_path):
        path = tmp_path / "s.tsv"
        path.write_text("1\t9\n2\t8\n")
        assert load_series(path, column=1, delimiter="\t").tolist() == [9.0, 8.0]

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("1\n\n2\n")
        assert load_series(path).tolist() == [1.0, 2.0]

    def test_quoted_cells(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text('"1.5",a\n"2.5",b\n')
        assert load_series(path).tolist() == [1.5, 2.5]


class TestPgm:
    def test_ascii_roundtrip(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_text("P2\n2 2\n255\n0 10\n20 30\n")
        image = load_image(path)
        assert image.pixels.tolist() == [[0, 10], [20, 30]]
        assert image.width == 2 and image.height == 2
        assert image.bits == 8

    def test_binary_and_ascii_agree(self, tmp_path, rng):
        pixels = rng.integers(0, 256, size=(13, 9))
        p5 = save_pgm(pixels, tmp_path / "b.pgm", binary=True)
        p2 = save_pgm(pixels, tmp_path / "a.pgm", binary=False)
        assert np.array_equal(load_image(p5).pixels, load_image(p2).pixels)
        assert np.array_equal(load_image(p5).pixels, pixels)

    def test_comments_in_header(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_text("P2\n# a comment\n2 1\n# another\n255\n7 8\n")
        assert load_image(path).pixels.tolist() == [[7, 8]]

    def test_full_scale_image(self, tmp_path, rng):
        pixels = rng.integers(0, 256, size=(640, 640))
        path = save_pgm(pixels, tmp_path / "big.pgm")
        image = load_image(path)
        assert (image.height, image.width) == (640, 640)

    def test_wrong_magic(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_text("P3\n1 1\n255\n0\n")
        with pytest.raises(FormatError, match="magic"):
            load_image(path)

    def test_truncated_binary_payload(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_bytes(b"P5\n4 4\n255\n" + bytes(7))
        with pytest.raises(FormatError, match="truncated"):
            load_image(path)

    def test_truncated_ascii_payload(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_text("P2\n2 2\n255\n1 2 3\n")
        with pytest.raises(FormatError, match="truncated"):
            load_image(path)

    def test_sixteen_bit_rejected(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_text("P2\n1 1\n65535\n1000\n")
        with pytest.raises(FormatError, match="65535"):
            load_image(path)

    def test_value_above_maxval(self, tmp_path):
        path = tmp_path / "img.pgm"
        path.write_text("P2\n1 2\n100\n50 120\n")
        with pytest.raises(FormatError, match="maxval"):
            load_image(path)

    def test_image_matrix_validation(self):
        with pytest.raises(InvalidInputError):
            ImageMatrix(pixels=np.array([1, 2, 3]))
        with pytest.raises(InvalidInputError):
            ImageMatrix(pixels=np.array([[300]]), maxval=255)

    def test_load_image_dir_sorted(self, tmp_path, rng):
        for name in ("b", "a", "c"):
            save_pgm(rng.integers(0, 256, size=(4, 4)), tmp_path / f"{name}.pgm")
        names = [name for name, _ in load_image_dir(tmp_path)]
        assert names == ["a", "b", "c"]
        with pytest.raises(FormatError):
            load_image_dir(tmp_path, pattern="*.png")


@pytest.fixture
def distribution(rng):
    return pattern_distribution(rng.integers(0, 24, size=400), 4)


@pytest.fixture
def profile():
    return divergence_profile(white_noise(300, seed=6), SeriesEmbedding(3, 1), "log")


class TestSaveResults:
    def test_distribution_json_roundtrip(self, tmp_path, distribution):
        path = save_results(distribution, tmp_path / "d.json", meta={"d": 4, "tau": 1, "seed": 7})
        loaded = load_results(path)
        assert np.array_equal(loaded.probs, distribution.probs)
        assert loaded.sample_count == distribution.sample_count
        assert loaded.pattern_length == 4
        import json

        doc = json.loads(path.read_text())
        assert doc["d"] == 4 and doc["tau"] == 1 and doc["seed"] == 7

    def test_distribution_csv_roundtrip(self, tmp_path, distribution):
        path = save_results(distribution, tmp_path / "d.csv")
        probs = load_results(path)
        assert np.abs(probs - distribution.probs).max() <= 1e-15

    def test_profile_json_roundtrip(self, tmp_path, profile):
        path = save_results(profile, tmp_path / "p.json")
        loaded = load_results(path)
        assert isinstance(loaded, DivergenceProfile)
        assert np.array_equal(loaded.positions, profile.positions)
        assert np.array_equal(loaded.values, profile.values)
        assert (loaded.g_tag, loaded.d, loaded.tau) == ("log", 3, 1)
        import json

        doc = json.loads(path.read_text())
        assert doc["g"] == "log" and doc["d"] == 3 and doc["tau"] == 1
        assert doc["argmax"] == profile.argmax_position

    def test_profile_csv_roundtrip(self, tmp_path, profile):
        path = save_results(profile, tmp_path / "p.csv")
        positions, values = load_results(path)
        assert np.array_equal(positions, profile.positions)
        assert np.abs(values - profile.values).max() <= 1e-15

    def test_matrix_csv_shape_and_symmetry(self, tmp_path, rng):
        raw = rng.random((6, 6))
        matrix = DivergenceMatrix(values=raw + raw.T, labels=[f"t{i}" for i in range(6)],
                                  g_tag="log")
        np.fill_diagonal(matrix.values, 0.0)
        path = save_results(matrix, tmp_path / "m.csv")
        lines = [ln for ln in path.read_text().splitlines() if ln]
        assert len(lines) == 6
        assert all(len(ln.split(",")) == 6 for ln in lines)
        loaded = load_results(path)
        assert np.array_equal(loaded, loaded.T)
        assert np.abs(loaded - matrix.values).max() <= 1e-15

    def test_matrix_json_roundtrip(self, tmp_path, rng):
        matrix = DivergenceMatrix(values=np.eye(3), labels=("a", "b", "c"), g_tag="exp")
        loaded = load_results(save_results(matrix, tmp_path / "m.json"))
        assert loaded.labels == ("a", "b", "c")
        assert loaded.g_tag == "exp"
        assert np.array_equal(loaded.values, np.eye(3))

    def test_plain_array_saved_as_matrix(self, tmp_path):
        path = save_results(np.ones((2, 2)), tmp_path / "m.csv")
        assert load_results(path).shape == (2, 2)

    def test_format_override(self, tmp_path, distribution):
        path = save_results(distribution, tmp_path / "d.dat", format="json")
        loaded = load_results(path, format="json")
        assert loaded.sample_count == distribution.sample_count

    def test_invalid_format(self, tmp_path, distribution):
        with pytest.raises(InvalidInputError):
            save_results(distribution, tmp_path / "d.xml", format="xml")

    def test_unsupported_object(self, tmp_path):
        with pytest.raises(InvalidInputError):
            save_results({"not": "supported"}, tmp_path / "x.json")

    def test_unknown_json_kind(self, tmp_path):
        path = tmp_path / "weird.json"
        path.write_text('{"kind": "mystery"}')
        with pytest.raises(FormatError):
            load_results(path)
