import numpy as np
import pytest

from fwflow.data import (
    DenseDataset,
    RatingsDataset,
    gen_lowrank,
    gen_sensing,
    parse_svmlight,
    serialize_svmlight,
)


class TestGenSensing:
    def test_sparsity_count(self):
        _, true_x = gen_sensing(500, 100, 0.1, seed=0)
        assert np.count_nonzero(true_x) == 10

    def test_full_support(self):
        _, true_x = gen_sensing(20, 10, 1.0, seed=0)
        assert np.count_nonzero(true_x) == 10

    def test_determinism(self):
        a, xa = gen_sensing(50, 20, 0.2, noise_sd=0.1, seed=42)
        b, xb = gen_sensing(50, 20, 0.2, noise_sd=0.1, seed=42)
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.labels_or_response, b.labels_or_response)
        np.testing.assert_array_equal(xa, xb)

    def test_noise_envelope(self):
        ds, true_x = gen_sensing(400, 50, 0.1, noise_sd=0.5, seed=7)
        resid = np.linalg.norm(ds.labels_or_response - ds.features @ true_x)
        assert resid <= 4 * 0.5 * np.sqrt(400)

    def test_invalid_sparsity(self):
        with pytest.raises(ValueError):
            gen_sensing(10, 10, 0.0)


class TestGenLowrank:
    def test_full_observation(self):
        ds = gen_lowrank(6, 5, 2, observed_fraction=1.0, seed=0)
        assert len(ds.entries) == 30

    def test_rank_bounds(self):
        with pytest.raises(ValueError):
            gen_lowrank(6, 5, 0, observed_fraction=0.5)
        with pytest.raises(ValueError):
            gen_lowrank(6, 5, 6, observed_fraction=0.5)

    def test_determinism(self):
        a = gen_lowrank(8, 8, 2, 0.4, noise_sd=0.1, seed=3)
        b = gen_lowrank(8, 8, 2, 0.4, noise_sd=0.1, seed=3)
        assert a.entries == b.entries

    def test_no_duplicates_enforced(self):
        with pytest.raises(ValueError):
            RatingsDataset(entries=((0, 0, 1.0), (0, 0, 2.0)), users=2, items=2)


class TestSvmlight:
    def test_hand_parse(self):
        ds = parse_svmlight("1 3:0.5\n-1 1:2")
        np.testing.assert_allclose(ds.features, [[0.0, 0.0, 0.5], [2.0, 0.0, 0.0]])
        np.testing.assert_allclose(ds.labels_or_response, [1.0, -1.0])
        assert ds.kind == "classification"

    def test_zero_one_labels_remapped(self):
        ds = parse_svmlight("0 1:1\n1 1:2")
        np.testing.assert_allclose(ds.labels_or_response, [-1.0, 1.0])

    def test_empty_file(self):
        with pytest.raises(ValueError, match="empty"):
            parse_svmlight("")

    def test_bad_token_line_number(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_svmlight("1 2:a")

    def test_non_ascending_indices(self):
        with pytest.raises(ValueError, match="ascending"):
            parse_svmlight("1 3:1 2:1")

    def test_round_trip(self):
        rng = np.random.default_rng(9)
        X = rng.standard_normal((5, 4))
        X[rng.random((5, 4)) < 0.3] = 0.0
        X[:, -1] = 1.0  # keep the max index stable through the round trip
        y = np.where(rng.standard_normal(5) >= 0, 1.0, -1.0)
        ds = DenseDataset(features=X, labels_or_response=y, kind="classification")
        back = parse_svmlight(serialize_svmlight(ds))
        np.testing.assert_allclose(back.features, ds.features)
        np.testing.assert_allclose(back.labels_or_response, ds.labels_or_response)


class TestDenseDataset:
    def test_label_domain_checked(self):
        with pytest.raises(ValueError):
            DenseDataset(np.ones((2, 2)), [0.5, 1.0], kind="classification")

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            DenseDataset(np.ones((3, 2)), [1.0, -1.0], kind="classification")
