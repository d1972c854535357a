import json

import numpy as np
import pytest

from skewlab import harness
from skewlab.config import CACHE_ENV, REQUIRED_KEYS, build_config, load_config, parse_text, read_config_text
from skewlab.errors import ConfigError, DimensionMismatch, NotEnoughPeaks

SMALL = {
    "N": "32", "prime_limit": "4", "n_k": "8", "delta": "auto", "eps_min": "0",
    "eps_max": "2", "eps_count": "201", "n_bins": "20", "prominence_min": "0", "m": "3",
}


class TestConfig:
    def test_bundled_default(self):
        cfg = load_config()
        assert (cfg.N, cfg.prime_limit, cfg.n_k, cfg.delta) == (256, 8, 128, "auto")

    def test_parse_comments(self):
        assert parse_text("# c\nN = 4  # trailing\n\n m=2") == {"N": "4", "m": "2"}

    def test_bad_line(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_text("N 4")

    @pytest.mark.parametrize("key", REQUIRED_KEYS)
    def test_missing_key_named(self, key):
        values = {k: v for k, v in SMALL.items() if k != key}
        with pytest.raises(ConfigError, match=f"missing config key: {key}"):
            build_config(values)

    @pytest.mark.parametrize("key,value", [("delta", "-1"), ("m", "26"), ("eps_max", "-1"), ("prime_limit", "40")])
    def test_invalid_value(self, key, value):
        with pytest.raises(ConfigError):
            build_config({**SMALL, key: value})

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="colour"):
            build_config({**SMALL, "colour": "red"})

    def test_env_cache_override(self, monkeypatch, tmp_path):
        monkeypatch.setenv(CACHE_ENV, str(tmp_path))
        assert build_config({**SMALL, "cache_dir": "elsewhere"}).cache_dir == str(tmp_path)

    def test_default_text_lists_every_required_key(self):
        assert set(REQUIRED_KEYS) <= set(parse_text(read_config_text()))


class TestHamiltonianCheck:
    def test_single_bond(self):
        r = harness.run_hamiltonian_check([1.0], oracle=True)
        assert r["min_excitation"] == pytest.approx(np.sqrt(0.5), abs=1e-12)
        assert r["oracle"]["subset_sum_passed"]

    def test_zero_profile(self):
        r = harness.run_hamiltonian_check([0.0, 0.0])
        np.testing.assert_allclose(r["quasi"], [0.5] * 3, atol=1e-14)

    def test_skip_notice(self):
        r = harness.run_hamiltonian_check([1.0, 0.5, 0.2, 0.1], oracle=True)
        assert r["oracle"] is None and "skipped" in r["notice"]
        assert "notice:" in harness.format_hamiltonian_report(r)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            harness.run_hamiltonian_check([1.0], N=3)


class TestScan:
    def test_outputs_and_cache(self, tmp_path):
        cfg = build_config({**SMALL, "cache_dir": str(tmp_path / "c"), "output_dir": str(tmp_path / "o")})
        first = harness.run_scan(cfg)
        assert first.cache_misses == 2 and first.cache_hits == 0
        names = sorted(p.split("/")[-1] for p in first.files)
        assert names == sorted(["dos_p2.csv", "dos_p3.csv", "spectral_p2.csv", "spectral_p3.csv",
                                "spectral_product.csv", "peaks.csv", "zeros.csv", "comparison.csv", "summary.json"])
        snapshot = {f: open(f, "rb").read() for f in first.files}
        second = harness.run_scan(cfg)
        assert second.cache_hits == 2 and second.cache_misses == 0
        for f in second.files:
            assert open(f, "rb").read() == snapshot[f]
        summary = json.loads((tmp_path / "o" / "summary.json").read_text())
        assert summary["m"] <= summary["m_requested"] == 3

    def test_no_peaks_is_reported(self, tmp_path):
        cfg = build_config({**SMALL, "N": "16", "output_dir": str(tmp_path)})
        with pytest.raises(NotEnoughPeaks, match="no peaks"):
            harness.run_scan(cfg)

    def test_cache_file_matches_fresh_sweep(self, tmp_path):
        cache = harness.SweepCache(tmp_path)
        a = cache.sweep(12, 3, 4)
        b = cache.sweep(12, 3, 4)
        assert cache.hits == 1 and a.digest == b.digest
        np.testing.assert_array_equal(a.eps, b.eps)
