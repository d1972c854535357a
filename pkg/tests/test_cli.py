import math

import pytest

from skewlab import cli
from skewlab.config import CACHE_ENV


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_two(capsys):
    code, out, _ = run(capsys, "spectrum", "--N", "2", "--p", "2", "--k", "0")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "index,eps,kind"
    assert float(row.split(",")[1]) == pytest.approx(1 / (2 * math.pi), rel=1e-15)


def test_spectrum_three_has_zero_mode(capsys):
    code, out, _ = run(capsys, "spectrum", "--N", "3", "--p", "2", "--k", "0")
    kinds = [line.split(",")[2] for line in out.strip().splitlines()[1:]]
    assert code == 0 and kinds == ["pair", "zero"]


def test_non_prime_exit_2(capsys):
    code, _, err = run(capsys, "spectrum", "--N", "4", "--p", "4", "--k", "0")
    assert code == 2 and "prime" in err


def test_numerical_exit_3(capsys, monkeypatch):
    from skewlab import harness
    from skewlab.errors import ResidualTooLarge

    def boom(*a):
        raise ResidualTooLarge("residual 1e-3")

    monkeypatch.setattr(harness, "run_spectrum", boom)
    code, _, err = run(capsys, "spectrum", "--N", "4", "--p", "2", "--k", "0")
    assert code == 3 and "residual" in err


def test_spectrum_to_file(capsys, tmp_path):
    out = tmp_path / "s.csv"
    assert run(capsys, "spectrum", "--N", "5", "--p", "3", "--k", "0.1", "--out", str(out))[0] == 0
    assert out.read_text().startswith("index,eps,kind\n")


def test_hamiltonian_check_oracle(capsys, tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("1.0\n")
    code, out, _ = run(capsys, "hamiltonian-check", str(f), "--oracle")
    assert code == 0 and "oracle.subset_sum_passed: True" in out


def test_hamiltonian_check_zero(capsys, tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("0 0\n")
    code, out, _ = run(capsys, "hamiltonian-check", str(f))
    assert code == 0 and "min_excitation: 0.5" in out


def test_hamiltonian_skip_notice(capsys, tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("1 1 1 1\n")
    code, out, _ = run(capsys, "hamiltonian-check", str(f), "--oracle")
    assert code == 0 and "Fock oracle skipped" in out


def test_hamiltonian_dimension_mismatch(capsys, tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("1\n")
    assert run(capsys, "hamiltonian-check", str(f), "--N", "4")[0] == 2


def test_missing_profile_file(capsys, tmp_path):
    assert run(capsys, "hamiltonian-check", str(tmp_path / "nope"))[0] == 2


def test_scan_missing_key(capsys, tmp_path):
    f = tmp_path / "c.conf"
    f.write_text("N = 16\nprime_limit = 4\n")
    code, _, err = run(capsys, "scan", str(f))
    assert code == 2 and "missing config key: n_k" in err


def test_scan_small_with_env_cache(capsys, tmp_path, monkeypatch):
    cache = tmp_path / "cache"
    monkeypatch.setenv(CACHE_ENV, str(cache))
    args = ("scan", "--N", "32", "--prime-limit", "4", "--n-k", "8", "--eps-max", "5",
            "--eps-count", "401", "--m", "2", "--output-dir", str(tmp_path / "o"))
    code, out, _ = run(capsys, *args)
    assert code == 0 and "cache: 0 hits, 2 misses" in out
    assert len(list(cache.glob("sweep_*.npz"))) == 2
    code, out, _ = run(capsys, *args)
    assert "cache: 2 hits, 0 misses" in out


def test_scan_bad_override(capsys):
    assert run(capsys, "scan", "--m", "40")[0] == 2


def test_zeros(capsys):
    code, out, _ = run(capsys, "zeros", "--m", "3")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "index,ordinate,bracket_width" and len(lines) == 4
    assert float(lines[1].split(",")[1]) == pytest.approx(14.134725, abs=1e-4)


def test_zeros_out_of_range(capsys):
    assert run(capsys, "zeros", "--m", "30")[0] == 2
