import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from cosetsum.catalog import dd_dual, deslauriers_dubuc
from cosetsum.cli import benchmark_rows, main
from cosetsum.constructors import coset_sum
from cosetsum.dyadic import Dyadic
from cosetsum.formats import read_grid, write_grid
from cosetsum.mask import mask_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def gen(capsys, tmp_path, name, *argv):
    path = tmp_path / name
    assert run(capsys, "gen", *argv, "-o", str(path))[0] == 0
    return path


def test_gen_cosetsum_matches_library(capsys):
    code, out, _ = run(capsys, "gen", "--family", "dd-dual", "--order", "4", "--op", "cosetsum", "--dim", "2")
    assert code == 0
    mask = mask_from_json(json.loads(out))
    assert mask == coset_sum(dd_dual(2), 2)
    assert mask[(0, 0)] == Dyadic(1064, 9)


def test_gen_custom_gamma(capsys, tmp_path):
    gamma = tmp_path / "gamma.json"
    gamma.write_text("[[1, 0], [0, 1], [1, -1]]")
    code, out, _ = run(capsys, "gen", "--family", "dd", "--order", "4", "--op", "cosetsum", "--gamma", str(gamma))
    assert code == 0
    assert mask_from_json(json.loads(out)) == coset_sum(deslauriers_dubuc(2), 2, [(0, 0), (1, 0), (0, 1), (1, -1)])


def test_gen_bad_gamma(capsys, tmp_path):
    gamma = tmp_path / "gamma.json"
    gamma.write_text("[[1, 0], [3, 0], [1, 1]]")
    code, _, err = run(capsys, "gen", "--family", "haar", "--op", "cosetsum", "--gamma", str(gamma))
    assert code == 2 and "coset" in err


def test_gen_tensor_and_hybrid(capsys):
    code, out, _ = run(capsys, "gen", "--family", "haar", "--op", "tensor", "--dim", "3")
    assert code == 0 and len(json.loads(out)["entries"]) == 8
    code, out, _ = run(capsys, "gen", "--family", "spline1", "--op", "hybrid", "--blocks", "coset:2,tensor:1")
    assert code == 0 and json.loads(out)["dim"] == 3
    assert run(capsys, "gen", "--family", "haar", "--op", "hybrid")[0] == 2


def test_gen_float_mode(capsys):
    code, out, _ = run(capsys, "gen", "--family", "dd", "--order", "2", "--mode", "float")
    data = json.loads(out)
    assert data["mode"] == "float" and all("value" in e for e in data["entries"])


def test_filter_json_roundtrip(capsys, tmp_path):
    path = gen(capsys, tmp_path, "f.json", "--family", "dd", "--order", "6", "--op", "cosetsum", "--dim", "3")
    mask = mask_from_json(json.loads(path.read_text()))
    assert mask == coset_sum(deslauriers_dubuc(3), 3)


def test_verify_exit_codes(capsys, tmp_path):
    u = gen(capsys, tmp_path, "u.json", "--family", "dd", "--order", "4", "--op", "cosetsum")
    s = gen(capsys, tmp_path, "s.json", "--family", "dd-dual", "--order", "4", "--op", "cosetsum")
    code, out, _ = run(capsys, "verify", "--check", "interpolatory", "--mask", str(u))
    assert code == 0 and json.loads(out)["pass"] is True
    code, out, _ = run(capsys, "verify", "--check", "interpolatory", "--mask", str(s))
    cert = json.loads(out)
    assert code == 1 and cert["pass"] is False and cert["witness"] is not None
    assert run(capsys, "verify", "--check", "biorthogonal", "--mask", str(u), "--dual", str(s))[0] == 0
    code, out, _ = run(capsys, "verify", "--check", "accuracy", "--mask", str(u), "--expect", "4")
    assert code == 0 and json.loads(out)["accuracy"] == 4
    assert run(capsys, "verify", "--check", "accuracy", "--mask", str(u), "--expect", "5")[0] == 1
    assert run(capsys, "verify", "--check", "biorthogonal", "--mask", str(u))[0] == 2
    assert run(capsys, "verify", "--check", "interpolatory", "--mask", str(tmp_path / "nope.json"))[0] == 2


def test_verify_certificate_keys(capsys, tmp_path):
    u = gen(capsys, tmp_path, "u.json", "--family", "dd", "--order", "4")
    _, out, _ = run(capsys, "verify", "--check", "interpolatory", "--mask", str(u))
    assert set(json.loads(out)) == {"check", "pass", "residual", "witness"}


def test_verify_muep_bundle(capsys, tmp_path):
    for method in ("coset", "tensor"):
        bundle = gen(capsys, tmp_path, f"{method}.json", "--family", "dd", "--order", "4", "--bundle", method)
        code, out, _ = run(capsys, "verify", "--check", "muep", "--system", str(bundle))
        assert code == 0 and json.loads(out)["residual"] == "0"
    data = json.loads(bundle.read_text())
    data["duals"]["1,1"]["entries"][0]["num"] = "12345"
    bundle.write_text(json.dumps(data))
    assert run(capsys, "verify", "--check", "muep", "--system", str(bundle))[0] == 1


def test_verify_moments(capsys, tmp_path):
    bundle = json.loads(gen(capsys, tmp_path, "b.json", "--family", "dd", "--order", "4", "--bundle", "coset").read_text())
    wavelet = tmp_path / "t.json"
    wavelet.write_text(json.dumps(bundle["wavelets"]["1,0"]))
    code, out, _ = run(capsys, "verify", "--check", "moments", "--mask", str(wavelet), "--expect", "4")
    assert code == 0 and json.loads(out)["moments"] == 4


@pytest.mark.parametrize("method,family", [("coset", "dd"), ("tensor", "dd"), ("tensor", "daub2")])
def test_transform_roundtrip(capsys, tmp_path, method, family):
    y = np.random.default_rng(4).standard_normal((32, 32))
    write_grid(tmp_path / "in.bin", y)
    flags = ["--method", method, "--family", family, "--order", "4", "--levels", "3"]
    code, out, _ = run(capsys, "transform", "decompose", *flags, "-i", str(tmp_path / "in.bin"), "-o", str(tmp_path / "pyr"))
    assert code == 0 and json.loads(out)["ops_per_sample"] > 0
    code, _, _ = run(capsys, "transform", "reconstruct", *flags, "-i", str(tmp_path / "pyr"), "-o", str(tmp_path / "out.bin"))
    assert code == 0
    r = read_grid(tmp_path / "out.bin")
    assert np.abs(r - y).max() / np.abs(y).max() <= 1e-10


def test_transform_exact_mode(capsys, tmp_path):
    y = np.random.default_rng(4).integers(-50, 50, (8, 8)) / 16.0
    write_grid(tmp_path / "in.bin", y)
    flags = ["--family", "dd", "--order", "2", "--mode", "exact", "--levels", "2"]
    assert run(capsys, "transform", "decompose", *flags, "-i", str(tmp_path / "in.bin"), "-o", str(tmp_path / "p"))[0] == 0
    assert run(capsys, "transform", "reconstruct", *flags, "-i", str(tmp_path / "p"), "-o", str(tmp_path / "o.bin"))[0] == 0
    assert np.array_equal(read_grid(tmp_path / "o.bin"), y)


def test_transform_system_mismatch(capsys, tmp_path):
    write_grid(tmp_path / "in.bin", np.zeros((16, 16)))
    run(capsys, "transform", "decompose", "--family", "dd", "--order", "4", "-i", str(tmp_path / "in.bin"), "-o", str(tmp_path / "p"))
    code, _, err = run(capsys, "transform", "reconstruct", "--family", "dd", "--order", "6", "-i", str(tmp_path / "p"), "-o", str(tmp_path / "o.bin"))
    assert code == 2 and "system-id" in err
    code, _, _ = run(capsys, "transform", "reconstruct", "--method", "tensor", "--family", "dd", "--order", "4", "-i", str(tmp_path / "p"), "-o", str(tmp_path / "o.bin"))
    assert code == 2


def test_transform_usage_errors(capsys, tmp_path):
    write_grid(tmp_path / "in.bin", np.zeros((12, 12)))
    base = ["transform", "decompose", "-i", str(tmp_path / "in.bin"), "-o", str(tmp_path / "p")]
    assert run(capsys, *base, "--family", "haar")[0] == 2  # not interpolatory
    assert run(capsys, *base, "--family", "dd", "--order", "4", "--levels", "3")[0] == 2  # 12 not divisible by 8
    assert run(capsys, *base, "--family", "dd", "--order", "3")[0] == 2


def test_benchmark_csv(capsys, tmp_path):
    out = tmp_path / "b.csv"
    code, _, _ = run(capsys, "benchmark", "--dim", "2,3", "--order", "4", "--size", "16", "-o", str(out))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert list(rows[0]) == ["method", "n", "k", "ops_per_sample", "seconds"]
    assert {(r["method"], r["n"]) for r in rows} == {(m, n) for m in ("coset", "tensor") for n in ("2", "3")}
    assert all(r["k"] == "2" and float(r["ops_per_sample"]) > 0 for r in rows)


def test_benchmark_deterministic_counts():
    a = benchmark_rows(["coset"], [2], [4], size=16, seed=1)
    b = benchmark_rows(["coset"], [2], [4], size=16, seed=2)
    assert a[0][3] == b[0][3]


def test_benchmark_limits(capsys):
    assert run(capsys, "benchmark", "--dim", "4", "--size", "64", "--max-samples", "1000")[0] == 2
    assert run(capsys, "benchmark", "--order", "3")[0] == 2


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--check", "bogus"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cosetsum", "gen", "--family", "haar", "--op", "cosetsum"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dim"] == 2
