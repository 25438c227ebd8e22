import json
import struct

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import array_shapes, arrays

from cosetsum.catalog import dd_dual, deslauriers_dubuc
from cosetsum.formats import MAGIC, FormatError, read_grid, read_pyramid, write_grid, write_pyramid
from cosetsum.transform import coset_decompose, tensor_decompose


@given(arrays(np.float64, array_shapes(min_dims=1, max_dims=4, max_side=5), elements=st.floats(-1e6, 1e6)))
def test_grid_roundtrip(tmp_path_factory, values):
    path = tmp_path_factory.mktemp("g") / "x.bin"
    write_grid(path, values)
    assert np.array_equal(read_grid(path), values)


def test_grid_header_layout(tmp_path):
    path = tmp_path / "g.bin"
    write_grid(path, np.zeros((3, 5)))
    raw = path.read_bytes()
    assert raw[:4] == MAGIC
    assert struct.unpack_from("<II2Q", raw, 4) == (1, 2, 3, 5)
    assert len(raw) == 12 + 16 + 8 * 15


@pytest.mark.parametrize(
    "mutate",
    [
        lambda b: b"XXXX" + b[4:],
        lambda b: b[:4] + struct.pack("<I", 9) + b[8:],
        lambda b: b[:-8],
        lambda b: b[:10],
        lambda b: b[:8] + struct.pack("<I", 0) + b[12:],
    ],
)
def test_corrupt_grid(tmp_path, mutate):
    path = tmp_path / "g.bin"
    write_grid(path, np.ones((2, 2)))
    path.write_bytes(mutate(path.read_bytes()))
    with pytest.raises(FormatError):
        read_grid(path)


@pytest.mark.parametrize("method", ["coset", "tensor"])
def test_pyramid_directory_roundtrip(tmp_path, method):
    s, u = dd_dual(2).to_float(), deslauriers_dubuc(2).to_float()
    y = np.random.default_rng(0).standard_normal((16, 8))
    decompose = coset_decompose if method == "coset" else tensor_decompose
    p = decompose(y, s, u, 2)
    write_pyramid(tmp_path, p)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["levels"] == 2 and manifest["method"] == method
    assert manifest["system-id"] == p.system_id
    assert manifest["shapes"] == {"coarse": [4, 2], "input": [16, 8]}
    q = read_pyramid(tmp_path)
    assert np.array_equal(q.coarse, p.coarse)
    assert q.detail.keys() == p.detail.keys()
    assert all(np.array_equal(q.detail[k], p.detail[k]) for k in p.detail)
    assert q.aux.keys() == p.aux.keys()


def test_pyramid_missing_band(tmp_path):
    p = coset_decompose(np.zeros((8, 8)), dd_dual(1), deslauriers_dubuc(1), 1)
    write_pyramid(tmp_path, p)
    (tmp_path / "w_0_1,1.bin").unlink()
    with pytest.raises(FormatError):
        read_pyramid(tmp_path)


def test_pyramid_missing_manifest(tmp_path):
    with pytest.raises(FormatError):
        read_pyramid(tmp_path)
