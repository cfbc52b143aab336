import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmclab.errors import ConfigurationError
from cmclab.io import csv_text, fmt, read_csv, read_snapshot, write_csv, write_snapshot
from cmclab.sphere import SphericalGrid, random_field


def test_float_format_roundtrips():
    for v in (0.1, 1 / 3, -2.5e-300, 1e300, np.float64(7.0)):
        assert float(fmt(v)) == float(v)
    assert fmt(3) == "3" and fmt(True) == "1" and fmt("x") == "x"


@given(xs=st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=1, max_size=20))
def test_csv_roundtrip(xs, tmp_path_factory):
    path = tmp_path_factory.mktemp("csv") / "t.csv"
    write_csv(path, ["i", "x"], list(enumerate(xs)))
    header, rows = read_csv(path)
    assert header == ["i", "x"]
    assert [float(r[1]) for r in rows] == xs


def test_csv_text_is_deterministic():
    rows = [(0.1, 2), (3.0, -4)]
    assert csv_text(["a", "b"], rows) == csv_text(["a", "b"], rows) == "a,b\n0.10000000000000001,2\n3,-4\n"


@pytest.mark.parametrize("rep", ["grid", "spectral"])
def test_snapshot_roundtrip(tmp_path, rep):
    g = SphericalGrid(6)
    f = random_field(g, 6, np.random.default_rng(0))
    path = tmp_path / "f.csv"
    write_snapshot(f, path, representation=rep)
    back = read_snapshot(str(path))
    assert back.grid.same_as(g)
    assert np.max(np.abs(back.values - f.values)) < 1e-14


def test_snapshot_errors(tmp_path):
    with pytest.raises(ConfigurationError):
        read_snapshot(str(tmp_path / "missing.csv"))
    bad = tmp_path / "bad.csv"
    bad.write_text("# cmclab-field grid l_max=2 n_lat=3\ni_lat,i_lon,value\n")
    with pytest.raises(ConfigurationError):
        read_snapshot(str(bad))
    bad.write_text("hello\n")
    with pytest.raises(ConfigurationError):
        read_snapshot(str(bad))
    with pytest.raises(ConfigurationError):
        write_snapshot(random_field(SphericalGrid(2), 2, np.random.default_rng(1)), tmp_path / "x", "json")
