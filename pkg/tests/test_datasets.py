import numpy as np
import pytest

from mofwe.datasets import Dataset, as_values, builtin_dataset, load_csv, resolve_dataset
from mofwe.errors import DataError

CHECKSUMS = {
    "aarset": "81d36512f8875fca6de12a89b5c81d6271654077a1847091a443f6e2b63dc051",
    "pumps": "d473bfcb8f3cd8958c17becb41d8788cea4a908279c1f1d782b6308fc21dbaba",
}


@pytest.mark.parametrize("name", sorted(CHECKSUMS))
def test_checksums_pinned(name):
    assert builtin_dataset(name).checksum() == CHECKSUMS[name]


def test_aarset_summary():
    d = builtin_dataset("aarset")
    x = d.array()
    assert d.n == 50 and x.min() == 0.1 and x.max() == 86
    assert np.count_nonzero(x == 18) == 5 and np.count_nonzero(x == 85) == 5


def test_pumps_summary():
    d = builtin_dataset("pumps")
    assert d.n == 23
    assert d.values[0] == 2.160 and d.values[-1] == 5.320
    assert d.sorted()[0] == 0.062


def test_unknown_builtin():
    with pytest.raises(DataError, match="aarset"):
        builtin_dataset("nope")


class TestLoadCsv:
    def test_comments_blank_lines_crlf(self, tmp_path):
        p = tmp_path / "times.csv"
        p.write_bytes(b"# header\r\n1.5\r\n\r\n2\r\n  3.25  \r\n")
        d = load_csv(p)
        assert d.label == "times" and d.values == (1.5, 2.0, 3.25)

    def test_round_trip_checksum(self, tmp_path):
        ref = builtin_dataset("pumps")
        p = tmp_path / "pumps.csv"
        p.write_text(ref.canonical_text())
        assert load_csv(p).checksum() == ref.checksum()

    @pytest.mark.parametrize("body, where", [("1\n-1\n", ":2:"), ("1\n\nabc\n", ":3:"), ("0\n", ":1:"), ("nan\n", ":1:")])
    def test_bad_lines_report_line_number(self, tmp_path, body, where):
        p = tmp_path / "bad.csv"
        p.write_text(body)
        with pytest.raises(DataError, match=where):
            load_csv(p)

    def test_empty(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("# nothing\n\n")
        with pytest.raises(DataError, match="no data"):
            load_csv(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(tmp_path / "absent.csv")


def test_resolve(tmp_path):
    assert resolve_dataset("aarset") is builtin_dataset("aarset")
    p = tmp_path / "x.csv"
    p.write_text("4\n5\n")
    assert resolve_dataset(str(p)).values == (4.0, 5.0)
    with pytest.raises(DataError):
        resolve_dataset(str(tmp_path / "missing.csv"))


def test_dataset_validation():
    with pytest.raises(DataError):
        Dataset("d", ())
    with pytest.raises(DataError):
        Dataset("d", (1.0, -2.0))
    with pytest.raises(DataError):
        Dataset("d", ("a",))
    with pytest.raises(DataError):
        as_values([1.0, np.inf])
    assert as_values(builtin_dataset("pumps")).shape == (23,)
