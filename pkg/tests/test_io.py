"""CSV and JSON input/output."""
from __future__ import annotations

import numpy as np
import pytest

from eitest.errors import CsvFormatError
from eitest.io import (
    read_event_series,
    read_time_series,
    write_event_series,
    write_time_series,
)
from eitest.series import EventSeries, TimeSeries


class TestTimeSeriesRoundTrip:
    def test_univariate(self, tmp_path):
        path = tmp_path / "x.csv"
        ts = TimeSeries(np.random.default_rng(0).standard_normal(64))
        write_time_series(ts, path)
        back = read_time_series(path)
        assert np.array_equal(back.values, ts.values)

    def test_multivariate(self, tmp_path):
        path = tmp_path / "x.csv"
        ts = TimeSeries(np.random.default_rng(1).standard_normal((32, 3)))
        write_time_series(ts, path)
        back = read_time_series(path)
        assert back.dim == 3
        assert np.array_equal(back.values, ts.values)

    def test_single_column_collapses_to_univariate(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.5\n2.5\n")
        assert read_time_series(path).is_univariate


class TestTimeSeriesErrors:
    def test_bad_number_reports_line(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0\n2.0\noops\n")
        with pytest.raises(CsvFormatError) as err:
            read_time_series(path)
        assert err.value.line_number == 3
        assert str(path) in str(err.value)

    def test_inconsistent_width(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0,2.0\n3.0\n")
        with pytest.raises(CsvFormatError) as err:
            read_time_series(path)
        assert err.value.line_number == 2

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0\nnan\n")
        with pytest.raises(CsvFormatError) as err:
            read_time_series(path)
        assert err.value.line_number == 2

    def test_blank_line_rejected(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0\n\n2.0\n")
        with pytest.raises(CsvFormatError) as err:
            read_time_series(path)
        assert err.value.line_number == 2

    def test_empty_file(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("")
        with pytest.raises(CsvFormatError):
            read_time_series(path)


class TestEventSeriesIo:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "e.csv"
        e = EventSeries([0, 1, 1, 0, 1])
        write_event_series(e, path)
        assert path.read_text() == "0\n1\n1\n0\n1\n"
        back = read_event_series(path)
        assert np.array_equal(back.marks, e.marks)

    @pytest.mark.parametrize("token", ["2", "1.0", "-1", "x", ""])
    def test_bad_mark_reports_line(self, tmp_path, token):
        path = tmp_path / "e.csv"
        path.write_text(f"0\n1\n{token}\n")
        with pytest.raises(CsvFormatError) as err:
            read_event_series(path)
        assert err.value.line_number == 3

    def test_empty_file(self, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("")
        with pytest.raises(CsvFormatError):
            read_event_series(path)
