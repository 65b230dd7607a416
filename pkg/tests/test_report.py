import io

import pytest

from sdf_outage import report
from sdf_outage.mcsim import OutageEstimate


def test_cells_round_trip():
    assert report.format_cell(None) == ""
    assert report.format_cell(3) == "3"
    assert report.format_cell("ok") == "ok"
    value = 0.1 + 0.2
    assert float(report.format_cell(value)) == value


def test_write_csv():
    stream = io.StringIO()
    report.write_csv(stream, ("a", "b"), [(1.5, None), (2, "x")])
    assert stream.getvalue() == "a,b\n1.5,\n2,x\n"
    with pytest.raises(ValueError):
        report.write_csv(io.StringIO(), ("a", "b"), [(1.0,)])


def test_validation_record_status():
    ok = report.ValidationRecord(10.0, 0.1, OutageEstimate(0.101, 0.001, 10_000))
    assert ok.status == "ok"
    failing = report.ValidationRecord(10.0, 0.1, OutageEstimate(0.11, 0.001, 10_000))
    assert failing.status == "fail"
    assert failing.z_score == pytest.approx(10.0)
    sparse = report.ValidationRecord(10.0, 0.1, OutageEstimate(0.5, 0.1, 10))
    assert sparse.status == "insufficient events"
    assert sparse.row()[-1] == "insufficient events"
