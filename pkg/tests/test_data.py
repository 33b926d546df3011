import pytest

from pwmjel import (
    MissingColumnError,
    PwmInputError,
    analyze_column,
    jel_confidence_interval,
    jel_test,
    load_csv_column,
    test_column as run_test_column,
    ustat_estimate,
)

SAMPLE = """month,rain,flag
jan,11.2,a
feb,13.9,b
mar,,c
apr,NA,d
may,8.75,e
jun,not-a-number,f
jul,9.5,g
"""


@pytest.fixture
def rain_csv(tmp_path):
    p = tmp_path / "rain.csv"
    p.write_text(SAMPLE)
    return p


def test_load_skips_blank_na_and_junk(rain_csv):
    data = load_csv_column(rain_csv, "rain")
    assert data.name == "rain"
    assert list(data.values) == [11.2, 13.9, 8.75, 9.5]
    assert data.skipped == 3


def test_load_missing_column_lists_fields(rain_csv):
    with pytest.raises(MissingColumnError) as err:
        load_csv_column(rain_csv, "snow")
    msg = str(err.value)
    assert "snow" in msg and "rain" in msg and "month" in msg


def test_load_missing_file(tmp_path):
    with pytest.raises(PwmInputError):
        load_csv_column(tmp_path / "nope.csv", "rain")


def test_load_no_numeric_rows(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("rain\nNA\n\n")
    with pytest.raises(PwmInputError, match="no numeric"):
        load_csv_column(p, "rain")


def test_load_handles_bom(tmp_path):
    p = tmp_path / "bom.csv"
    p.write_bytes(b"\xef\xbb\xbfrain\n1.0\n2.0\n")
    assert list(load_csv_column(p, "rain").values) == [1.0, 2.0]


def test_analyze_column_matches_library(tmp_path):
    p = tmp_path / "x.csv"
    vals = [0.4, 1.7, 0.9, 2.8, 0.2, 1.1, 3.4, 0.7, 1.9, 0.5, 2.2, 1.4]
    p.write_text("x\n" + "\n".join(str(v) for v in vals) + "\n")
    data = load_csv_column(p, "x")
    rows = analyze_column(data, 1, 0.90, ("JEL", "DNEL"))
    by_method = {row.method: row for row in rows}
    ci = jel_confidence_interval(vals, 1, 0.90)
    jel = by_method["JEL"]
    assert jel.error is None
    assert (jel.lower, jel.upper) == (ci.lower, ci.upper)
    assert jel.estimate == pytest.approx(ustat_estimate(vals, 1), rel=1e-12)
    assert jel.length == pytest.approx(ci.length, rel=1e-12)
    assert by_method["DNEL"].error is None


def test_analyze_column_constant_errors_inline(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("c\n" + "2.0\n" * 10)
    data = load_csv_column(p, "c")
    rows = analyze_column(data, 1, 0.95, ("JEL", "AJEL", "DNEL"))
    by_method = {row.method: row for row in rows}
    # degenerate data kills the jackknife methods but DNEL still answers
    assert by_method["JEL"].error is not None
    assert by_method["AJEL"].error is not None
    assert by_method["DNEL"].error is None
    assert by_method["JEL"].lower is None


def test_analyze_bad_method_name(rain_csv):
    data = load_csv_column(rain_csv, "rain")
    with pytest.raises(PwmInputError):
        analyze_column(data, 1, 0.95, ("JEL", "WALD"))


def test_test_column_matches_library(tmp_path):
    p = tmp_path / "x.csv"
    vals = [0.4, 1.7, 0.9, 2.8, 0.2, 1.1, 3.4, 0.7, 1.9, 0.5, 2.2, 1.4]
    p.write_text("x\n" + "\n".join(str(v) for v in vals) + "\n")
    data = load_csv_column(p, "x")
    rows = run_test_column(data, 1, 0.8, 0.05, ("JEL",))
    (row,) = rows
    ref = jel_test(vals, 1, 0.8, alpha=0.05)
    assert row.statistic == pytest.approx(ref.statistic, rel=1e-12)
    assert row.p_value == pytest.approx(ref.p_value, rel=1e-12)
    assert row.reject == ref.reject
    assert row.threshold == pytest.approx(ref.threshold, rel=1e-12)
    assert row.error is None


def test_test_column_inline_errors(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("c\n" + "2.0\n" * 10)
    data = load_csv_column(p, "c")
    rows = run_test_column(data, 1, 0.9, 0.05, ("JEL", "VXL"))
    by_method = {row.method: row for row in rows}
    assert by_method["JEL"].error is not None
    assert by_method["VXL"].error is None
