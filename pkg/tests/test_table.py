import random

import pytest

from _support import random_table
from tableinsights.errors import (
    DuplicateColumnName,
    MissingYColumns,
    NonNumericCell,
    RaggedRows,
    TooFewRows,
    ValidationError,
)
from tableinsights.table import (
    ChartKind,
    DataTable,
    TableContext,
    YColumn,
    detect_shape,
    most_recent_index,
    normalize_subject,
    parse_csv,
    serialize_csv,
    x_range_label,
)


class TestParseCsv:
    def test_cheese_fixture(self, cheese_csv):
        t = parse_csv(cheese_csv)
        assert t.x_name == "Year"
        assert t.x_values == ("1960", "2021", "2022")
        assert t.y_columns[0].name == "Market cap"
        assert t.y_columns[0].values == (14.1, 76.1, 81.2)

    def test_minimal_two_rows(self):
        t = parse_csv("A,B\na,1\nb,2")
        assert t.n_rows == 2

    def test_non_numeric_cell_reports_column_and_row(self):
        with pytest.raises(NonNumericCell) as err:
            parse_csv("A,B\na,1\nb,x")
        assert err.value.column == "B"
        assert err.value.row == 2

    def test_ragged_rows(self):
        with pytest.raises(RaggedRows) as err:
            parse_csv("A,B\na,1\nb")
        assert err.value.row == 2

    def test_too_few_rows(self):
        with pytest.raises(TooFewRows):
            parse_csv("A,B\na,1")

    def test_duplicate_column(self):
        with pytest.raises(DuplicateColumnName):
            parse_csv("A,B,B\na,1,2\nb,3,4")

    def test_no_y_columns(self):
        with pytest.raises(MissingYColumns):
            parse_csv("A\na\nb")

    def test_headerless_synthesizes_names(self):
        t = parse_csv("a,1\nb,2", header=False)
        assert t.x_name == "X"
        assert t.y_columns[0].name == "Y1"

    def test_rejects_locale_formats(self):
        for bad in ("1,5", "1_000", "nan", "inf", "0x10"):
            with pytest.raises(NonNumericCell):
                parse_csv(f'A,B\na,1\nb,"{bad}"')

    def test_accepts_bytes(self):
        t = parse_csv(b"A,B\na,1\nb,2")
        assert t.n_rows == 2

    def test_quoted_fields(self):
        t = parse_csv('A,"Market cap"\na,1\n"b,c",2')
        assert t.y_columns[0].name == "Market cap"
        assert t.x_values == ("a", "b,c")


class TestRoundTrip:
    def test_serialize_parse_identity_seeded(self):
        rng = random.Random(42)
        for _ in range(200):
            table, _ = random_table(rng)
            assert parse_csv(serialize_csv(table)) == table


class TestValidation:
    def test_nonfinite_rejected(self):
        with pytest.raises(NonNumericCell):
            DataTable("X", ("a", "b"), (YColumn("Y", (1.0, float("nan"))),))

    def test_single_row_rejected(self):
        with pytest.raises(TooFewRows):
            DataTable("X", ("a",), (YColumn("Y", (1.0,)),))


class TestDetectShape:
    def test_years_monotonic(self):
        t = parse_csv("Year,V\n1960,1\n2021,2\n2022,3")
        shape = detect_shape(t)
        assert shape.is_time_series and not shape.is_multi_column

    def test_words_not_time_series(self):
        t = parse_csv("Fruit,V\napples,1\npears,2")
        assert not detect_shape(t).is_time_series

    def test_descending_years_are_time_series(self):
        t = parse_csv("Year,V\n2022,1\n2021,2\n1960,3")
        assert detect_shape(t).is_time_series

    def test_non_monotonic_years_are_not(self):
        t = parse_csv("Year,V\n2020,1\n2022,2\n2021,3")
        assert not detect_shape(t).is_time_series

    def test_duplicate_years_are_not(self):
        t = parse_csv("Year,V\n2020,1\n2020,2")
        assert not detect_shape(t).is_time_series

    def test_iso_dates(self):
        t = parse_csv("Day,V\n2020-01-02,1\n2020-02-01,2")
        assert detect_shape(t).is_time_series

    def test_multi_column_flag(self):
        t = parse_csv("X,A,B\na,1,2\nb,3,4")
        assert detect_shape(t).is_multi_column

    def test_pure_in_y_permutation(self):
        rng = random.Random(3)
        for _ in range(50):
            table, _ = random_table(rng)
            shuffled = DataTable(
                table.x_name, table.x_values,
                tuple(reversed(table.y_columns)),
            )
            assert detect_shape(shuffled).is_time_series == detect_shape(table).is_time_series


class TestRangeLabel:
    def test_time_series_span(self):
        t = parse_csv("Year,V\n1960,1\n2021,2\n2022,3")
        assert x_range_label(t) == "1960-2022"

    def test_categorical_all(self):
        t = parse_csv("Fruit,V\napples,1\npears,2")
        assert x_range_label(t) == "ALL Fruit"

    def test_duplicate_years_fall_back_to_all(self):
        t = parse_csv("Year,V\n2020,1\n2020,2")
        assert x_range_label(t) == "ALL Year"


class TestMostRecent:
    def test_descending_years_newest_first(self):
        t = parse_csv("Year,V\n2022,1\n2021,2\n1960,3")
        assert most_recent_index(t) == 0

    def test_ascending_newest_last(self):
        t = parse_csv("Year,V\n1960,1\n2022,2")
        assert most_recent_index(t) == 1

    def test_categorical_none(self):
        t = parse_csv("Fruit,V\napples,1\npears,2")
        assert most_recent_index(t) is None


class TestContext:
    def test_empty_title_rejected(self):
        with pytest.raises(ValidationError):
            TableContext(title="   ")

    def test_chart_kinds(self):
        assert {k.value for k in ChartKind} == {"line", "column", "bar", "pie", "none"}

    def test_normalize_subject(self):
        assert normalize_subject("Economy") == "economy"
        assert normalize_subject("astrology") == "other"
