"""Dataset loading, validation, projection arithmetic, and round-trips."""

import io
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rac import (
    AnnualSeries,
    MarketDataset,
    ProjectionInputs,
    load_bundled_projection,
    load_dataset,
    load_projection,
    project,
    projected_consumption,
    serialize_dataset,
    with_final_consumption,
)
from rac.errors import MissingYear, NonPositiveValue, SchemaError

HEADER = "year,consumption_per_capita,equity_gross_return,riskfree_gross_return"


def csv_text(rows):
    return HEADER + "\n" + "\n".join(rows) + "\n"


def simple_rows(years, consumption=None):
    consumption = consumption or [100.0 + i for i in range(len(years))]
    return [f"{y},{c},1.05,1.01" for y, c in zip(years, consumption)]


# -- loading and validation ---------------------------------------------------

def test_bundled_span(bundled):
    assert len(bundled) == 90
    assert bundled.start_year == 1889
    assert bundled.end_year == 1978
    assert bundled.consumption.values[-2:] == (3340.0, 3450.0)


def test_load_from_file_like_matches_path(bundled):
    text = serialize_dataset(bundled).decode("utf-8")
    again = load_dataset(io.StringIO(text))
    assert again == bundled
    as_bytes = load_dataset(io.BytesIO(text.encode("utf-8")))
    assert as_bytes == bundled


def test_missing_year():
    years = [y for y in range(1889, 1910) if y != 1900]
    with pytest.raises(MissingYear):
        load_dataset(io.StringIO(csv_text(simple_rows(years))))


def test_duplicate_year():
    with pytest.raises(MissingYear):
        load_dataset(io.StringIO(csv_text(simple_rows([1889, 1890, 1890, 1891]))))


def test_bad_header():
    text = "a,b,c,d\n1889,100,1.05,1.01\n1890,101,1.05,1.01\n"
    with pytest.raises(SchemaError):
        load_dataset(io.StringIO(text))


def test_wrong_cell_count():
    text = csv_text(["1889,100,1.05,1.01", "1890,101,1.05"])
    with pytest.raises(SchemaError):
        load_dataset(io.StringIO(text))


def test_non_numeric_cell():
    text = csv_text(["1889,100,1.05,1.01", "1890,oops,1.05,1.01"])
    with pytest.raises(SchemaError):
        load_dataset(io.StringIO(text))


def test_non_positive_consumption():
    text = csv_text(["1889,100,1.05,1.01", "1890,-5,1.05,1.01"])
    with pytest.raises(NonPositiveValue):
        load_dataset(io.StringIO(text))


def test_non_positive_return():
    text = csv_text(["1889,100,1.05,1.01", "1890,101,0,1.01"])
    with pytest.raises(NonPositiveValue):
        load_dataset(io.StringIO(text))


def test_single_data_row():
    with pytest.raises(SchemaError):
        load_dataset(io.StringIO(csv_text(simple_rows([1889]))))


def test_empty_file():
    with pytest.raises(SchemaError):
        load_dataset(io.StringIO(""))


def test_annual_series_validation():
    with pytest.raises(SchemaError):
        AnnualSeries(1900, (1.0,))
    with pytest.raises(NonPositiveValue):
        AnnualSeries(1900, (1.0, 0.0))


def test_mismatched_spans_rejected():
    a = AnnualSeries(1900, (1.0, 2.0, 3.0))
    b = AnnualSeries(1900, (1.0, 2.0))
    with pytest.raises(SchemaError):
        MarketDataset(consumption=a, equity_return=b, riskfree_return=b)


# -- round-trips --------------------------------------------------------------

def test_round_trip_bundled(bundled):
    again = load_dataset(io.BytesIO(serialize_dataset(bundled)))
    assert again.consumption.values == bundled.consumption.values
    assert again.equity_return.values == bundled.equity_return.values
    assert again.riskfree_return.values == bundled.riskfree_return.values
    assert again.start_year == bundled.start_year


positive_floats = st.floats(
    min_value=1e-3, max_value=1e9, allow_nan=False, allow_infinity=False
)


@given(
    start=st.integers(min_value=1800, max_value=2100),
    cons=st.lists(positive_floats, min_size=2, max_size=10),
    data=st.data(),
)
def test_round_trip_random(start, cons, data):
    n = len(cons)
    returns = data.draw(st.lists(positive_floats, min_size=n, max_size=n))
    d = MarketDataset(
        consumption=AnnualSeries(start, tuple(cons)),
        equity_return=AnnualSeries(start, tuple(returns)),
        riskfree_return=AnnualSeries(start, tuple(returns)),
    )
    assert load_dataset(io.BytesIO(serialize_dataset(d))) == d


# -- projection ---------------------------------------------------------------

def test_projected_consumption_reference():
    assert abs(projected_consumption(515.4, 613.7, 150, 219441872) - 3430) <= 1.0


def test_projected_consumption_unit_case():
    assert projected_consumption(1, 0, 100, 1e9) == 1.0


def test_projected_consumption_hand_case():
    assert abs(projected_consumption(515.4, 613.7, 100, 219441872) - 5145) <= 1.0


def test_projected_consumption_rejects_bad_inputs():
    with pytest.raises(NonPositiveValue):
        projected_consumption(-1, 613.7, 150, 219441872)
    with pytest.raises(NonPositiveValue):
        projected_consumption(0, 0, 150, 219441872)
    with pytest.raises(NonPositiveValue):
        projected_consumption(515.4, 613.7, 0, 219441872)
    with pytest.raises(NonPositiveValue):
        projected_consumption(515.4, 613.7, 150, 0)


@given(
    nond=st.floats(min_value=1e-3, max_value=1e4),
    serv=st.floats(min_value=1e-3, max_value=1e4),
    defl=st.floats(min_value=1.0, max_value=1e3),
    pop=st.floats(min_value=1e3, max_value=1e10),
)
def test_projected_consumption_population_homogeneity(nond, serv, defl, pop):
    one = projected_consumption(nond, serv, defl, pop)
    half = projected_consumption(nond, serv, defl, 2.0 * pop)
    assert math.isclose(half, one / 2.0, rel_tol=1e-14)


def test_projection_inputs_strictly_positive():
    with pytest.raises(NonPositiveValue):
        ProjectionInputs(0.0, 613.7, 150.0, 219441872.0)


def test_load_projection_bundled():
    inp = load_bundled_projection()
    assert inp == ProjectionInputs(515.4, 613.7, 150.0, 219441872.0)
    assert abs(project(inp) - 3430) <= 1.0


def test_load_projection_bad_header():
    with pytest.raises(SchemaError):
        load_projection(io.StringIO("a,b,c,d\n1,2,3,4\n"))


def test_load_projection_extra_row():
    text = "nondurables_bn,services_bn,gnp_deflator,population\n1,2,3,4\n5,6,7,8\n"
    with pytest.raises(SchemaError):
        load_projection(io.StringIO(text))


# -- final-year replacement ---------------------------------------------------

def test_with_final_consumption_reference(bundled):
    swapped = with_final_consumption(bundled, 3430.0)
    assert swapped.consumption.values[-1] == 3430.0
    assert swapped.consumption.values[:-1] == bundled.consumption.values[:-1]
    assert swapped.equity_return.values == bundled.equity_return.values
    assert swapped.riskfree_return.values == bundled.riskfree_return.values


def test_with_final_consumption_identity(bundled):
    assert with_final_consumption(bundled, bundled.consumption.values[-1]) == bundled


def test_with_final_consumption_rejects_nonpositive(bundled):
    with pytest.raises(NonPositiveValue):
        with_final_consumption(bundled, -1.0)


def test_with_final_consumption_changes_exactly_one_number(bundled):
    swapped = with_final_consumption(bundled, 9999.0)
    changed = 0
    for series in ("consumption", "equity_return", "riskfree_return"):
        old = getattr(bundled, series).values
        new = getattr(swapped, series).values
        changed += sum(1 for a, b in zip(old, new) if a != b)
    assert changed == 1
