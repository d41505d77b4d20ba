"""Annual market dataset: loading, validation, and the consumption projection.

CSV schema (header required, no missing cells)::

    year,consumption_per_capita,equity_gross_return,riskfree_gross_return

Years must be contiguous. Consumption is real per-capita dollars; the return
columns are gross (1 + rate). The return cell in the row for year t is the
gross return realized from t to t+1, so the final row's returns look one year
past the consumption span. Returns stay aligned this way so that every row is
complete; statistics over returns use all rows.

The bundled reference file is a synthetic reconstruction of the 1889-1978
Mehra-Prescott annual series, built to match the published summary statistics
(mean gross consumption growth about 1.018 with standard deviation about
0.036, mean equity gross return about 1.0698, mean risk-free gross return
about 1.008) and the 1977/1978 per-capita consumption levels 3340 and 3450.
It is not archival data; see tools/make_reference_dataset.py.

Projection inputs CSV (single data row)::

    nondurables_bn,services_bn,gnp_deflator,population

Spending columns are nominal billions, the deflator is an index with base
100, population is a head count.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import MissingYear, NonPositiveValue, SchemaError

_HEADER = ["year", "consumption_per_capita", "equity_gross_return", "riskfree_gross_return"]
_PROJECTION_HEADER = ["nondurables_bn", "services_bn", "gnp_deflator", "population"]

BUNDLED_DATASET = "mehra_prescott_1889_1978.csv"
BUNDLED_PROJECTION = "projection_1978.csv"


@dataclass(frozen=True)
class AnnualSeries:
    """A contiguous annual series of positive values."""

    start_year: int
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) < 2:
            raise SchemaError("annual series needs at least two years")
        if any(v <= 0 for v in self.values):
            raise NonPositiveValue("annual series values must be positive")

    @property
    def years(self) -> range:
        return range(self.start_year, self.start_year + len(self.values))

    @property
    def end_year(self) -> int:
        return self.start_year + len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class MarketDataset:
    """Consumption, equity return, and risk-free return series on one span."""

    consumption: AnnualSeries
    equity_return: AnnualSeries
    riskfree_return: AnnualSeries

    def __post_init__(self):
        spans = {
            (s.start_year, len(s))
            for s in (self.consumption, self.equity_return, self.riskfree_return)
        }
        if len(spans) != 1:
            raise SchemaError("the three series must cover the same years")

    @property
    def start_year(self) -> int:
        return self.consumption.start_year

    @property
    def end_year(self) -> int:
        return self.consumption.end_year

    def __len__(self) -> int:
        return len(self.consumption)


@dataclass(frozen=True)
class ProjectionInputs:
    """Nominal spending aggregates used to project a consumption level."""

    nominal_nondurables_bn: float
    nominal_services_bn: float
    gnp_deflator: float
    population: float

    def __post_init__(self):
        for name in ("nominal_nondurables_bn", "nominal_services_bn", "gnp_deflator", "population"):
            if getattr(self, name) <= 0:
                raise NonPositiveValue(f"{name} must be positive")


def _rows_from(source) -> list[dict]:
    """Read CSV rows from a path or a file-like object."""
    if hasattr(source, "read"):
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    else:
        text = Path(source).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row]
    if not rows:
        raise SchemaError("empty file")
    return rows


def load_dataset(source) -> MarketDataset:
    """Parse and validate a market-data CSV.

    `source` is a filesystem path or a file-like object (text or bytes).

    Raises SchemaError for a bad header, wrong cell count, or non-numeric
    cells; MissingYear when the year column is not contiguous; and
    NonPositiveValue for non-positive consumption or returns.
    """
    rows = _rows_from(source)
    header = [h.strip() for h in rows[0]]
    if header != _HEADER:
        raise SchemaError(f"expected header {','.join(_HEADER)!r}, got {','.join(header)!r}")
    if len(rows) < 3:
        raise SchemaError("need at least two data rows")

    years: list[int] = []
    cons: list[float] = []
    equity: list[float] = []
    riskfree: list[float] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 4:
            raise SchemaError(f"line {lineno}: expected 4 cells, got {len(row)}")
        try:
            year = int(row[0])
            values = [float(cell) for cell in row[1:]]
        except ValueError as exc:
            raise SchemaError(f"line {lineno}: non-numeric cell ({exc})") from None
        if years and year != years[-1] + 1:
            raise MissingYear(
                f"line {lineno}: year {year} does not follow {years[-1]} (series must be contiguous)"
            )
        if any(v <= 0 for v in values):
            raise NonPositiveValue(f"line {lineno}: non-positive value in year {year}")
        years.append(year)
        cons.append(values[0])
        equity.append(values[1])
        riskfree.append(values[2])

    start = years[0]
    return MarketDataset(
        consumption=AnnualSeries(start, tuple(cons)),
        equity_return=AnnualSeries(start, tuple(equity)),
        riskfree_return=AnnualSeries(start, tuple(riskfree)),
    )


def load_projection(source) -> ProjectionInputs:
    """Parse a single-row projection-inputs CSV."""
    rows = _rows_from(source)
    header = [h.strip() for h in rows[0]]
    if header != _PROJECTION_HEADER:
        raise SchemaError(
            f"expected header {','.join(_PROJECTION_HEADER)!r}, got {','.join(header)!r}"
        )
    if len(rows) != 2:
        raise SchemaError("projection file must have exactly one data row")
    row = rows[1]
    if len(row) != 4:
        raise SchemaError(f"expected 4 cells, got {len(row)}")
    try:
        nond, serv, defl, pop = (float(cell) for cell in row)
    except ValueError as exc:
        raise SchemaError(f"non-numeric cell ({exc})") from None
    return ProjectionInputs(nond, serv, defl, pop)


def projected_consumption(
    nominal_nondurables_bn: float,
    nominal_services_bn: float,
    gnp_deflator: float,
    population: float,
) -> float:
    """Real per-capita consumption implied by nominal spending aggregates.

    Spending (billions) is deflated by the index (base 100) and divided by
    population:

        1e9 * (nondurables + services) / (deflator / 100) / population

    Either spending component may be zero as long as the total is positive;
    the deflator and population must be strictly positive.
    """
    if nominal_nondurables_bn < 0 or nominal_services_bn < 0:
        raise NonPositiveValue("spending components must be nonnegative")
    if nominal_nondurables_bn + nominal_services_bn <= 0:
        raise NonPositiveValue("total nominal spending must be positive")
    if gnp_deflator <= 0 or population <= 0:
        raise NonPositiveValue("deflator and population must be positive")
    nominal_total = (nominal_nondurables_bn + nominal_services_bn) * 1e9
    return nominal_total / (gnp_deflator / 100.0) / population


def project(inputs: ProjectionInputs) -> float:
    """projected_consumption over a ProjectionInputs record."""
    return projected_consumption(
        inputs.nominal_nondurables_bn,
        inputs.nominal_services_bn,
        inputs.gnp_deflator,
        inputs.population,
    )


def with_final_consumption(d: MarketDataset, value: float) -> MarketDataset:
    """A copy of `d` whose final consumption entry is replaced by `value`.

    Everything else (returns, span, all earlier consumption) is untouched.
    Used to swap the realized final year for a projected one.
    """
    if value <= 0:
        raise NonPositiveValue("replacement consumption must be positive")
    new_values = d.consumption.values[:-1] + (float(value),)
    return MarketDataset(
        consumption=AnnualSeries(d.consumption.start_year, new_values),
        equity_return=d.equity_return,
        riskfree_return=d.riskfree_return,
    )


def serialize_dataset(d: MarketDataset) -> bytes:
    """CSV bytes for `d`, shortest-repr floats (parse/serialize round-trips)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_HEADER)
    for i, year in enumerate(d.consumption.years):
        writer.writerow(
            [
                year,
                repr(d.consumption.values[i]),
                repr(d.equity_return.values[i]),
                repr(d.riskfree_return.values[i]),
            ]
        )
    return buf.getvalue().encode("utf-8")


def bundled_dataset_path() -> Path:
    """Filesystem path of the packaged reference dataset."""
    return Path(str(resources.files("rac").joinpath("data", BUNDLED_DATASET)))


def bundled_projection_path() -> Path:
    """Filesystem path of the packaged projection-inputs file."""
    return Path(str(resources.files("rac").joinpath("data", BUNDLED_PROJECTION)))


def load_bundled_dataset() -> MarketDataset:
    return load_dataset(bundled_dataset_path())


def load_bundled_projection() -> ProjectionInputs:
    return load_projection(bundled_projection_path())
