"""Command-line interface: ingest, calibrate, classify.

Configuration precedence is flags > config file (--config, JSON) > defaults.
The dataset path falls back to the RAC_DATASET environment variable and then
to the bundled reconstruction. Exit codes: 0 success, 1 input problem,
2 computation problem.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import dataset as ds
from .calibration import CalibrationResult, Variant, calibrate_variant
from .classify import DefinitionGroup, classify_pipeline, DEFAULT_TOLERANCE
from .errors import ComputeError, InputError
from .moments import compute_moments
from .report import (
    ReportFormat,
    ReportRow,
    calibration_block,
    export_run,
    render_table,
)

ENV_DATASET = "RAC_DATASET"

_CONFIG_KEYS = ("dataset", "projection", "beta", "group", "tol", "variant", "eta", "rho", "format")


@dataclass(frozen=True)
class RunConfig:
    dataset_path: str | None
    projection_path: str | None
    beta: float
    group: DefinitionGroup
    tolerance: float
    variant: str
    eta: float | None
    rho: float | None
    fmt: ReportFormat


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise InputError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("config file must hold a JSON object")
    unknown = set(doc) - set(_CONFIG_KEYS)
    if unknown:
        raise InputError(f"unknown config keys: {sorted(unknown)}")
    return doc


def _merge(flag, config_value, default):
    if flag is not None:
        return flag
    if config_value is not None:
        return config_value
    return default


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = _load_config_file(getattr(args, "config", None))
    dataset_path = _merge(args.dataset, cfg.get("dataset"), os.environ.get(ENV_DATASET))
    projection_path = _merge(args.projection, cfg.get("projection"), None)
    beta = float(_merge(args.beta, cfg.get("beta"), 0.99))
    group_name = _merge(args.group, cfg.get("group"), "two")
    tol = float(_merge(args.tol, cfg.get("tol"), DEFAULT_TOLERANCE))
    variant = _merge(args.variant, cfg.get("variant"), "both")
    eta = _merge(args.eta, cfg.get("eta"), None)
    rho = _merge(args.rho, cfg.get("rho"), None)
    fmt_name = _merge(args.format, cfg.get("format"), "text")
    if group_name not in ("one", "two"):
        raise InputError(f"group must be 'one' or 'two', got {group_name!r}")
    if variant not in ("realized", "projected", "both"):
        raise InputError(f"variant must be realized, projected, or both, got {variant!r}")
    if fmt_name not in ("text", "csv", "json"):
        raise InputError(f"format must be text, csv, or json, got {fmt_name!r}")
    return RunConfig(
        dataset_path=dataset_path,
        projection_path=projection_path,
        beta=beta,
        group=DefinitionGroup.ONE if group_name == "one" else DefinitionGroup.TWO,
        tolerance=tol,
        variant=variant,
        eta=None if eta is None else float(eta),
        rho=None if rho is None else float(rho),
        fmt=ReportFormat(fmt_name),
    )


def _open_dataset(cfg: RunConfig) -> ds.MarketDataset:
    if cfg.dataset_path is None:
        return ds.load_bundled_dataset()
    try:
        return ds.load_dataset(cfg.dataset_path)
    except FileNotFoundError:
        raise InputError(f"dataset file not found: {cfg.dataset_path}") from None


def _open_projection(cfg: RunConfig) -> ds.ProjectionInputs:
    if cfg.projection_path is None:
        return ds.load_bundled_projection()
    try:
        return ds.load_projection(cfg.projection_path)
    except FileNotFoundError:
        raise InputError(f"projection file not found: {cfg.projection_path}") from None


def _variants(cfg: RunConfig) -> list[Variant]:
    if cfg.variant == "realized":
        return [Variant.REALIZED]
    if cfg.variant == "projected":
        return [Variant.PROJECTED]
    return [Variant.REALIZED, Variant.PROJECTED]


def _variant_dataset(d: ds.MarketDataset, variant: Variant, cfg: RunConfig) -> ds.MarketDataset:
    if variant is Variant.REALIZED:
        return d
    projected = ds.project(_open_projection(cfg))
    return ds.with_final_consumption(d, projected)


# -- commands ----------------------------------------------------------------

def cmd_ingest(cfg: RunConfig, out) -> int:
    d = _open_dataset(cfg)
    m = compute_moments(d)
    if cfg.fmt is ReportFormat.JSON:
        doc = {
            "years": len(d),
            "start_year": d.start_year,
            "end_year": d.end_year,
            "moments": {
                "mu_x": m.mu_x,
                "sigma2_x": m.sigma2_x,
                "mean_x": m.mean_x,
                "mean_Re": m.mean_Re,
                "mean_Rf": m.mean_Rf,
                "mu_z": m.mu_z,
                "sigma2_z": m.sigma2_z,
            },
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return 0
    out.write(f"{len(d)} years, {d.start_year}-{d.end_year}\n")
    out.write(f"mean gross consumption growth {m.mean_x:.6f}\n")
    out.write(f"log-growth mean {m.mu_x:.6f}, variance {m.sigma2_x:.8f}\n")
    out.write(f"mean equity gross return {m.mean_Re:.6f}\n")
    out.write(f"mean risk-free gross return {m.mean_Rf:.6f}\n")
    out.write(f"log-level mean {m.mu_z:.6f}, variance {m.sigma2_z:.6f}\n")
    return 0


def _calibrations(cfg: RunConfig, d: ds.MarketDataset) -> dict[str, tuple[Variant, CalibrationResult]]:
    results: dict[str, tuple[Variant, CalibrationResult]] = {}
    for variant in _variants(cfg):
        dv = _variant_dataset(d, variant, cfg)
        calib = calibrate_variant(compute_moments(dv), cfg.beta, variant, rho=cfg.rho)
        results[variant.value] = (variant, calib)
    return results


def cmd_calibrate(cfg: RunConfig, out) -> int:
    d = _open_dataset(cfg)
    results = _calibrations(cfg, d)
    if cfg.fmt is ReportFormat.JSON:
        doc = {"calibration": {name: calibration_block(c) for name, (_, c) in results.items()}}
        out.write(json.dumps(doc, indent=2) + "\n")
        return 0
    if cfg.fmt is ReportFormat.CSV:
        out.write("variant,zeta,xi,rho,residual_a,residual_b,residual_c,consistency_gap\n")
        for name, (_, c) in results.items():
            cells = [name, repr(c.factors.zeta), repr(c.factors.xi), repr(c.rho)]
            cells += [repr(r) for r in c.residuals]
            cells.append(repr(c.consistency_gap))
            out.write(",".join(cells) + "\n")
        return 0
    for name, (_, c) in results.items():
        out.write(f"{name}: zeta {c.factors.zeta:.6f}, xi {c.factors.xi:.6f}, rho {c.rho:.6f}\n")
        out.write(
            "  residuals "
            + " ".join(f"{r:.3e}" for r in c.residuals)
            + f", consistency gap {c.consistency_gap:.3e}\n"
        )
    return 0


def _classify_rows(
    cfg: RunConfig,
    d: ds.MarketDataset,
    eta_of: dict[str, float | None],
    results: dict[str, tuple[Variant, CalibrationResult]],
) -> list[tuple[str, list[ReportRow]]]:
    """One (investor, rows) table per entry of eta_of (None = per-variant)."""
    alloc_text = {
        "negative": "allocates extra negative utility",
        "positive": "allocates extra positive utility",
        "zero": "allocates no extra utility",
    }
    tables: list[tuple[str, list[ReportRow]]] = []
    for investor, eta_fixed in eta_of.items():
        rows: list[ReportRow] = []
        for name, (variant, calib) in results.items():
            dv = _variant_dataset(d, variant, cfg)
            if eta_fixed is not None:
                eta = eta_fixed
            elif investor == "equity":
                eta = calib.factors.zeta
            else:
                eta = calib.factors.xi
            cmp, attitude = classify_pipeline(
                dv, eta, calib.rho, cfg.beta, cfg.group, cfg.tolerance
            )
            rows.append(
                ReportRow(
                    year_certain=dv.end_year - 1,
                    year_uncertain=f"{dv.end_year} ({name})",
                    consumption_certain=dv.consumption.values[-2],
                    consumption_uncertain=dv.consumption.values[-1],
                    certain_utility=cmp.certain,
                    uncertain_utility=cmp.uncertain,
                    allocation_text=alloc_text[attitude.allocation.value],
                    label_text=attitude.label.value,
                    rho=calib.rho,
                )
            )
        tables.append((investor, rows))
    return tables


def cmd_classify(cfg: RunConfig, out) -> int:
    d = _open_dataset(cfg)
    if cfg.eta is not None:
        eta_of: dict[str, float | None] = {"custom": cfg.eta}
    else:
        eta_of = {"equity": None, "risk-free": None}
    results = _calibrations(cfg, d)
    tables = _classify_rows(cfg, d, eta_of, results)
    if cfg.fmt is ReportFormat.JSON:
        out.write(export_run({name: c for name, (_, c) in results.items()}, tables))
        return 0
    if cfg.fmt is ReportFormat.CSV:
        all_rows = [row for _, rows in tables for row in rows]
        out.write(render_table(all_rows, ReportFormat.CSV))
        return 0
    heading = {
        "equity": "Equity investors (eta = zeta)",
        "risk-free": "Risk-free investors (eta = xi)",
        "custom": "Custom eta investors",
    }
    chunks = []
    for investor, rows in tables:
        chunks.append(heading[investor] + "\n" + render_table(rows, ReportFormat.TEXT))
    out.write("\n".join(chunks))
    return 0


# -- argument parsing --------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", help=f"market data CSV (default: ${ENV_DATASET} or bundled)")
    p.add_argument("--projection", help="projection inputs CSV (default: bundled)")
    p.add_argument("--beta", type=float, help="subjective discount factor (default 0.99)")
    p.add_argument("--group", choices=["one", "two"], help="definition group (default two)")
    p.add_argument("--tol", type=float, help="risk-neutrality tolerance (default 1e-9)")
    p.add_argument(
        "--variant",
        choices=["realized", "projected", "both"],
        help="final-year variant(s) to run (default both)",
    )
    p.add_argument("--eta", type=float, help="override the sufficiency factor")
    p.add_argument("--rho", type=float, help="override the risk-aversion coefficient")
    p.add_argument("--format", choices=["text", "csv", "json"], help="output format (default text)")
    p.add_argument("--config", help="JSON config file (flags win over its values)")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rac",
        description="Calibrate sufficiency factors and classify risk attitudes "
        "from an annual consumption/returns dataset.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("ingest", cmd_ingest), ("calibrate", cmd_calibrate), ("classify", cmd_classify)):
        p = sub.add_parser(name)
        _add_common(p)
        p.set_defaults(func=fn)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return args.func(cfg, sys.stdout)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ComputeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
