"""Command line interface.

::

    agingmetric run CONFIG [--out-dir DIR] [--tol TOL] [--seed SEED] [--jobs N]
    agingmetric sweep CONFIG ...
    agingmetric varcheck CONFIG ...

Exit status: 0 on success, 2 on a configuration error, 3 on a numerical
failure (the diagnostic goes to stderr).  ``run`` on a configuration with a
sweep behaves like ``sweep``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .config import ScenarioConfig, load_config
from .errors import ConfigError, DomainError, NumericalFailure
from .io import format_number, write_csv, write_manifest, write_svg
from .scenarios import PRIMARY_METRIC, RunResult, Series, SweepResult, run_scenario, run_sweep

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_CONFIG", "EXIT_NUMERICAL"]

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", type=Path, help="scenario configuration file")
    common.add_argument("--out-dir", type=Path, default=Path("out"), help="output directory (default: ./out)")
    common.add_argument("--tol", type=float, default=None, help="override the integrator tolerance")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized verification sampling")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps (default: 1)")
    parser = argparse.ArgumentParser(prog="agingmetric", description="Material-metric aging simulations")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run a scenario (sweeps if the config has one)")
    sub.add_parser("sweep", parents=[common], help="run every value of the config's sweep")
    sub.add_parser("varcheck", parents=[common], help="check variation rows against the finite-difference oracle")
    return parser


def _apply_overrides(cfg: ScenarioConfig, args) -> ScenarioConfig:
    updates = {}
    if args.tol is not None:
        if "tol" not in cfg.values:
            print(f"note: --tol has no effect on process {cfg.process}", file=sys.stderr)
        else:
            updates["tol"] = args.tol
    if args.seed is not None:
        if "seed" not in cfg.values:
            print(f"note: --seed only affects varcheck sampling; ignored for {cfg.process}", file=sys.stderr)
        else:
            updates["seed"] = args.seed
    return cfg.with_values(**updates) if updates else cfg


def _write_run(result: RunResult, out_dir: Path, stem: Optional[str] = None) -> List[Path]:
    cfg = result.config
    stem = stem or cfg.name
    csv_path = out_dir / f"{cfg['csv_name'] or stem}.csv"
    svg_path = out_dir / f"{cfg['svg_name'] or stem}.svg"
    paths = [write_csv(csv_path, result.columns, result.rows, cfg)]
    paths.append(write_svg(svg_path, result.series, result.xlabel, result.ylabel, result.title, result.xscale, result.yscale))
    manifest = {"version": __version__, "config": cfg.values, **result.manifest, "outputs": [p.name for p in paths]}
    paths.append(write_manifest(out_dir / f"{stem}.manifest.json", manifest))
    return paths


def _member_stem(name: str, key: str, value) -> str:
    return f"{name}__{key}_{format_number(value)}"


def _write_sweep(sweep: SweepResult, out_dir: Path) -> List[Path]:
    cfg = sweep.config
    key = sweep.key
    paths: List[Path] = []
    overlay: List[Series] = []
    template = None
    for row in sweep.rows:
        if not row.ok:
            continue
        res = row.result
        stem = _member_stem(cfg.name, key, row.value)
        res.config = res.config.with_values(csv_name=None, svg_name=None)
        paths.append(write_csv(out_dir / f"{stem}.csv", res.columns, res.rows, res.config))
        for s in res.series[:1]:
            overlay.append(Series(f"{key} = {format_number(row.value)}", s.x, s.y))
        template = template or res
    ok_rows = [r for r in sweep.rows if r.ok]
    metric_names: List[str] = []
    if ok_rows:
        metric_names = [k for k, v in ok_rows[0].result.metrics.items() if not isinstance(v, (list, dict))]
    columns = [key, "status", "detail", *metric_names]
    table = []
    for r in sweep.rows:
        if r.ok:
            table.append((r.value, "ok", "", *[r.result.metrics.get(m, "") for m in metric_names]))
        else:
            table.append((r.value, "failed", r.error.replace("\n", " "), *[""] * len(metric_names)))
    header = [f"sweep over {key}: {len(sweep.rows)} runs, {sweep.n_ok} succeeded"]
    header += [f"ordering of {m} in {key}: {o}" for m, o in sweep.orderings.items()]
    paths.append(write_csv(out_dir / f"{cfg.name}__summary.csv", columns, table, cfg, header))
    if template is not None:
        paths.append(
            write_svg(out_dir / f"{cfg['svg_name'] or cfg.name}.svg", overlay, template.xlabel, template.ylabel,
                      template.title, template.xscale, template.yscale)
        )
    manifest = {
        "version": __version__,
        "config": cfg.values,
        "sweep_key": key,
        "primary_metric": PRIMARY_METRIC[cfg.process],
        "orderings": sweep.orderings,
        "pointwise_ordering": sweep.pointwise,
        "runs": [
            {
                "value": r.value,
                "status": "ok" if r.ok else "failed",
                "error": r.error,
                **({"metrics": r.result.metrics, **{k: v for k, v in r.result.manifest.items() if k != "metrics"}} if r.ok else {}),
            }
            for r in sweep.rows
        ],
        "outputs": [p.name for p in paths],
    }
    paths.append(write_manifest(out_dir / f"{cfg.name}.manifest.json", manifest))
    return paths


def _print_result(result: RunResult) -> None:
    for k, v in result.metrics.items():
        print(f"  {k}: {format_number(v)}")


def _cmd_single(cfg: ScenarioConfig, out_dir: Path) -> int:
    result = run_scenario(cfg)
    paths = _write_run(result, out_dir)
    print(f"{cfg.name} ({cfg.process}):")
    _print_result(result)
    for p in paths:
        print(f"  wrote {p}")
    if cfg.process == "varcheck" and not result.metrics["all_passed"]:
        print("error: at least one variation row exceeds the 1e-6 tolerance", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_sweep(cfg: ScenarioConfig, out_dir: Path, jobs: int) -> int:
    sweep = run_sweep(cfg, jobs=jobs)
    paths = _write_sweep(sweep, out_dir)
    print(f"{cfg.name} ({cfg.process}) sweep over {sweep.key}: {sweep.n_ok}/{len(sweep.rows)} succeeded")
    for r in sweep.rows:
        if r.ok:
            m = PRIMARY_METRIC[cfg.process]
            print(f"  {sweep.key}={format_number(r.value)}: {m}={format_number(r.result.metrics.get(m))}")
        else:
            print(f"  {sweep.key}={format_number(r.value)}: failed ({r.error})", file=sys.stderr)
    for m, o in sweep.orderings.items():
        print(f"  ordering of {m}: {o}")
    for p in paths:
        print(f"  wrote {p}")
    return EXIT_OK if sweep.n_ok >= 1 else EXIT_NUMERICAL


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if args.command == "varcheck" and cfg.process != "varcheck":
            raise ConfigError(f"varcheck needs a config with process = varcheck, got {cfg.process}")
        if args.command == "sweep" and cfg.sweep is None:
            raise ConfigError("sweep needs sweep_key and a nonempty sweep_values list in the config")
        if cfg.sweep is not None:
            return _cmd_sweep(cfg, args.out_dir, args.jobs)
        return _cmd_single(cfg, args.out_dir)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
