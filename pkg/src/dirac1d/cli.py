"""Command-line interface.

Subcommands:
    spectrum  CONFIG   solve and write the spectrum table
    diagnose  CONFIG   spectrum plus currents, Gram matrix and balance identity
    check-pt  CONFIG   PT-symmetry residuals of the configured channels
    sweep     CONFIG --param section.key --values a,b,c   repeat diagnose runs

Exit status: 0 when every enabled check passed, 1 for usage or configuration
errors, 2 when a numerical check failed.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import Optional

from . import config as config_mod
from .config import RunConfig, config_from_raw, parse_config
from .errors import ConfigError, Dirac1DError
from .report import MODES, RunReport, execute, f17, write_outputs


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the package reserves 2 for
    # numerical check failures, so remap usage problems to exit 1
    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("config", help="path to the INI run configuration")
    sub.add_argument("--out", default=None,
                     help="output directory (default: <config stem>_out)")
    sub.add_argument("--tol", type=float, default=None,
                     help="override solver.tol from the config")
    sub.add_argument("--format", choices=("csv", "json", "both"), default=None,
                     help="override output.formats from the config")
    sub.add_argument("--strict-pt", action="store_true",
                     help="fail (exit 2) when a channel declared "
                          "pt_from_mass is not PT-symmetric")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dirac1d",
                     description="1+1D Dirac spectra with position-dependent "
                                 "mass and Lorentz-structure potentials")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("spectrum", "solve the spectrum and write it out"),
        ("diagnose", "spectrum plus currents, Gram matrix and balance terms"),
        ("check-pt", "check PT symmetry of the configured channels"),
    ):
        sub = subs.add_parser(name, help=helptext)
        _add_common(sub)
    sweep = subs.add_parser("sweep", help="repeat diagnose over one parameter")
    _add_common(sweep)
    sweep.add_argument("--param", required=True,
                       help="config key to vary, as section.key")
    sweep.add_argument("--values", required=True,
                       help="comma-separated values (empty string: no runs)")
    return parser


def _out_dir(args, cfg: RunConfig) -> Path:
    if args.out:
        return Path(args.out)
    configured = cfg["output"]["directory"]
    if configured:
        base = cfg.path.parent if cfg.path else Path.cwd()
        return base / configured
    stem = cfg.path.stem if cfg.path else "run"
    return Path.cwd() / f"{stem}_out"


def _formats(args, cfg: RunConfig) -> str:
    return args.format if args.format else cfg["output"]["formats"]


def _print_report(report: RunReport, written) -> None:
    for row in report.spectrum_rows:
        print(f"  E[{row['index']}] = {f17(row['energy_re'])} "
              f"{'+' if row['energy_im'] >= 0 else '-'} "
              f"{f17(abs(row['energy_im']))}i  ({row['classification']})")
    for note in report.notes:
        print(f"  note: {note}")
    for chk in report.checks:
        print(f"  check {chk.name}: {'PASS' if chk.passed else 'FAIL'} "
              f"({chk.detail})")
    for p in written:
        print(f"  wrote {p}")


def _run_single(args, mode: str) -> int:
    cfg = parse_config(args.config)
    report = execute(cfg, mode, strict_pt=args.strict_pt,
                     tol_override=args.tol)
    written = write_outputs(report, _out_dir(args, cfg), _formats(args, cfg))
    _print_report(report, written)
    if not report.passed:
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        print(f"FAILED checks: {failed}", file=sys.stderr)
        return 2
    return 0


def _sweep_value_token(value: str) -> str:
    token = re.sub(r"[^A-Za-z0-9.+-]", "_", value)
    return token if token else "empty"


def _run_sweep(args) -> int:
    cfg = parse_config(args.config)
    try:
        section, key = args.param.split(".")
    except ValueError:
        raise ConfigError(
            f"--param must look like section.key, got {args.param!r}") from None
    if section not in config_mod._SCHEMA or key not in config_mod._SCHEMA[section]:
        raise ConfigError(f"--param {args.param!r} is not a known config key")

    values = [v.strip() for v in args.values.split(",") if v.strip()]
    out_root = _out_dir(args, cfg)
    formats = _formats(args, cfg)

    summary_rows = []
    any_failed = False
    for idx, value in enumerate(values):
        raw = {sec: dict(keys) for sec, keys in cfg.raw.items()}
        raw[section][key] = value
        # a failing run is recorded in the summary and the sweep moves on
        try:
            sub_cfg = config_from_raw(raw, path=cfg.path)
            report = execute(sub_cfg, "diagnose", strict_pt=args.strict_pt,
                             tol_override=args.tol)
        except Dirac1DError as exc:
            summary_rows.append([value, False, float("nan"), 0,
                                 float("nan"), str(exc)])
            print(f"  {args.param}={value}: ERROR ({exc})")
            any_failed = True
            continue
        sub_dir = out_root / f"{idx:03d}_{_sweep_value_token(value)}"
        write_outputs(report, sub_dir, formats)
        min_abs_im = min((abs(r["energy_im"]) for r in report.spectrum_rows),
                         default=float("nan"))
        n_pairs = sum(1 for r in report.spectrum_rows
                      if r["classification"] == "complex_pair_member") // 2
        max_ident = max((r["identity_residual"] for r in report.balance_rows),
                        default=float("nan"))
        summary_rows.append([value, report.passed, min_abs_im, n_pairs,
                             max_ident, ""])
        status = "PASS" if report.passed else "FAIL"
        print(f"  {args.param}={value}: {status} "
              f"({n_pairs} complex pair(s), min |Im E| {min_abs_im:.3e})")
        if not report.passed:
            any_failed = True

    out_root.mkdir(parents=True, exist_ok=True)
    lines = ["value,passed,min_abs_im_e,n_complex_pairs,identity_residual,error"]
    for row in summary_rows:
        err = str(row[5])
        if "," in err or '"' in err:
            err = '"' + err.replace('"', '""') + '"'
        cells = [str(row[0]), "true" if row[1] else "false", f17(row[2]),
                 str(row[3]), f17(row[4]), err]
        lines.append(",".join(cells))
    summary = out_root / "sweep_summary.csv"
    summary.write_text("\n".join(lines) + "\n")
    print(f"  wrote {summary}")
    if not values:
        print("  empty sweep: no values given, nothing to run")
    return 2 if any_failed else 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    mode = {"spectrum": "spectrum", "diagnose": "diagnose",
            "check-pt": "check-pt"}.get(args.command)
    try:
        if args.command == "sweep":
            return _run_sweep(args)
        return _run_single(args, mode)
    except Dirac1DError as exc:
        print(f"dirac1d: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"dirac1d: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
