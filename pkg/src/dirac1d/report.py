"""Run pipelines (spectrum / diagnose / check-pt) and deterministic writers.

Reports carry no timestamps or timing so repeated runs of the same
configuration produce byte-identical CSV and JSON artifacts.  Floats are
written with 17 significant digits, enough to round-trip doubles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .config import CHANNELS, RunConfig
from .diagnostics import (BalanceReport, continuity_residual, gram_matrix,
                          normalize_result, orthogonality_balance)
from .errors import ConvergenceError, Dirac1DError, GridError
from .grid import GridFunction
from .hamiltonian import assemble_hamiltonian, hermiticity_of_operator
from .lorentz import check_pt_symmetry, gamma0_hermiticity_residual, sample_mass
from .solver import solve_spectrum

MODES = ("spectrum", "diagnose", "check-pt")


def f17(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    detail: str


@dataclass
class RunReport:
    mode: str
    config: dict
    grid_info: dict = field(default_factory=dict)
    spectrum_rows: list = field(default_factory=list)
    pt_rows: list = field(default_factory=list)
    hermiticity: dict = field(default_factory=dict)
    gram: Optional[np.ndarray] = None
    balance_rows: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _node_index(grid, x: float) -> int:
    return int(np.argmin(np.abs(grid.nodes - x)))


def _balance_row(rep: BalanceReport) -> dict:
    return {
        "k": rep.k,
        "k_prime": rep.k_prime,
        "term_energy_re": rep.term_energy.real,
        "term_energy_im": rep.term_energy.imag,
        "term_boundary_re": rep.term_boundary.real,
        "term_boundary_im": rep.term_boundary.imag,
        "term_potential_re": rep.term_potential.real,
        "term_potential_im": rep.term_potential.imag,
        "identity_residual": rep.identity_residual,
        "identity_tol": rep.identity_tol,
        "identity_ok": rep.identity_ok,
        "orthogonality_gap": rep.orthogonality_gap,
        "orthogonality_restored": rep.orthogonality_restored,
    }


def execute(cfg: RunConfig, mode: str, strict_pt: bool = False,
            tol_override: Optional[float] = None) -> RunReport:
    """Run one pipeline over a validated configuration."""
    if mode not in MODES:
        raise Dirac1DError(f"unknown mode {mode!r}")
    report = RunReport(mode=mode, config=cfg.as_dict())

    grid = cfg.build_grid()
    profile = cfg.build_mass_profile()
    mass = sample_mass(profile, grid)
    potential = cfg.build_potential(grid, profile)
    scheme = cfg["solver"]["scheme"]
    wilson_r = cfg["solver"]["wilson_r"]
    tol = tol_override if tol_override is not None else cfg["solver"]["tol"]
    pt_tol = cfg["diagnostics"]["pt_tol"]

    report.grid_info = {
        "h": grid.h,
        "n_points": grid.n_points,
        "boundary": grid.boundary,
        "matrix_dim": 2 * (grid.n_points - 2 if grid.boundary == "dirichlet"
                           else grid.n_points),
        "scheme": scheme,
        "wilson_r": wilson_r,
    }

    # PT symmetry of each channel (informational; gating below)
    declared_pt = cfg.pt_channels()
    if grid.is_symmetric():
        channels = {"v_t": potential.v_t, "v_sp": potential.v_sp,
                    "v_s": potential.v_s, "v_p": potential.v_p}
        for name in CHANNELS:
            pt = check_pt_symmetry(channels[name], tol=pt_tol)
            report.pt_rows.append({
                "channel": name,
                "declared_pt": name in declared_pt,
                "residual": pt.residual,
                "symmetric": pt.symmetric,
                "tol": pt.tol,
            })
        mass_pt = check_pt_symmetry(mass, tol=pt_tol)
        report.pt_rows.append({
            "channel": "mass", "declared_pt": False,
            "residual": mass_pt.residual, "symmetric": mass_pt.symmetric,
            "tol": mass_pt.tol,
        })
    else:
        report.notes.append(
            "grid is not symmetric about the origin; PT checks skipped"
        )

    gate_pt = strict_pt or mode == "check-pt"
    if gate_pt:
        if not grid.is_symmetric():
            report.checks.append(CheckOutcome(
                "pt_symmetry", False,
                "grid not symmetric about the origin; PT symmetry undefined"))
        elif declared_pt:
            bad = [r for r in report.pt_rows
                   if r["declared_pt"] and not r["symmetric"]]
            if bad:
                detail = "; ".join(
                    f"{r['channel']} residual {r['residual']:.3e} > {r['tol']:g}"
                    for r in bad)
                report.checks.append(CheckOutcome("pt_symmetry", False, detail))
            else:
                worst = max(r["residual"] for r in report.pt_rows
                            if r["declared_pt"])
                report.checks.append(CheckOutcome(
                    "pt_symmetry", True,
                    f"all declared channels within {pt_tol:g} "
                    f"(worst {worst:.3e})"))
        else:
            report.checks.append(CheckOutcome(
                "pt_symmetry", True, "no channel declared pt_from_mass"))

    report.hermiticity["gamma0_potential"] = gamma0_hermiticity_residual(
        potential)

    if mode == "check-pt":
        return report

    op = assemble_hamiltonian(grid, potential, mass, scheme=scheme,
                              wilson_r=wilson_r)
    report.hermiticity["operator"] = hermiticity_of_operator(op)

    try:
        result = solve_spectrum(op, tol=tol,
                                max_pairs=cfg["solver"]["max_pairs"],
                                reality_tol=cfg["diagnostics"]["reality_tol"])
    except ConvergenceError as exc:
        report.checks.append(CheckOutcome("solver_convergence", False, str(exc)))
        return report
    report.checks.append(CheckOutcome(
        "solver_convergence", True,
        f"max residual {float(np.max(result.residuals)):.3e} <= {tol:g}"))

    unpaired = sum(1 for t in result.classification if t == "complex_unpaired")
    report.checks.append(CheckOutcome(
        "conjugate_pairing", unpaired == 0,
        "all complex eigenvalues conjugate-paired" if unpaired == 0
        else f"{unpaired} unpaired complex eigenvalue(s)"))

    if mode == "diagnose":
        result = normalize_result(result)

    near_wall = (1, grid.n_points - 2) if grid.boundary == "dirichlet" else None
    for i, s in enumerate(result.eigenpairs):
        row = {
            "index": i,
            "energy_re": s.energy.real,
            "energy_im": s.energy.imag,
            "residual": float(result.residuals[i]),
            "classification": result.classification[i],
        }
        if mode == "diagnose":
            if near_wall:
                amp = max(abs(s.plus_component[j]) + abs(s.minus_component[j])
                          for j in near_wall)
            else:
                amp = 0.0
            row["tail_amplitude"] = amp
            r = continuity_residual(s, potential)
            row["continuity_max"] = float(np.max(np.abs(r.values)))
        report.spectrum_rows.append(row)

    if mode == "diagnose":
        report.gram = gram_matrix(result)

        d = cfg["diagnostics"]
        window = None
        if d["window"] is not None:
            window = (_node_index(grid, d["window"][0]),
                      _node_index(grid, d["window"][1]))
        identity_tol = None if d["identity_tol"] == "auto" else d["identity_tol"]
        pairs = list(d["balance_pairs"])
        if not pairs:
            low = min(d["balance_lowest"], len(result.eigenpairs))
            pairs = [(k, kp) for k in range(low) for kp in range(k)]
        reports = []
        for k, kp in pairs:
            try:
                reports.append(orthogonality_balance(
                    result, k, kp, window=window, identity_tol=identity_tol))
            except GridError as exc:
                report.checks.append(CheckOutcome(
                    "balance_identity", False, f"pair ({k},{kp}): {exc}"))
        report.balance_rows = [_balance_row(r) for r in reports]
        if reports:
            bad = [r for r in reports if not r.identity_ok]
            report.checks.append(CheckOutcome(
                "balance_identity", not bad,
                f"{len(reports)} pair(s), worst residual "
                f"{max(r.identity_residual for r in reports):.3e}"
                if not bad else
                f"{len(bad)} pair(s) exceed tolerance, worst "
                f"{max(r.identity_residual for r in bad):.3e}"))

        # current conservation is only an exit-relevant check for Hermitian
        # potentials; PT runs legitimately violate it and just report values
        if report.hermiticity["gamma0_potential"] <= 1e-14:
            scale = 100.0 * grid.h ** 2
            worst = max((row["continuity_max"] for row in report.spectrum_rows),
                        default=0.0)
            report.checks.append(CheckOutcome(
                "continuity_conserved", worst <= scale,
                f"max residual {worst:.3e} vs bound {scale:.3e}"))
        else:
            report.notes.append(
                "potential has an anti-Hermitian part; continuity residuals "
                "reported but not gated")

    return report


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def report_to_dict(report: RunReport) -> dict:
    out = {
        "mode": report.mode,
        "config": report.config,
        "grid": report.grid_info,
        "hermiticity": report.hermiticity,
        "pt": report.pt_rows,
        "spectrum": report.spectrum_rows,
        "balance": report.balance_rows,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                   for c in report.checks],
        "notes": report.notes,
        "passed": report.passed,
    }
    if report.gram is not None:
        out["gram"] = [
            {"k_prime": i, "k": j,
             "re": report.gram[i, j].real, "im": report.gram[i, j].imag}
            for i in range(report.gram.shape[0])
            for j in range(report.gram.shape[1])
        ]
    return _jsonable(out)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, (float, np.floating)):
                cells.append(f17(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def write_outputs(report: RunReport, out_dir: Path, formats: str) -> list[Path]:
    """Write spectrum/gram/balance CSVs and/or report.json; returns paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    if formats in ("csv", "both"):
        if report.spectrum_rows:
            cols = list(report.spectrum_rows[0].keys())
            p = out_dir / "spectrum.csv"
            _write_csv(p, cols,
                       [[row[c] for c in cols] for row in report.spectrum_rows])
            written.append(p)
        if report.gram is not None:
            p = out_dir / "gram.csv"
            g = report.gram
            _write_csv(p, ["k_prime", "k", "re", "im"],
                       [[i, j, g[i, j].real, g[i, j].imag]
                        for i in range(g.shape[0]) for j in range(g.shape[1])])
            written.append(p)
        if report.balance_rows:
            cols = list(report.balance_rows[0].keys())
            p = out_dir / "balance.csv"
            _write_csv(p, cols,
                       [[row[c] for c in cols] for row in report.balance_rows])
            written.append(p)
        if report.pt_rows:
            p = out_dir / "pt_check.csv"
            _write_csv(p, ["channel", "declared_pt", "residual", "symmetric", "tol"],
                       [[r["channel"], r["declared_pt"], r["residual"],
                         r["symmetric"], r["tol"]] for r in report.pt_rows])
            written.append(p)

    if formats in ("json", "both"):
        p = out_dir / "report.json"
        p.write_text(json.dumps(report_to_dict(report), indent=2,
                                sort_keys=True) + "\n")
        written.append(p)
    return written
