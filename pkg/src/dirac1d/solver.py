"""Eigenvalue solvers: dense matrix diagonalization and two-sided shooting.

The matrix path hands the (generally non-Hermitian) operator to LAPACK's
general eigensolver and wraps the output in checked, deterministically
ordered form.  The shooting path integrates the coupled first-order system
from both walls with classical RK4 and drives the 2x2 matching determinant
at the midpoint to zero, which gives continuum (not lattice) eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConvergenceError, GridError
from .grid import Grid1D, GridFunction
from .hamiltonian import DiracOperator
from .lorentz import GammaRep, LorentzPotential

REALITY_TAGS = ("real", "complex_pair_member", "complex_unpaired")


@dataclass(frozen=True)
class Spinor:
    """One two-component state on the full grid (wall nodes included)."""

    grid: Grid1D
    plus_component: np.ndarray
    minus_component: np.ndarray
    energy: complex

    def __post_init__(self) -> None:
        p = np.asarray(self.plus_component, dtype=complex).copy()
        m = np.asarray(self.minus_component, dtype=complex).copy()
        if p.shape != (self.grid.n_points,) or m.shape != (self.grid.n_points,):
            raise GridError("spinor components must match the grid size")
        p.flags.writeable = False
        m.flags.writeable = False
        object.__setattr__(self, "plus_component", p)
        object.__setattr__(self, "minus_component", m)
        object.__setattr__(self, "energy", complex(self.energy))


@dataclass(frozen=True)
class SpectrumResult:
    """Sorted eigenpairs with residuals, reality tags and solve metadata."""

    eigenpairs: tuple[Spinor, ...]
    residuals: np.ndarray
    classification: tuple[str, ...]
    solver_tolerance: float
    scheme: str
    wilson_r: float
    mass: GridFunction
    potential: LorentzPotential
    rep: GammaRep

    @property
    def energies(self) -> np.ndarray:
        return np.array([s.energy for s in self.eigenpairs])

    @property
    def grid(self) -> Grid1D:
        return self.mass.grid


def _embed(op: DiracOperator, column: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a matrix eigenvector into full-grid components (zero at hard walls)."""
    k = op.size // 2
    n = op.grid.n_points
    plus = np.zeros(n, dtype=complex)
    minus = np.zeros(n, dtype=complex)
    plus[op.active_index] = column[:k]
    minus[op.active_index] = column[k:]
    return plus, minus


def solve_spectrum(op: DiracOperator, tol: float = 1e-9, max_pairs: int = 12,
                   reality_tol: float = 1e-9) -> SpectrumResult:
    """Diagonalize, order by (|Re E|, Im E, Re E), keep the lowest max_pairs.

    Every returned pair is residual-checked: ||H v - E v||_2 / ||v||_2 must
    not exceed tol, otherwise the solve is reported as non-converged with the
    offending residuals listed.  Eigenvectors are returned unnormalized;
    normalization conventions live in the diagnostics layer.
    """
    if max_pairs < 1:
        raise GridError(f"max_pairs must be positive, got {max_pairs}")
    w, v = np.linalg.eig(op.matrix)
    order = np.lexsort((w.real, w.imag, np.abs(w.real)))
    keep = order[: min(max_pairs, len(order))]

    residuals = np.empty(len(keep))
    spinors = []
    for i, col in enumerate(keep):
        vec = v[:, col]
        residuals[i] = (np.linalg.norm(op.matrix @ vec - w[col] * vec)
                        / np.linalg.norm(vec))
        plus, minus = _embed(op, vec)
        spinors.append(Spinor(grid=op.grid, plus_component=plus,
                              minus_component=minus, energy=w[col]))
    bad = np.nonzero(residuals > tol)[0]
    if bad.size:
        detail = ", ".join(
            f"E={spinors[i].energy:.6g} residual={residuals[i]:.3e}" for i in bad
        )
        raise ConvergenceError(
            f"eigensolver residuals exceed tol={tol:g} for {bad.size} pair(s): {detail}"
        )
    result = SpectrumResult(
        eigenpairs=tuple(spinors), residuals=residuals,
        classification=("real",) * len(spinors), solver_tolerance=float(tol),
        scheme=op.scheme, wilson_r=op.wilson_r, mass=op.mass,
        potential=op.potential, rep=op.rep,
    )
    return classify_reality(result, tol=reality_tol)


def classify_reality(result: SpectrumResult, tol: float = 1e-9) -> SpectrumResult:
    """Tag each eigenvalue real / conjugate-pair member / unpaired complex.

    Real means |Im E| <= tol * max(1, |Re E|).  The remaining eigenvalues are
    greedily matched against their complex conjugates within the same
    tolerance; leftovers are tagged complex_unpaired (which typically means
    the partner fell outside the retained low-|Re| window, not a bug).
    """
    e = result.energies
    scale = np.maximum(1.0, np.abs(e.real))
    is_real = np.abs(e.imag) <= tol * scale
    tags = np.where(is_real, "real", "").astype(object)

    open_idx = [i for i in range(len(e)) if not is_real[i]]
    while open_idx:
        i = open_idx.pop(0)
        best_j, best_gap = -1, np.inf
        for j in open_idx:
            gap = abs(e[i] - np.conj(e[j]))
            if gap < best_gap:
                best_j, best_gap = j, gap
        if best_j >= 0 and best_gap <= tol * max(1.0, abs(e[i])):
            tags[i] = tags[best_j] = "complex_pair_member"
            open_idx.remove(best_j)
        else:
            tags[i] = "complex_unpaired"
    return replace(result, classification=tuple(str(t) for t in tags))


@dataclass(frozen=True)
class ShootingResult:
    energy: complex
    spinor: Spinor
    iterations: int
    determinant: complex
    match_mismatch: float


ChannelFn = Callable[[float], complex]


def _channel_callables(pot: LorentzPotential, mass: GridFunction,
                       mass_fn: Optional[ChannelFn],
                       channel_fns: Optional[dict]) -> dict:
    """Coefficient callables for off-node RK4 stages.

    Exact callables win when supplied; otherwise each sampled channel is
    cubic-spline interpolated (the shooting error then floors at the spline's
    O(h^4), which matches the integrator order).
    """
    fns = dict(channel_fns or {})
    unknown = set(fns) - {"v_t", "v_sp", "v_s", "v_p"}
    if unknown:
        raise GridError(f"unknown potential channel(s) {sorted(unknown)}")
    x = mass.grid.nodes

    def spline(values: np.ndarray) -> ChannelFn:
        if np.allclose(values, values[0]):
            c = complex(values[0])
            return lambda _x: c
        return CubicSpline(x, values)

    out = {"mass": mass_fn or spline(mass.values)}
    for name, gf in (("v_t", pot.v_t), ("v_sp", pot.v_sp),
                     ("v_s", pot.v_s), ("v_p", pot.v_p)):
        out[name] = fns.get(name) or spline(gf.values)
    return out


def _rhs(x: float, y: np.ndarray, energy: complex, fns: dict) -> np.ndarray:
    """First-order system phi' = F(x) phi equivalent to H phi = E phi."""
    vt = complex(fns["v_t"](x))
    vsp = complex(fns["v_sp"](x))
    c_plus = complex(fns["mass"](x)) + complex(fns["v_s"](x)) + 1.0j * complex(fns["v_p"](x))
    c_minus = complex(fns["mass"](x)) + complex(fns["v_s"](x)) - 1.0j * complex(fns["v_p"](x))
    dp = 1.0j * (energy - vt - vsp) * y[0] - 1.0j * c_plus * y[1]
    dm = -1.0j * (energy - vt + vsp) * y[1] + 1.0j * c_minus * y[0]
    return np.array([dp, dm])


def _rk4_segment(xs: np.ndarray, y0: np.ndarray, energy: complex, fns: dict,
                 substeps: int) -> np.ndarray:
    """Integrate node-to-node, recording the state at every node.

    The whole trajectory is rescaled whenever the running amplitude overflows
    toward 1e150; only the shape matters, and earlier exponentially small
    values flushing to zero is harmless.
    """
    out = np.empty((len(xs), 2), dtype=complex)
    y = y0.astype(complex)
    out[0] = y
    for i in range(len(xs) - 1):
        x, x1 = xs[i], xs[i + 1]
        dx = (x1 - x) / substeps
        for s in range(substeps):
            xa = x + s * dx
            k1 = _rhs(xa, y, energy, fns)
            k2 = _rhs(xa + 0.5 * dx, y + 0.5 * dx * k1, energy, fns)
            k3 = _rhs(xa + 0.5 * dx, y + 0.5 * dx * k2, energy, fns)
            k4 = _rhs(xa + dx, y + dx * k3, energy, fns)
            y = y + (dx / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        big = np.max(np.abs(y))
        if big > 1e150:
            y /= big
            out[: i + 1] /= big
        out[i + 1] = y
    return out


def _muller_step(za: complex, zb: complex, zc: complex,
                 fa: complex, fb: complex, fc: complex) -> complex:
    """One step of Muller's method (quadratic through three points)."""
    h1 = zb - za
    h2 = zc - zb
    d1 = (fb - fa) / h1
    d2 = (fc - fb) / h2
    a = (d2 - d1) / (h2 + h1)
    b = a * h2 + d2
    disc = np.sqrt(b * b - 4.0 * fc * a) if a != 0 else 0.0
    den = b + disc if abs(b + disc) > abs(b - disc) else b - disc
    if den == 0:
        raise ConvergenceError("matching determinant is degenerate (flat) near the guess")
    return zc - 2.0 * fc / den


def shooting_solve(grid: Grid1D, pot: LorentzPotential, mass: GridFunction,
                   energy_guess: complex, bc: str = "dirichlet", *,
                   substeps: int = 2, tol: float = 1e-12, max_iter: int = 60,
                   search_radius: Optional[float] = None,
                   mass_fn: Optional[ChannelFn] = None,
                   channel_fns: Optional[dict] = None) -> ShootingResult:
    """Bound state near energy_guess by two-sided shooting.

    Integrates trial solutions from both walls to the midpoint node with the
    boundary convention phi_plus(wall) = 0 and finds E where the two match,
    i.e. where det[u_left(mid), u_right(mid)] = 0 (determinant normalized by
    the segment amplitudes).  Root search is secant for a real guess and
    Muller for a complex one; both work on the full complex determinant.

    Coefficients between nodes come from mass_fn/channel_fns when given,
    else from cubic interpolation of the sampled channels.
    """
    if bc != "dirichlet":
        raise GridError(f"shooting supports dirichlet walls only, got {bc!r}")
    if grid.boundary != "dirichlet":
        raise GridError("shooting requires a dirichlet grid")
    if substeps < 1:
        raise GridError("substeps must be >= 1")
    energy_guess = complex(energy_guess)
    radius = (search_radius if search_radius is not None
              else 10.0 * max(1.0, abs(energy_guess)))
    fns = _channel_callables(pot, mass, mass_fn, channel_fns)

    xs = grid.nodes
    mid = grid.n_points // 2
    y_wall = np.array([0.0, 1.0], dtype=complex)

    def segments(energy: complex) -> tuple[np.ndarray, np.ndarray]:
        left = _rk4_segment(xs[: mid + 1], y_wall, energy, fns, substeps)
        right = _rk4_segment(xs[mid:][::-1], y_wall, energy, fns, substeps)
        return left, right[::-1]

    def det_at(energy: complex) -> complex:
        left, right = segments(energy)
        ul, ur = left[-1], right[0]
        denom = np.linalg.norm(ul) * np.linalg.norm(ur)
        if denom == 0.0:
            raise ConvergenceError("trial solution vanished; matching determinant degenerate")
        return (ul[0] * ur[1] - ul[1] * ur[0]) / denom

    # root search on the complex determinant
    step0 = 1e-4 * max(1.0, abs(energy_guess))
    iterations = 0
    if abs(energy_guess.imag) > 0.0:
        za, zb, zc = energy_guess - step0, energy_guess + step0 * 1.0j, energy_guess
        fa, fb, fc = det_at(za), det_at(zb), det_at(zc)
        e_cur, f_cur = zc, fc
        for iterations in range(1, max_iter + 1):
            zn = _muller_step(za, zb, zc, fa, fb, fc)
            if abs(zn - energy_guess) > radius:
                raise ConvergenceError(
                    f"no root within radius {radius:g} of guess {energy_guess:g}"
                )
            fn_ = det_at(zn)
            za, zb, zc = zb, zc, zn
            fa, fb, fc = fb, fc, fn_
            e_cur, f_cur = zn, fn_
            if abs(fn_) < tol or abs(zc - zb) < tol * max(1.0, abs(zc)):
                break
        else:
            raise ConvergenceError(
                f"shooting did not converge in {max_iter} iterations "
                f"(last |det|={abs(f_cur):.3e})"
            )
    else:
        e0, e1 = energy_guess, energy_guess + step0
        f0, f1 = det_at(e0), det_at(e1)
        e_cur, f_cur = e1, f1
        converged = False
        for iterations in range(1, max_iter + 1):
            if f1 == f0:
                raise ConvergenceError("matching determinant is degenerate (flat) near the guess")
            e2 = e1 - f1 * (e1 - e0) / (f1 - f0)
            if abs(e2 - energy_guess) > radius:
                raise ConvergenceError(
                    f"no root within radius {radius:g} of guess {energy_guess:g}"
                )
            f2 = det_at(e2)
            e0, f0, e1, f1 = e1, f1, e2, f2
            e_cur, f_cur = e2, f2
            if abs(f2) < tol or abs(e1 - e0) < tol * max(1.0, abs(e1)):
                converged = True
                break
        if not converged:
            raise ConvergenceError(
                f"shooting did not converge in {max_iter} iterations "
                f"(last |det|={abs(f_cur):.3e})"
            )

    # assemble the matched global spinor at the converged energy
    left, right = segments(e_cur)
    ul, ur = left[-1], right[0]
    c = int(np.argmax(np.abs(ur)))
    if ur[c] == 0.0:
        raise ConvergenceError("right segment vanished at the midpoint")
    ratio = ul[c] / ur[c]
    values = np.vstack([left, (right * ratio)[1:]])
    mismatch = float(np.linalg.norm(ul - ratio * ur) / max(np.linalg.norm(ul), 1e-300))
    spinor = Spinor(grid=grid, plus_component=values[:, 0],
                    minus_component=values[:, 1], energy=e_cur)
    return ShootingResult(energy=e_cur, spinor=spinor, iterations=iterations,
                          determinant=f_cur, match_mismatch=mismatch)
