"""Mass profiles, Lorentz-structure potentials and gamma-matrix machinery.

Conventions (1+1 dimensions, metric diag(+,-)):

* default representation: gamma0 = sigma_x, gamma1 = -i sigma_y, so
  gamma5 = gamma0 gamma1 = sigma_z,
* a general static potential has four channels,
      V = gamma0 V_t + gamma1 V_sp + V_s - i gamma5 V_p,
  i.e. time-component vector, space-component vector, scalar, pseudoscalar,
* the mass-induced vector potential A(x) = (i/2) M'(x)/M(x) is purely
  imaginary for a real mass and PT-symmetric, A(-x) = conj(A(x)), whenever
  M is even.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import GridError, MassError, RepresentationError
from .grid import Grid1D, GridFunction

MASS_FAMILIES = ("constant", "linear", "inverse_linear", "quadratic_even", "double_well")

# families meant as physical masses must stay strictly positive on the grid;
# the two linear-type profiles are allowed to change sign between nodes
_POSITIVE_FAMILIES = frozenset({"constant", "quadratic_even", "double_well"})


@dataclass(frozen=True)
class MassProfile:
    """Closed-form mass family M(x) with analytic derivative.

    Families:
        constant         M = m0
        linear           M = m0 + lam*x
        inverse_linear   M = m0 + lam/x
        quadratic_even   M = m0*(1 + alpha*x^2)
        double_well      M = m0 + lam*(x^2 - a^2)^2
    """

    family: str
    m0: float = 1.0
    lam: float = 0.0
    alpha: float = 0.0
    a: float = 0.0

    def __post_init__(self) -> None:
        if self.family not in MASS_FAMILIES:
            raise MassError(
                f"unknown mass family {self.family!r}; expected one of {MASS_FAMILIES}"
            )

    def mass(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.family == "constant":
            return np.full_like(x, self.m0)
        if self.family == "linear":
            return self.m0 + self.lam * x
        if self.family == "inverse_linear":
            return self.m0 + self.lam / x
        if self.family == "quadratic_even":
            return self.m0 * (1.0 + self.alpha * x * x)
        # double_well
        return self.m0 + self.lam * (x * x - self.a * self.a) ** 2

    def dmass_dx(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.family == "constant":
            return np.zeros_like(x)
        if self.family == "linear":
            return np.full_like(x, self.lam)
        if self.family == "inverse_linear":
            return -self.lam / (x * x)
        if self.family == "quadratic_even":
            return 2.0 * self.m0 * self.alpha * x
        return 4.0 * self.lam * x * (x * x - self.a * self.a)


def sample_mass(profile: MassProfile, grid: Grid1D) -> GridFunction:
    """Sample M(x) on the grid, rejecting profiles that are singular there.

    inverse_linear additionally demands that every node keep at least one
    grid spacing away from the pole at x = 0.
    """
    x = grid.nodes
    if profile.family == "inverse_linear" and np.min(np.abs(x)) < grid.h:
        raise MassError(
            "inverse_linear mass: grid node within one spacing of the pole at x=0"
        )
    m = profile.mass(x)
    if not np.all(np.isfinite(m)):
        raise MassError("mass profile not finite on the grid")
    if np.any(m == 0.0):
        raise MassError("mass profile vanishes at a grid node")
    if profile.family in _POSITIVE_FAMILIES and np.any(m <= 0.0):
        raise MassError(
            f"{profile.family} mass must be strictly positive on the grid "
            f"(min {m.min():g})"
        )
    return GridFunction(grid, m)


def pt_vector_potential(profile: MassProfile, grid: Grid1D) -> GridFunction:
    """The vector potential A = (i/2) M'/M generated by the mass profile.

    Uses the family's analytic derivative, never a finite difference, so the
    result carries no discretization error of its own.
    """
    m = sample_mass(profile, grid)  # validates M != 0 on the nodes
    a = 0.5j * profile.dmass_dx(grid.nodes) / m.values
    return GridFunction(grid, a)


@dataclass(frozen=True)
class PTSymmetryReport:
    residual: float
    symmetric: bool
    tol: float


def check_pt_symmetry(f: GridFunction, tol: float = 1e-12) -> PTSymmetryReport:
    """Measure max |f(-x) - conj(f(x))| over the nodes.

    Requires a grid symmetric about the origin so that -x lands on a node:
    dirichlet grids mirror j <-> n-1-j, periodic grids mirror j <-> (n-j) mod n.
    """
    g = f.grid
    if not g.is_symmetric():
        raise GridError(
            "PT symmetry check requires a grid symmetric about the origin "
            f"(got x_min={g.x_min}, x_max={g.x_max})"
        )
    n = g.n_points
    idx = np.arange(n)
    if g.boundary == "dirichlet":
        mirror = n - 1 - idx
    else:
        mirror = (n - idx) % n
    residual = float(np.max(np.abs(f.values[mirror] - np.conj(f.values))))
    return PTSymmetryReport(residual=residual, symmetric=residual <= tol, tol=tol)


@dataclass(frozen=True)
class GammaRep:
    """A concrete choice of gamma matrices satisfying the 1+1D Clifford algebra."""

    gamma0: np.ndarray
    gamma1: np.ndarray

    def __post_init__(self) -> None:
        g0 = np.asarray(self.gamma0, dtype=complex)
        g1 = np.asarray(self.gamma1, dtype=complex)
        if g0.shape != (2, 2) or g1.shape != (2, 2):
            raise RepresentationError("gamma matrices must be 2x2")
        eye = np.eye(2)
        checks = (
            (g0 @ g0 - eye, "gamma0^2 != 1"),
            (g1 @ g1 + eye, "gamma1^2 != -1"),
            (g0 @ g1 + g1 @ g0, "gamma0 and gamma1 do not anticommute"),
            (g0 - g0.conj().T, "gamma0 is not Hermitian"),
        )
        for resid, msg in checks:
            if np.max(np.abs(resid)) > 1e-12:
                raise RepresentationError(
                    f"{msg} (residual {np.max(np.abs(resid)):.3e})"
                )
        g0 = g0.copy()
        g1 = g1.copy()
        g0.flags.writeable = False
        g1.flags.writeable = False
        object.__setattr__(self, "gamma0", g0)
        object.__setattr__(self, "gamma1", g1)

    @cached_property
    def gamma5(self) -> np.ndarray:
        g5 = self.gamma0 @ self.gamma1
        g5.flags.writeable = False
        return g5

    @classmethod
    def default(cls) -> "GammaRep":
        sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        sigma_y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
        return cls(gamma0=sigma_x, gamma1=-1.0j * sigma_y)

    def transformed(self, s: np.ndarray) -> "GammaRep":
        """Similarity transform by a unitary S: gamma -> S gamma S^dagger."""
        s = np.asarray(s, dtype=complex)
        sh = s.conj().T
        return GammaRep(gamma0=s @ self.gamma0 @ sh, gamma1=s @ self.gamma1 @ sh)

    def clifford_residual(self) -> float:
        """Max deviation of {gamma_mu, gamma_nu} from 2 diag(1,-1)."""
        eye = np.eye(2)
        r = 0.0
        r = max(r, float(np.max(np.abs(self.gamma0 @ self.gamma0 - eye))))
        r = max(r, float(np.max(np.abs(self.gamma1 @ self.gamma1 + eye))))
        r = max(r, float(np.max(np.abs(self.gamma0 @ self.gamma1 + self.gamma1 @ self.gamma0))))
        return r


@dataclass(frozen=True)
class LorentzPotential:
    """The four static channels: time-vector, space-vector, scalar, pseudoscalar."""

    v_t: GridFunction
    v_sp: GridFunction
    v_s: GridFunction
    v_p: GridFunction

    def __post_init__(self) -> None:
        g = self.v_t.grid
        for name in ("v_sp", "v_s", "v_p"):
            if getattr(self, name).grid != g:
                raise GridError(f"potential channel {name} lives on a different grid")

    @property
    def grid(self) -> Grid1D:
        return self.v_t.grid

    @classmethod
    def zero(cls, grid: Grid1D) -> "LorentzPotential":
        z = GridFunction.constant(grid, 0.0)
        return cls(v_t=z, v_sp=z, v_s=z, v_p=z)

    @classmethod
    def from_channels(cls, grid: Grid1D,
                      v_t: Optional[GridFunction] = None,
                      v_sp: Optional[GridFunction] = None,
                      v_s: Optional[GridFunction] = None,
                      v_p: Optional[GridFunction] = None) -> "LorentzPotential":
        z = GridFunction.constant(grid, 0.0)
        return cls(v_t=v_t or z, v_sp=v_sp or z, v_s=v_s or z, v_p=v_p or z)


def potential_matrices(pot: LorentzPotential, rep: Optional[GammaRep] = None) -> np.ndarray:
    """Stack of per-node 2x2 matrices V(x_j), shape (n, 2, 2)."""
    rep = rep or GammaRep.default()
    eye = np.eye(2, dtype=complex)
    vt = pot.v_t.values[:, None, None]
    vsp = pot.v_sp.values[:, None, None]
    vs = pot.v_s.values[:, None, None]
    vp = pot.v_p.values[:, None, None]
    return (rep.gamma0[None] * vt + rep.gamma1[None] * vsp
            + eye[None] * vs - 1.0j * rep.gamma5[None] * vp)


def assemble_potential_matrix(pot: LorentzPotential, node: int,
                              rep: Optional[GammaRep] = None) -> np.ndarray:
    """The 2x2 matrix V(x_j) at one node."""
    rep = rep or GammaRep.default()
    eye = np.eye(2, dtype=complex)
    return (rep.gamma0 * complex(pot.v_t.values[node])
            + rep.gamma1 * complex(pot.v_sp.values[node])
            + eye * complex(pot.v_s.values[node])
            - 1.0j * rep.gamma5 * complex(pot.v_p.values[node]))


def gamma0_hermiticity_residual(pot: LorentzPotential,
                                rep: Optional[GammaRep] = None) -> float:
    """Max-norm of (gamma0 V)^dagger - gamma0 V over the nodes.

    Zero exactly when all four channels are real; equals twice the largest
    anti-Hermitian part otherwise (e.g. 2 max|A| for V_t = A purely imaginary).
    """
    rep = rep or GammaRep.default()
    v = potential_matrices(pot, rep)
    b = np.einsum("ab,nbc->nac", rep.gamma0, v)
    return float(np.max(np.abs(np.conj(np.swapaxes(b, 1, 2)) - b)))
