"""1+1D Dirac bound states with position-dependent mass and general
Lorentz-structure potentials, including PT-symmetric imaginary vector
couplings generated by the mass profile itself."""

from .config import RunConfig, config_from_raw, parse_config
from .diagnostics import (BalanceReport, CurrentDensity, adjoint_row,
                          continuity_residual, current_density, gram_matrix,
                          normalize, normalize_result, orthogonality_balance)
from .errors import (ConfigError, ConvergenceError, Dirac1DError, GridError,
                     MassError, RepresentationError)
from .grid import (Grid1D, GridFunction, build_grid, differentiate, integrate)
from .hamiltonian import (DiracOperator, assemble_hamiltonian,
                          hermiticity_of_operator, reduced_equations_rhs,
                          reduced_residual_norm)
from .lorentz import (GammaRep, LorentzPotential, MassProfile,
                      PTSymmetryReport, assemble_potential_matrix,
                      check_pt_symmetry, gamma0_hermiticity_residual,
                      pt_vector_potential, potential_matrices, sample_mass)
from .report import RunReport, execute, write_outputs
from .solver import (ShootingResult, SpectrumResult, Spinor, classify_reality,
                     shooting_solve, solve_spectrum)

__version__ = "0.1.0"

__all__ = [
    "BalanceReport", "ConfigError", "ConvergenceError", "CurrentDensity",
    "Dirac1DError", "DiracOperator", "GammaRep", "Grid1D", "GridError",
    "GridFunction", "LorentzPotential", "MassError", "MassProfile",
    "PTSymmetryReport", "RepresentationError", "RunConfig", "RunReport",
    "ShootingResult", "SpectrumResult", "Spinor", "adjoint_row",
    "assemble_hamiltonian", "assemble_potential_matrix", "build_grid",
    "check_pt_symmetry", "classify_reality", "config_from_raw",
    "continuity_residual", "current_density", "differentiate", "execute",
    "gamma0_hermiticity_residual", "gram_matrix", "hermiticity_of_operator",
    "integrate", "normalize", "normalize_result", "orthogonality_balance",
    "parse_config", "pt_vector_potential", "potential_matrices",
    "reduced_equations_rhs", "reduced_residual_norm", "sample_mass",
    "shooting_solve", "solve_spectrum", "write_outputs",
]
