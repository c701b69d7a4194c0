"""Three-point spectral Nevanlinna-Pick interpolation into the symmetrised bidisc."""
from .config import DEFAULT_GRIDS, DEFAULT_TOL, Grids, Tolerances
from .cpick import PencilReport, c_pencil_matrix, check_c_nu, compute_q, e_class_membership
from .diamond import DiamondProblem, diamond_feasible, diamond_solve, make_diamond
from .errors import GammaInterpError
from .gamma import GammaMap, gamma_inner_check, in_closed_gamma, in_open_gamma, phi, royal_nodes
from .nevpick import NPData, np_solvable, np_solve, np_solve_extremal, pick_matrix
from .pipeline import SolveReport, classify, construct_s, solve_3pt, verify_interpolant
from .problem import InterpProblem
from .rational import BlaschkeProduct, ComplexPoly, MobiusFn, RationalFn

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_GRIDS", "DEFAULT_TOL", "Grids", "Tolerances",
    "PencilReport", "c_pencil_matrix", "check_c_nu", "compute_q", "e_class_membership",
    "DiamondProblem", "diamond_feasible", "diamond_solve", "make_diamond",
    "GammaInterpError",
    "GammaMap", "gamma_inner_check", "in_closed_gamma", "in_open_gamma", "phi", "royal_nodes",
    "NPData", "np_solvable", "np_solve", "np_solve_extremal", "pick_matrix",
    "SolveReport", "classify", "construct_s", "solve_3pt", "verify_interpolant",
    "InterpProblem",
    "BlaschkeProduct", "ComplexPoly", "MobiusFn", "RationalFn",
]
