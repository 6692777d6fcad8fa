from .saddle_solver import SolverError, SolveReport, solve_saddle, direct_solve_dense, solve_stokes, DENSE_SIZE_LIMIT
from ..assembly.assembler import Solution
