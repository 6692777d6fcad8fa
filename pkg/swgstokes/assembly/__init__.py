from .dof_map import DofMap, number_dofs
from .assembler import (BoundaryCompatibilityError, DimensionMismatchError, BoundaryData, SaddleSystem, Solution,
                        assemble, lift_solution, accumulate_matrix, accumulate_vector, COMPATIBILITY_TOLERANCE)
from .matrix_market import dump_system
