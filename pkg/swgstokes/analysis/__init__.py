from .exact_solutions import ExactSolution, get_case, check_forcing, cavity_boundary_data, EXACT_CASES
from .error_norms import (ErrorReport, l2_velocity_error, h1_cellcenter_error, l2_pressure_error, extension_l2_norm,
                          s_extension_l2_error, triple_bar_norm, divergence_residual, divergence_limit,
                          cell_center_velocity, mirror_symmetry_defect, trace_error, compute_error_report)
from .convergence import ConvergenceRow, ConvergenceTable, observed_orders, convergence_table, TABLE_NORMS
