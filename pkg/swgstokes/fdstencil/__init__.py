from .fd_scheme import (StencilWeights, stencil_weights, GridIndexer, build_fd_system, check_equivalence,
                        normalized_fd_rows)
