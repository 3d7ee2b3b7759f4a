"""Error-inhibiting block finite differences for periodic linear transport."""

from .grid import BlockGrid, GridFunction, build_grid, exact_solution, norms, sample
from .operators import (BlockOperator, SchemeParams, StencilOperator, apply, assemble_bfd,
                        assemble_bfd_stencils, assemble_standard_fd, measure_truncation_order,
                        to_dense)
from .symbol import (ModePair, SymbolDecomposition, asymptotic_check, build_mode_vectors,
                     decompose, decompose_all, mode_pair, stability_scan)
from .propagation import (BUTCHER_RK6, ModalExpansion, RKTableau, dense_expm, modal_decompose,
                          modal_propagate, rk_integrate)
from .postproc import spectral_filter
from .dg import (DGBlocks, ElementBasis, PenaltyCoefficients, element_basis, penalized_dg_blocks,
                 solve_penalties, standard_dg_blocks)

__version__ = "0.1.0"
