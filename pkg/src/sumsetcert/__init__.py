"""Exact certification of iterated sumset expansion in F_q^n."""

__version__ = "0.1.0"

from .exponents import (Decomposition, enumerate_monomials, find_decomposition,
                        monomial_count, multinomial_nonzero_mod_p, vp_factorial)
from .ffield import (FieldSpec, enumerate_field, field_arith, make_field,
                     reindex_phi)
from .linalg import FMatrix, column_kernel, express_in_rowspace, rref
from .randexp import (AffineHash, CubePartition, TrialConfig, affine_span_rate,
                      exact_hash_stats, hash_eval, make_partition,
                      random_expansion_trial, sample_gl, surjectivity_rate)
from .shiftops import (GradedDelta, HasseExpansion, HomogeneousOp, OperatorVec,
                       PointList, deg_of_set, delta_spaces, eval_matrix,
                       hasse_expansion, hasse_in_delta, nondeg_degree,
                       op_product)
from .sumsets import (DensePointSet, is_full, iterate_sumset, sum_of_family,
                      sumset)
from .verifiers import (TheoremReport, affine_normalize, crosscheck_phi,
                        egz_bound_check, find_general_position_quad,
                        is_affine_basis, tight_example, verify_2d,
                        verify_main_finalp, verify_main_q, verify_main_symm)

__all__ = [name for name in dir() if not name.startswith("_")]
