"""
Álgebra métrica, símbolos de Christoffel, curvatura y derivadas
covariantes y de Lie.
"""

from .curvature import (CurvaturePackage, bianchi_defect, christoffel_partials, christoffel_symbols,
                        curvature_package, first_bianchi_defect)
from .derivatives import (conformal_killing_op, conformal_killing_values, covariant_derivative,
                          covariant_values, divergence_of_vector, grid_covariant, hessian_values,
                          killing_values, laplacian_values, lie_derivatives, lie_momentum_values,
                          lower_vector)
from .tensors import (check_positive_definite, full_contraction, inverse_metric, lower_all,
                      metric_algebra, norm_squared, raise_all, sqrt_det, trace_values)
