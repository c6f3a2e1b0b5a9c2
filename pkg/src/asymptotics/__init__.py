"""
Expansiones asintóticas de pares lapso-desplazamiento: problemas de
Poisson auxiliares, ajuste de coeficientes, relaciones con (E, P),
clasificación de KIDs y diagnósticos de rigidez.
"""

from .diagnostics import (AsymptoticKidEquations, RigidityCheck, WeightedResidual, asymptotic_kid_equations,
                          ricci_identity_defect, rigidity_divY_check, rigidity_target)
from .expansion import (ExpansionFit, ExpansionRelations, KidClassification, classify_kid,
                        expansion_relations, fit_expansion, known_terms)
from .poisson import (AuxPotentials, FlatPoissonOperator, fit_radial, fit_window, poisson_operator,
                      shift_sources, solve_aux_poisson, trace_source)
