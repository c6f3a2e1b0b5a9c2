"""
Deformación de datos iniciales: mapa de resolución T, deformación con DEC
estricta y tamaño de la deformación.
"""

from deform.solver import (DeformConfig, DeformProblem, DeformSolution, StrictDecReport, deform_to_target,
                           deformation_norm, strict_dec_deform, trust_distance, verify_deform_size)

__all__ = [
    'DeformConfig',
    'DeformProblem',
    'DeformSolution',
    'StrictDecReport',
    'deform_to_target',
    'deformation_norm',
    'strict_dec_deform',
    'trust_distance',
    'verify_deform_size'
]
