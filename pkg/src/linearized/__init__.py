"""
Linealizaciones DΦ y DΦ̄, adjuntos formales, verificación de dualidad y
sistemas de residuos KID.
"""

from .kid import AsymptoticKidCheck, KidResiduals, asymptotic_kid_check, kid_residuals, pairing_defect
from .operators import LinearizationContext, adjoint, check_variant, linearization_context, linearize
from .pairs import (LapseShiftPair, SymPair, bump_direction, default_bump_width, min_bump_width, seeded_directions,
                    support_band)
