"""
Densidades de masa y corriente, operadores de restricciones (normal y
modificado) y álgebra de la condición de energía dominante.
"""

from .data_set import InitialDataSet, MassCurrent, default_decay_type
from .dec import (DecPreservation, DecTransport, DecVerdict, current_norm, dec_margin,
                  dec_preservation_check, dec_transport_check, dec_verdict, default_tolerance)
from .operators import (constraint_map, current_values, mass_current, mass_values,
                        modified_correction, momentum_convert)
