"""
Hamiltoniano de Regge–Teitelboim modificado: forma volumétrica, forma de
superficie, primera variación y residuo de estacionariedad.
"""

from .functional import (HamiltonianSpec, HamiltonianSurface, HamiltonianValue, finite_difference_gradient,
                         hamiltonian_density, hamiltonian_gradient_pairing, hamiltonian_surface_form,
                         hamiltonian_value, inner_boundary_flux, reference_pair, reference_pair_from_charges,
                         stationarity_residual, window_weights)
