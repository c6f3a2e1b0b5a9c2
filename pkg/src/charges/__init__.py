"""
Energía-momento ADM por flujos con extrapolación radial e identidades de
flujo sobre esferas.
"""

from .adm import ADMCharges, adm_charges, beta_flux, default_radii, resolve_radii, ricci_energy_flux
from .extrapolation import FluxEstimate, estimate_flux, extrapolate_flux
from .identities import FluxIdentityReport, flux_identity_suite
