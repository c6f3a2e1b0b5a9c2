"""
Cartas exteriores, campos tensoriales, cálculo por diferencias finitas,
cuadratura esférica y normas ponderadas.
"""

from .analytic import AnalyticSource, PolynomialSource, combine, random_polynomial
from .calculus import derivative, flat_divergence, flat_laplacian, gradient
from .chart import Chart, DecayWeight, default_q1, make_chart, validate_decay_type
from .field import Field, pointwise_norm
from .norms import volume_integral, weighted_norm, weighted_sup
from .profiles import compact_bump, radial_profile, radial_ramp, smooth_step, tensor_profile
from .quadrature import (SphereRule, integrate_on_sphere, sphere_average, sphere_flux,
                         sphere_flux_estimate, sphere_integral, sphere_rule, unit_sphere_area)
