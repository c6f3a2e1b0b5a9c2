"""
Interfaz de línea de comandos del kit: cada subcomando construye o carga
un conjunto de datos, ejecuta sus verificaciones y emite un informe JSON
por stdout y un resumen legible por stderr.

Códigos de salida: 0 éxito, 1 alguna verificación fallida, 2 error de
uso, de E/S o del kit.
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from asymptotics import classify_kid, expansion_relations, fit_expansion, solve_aux_poisson
from charges import adm_charges, beta_flux, flux_identity_suite, ricci_energy_flux
from constraints import (InitialDataSet, constraint_map, dec_margin, dec_transport_check, dec_verdict,
                         mass_current)
from constraints.dec import current_norm
from data.container import load, save
from data.generators import gaussian_bump, generate, random_rotation, static_lapse
from data.manifest import DatasetManifest, default_chart_spec
from data.reports import CheckReport, convergence_table
from deform import DeformConfig, deformation_norm, strict_dec_deform
from fields import Field, make_chart, random_polynomial
from hamiltonian import HamiltonianSpec, hamiltonian_surface_form, hamiltonian_value
from linearized import LapseShiftPair, kid_residuals, pairing_defect, seeded_directions
from utils.config import (DEFAULT_DIMENSION, DEFAULT_NODES, DEFAULT_R_INNER, DEFAULT_R_OUTER, FAMILIES,
                          FD_ORDER, H_NORM_LIMIT, get_solver_config)
from utils.errors import FitError, MetricError, ToolkitError
from utils.helpers import observed_rate, parse_float_list

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2

SUITES = ("flux-identities", "adjoint-pairing", "kid-residuals", "dec-algebra", "convergence")

# Tolerancias por defecto de cada subcomando (sobrescribibles con --tol)
CHARGES_TOL = 1e-3
CONSTRAINT_TOL = 1e-6
RELATIONS_TOL = 1e-2
BETA_REL_TOL = 5e-2
HAMILTONIAN_REL_TOL = 2e-2
DEFORM_RESIDUAL_TOL = 1e-6
DEFORM_MAX_NEWTON = 10
FLUX_IDENTITY_TOL = 1e-8
PAIRING_REL_TOL = 1e-3
KID_RESIDUAL_TOL = 1e-3
DEC_ALGEBRA_TOL = 1e-12
RATE_SLACK = 0.5
VACUUM_FAMILIES = ("euclidean", "schwarzschild")


class UsageError(Exception):
    """Combinación de opciones inválida detectada tras el análisis de argumentos."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    source = parser.add_argument_group("datos")
    source.add_argument("--input", metavar="DIR", help="Directorio de un dataset guardado")
    source.add_argument("--family", choices=FAMILIES, help="Familia exacta a generar")
    source.add_argument("--m", type=float, default=1.0, help="Masa de Schwarzschild")
    source.add_argument("--P", default="0,0,0.5", help="Momento P* de Bowen–York (F,F,F)")
    source.add_argument("--amplitude", type=float, default=1.0, help="Amplitud A de u = 1 + A|x|^(−k)")
    source.add_argument("--power", type=float, default=2.0, help="Potencia k de u = 1 + A|x|^(−k)")
    source.add_argument("--base", default="euclidean", help="Familia base de 'perturbed'")
    source.add_argument("--epsilon", type=float, default=1e-2, help="Amplitud de la perturbación sembrada")
    source.add_argument("--support", default=None, help="Banda radial de la perturbación (R1,R2)")
    source.add_argument("--rotation-seed", type=int, default=None, help="Rotar los datos con una semilla")

    chart = parser.add_argument_group("carta")
    chart.add_argument("--n", type=int, default=DEFAULT_DIMENSION)
    chart.add_argument("--r-inner", type=float, default=DEFAULT_R_INNER)
    chart.add_argument("--r-outer", type=float, default=DEFAULT_R_OUTER)
    chart.add_argument("--nodes", type=int, default=DEFAULT_NODES)
    chart.add_argument("--fd-order", type=int, choices=(2, 4), default=FD_ORDER)

    parser.add_argument("--radii", default=None, help="Radios de evaluación (F,F,F)")
    parser.add_argument("--tol", type=float, default=None, help="Tolerancia de las verificaciones")
    parser.add_argument("--report", choices=("json", "text"), default="json")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adm-toolkit", description="Kit de datos iniciales asintóticamente planos")
    subparsers = parser.add_subparsers(dest="command", parser_class=_Parser)
    subparsers.required = True

    for name, help_text in (("charges", "Energía-momento ADM y flujos auxiliares"),
                            ("constraints", "Operador de restricciones y densidades μ, J"),
                            ("dec-check", "Condición de energía dominante"),
                            ("kid-fit", "Ajuste de la expansión de un KID asintótico"),
                            ("hamiltonian", "Hamiltoniano en forma volumétrica y de superficie"),
                            ("info", "Manifiesto y validación del tipo de decaimiento")):
        _add_common(subparsers.add_parser(name, help=help_text))

    kid = subparsers.choices["kid-fit"]
    kid.add_argument("--pair", choices=("auto", "static", "translation"), default="auto")
    kid.add_argument("--a", type=float, default=1.0, help="Asíntota del lapso (par de traslación)")
    kid.add_argument("--b", default=None, help="Asíntota del desplazamiento (F,F,F)")

    ham = subparsers.choices["hamiltonian"]
    ham.add_argument("--a", type=float, default=1.0)
    ham.add_argument("--b", default=None)
    ham.add_argument("--transition-radius", type=float, default=None)

    info = subparsers.choices["info"]
    info.add_argument("--save", metavar="DIR", default=None, help="Guardar el dataset en DIR")

    deform = subparsers.add_parser("deform", help="Deformación con DEC estricta")
    _add_common(deform)
    deform.add_argument("--lam", type=float, default=1e-3)
    deform.add_argument("--bump-width", type=float, default=None)
    deform.add_argument("--output", metavar="DIR", default=None, help="Guardar los datos deformados")

    verify = subparsers.add_parser("verify", help="Suites de verificación")
    _add_common(verify)
    verify.add_argument("--suite", choices=SUITES, required=True)
    verify.add_argument("--count", type=int, default=None, help="Número de muestras de la suite")
    return parser


def _vector(text: Optional[str], n: int, default: float = 0.0) -> np.ndarray:
    if text is None:
        return np.full(n, default)
    values = parse_float_list(text)
    if len(values) != n:
        raise UsageError(f"se esperaban {n} componentes, recibido '{text}'")
    return np.asarray(values)


def _radii(args) -> Optional[List[float]]:
    return None if args.radii is None else parse_float_list(args.radii)


def build_manifest(args) -> DatasetManifest:
    """Manifiesto de la familia pedida en la línea de comandos."""
    family = args.family or "euclidean"
    parameters: Dict = {}
    families = [family, args.base] if family == "perturbed" else [family]
    for name in families:
        if name == "schwarzschild":
            parameters['m'] = args.m
        elif name == "bowen_york":
            parameters['P'] = parse_float_list(args.P)
        elif name == "conformal":
            parameters.update(amplitude=args.amplitude, power=args.power)
    if family == "perturbed":
        parameters.update(base=args.base, seed=args.seed, epsilon=args.epsilon)
        if args.support is not None:
            parameters['support'] = parse_float_list(args.support)
    if args.rotation_seed is not None:
        parameters['rotation_seed'] = args.rotation_seed
    chart = default_chart_spec()
    chart.update(r_inner=args.r_inner, r_outer=args.r_outer, nodes_per_axis=args.nodes, fd_order=args.fd_order)
    return DatasetManifest(n=args.n, family=family, parameters=parameters, chart=chart)


def load_dataset(args) -> Tuple[InitialDataSet, DatasetManifest]:
    """Cargar ``--input`` o generar ``--family`` (euclídea por defecto)."""
    if args.input and args.family:
        raise UsageError("--input y --family son excluyentes")
    if args.input:
        return load(args.input)
    manifest = build_manifest(args).validate()
    return generate(manifest), manifest


def expected_charges(manifest: DatasetManifest) -> Optional[Tuple[float, np.ndarray]]:
    """(E, P) de las familias exactas; None cuando no hay valor cerrado."""
    n = int(manifest.n)
    params = manifest.parameters
    family = params.get('base') if manifest.family == "perturbed" else manifest.family
    if family == "euclidean":
        E, P = 0.0, np.zeros(n)
    elif family == "schwarzschild":
        E, P = float(params.get('m', 1.0)), np.zeros(n)
    elif family == "bowen_york":
        E, P = 0.0, np.asarray(params.get('P', (0.0, 0.0, 0.5)), dtype=float)
    elif family == "conformal":
        power = float(params.get('power', 2.0))
        if power < n - 2:
            return None
        amplitude = float(params.get('amplitude', 1.0))
        E, P = (2.0 * amplitude if power == n - 2 else 0.0), np.zeros(n)
    else:
        return None
    if params.get('rotation_seed') is not None:
        P = random_rotation(n, int(params['rotation_seed'])) @ P
    return E, P


def run_charges(args, ids: InitialDataSet, manifest: DatasetManifest) -> CheckReport:
    report = CheckReport("charges")
    tol = CHARGES_TOL if args.tol is None else args.tol
    radii = _radii(args)
    charges = adm_charges(ids, radii)
    report.extra('charges', charges.to_dict())
    n = ids.n

    expected = expected_charges(manifest)
    if expected is not None:
        E, P = expected
        report.add('E.error', abs(charges.E - E), tol)
        report.add('P.error', float(np.max(np.abs(np.asarray(charges.P) - P))), tol)
    else:
        report.add('E', charges.E, comparison='info')
        report.add('P.norm', charges.momentum_norm, comparison='info')

    ricci = ricci_energy_flux(ids, radii)
    beta = beta_flux(ids, radii)
    report.add('E.ricci_flux_gap', abs(ricci.limit - charges.E), comparison='info')
    beta_expected = 2.0 * (n - 1) / (n - 2) * charges.E
    report.add('beta.relative_gap', abs(beta.limit - beta_expected) / max(abs(beta_expected), 1.0), BETA_REL_TOL)
    report.extra('beta', beta.limit)
    report.extra('ricci_energy', ricci.limit)
    return report


def run_constraints(args, ids: InitialDataSet, manifest: DatasetManifest) -> CheckReport:
    report = CheckReport("constraints")
    tol = CONSTRAINT_TOL if args.tol is None else args.tol
    densities = mass_current(ids)
    first, second = constraint_map(ids, None, 'modified')
    mask = ids.chart.annulus_mask(2)
    report.add('mu.sup', densities.mu.max_abs(mask), comparison='info')
    report.add('J.sup', densities.J.max_abs(mask), comparison='info')
    report.add('modified_first.sup', first.max_abs(mask), comparison='info')
    report.add('modified_second.sup', second.max_abs(mask), comparison='info')
    if manifest.family in VACUUM_FAMILIES:
        # familias de vacío: μ = J = 0 salvo error de discretización
        report.add('vacuum.mu', densities.mu.max_abs(mask), tol)
        report.add('vacuum.J', densities.J.max_abs(mask), tol)
    elif manifest.family == "bowen_york":
        # π sin traza y sin divergencia sobre δ: J = 0, μ = −½|π|²
        report.add('momentum.J', densities.J.max_abs(mask), tol)
    return report


def run_dec_check(args, ids: InitialDataSet, manifest: DatasetManifest) -> CheckReport:
    report = CheckReport("dec-check")
    margin = dec_margin(ids)
    verdict = dec_verdict(margin, args.tol)
    report.add('dec.min_margin', verdict.min_margin, verdict.tolerance, passed=verdict.passed, comparison='ge')
    report.extra('verdict', verdict.to_dict())
    chart = ids.chart
    node = chart.index_of(np.eye(chart.n)[0] * chart.r_inner)
    report.extra('margin_at_inner_radius', float(margin.values[node]))
    return report


def _kid_pair(args, ids: InitialDataSet, manifest: DatasetManifest) -> LapseShiftPair:
    choice = args.pair
    if choice == "auto":
        choice = "static" if manifest.family == "schwarzschild" else "translation"
    if choice == "static":
        if manifest.family != "schwarzschild":
            raise UsageError("el par estático solo existe para la familia schwarzschild")
        return static_lapse(ids.chart, float(manifest.parameters.get('m', 1.0)))
    return LapseShiftPair.translation(ids.chart, args.a, _vector(args.b, ids.n))


def run_kid_fit(args, ids: InitialDataSet, manifest: DatasetManifest) -> CheckReport:
    report = CheckReport("kid-fit")
    tol = RELATIONS_TOL if args.tol is None else args.tol
    pair = _kid_pair(args, ids, manifest)
    charges = adm_charges(ids, _radii(args))
    aux = solve_aux_poisson(ids)
    fit = fit_expansion(pair, ids, aux)
    relations = expansion_relations(fit, charges, tol)
    for name, value in relations.defects.items():
        report.add(f"relations.{name}", value, tol)

    n = ids.n
    beta_expected = 2.0 * (n - 1) / (n - 2) * charges.E
    report.add('beta.relative_gap', abs(aux.beta - beta_expected) / max(abs(beta_expected), 1.0), BETA_REL_TOL)

    classification = classify_kid(fit.a, fit.b, charges, tol)
    report.add('classification.defect', classification.defect, tol, passed=classification.holds)

    # Sensibilidad a la ventana: se repite el ajuste sobre sus dos tercios exteriores
    r_lo, r_hi = fit.radii_window
    try:
        narrow = fit_expansion(pair, ids, aux, window=(r_lo + (r_hi - r_lo) / 3.0, r_hi))
        shift = max(abs(narrow.A - fit.A), float(np.max(np.abs(np.subtract(narrow.B, fit.B)), initial=0.0)))
        report.add('fit.window_sensitivity', shift, comparison='info')
    except FitError as exc:
        logger.warning(f"Sin estimación de sensibilidad a la ventana: [{exc.code}] {exc}")
    report.extra('fit', fit.to_dict())
    report.extra('charges', charges.to_dict())
    report.extra('classification', classification.to_dict())
    report.extra('beta', aux.beta)
    return report


def run_hamiltonian(args, ids: InitialDataSet, manifest: DatasetManifest) -> CheckReport:
    report = CheckReport("hamiltonian")
    tol = HAMILTONIAN_REL_TOL if args.tol is None else args.tol
    chart = ids.chart
    transition = args.transition_radius
    if transition is None:
        transition = chart.r_inner + 0.25 * (chart.r_outer - chart.r_inner)
    spec = HamiltonianSpec.build(ids, args.a, _vector(args.b, ids.n), transition)
    volume = hamiltonian_value(spec, ids)
    surface = hamiltonian_surface_form(spec, ids, _radii(args))
    scale = max(abs(surface.value), 1.0)
    report.add('volume_vs_surface', abs(volume.value - surface.value) / scale, tol)
    report.add('outer_sensitivity', volume.outer_sensitivity / scale, comparison='info')
    report.extra('volume', volume.to_dict())
    report.extra('surface', surface._asdict())
    return report


def run_info(args, ids: InitialDataSet, manifest: DatasetManifest) -> CheckReport:
    report = CheckReport("info")
    weight = manifest.decay_weight()
    report.add('decay.q1', weight.q1, comparison='info')
    report.extra('manifest', manifest.to_dict())
    report.extra('dataset', ids.describe())
    if args.save:
        save(ids, manifest, args.save)
        report.extra('saved_to', str(args.save))
    return report


def run_deform(args, ids: InitialDataSet, manifest: DatasetManifest) -> CheckReport:
    report = CheckReport("deform")
    tol = DEFORM_RESIDUAL_TOL if args.tol is None else args.tol
    chart = ids.chart
    width = args.bump_width if args.bump_width is not None else 0.25 * chart.r_outer
    config = DeformConfig.from_dict(dict(get_solver_config(), seed=args.seed))
    deformed, result = strict_dec_deform(ids, args.lam, gaussian_bump(chart, width), config)

    solution = result.solution
    report.add('residual', solution.residual_norm, tol)
    report.add('newton_iters', solution.newton_iters, DEFORM_MAX_NEWTON,
               passed=solution.newton_iters <= DEFORM_MAX_NEWTON)
    margin = result.margin_verdict
    report.add('strict_dec.margin', margin.min_margin, margin.tolerance, passed=margin.passed, comparison='ge')
    consequence = result.consequence_verdict
    report.add('strict_dec.consequence', consequence.min_margin, consequence.tolerance,
               passed=consequence.passed, comparison='ge')
    size = deformation_norm(solution)
    report.add('deformation_size', size, comparison='info')
    if args.lam > 0:
        report.add('deformation_size_over_lambda', size / args.lam, comparison='info')
    report.extra('strict_dec', result.to_dict())
    if args.output:
        save(deformed, DatasetManifest(n=manifest.n, family="external",
                                       parameters={'deformed_from': manifest.family, 'lambda': args.lam},
                                       decay=dict(manifest.decay)), args.output)
        report.extra('saved_to', str(args.output))
    return report


# ---------------------------------------------------------------------------
# Suites de verificación
# ---------------------------------------------------------------------------

def _suite_flux_identities(args, ids: InitialDataSet, manifest: DatasetManifest, report: CheckReport) -> None:
    tol = FLUX_IDENTITY_TOL if args.tol is None else args.tol
    chart = ids.chart
    rng = np.random.default_rng(args.seed)
    radius = 0.5 * (chart.r_inner + chart.r_outer)
    count = args.count or 3
    for k in range(count):
        tensor = Field.from_source(chart, random_polynomial(ids.n, (ids.n, ids.n), 3, rng), (2, 0))
        scalar = Field.from_source(chart, random_polynomial(ids.n, (), 3, rng))
        for label, field in (('tensor', tensor), ('scalar', scalar)):
            result = flux_identity_suite(field, radius)
            # defectos relativos a la escala de los coeficientes en la esfera
            scale = max(1.0, radius ** 3)
            for name, value in result.defects.items():
                report.add(f"{label}[{k}].{name}", abs(value) / scale, tol)


def _suite_adjoint_pairing(args, ids: InitialDataSet, manifest: DatasetManifest, report: CheckReport) -> None:
    tol = PAIRING_REL_TOL if args.tol is None else args.tol
    grid = ids.on_grid()
    pair = (static_lapse(ids.chart, float(manifest.parameters.get('m', 1.0)))
            if manifest.family == "schwarzschild" else LapseShiftPair.translation(ids.chart, 1.0, np.zeros(ids.n)))
    for k, direction in enumerate(seeded_directions(ids.chart, args.count or 4, seed=args.seed)):
        defect = pairing_defect(grid, pair, direction)
        report.add(f"pairing[{k}]", abs(defect) / max(direction.max_abs(), 1e-300), tol)


def _suite_kid_residuals(args, ids: InitialDataSet, manifest: DatasetManifest, report: CheckReport) -> None:
    tol = KID_RESIDUAL_TOL if args.tol is None else args.tol
    if manifest.family == "schwarzschild":
        pair = static_lapse(ids.chart, float(manifest.parameters.get('m', 1.0)))
    else:
        pair = LapseShiftPair.translation(ids.chart, 1.0, _vector(None, ids.n))
    residuals = kid_residuals(ids, pair)
    report.add_dict('kid', residuals.sup_norms(), tol)


def _suite_dec_algebra(args, ids: InitialDataSet, manifest: DatasetManifest, report: CheckReport) -> None:
    tol = DEC_ALGEBRA_TOL if args.tol is None else args.tol
    n = ids.n
    chart = make_chart(n, 1.0, 2.0, 5, 2)
    rng = np.random.default_rng(args.seed)
    worst_gap, bound_ok = 0.0, True
    for _ in range(args.count or 100):
        A = rng.standard_normal((n, n) + chart.shape) * 0.1
        g = Field(chart, (2, 0), np.eye(n).reshape((n, n) + (1,) * n) + np.einsum('ik...,jk...->ij...', A, A),
                  symmetric=True)
        J = Field(chart, (0, 1), rng.standard_normal((n,) + chart.shape))
        H = rng.standard_normal((n, n) + chart.shape)
        H = 0.5 * (H + np.swapaxes(H, 0, 1))
        # reescalado para que |h|_g < 3 en todo nodo
        norm = np.sqrt(np.einsum('ij...,ij...->...', H, H))
        h = Field(chart, (2, 0), H * (rng.uniform(0.0, 2.0, chart.shape) / np.maximum(norm, 1e-12)), symmetric=True)
        try:
            check = dec_transport_check(g, J, h)
        except MetricError:
            continue
        worst_gap = max(worst_gap, check.max_gap)
        bound_ok = bound_ok and check.bound_ok
    report.add('transport.max_gap', worst_gap, tol)
    report.add('transport.bound', float(bound_ok), passed=bound_ok, comparison='info')

    big = Field(chart, (2, 0), np.broadcast_to((H_NORM_LIMIT + 1.0) * np.eye(n).reshape((n, n) + (1,) * n),
                                               (n, n) + chart.shape).copy(), symmetric=True)
    euclid = Field.euclidean(chart)
    try:
        dec_transport_check(euclid, Field.zeros(chart, (0, 1)), big)
        rejected = False
    except MetricError:
        rejected = True
    report.add('transport.rejects_large_h', float(rejected), passed=rejected, comparison='info')


def _suite_convergence(args, ids: InitialDataSet, manifest: DatasetManifest, report: CheckReport) -> None:
    if args.input:
        raise UsageError("la suite de convergencia necesita una familia generada")
    coarse_manifest = manifest
    fine_manifest = DatasetManifest.from_dict(manifest.to_dict())
    fine_manifest.chart = dict(manifest.chart, nodes_per_axis=2 * int(manifest.chart['nodes_per_axis']) - 1)

    spacings, errors = [], []
    for current in (coarse_manifest, fine_manifest):
        grid = generate(current).on_grid()
        densities = mass_current(grid)
        # máscara común: la del grueso se replica en el fino por radios
        mask = grid.chart.annulus_mask(2) & (grid.chart.radius >= 2.0 * grid.chart.r_inner)
        mask &= grid.chart.radius <= 0.5 * grid.chart.r_outer
        expected = mass_current(generate(current))
        error = max(np.max(np.abs(densities.mu.values - expected.mu.values)[mask]),
                    np.max(current_norm(grid.g, densities.J.values - expected.J.values)[mask]))
        spacings.append(grid.chart.spacing)
        errors.append(float(error))

    table = convergence_table(spacings, errors)
    rate = observed_rate(errors[0], errors[1], spacings[0] / spacings[1])
    order = int(manifest.chart.get('fd_order', FD_ORDER))
    report.add('rate', rate, RATE_SLACK, passed=bool(rate >= order - RATE_SLACK) or errors[0] < 1e-12,
               comparison='info')
    report.extra('convergence', table.to_dict(orient='records'))


SUITE_RUNNERS: Dict[str, Callable] = {
    "flux-identities": _suite_flux_identities,
    "adjoint-pairing": _suite_adjoint_pairing,
    "kid-residuals": _suite_kid_residuals,
    "dec-algebra": _suite_dec_algebra,
    "convergence": _suite_convergence
}


def run_verify(args, ids: InitialDataSet, manifest: DatasetManifest) -> CheckReport:
    report = CheckReport(f"verify:{args.suite}")
    SUITE_RUNNERS[args.suite](args, ids, manifest, report)
    return report


COMMANDS: Dict[str, Callable] = {
    "charges": run_charges,
    "constraints": run_constraints,
    "dec-check": run_dec_check,
    "kid-fit": run_kid_fit,
    "hamiltonian": run_hamiltonian,
    "deform": run_deform,
    "verify": run_verify,
    "info": run_info
}


def _emit(report: CheckReport, fmt: str) -> None:
    if fmt == "text":
        sys.stdout.write(report.to_text() + "\n")
    else:
        sys.stdout.write(report.to_json() + "\n")
        # Resumen legible aparte del JSON
        sys.stderr.write(report.to_text() + "\n")


def run(argv: Optional[List[str]] = None) -> Tuple[int, Optional[CheckReport]]:
    """
    Ejecutar un subcomando y devolver (código de salida, informe).

    Args:
        argv: Argumentos sin el nombre del programa

    Returns:
        (0, 1 o 2; informe o None si hubo error)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        ids, manifest = load_dataset(args)
        report = COMMANDS[args.command](args, ids, manifest)
        # Toda integral se trunca a la carta: el radio exterior queda en el informe
        report.extra('chart', ids.chart.describe())
    except UsageError as exc:
        sys.stderr.write(f"error de uso: {exc}\n")
        return EXIT_ERROR, None
    except ToolkitError as exc:
        logger.error(str(exc))
        sys.stderr.write(f"error {exc}\n")
        return EXIT_ERROR, None
    except ValueError as exc:
        sys.stderr.write(f"error de uso: {exc}\n")
        return EXIT_ERROR, None
    except OSError as exc:
        logger.error(f"Error de E/S: {exc}")
        sys.stderr.write(f"error de E/S: {exc}\n")
        return EXIT_ERROR, None
    _emit(report, args.report)
    return report.exit_code, report


def main(argv: Optional[List[str]] = None) -> int:
    code, _ = run(argv)
    return code
