"""Command-line front end: roots, Markoff maps, verification suites and systole bounds"""

import sys
import json
import logging
import argparse
from typing import Dict, List, Optional, Sequence

from .algebra.cubic_roots import (
    classify_real_roots,
    largest_real_root,
    max_dominant_modulus,
    solve_monic_cubic,
    tau,
)
from .algebra.markoff_map import MarkoffMap
from .characters.character_variety import gt_map, oracle_cross_check
from .config.settings import load_config
from .core.data_models import RunConfig, SystoleBoundModel, VerificationReport
from .core.data_types import (
    BoundaryComponent,
    ConeAngle,
    Cusp,
    DZeroBranch,
    GeodesicBoundary,
    MarkoffTriple,
    MuParams,
    SinkFound,
    SmallRegion,
    SystoleBound,
)
from .core.exceptions import InvalidInputError, MarkoffError
from .farey.farey_tree import BASE_TRIANGLE
from .systoles.systole_bounds import (
    n3_one_sided_bound,
    n3_quasi_fuchsian_bound,
    nonfuchsian_torus_report,
    qf_sphere_bound,
    sphere_systole_bound,
    torus_systole_bound,
    tys_n3,
    tys_sphere,
    tys_torus,
)
from .utils.dot_utils import tree_to_dot
from .utils.export_utils import REPORT_COLUMNS, export_reports, reports_to_frame, write_text
from .utils.literals import (
    format_number,
    format_tuple,
    parse_complex,
    parse_complex_list,
    parse_slope,
    parse_triangle,
)
from .verifiers.sink_verifier import SinkVerifier

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


def _pair(value) -> List[float]:
    z = complex(value)
    return [z.real, z.imag]


def _dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def _emit(args: argparse.Namespace, text: str, payload) -> None:
    if args.output == 'json':
        print(_dumps(payload))
    else:
        print(text)


def _parse_boundary(text: str) -> BoundaryComponent:
    """'cusp', 'length=L' (geodesic boundary) or 'angle=theta' (cone point)"""
    label = text.strip().lower()
    if label == 'cusp':
        return Cusp()
    key, _, value = label.partition('=')
    try:
        number = float(value)
    except ValueError:
        raise InvalidInputError(f"boundary '{text}' is not cusp, length=L or angle=theta")
    if key == 'length':
        return GeodesicBoundary(number)
    if key == 'angle':
        return ConeAngle(number)
    raise InvalidInputError(f"boundary '{text}' is not cusp, length=L or angle=theta")


def _bound_payload(bound: SystoleBound) -> Dict:
    return SystoleBoundModel(quantity=bound.quantity.value, value=bound.value, context=bound.context).model_dump()


def _build_map(args: argparse.Namespace, config: RunConfig) -> MarkoffMap:
    base = MarkoffTriple(*parse_complex_list(args.base, 3))
    if args.mu is not None:
        return MarkoffMap(MuParams(*parse_complex_list(args.mu, 4)), base, config=config)
    lambdas = tuple(parse_complex_list(args.lambdas, 3))
    return MarkoffMap.from_base(base, lambdas, config=config)


# root

def _cmd_root(args: argparse.Namespace, config: RunConfig) -> int:
    high = config.precision == 'high'
    if args.action == 'dominant':
        a = parse_complex(args.value)
        roots = solve_monic_cubic(-3, 0, a, high_precision=high, dps=config.high_precision_dps)
        root = roots.roots[0]
        _emit(args, format_number(root),
              {'a': _pair(a), 'dominant_root': _pair(root), 'roots': [_pair(r) for r in roots.roots],
               'repeated': roots.repeated})
    elif args.action == 'tau':
        a = parse_complex(args.value)
        value = tau(a, high_precision=high)
        _emit(args, format_number(value), {'a': _pair(a), 'tau': _pair(value)})
    elif args.action == 'real':
        mu = parse_complex(args.value)
        if mu.imag != 0:
            raise InvalidInputError(f"real roots need a real parameter, got {args.value}")
        root = largest_real_root(mu.real)
        _emit(args, format_number(root), {'mu': mu.real, 'largest_real_root': root})
    elif args.action == 'classify':
        mu = parse_complex(args.value)
        if mu.imag != 0:
            raise InvalidInputError(f"the real root classification needs a real parameter, got {args.value}")
        result = classify_real_roots(mu.real)
        _emit(args, f"case {result.case}: {format_tuple(result.roots)}",
              {'mu': mu.real, 'case': result.case, 'roots': list(result.roots)})
    else:
        r = float(parse_complex(args.value).real)
        value = max_dominant_modulus(r)
        _emit(args, format_number(value), {'radius': r, 'max_dominant_modulus': value})
    return EXIT_OK


# gt

def _cmd_gt(args: argparse.Namespace, config: RunConfig) -> int:
    traces = [parse_complex(v) for v in (args.a, args.b, args.c, args.d)]
    mu = gt_map(*traces)
    _emit(args, format_tuple(mu.as_tuple()), {'traces': [_pair(t) for t in traces],
                                              'mu': [_pair(v) for v in mu.as_tuple()]})
    return EXIT_OK


# map

def _cmd_map(args: argparse.Namespace, config: RunConfig) -> int:
    phi = _build_map(args, config)

    if args.action == 'eval':
        slope = parse_slope(args.slope)
        value = phi.region_value(slope)
        _emit(args, format_number(value), {'slope': str(slope), 'value': _pair(value)})

    elif args.action == 'reduce':
        start = parse_triangle(args.start) if args.start else BASE_TRIANGLE
        outcome = phi.trace_reduce(start, depth_cap=config.depth_cap)
        payload = {'start': str(start), 'steps': len(outcome.path) - 1, 'path': [str(v) for v in outcome.path]}
        if isinstance(outcome, SinkFound):
            text = f"sink at {outcome.vertex}: {format_tuple(outcome.triple.as_tuple())}"
            payload.update(outcome='sink', vertex=str(outcome.vertex),
                           triple=[_pair(v) for v in outcome.triple.as_tuple()])
        elif isinstance(outcome, SmallRegion):
            text = f"region {outcome.slope} has |value| < 2: {format_number(outcome.value)}"
            payload.update(outcome='small_region', slope=str(outcome.slope), value=_pair(outcome.value))
        else:
            text = f"depth cap {config.depth_cap} reached at {outcome.path[-1]}"
            payload.update(outcome='depth_exceeded', vertex=str(outcome.path[-1]))
        _emit(args, f"{text} ({payload['steps']} steps)", payload)

    elif args.action == 'min':
        slope, value = phi.min_region_search(args.radius)
        _emit(args, f"{slope}: {format_number(value)}", {'slope': str(slope), 'value': _pair(value),
                                                        'radius': args.radius})

    elif args.action == 'snapshot':
        phi.min_region_search(args.radius)
        print(_dumps(phi.snapshot().model_dump()))

    else:
        text = tree_to_dot(phi, args.radius)
        if args.dot_file:
            write_text(text, args.dot_file)
        else:
            sys.stdout.write(text)
    return EXIT_OK


# verify

def _print_reports(args: argparse.Namespace, reports: Sequence[VerificationReport]) -> None:
    if args.output == 'json':
        records = [json.loads(r.to_json()) for r in reports]
        print(_dumps(records[0] if len(records) == 1 else records))
        return
    frame = reports_to_frame(reports)
    print(frame[REPORT_COLUMNS].to_string(index=False))


def _cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    verifier = SinkVerifier(config)
    seed = config.seed
    if args.suite == 'sink-complex':
        reports = [verifier.verify_complex_sink_constant(parse_complex(args.mu), config.samples, seed,
                                                         refinement_rounds=args.refine)]
    elif args.suite == 'sink-real':
        mu = parse_complex(args.mu)
        if mu.imag != 0:
            raise InvalidInputError(f"sink-real needs a real parameter, got {args.mu}")
        reports = [verifier.verify_real_sink(mu.real, grid_extent=args.extent, grid_steps=args.steps)]
    elif args.suite == 'sink-positive':
        values = parse_complex_list(args.mu, 4)
        if any(v.imag != 0 for v in values):
            raise InvalidInputError(f"sink-positive needs real parameters, got {args.mu}")
        reports = [verifier.verify_positive_sink(MuParams(*(v.real for v in values)), config.samples, seed)]
    elif args.suite == 'hat':
        reports = [verifier.verify_hat_lemma(config.samples, seed)]
    elif args.suite == 'genus2':
        reports = [verifier.genus2_corner_check(seed=seed)]
    elif args.suite == 'counterexample':
        reports = [verifier.counterexample_check()]
    else:
        reports = verifier.run_all(config.samples, seed)

    _print_reports(args, reports)
    if getattr(args, 'export', None):
        export_reports(reports, args.export)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


# tys / sys

def _cmd_tys(args: argparse.Namespace, config: RunConfig) -> int:
    if args.surface == 'torus':
        k = parse_complex(args.k)
        value = tys_torus(k)
        _emit(args, format_number(value), {'surface': 'torus', 'k': _pair(k), 'tys': value})
    elif args.surface == 'sphere':
        traces = [float(parse_complex(v).real) for v in (args.a, args.b, args.c, args.d)]
        value = tys_sphere(*traces)
        _emit(args, format_number(value), {'surface': 'sphere', 'traces': traces, 'tys': value})
    else:
        value = tys_n3()
        _emit(args, format_number(value), {'surface': 'n3', 'tys': value})
    return EXIT_OK


def _cmd_sys(args: argparse.Namespace, config: RunConfig) -> int:
    if args.surface == 'torus':
        bound = torus_systole_bound(_parse_boundary(args.boundary))
    elif args.surface == 'sphere':
        bound = sphere_systole_bound([_parse_boundary(b) for b in args.boundaries])
    elif args.surface == 'qf-sphere':
        bound = qf_sphere_bound()
    elif args.surface == 'n3':
        bound = n3_quasi_fuchsian_bound()
    elif args.surface == 'n3-character':
        result = n3_one_sided_bound(*parse_complex_list(args.character, 4), radius=args.radius, config=config)
        if isinstance(result, DZeroBranch):
            _emit(args, f"d = 0: a^2 + b^2 + c^2 = 4 {'holds' if result.holds else 'fails'}",
                  {'d_zero': True, 'holds': result.holds})
            return EXIT_OK
        bound = result
    else:
        base = MarkoffTriple(*parse_complex_list(args.base, 3)) if args.base else None
        report = nonfuchsian_torus_report(float(parse_complex(args.k).real), base, config=config)
        text = report.classification.value
        if report.trace_bound is not None:
            text += f": |trace| <= {format_number(report.trace_bound)}"
        _emit(args, text, {'k': report.k, 'classification': report.classification.value,
                           'trace_bound': report.trace_bound, 'small_region_fired': report.small_region_fired})
        return EXIT_OK

    _emit(args, f"{bound.quantity.value} <= {format_number(bound.value)} ({bound.context})", _bound_payload(bound))
    return EXIT_OK


# oracle

def _cmd_oracle(args: argparse.Namespace, config: RunConfig) -> int:
    report = oracle_cross_check(args.trials, args.max_denominator, seed=config.seed,
                                tolerance=args.tolerance, config=config)
    _print_reports(args, [report])
    return EXIT_OK if report.passed else EXIT_FAILED


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument('--seed', type=int, help='Base seed of every random draw')
    common.add_argument('--samples', type=int, help='Sample budget of the sampling verifiers')
    common.add_argument('--workers', type=int, help='Worker processes for sampling')
    common.add_argument('--depth-cap', type=int, dest='depth_cap', help='Step limit of the descent')
    common.add_argument('--precision', choices=['double', 'high'])
    common.add_argument('--output', choices=['text', 'json', 'dot'])
    common.add_argument('--log-level', dest='log_level', choices=['debug', 'info', 'warning', 'error'])
    return common


def _map_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--base', default='3,3,3', help='Triple at the base vertex, e.g. 3,3,3')
    parser.add_argument('--mu', default=None, help='lambda1,lambda2,lambda3,s; derived from --base when omitted')
    parser.add_argument('--lambdas', default='0,0,0', help='lambdas used when --mu is omitted')


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog='markoff-systoles', parents=[common],
                                     description='mu-Markoff maps, sink constants and trace-systole bounds')
    commands = parser.add_subparsers(dest='command', required=True)

    root = commands.add_parser('root', parents=[common], help='Roots of X^3 - 3X^2 + a')
    root.add_argument('action', choices=['dominant', 'tau', 'real', 'classify', 'circle'])
    root.add_argument('value')
    root.set_defaults(handler=_cmd_root)

    gt = commands.add_parser('gt', parents=[common], help='Boundary traces to mu parameters')
    for name in ('a', 'b', 'c', 'd'):
        gt.add_argument(name)
    gt.set_defaults(handler=_cmd_gt)

    map_parser = commands.add_parser('map', help='Markoff map on the Farey tree')
    map_actions = map_parser.add_subparsers(dest='action', required=True)
    map_eval = map_actions.add_parser('eval', parents=[common])
    _map_options(map_eval)
    map_eval.add_argument('--slope', required=True)
    map_reduce = map_actions.add_parser('reduce', parents=[common])
    _map_options(map_reduce)
    map_reduce.add_argument('--start', default=None, help='Starting vertex, e.g. 1/2,1,2/3')
    for action in ('min', 'snapshot', 'dot'):
        sub = map_actions.add_parser(action, parents=[common])
        _map_options(sub)
        sub.add_argument('--radius', type=int, default=3)
        if action == 'dot':
            sub.add_argument('--dot-file', dest='dot_file', default=None)
    map_parser.set_defaults(handler=_cmd_map)

    verify = commands.add_parser('verify', help='Sampling verification suites')
    suites = verify.add_subparsers(dest='suite', required=True)
    sink_complex = suites.add_parser('sink-complex', parents=[common])
    sink_complex.add_argument('--mu', default='0')
    sink_complex.add_argument('--refine', type=int, default=12, help='Refinement rounds around the best sample')
    sink_real = suites.add_parser('sink-real', parents=[common])
    sink_real.add_argument('--mu', default='0')
    sink_real.add_argument('--extent', type=float, default=10.0)
    sink_real.add_argument('--steps', type=int, default=401)
    sink_positive = suites.add_parser('sink-positive', parents=[common])
    sink_positive.add_argument('--mu', default='8,8,8,-28', help='lambda1,lambda2,lambda3,s')
    for suite in ('hat', 'genus2', 'counterexample'):
        suites.add_parser(suite, parents=[common])
    verify_all = suites.add_parser('all', parents=[common])
    verify_all.add_argument('--export', default=None, help='Directory for reports.csv and reports.json')
    verify.set_defaults(handler=_cmd_verify)

    tys = commands.add_parser('tys', help='Maximal trace systoles')
    surfaces = tys.add_subparsers(dest='surface', required=True)
    tys_torus_parser = surfaces.add_parser('torus', parents=[common])
    tys_torus_parser.add_argument('k')
    tys_sphere_parser = surfaces.add_parser('sphere', parents=[common])
    for name in ('a', 'b', 'c', 'd'):
        tys_sphere_parser.add_argument(name)
    surfaces.add_parser('n3', parents=[common])
    tys.set_defaults(handler=_cmd_tys)

    sys_parser = commands.add_parser('sys', help='Systole bounds of hyperbolic and quasi-Fuchsian structures')
    sys_surfaces = sys_parser.add_subparsers(dest='surface', required=True)
    sys_torus = sys_surfaces.add_parser('torus', parents=[common])
    sys_torus.add_argument('boundary', help='cusp, length=L or angle=theta')
    sys_sphere = sys_surfaces.add_parser('sphere', parents=[common])
    sys_sphere.add_argument('boundaries', nargs=4)
    sys_surfaces.add_parser('qf-sphere', parents=[common])
    sys_surfaces.add_parser('n3', parents=[common])
    n3_character = sys_surfaces.add_parser('n3-character', parents=[common])
    n3_character.add_argument('--character', required=True, help='a,b,c,d traces')
    n3_character.add_argument('--radius', type=int, default=6)
    nonfuchsian = sys_surfaces.add_parser('nonfuchsian', parents=[common])
    nonfuchsian.add_argument('k')
    nonfuchsian.add_argument('--base', default=None)
    sys_parser.set_defaults(handler=_cmd_sys)

    oracle = commands.add_parser('oracle', help='Matrix trace oracle')
    oracle_actions = oracle.add_subparsers(dest='action', required=True)
    cross = oracle_actions.add_parser('cross-check', parents=[common])
    cross.add_argument('--trials', type=int, default=100)
    cross.add_argument('--max-denominator', dest='max_denominator', type=int, default=34)
    cross.add_argument('--tolerance', type=float, default=1e-8)
    oracle.set_defaults(handler=_cmd_oracle)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one command and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INVALID

    if getattr(args, 'log_level', None):
        logging.getLogger().setLevel(args.log_level.upper())

    try:
        config = load_config({key: getattr(args, key, None)
                              for key in ('seed', 'samples', 'workers', 'depth_cap', 'precision', 'output')})
        args.output = config.output
        return args.handler(args, config)
    except MarkoffError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
