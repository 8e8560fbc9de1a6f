"""
Command-line front end.

Exit codes: 0 when the run reached the requested accuracy, 2 when it ran out
of budget, 1 on any error (with a JSON diagnostic on standard error).
"""
import argparse
import csv
from dataclasses import replace
from functools import partial
import json
import logging
import sys
import time

import numpy as np

from subradius import __version__
from subradius.antinorm import PolytopeAntinorm
from subradius.driver import (iterative_rescaling_driver, perturbation_matrices,
                              perturbed_family, regularized_lsr, run_rescaled)
from subradius.errors import InvalidInputError, SubradiusError
from subradius.families import (FamilyKind, FamilySpec, build_family,
                                random_family)
from subradius.family import MatrixFamily, transpose_family
from subradius.jsr import JsrConfig, PolytopeNorm, run_jsr
from subradius.lp import LpOptions
from subradius.lsr import SolverConfig, SolverReport, Termination, Variant
from subradius.mtry import mtry
from subradius.mytypes import *
from subradius.par_list import par_map
from subradius.serialization import (RunManifest, dumps_family,
                                     jsr_report_to_dict, load_family,
                                     load_vertices, report_to_dict,
                                     vertices_to_dict, write_json)
from subradius.settings import ENUMERATION_CAP
from subradius.slp import SlpMode, identify_slp_candidates
from subradius.util import format_real

__all__ = ['BENCH_COLUMNS', 'build_parser', 'cmd_bench', 'cmd_gen', 'cmd_jsr',
           'cmd_lsr', 'main', 'main_entry']

logger = logging.getLogger(__name__)

EXIT_ACCURACY = 0
EXIT_ERROR = 1
EXIT_BUDGET = 2

BENCH_COLUMNS = ['d', 'm', 'density', 'seed', 'theta', 'lower', 'upper',
                 'l_slp', 'l_opt', 'n', 'n_op', 'j_max', 'vertices',
                 'wall_seconds', 'status']

_BUILTINS = {'pascal': FamilyKind.PASCAL_RHOMBUS,
             'pascal_rhombus': FamilyKind.PASCAL_RHOMBUS,
             'illustrative': FamilyKind.ILLUSTRATIVE,
             'critical': FamilyKind.CRITICAL,
             'jsr': FamilyKind.JSR_EXAMPLE}


class _Parser(argparse.ArgumentParser):
    """
    Reports usage errors as `InvalidInputError`, so they exit with code 1
    like every other error instead of argparse's 2.
    """

    def error(self, message):
        raise InvalidInputError(message, 'bad-arguments')


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise InvalidInputError('expected a comma-separated list of reals, '
                                'got %r' % text, 'bad-arguments')


def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise InvalidInputError('expected a comma-separated list of integers, '
                                'got %r' % text, 'bad-arguments')


def _rescale(text: str) -> Union[float, str]:
    if text == 'auto':
        return text
    try:
        c = float(text)
    except ValueError:
        raise InvalidInputError('--rescale takes auto or a positive real',
                                'bad-arguments')
    if not (np.isfinite(c) and c > 0):
        raise InvalidInputError('--rescale must be positive', 'bad-arguments')
    return c


def builtin_spec(text: str) -> FamilySpec:
    """
    Parses ``euler:R``, ``pascal``, ``illustrative``, ``critical`` or ``jsr``.
    """
    name, _, arg = text.partition(':')
    if name == 'euler':
        try:
            return FamilySpec(FamilyKind.EULER, {'r': int(arg)})
        except ValueError:
            raise InvalidInputError('expected euler:R with an odd integer R',
                                    'bad-arguments')
    if name in _BUILTINS and not arg:
        return FamilySpec(_BUILTINS[name])
    raise InvalidInputError('unknown builtin family %r' % text,
                            'bad-arguments')


def random_spec(text: str) -> FamilySpec:
    parts = text.split(',')
    if len(parts) != 4:
        raise InvalidInputError('expected --random d,m,density,seed',
                                'bad-arguments')
    try:
        d, m, density, seed = (int(parts[0]), int(parts[1]), float(parts[2]),
                               int(parts[3]))
    except ValueError:
        raise InvalidInputError('expected --random d,m,density,seed',
                                'bad-arguments')
    return FamilySpec(FamilyKind.RANDOM,
                      {'d': d, 'm': m, 'density': density, 'seed': seed})


def _family(args: argparse.Namespace) -> MatrixFamily:
    if args.family is not None:
        family = load_family(args.family)
    elif args.builtin is not None:
        family = build_family(builtin_spec(args.builtin))
    else:
        family = build_family(random_spec(args.random))
    return transpose_family(family) if args.transpose else family


def _add_family_source(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument('--family', metavar='FILE', help='family file (JSON)')
    src.add_argument('--builtin', metavar='NAME',
                     help='euler:R, pascal, illustrative, critical or jsr')
    src.add_argument('--random', metavar='D,M,DENSITY,SEED',
                     help='seeded random nonnegative family')
    p.add_argument('--transpose', action='store_true',
                   help='transpose every member')


def _add_common(p: argparse.ArgumentParser):
    p.add_argument('-v', '--verbose', action='count', default=0,
                   help='log INFO (-v) or DEBUG (-vv) to standard error')
    p.add_argument('--quiet', action='store_true',
                   help='log errors only')


def _add_solver_options(p: argparse.ArgumentParser):
    p.add_argument('--delta', type=float, default=1e-6,
                   help='target accuracy (default 1e-6)')
    p.add_argument('--max-evals', type=int, default=1000,
                   help='budget on matrix (anti)norm evaluations')
    p.add_argument('--lp-method', choices=['simplex', 'highs'],
                   default='simplex', help='LP backend')
    p.add_argument('--manifest', metavar='FILE',
                   help='also write a run manifest to FILE')


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _add_common(common)
    parser = _Parser(prog='subradius',
                     description='Bounds on the lower and joint spectral '
                                 'radius of matrix families.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    lsr = sub.add_parser('lsr', parents=[common],
                         help='bound the lower spectral radius')
    _add_family_source(lsr)
    _add_solver_options(lsr)
    lsr.add_argument('--algorithm', choices=['s', 'a', 'e'], default='a')
    lsr.add_argument('--theta', type=float, default=1.005,
                     help='eigenvector shrink factor of algorithm e')
    lsr.add_argument('--init', default='ones',
                     help='ones, eig:IDX (1-based) or vertices:FILE')
    lsr.add_argument('--rescale', type=_rescale, default=1.0,
                     help='auto or a positive factor')
    lsr.add_argument('--epsilon', type=_floats, metavar='LIST',
                     help='descending perturbation sizes, solved as a ladder')
    lsr.add_argument('--seed', type=int, default=0,
                     help='seed of the --epsilon perturbation directions')
    lsr.add_argument('--jobs', type=int, default=None,
                     help='worker processes for --epsilon')
    lsr.add_argument('--max-iter', type=int, default=None,
                     help='run the iterative rescaling driver')
    lsr.add_argument('--slp', choices=['enumerate', 'active', 'auto', 'none'],
                     default='auto', help='s.l.p. candidate search')
    lsr.add_argument('--output-vertices', metavar='FILE',
                     help='write the final vertex set to FILE')
    lsr.set_defaults(handler=cmd_lsr)

    jsr = sub.add_parser('jsr', parents=[common],
                         help='bound the joint spectral radius')
    _add_family_source(jsr)
    _add_solver_options(jsr)
    jsr.add_argument('--algorithm', choices=['classic', 'adaptive'],
                     default='adaptive')
    jsr.add_argument('--init', default='ones',
                     help='ones or vertices:FILE')
    jsr.add_argument('--rescale', type=_rescale, default='auto',
                     help='auto or a positive factor')
    jsr.add_argument('--output-vertices', metavar='FILE',
                     help='write the final vertex set to FILE')
    jsr.set_defaults(handler=cmd_jsr)

    bench = sub.add_parser('bench', parents=[common],
                           help='sweep seeded random families, CSV output')
    bench.add_argument('--dims', type=_ints, default=[], metavar='LIST')
    bench.add_argument('--m', type=int, default=2,
                       help='matrices per family')
    bench.add_argument('--densities', type=_floats, default=[1.0],
                       metavar='LIST')
    bench.add_argument('--seeds', type=_ints, default=[], metavar='LIST')
    bench.add_argument('--thetas', type=_floats, default=[1.005],
                       metavar='LIST')
    bench.add_argument('--algorithm', choices=['s', 'a', 'e'], default='e')
    bench.add_argument('--delta', type=float, default=1e-6)
    bench.add_argument('--max-evals', type=int, default=1000)
    bench.add_argument('--init', default='ones', help='ones or eig:IDX')
    bench.add_argument('--epsilon', type=float, default=0.0,
                       help='perturb each family by this amount first')
    bench.add_argument('--jobs', type=int, default=None)
    bench.set_defaults(handler=cmd_bench)

    gen = sub.add_parser('gen', parents=[common], help='write a family file')
    _add_family_source(gen)
    gen.add_argument('--output', '-o', metavar='FILE',
                     help='output file (default standard output)')
    gen.set_defaults(handler=cmd_gen)
    return parser


def _lsr_init(text: str, dim: int) -> Union[str, PolytopeAntinorm]:
    if text.startswith('vertices:'):
        return PolytopeAntinorm(load_vertices(text[len('vertices:'):], dim))
    return text


def _jsr_init(text: str, dim: int) -> Union[str, PolytopeNorm]:
    if text.startswith('vertices:'):
        return PolytopeNorm(load_vertices(text[len('vertices:'):], dim))
    if text != 'ones':
        raise InvalidInputError('--init for jsr takes ones or vertices:FILE',
                                'bad-arguments')
    return text


def _exit_code(terminated_by: Termination) -> int:
    return EXIT_ACCURACY if terminated_by is Termination.ACCURACY \
        else EXIT_BUDGET


def _emit(obj: Mapping[str, Any], out: TextIO):
    json.dump(obj, out, indent=2, sort_keys=True)
    out.write('\n')


def _manifest(args, argv, config, seed, started, report):
    if args.manifest:
        write_json(RunManifest(args.command, argv, config, seed,
                               time.time() - started, report).to_dict(),
                   args.manifest)


def _with_candidates(family: MatrixFamily,
                     report: SolverReport,
                     mode: str) -> SolverReport:
    if mode == 'none':
        return report
    words = identify_slp_candidates(family, report, SlpMode(mode),
                                    ENUMERATION_CAP)
    return replace(report, slp_candidates=tuple(words))


def cmd_lsr(args: argparse.Namespace,
            argv: Sequence[str] = (),
            out: TextIO = sys.stdout) -> int:
    """
    Runs one LSR computation and prints its JSON report.

    Returns:
        int: 0 on accuracy, 2 on budget termination
    """
    started = time.time()
    family = _family(args)
    cfg = SolverConfig(delta=args.delta,
                       max_evals=args.max_evals,
                       theta=args.theta,
                       init=_lsr_init(args.init, family.dim),
                       lp_options=LpOptions(method=args.lp_method))
    variant = Variant(args.algorithm)
    config = {'algorithm': variant.value, 'delta': args.delta,
              'max_evals': args.max_evals, 'theta': args.theta,
              'init': args.init, 'rescale': str(args.rescale),
              'transpose': args.transpose, 'epsilon': args.epsilon,
              'max_iter': args.max_iter, 'slp': args.slp,
              'lp_method': args.lp_method}

    if args.epsilon:
        reports = regularized_lsr(family, cfg, args.epsilon, args.seed,
                                  variant, args.jobs)
        ladder = [dict(report_to_dict(r), epsilon=format_real(e))
                  for e, r in zip(args.epsilon, reports)]
        result = {'ladder': ladder}
        _emit(result, out)
        _manifest(args, argv, config, args.seed, started, result)
        budget = any(r.terminated_by is Termination.BUDGET for r in reports)
        return EXIT_BUDGET if budget else EXIT_ACCURACY

    if args.max_iter is not None:
        report = iterative_rescaling_driver(family, cfg, args.max_iter,
                                            variant)
    else:
        report = run_rescaled(family, cfg, variant, args.rescale)
    report = _with_candidates(family, report, args.slp)
    if args.output_vertices:
        write_json(vertices_to_dict(report.final_vertices),
                   args.output_vertices)
    result = report_to_dict(report)
    _emit(result, out)
    _manifest(args, argv, config, None, started, result)
    return _exit_code(report.terminated_by)


def cmd_jsr(args: argparse.Namespace,
            argv: Sequence[str] = (),
            out: TextIO = sys.stdout) -> int:
    started = time.time()
    family = _family(args)
    cfg = JsrConfig(delta=args.delta,
                    max_evals=args.max_evals,
                    init=_jsr_init(args.init, family.dim),
                    rescale=args.rescale,
                    lp_options=LpOptions(method=args.lp_method))
    report = run_jsr(family, cfg, adaptive=args.algorithm == 'adaptive')
    if args.output_vertices and report.final_vertices is not None:
        write_json(vertices_to_dict(report.final_vertices),
                   args.output_vertices)
    result = jsr_report_to_dict(report)
    _emit(result, out)
    config = {'algorithm': args.algorithm, 'delta': args.delta,
              'max_evals': args.max_evals, 'init': args.init,
              'rescale': str(args.rescale), 'transpose': args.transpose,
              'lp_method': args.lp_method}
    _manifest(args, argv, config, None, started, result)
    return _exit_code(report.terminated_by)


def _solve_point(point: Tuple[int, int, float, int, float],
                 variant: Variant,
                 delta: float,
                 max_evals: int,
                 init: str,
                 epsilon: float) -> SolverReport:
    d, m, density, seed, theta = point
    family = random_family(d, m, density, seed)
    if epsilon > 0:
        family = perturbed_family(family,
                                  perturbation_matrices(d, m, seed),
                                  epsilon)
    cfg = SolverConfig(delta=delta, max_evals=max_evals, theta=theta,
                       init=init)
    return run_rescaled(family, cfg, variant, 'auto')


def bench_row(point: Tuple[int, int, float, int, float],
              variant: Variant,
              delta: float,
              max_evals: int,
              init: str,
              epsilon: float) -> Dict[str, Any]:
    """
    Solves one sweep point; any failure becomes a row with an error status
    instead of aborting the sweep.
    """
    d, m, density, seed, theta = point
    row = {'d': d, 'm': m, 'density': density, 'seed': seed,
           'theta': theta}
    started = time.time()
    attempt = (mtry(lambda: _solve_point(point, variant, delta, max_evals,
                                         init, epsilon))
               .log_failure(logger, 'sweep point %s failed', point))
    wall = '%.3f' % (time.time() - started)
    if attempt.is_failure():
        ex = attempt.get()
        row.update({k: '' for k in BENCH_COLUMNS if k not in row})
        row['wall_seconds'] = wall
        row['status'] = 'error:%s' % getattr(ex, 'reason',
                                             type(ex).__name__)
        return row
    report = attempt.get()
    metrics = report.metrics
    row.update({'lower': format_real(report.lower),
                'upper': format_real(report.upper),
                'l_slp': metrics.l_slp, 'l_opt': metrics.l_opt,
                'n': metrics.n, 'n_op': metrics.n_op, 'j_max': metrics.j_max,
                'vertices': report.vertex_count,
                'wall_seconds': wall,
                'status': report.terminated_by.value})
    return row


def cmd_bench(args: argparse.Namespace,
              argv: Sequence[str] = (),
              out: TextIO = sys.stdout) -> int:
    """
    Runs the sweep ``dims x densities x seeds x thetas`` and writes one CSV
    row per point, in sweep order.
    """
    points = [(d, args.m, density, seed, theta)
              for d in args.dims
              for density in args.densities
              for seed in args.seeds
              for theta in args.thetas]
    rows = par_map(partial(bench_row,
                           variant=Variant(args.algorithm),
                           delta=args.delta,
                           max_evals=args.max_evals,
                           init=args.init,
                           epsilon=args.epsilon),
                   points,
                   args.jobs) if points else []
    writer = csv.DictWriter(out, fieldnames=BENCH_COLUMNS,
                            lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return EXIT_ACCURACY


def cmd_gen(args: argparse.Namespace,
            argv: Sequence[str] = (),
            out: TextIO = sys.stdout) -> int:
    text = dumps_family(_family(args))
    if args.output:
        with open(args.output, 'w') as f:
            f.write(text)
    else:
        out.write(text)
    return EXIT_ACCURACY


def configure_logging(verbose: int, quiet: bool):
    level = (logging.ERROR if quiet
             else logging.DEBUG if verbose >= 2
             else logging.INFO if verbose == 1
             else logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: '
                               '%(message)s')


def _diagnostic(ex: Exception) -> Dict[str, Any]:
    if isinstance(ex, SubradiusError):
        return ex.to_dict()
    return {'error': type(ex).__name__, 'reason': 'io-error',
            'message': str(ex)}


def main(argv: Optional[Sequence[str]] = None,
         out: TextIO = sys.stdout,
         err: TextIO = sys.stderr) -> int:
    """
    Parses `argv` and runs the subcommand.

    Returns:
        int: the exit code
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.verbose, args.quiet)
        return args.handler(args, argv, out)
    except (SubradiusError, OSError) as ex:
        logger.debug('command failed', exc_info=True)
        err.write(json.dumps(_diagnostic(ex), sort_keys=True) + '\n')
        return EXIT_ERROR


def main_entry():
    sys.exit(main())
