"""
Batch front end: parse a problem document, run it, write a trace CSV and a
summary, and exit with a status-mapped code.

Problem documents are INI files with a ``[problem]`` section and one
``[operator]`` section::

    [problem]
    name = c05
    dimension = 1
    x0 = 1
    # Optional; defaults shown.  tol_residual must exceed 2 * eps_feas.
    tol_residual = 1e-8
    divergence_radius = 1e6
    max_iter = 10000
    eps_feas = 1e-9
    eps_dual = 1e-10
    emit_baseline = false

    [operator]
    kind = contraction
    alpha = 0.5

Coordinate lists (``x0``, ``direction``) are comma- or space-separated and
may be wrapped in brackets.  Operator kinds and their keys:

    contraction           alpha in [0, 1)
    translation           alpha > 0, direction (unit, defaults to e_1)
    sign_paper_instance   no keys; dimension must be 1
    subgradient_ell2      no keys
    subgradient_custom    reserved, rejected
"""
import configparser
import csv
import io
import logging
import os
from os.path import join

import click
import numpy as np
from traitlets import (
    Bool,
    Dict,
    Float,
    HasTraits,
    Integer,
    List,
    TraitError,
    Unicode,
    validate,
)

from .constants import (
    CSV_MAX_COORDS,
    DEFAULT_DIVERGENCE_RADIUS,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL_RESIDUAL,
    EPS_DUAL,
    EPS_FEAS,
    EXIT_DIVERGING,
    EXIT_ERROR,
    EXIT_INFEASIBLE,
    EXIT_MAX_ITER,
    EXIT_OK,
    TOL_OVER_EPS_FEAS,
    UNIT_NORMAL_TOL,
)
from .driver import (
    RunConfig,
    RunResult,
    RunStatus,
    TraceEntry,
    halpern_baseline,
    run,
    verify_trace,
)
from .error import SpecError
from .geometry import Vector
from .operators import (
    contraction_operator,
    ell2_example,
    sign_operator,
    subgradient_projector,
    translation_operator,
)
from .oracle import oracle_sweep

PROBLEM_SECTION = 'problem'
OPERATOR_SECTION = 'operator'

OPERATOR_KEYS = {
    'contraction': ('alpha',),
    'translation': ('alpha', 'direction'),
    'sign_paper_instance': (),
    'subgradient_ell2': (),
    'subgradient_custom': (),
}
RESERVED_KINDS = ('subgradient_custom',)

OPTIONAL_PROBLEM_KEYS = (
    'tol_residual',
    'divergence_radius',
    'max_iter',
    'eps_feas',
    'eps_dual',
    'emit_baseline',
)
REQUIRED_PROBLEM_KEYS = ('name', 'dimension', 'x0')

EXIT_CODES = {
    RunStatus.CONVERGED: EXIT_OK,
    RunStatus.FIXED_POINT_HIT: EXIT_OK,
    RunStatus.INFEASIBLE: EXIT_INFEASIBLE,
    RunStatus.DIVERGING: EXIT_DIVERGING,
    RunStatus.MAX_ITER_REACHED: EXIT_MAX_ITER,
}

CSV_SCALAR_COLUMNS = (
    'n',
    'residual',
    'dist_to_x0',
    'num_constraints',
    'qp_working_set_changes',
)

LOG_FORMAT = '%(levelname)-5.5s [%(name)s] %(message)s'

logger = logging.getLogger('haloproj')


class ProblemSpec(HasTraits):
    """
    A validated problem document.
    """
    name = Unicode(help="Basename for the output files.")
    dimension = Integer(1, help="Ambient dimension.")
    operator_kind = Unicode(help="Operator tag.")
    operator_params = Dict(help="Operator parameters, already parsed.")
    x0 = List(Float(), help="Anchor coordinates.")
    tol_residual = Float(DEFAULT_TOL_RESIDUAL)
    divergence_radius = Float(DEFAULT_DIVERGENCE_RADIUS)
    max_iter = Integer(DEFAULT_MAX_ITER)
    eps_feas = Float(EPS_FEAS)
    eps_dual = Float(EPS_DUAL)
    emit_baseline = Bool(False)

    @validate('name')
    def _validate_name(self, proposal):
        name = proposal['value']
        if not name or os.sep in name or name in ('.', '..'):
            raise TraitError("name must be a plain file basename, got %r"
                             % name)
        return name

    @validate('dimension', 'max_iter')
    def _validate_at_least_one(self, proposal):
        if proposal['value'] < 1:
            raise TraitError(
                "%s must be >= 1, got %r"
                % (proposal['trait'].name, proposal['value'])
            )
        return proposal['value']

    @validate('tol_residual', 'divergence_radius', 'eps_feas', 'eps_dual')
    def _validate_positive(self, proposal):
        if not proposal['value'] > 0.0:
            raise TraitError(
                "%s must be positive, got %r"
                % (proposal['trait'].name, proposal['value'])
            )
        return proposal['value']

    def build_operator(self):
        kind, params = self.operator_kind, self.operator_params
        if kind == 'contraction':
            return contraction_operator(params['alpha'])
        elif kind == 'translation':
            return translation_operator(params['alpha'], params['direction'])
        elif kind == 'sign_paper_instance':
            return sign_operator()
        elif kind == 'subgradient_ell2':
            return subgradient_projector(ell2_example(self.dimension))
        raise SpecError('kind', "Unknown operator kind %r" % kind)

    def to_run_config(self, **kwargs):
        return RunConfig(
            x0=Vector(self.x0),
            operator=self.build_operator(),
            max_iter=self.max_iter,
            tol_residual=self.tol_residual,
            divergence_radius=self.divergence_radius,
            eps_feas=self.eps_feas,
            eps_dual=self.eps_dual,
            **kwargs
        )


# =======
# Parsing
# =======

def _parse_float(key, text):
    try:
        value = float(text)
    except ValueError:
        raise SpecError(key, "Expected a number, got %r" % text)
    if not np.isfinite(value):
        raise SpecError(key, "Expected a finite number, got %r" % text)
    return value


def _parse_int(key, text):
    try:
        return int(text)
    except ValueError:
        raise SpecError(key, "Expected an integer, got %r" % text)


def _parse_bool(key, text):
    try:
        return configparser.ConfigParser.BOOLEAN_STATES[text.strip().lower()]
    except KeyError:
        raise SpecError(key, "Expected a boolean, got %r" % text)


def _parse_coords(key, text):
    stripped = text.strip().lstrip('[').rstrip(']')
    parts = stripped.replace(',', ' ').split()
    if not parts:
        raise SpecError(key, "Expected at least one coordinate.")
    return [_parse_float(key, p) for p in parts]


def _parse_operator(section, dimension):
    if 'kind' not in section:
        raise SpecError('kind', "Missing operator kind.")
    kind = section['kind'].strip()
    if kind not in OPERATOR_KEYS:
        raise SpecError(
            'kind',
            "Unknown operator kind %r; expected one of %s"
            % (kind, ', '.join(sorted(OPERATOR_KEYS))),
        )
    if kind in RESERVED_KINDS:
        raise SpecError('kind', "Operator kind %r is reserved." % kind)

    allowed = set(OPERATOR_KEYS[kind]) | {'kind'}
    for key in section:
        if key not in allowed:
            raise SpecError(
                key, "Unexpected key for operator kind %r." % kind,
            )

    params = {}
    if kind in ('contraction', 'translation'):
        if 'alpha' not in section:
            raise SpecError('alpha', "Missing required key.")
        params['alpha'] = _parse_float('alpha', section['alpha'])

    if kind == 'contraction' and not 0.0 <= params['alpha'] < 1.0:
        raise SpecError('alpha', "alpha must lie in [0, 1), got %r"
                        % params['alpha'])
    elif kind == 'translation':
        if not params['alpha'] > 0.0:
            raise SpecError('alpha', "alpha must be positive, got %r"
                            % params['alpha'])
        if 'direction' in section:
            direction = _parse_coords('direction', section['direction'])
        else:
            direction = [1.0] + [0.0] * (dimension - 1)
        if len(direction) != dimension:
            raise SpecError(
                'direction',
                "Expected %d coordinates, got %d"
                % (dimension, len(direction)),
            )
        if abs(np.linalg.norm(direction) - 1.0) > UNIT_NORMAL_TOL:
            raise SpecError('direction', "direction must have unit length.")
        params['direction'] = direction
    elif kind == 'sign_paper_instance' and dimension != 1:
        raise SpecError(
            'dimension',
            "Operator kind %r requires dimension 1, got %d"
            % (kind, dimension),
        )
    return kind, params


def parse_spec(document):
    """
    Parse and validate a problem document.

    Raises
    ------
    SpecError
        Naming the offending key.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(document)
    except configparser.Error as e:
        raise SpecError('document', str(e))

    for section in parser.sections():
        if section not in (PROBLEM_SECTION, OPERATOR_SECTION):
            raise SpecError(section, "Unexpected section.")
    for section in (PROBLEM_SECTION, OPERATOR_SECTION):
        if not parser.has_section(section):
            raise SpecError(section, "Missing section.")

    problem = parser[PROBLEM_SECTION]
    for key in problem:
        if key not in REQUIRED_PROBLEM_KEYS + OPTIONAL_PROBLEM_KEYS:
            raise SpecError(key, "Unexpected key.")
    for key in REQUIRED_PROBLEM_KEYS:
        if key not in problem:
            raise SpecError(key, "Missing required key.")

    values = {
        'name': problem['name'].strip(),
        'dimension': _parse_int('dimension', problem['dimension']),
        'x0': _parse_coords('x0', problem['x0']),
    }
    for key in ('tol_residual', 'divergence_radius', 'eps_feas', 'eps_dual'):
        if key in problem:
            values[key] = _parse_float(key, problem[key])
    if 'max_iter' in problem:
        values['max_iter'] = _parse_int('max_iter', problem['max_iter'])
    if 'emit_baseline' in problem:
        values['emit_baseline'] = _parse_bool(
            'emit_baseline', problem['emit_baseline'],
        )

    spec = ProblemSpec()
    for key, value in values.items():
        try:
            setattr(spec, key, value)
        except TraitError as e:
            raise SpecError(key, str(e))

    if len(spec.x0) != spec.dimension:
        raise SpecError(
            'x0',
            "Expected %d coordinates, got %d"
            % (spec.dimension, len(spec.x0)),
        )
    if not spec.tol_residual > TOL_OVER_EPS_FEAS * spec.eps_feas:
        raise SpecError(
            'tol_residual',
            "Must exceed %g * eps_feas = %r."
            % (TOL_OVER_EPS_FEAS, TOL_OVER_EPS_FEAS * spec.eps_feas),
        )
    spec.operator_kind, spec.operator_params = _parse_operator(
        parser[OPERATOR_SECTION], spec.dimension,
    )
    return spec


# ======
# Output
# ======

def _fmt(value):
    return '%.17g' % value


def trace_header(dim):
    header = list(CSV_SCALAR_COLUMNS)
    if dim <= CSV_MAX_COORDS:
        header.extend('x%d' % i for i in range(dim))
    return header


def write_trace_csv(result, path, dim):
    """
    Write one row per trace entry, numbers with 17 significant digits.
    """
    with io.open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(trace_header(dim))
        for entry in result.trace:
            row = [
                str(entry.n),
                _fmt(entry.residual),
                _fmt(entry.dist_to_x0),
                str(entry.num_constraints),
                str(entry.qp_working_set_changes),
            ]
            if dim <= CSV_MAX_COORDS:
                if entry.x_n is None:
                    row.extend([''] * dim)
                else:
                    row.extend(_fmt(c) for c in entry.x_n)
            writer.writerow(row)


def _point_text(point):
    if point is None:
        return 'none'
    return ' '.join(_fmt(c) for c in point)


def _result_lines(result, prefix=''):
    lines = [
        (prefix + 'status', str(result.status)),
        (prefix + 'iterations', str(result.iterations)),
        (prefix + 'residual', _fmt(result.residual)),
        (prefix + 'beta', _fmt(result.beta)),
        (prefix + 'num_constraints', str(result.trace[-1].num_constraints)),
        (prefix + 'final_point', _point_text(result.final_point)),
    ]
    if result.status is RunStatus.INFEASIBLE:
        lines.extend([
            (prefix + 'infeasible_at', str(result.infeasible_at)),
            (prefix + 'certificate', ' '.join(
                '%d:%s' % (i, _fmt(y))
                for i, y in result.infeasibility_certificate
            )),
            (prefix + 'certificate_verified',
             str(result.certificate_verifies()).lower()),
        ])
    return lines


def write_summary(spec, result, path, baseline=None):
    lines = [
        ('name', spec.name),
        ('operator', spec.build_operator().describe()),
        ('dimension', str(spec.dimension)),
        ('exit_code', str(EXIT_CODES[result.status])),
    ]
    lines.extend(_result_lines(result))
    if baseline is not None:
        lines.extend(_result_lines(baseline, prefix='baseline_'))
    with io.open(path, 'w', newline='\n') as f:
        for key, value in lines:
            f.write(u'%s: %s\n' % (key, value))


def execute(spec, out_dir, baseline=False, logger=logger):
    """
    Run ``spec`` and write ``<name>.trace.csv`` and ``<name>.summary.txt``
    into ``out_dir``.

    Returns
    -------
    exit_code : int
        0 for Converged or FixedPointHit, 2 Infeasible, 3 Diverging,
        4 MaxIterReached, 1 on any error.
    """
    try:
        cfg = spec.to_run_config(log=logger)
        result = run(cfg)
        baseline_result = None
        if baseline or spec.emit_baseline:
            baseline_result = halpern_baseline(cfg)
    except Exception as e:
        logger.error(u'Error while running %s: %s', spec.name, e,
                     exc_info=True)
        return EXIT_ERROR

    try:
        if not os.path.isdir(out_dir):
            os.makedirs(out_dir)
        write_trace_csv(
            result, join(out_dir, spec.name + '.trace.csv'), spec.dimension,
        )
        if baseline_result is not None:
            write_trace_csv(
                baseline_result,
                join(out_dir, spec.name + '.baseline.trace.csv'),
                spec.dimension,
            )
        write_summary(
            spec,
            result,
            join(out_dir, spec.name + '.summary.txt'),
            baseline=baseline_result,
        )
    except (IOError, OSError) as e:
        logger.error(u'Error while writing results for %s: %s', spec.name, e)
        return EXIT_ERROR

    logger.info("%s finished with status %s.", spec.name, result.status)
    return EXIT_CODES[result.status]


def read_trace_csv(path, spec):
    """
    Rebuild a RunResult from an emitted trace, recomputing y_n = T x_n.

    Coordinates are only present for dimensions up to 16; without them only
    scalar columns are restored.
    """
    operator = spec.build_operator()
    entries = []
    with io.open(path, newline='') as f:
        reader = csv.DictReader(f)
        coord_columns = ['x%d' % i for i in range(spec.dimension)]
        has_coords = all(c in reader.fieldnames for c in coord_columns)
        for row in reader:
            x = y = None
            if has_coords and row[coord_columns[0]] != '':
                x = Vector([float(row[c]) for c in coord_columns])
                y = operator(x)
            entries.append(TraceEntry(
                n=int(row['n']),
                x_n=x,
                y_n=y,
                dist_to_x0=float(row['dist_to_x0']),
                residual=float(row['residual']),
                num_constraints=int(row['num_constraints']),
                qp_working_set_changes=int(row['qp_working_set_changes']),
            ))
    final = entries[-1].x_n if entries else None
    return RunResult(None, final, entries)


def _read_spec_file(spec_file):
    with io.open(spec_file) as f:
        return parse_spec(f.read())


# ============
# Command line
# ============

@click.group()
@click.option(
    '--log-level',
    type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR']),
    default='WARNING',
    help="Logging verbosity.",
)
def main(log_level):
    """
    Nearest fixed points by halfspace outer approximation.
    """
    logging.basicConfig(level=getattr(logging, log_level), format=LOG_FORMAT)


@main.command('run')
@click.argument('spec_file', type=click.Path(exists=True, dir_okay=False))
@click.option(
    '--out',
    'out_dir',
    required=True,
    type=click.Path(file_okay=False),
    help="Directory for the trace CSV and summary.",
)
@click.option(
    '--baseline',
    is_flag=True,
    default=False,
    help="Also run the Halpern baseline.",
)
def run_command(spec_file, out_dir, baseline):
    """
    Run the problem in SPEC_FILE.
    """
    try:
        spec = _read_spec_file(spec_file)
    except SpecError as e:
        click.echo(u"Invalid problem document: %s" % e, err=True)
        raise SystemExit(EXIT_ERROR)
    code = execute(spec, out_dir, baseline=baseline)
    summary = join(out_dir, spec.name + '.summary.txt')
    if code != EXIT_ERROR:
        click.echo(u"%s: wrote %s" % (spec.name, summary))
    raise SystemExit(code)


@main.command('verify')
@click.argument('trace_csv', type=click.Path(exists=True, dir_okay=False))
@click.argument('spec_file', type=click.Path(exists=True, dir_okay=False))
def verify_command(trace_csv, spec_file):
    """
    Re-check the trace inequalities on an emitted TRACE_CSV.
    """
    try:
        spec = _read_spec_file(spec_file)
        cfg = spec.to_run_config()
        result = read_trace_csv(trace_csv, spec)
    except (SpecError, ValueError, KeyError) as e:
        click.echo(u"Cannot verify %s: %s" % (trace_csv, e), err=True)
        raise SystemExit(EXIT_ERROR)

    violations = verify_trace(result, cfg)
    for v in violations:
        click.echo(
            u"violation %s: m=%s n=%s excess=%s"
            % (v.check, v.m, v.n, _fmt(v.excess))
        )
    if violations:
        raise SystemExit(EXIT_ERROR)
    click.echo(u"%s: %d iterate(s), no violations" % (
        trace_csv, result.iterations,
    ))


@click.command('oracle-sweep')
@click.option('--seeds', default=1000, type=click.IntRange(min=1),
              help="Number of seeded instances to compare.")
def oracle_sweep_command(seeds):
    """
    Compare the active-set projection with the brute-force oracle.
    """
    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)
    disagreements = oracle_sweep(range(seeds), logger=logger)
    agreed = seeds - len(disagreements)
    click.echo(u"%d/%d instances agree" % (agreed, seeds))
    for report in disagreements:
        click.echo(u"disagreement at seed %d: %s" % (
            report.instance.seed, report.describe(),
        ))
    if disagreements:
        raise SystemExit(EXIT_ERROR)
