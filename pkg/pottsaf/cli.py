#!/usr/bin/env python

"""
Command-line entry point.

Example:

    pottsaf bound zero-temp --table series.csv --form strong --tail-from 142
    pottsaf polygons enumerate --lmax 14
    pottsaf simulate run --region star --beta 2 --sweeps 20000 --observable color:0:1 --seed 7
    pottsaf verify all --level quick
"""
from __future__ import print_function

# external imports
import argparse
import io
import json
import logging
import sys

import yaml

# package imports
from . import gibbs_exact, montecarlo, series_io
from .errors import AcceptanceFailure, InvariantViolation, ValidationError
from .logger import configure_logging
from .models import Beta, Event, RunConfig, Schedule, WeightForm, to_jsonable
from .montecarlo import RegionArrays, parse_observable
from .potts import PottsAF
from .utils import parse_beta, parse_rational
from .verify import run_suite
from .version import __schema_version__, __version__

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as :class:`ValidationError` so that they exit with code 1."""

    def error(self, message):
        raise ValidationError("{}: {}".format(self.prog, message))


class CheckFailed(Exception):
    """A check ran to completion and failed; the payload is still written."""

    def __init__(self, payload):
        super(CheckFailed, self).__init__("check failed")
        self.payload = payload


def _ids(text):
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    try:
        return [int(t) for t in str(text).split(',') if t.strip()]
    except ValueError:
        raise ValidationError("malformed vertex list '{}'".format(text))


def _id_sets(value):
    """One or more vertex lists: repeated flags, a list of lists, or a single flat list."""
    if value is None:
        return []
    if isinstance(value, (list, tuple)) and value and all(isinstance(v, int) for v in value):
        return [list(value)]
    if not isinstance(value, (list, tuple)):
        value = [value]
    return [_ids(v) for v in value]


def _add_region(parser, beta=True):
    parser.add_argument('--region', help="single, star, star+1, double-star, triple-star, ball:<R> or seed:<ids>")
    parser.add_argument('--radius', type=int, help="radius of the diced patch (default: just large enough)")
    if beta:
        parser.add_argument('--beta', help="inverse temperature: a decimal, a fraction, 'inf' or 'ln:<r>'")


def _add_table(parser):
    parser.add_argument('--table', help="polygon table (canonical CSV or moment series)")
    parser.add_argument('--format', choices=('canonical', 'moment-series'), help="format of --table")


def _add_schedule(parser):
    parser.add_argument('--sweeps', type=int)
    parser.add_argument('--thermalization', type=int)
    parser.add_argument('--metropolis-per-wsk', type=int, dest='metropolis_per_wsk')
    parser.add_argument('--no-wsk', action='store_true', dest='no_wsk')
    parser.add_argument('--measure-every', type=int, dest='measure_every')
    parser.add_argument('--observable', action='append', dest='observables', help="repeatable")
    parser.add_argument('--chains', type=int)


def build_parser():
    parser = ArgumentParser(prog='pottsaf', formatter_class=argparse.RawDescriptionHelpFormatter,
                            description=__doc__)
    parser.add_argument('--version', action='version', version=__version__)
    parser.add_argument('--config', dest='config_path', help="run configuration document (JSON or YAML)")
    parser.add_argument('--threads', type=int)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--output', '-o', help="write the payload here instead of stdout")
    parser.add_argument('--verbose', action='store_true')

    groups = parser.add_subparsers(dest='group', metavar='command')
    groups.required = True

    lattice = groups.add_parser('lattice').add_subparsers(dest='action', metavar='action')
    lattice.required = True
    for action in ('build', 'export'):
        p = lattice.add_parser(action)
        p.add_argument('--type', dest='lattice_type', choices=('diced', 'schlafli'))
        p.add_argument('--radius', type=int)
        p.add_argument('--p', type=int)
        p.add_argument('--generations', type=int)

    polygons = groups.add_parser('polygons').add_subparsers(dest='action', metavar='action')
    polygons.required = True
    p = polygons.add_parser('enumerate')
    p.add_argument('--lmax', type=int)
    p.add_argument('--with-p', action='store_true', dest='with_p')
    p.add_argument('--timing', action='store_true', help="emit the per-length timing CSV instead")
    p = polygons.add_parser('import')
    _add_table(p)
    p.add_argument('--merge-lmax', type=int, dest='merge_lmax', help="merge with a self-enumerated prefix")
    p = polygons.add_parser('validate')
    _add_table(p)
    p.add_argument('--lmax', type=int, help="re-enumerate and compare up to this length")
    p.add_argument('--crossing', action='store_true', help="also run the crossing check up to --lmax")
    p = polygons.add_parser('paths')
    p.add_argument('--nmax', type=int)

    bound = groups.add_parser('bound').add_subparsers(dest='action', metavar='action')
    bound.required = True
    p = bound.add_parser('zero-temp')
    _add_table(p)
    p.add_argument('--form', choices=('weak', 'strong'))
    p.add_argument('--tail-from', type=int, dest='tail_from')
    p = bound.add_parser('positive-temp')
    _add_table(p)
    p.add_argument('--lmax', type=int, help="self-enumerate the table to this length when --table is absent")
    p.add_argument('--beta')
    p.add_argument('--betas', help="comma-separated; reports the large-beta profile")
    p.add_argument('--tail-from', type=int, dest='tail_from')
    p = bound.add_parser('tail')
    p.add_argument('--from', type=int, dest='tail_from')
    p.add_argument('--p', help="weight per edge (default 1/2)")
    p = bound.add_parser('v1')
    p.add_argument('--m0', help="lower bound on the V0 magnetization")
    p.add_argument('--beta')

    exact = groups.add_parser('exact').add_subparsers(dest='action', metavar='action')
    exact.required = True
    p = exact.add_parser('measure')
    _add_region(p)
    p = exact.add_parser('events')
    _add_region(p)
    p.add_argument('--event', action='append', dest='events',
                   help="color:<v>:<k>, J:<k|any>:<ids> or improper:<u>:<v>; repeatable")
    p = exact.add_parser('es-identity')
    _add_region(p)
    p.add_argument('--split', action='store_true', help="sum out the V1 sites instead of enumerating them")
    p.add_argument('--delta0', action='append', help="comma-separated V0 ids; repeatable")
    p = exact.add_parser('comparison')
    _add_region(p)
    p.add_argument('--delta1', help="comma-separated V1 ids")
    p.add_argument('--beta0')

    contour = groups.add_parser('contour').add_subparsers(dest='action', metavar='action')
    contour.required = True
    p = contour.add_parser('check')
    _add_region(p)
    p.add_argument('--max-faces', type=int, dest='max_faces', help="also report chi statistics")
    p = contour.add_parser('measure')
    _add_region(p)

    simulate = groups.add_parser('simulate').add_subparsers(dest='action', metavar='action')
    simulate.required = True
    p = simulate.add_parser('run')
    _add_region(p)
    _add_schedule(p)
    p.add_argument('--time-series', dest='time_series', help="observable whose time series is written")
    p.add_argument('--time-series-output', dest='time_series_output', help="CSV path of the time series")
    p = simulate.add_parser('scan')
    _add_region(p, beta=False)
    _add_schedule(p)
    p.add_argument('--betas', help="comma-separated")

    verify = groups.add_parser('verify').add_subparsers(dest='action', metavar='action')
    verify.required = True
    p = verify.add_parser('all')
    p.add_argument('--level', choices=('quick', 'desk'))

    return parser


def load_document(path):
    """Read a run configuration document; JSON is read through the YAML loader."""
    if path is None:
        return RunConfig()
    with io.open(path, 'r', encoding='utf-8') as f:
        return RunConfig.from_dict(yaml.safe_load(f))


class Command(object):
    """One invocation: parsed flags over a run configuration document, and the facade they configure."""

    def __init__(self, args, document):
        self.args = args
        self.document = document
        config = dict(document.constants)
        threads = self.value('threads')
        if threads is not None:
            config['threads'] = threads
        seed = self.value('seed')
        if seed is not None:
            config['seed'] = seed
        if args.verbose:
            config['verbose'] = True
        self.potts = PottsAF(config=config)
        self.seed = self.potts.config['seed']

    @property
    def name(self):
        return "{} {}".format(self.args.group, self.args.action)

    def value(self, name, default=None, key=None):
        flag = getattr(self.args, name, None)
        if flag is not None and flag is not False:
            return flag
        return self.document.get(key or name, default)

    def require(self, name, key=None):
        value = self.value(name, key=key)
        if value is None:
            raise ValidationError("'{}' needs --{}".format(self.name, name.replace('_', '-')))
        return value

    def beta(self, default=None):
        value = self.value('beta', default)
        if value is None:
            raise ValidationError("'{}' needs --beta".format(self.name))
        return parse_beta(value)

    def region(self):
        spec = self.require('region')
        radius = self.value('radius')
        if radius is None:
            radius = self.document.lattice.get('radius')
        quad = self.potts.build_lattice(radius=radius) if radius is not None else None
        return self.potts.build_region(spec, quad)

    def table(self, required=True):
        path = self.value('table')
        if path is None and self.potts.config.get('series_path'):
            path = self.potts.config['series_path']
        if path is None:
            if required:
                raise ValidationError("'{}' needs --table".format(self.name))
            return None
        return self.potts.load_series(path, self.value('format'))

    def schedule(self):
        doc = dict(self.document.schedule)
        for key in ('sweeps', 'thermalization', 'metropolis_per_wsk', 'measure_every'):
            flag = getattr(self.args, key, None)
            if flag is not None:
                doc[key] = flag
        if getattr(self.args, 'no_wsk', False):
            doc['wsk'] = False
        if self.args.seed is not None or 'seed' not in doc:
            doc['seed'] = self.potts.config['seed']
        if 'sweeps' not in doc:
            raise ValidationError("'{}' needs --sweeps".format(self.name))
        schedule = Schedule.from_dict(doc)
        self.seed = schedule.seed
        return schedule

    def observables(self):
        observables = self.value('observables')
        if not observables:
            raise ValidationError("'{}' needs at least one --observable".format(self.name))
        return list(observables)


def _checks_payload(reports):
    payload = {'passed': all(r.passed for r in reports), 'checks': [r.to_dict() for r in reports]}
    if not payload['passed']:
        raise CheckFailed(payload)
    return payload


def lattice_build(command):
    doc = command.document.lattice
    quad = command.potts.build_lattice(command.value('lattice_type') or doc.get('type', 'diced'),
                                       command.value('radius') or doc.get('radius'),
                                       command.value('p') or doc.get('p'),
                                       command.value('generations') or doc.get('generations'))
    return quad if command.args.action == 'build' else command.potts.export_lattice(quad)


def polygons_enumerate(command):
    L_max = int(command.require('lmax'))
    if command.args.timing:
        return command.potts.timing_report(range(6, L_max + 1, 2))
    table = command.potts.count_polygons(L_max, with_p=command.args.with_p)
    if command.args.with_p:
        return table
    return series_io.write_polygon_table(table)


def polygons_import(command):
    paths = list(command.document.get('tables') or [])
    if command.value('table') is None and paths:
        table = command.potts.load_series(paths.pop(0), command.value('format'))
    else:
        table = command.table()
    for path in paths:
        table = series_io.merge_tables(table, command.potts.load_series(path, command.value('format')))
    merge_lmax = command.value('merge_lmax')
    if merge_lmax is not None:
        table = series_io.merge_tables(command.potts.count_polygons(int(merge_lmax)), table)
    return series_io.write_polygon_table(table)


def polygons_validate(command):
    table = command.table()
    L_max = command.value('lmax')
    L_max = int(L_max) if L_max is not None else None
    reports = command.potts.validate_polygons(table, L_max=L_max)
    if command.args.crossing:
        if L_max is None:
            raise ValidationError("--crossing needs --lmax")
        reports.append(command.potts.crossing_check(int(L_max)))
    return _checks_payload(reports)


def polygons_paths(command):
    table, reports = command.potts.count_paths(int(command.require('nmax')))
    payload = _checks_payload(reports)
    payload['paths'] = table
    return payload


def bound_zero_temp(command):
    form = WeightForm.parse(command.value('form', WeightForm.WEAK))
    table = command.table(required=False)
    report = command.potts.zero_temp_bound(table, form, command.value('tail_from'))
    return {'bound': report, 'source': 'table' if table is not None else 'published prefix'}


def bound_positive_temp(command):
    table = command.table(required=False)
    if table is None:
        L_max = command.value('lmax')
        if L_max is None:
            raise ValidationError("'bound positive-temp' needs --table or --lmax")
        table = command.potts.count_polygons(int(L_max))
    betas = command.value('betas')
    if betas:
        if not isinstance(betas, (list, tuple)):
            betas = [b for b in str(betas).split(',') if b.strip()]
        return command.potts.large_beta_profile(table, betas, command.value('tail_from'))
    return command.potts.positive_temp_bound(table, command.beta(), command.value('tail_from'))


def bound_tail(command):
    L_start = int(command.require('tail_from'))
    p = command.value('p')
    tail = command.potts.tail_bound(L_start, parse_rational(p) if p is not None else None)
    return {'tail_from': L_start, 'tail': tail, 'upper_decimal': float(tail.upper())}


def bound_v1(command):
    m0 = parse_rational(command.require('m0'))
    beta = command.beta()
    return {'m0_lower': m0, 'beta': beta.label(), 'v1_upper': command.potts.v1_bound(m0, beta)}


def exact_measure(command):
    measure = command.potts.exact_measure(command.region(), command.beta())
    marginals = {str(v): gibbs_exact.marginal(measure, v) for v in measure.sites}
    return {'measure': measure, 'region': measure.region, 'marginals': marginals}


def _event(geometry, spec):
    if isinstance(spec, dict):
        return Event.from_dict(spec)
    event = parse_observable(geometry, spec).event(geometry)
    if event is None:
        raise ValidationError("'{}' is not an event".format(spec))
    return event


def exact_events(command):
    region = command.region()
    specs = command.value('events')
    if not specs:
        raise ValidationError("'exact events' needs at least one --event")
    geometry = RegionArrays(region)
    events = [_event(geometry, spec) for spec in specs]
    measure = command.potts.exact_measure(region, command.beta())
    return {'events': [{'event': label, 'probability': p}
                       for label, p in command.potts.event_probabilities(measure, events)]}


def exact_es_identity(command):
    region = command.region()
    if command.value('split'):
        measure = command.potts.split_measure(region, command.beta())
    else:
        measure = command.potts.exact_measure(region, command.beta())
    delta0s = _id_sets(command.value('delta0'))
    return _checks_payload([command.potts.es_identity(measure, delta0s=delta0s)])


def exact_comparison(command):
    measure = command.potts.split_measure(command.region(), command.beta())
    delta1 = _ids(command.require('delta1'))
    return _checks_payload([command.potts.comparison(measure, delta1, command.value('beta0'))])


def contour_check(command):
    region = command.region()
    reports = command.potts.contour_checks(region, command.beta(default='inf'))
    max_faces = command.value('max_faces')
    if max_faces:
        reports.append(command.potts.chi_statistics(region, int(max_faces)))
    return _checks_payload(reports)


def contour_measure(command):
    return command.potts.contour_measure(command.region(), command.beta())


def simulate_run(command):
    region = command.region()
    report = command.potts.simulate(region, command.beta(), command.schedule(), command.observables(),
                                    chains=int(command.value('chains', 1)))
    name = command.value('time_series')
    if name:
        text = montecarlo.time_series_csv(report, name)
        path = command.value('time_series_output')
        if path:
            with io.open(path, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
            logger.info("Wrote the time series of %s to %s", name, path)
        else:
            sys.stderr.write(text)
    return report


def simulate_scan(command):
    betas = command.require('betas')
    if not isinstance(betas, (list, tuple)):
        betas = [b for b in str(betas).split(',') if b.strip()]
    _, text = command.potts.scan(command.region(), [Beta.parse(b) for b in betas], command.schedule(),
                                 command.observables(), chains=int(command.value('chains', 1)))
    return text


def verify_all(command):
    level = command.value('level', 'quick')
    try:
        rows = run_suite(command.potts, level)
    except AcceptanceFailure as e:
        e.payload = {'level': level, 'criteria': getattr(e, 'rows', [])}
        raise
    return {'level': level, 'criteria': rows}


HANDLERS = {
    ('lattice', 'build'): lattice_build,
    ('lattice', 'export'): lattice_build,
    ('polygons', 'enumerate'): polygons_enumerate,
    ('polygons', 'import'): polygons_import,
    ('polygons', 'validate'): polygons_validate,
    ('polygons', 'paths'): polygons_paths,
    ('bound', 'zero-temp'): bound_zero_temp,
    ('bound', 'positive-temp'): bound_positive_temp,
    ('bound', 'tail'): bound_tail,
    ('bound', 'v1'): bound_v1,
    ('exact', 'measure'): exact_measure,
    ('exact', 'events'): exact_events,
    ('exact', 'es-identity'): exact_es_identity,
    ('exact', 'comparison'): exact_comparison,
    ('contour', 'check'): contour_check,
    ('contour', 'measure'): contour_measure,
    ('simulate', 'run'): simulate_run,
    ('simulate', 'scan'): simulate_scan,
    ('verify', 'all'): verify_all,
}


def render(payload, command):
    """Text payloads pass through; anything else becomes a JSON document with the schema version and the seed."""
    if isinstance(payload, str):
        return payload
    body = to_jsonable(payload.to_dict() if hasattr(payload, 'to_dict') else payload)
    if not isinstance(body, dict):
        body = {'result': body}
    body['schema_version'] = __schema_version__
    body['command'] = command.name
    body['seed'] = command.seed
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def write(text, path):
    if path:
        with io.open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info("Wrote %s", path)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def main(argv=None):
    """
    Run one command.

    :return: 0 on success, 1 for invalid input (flags, configuration, caps), 2 for failed checks and invariant
        violations
    """

    configure_logging(stdout_free=True)
    command = None
    try:
        args = build_parser().parse_args(argv)
        document = load_document(args.config_path)
        command = Command(args, document)
        if document.get('command') and document.get('command') != command.name:
            logger.warning("the configuration document is for '%s', running '%s'", document.get('command'),
                           command.name)
        payload = HANDLERS[(args.group, args.action)](command)
        write(render(payload, command), command.value('output'))
        logger.info("%s: done", command.name)
        return 0

    except CheckFailed as e:
        write(render(e.payload, command), command.value('output'))
        logger.error("%s: a check failed", command.name)
        return 2
    except AcceptanceFailure as e:
        if command is not None and getattr(e, 'payload', None) is not None:
            write(render(e.payload, command), command.value('output'))
        logger.error("%s", e)
        return 2
    except InvariantViolation as e:
        logger.error("invariant violated: %s", e)
        return 2
    except ValidationError as e:
        logger.error("%s", e)
        return 1
    except (IOError, KeyError) as e:
        logger.error("configuration error: %s", e)
        return 1


if __name__ == '__main__':
    sys.exit(main())
