# python 2 backwards compatibility
from __future__ import print_function, division

# external imports
import logging
import math
import time
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor

import mpmath
import numpy as np

# package imports
from .binning import combine, estimate
from .errors import ValidationError
from .gibbs_exact import ConnectionQuery, _ratio, es_probabilities, event_probability, marginal, weigh
from .models import Beta, ChainState, CheckReport, Event, EstimateReport, Schedule
from .series_io import write_csv
from .union_find import UnionFind

logger = logging.getLogger(__name__)

COLOR_PAIRS = ((1, 2), (1, 3), (2, 3))

INFINITE_BETA_ASSUMPTION = ("beta = inf: WSK clusters with p = 1 and zero-energy heat-bath moves are assumed ergodic "
                            "on ground states with all-1 boundary")


class RegionArrays(object):
    """
    Index arrays of a region for the Monte Carlo kernels.

    Local indices list ``Lambda`` first and then its boundary; index ``n_total`` is a padding slot whose color is 0, so
    it never matches a real color.

    :ivar sites: global ids in local order
    :ivar index: global id -> local index
    :ivar n_lambda: number of sites of ``Lambda``
    :ivar n_total: number of sites of ``Lambda`` plus boundary
    :ivar neighbors: ``(n_lambda, max_degree)`` matrix of local neighbor indices, padded with ``n_total``
    :ivar edge_u, edge_v: local endpoints of the ``Lambda`` edges, in ``region.edges_lambda`` order
    :ivar v0_block, v1_block: local indices of the ``V0`` and ``V1`` sites of ``Lambda``
    """

    def __init__(self, region):
        quad = region.quad
        self.region = region
        self.sites = tuple(region.sites) + tuple(region.boundary)
        self.index = {v: i for i, v in enumerate(self.sites)}
        self.n_lambda = len(region.sites)
        self.n_total = len(self.sites)

        adjacency = [[] for _ in range(self.n_lambda)]
        edge_u, edge_v = [], []
        for u, v in region.edges_lambda:
            a, b = self.index[u], self.index[v]
            edge_u.append(a)
            edge_v.append(b)
            if a < self.n_lambda:
                adjacency[a].append(b)
            if b < self.n_lambda:
                adjacency[b].append(a)
        degree = max(len(row) for row in adjacency) if adjacency else 0
        self.neighbors = np.full((self.n_lambda, degree), self.n_total, dtype=np.int64)
        for i, row in enumerate(adjacency):
            self.neighbors[i, :len(row)] = row

        self.edge_u = np.array(edge_u, dtype=np.int64)
        self.edge_v = np.array(edge_v, dtype=np.int64)
        self.v0_block = np.array([i for i in range(self.n_lambda) if quad.is_v0(self.sites[i])], dtype=np.int64)
        self.v1_block = np.array([i for i in range(self.n_lambda) if not quad.is_v0(self.sites[i])], dtype=np.int64)

    @property
    def n_edges(self):
        return len(self.edge_u)

    def local(self, v):
        if v not in self.index:
            raise ValidationError("vertex {} is neither in the region nor on its boundary".format(v))
        return self.index[v]

    def edge_index(self, u, v):
        a, b = self.local(u), self.local(v)
        hits = np.nonzero(((self.edge_u == a) & (self.edge_v == b)) | ((self.edge_u == b) & (self.edge_v == a)))[0]
        if not len(hits):
            raise ValidationError("{}-{} is not an edge of the region".format(u, v))
        return int(hits[0])


def _generator(seed_sequence):
    return np.random.Generator(np.random.Philox(seed_sequence))


def init_state(geometry, beta, seed_sequence, seed=None):
    """
    A chain started from the staggered ground state: ``V0`` sites 1, ``V1`` sites 2, boundary 1.
    """

    colors = np.ones(geometry.n_total + 1, dtype=np.int8)
    colors[geometry.v1_block] = 2
    colors[geometry.n_total] = 0
    return ChainState(geometry, Beta.parse(beta), colors, _generator(seed_sequence), seed=seed)


def configuration(state):
    """Colors of ``Lambda`` as a site -> color dict."""
    geometry = state.geometry
    return {geometry.sites[i]: int(state.colors[i]) for i in range(geometry.n_lambda)}


def energy(state):
    """Number of monochromatic ``Lambda`` edges."""
    colors = state.colors
    return int(np.count_nonzero(colors[state.geometry.edge_u] == colors[state.geometry.edge_v]))


def local_energy_change(geometry, colors, sites, proposals):
    """
    Energy change of recoloring each of ``sites`` (local indices, pairwise non-adjacent) to ``proposals``.
    """

    neighbor_colors = colors[geometry.neighbors[sites]]
    old = np.count_nonzero(neighbor_colors == colors[sites][:, None], axis=1)
    new = np.count_nonzero(neighbor_colors == np.asarray(proposals)[:, None], axis=1)
    return new - old


def _boltzmann(beta):
    if beta.is_infinite:
        return 0.0
    return float(mpmath.exp(-beta.to_mpf()))


def _metropolis_block(state, block):
    if not len(block):
        return
    colors = state.colors
    rng = state.rng
    proposals = rng.integers(1, 4, size=len(block), dtype=np.int8)
    delta = local_energy_change(state.geometry, colors, block, proposals)
    accept = rng.random(len(block)) < np.exp(-float(state.beta.to_mpf()) * np.maximum(delta, 0))
    colors[block[accept]] = proposals[accept]


def _heat_bath_block(state, block):
    """Uniform choice among the colors of least local energy."""
    if not len(block):
        return
    colors = state.colors
    neighbor_colors = colors[state.geometry.neighbors[block]]
    conflicts = np.stack([np.count_nonzero(neighbor_colors == k, axis=1) for k in (1, 2, 3)], axis=1)
    allowed = conflicts == conflicts.min(axis=1)[:, None]
    r = state.rng.random(len(block)) * allowed.sum(axis=1)
    choice = np.count_nonzero(np.cumsum(allowed, axis=1) <= r[:, None], axis=1)
    colors[block] = (choice + 1).astype(np.int8)


def metropolis_sweep(state):
    """
    One single-site update per ``Lambda`` vertex: the ``V0`` sites and then the ``V1`` sites, each sublattice updated
    at once (no two sites of a sublattice are adjacent).  A uniform proposal is accepted with probability
    ``min(1, exp(-beta dH))``; at ``beta = inf`` the site is redrawn among its zero-energy colors.
    """

    update = _heat_bath_block if state.beta.is_infinite else _metropolis_block
    update(state, state.geometry.v0_block)
    update(state, state.geometry.v1_block)
    state.sweep_count += 1
    return state


def _clusters(geometry, open_edges):
    """Union-find over the closure, joined along the open edges."""
    clusters = UnionFind(geometry.n_total)
    for a, b in zip(geometry.edge_u[open_edges].tolist(), geometry.edge_v[open_edges].tolist()):
        clusters.union(a, b)
    return clusters


def wsk_sweep(state):
    """
    One WSK cluster update: pick a color pair ``{a, b}``, open each ``Lambda`` edge colored ``a``-``b`` with
    probability ``1 - exp(-beta)``, and swap ``a`` and ``b`` on each resulting cluster with probability 1/2.  Clusters
    that contain a boundary vertex keep their colors.
    """

    geometry, colors, rng = state.geometry, state.colors, state.rng
    a, b = COLOR_PAIRS[rng.integers(0, 3)]
    p = 1.0 - _boltzmann(state.beta)

    cu, cv = colors[geometry.edge_u], colors[geometry.edge_v]
    proper = ((cu == a) & (cv == b)) | ((cu == b) & (cv == a))
    open_edges = proper & (rng.random(geometry.n_edges) < p)
    labels = _clusters(geometry, open_edges).labels()

    frozen = np.zeros(geometry.n_total, dtype=bool)
    frozen[labels[geometry.n_lambda:]] = True
    flip_root = rng.random(geometry.n_total) < 0.5

    inner = colors[:geometry.n_lambda]
    roots = labels[:geometry.n_lambda]
    flip = flip_root[roots] & ~frozen[roots] & ((inner == a) | (inner == b))
    inner[flip] = a + b - inner[flip]
    state.sweep_count += 1
    return state


def sample_eta(geometry, colors, beta, rng):
    """
    Edge configuration of the spin-bond coupling: an edge of ``Lambda`` is open with probability
    ``1 - exp(-beta)`` when its endpoints are colored 1 and 2, and closed otherwise.

    :return: boolean array over ``region.edges_lambda``
    """

    beta = Beta.parse(beta)
    cu, cv = colors[geometry.edge_u], colors[geometry.edge_v]
    proper = ((cu == 1) & (cv == 2)) | ((cu == 2) & (cv == 1))
    return proper & (rng.random(geometry.n_edges) < 1.0 - _boltzmann(beta))


def boundary_connected(geometry, eta):
    """Boolean array over the closure: joined to the boundary by open edges (boundary sites included)."""
    if geometry.n_total == geometry.n_lambda:
        return np.zeros(geometry.n_total, dtype=bool)
    clusters = _clusters(geometry, eta)
    for i in range(geometry.n_lambda + 1, geometry.n_total):
        clusters.union(geometry.n_lambda, i)
    labels = clusters.labels()
    return labels == labels[geometry.n_lambda]


class Observable(object):
    """
    A measured quantity, parsed from its name:

    ======================== ===================================================================================
    Name                     Value per measurement
    ======================== ===================================================================================
    ``color:<v>:<k>``        1 when ``sigma_v = k``
    ``diff:<v>``             ``1[sigma_v = 1] - 1[sigma_v = 2]``
    ``M0:<v>``               ``1[sigma_v = 1] - 1[sigma_v != 1] / 2``
    ``J:<k>:<v1>,<v2>,...``  1 when every listed site has color ``k`` (``k = any``: one common color)
    ``improper:<u>:<v>``     1 when the edge ``u``-``v`` is monochromatic
    ``improper_density``     fraction of monochromatic ``Lambda`` edges
    ``perc:<v>``             1 when ``v`` is joined to the boundary in a fresh ``eta``
    ``percJ:<v1>,<v2>,...``  1 when the listed sites share a color and one of them is joined to the boundary
    ======================== ===================================================================================
    """

    def __init__(self, name, kind, sites=(), color=None, edge=None):
        self.name = name
        self.kind = kind
        self.sites = np.array(sites, dtype=np.int64)
        self.color = color
        self.edge = edge

    @property
    def needs_eta(self):
        return self.kind in ('perc', 'percJ')

    def event(self, geometry):
        """The matching :class:`Event` for exact comparison, or ``None`` when the observable is not an event."""
        ids = [geometry.sites[i] for i in self.sites]
        if self.kind == 'color':
            return Event.color_of(ids[0], self.color)
        if self.kind == 'J':
            return Event.J(ids) if self.color is None else Event.J_k(self.color, ids)
        if self.kind == 'improper':
            u, v = geometry.edge_u[self.edge], geometry.edge_v[self.edge]
            return Event.improper(geometry.sites[u], geometry.sites[v])
        return None

    def measure(self, state, connected=None):
        colors = state.colors
        if self.kind == 'color':
            return float(colors[self.sites[0]] == self.color)
        if self.kind == 'diff':
            c = colors[self.sites[0]]
            return float(c == 1) - float(c == 2)
        if self.kind == 'M0':
            return 1.0 if colors[self.sites[0]] == 1 else -0.5
        if self.kind == 'J':
            chosen = colors[self.sites]
            if self.color is None:
                return float(np.all(chosen == chosen[0]))
            return float(np.all(chosen == self.color))
        if self.kind == 'improper':
            g = state.geometry
            return float(colors[g.edge_u[self.edge]] == colors[g.edge_v[self.edge]])
        if self.kind == 'improper_density':
            return energy(state) / max(1, state.geometry.n_edges)
        if self.kind == 'perc':
            return float(connected[self.sites[0]])
        if self.kind == 'percJ':
            chosen = colors[self.sites]
            return float(np.all(chosen == chosen[0]) and np.any(connected[self.sites]))
        raise ValidationError("unknown observable kind {}".format(self.kind))


def _ids(text):
    try:
        return [int(t) for t in text.split(',') if t.strip()]
    except ValueError:
        raise ValidationError("malformed vertex list '{}'".format(text))


def parse_observable(geometry, name):
    """
    :raises ValidationError: for unknown names, malformed ids and vertices outside the closure of the region
    """

    parts = name.strip().split(':')
    kind = parts[0]
    if kind == 'improper_density' and len(parts) == 1:
        return Observable(name, kind)
    single = {'color': 3, 'diff': 2, 'M0': 2, 'perc': 2}
    if single.get(kind) == len(parts):
        sites = [geometry.local(v) for v in _ids(parts[1])]
        if len(sites) != 1:
            raise ValidationError("observable '{}' takes a single vertex".format(name))
        color = None
        if kind == 'color':
            try:
                color = int(parts[2])
            except ValueError:
                raise ValidationError("malformed color in '{}'".format(name))
            if color not in (1, 2, 3):
                raise ValidationError("color must be 1, 2 or 3 in '{}'".format(name))
        return Observable(name, kind, sites, color=color)
    if kind == 'J' and len(parts) == 3:
        if parts[1] == 'any':
            color = None
        elif parts[1] in ('1', '2', '3'):
            color = int(parts[1])
        else:
            raise ValidationError("J observables take a color 1, 2, 3 or 'any', got '{}'".format(parts[1]))
        sites = [geometry.local(v) for v in _ids(parts[2])]
        if not sites:
            raise ValidationError("observable '{}' names no sites".format(name))
        return Observable(name, kind, sites, color=color)
    if kind == 'improper' and len(parts) == 3:
        ends = _ids(parts[1]) + _ids(parts[2])
        if len(ends) != 2:
            raise ValidationError("observable '{}' takes two vertices".format(name))
        return Observable(name, kind, edge=geometry.edge_index(*ends))
    if kind == 'percJ' and len(parts) == 2:
        sites = [geometry.local(v) for v in _ids(parts[1])]
        if not sites:
            raise ValidationError("observable '{}' names no sites".format(name))
        return Observable(name, kind, sites)
    raise ValidationError("unknown observable '{}'".format(name))


def _run_chain(geometry, beta, schedule, observables, seed_sequence):
    state = init_state(geometry, beta, seed_sequence, seed=schedule.seed)
    rows = np.zeros((schedule.measurements, len(observables)))
    needs_eta = any(o.needs_eta for o in observables)

    row = 0
    for sweep in range(schedule.sweeps):
        if schedule.wsk:
            wsk_sweep(state)
        for _ in range(schedule.metropolis_per_wsk):
            metropolis_sweep(state)
        if sweep >= schedule.thermalization and (sweep - schedule.thermalization) % schedule.measure_every == 0:
            connected = None
            if needs_eta:
                connected = boundary_connected(geometry, sample_eta(geometry, state.colors, state.beta, state.rng))
            rows[row] = [o.measure(state, connected) for o in observables]
            row += 1
    return rows


def run_chains(region, beta, schedule, observables, chains=1, threads=1):
    """
    Run independent chains and merge their binned estimates.

    Each chain owns a Philox stream spawned from ``SeedSequence(schedule.seed)``, so the report depends only on the
    seed, the schedule and the number of chains (never on ``threads``).

    :param region: the :class:`Region`
    :param beta: anything :meth:`Beta.parse` accepts
    :param schedule: a :class:`Schedule` or its dict form
    :param observables: observable names (see :class:`Observable`)
    :return: :class:`EstimateReport`
    """

    beta = Beta.parse(beta)
    if not isinstance(schedule, Schedule):
        schedule = Schedule.from_dict(schedule)
    if chains < 1:
        raise ValidationError("chains must be at least 1, got {}".format(chains))
    names = list(OrderedDict.fromkeys(observables))
    if not names:
        raise ValidationError("no observables requested")
    if schedule.measurements < 2:
        raise ValidationError("the schedule takes {} measurements, at least 2 are needed".format(schedule.measurements))

    geometry = RegionArrays(region)
    parsed = [parse_observable(geometry, name) for name in names]
    streams = np.random.SeedSequence(schedule.seed).spawn(chains)

    start = time.time()
    logger.info("Running %d chain(s) of %d sweeps at beta=%s on %d sites", chains, schedule.sweeps, beta.label(),
                geometry.n_lambda)
    with ThreadPoolExecutor(max_workers=max(1, min(threads, chains))) as pool:
        results = list(pool.map(lambda s: _run_chain(geometry, beta, schedule, parsed, s), streams))
    logger.info("Finished %d chain(s) in %.2f s", chains, time.time() - start)

    estimates = OrderedDict()
    series = OrderedDict()
    for j, name in enumerate(names):
        columns = [rows[:, j] for rows in results]
        estimates[name] = combine(estimate(column) for column in columns)
        series[name] = columns
        if not estimates[name].plateau:
            logger.debug("error of %s has not reached a plateau", name)

    assumptions = [INFINITE_BETA_ASSUMPTION] if beta.is_infinite else []
    if not all(e.plateau for e in estimates.values()):
        assumptions.append("binning errors without a plateau: {}".format(
            ", ".join(n for n, e in estimates.items() if not e.plateau)))
    return EstimateReport(estimates, beta, schedule, chains=chains, assumptions=assumptions,
                          region=region.to_dict(), series=series)


def run_experiment(region, beta, schedule, observables, threads=1):
    """A single chain; see :func:`run_chains`."""
    return run_chains(region, beta, schedule, observables, chains=1, threads=threads)


def percolation_estimator(region, beta, schedule, sites=None, delta0s=(), chains=1, threads=1, sigmas=3):
    """
    Boundary-connection probabilities of the coupling, estimated on the same samples as the spin differences they
    equal: ``mu(sigma_v = 1) - mu(sigma_v = 2)`` for ``v`` in ``V0`` (the sign flips on ``V1``), and
    ``mu(J_1) - mu(J_2)`` for each ``Delta0``.

    :param sites: vertices of ``Lambda`` (default: all of them)
    :param delta0s: vertex lists ``Delta0`` for the ``J`` identity
    :return: ``(report, check)``, the :class:`EstimateReport` and a :class:`CheckReport` of the identities within
        ``sigmas`` combined standard errors
    """

    sites = list(region.sites if sites is None else sites)
    rows = []
    for v in sites:
        sign = 1 if region.quad.is_v0(v) else -1
        rows.append(('perc:{}'.format(v), [('diff:{}'.format(v), sign)]))
    for delta0 in delta0s:
        ids = ",".join(str(v) for v in delta0)
        rows.append(('percJ:{}'.format(ids), [('J:1:{}'.format(ids), 1), ('J:2:{}'.format(ids), -1)]))
    if not rows:
        raise ValidationError("no sites or Delta0 sets to estimate")

    names = list(OrderedDict.fromkeys(n for perc, terms in rows for n in [perc] + [t for t, _ in terms]))
    report = run_chains(region, beta, schedule, names, chains=chains, threads=threads)

    failures, details = [], {}
    for perc, terms in rows:
        direct = sum(s * report[name].mean for name, s in terms)
        error = math.sqrt(report[perc].error ** 2 + sum(report[name].error ** 2 for name, _ in terms))
        deviation = abs(direct - report[perc].mean)
        details[perc] = {'percolation': report[perc].mean, 'direct': direct, 'error': error}
        if deviation > max(sigmas * error, 1e-12):
            failures.append(perc)
    check = CheckReport('percolation_identity', not failures, checked=len(rows), failures=failures, details=details)
    logger.info("percolation identities at beta = %s: %d of %d within %g sigma", report.beta.label(),
                len(rows) - len(failures), len(rows), sigmas)
    return report, check


def beta_scan(region, betas, schedule, observables, chains=1, threads=1):
    """
    Estimates over a list of inverse temperatures.

    :return: ``(reports, csv_text)`` where the CSV has a ``beta`` column followed by ``<name>``/``<name>_error`` pairs
    """

    reports = [run_chains(region, beta, schedule, observables, chains=chains, threads=threads) for beta in betas]
    names = list(OrderedDict.fromkeys(observables))
    header = ['beta']
    for name in names:
        header += [name, name + '_error']
    rows = []
    for report in reports:
        row = [report.beta.label()]
        for name in names:
            row += [repr(report[name].mean), repr(report[name].error)]
        rows.append(row)
    return reports, write_csv(header, rows)


def time_series_csv(report, name):
    """``chain,measurement,value`` rows of one observable."""
    if name not in report.series:
        raise ValidationError("the report has no time series for '{}'".format(name))
    rows = ((chain, i, repr(float(value)))
            for chain, column in enumerate(report.series[name]) for i, value in enumerate(column))
    return write_csv(('chain', 'measurement', 'value'), rows)


def exact_value(measure, name, edge_cap=20):
    """
    Exact expectation of an observable under an exact Gibbs measure of the same region and beta, as a float.
    """

    geometry = RegionArrays(measure.region)
    observable = parse_observable(geometry, name)
    event = observable.event(geometry)
    if event is not None:
        return float(event_probability(measure, event))

    ids = [geometry.sites[i] for i in observable.sites]
    if observable.kind in ('diff', 'M0'):
        m = marginal(measure, ids[0])
        if observable.kind == 'diff':
            return float(m[1]) - float(m[2])
        return float(m[1]) - 0.5 * (float(m[2]) + float(m[3]))
    if observable.kind == 'improper_density':
        mean = weigh(measure, [h * c for h, c in enumerate(measure.level_counts)])
        return float(_ratio(measure, mean, measure.partition_function)) / max(1, geometry.n_edges)
    if observable.kind == 'perc':
        query = ConnectionQuery(ids)
    else:
        query = ConnectionQuery(ids, 'any', Event.J(ids))
    return float(es_probabilities(measure, [query], edge_cap)[0])


def oracle_check(measure, report, sigmas=3, edge_cap=20):
    """
    Compare every estimate of a report with the exact expectation: agreement within ``sigmas`` standard errors.
    A zero error only passes on an exact match up to ``1e-12``.
    """

    if measure.beta != report.beta:
        raise ValidationError("the measure is at beta={} but the report at beta={}"
                              .format(measure.beta.label(), report.beta.label()))
    failures, details = [], {}
    for name, e in report.estimates.items():
        exact = exact_value(measure, name, edge_cap)
        deviation = abs(e.mean - exact)
        details[name] = {'exact': exact, 'mean': e.mean, 'error': e.error,
                         'sigmas': deviation / e.error if e.error > 0 else None}
        if deviation > max(sigmas * e.error, 1e-12):
            failures.append(name)
    return CheckReport('mc_oracle', not failures, checked=len(report.estimates), failures=failures, details=details)


def staggered_order_check(report, v0_name, v1_name, sigmas=5):
    """``mu(sigma_v0 = 1) > 1/3 > mu(sigma_v1 = 1)``, each by at least ``sigmas`` standard errors."""
    e0, e1 = report[v0_name], report[v1_name]
    third = 1.0 / 3
    details = {'v0': [e0.mean, e0.error], 'v1': [e1.mean, e1.error]}
    failures = []
    if e0.mean - third < sigmas * e0.error or e0.mean <= third:
        failures.append(v0_name)
    if third - e1.mean < sigmas * e1.error or e1.mean >= third:
        failures.append(v1_name)
    return CheckReport('staggered_order', not failures, checked=2, failures=failures, details=details)


def log_slope(betas, densities):
    """Least-squares slope of ``log(density)`` against ``beta``."""
    betas = np.array([float(Beta.parse(b).to_mpf()) for b in betas])
    densities = np.asarray(densities, dtype=np.float64)
    if len(betas) < 2 or np.any(densities <= 0):
        raise ValidationError("a slope needs at least two positive densities")
    slope, _ = np.polyfit(betas, np.log(densities), 1)
    return float(slope)


def improper_decay_check(region, betas, schedule, chains=1, threads=1, tolerance=0.15):
    """
    Improper-edge density at each beta and the fitted slope of its logarithm, expected close to -1.
    """

    reports, _ = beta_scan(region, betas, schedule, ['improper_density'], chains=chains, threads=threads)
    densities = [r['improper_density'].mean for r in reports]
    slope = log_slope(betas, densities)
    passed = math.fabs(slope + 1) <= tolerance
    return CheckReport('improper_decay', passed, checked=len(betas),
                       details={'betas': [Beta.parse(b).label() for b in betas], 'densities': densities,
                                'slope': slope})
