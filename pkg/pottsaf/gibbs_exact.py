# python 2 backwards compatibility
from __future__ import print_function, division

# external imports
import itertools
import logging
import time
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import mpmath
import numpy as np

# package imports
from .errors import CapExceededError, InvariantViolation, ValidationError, ZeroProbabilityError
from .lattice import thick_set
from .models import Beta, CheckReport, Event, EventKind, ExactMeasure, GibbsParams, SplitMeasure
from .peierls import contour_weights
from .utils import parse_rational

logger = logging.getLogger(__name__)

DEFAULT_CAP = 3 ** 16
BLOCK_SIZE = 3 ** 10
TOLERANCE = mpmath.mpf('1e-12')


def hamiltonian(region, sigma, tau=None):
    """
    Number of monochromatic ``G`` edges with at least one endpoint in ``Lambda``.

    :param region: the :class:`Region`
    :param sigma: mapping from every site of ``Lambda`` to a color in ``{1, 2, 3}``
    :param tau: boundary colors (default: all 1); missing boundary vertices take color 1
    """

    colors = {b: 1 for b in region.boundary}
    if tau:
        for b, c in tau.items():
            if b not in region.boundary_set:
                raise ValidationError("vertex {} is not on the boundary".format(b))
            colors[b] = c
    for v in region.sites:
        if v not in sigma:
            raise ValidationError("site {} has no color".format(v))
        colors[v] = sigma[v]
    for v, c in colors.items():
        if c not in (1, 2, 3):
            raise ValidationError("vertex {} has color {}, expected 1, 2 or 3".format(v, c))
    return sum(1 for u, v in region.edges_lambda if colors[u] == colors[v])


def decode_block(n_sites, start, stop):
    """Colors of configurations ``start..stop-1`` as an ``int8`` matrix with one column per site."""
    powers = 3 ** np.arange(n_sites, dtype=np.int64)
    index = np.arange(start, stop, dtype=np.int64)
    return ((index[:, None] // powers[None, :]) % 3 + 1).astype(np.int8)


def decode_configuration(measure, index):
    """The configuration with the given index, as a site -> color dict."""
    if index < 0 or index >= measure.n_configurations:
        raise ValidationError("configuration index {} out of range".format(index))
    digits = decode_block(len(measure.sites), index, index + 1)[0]
    return {v: int(digits[j]) for j, v in enumerate(measure.sites)}


def _blocks(total, block_size=BLOCK_SIZE):
    for start in range(0, total, block_size):
        yield start, min(total, start + block_size)


class _EdgeTable(object):
    """Column indices of the ``Lambda`` edges, split into inner edges and edges to the boundary."""

    def __init__(self, region):
        column = {v: j for j, v in enumerate(region.sites)}
        inner_a, inner_b = [], []
        boundary_weight = np.zeros(len(region.sites), dtype=np.int16)
        for u, v in region.edges_lambda:
            if u in column and v in column:
                inner_a.append(column[u])
                inner_b.append(column[v])
            else:
                boundary_weight[column[u] if u in column else column[v]] += 1
        self.inner_a = np.array(inner_a, dtype=np.int64)
        self.inner_b = np.array(inner_b, dtype=np.int64)
        self.boundary_weight = boundary_weight
        self.n_edges = len(region.edges_lambda)

    def energies(self, digits):
        inner = (digits[:, self.inner_a] == digits[:, self.inner_b]).sum(axis=1)
        outer = ((digits == 1) * self.boundary_weight[None, :]).sum(axis=1)
        return (inner + outer).astype(np.int16)


def level_weights(beta, levels, precision_bits=128):
    """
    ``x**h`` for ``h = 0..levels-1`` with ``x = exp(-beta)``: exact fractions when ``x`` is exact (so that
    ``beta = inf`` gives 1 for the ground states and 0 otherwise), else mpmath reals.
    """

    beta = Beta.parse(beta)
    if beta.is_exact:
        x = beta.boltzmann
        return [x ** h for h in range(levels)]
    with mpmath.workprec(precision_bits):
        x = beta.boltzmann_mpf(precision_bits)
        return [x ** h for h in range(levels)]


def enumerate_measure(region, beta, precision_bits=128, configuration_cap=DEFAULT_CAP, threads=1):
    """
    The Gibbs measure of ``region`` with boundary color 1, by exhaustive enumeration.

    :param region: the :class:`Region`
    :param beta: anything :meth:`Beta.parse` accepts
    :param precision_bits: precision of the weights when ``exp(-beta)`` is not exact
    :param configuration_cap: refuse regions with more configurations than this
    :param threads: worker threads over configuration blocks
    :return: the :class:`ExactMeasure`
    :raises CapExceededError: when ``3**|Lambda|`` exceeds the cap
    """

    beta = Beta.parse(beta)
    n_sites = len(region.sites)
    total = 3 ** n_sites
    if total > configuration_cap:
        raise CapExceededError("exact enumeration of {} sites".format(n_sites), total, configuration_cap)

    started = time.time()
    table = _EdgeTable(region)
    energies = np.empty(total, dtype=np.int16)

    def fill(bounds):
        start, stop = bounds
        energies[start:stop] = table.energies(decode_block(n_sites, start, stop))

    blocks = list(_blocks(total))
    if threads is not None and threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, blocks))
    else:
        for bounds in blocks:
            fill(bounds)

    counts = np.bincount(energies, minlength=1)
    weights = level_weights(beta, len(counts), precision_bits)
    params = GibbsParams(beta, precision_bits)
    measure = ExactMeasure(region, params, energies, [int(c) for c in counts], weights, None)
    measure.partition_function = weigh(measure, counts)
    if measure.partition_function <= 0:
        raise InvariantViolation("the partition function of the region is not positive")

    logger.info("Enumerated %d configurations of %d sites at beta = %s in %.2f s (%d ground states)",
                total, n_sites, beta.label(), time.time() - started, measure.ground_state_count)
    return measure


def weigh(measure, counts):
    """``sum_h counts[h] * x**h`` in the arithmetic of the measure."""
    counts = [int(c) for c in counts]
    if measure.is_exact:
        return sum((Fraction(c) * w for c, w in zip(counts, measure.level_weights) if c), Fraction(0))
    with mpmath.workprec(measure.params.precision_bits):
        return mpmath.fsum(c * w for c, w in zip(counts, measure.level_weights) if c)


def _ratio(measure, numerator, denominator):
    if measure.is_exact:
        return Fraction(numerator) / Fraction(denominator)
    with mpmath.workprec(measure.params.precision_bits):
        return mpmath.mpf(numerator) / mpmath.mpf(denominator)


def _to_mpf(value):
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def _lift(measure, value):
    """The value in the arithmetic of the measure (mpmath reals never mix with fractions)."""
    if measure.is_exact:
        return value
    with mpmath.workprec(measure.params.precision_bits):
        return _to_mpf(value)


def close(a, b, tolerance=TOLERANCE):
    """Exact equality for two fractions, else agreement within ``tolerance``."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    with mpmath.workprec(160):
        return abs(_to_mpf(a) - _to_mpf(b)) <= tolerance


def _site_colors(measure, v, digits):
    if v in measure.column:
        return digits[:, measure.column[v]]
    if v in measure.region.boundary_set:
        return np.ones(len(digits), dtype=np.int8)
    raise ValidationError("vertex {} is neither in the region nor on its boundary".format(v))


def event_mask(measure, event, digits):
    """Boolean array: which rows of ``digits`` lie in ``event``."""
    kind = event.kind
    if kind == EventKind.J_K:
        mask = np.ones(len(digits), dtype=bool)
        for v in event.sites:
            mask &= _site_colors(measure, v, digits) == event.color
        return mask
    if kind == EventKind.J_ANY:
        mask = np.zeros(len(digits), dtype=bool)
        for k in (1, 2, 3):
            mask |= event_mask(measure, Event.J_k(k, event.sites), digits)
        return mask
    if kind == EventKind.EDGE_IMPROPER:
        u, v = event.sites
        return _site_colors(measure, u, digits) == _site_colors(measure, v, digits)
    if kind == EventKind.VERTEX_COLOR:
        return _site_colors(measure, event.sites[0], digits) == event.color
    if kind == EventKind.ALL_OF:
        mask = np.ones(len(digits), dtype=bool)
        for part in event.parts:
            mask &= event_mask(measure, part, digits)
        return mask
    if kind == EventKind.CUSTOM:
        return np.asarray(event.predicate(digits, measure.column), dtype=bool)
    raise ValidationError("unsupported event kind {}".format(kind))


def event_level_counts(measure, event):
    """Number of configurations of each energy inside ``event``."""
    levels = len(measure.level_counts)
    counts = np.zeros(levels, dtype=np.int64)
    n_sites = len(measure.sites)
    for start, stop in _blocks(measure.n_configurations):
        mask = event_mask(measure, event, decode_block(n_sites, start, stop))
        counts += np.bincount(measure.energies[start:stop][mask], minlength=levels)
    return counts


def _event_weight(measure, event):
    if isinstance(measure, SplitMeasure):
        return _split_weight(measure, event)
    return weigh(measure, event_level_counts(measure, event))


def event_probability(measure, event, given=None):
    """
    ``mu(event)``, or ``mu(event | given)``.  Exact fractions for exact Boltzmann factors, else mpmath reals.

    :param measure: an :class:`ExactMeasure` or a :class:`SplitMeasure`
    :raises ZeroProbabilityError: when ``given`` has probability 0
    """

    if given is None:
        return _ratio(measure, _event_weight(measure, event), measure.partition_function)
    denominator = _event_weight(measure, given)
    if denominator == 0:
        raise ZeroProbabilityError("cannot condition on {}: it has probability 0".format(given.label()))
    numerator = _event_weight(measure, Event.all_of(event, given))
    return _ratio(measure, numerator, denominator)


def marginal(measure, v):
    """``{k: mu(sigma_v = k)}``."""
    return {k: event_probability(measure, Event.color_of(v, k)) for k in (1, 2, 3)}


def color_symmetry_check(measure):
    """``mu(sigma_v = 2) == mu(sigma_v = 3)`` at every site."""
    failures = []
    for v in measure.sites:
        m = marginal(measure, v)
        if not close(m[2], m[3]):
            failures.append(v)
    return CheckReport('color_symmetry', not failures, checked=len(measure.sites), failures=failures)


def magnetization_identity(measure, delta0):
    """
    Both sides of ``mu(J_1) - mu(J_2) = 1/2 [3 mu(J_1 | J) - 1] mu(J)``.
    """

    j1 = event_probability(measure, Event.J_k(1, delta0))
    j2 = event_probability(measure, Event.J_k(2, delta0))
    j = event_probability(measure, Event.J(delta0))
    conditional = event_probability(measure, Event.J_k(1, delta0), given=Event.J(delta0))
    lhs = j1 - j2
    rhs = (3 * conditional - 1) * j / 2
    return CheckReport('magnetization_identity', close(lhs, rhs), checked=1,
                       details={'lhs': lhs, 'rhs': rhs, 'conditional': conditional, 'uniform': j})


def long_range_check(measure, delta0):
    """``mu(J_1 | J) > 1/3``."""
    conditional = event_probability(measure, Event.J_k(1, delta0), given=Event.J(delta0))
    return CheckReport('long_range', conditional > _lift(measure, Fraction(1, 3)), checked=1,
                       details={'conditional': conditional, 'delta0': sorted(delta0)})


def _dlr_closed_form(distinct, x):
    if distinct == 1:
        return x ** 3 / (2 + x ** 3)
    if distinct == 2:
        return (x + x * x) / (1 + x + x * x)
    return 1


def dlr_check(measure, v1):
    """
    For a ``V1`` site, the probability that it shares a color with one of its three neighbors, given their colors,
    against the closed forms ``x^3 / (2 + x^3)``, ``(x + x^2) / (1 + x + x^2)`` and 1 for one, two and three distinct
    neighbor colors.  Neighbor patterns of probability 0 are skipped.
    """

    quad = measure.region.quad
    if v1 not in measure.column or quad.is_v0(v1):
        raise ValidationError("vertex {} is not a V1 site of the region".format(v1))
    neighbors = quad.neighbors[v1]
    levels = len(measure.level_counts)
    counts = np.zeros(27 * 2 * levels, dtype=np.int64)
    n_sites = len(measure.sites)

    for start, stop in _blocks(measure.n_configurations):
        digits = decode_block(n_sites, start, stop)
        colors = [_site_colors(measure, w, digits).astype(np.int64) for w in neighbors]
        own = digits[:, measure.column[v1]]
        pattern = (colors[0] - 1) * 9 + (colors[1] - 1) * 3 + (colors[2] - 1)
        agree = (own == colors[0]) | (own == colors[1]) | (own == colors[2])
        key = (pattern * 2 + agree) * levels + measure.energies[start:stop]
        counts += np.bincount(key, minlength=len(counts))
    counts = counts.reshape(27, 2, levels)

    beta = measure.beta
    if beta.is_exact:
        x = beta.boltzmann
    else:
        x = beta.boltzmann_mpf(measure.params.precision_bits)

    failures, details = [], {}
    for p in range(27):
        total = weigh(measure, counts[p, 0] + counts[p, 1])
        if total == 0:
            continue
        observed = _ratio(measure, weigh(measure, counts[p, 1]), total)
        pattern = (p // 9 + 1, p // 3 % 3 + 1, p % 3 + 1)
        with mpmath.workprec(measure.params.precision_bits):
            expected = _dlr_closed_form(len(set(pattern)), x)
        details['{}{}{}'.format(*pattern)] = [observed, expected]
        if not close(observed, expected):
            failures.append(pattern)
    return CheckReport('dlr', not failures, checked=len(details), failures=failures, details=details)


def uniform_coloring_check(measure, delta0):
    """
    ``mu(J_Delta0) > 0``, reported with the finite-energy bound ``2^(-1-|Delta0|-M) p^M'`` where ``M`` counts ``G0``
    edges inside ``Delta0`` and ``M'`` those leaving it.  The bound is asserted only at ``beta = inf``, where the
    non-simple contour condition behind it holds trivially and the factor ``1/2`` is not even needed.
    """

    quad = measure.region.quad
    delta0 = frozenset(delta0)
    for v in delta0:
        if not quad.is_v0(v):
            raise ValidationError("vertex {} is not in V0".format(v))
    inside = sum(1 for u, v in quad.edges_g0 if u in delta0 and v in delta0)
    leaving = sum(1 for u, v in quad.edges_g0 if (u in delta0) != (v in delta0))

    probability = event_probability(measure, Event.J(delta0))
    p_lower = contour_weights(measure.beta, measure.params.precision_bits).p_lo
    bound = Fraction(1, 2 ** (1 + len(delta0) + inside)) * p_lower ** leaving

    passed = probability > 0
    satisfied = probability >= _lift(measure, bound)
    if measure.beta.is_infinite:
        passed = passed and probability >= 2 * bound
    return CheckReport('uniform_coloring', passed, checked=1,
                       details={'probability': probability, 'finite_energy_bound': bound,
                                'bound_satisfied': bool(satisfied), 'M': inside, 'M_boundary': leaving})


def _exceeds(a, b, bits):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a > b
    with mpmath.workprec(bits):
        return _to_mpf(a) > _to_mpf(b)


def scaled_profile(name, values, power, bound, precision_bits=128):
    """
    Check ``value * exp(power * beta)`` over a grid of finite betas: every scaled value is at most ``bound``, and the
    scaled values do not increase with beta.  Exact when ``exp(-beta)`` is rational.

    :param values: ``(beta, value)`` pairs, in any order
    :param bound: the constant the scaled values must stay under
    :return: a :class:`CheckReport` with the rows and the largest scaled value as ``fitted_constant``
    """

    bound = parse_rational(bound)
    if bound <= 0:
        raise ValidationError("the bound must be positive, got {}".format(bound))
    values = [(Beta.parse(beta), value) for beta, value in values]
    if not values:
        raise ValidationError("no betas to profile")
    if any(beta.is_infinite for beta, _ in values):
        raise ValidationError("scaled values are undefined at beta = inf")

    rows, failures = [], []
    previous, largest = None, None
    for beta, value in sorted(values, key=lambda item: item[0].to_mpf()):
        if beta.is_exact:
            scaled = Fraction(value) / beta.boltzmann ** power
        else:
            with mpmath.workprec(precision_bits):
                scaled = _to_mpf(value) * mpmath.exp(power * beta.to_mpf())
        if _exceeds(scaled, bound, precision_bits):
            failures.append('bound at beta={}'.format(beta.label()))
        if previous is not None and _exceeds(scaled, previous, precision_bits):
            failures.append('increase at beta={}'.format(beta.label()))
        if largest is None or _exceeds(scaled, largest, precision_bits):
            largest = scaled
        previous = scaled
        rows.append({'beta': beta.label(), 'value': float(value), 'scaled': float(scaled)})

    logger.debug("%s: largest scaled value %.6g against bound %s", name, float(largest), bound)
    return CheckReport(name, not failures, checked=len(rows), failures=failures,
                       details={'rows': rows, 'bound': bound, 'fitted_constant': float(largest)})


IMPROPER_RARITY_BOUND = Fraction(1, 3)


def improper_rarity_profile(region, u, v, betas, bound=IMPROPER_RARITY_BOUND, precision_bits=128,
                            configuration_cap=DEFAULT_CAP):
    """
    ``mu(sigma_u = sigma_v)`` scaled by ``exp(beta)`` over a grid of finite betas, checked against ``bound`` and for
    non-increase along the grid (see :func:`scaled_profile`).  Improper edges have probability of order
    ``exp(-beta)`` at large beta, so the scaled values settle to a constant.
    """

    values = []
    for beta in betas:
        measure = enumerate_measure(region, beta, precision_bits, configuration_cap)
        values.append((measure.beta, event_probability(measure, Event.improper(u, v))))
    return scaled_profile('improper_rarity', values, 1, bound, precision_bits)


class ConnectionQuery(object):
    """
    A percolation event of the spin-bond coupling: ``mode='any'`` asks for at least one of ``targets`` to be joined
    to the boundary by open edges, ``mode='all'`` for every one of them.  ``event`` restricts the spin
    configurations.
    """

    def __init__(self, targets, mode='any', event=None):
        if mode not in ('any', 'all'):
            raise ValidationError("connection mode must be 'any' or 'all', got {}".format(mode))
        self.targets = tuple(sorted(targets))
        self.mode = mode
        self.event = event


def _a_matrix(measure, digits, edges):
    """Which ``Lambda`` edges are properly colored with colors 1 and 2."""
    columns = {}

    def colors(v):
        if v not in columns:
            columns[v] = _site_colors(measure, v, digits)
        return columns[v]

    matrix = np.empty((len(digits), len(edges)), dtype=bool)
    for i, (u, v) in enumerate(edges):
        cu, cv = colors(u), colors(v)
        matrix[:, i] = (cu != cv) & (cu <= 2) & (cv <= 2)
    return matrix


def _reach(local_edges, m):
    """
    For every subset of the ``m`` edges (bit ``j`` of the subset index opens edge ``j``), the bitmask of local vertices
    joined to vertex 0, and the number of open edges.
    """

    size = 1 << m
    subsets = np.arange(size, dtype=np.uint32)
    is_open = [((subsets >> np.uint32(j)) & np.uint32(1)).astype(bool) for j in range(m)]
    reach = np.ones(size, dtype=np.uint64)
    masks = [np.uint64((1 << a) | (1 << b)) for a, b in local_edges]

    changed = True
    while changed:
        changed = False
        for j in range(m):
            touched = reach & masks[j]
            grow = is_open[j] & (touched != 0) & (touched != masks[j])
            if grow.any():
                reach[grow] |= masks[j]
                changed = True

    popcount = np.zeros(size, dtype=np.int64)
    for j in range(m):
        popcount += is_open[j]
    return reach, popcount


def _open_probability(measure):
    """``p = 1 - exp(-beta)`` in the arithmetic of the measure."""
    beta = measure.beta
    if beta.is_exact:
        return 1 - beta.boltzmann
    bits = measure.params.precision_bits
    with mpmath.workprec(bits):
        return 1 - beta.boltzmann_mpf(bits)


def es_joint(measure, sigma, edge_cap=20):
    """
    The joint law of the spin-bond coupling on one spin configuration: every edge set ``eta`` with
    ``rho(sigma, eta) > 0`` and that probability.  Only ``Lambda`` edges colored ``{1, 2}`` by ``sigma`` (the
    boundary has color 1) can be open, each with probability ``p = 1 - exp(-beta)``, so the weights sum to
    ``mu(sigma)``.

    :param sigma: mapping from every site of ``Lambda`` to a color
    :return: list of ``(frozenset of edges, probability)``
    :raises CapExceededError: when ``sigma`` has more than ``edge_cap`` such edges
    """

    region = measure.region
    h = hamiltonian(region, sigma)
    colors = dict(sigma)
    colors.update((b, 1) for b in region.boundary)
    a_edges = [(u, v) for u, v in region.edges_lambda if {colors[u], colors[v]} == {1, 2}]
    m = len(a_edges)
    if m > edge_cap:
        raise CapExceededError("the coupling over {} open-able edges".format(m), m, edge_cap)

    mu = _ratio(measure, measure.level_weights[h], measure.partition_function)
    p = _open_probability(measure)
    law = []
    with mpmath.workprec(measure.params.precision_bits):
        for subset in range(1 << m):
            eta = frozenset(e for j, e in enumerate(a_edges) if subset >> j & 1)
            weight = mu * p ** len(eta) * (1 - p) ** (m - len(eta))
            if weight:
                law.append((eta, weight))
    return law


def es_probabilities(measure, queries, edge_cap=20):
    """
    Probabilities of connection events under the spin-bond coupling of the measure.

    Given ``sigma``, each ``Lambda`` edge properly colored with colors 1 and 2 is open with probability
    ``p = 1 - exp(-beta)`` and every other edge is closed.  Configurations are grouped by their set ``A`` of such
    edges, and each query is evaluated over all ``2**|A|`` open subsets of every group.

    A :class:`SplitMeasure` is handled by a sweep over its ``V1`` sites instead, with no edge cap.

    :param queries: list of :class:`ConnectionQuery`
    :param edge_cap: refuse groups with more edges than this
    :return: list of probabilities, in the arithmetic of the measure
    :raises CapExceededError: when some group has more than ``edge_cap`` edges
    """

    if isinstance(measure, SplitMeasure):
        return _split_probabilities(measure, queries)

    region = measure.region
    edges = region.edges_lambda
    closure = region.site_set | region.boundary_set
    for query in queries:
        for v in query.targets:
            if v not in closure:
                raise ValidationError("vertex {} is neither in the region nor on its boundary".format(v))

    started = time.time()
    levels = len(measure.level_counts)
    n_sites = len(measure.sites)
    group_ids = {}
    group_edges = []
    tallies = [Counter() for _ in queries]

    for start, stop in _blocks(measure.n_configurations):
        digits = decode_block(n_sites, start, stop)
        packed = np.packbits(_a_matrix(measure, digits, edges), axis=1)
        rows, inverse = np.unique(packed, axis=0, return_inverse=True)
        ids = np.empty(len(rows), dtype=np.int64)
        for i, row in enumerate(rows):
            key = row.tobytes()
            if key not in group_ids:
                group_ids[key] = len(group_edges)
                bits = np.unpackbits(row)[:len(edges)]
                group_edges.append([edges[j] for j in np.flatnonzero(bits)])
            ids[i] = group_ids[key]
        keys = ids[inverse.reshape(-1)] * levels + measure.energies[start:stop]
        for tally, query in zip(tallies, queries):
            selected = keys if query.event is None else keys[event_mask(measure, query.event, digits)]
            values, counts = np.unique(selected, return_counts=True)
            tally.update(dict(zip(values.tolist(), counts.tolist())))

    largest = max(len(e) for e in group_edges) if group_edges else 0
    if largest > edge_cap:
        raise CapExceededError("the coupling over {} open-able edges".format(largest), largest, edge_cap)

    bits = measure.params.precision_bits
    p = _open_probability(measure)

    needed = set(key // levels for tally in tallies for key in tally)
    connection = {}
    for group in sorted(needed):
        group_e = group_edges[group]
        m = len(group_e)
        local = {}
        local_edges = []
        for u, v in group_e:
            a = 0 if u in region.boundary_set else local.setdefault(u, len(local) + 1)
            b = 0 if v in region.boundary_set else local.setdefault(v, len(local) + 1)
            local_edges.append((a, b))
        reach, popcount = _reach(local_edges, m)
        with mpmath.workprec(bits):
            powers = [p ** k * (1 - p) ** (m - k) for k in range(m + 1)]

        for qi, query in enumerate(queries):
            targets = [v for v in query.targets if v not in region.boundary_set]
            if not targets:
                connection[(group, qi)] = 1
                continue
            if query.mode == 'any' and len(targets) < len(query.targets):
                connection[(group, qi)] = 1
                continue
            if query.mode == 'all' and any(v not in local for v in targets):
                connection[(group, qi)] = 0
                continue
            mask = 0
            for v in targets:
                if v in local:
                    mask |= 1 << local[v]
            if mask == 0:
                connection[(group, qi)] = 0
                continue
            mask = np.uint64(mask)
            hit = (reach & mask) == mask if query.mode == 'all' else (reach & mask) != 0
            by_size = np.bincount(popcount[hit], minlength=m + 1)
            if measure.is_exact:
                connection[(group, qi)] = sum((int(c) * w for c, w in zip(by_size, powers) if c), Fraction(0))
            else:
                with mpmath.workprec(bits):
                    connection[(group, qi)] = mpmath.fsum(int(c) * w for c, w in zip(by_size, powers) if c)

    results = []
    for qi, tally in enumerate(tallies):
        terms = [(count, measure.level_weights[key % levels], connection[(key // levels, qi)])
                 for key, count in tally.items()]
        if measure.is_exact:
            total = sum((Fraction(c) * w * r for c, w, r in terms if c and w and r), Fraction(0))
        else:
            with mpmath.workprec(bits):
                total = mpmath.fsum(c * w * r for c, w, r in terms)
        results.append(_ratio(measure, total, measure.partition_function))

    logger.info("Evaluated %d coupling queries over %d edge groups (largest %d) in %.2f s",
                len(queries), len(group_edges), largest, time.time() - started)
    return results


def split_measure(region, beta, precision_bits=128, configuration_cap=DEFAULT_CAP):
    """
    The Gibbs measure of ``region`` with boundary color 1, with the ``V1`` sites summed out: only the
    ``3**|Lambda_0|`` colorings of the ``V0`` sites are enumerated.  Marginals, event probabilities (custom predicates
    excepted) and the spin-bond coupling are exact on regions far beyond :func:`enumerate_measure`.

    :return: the :class:`SplitMeasure`
    :raises CapExceededError: when ``3**|Lambda_0|`` exceeds the cap
    """

    beta = Beta.parse(beta)
    quad = region.quad
    v0_sites = list(region.v0_sites)
    total = 3 ** len(v0_sites)
    if total > configuration_cap:
        raise CapExceededError("enumeration of {} V0 sites".format(len(v0_sites)), total, configuration_cap)

    degree = max([len(quad.neighbors[t]) for t in region.v1_sites] or [0])
    xs = level_weights(beta, degree + 1, precision_bits)
    one = Fraction(1) if beta.is_exact else mpmath.mpf(1)
    rows, color_weights, row_weights = [], [], []
    with mpmath.workprec(precision_bits):
        for digits in itertools.product((1, 2, 3), repeat=len(v0_sites)):
            colors = {b: 1 for b in region.boundary}
            colors.update(zip(v0_sites, digits))
            weights = {}
            row_weight = one
            for t in region.v1_sites:
                corners = [colors[u] for u in quad.neighbors[t]]
                weights[t] = tuple(xs[corners.count(c)] for c in (1, 2, 3))
                row_weight *= sum(weights[t])
            rows.append(colors)
            color_weights.append(weights)
            row_weights.append(row_weight)
        partition_function = _sum(beta.is_exact, row_weights)

    if partition_function <= 0:
        raise InvariantViolation("the partition function of the region is not positive")
    logger.info("Split measure of %d sites at beta = %s: %d V0 colorings", len(region.sites), beta.label(), total)
    return SplitMeasure(region, GibbsParams(beta, precision_bits), rows, color_weights, row_weights,
                        partition_function)


def _sum(exact, values):
    if exact:
        return sum(values, Fraction(0))
    return mpmath.fsum(values)


def _fixed(measure, sites, k, colors):
    constraint = {}
    for v in sites:
        if v in colors:
            if colors[v] != k:
                return []
        elif v in measure.region.site_set:
            constraint[v] = frozenset([k])
        else:
            raise ValidationError("vertex {} is neither in the region nor on its boundary".format(v))
    return [constraint]


def _alternatives(measure, event, colors):
    """
    ``event`` restricted to one ``V0`` coloring, as disjoint alternatives: dicts from ``V1`` sites to their allowed
    colors.
    """

    kind = event.kind
    if kind == EventKind.J_K:
        return _fixed(measure, event.sites, event.color, colors)
    if kind == EventKind.J_ANY:
        return [a for k in (1, 2, 3) for a in _fixed(measure, event.sites, k, colors)]
    if kind == EventKind.VERTEX_COLOR:
        return _fixed(measure, event.sites, event.color, colors)
    if kind == EventKind.EDGE_IMPROPER:
        u, v = event.sites
        if u in colors and v in colors:
            return [{}] if colors[u] == colors[v] else []
        if u in colors or v in colors:
            known, free = (u, v) if u in colors else (v, u)
            return _fixed(measure, [free], colors[known], colors)
        return [a for k in (1, 2, 3) for a in _fixed(measure, [u, v], k, colors)]
    if kind == EventKind.ALL_OF:
        merged = [{}]
        for part in event.parts:
            joined = []
            for a in merged:
                for b in _alternatives(measure, part, colors):
                    both = dict(a)
                    for t, allowed in b.items():
                        both[t] = both.get(t, allowed) & allowed
                    if all(both.values()):
                        joined.append(both)
            merged = joined
        return merged
    raise ValidationError("{} events need the full enumeration".format(kind))


def _split_weight(measure, event):
    terms = []
    with mpmath.workprec(measure.params.precision_bits):
        for colors, weights in zip(measure.rows, measure.color_weights):
            for allowed in _alternatives(measure, event, colors):
                term = 1
                for t, w in weights.items():
                    term *= sum(w[c - 1] for c in allowed[t]) if t in allowed else sum(w)
                terms.append(term)
        return _sum(measure.is_exact, terms)


def _canonical(state):
    relabel = {}
    return tuple(relabel.setdefault(s, len(relabel)) for s in state)


def _merge(state, group):
    labels = set(state[i] for i in group)
    if len(labels) < 2:
        return state
    return _canonical(tuple(min(labels) if s in labels else s for s in state))


def _split_connection(measure, query, p):
    """
    Weight of ``query`` under the coupling, by a sweep over the ``V1`` sites that tracks which of the boundary (node
    0), the ``V0`` sites and the target ``V1`` sites are joined by open edges.
    """

    region = measure.region
    quad = region.quad
    node = {b: 0 for b in region.boundary}
    node.update((v, i) for i, v in enumerate(measure.v0_sites, start=1))
    extra = len(measure.v0_sites) + 1
    for v in query.targets:
        if v not in node:
            if v not in region.site_set:
                raise ValidationError("vertex {} is neither in the region nor on its boundary".format(v))
            node[v] = extra
            extra += 1
    targets = [node[v] for v in query.targets]
    size = extra
    terms = []
    event = query.event
    for colors, weights in zip(measure.rows, measure.color_weights):
        for allowed in (_alternatives(measure, event, colors) if event is not None else [{}]):
            states = {tuple(range(size)): 1}
            for t, w in weights.items():
                law = defaultdict(int)
                for c in allowed.get(t, (1, 2, 3)):
                    if not w[c - 1]:
                        continue
                    openable = [node[u] for u in quad.neighbors[t] if {colors[u], c} == {1, 2}]
                    m = len(openable)
                    for r in range(m + 1):
                        factor = w[c - 1] * p ** r * (1 - p) ** (m - r)
                        for linked in itertools.combinations(openable, r):
                            law[frozenset(linked)] += factor
                own = [node[t]] if t in node else []
                grown = defaultdict(int)
                for state, weight in states.items():
                    for linked, factor in law.items():
                        grown[_merge(state, list(linked) + own)] += weight * factor
                states = grown
            for state, weight in states.items():
                hits = [state[i] == state[0] for i in targets]
                if not hits or (all(hits) if query.mode == 'all' else any(hits)):
                    terms.append(weight)
    return _sum(measure.is_exact, terms)


def _split_probabilities(measure, queries):
    bits = measure.params.precision_bits
    started = time.time()
    with mpmath.workprec(bits):
        p = _open_probability(measure)
        results = [_ratio(measure, _split_connection(measure, q, p), measure.partition_function) for q in queries]
    logger.info("Evaluated %d coupling queries over %d V0 colorings in %.2f s",
                len(queries), measure.n_configurations, time.time() - started)
    return results


def es_identity_check(measure, sites=None, delta0s=(), edge_cap=20):
    """
    The random-cluster identities of the coupling:

    * ``mu(sigma_v = 1) - mu(sigma_v = 2) = rho(v <-> boundary)`` for ``v`` in ``V0``,
    * ``mu(sigma_v = 2) - mu(sigma_v = 1) = rho(v <-> boundary)`` for ``v`` in ``V1``,
    * ``mu(J_1) - mu(J_2) = rho(J and some site of Delta0 <-> boundary)`` for each ``Delta0`` in ``delta0s``.
    """

    quad = measure.region.quad
    sites = list(measure.sites if sites is None else sites)
    queries = [ConnectionQuery([v]) for v in sites]
    queries += [ConnectionQuery(d, 'any', Event.J(d)) for d in delta0s]
    rho = es_probabilities(measure, queries, edge_cap)

    failures, details = [], {}
    for v, r in zip(sites, rho):
        m = marginal(measure, v)
        lhs = m[1] - m[2] if quad.is_v0(v) else m[2] - m[1]
        details['site {}'.format(v)] = [lhs, r]
        if not close(lhs, r):
            failures.append('site {}'.format(v))
    for d, r in zip(delta0s, rho[len(sites):]):
        lhs = event_probability(measure, Event.J_k(1, d)) - event_probability(measure, Event.J_k(2, d))
        name = 'J{}'.format(sorted(d))
        details[name] = [lhs, r]
        if not close(lhs, r):
            failures.append(name)
    return CheckReport('es_identity', not failures, checked=len(queries), failures=failures, details=details)


def comparison_epsilon(delta1_size, edge_count, beta0, precision_bits=128):
    """
    ``3^-|Delta1| (1 - exp(-beta0))^|E_Delta|``, rounded down to a rational.
    """

    beta0 = Beta.parse(beta0)
    x_hi = beta0.boltzmann if beta0.is_exact else beta0.boltzmann_interval(precision_bits)[1]
    return Fraction(1, 3 ** delta1_size) * (1 - x_hi) ** edge_count


def comparison_check(measure, delta1, beta0, edge_cap=20):
    """
    Evaluate both sides of the comparison inequality

        rho(every v in Delta <-> boundary) >= eps * rho(J_Delta0 and some site of Delta0 <-> boundary)

    for the thick set ``Delta`` of ``delta1``, with ``eps = 3^-|Delta1| (1 - exp(-beta0))^|E_Delta|``.

    The whole thick set must lie in ``Lambda``.  Works on an :class:`ExactMeasure` or a :class:`SplitMeasure`.
    """

    region = measure.region
    quad = region.quad
    delta, delta0, delta1 = thick_set(quad, delta1)
    if not delta1 <= region.site_set:
        raise ValidationError("the seed of the thick set must lie inside the region")
    if not delta <= region.site_set:
        raise ValidationError("the thick set of {} is not inside the region".format(sorted(delta1)))

    beta0 = Beta.parse(beta0)
    if beta0.is_exact and beta0.boltzmann == 1:
        raise ValidationError("beta0 must be positive")
    if measure.beta.to_mpf() < beta0.to_mpf():
        raise ValidationError("the comparison needs beta >= beta0")

    edges_delta = sum(1 for u, v in quad.edges_g if u in delta and v in delta)
    epsilon = comparison_epsilon(len(delta1), edges_delta, beta0, measure.params.precision_bits)
    lhs, rhs = es_probabilities(measure, [ConnectionQuery(delta, 'all'),
                                          ConnectionQuery(delta0, 'any', Event.J(delta0))], edge_cap)
    passed = lhs >= _lift(measure, epsilon) * rhs
    return CheckReport('comparison', passed, checked=1,
                       details={'lhs': lhs, 'rhs': rhs, 'epsilon': epsilon, 'E_delta': edges_delta,
                                'delta1': sorted(delta1), 'delta0': sorted(delta0)})
