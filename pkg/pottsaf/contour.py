# python 2 backwards compatibility
from __future__ import print_function, division

# external imports
import itertools
import logging
import time
from collections import Counter, defaultdict, deque
from fractions import Fraction

import mpmath
import networkx as nx
import numpy as np

# package imports
from .errors import CapExceededError, InvariantViolation, ValidationError
from .gibbs_exact import close, decode_block, scaled_profile, weigh, _blocks, _ratio, _site_colors
from .models import Beta, CheckReport, Contour, ContourMeasure, ContourSet
from .peierls import contour_weights

logger = logging.getLogger(__name__)

DEFAULT_CONTOUR_CAP = 14


def _closure_colors(region, sigma):
    colors = {}
    for b in region.boundary:
        if sigma.get(b, 1) != 1:
            raise ValidationError("boundary vertex {} has color {}; the boundary must be colored 1"
                                  .format(b, sigma[b]))
        colors[b] = 1
    for v in region.v0_sites:
        if v not in sigma:
            raise ValidationError("site {} has no color".format(v))
        colors[v] = sigma[v]
    return colors


def unsatisfied_edges(region, sigma):
    """
    The unsatisfied ``G0`` edges of a configuration and their duals.

    :param region: the :class:`Region`
    :param sigma: colors of the ``V0`` sites of ``Lambda`` (``V1`` entries are ignored, boundary entries must be 1)
    :return: ``(E0, E1)`` as frozensets of ``G0`` and ``G1`` edge indices
    """

    quad = region.quad
    colors = _closure_colors(region, sigma)
    e0, e1 = set(), set()
    for i in region.g0_edges:
        u, v = quad.edges_g0[i]
        if colors[u] != colors[v]:
            e0.add(i)
            e1.add(quad.dual_of_g0[i])
    for j in e1:
        a, b = quad.edges_g1[j]
        if a not in region.site_set or b not in region.site_set:
            raise InvariantViolation("unsatisfied dual edge {} leaves the region".format((a, b)))
    return frozenset(e0), frozenset(e1)


def _cut_components(region, cut):
    """
    Components of ``G0`` on the ``V0`` part of the closure with the ``cut`` edges removed.  Components holding a
    boundary vertex are joined outside the closure, so they form the exterior together.

    :return: ``(exterior, interiors)``
    """

    quad = region.quad
    allowed = set(v for v in region.closure if quad.is_v0(v))
    seen = set()
    exterior, interiors = set(), []
    for start in sorted(allowed):
        if start in seen:
            continue
        component = {start}
        seen.add(start)
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in quad.g0_neighbors[v]:
                if w in allowed and w not in seen and (min(v, w), max(v, w)) not in cut:
                    seen.add(w)
                    component.add(w)
                    queue.append(w)
        if component & region.boundary_set:
            exterior |= component
        else:
            interiors.append(frozenset(component))
    if not exterior:
        raise InvariantViolation("no component reaches the region boundary")
    return frozenset(exterior), sorted(interiors, key=min)


def _edge_graph(quad, edges):
    graph = nx.Graph()
    graph.add_edges_from(quad.edges_g1[i] for i in edges)
    return graph


def is_admissible(quad, edges):
    """Whether every component of a ``G1`` edge set has degrees 2 and 3 only and no bridge."""
    graph = _edge_graph(quad, edges)
    if any(d not in (2, 3) for _, d in graph.degree()):
        return False
    return not nx.has_bridges(graph)


def build_contour(region, edges, with_chi=True):
    """
    Validate one connected contour and compute its triple-point count, interiors and ``chi``.

    :raises InvariantViolation: if the edges are disconnected, have a bridge or a vertex of degree other than 2 or 3,
        or do not cut out ``1 + t`` interior components
    """

    quad = region.quad
    edges = frozenset(edges)
    graph = _edge_graph(quad, edges)
    if not edges or not nx.is_connected(graph):
        raise InvariantViolation("a contour must be a nonempty connected edge set")
    degrees = dict(graph.degree())
    wrong = [v for v, d in degrees.items() if d not in (2, 3)]
    if wrong:
        raise InvariantViolation("contour vertices {} have degree other than 2 or 3".format(sorted(wrong)[:5]))
    if nx.has_bridges(graph):
        raise InvariantViolation("contour {} has a bridge".format(sorted(edges)))
    triple = sum(1 for d in degrees.values() if d == 3)
    if triple % 2:
        raise InvariantViolation("contour has an odd number ({}) of degree-3 vertices".format(triple))
    t = triple // 2
    if sum(1 for d in degrees.values() if d == 2) != len(edges) - 3 * t:
        raise InvariantViolation("degree count does not match |gamma| - 3t")

    cut = set(quad.edges_g0[quad.dual_of_g1[i]] for i in edges)
    _, interiors = _cut_components(region, cut)
    if len(interiors) != 1 + t:
        raise InvariantViolation("contour with t = {} cuts out {} interior components".format(t, len(interiors)))

    contour = Contour(edges, t, None, interiors, degrees)
    if with_chi:
        contour.chi = chi(contour, region)
    return contour


def chi(contour, region):
    """
    Number of colorings of the interior components, with the exterior colored 1, such that the two sides of every
    contour edge get different colors.
    """

    quad = region.quad
    label = {}
    for index, component in enumerate(contour.interiors, start=1):
        for v in component:
            label[v] = index

    pairs = set()
    for i in contour.edges:
        a, b = quad.edges_g0[quad.dual_of_g1[i]]
        la, lb = label.get(a, 0), label.get(b, 0)
        if la == lb:
            return 0
        pairs.add((min(la, lb), max(la, lb)))

    count = 0
    for colors in itertools.product((1, 2, 3), repeat=len(contour.interiors)):
        full = (1,) + colors
        if all(full[a] != full[b] for a, b in pairs):
            count += 1
    return count


def decompose(region, e1_edges, with_chi=True, cache=None):
    """
    Split a set of unsatisfied ``G1`` edges into contours, the connected components of the edge set.

    :param cache: optional dict from component edge sets to contours, shared between calls
    :return: the :class:`ContourSet`
    """

    quad = region.quad
    e1_edges = frozenset(e1_edges)
    for i in e1_edges:
        a, b = quad.edges_g1[i]
        if a not in region.site_set or b not in region.site_set:
            raise ValidationError("edge {} is not inside the region".format(i))

    graph = _edge_graph(quad, e1_edges)
    contours = []
    for nodes in nx.connected_components(graph):
        component = frozenset(quad.g1_edge_id(u, v) for u, v in graph.subgraph(nodes).edges())
        if cache is not None and component in cache:
            contours.append(cache[component])
            continue
        contour = build_contour(region, component, with_chi)
        if cache is not None:
            cache[component] = contour
        contours.append(contour)

    result = ContourSet(region, contours)
    if result.key != e1_edges:
        raise InvariantViolation("contours do not reassemble the edge set")
    return result


def surrounds(contour, delta0):
    """Whether ``delta0`` lies inside a single interior component of the contour."""
    delta0 = frozenset(delta0)
    if not delta0:
        raise ValidationError("delta0 must be nonempty")
    return any(delta0 <= component for component in contour.interiors)


def contour_configurations(region, contour_cap=DEFAULT_CONTOUR_CAP):
    """
    Every set of ``G1`` edges inside ``Lambda`` whose components are admissible contours (the empty set included).

    :raises CapExceededError: when ``Lambda`` has more ``V1`` sites than ``contour_cap``
    """

    n1 = len(region.v1_sites)
    if n1 > contour_cap:
        raise CapExceededError("contour enumeration over {} V1 sites".format(n1), n1, contour_cap)

    quad = region.quad
    edge_ids = sorted(region.g1_edges)
    ends = [quad.edges_g1[i] for i in edge_ids]
    last = {}
    for position, (a, b) in enumerate(ends):
        last[a] = position
        last[b] = position
    closing = defaultdict(list)
    for v, position in last.items():
        closing[position].append(v)

    degree = Counter()
    chosen = []
    found = []

    def visit(position):
        if position == len(edge_ids):
            found.append(frozenset(chosen))
            return
        a, b = ends[position]
        for take in (False, True):
            if take:
                degree[a] += 1
                degree[b] += 1
                chosen.append(edge_ids[position])
            if all(degree[v] != 1 for v in closing[position]):
                visit(position + 1)
            if take:
                degree[a] -= 1
                degree[b] -= 1
                chosen.pop()

    visit(0)
    return [edges for edges in found if not edges or is_admissible(quad, edges)]


def contour_measure(region, beta, contour_cap=DEFAULT_CONTOUR_CAP, precision_bits=128):
    """
    The contour measure of a region: every admissible configuration ``Gamma`` has weight
    ``prod over gamma of chi(gamma) p^|gamma| q^t(gamma)``.  At ``beta = inf`` this is ``2^#Gamma 2^-|Gamma|`` on
    collections of simple circuits and 0 elsewhere.

    :return: the :class:`ContourMeasure`
    """

    beta = Beta.parse(beta)
    started = time.time()
    weights = contour_weights(beta, precision_bits)
    p, q = weights.p, weights.q
    cache = {}

    configurations, masses = {}, {}
    with mpmath.workprec(precision_bits):
        for edges in contour_configurations(region, contour_cap):
            contours = decompose(region, edges, cache=cache)
            mass = Fraction(1) if weights.is_exact else mpmath.mpf(1)
            for contour in contours:
                mass *= contour.chi * p ** contour.length * q ** contour.t
            configurations[edges] = contours
            masses[edges] = mass
        total = sum(masses.values(), Fraction(0)) if weights.is_exact else mpmath.fsum(masses.values())

    logger.info("Contour measure at beta = %s: %d configurations, %d distinct contours, %.2f s",
                beta.label(), len(configurations), len(cache), time.time() - started)
    return ContourMeasure(region, beta, configurations, masses, total)


def _pushforward_counts(measure):
    """Level counts of each unsatisfied-edge set under the configurations of an exact measure."""
    region = measure.region
    quad = region.quad
    g0 = region.g0_edges
    levels = len(measure.level_counts)
    n_sites = len(measure.sites)
    tallies = defaultdict(lambda: np.zeros(levels, dtype=np.int64))

    for start, stop in _blocks(measure.n_configurations):
        digits = decode_block(n_sites, start, stop)
        columns = {}
        differs = np.empty((len(digits), len(g0)), dtype=bool)
        for k, i in enumerate(g0):
            u, v = quad.edges_g0[i]
            for w in (u, v):
                if w not in columns:
                    columns[w] = _site_colors(measure, w, digits)
            differs[:, k] = columns[u] != columns[v]
        packed = np.packbits(differs, axis=1)
        rows, inverse = np.unique(packed, axis=0, return_inverse=True)
        keys = inverse.reshape(-1) * levels + measure.energies[start:stop]
        flat = np.bincount(keys, minlength=len(rows) * levels).reshape(len(rows), levels)
        for r, row in enumerate(rows):
            tallies[row.tobytes()] += flat[r]

    result = {}
    for row, counts in tallies.items():
        bits = np.unpackbits(np.frombuffer(row, dtype=np.uint8))[:len(g0)]
        key = frozenset(quad.dual_of_g0[g0[k]] for k in np.flatnonzero(bits))
        result[key] = counts
    return result


def pushforward(measure):
    """Law of the unsatisfied-edge set ``E1(sigma)`` under an exact Gibbs measure, keyed by edge set."""
    return {key: _ratio(measure, weigh(measure, counts), measure.partition_function)
            for key, counts in _pushforward_counts(measure).items()}


def pushforward_check(measure, contours=None, contour_cap=DEFAULT_CONTOUR_CAP):
    """The pushforward of the Gibbs measure equals the contour measure, configuration by configuration."""
    if contours is None:
        contours = contour_measure(measure.region, measure.beta, contour_cap, measure.params.precision_bits)
    law = pushforward(measure)
    failures = []
    keys = set(law) | set(contours.weights)
    for key in keys:
        if not close(law.get(key, Fraction(0)), contours.probability(key)):
            failures.append(sorted(key))
    return CheckReport('pushforward', not failures, checked=len(keys), failures=failures,
                       details={'beta': measure.beta.label(), 'support': len(law)})


def zero_temperature_multiplicity_check(measure, contour_cap=DEFAULT_CONTOUR_CAP):
    """
    At ``beta = inf``: every ground state has a contour configuration of disjoint simple circuits, every such
    configuration occurs, and it occurs exactly ``2^#Gamma 2^(|V1 in Lambda| - |Gamma|)`` times.
    """

    if not measure.beta.is_infinite:
        raise ValidationError("the multiplicity check needs beta = inf")
    region = measure.region
    n1 = len(region.v1_sites)
    observed = {key: int(counts[0]) for key, counts in _pushforward_counts(measure).items() if counts[0]}

    cache = {}
    expected = {}
    for edges in contour_configurations(region, contour_cap):
        contours = decompose(region, edges, with_chi=False, cache=cache)
        if all(c.is_simple for c in contours):
            expected[edges] = 2 ** len(contours) * 2 ** (n1 - contours.total_length)

    failures = [sorted(key) for key in set(observed) | set(expected) if observed.get(key) != expected.get(key)]
    return CheckReport('zero_temperature_multiplicity', not failures, checked=len(expected), failures=failures,
                       details={'ground_states': sum(observed.values()), 'configurations': len(expected)})


def contour_statistics(source, v):
    """
    Expected number of contours surrounding ``v``, expected number of non-simple ones among them, and the probability
    of each contour to appear.

    :param source: a :class:`ContourMeasure`, or a list of sampled :class:`ContourSet` (frequencies)
    :param v: a ``V0`` site of the region
    """

    if isinstance(source, ContourMeasure):
        items = [(source.configurations[key], source.probability(key)) for key in source.weights]
    else:
        samples = list(source)
        if not samples:
            raise ValidationError("no samples")
        items = [(contours, Fraction(1, len(samples))) for contours in samples]

    surrounding = 0
    nonsimple = 0
    per_contour = defaultdict(lambda: 0)
    for contours, probability in items:
        for contour in contours:
            per_contour[contour] += probability
            if surrounds(contour, [v]):
                surrounding += probability
                if not contour.is_simple:
                    nonsimple += probability
    return {'surrounding': surrounding, 'nonsimple_surrounding': nonsimple, 'contours': dict(per_contour)}


def peierls_inequality_check(contours):
    """
    ``nu(gamma in Gamma) <= r / (1 + r)`` with ``r = 2^(t+1) p^|gamma| q^t`` for every contour of the measure.
    """

    weights = contour_weights(contours.beta, 128)
    p, q = weights.p_hi, weights.q_hi
    per_contour = _contour_probabilities(contours)

    failures = []
    tightest = None
    for contour, probability in per_contour.items():
        r = 2 ** (contour.t + 1) * p ** contour.length * q ** contour.t
        bound = r / (1 + r)
        if isinstance(probability, Fraction):
            ok = probability <= bound
        else:
            with mpmath.workprec(160):
                ok = mpmath.mpf(probability) <= mpmath.mpf(bound.numerator) / bound.denominator + mpmath.mpf('1e-12')
        if not ok:
            failures.append(sorted(contour.edges))
        gap = float(bound) - float(probability)
        if tightest is None or gap < tightest:
            tightest = gap
    return CheckReport('peierls_inequality', not failures, checked=len(per_contour), failures=failures,
                       details={'smallest_gap': tightest})


def _contour_probabilities(contours):
    per_contour = defaultdict(lambda: 0)
    for key in contours.weights:
        probability = contours.probability(key)
        for contour in contours.configurations[key]:
            per_contour[contour] += probability
    return dict(per_contour)


NONSIMPLE_RARITY_BOUND = Fraction(1, 10)


def nonsimple_profile(region, v, betas, bound=NONSIMPLE_RARITY_BOUND, contour_cap=DEFAULT_CONTOUR_CAP,
                      precision_bits=128):
    """
    Expected number of non-simple contours surrounding ``v`` scaled by ``exp(2 beta)`` over a grid of finite betas,
    checked against ``bound`` and for non-increase along the grid.  A region with no room for a non-simple contour
    around ``v`` passes trivially, with every value 0.
    """

    values = []
    for beta in betas:
        measure = contour_measure(region, beta, contour_cap, precision_bits)
        values.append((measure.beta, contour_statistics(measure, v)['nonsimple_surrounding']))
    return scaled_profile('nonsimple_rarity', values, 2, bound, precision_bits)


def _connected_face_sets(quad, faces, max_faces):
    allowed = frozenset(faces)
    level = set(frozenset([f]) for f in allowed)
    every = set(level)
    for _ in range(max_faces - 1):
        level = set(s | frozenset([w]) for s in level for f in s for w in quad.g0_neighbors[f]
                    if w in allowed and w not in s)
        every |= level
    return sorted(every, key=lambda s: (len(s), sorted(s)))


def _set_partitions(n):
    """Restricted growth strings of length ``n`` with labels starting at 1."""
    if n == 0:
        yield ()
        return

    def grow(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for label in range(1, top + 2):
            prefix.append(label)
            for result in grow(prefix, max(top, label)):
                yield result
            prefix.pop()

    for result in grow([1], 1):
        yield result


def generate_contours(region, max_faces=4):
    """
    Every contour that separates a labelled cluster of at most ``max_faces`` hexagonal faces (``V0`` sites of
    ``Lambda``) from the rest: faces with different labels, or a face and an unlabelled vertex, are separated.

    :return: list of :class:`Contour`, by length then edges
    """

    quad = region.quad
    started = time.time()
    found = {}
    for face_set in _connected_face_sets(quad, region.v0_sites, max_faces):
        faces = sorted(face_set)
        for labels in _set_partitions(len(faces)):
            label = dict(zip(faces, labels))
            edges = set()
            for f in faces:
                for w in quad.g0_neighbors[f]:
                    if label.get(w, 0) != label[f]:
                        edges.add(quad.dual_of_g0[quad.g0_edge_id(f, w)])
            key = frozenset(edges)
            if key in found:
                continue
            graph = _edge_graph(quad, key)
            if nx.is_connected(graph) and is_admissible(quad, key):
                found[key] = build_contour(region, key)
            else:
                found[key] = None

    contours = sorted((c for c in found.values() if c is not None), key=lambda c: (c.length, sorted(c.edges)))
    logger.info("Generated %d contours from face clusters of size <= %d in %.2f s",
                len(contours), max_faces, time.time() - started)
    return contours


def chi_check(contours):
    """
    ``chi = 2`` for simple contours and ``chi <= 2^(t+1)`` for all, plus whether a contour with ``chi = 0`` occurs.
    """

    failures = []
    zero = None
    for contour in contours:
        if contour.is_simple and contour.chi != 2:
            failures.append(sorted(contour.edges))
        if contour.chi > 2 ** (contour.t + 1):
            failures.append(sorted(contour.edges))
        if contour.chi == 0 and zero is None:
            zero = contour
    return CheckReport('chi', not failures, checked=len(contours), failures=failures,
                       details={'zero_chi_found': zero is not None,
                                'zero_chi_example': zero.to_dict() if zero is not None else None,
                                'max_t': max([c.t for c in contours] or [0])})
