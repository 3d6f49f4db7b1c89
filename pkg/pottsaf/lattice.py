# python 2 backwards compatibility
from __future__ import print_function, division

# external imports
import cmath
import logging
import math
from collections import deque
from fractions import Fraction

import mpmath
import networkx as nx

# package imports
from .errors import CapExceededError, InvariantViolation, ParseError, ValidationError
from .models import LatticeKind, Quadrangulation, Region, Sublattice

logger = logging.getLogger(__name__)

SQRT3_2 = math.sqrt(3) / 2

# dedupe key precision for reflected vertices, in decimal digits
KEY_DIGITS = 12


def hex_distance(q, r):
    """Graph distance from ``(0, 0)`` to ``(q, r)`` in the triangular lattice (axial coordinates)."""
    return max(abs(q), abs(r), abs(q + r))


def _axial_xy(q, r):
    return q + r / 2.0, r * SQRT3_2


def up_triangle(q, r):
    return (q, r), (q + 1, r), (q, r + 1)


def down_triangle(q, r):
    return (q + 1, r), (q, r + 1), (q + 1, r + 1)


def triangle_vertices(label):
    """The three axial ``V0`` labels of a diced ``V1`` label ``('U'|'D', q, r)``."""
    kind, q, r = label
    return up_triangle(q, r) if kind == 'U' else down_triangle(q, r)


def _triangles_at(q, r):
    return [('U', q, r), ('U', q - 1, r), ('U', q, r - 1),
            ('D', q - 1, r), ('D', q, r - 1), ('D', q - 1, r - 1)]


def _assemble(kind, p, v0_labels, v1_labels, triangle_of, coords, origin_label, extent=None):
    """
    Build a :class:`Quadrangulation` from ordered vertex labels of a triangulation and the triangles of its faces.

    ``G`` edges are incidences between a triangle and its present corners.  A side of a triangle becomes a ``G0`` edge
    when both its endpoints and both triangles sharing it are present; the ``G1`` edge joining those two triangles is
    its dual, so the two edge sets are in bijection by construction.
    """

    v0_id = {label: i for i, label in enumerate(v0_labels)}
    n0 = len(v0_labels)
    v1_id = {label: n0 + i for i, label in enumerate(v1_labels)}

    edges_g = []
    sides = {}
    for t in v1_labels:
        tid = v1_id[t]
        corners = [v0_id[a] for a in triangle_of[t] if a in v0_id]
        edges_g.extend((a, tid) for a in corners)
        for i in range(len(corners)):
            for j in range(i + 1, len(corners)):
                key = (min(corners[i], corners[j]), max(corners[i], corners[j]))
                sides.setdefault(key, []).append(tid)

    pairs = []
    for side, tris in sides.items():
        if len(tris) > 2:
            raise InvariantViolation("side {} is shared by {} triangles".format(side, len(tris)))
        if len(tris) == 2:
            pairs.append((side, (min(tris), max(tris))))
    pairs.sort()

    edges_g0 = [side for side, _ in pairs]
    edges_g1 = sorted(dual for _, dual in pairs)
    g1_index = {e: i for i, e in enumerate(edges_g1)}
    dual_of_g0 = [g1_index[dual] for _, dual in pairs]

    labels = list(v0_labels) + list(v1_labels)
    sublattice = [Sublattice.V0] * n0 + [Sublattice.V1] * len(v1_labels)

    degree_g = [0] * len(labels)
    degree_sub = [0] * len(labels)
    for a, b in edges_g:
        degree_g[a] += 1
        degree_g[b] += 1
    for a, b in edges_g0:
        degree_sub[a] += 1
        degree_sub[b] += 1
    for a, b in edges_g1:
        degree_sub[a] += 1
        degree_sub[b] += 1

    for v in range(n0):
        if degree_g[v] > p:
            raise InvariantViolation("vertex {} lies on {} triangles, more than {}".format(labels[v], degree_g[v], p))

    interior = [degree_g[v] == p and degree_sub[v] == p for v in range(n0)]
    interior += [degree_g[v] == 3 and degree_sub[v] == 3 for v in range(n0, len(labels))]

    return Quadrangulation(kind=kind,
                           p=p,
                           sublattice=sublattice,
                           labels=labels,
                           coords=[coords[label] for label in labels],
                           edges_g=sorted(edges_g),
                           edges_g0=edges_g0,
                           edges_g1=edges_g1,
                           dual_of_g0=dual_of_g0,
                           interior=interior,
                           origin=v0_id.get(origin_label, 0),
                           extent=extent)


def build_diced_patch(radius):
    """
    Build the diced-lattice patch around the origin of the triangular lattice.

    ``V0`` holds every triangular vertex within graph distance ``radius`` of the origin, ``V1`` every triangle with
    at least one corner in ``V0``.  The origin has id 0.

    :param radius: nonnegative integer
    :return: the :class:`Quadrangulation`
    """

    if radius < 0 or int(radius) != radius:
        raise ValidationError("radius must be a nonnegative integer, got {}".format(radius))
    radius = int(radius)

    v0 = [(q, r) for q in range(-radius, radius + 1) for r in range(-radius, radius + 1)
          if hex_distance(q, r) <= radius]
    v0.sort(key=lambda x: (hex_distance(*x), x[1], x[0]))

    triangles = set()
    for q, r in v0:
        triangles.update(_triangles_at(q, r))

    def tri_key(t):
        return max(hex_distance(*a) for a in triangle_vertices(t)), t

    v1 = sorted(triangles, key=tri_key)
    triangle_of = {t: triangle_vertices(t) for t in v1}

    coords = {}
    for t in v1:
        xs, ys = zip(*(_axial_xy(*a) for a in triangle_of[t]))
        coords[t] = (sum(xs) / 3.0, sum(ys) / 3.0)
    for a in v0:
        coords[a] = _axial_xy(*a)

    quad = _assemble(LatticeKind.DICED, 6, v0, v1, triangle_of, coords, origin_label=(0, 0), extent=radius)
    logger.debug("built diced patch of radius %d: %d V0, %d V1 vertices", radius, len(v0), len(v1))
    return quad


def _reflect_hyperbolic(z, a, b):
    """Reflect ``z`` across the Poincare-disk geodesic through ``a`` and ``b``."""
    def to_origin(w):
        return (w - a) / (1 - mpmath.conj(a) * w)

    def from_origin(w):
        return (w + a) / (1 + mpmath.conj(a) * w)

    direction = to_origin(b)
    u = direction / abs(direction)
    return from_origin(u * u * mpmath.conj(to_origin(z)))


def _reflect_euclidean(z, a, b):
    u = (b - a) / abs(b - a)
    return a + u * u * mpmath.conj(z - a)


def build_schlafli_patch(p, generations, generation_cap=6):
    """
    Build a patch of the {3,p} triangulation and its dual {p,3} by repeatedly reflecting a base triangle in its sides.

    Generation ``g`` holds every triangle reachable from the base by at most ``g`` reflections, i.e. the ``G1`` ball of
    radius ``g`` around the base triangle.  ``p = 6`` is embedded in the Euclidean plane, ``p > 6`` in the Poincare
    disk.  Vertices are deduplicated by coordinates rounded to 12 digits, then checked combinatorially.

    :param p: triangulation degree, at least 6
    :param generations: number of reflection layers
    :param generation_cap: refuse more generations than this for hyperbolic ``p``
    """

    if p < 6:
        raise ValidationError("p must be at least 6, got {}".format(p))
    if generations < 0:
        raise ValidationError("generations must be nonnegative, got {}".format(generations))
    if p > 6 and generations > generation_cap:
        raise CapExceededError("{{3,{}}} patch".format(p), "{} generations".format(generations), generation_cap)

    with mpmath.workdps(40):
        if p == 6:
            circumradius = 1 / mpmath.sqrt(3)
            reflect = _reflect_euclidean
        else:
            hyperbolic = mpmath.acosh(mpmath.cot(mpmath.pi / 3) * mpmath.cot(mpmath.pi / p))
            circumradius = mpmath.tanh(hyperbolic / 2)
            reflect = _reflect_hyperbolic

        positions = []
        index = {}

        def vertex_id(z):
            key = (int(mpmath.nint(z.real * 10 ** KEY_DIGITS)), int(mpmath.nint(z.imag * 10 ** KEY_DIGITS)))
            if key not in index:
                index[key] = len(positions)
                positions.append(z)
            return index[key]

        base = tuple(vertex_id(circumradius * mpmath.expjpi(mpmath.mpf(1) / 2 + mpmath.mpf(2 * k) / 3))
                     for k in range(3))
        triangles = [base]
        seen = {frozenset(base)}
        frontier = [base]

        for generation in range(generations):
            next_frontier = []
            for tri in frontier:
                a, b, c = tri
                for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                    w = vertex_id(reflect(positions[z], positions[x], positions[y]))
                    key = frozenset((x, y, w))
                    if len(key) < 3:
                        raise InvariantViolation("reflection collapsed a triangle in generation {}".format(generation))
                    if key not in seen:
                        seen.add(key)
                        new = (x, y, w)
                        triangles.append(new)
                        next_frontier.append(new)
            frontier = next_frontier

        coords = {v: (float(z.real), float(z.imag)) for v, z in enumerate(positions)}

    v1 = [('T', i) for i in range(len(triangles))]
    triangle_of = {('T', i): t for i, t in enumerate(triangles)}
    for i, t in enumerate(triangles):
        xs, ys = zip(*(coords[v] for v in t))
        coords[('T', i)] = (sum(xs) / 3.0, sum(ys) / 3.0)

    quad = _assemble(LatticeKind.SCHLAFLI, p, list(range(len(positions))), v1, triangle_of, coords,
                     origin_label=0, extent=generations)

    for v in quad.v0_ids:
        if quad.interior[v] and len(quad.g0_neighbors[v]) != p:
            raise InvariantViolation("interior vertex {} has degree {}".format(v, len(quad.g0_neighbors[v])))

    logger.debug("built {3,%d} patch with %d generations: %d triangles", p, generations, len(triangles))
    return quad


def restrict(quad, v1_ids):
    """
    The sub-patch spanned by a set of ``V1`` vertices (triangles) and their corners.  Labels are kept.
    """

    v1_ids = sorted(set(v1_ids))
    for t in v1_ids:
        if quad.is_v0(t):
            raise ValidationError("vertex {} is not in V1".format(t))
    v0_ids = sorted(set(a for t in v1_ids for a in quad.neighbors[t]))
    labels = quad.labels
    triangle_of = {labels[t]: tuple(labels[a] for a in quad.neighbors[t]) for t in v1_ids}
    coords = {labels[v]: quad.coords[v] for v in v0_ids + v1_ids}
    origin = quad.origin if quad.origin in v0_ids else v0_ids[0]
    return _assemble(quad.kind, quad.p, [labels[v] for v in v0_ids], [labels[t] for t in v1_ids],
                     triangle_of, coords, origin_label=labels[origin], extent=None)


def g1_ball(quad, center, radius):
    """``V1`` vertices within ``G1`` distance ``radius`` of ``center``."""
    lengths = nx.single_source_shortest_path_length(quad.graph('G1'), center, cutoff=radius)
    return sorted(lengths)


def patches_isomorphic(first, second):
    """
    Whether two patches are isomorphic as graphs ``G`` with sublattice labels.
    """

    def same_sublattice(x, y):
        return x['sublattice'] == y['sublattice']

    return nx.is_isomorphic(first.graph('G'), second.graph('G'), node_match=same_sublattice)


def _check_v1_seed(quad, delta1):
    delta1 = frozenset(delta1)
    if not delta1:
        raise ValidationError("the seed set is empty")
    for t in delta1:
        if t < 0 or t >= quad.n_vertices or quad.is_v0(t):
            raise ValidationError("seed vertex {} is not in V1".format(t))
    if not nx.is_connected(quad.graph('G1').subgraph(delta1)):
        raise ValidationError("the seed set is not connected in G1")
    return delta1


def region_from_seed(quad, delta1):
    """
    Build the region ``Lambda = delta1 + {v in V0 : every G-neighbor of v is in delta1}``.

    The boundary of such a set lies in ``V0`` by bipartiteness.  Simple connectedness (``Lambda`` and its complement
    both connected in ``G``) is verified on the patch, and so is the distance to the patch rim.

    :param quad: the patch
    :param delta1: nonempty ``G1``-connected set of ``V1`` ids
    :return: the :class:`Region`
    """

    delta1 = _check_v1_seed(quad, delta1)
    neighbors = quad.neighbors

    candidates = set(a for t in delta1 for a in neighbors[t])
    sites = set(delta1)
    sites.update(a for a in candidates if all(t in delta1 for t in neighbors[a]))

    boundary = set(u for v in sites for u in neighbors[v] if u not in sites)
    if any(not quad.is_v0(u) for u in boundary):
        raise InvariantViolation("region boundary contains a V1 vertex")

    rim = [v for v in sites | boundary if not quad.interior[v]]
    if rim:
        raise ValidationError("region touches the patch rim at {} vertices".format(len(rim)))

    graph = quad.graph('G')
    if not nx.is_connected(graph.subgraph(sites)):
        raise ValidationError("region is not connected")
    rest = [v for v in range(quad.n_vertices) if v not in sites]
    if not nx.is_connected(graph.subgraph(rest)):
        raise ValidationError("region is not simply connected: its complement is disconnected")

    edges_lambda = [e for e in quad.edges_g if e[0] in sites or e[1] in sites]
    return Region(quad, sites, boundary, edges_lambda, seed=delta1)


def thick_set(quad, delta1):
    """
    The thick set ``Delta = {v : d_G(v, delta1) <= 1}`` of a ``G1``-connected seed.

    :return: ``(Delta, Delta0, Delta1)`` as frozensets, with ``Delta1 == delta1``
    """

    delta1 = _check_v1_seed(quad, delta1)
    delta = set(delta1)
    for t in delta1:
        delta.update(quad.neighbors[t])
    delta0 = frozenset(v for v in delta if quad.is_v0(v))
    return frozenset(delta), delta0, frozenset(v for v in delta if not quad.is_v0(v))


def ball_region(quad, radius):
    """
    Region seeded by every triangle whose corners all lie within ``G0`` distance ``radius`` of the origin.

    On the diced lattice ``Lambda`` is the hexagon of radius ``radius - 1`` plus all triangles of the hexagon of radius
    ``radius``, and the boundary is the ``G0`` sphere of radius ``radius``.  The patch needs radius ``radius + 1``.
    """

    if radius < 1:
        raise ValidationError("ball regions need radius >= 1, got {}".format(radius))
    dist = nx.single_source_shortest_path_length(quad.graph('G0'), quad.origin, cutoff=radius)
    seed = [t for t in quad.v1_ids
            if len(quad.neighbors[t]) == 3 and all(a in dist for a in quad.neighbors[t])]
    return region_from_seed(quad, seed)


def connected_subsets(quad, size, candidates=None):
    """
    All ``G1``-connected sets of exactly ``size`` vertices among ``candidates`` (default: interior ``V1``).

    :return: sorted list of sorted tuples
    """

    if candidates is None:
        candidates = [t for t in quad.v1_ids if quad.interior[t]]
    allowed = frozenset(candidates)
    adj = quad.g1_neighbors

    level = set(frozenset([t]) for t in allowed)
    for _ in range(size - 1):
        level = set(s | frozenset([u]) for s in level for t in s for u in adj[t] if u in allowed and u not in s)
    return sorted(tuple(sorted(s)) for s in level)


def edge_distance(distances, e, f):
    """
    Distance between two edges: 0 if equal, else one plus the least distance between their endpoints.  This is the
    number of internal vertices of a shortest path having ``e`` and ``f`` as its end edges.

    :param distances: mapping ``v -> {w: d(v, w)}`` for the endpoints of ``e``
    """

    if tuple(e) == tuple(f):
        return 0
    return 1 + min(distances[x][y] for x in e for y in f)


def dual_distance_violations(quad, radius):
    """
    Check ``d(e*, f*) <= (p/2 - 1) d(e, f) + 1`` for every pair of ``G0`` edges within ``G0`` distance ``radius`` of the
    origin.  The factor is 2 on the diced lattice.

    :return: ``(pairs_checked, violations)`` where violations lists ``(e, f, d, d_dual)``
    """

    factor = Fraction(quad.p, 2) - 1
    g0, g1 = quad.graph('G0'), quad.graph('G1')
    near = nx.single_source_shortest_path_length(g0, quad.origin, cutoff=radius)
    edge_ids = [i for i, (u, v) in enumerate(quad.edges_g0) if u in near and v in near]

    ends0 = set(x for i in edge_ids for x in quad.edges_g0[i])
    ends1 = set(x for i in edge_ids for x in quad.edges_g1[quad.dual_of_g0[i]])
    dist0 = {v: nx.single_source_shortest_path_length(g0, v) for v in ends0}
    dist1 = {v: nx.single_source_shortest_path_length(g1, v) for v in ends1}

    checked = 0
    violations = []
    for a in range(len(edge_ids)):
        e = quad.edges_g0[edge_ids[a]]
        e_dual = quad.edges_g1[quad.dual_of_g0[edge_ids[a]]]
        for b in range(a + 1, len(edge_ids)):
            f = quad.edges_g0[edge_ids[b]]
            f_dual = quad.edges_g1[quad.dual_of_g0[edge_ids[b]]]
            d = edge_distance(dist0, e, f)
            d_dual = edge_distance(dist1, e_dual, f_dual)
            checked += 1
            if d_dual > factor * d + 1:
                violations.append((e, f, d, d_dual))
    return checked, violations


def _local_angle(quad, center, v):
    z0 = complex(*quad.coords[center])
    z = complex(*quad.coords[v])
    if quad.p > 6:
        w = (z - z0) / (1 - z0.conjugate() * z)
    else:
        w = z - z0
    return cmath.phase(w)


def ccw_neighbors(quad, v):
    """``G0`` neighbors of ``v`` in counterclockwise order."""
    return sorted(quad.g0_neighbors[v], key=lambda u: _local_angle(quad, v, u))


def geodesic_ray(quad, start=None, toward=None):
    """
    A straight ray in ``G0``: after the first step, always leave a vertex through the neighbor opposite the one it was
    entered from.  Odd degrees alternate between the two middle choices.  The ray stops at the first vertex whose link
    is not fully inside the patch.

    :param start: interior ``V0`` id (default: the origin)
    :param toward: first neighbor (default: axial ``(1, 0)`` on the diced lattice, else the least neighbor id)
    :return: list of ``V0`` ids, starting with ``start``
    """

    if start is None:
        start = quad.origin
    if not quad.is_v0(start) or not quad.interior[start]:
        raise ValidationError("ray start {} is not an interior V0 vertex".format(start))
    if toward is None:
        start_label = quad.labels[start]
        if quad.kind == LatticeKind.DICED:
            toward = quad.label_index[(start_label[0] + 1, start_label[1])]
        else:
            toward = min(quad.g0_neighbors[start])
    if toward not in quad.g0_neighbors[start]:
        raise ValidationError("{} is not a G0 neighbor of {}".format(toward, start))

    ray = [start, toward]
    step = 0
    while quad.interior[ray[-1]]:
        previous, current = ray[-2], ray[-1]
        order = ccw_neighbors(quad, current)
        degree = len(order)
        if degree % 2 == 0:
            offset = degree // 2
        else:
            offset = degree // 2 if step % 2 == 0 else degree - degree // 2
        ray.append(order[(order.index(previous) + offset) % degree])
        step += 1
    return ray


def ray_is_geodesic(quad, ray):
    """Whether ``d_G0(ray[0], ray[n]) == n`` for every ``n``."""
    dist = nx.single_source_shortest_path_length(quad.graph('G0'), ray[0], cutoff=len(ray))
    return all(dist.get(v) == n for n, v in enumerate(ray))


def export_edge_list(quad):
    """
    Render a patch as the plain-text edge-list format::

        quadrangulation v0=<n0> v1=<n1>
        G u v
        G0 u v
        G1 u v
        D e0_index e1_index
    """

    lines = ["quadrangulation v0={} v1={}".format(len(quad.v0_ids), len(quad.v1_ids))]
    lines.extend("G {} {}".format(u, v) for u, v in quad.edges_g)
    lines.extend("G0 {} {}".format(u, v) for u, v in quad.edges_g0)
    lines.extend("G1 {} {}".format(u, v) for u, v in quad.edges_g1)
    lines.extend("D {} {}".format(i, j) for i, j in enumerate(quad.dual_of_g0))
    return "\n".join(lines) + "\n"


def parse_edge_list(text):
    """
    Read the edge-list format back.  Coordinates are not part of the format and are set to the origin; interior flags
    are recomputed from degrees, taking the largest ``V0`` degree as the full degree.
    """

    lines = [line.strip() for line in text.splitlines()]
    if not lines or not lines[0].startswith("quadrangulation"):
        raise ParseError("missing quadrangulation header", 1)
    try:
        fields = dict(token.split('=') for token in lines[0].split()[1:])
        n0, n1 = int(fields['v0']), int(fields['v1'])
    except (ValueError, KeyError):
        raise ParseError("malformed header", 1)

    edges = {'G': [], 'G0': [], 'G1': [], 'D': []}
    dual_lines = []
    for number, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in edges:
            raise ParseError("expected '<G|G0|G1|D> a b'", number)
        try:
            edges[parts[0]].append((int(parts[1]), int(parts[2])))
            if parts[0] == 'D':
                dual_lines.append(number)
        except ValueError:
            raise ParseError("non-integer id", number)

    dual_of_g0 = [None] * len(edges['G0'])
    for (i, j), number in zip(edges['D'], dual_lines):
        if not (0 <= i < len(dual_of_g0) and 0 <= j < len(edges['G1'])):
            raise ParseError("dual pair ({}, {}) out of range".format(i, j), number)
        dual_of_g0[i] = j
    if any(j is None for j in dual_of_g0):
        raise ParseError("some G0 edges have no dual", len(lines))

    n = n0 + n1
    degree_g, degree_sub = [0] * n, [0] * n
    for u, v in edges['G']:
        degree_g[u] += 1
        degree_g[v] += 1
    for u, v in edges['G0'] + edges['G1']:
        degree_sub[u] += 1
        degree_sub[v] += 1
    p = max(degree_g[:n0]) if n0 else 0
    interior = [degree_g[v] == p and degree_sub[v] == p for v in range(n0)]
    interior += [degree_g[v] == 3 and degree_sub[v] == 3 for v in range(n0, n)]

    return Quadrangulation(kind=LatticeKind.DICED if p == 6 else LatticeKind.SCHLAFLI,
                           p=p,
                           sublattice=[Sublattice.V0] * n0 + [Sublattice.V1] * n1,
                           labels=list(range(n)),
                           coords=[(0.0, 0.0)] * n,
                           edges_g=edges['G'],
                           edges_g0=edges['G0'],
                           edges_g1=edges['G1'],
                           dual_of_g0=dual_of_g0,
                           interior=interior)


NAMED_REGIONS = ('single', 'star', 'star+1', 'double-star', 'triple-star')


def default_patch_radius(spec):
    """
    Smallest diced patch radius that keeps the closure of a named region off the patch rim.
    """

    spec = str(spec).strip().lower()
    if spec in ('single', 'star'):
        return 2
    if spec in ('star+1', 'double-star', 'triple-star') or spec.startswith('seed:'):
        return 3
    if spec.startswith('ball:'):
        try:
            return int(spec.split(':', 1)[1]) + 1
        except ValueError:
            raise ValidationError("malformed ball region '{}'".format(spec))
    raise ValidationError("unknown region '{}'; expected one of {}, ball:<R> or seed:<ids>"
                          .format(spec, ", ".join(NAMED_REGIONS)))


def region_from_spec(quad, spec):
    """
    Build a region from a short textual description.

    ===============  ===========================================================================
    Spec             Region
    ===============  ===========================================================================
    ``single``       one triangle around the origin (``Lambda`` is a single ``V1`` vertex)
    ``star``         the triangles around the origin, so ``Lambda`` is the origin and its ``V1``
                     neighbors
    ``star+1``       the star plus the least-id triangle adjacent to it in ``G1``
    ``double-star``  the triangles around the origin and around its least-id ``G0`` neighbor
    ``triple-star``  the triangles around the three corners of the least-id triangle
                     at the origin, so the thick set of that triangle lies in ``Lambda``
    ``ball:R``       :func:`ball_region` of radius ``R``
    ``seed:a,b,..``  :func:`region_from_seed` with the listed ``V1`` ids
    ===============  ===========================================================================
    """

    text = str(spec).strip().lower()
    origin = quad.origin
    star = set(quad.neighbors[origin])

    if text == 'single':
        return region_from_seed(quad, [min(star)])
    if text == 'star':
        return region_from_seed(quad, star)
    if text == 'star+1':
        outside = [u for t in star for u in quad.g1_neighbors[t] if u not in star]
        if not outside:
            raise ValidationError("the patch is too small for the star+1 region")
        return region_from_seed(quad, star | {min(outside)})
    if text == 'double-star':
        other = min(quad.g0_neighbors[origin])
        return region_from_seed(quad, star | set(quad.neighbors[other]))
    if text == 'triple-star':
        corners = quad.neighbors[min(star)]
        return region_from_seed(quad, set().union(*(quad.neighbors[a] for a in corners)))
    if text.startswith('ball:'):
        try:
            radius = int(text.split(':', 1)[1])
        except ValueError:
            raise ValidationError("malformed ball region '{}'".format(spec))
        return ball_region(quad, radius)
    if text.startswith('seed:'):
        try:
            ids = [int(token) for token in text.split(':', 1)[1].split(',') if token.strip()]
        except ValueError:
            raise ValidationError("malformed seed region '{}'".format(spec))
        return region_from_seed(quad, ids)
    raise ValidationError("unknown region '{}'; expected one of {}, ball:<R> or seed:<ids>"
                          .format(spec, ", ".join(NAMED_REGIONS)))
