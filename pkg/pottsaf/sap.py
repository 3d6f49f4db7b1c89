# python 2 backwards compatibility
from __future__ import print_function, division

# external imports
import logging
import math
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import mpmath

# package imports
from .errors import CapExceededError, ValidationError
from .exact_quad import ALPHA_SQUARED, ExactQuad
from .lattice import build_diced_patch, geodesic_ray
from .models import CheckReport, PathCountTable, Polygon, PolygonTable, Provenance

logger = logging.getLogger(__name__)

# hexagon (V0 face) neighbors in axial coordinates
CELL_DIRECTIONS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))

_PATCHES = {}


def _patch(radius):
    if radius not in _PATCHES:
        _PATCHES[radius] = build_diced_patch(radius)
    return _PATCHES[radius]


def _check_length(L_max, guard, what):
    if int(L_max) != L_max or L_max < 6 or L_max % 2:
        raise ValidationError("{} must be an even integer >= 6, got {}".format(what, L_max))
    if guard is not None and L_max > guard:
        raise CapExceededError(what, L_max, guard)
    return int(L_max)


def q_patch_radius(L_max):
    """Radius of a diced patch containing every circuit of length <= L_max that surrounds the origin."""
    return -(-L_max // 4) + -(-L_max // 12) + 2


def p_patch_radius(L_max):
    """Radius of a diced patch containing every circuit of length <= L_max through a hexagon at the origin."""
    return -(-L_max // 3) + 2


def _crossing_edges(quad):
    """Map from sorted ``G1`` id pairs crossing a horizontal row to ``(row, j)``."""
    crossings = {}
    for u, v in quad.edges_g1:
        a, b = quad.labels[u], quad.labels[v]
        if a[0] == 'D':
            a, b = b, a
        # U(j, r) -- D(j, r - 1) crosses the G0 edge (j, r)-(j + 1, r)
        if a[0] == 'U' and b == ('D', a[1], a[2] - 1):
            crossings[(u, v)] = (a[2], a[1])
    return crossings


def _bfs(adjacency, source, allowed=None):
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def _anchor_tasks(L_max):
    quad = _patch(q_patch_radius(L_max))
    index = quad.label_index
    n_anchors = int(math.ceil(1 + Fraction(L_max, 4)))
    tasks = []
    for k in range(1, n_anchors + 1):
        start = index.get(('D', k - 1, -1))
        if start is None:
            continue
        for first in quad.g1_neighbors[start]:
            if quad.labels[first] != ('U', k - 1, 0):
                tasks.append((L_max, k, first))
    return tasks


def _count_anchor(task):
    """
    Count circuits whose first crossing of the ray is the ``k``-th ray edge and whose path leaves the anchor's lower
    endpoint through ``first``.  Returns ``{L: count}``.
    """

    L_max, k, first = task
    quad = _patch(q_patch_radius(L_max))
    index = quad.label_index
    adjacency = quad.g1_neighbors
    start = index[('D', k - 1, -1)]
    target = index[('U', k - 1, 0)]

    crossings = _crossing_edges(quad)
    ray = {}
    forbidden = set()
    for edge, (row, j) in crossings.items():
        if row == 0 and j >= 0:
            ray[edge] = j
            if j < k - 1:
                forbidden.add(edge)

    def key(u, v):
        return (u, v) if u < v else (v, u)

    if key(start, first) in forbidden:
        return {}

    dist = _bfs(adjacency, target)
    counts = {}
    visited = {start, first}
    # the anchor edge itself crosses the ray once
    parity = [1 + (1 if key(start, first) in ray else 0)]

    def extend(v, length):
        remaining = L_max - 1 - length
        for w in adjacency[v]:
            edge = key(v, w)
            if edge in forbidden:
                continue
            crossed = 1 if edge in ray else 0
            if w == target:
                if length + 1 >= 5 and (parity[0] + crossed) % 2 == 1:
                    L = length + 2
                    counts[L] = counts.get(L, 0) + 1
                continue
            if w in visited or dist.get(w, L_max) > remaining - 1:
                continue
            visited.add(w)
            parity[0] += crossed
            extend(w, length + 1)
            parity[0] -= crossed
            visited.discard(w)

    if dist.get(first, L_max) <= L_max - 2:
        extend(first, 1)
    return counts


def _merge_counts(parts):
    total = {}
    for part in parts:
        for L, count in part.items():
            total[L] = total.get(L, 0) + count
    return total


def _run_tasks(function, tasks, threads):
    if threads is not None and threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(function, tasks))
    return [function(task) for task in tasks]


def enumerate_q(L_max, threads=1, guard=38):
    """
    Count ``q_L``, the simple circuits of the hexagonal lattice of length ``L`` whose interior contains the origin of
    the triangular lattice, for every even ``L <= L_max``.

    Every such circuit crosses one of the first ``ceil(1 + L/4)`` edges of the horizontal ray from the origin.  Each
    circuit is found exactly once, as a path closing its first crossing edge, with an odd number of ray crossings.

    :param L_max: even integer, at least 6
    :param threads: worker processes; work is split by anchor edge and first branch
    :param guard: refuse lengths above this
    :return: a :class:`PolygonTable` with entries for every even ``6 <= L <= L_max``
    """

    L_max = _check_length(L_max, guard, 'L_max')
    started = time.time()
    tasks = _anchor_tasks(L_max)
    counts = _merge_counts(_run_tasks(_count_anchor, tasks, threads))
    entries = {L: counts.get(L, 0) for L in range(6, L_max + 1, 2)}
    logger.info("Enumerated q_L for L <= %d in %.2f s (%d tasks)", L_max, time.time() - started, len(tasks))
    return PolygonTable(entries, provenance=Provenance.ENUMERATED)


def _order_key(label):
    kind, q, r = label
    return r, q, kind


def _cycles_through(quad, base, L_max, collect):
    """
    Circuits whose least vertex in ``(r, q, kind)`` order is ``base``, each counted once.
    """

    adjacency = quad.g1_neighbors
    labels = quad.labels
    base_key = _order_key(labels[base])
    allowed = set(v for v in quad.v1_ids if _order_key(labels[v]) > base_key)
    allowed.add(base)
    dist = _bfs(adjacency, base, allowed)

    counts = {}
    found = []
    path = [base]
    visited = {base}

    def extend(v, length):
        for w in adjacency[v]:
            if w == base:
                # closing edge; the direction with the smaller first step is the canonical one
                if length + 1 >= 6 and path[1] < v:
                    L = length + 1
                    counts[L] = counts.get(L, 0) + 1
                    if collect:
                        found.append(list(path))
                continue
            if w in visited or w not in allowed or dist.get(w, L_max) > L_max - length - 1:
                continue
            visited.add(w)
            path.append(w)
            extend(w, length + 1)
            path.pop()
            visited.discard(w)

    extend(base, 0)
    return counts, found


def _translation_classes(L_max, collect):
    quad = _patch(p_patch_radius(L_max))
    index = quad.label_index
    counts = {}
    cycles = []
    for kind in ('D', 'U'):
        base = index[(kind, 0, 0)]
        part, found = _cycles_through(quad, base, L_max, collect)
        counts = _merge_counts([counts, part])
        cycles.extend(found)
    return quad, counts, cycles


def enumerate_p(L_max, guard=38):
    """
    Count ``p_L``, the simple circuits of length ``L`` modulo translation, for every even ``L <= L_max``.  The
    representative of a class is the translate whose least vertex lies in the cell at the origin.

    :return: a :class:`PolygonTable` carrying ``p_entries`` and the ``q_L`` obtained by area weighting
    """

    L_max = _check_length(L_max, guard, 'L_max')
    polygons = enumerate_polygons(L_max, guard=guard)
    p_entries = {L: 0 for L in range(6, L_max + 1, 2)}
    for polygon in polygons:
        p_entries[polygon.length] += 1
    return PolygonTable(area_weighted_q(polygons, L_max), p_entries=p_entries, provenance=Provenance.ENUMERATED)


def polygon_interior(edges):
    """
    ``V0`` cells enclosed by a circuit given as hexagonal label pairs.  A horizontal row ``r`` is crossed only by
    edges ``U(j, r)--D(j, r - 1)``; with the crossing positions sorted as ``a1 < a2 < ...`` the enclosed cells of the
    row are ``a1 + 1 .. a2``, ``a3 + 1 .. a4`` and so on.
    """

    rows = {}
    for a, b in edges:
        if a[0] == 'D':
            a, b = b, a
        if a[0] == 'U' and b == ('D', a[1], a[2] - 1):
            rows.setdefault(a[2], []).append(a[1])

    interior = set()
    for r, positions in rows.items():
        positions.sort()
        if len(positions) % 2:
            raise ValidationError("row {} is crossed an odd number of times; the edges are not a circuit".format(r))
        for i in range(0, len(positions), 2):
            interior.update((q, r) for q in range(positions[i] + 1, positions[i + 1] + 1))
    return interior


def enumerate_polygons(L_max, guard=38):
    """
    Every circuit of length ``<= L_max`` modulo translation, as :class:`Polygon` objects with their interiors.
    """

    L_max = _check_length(L_max, guard, 'L_max')
    started = time.time()
    quad, _, cycles = _translation_classes(L_max, collect=True)
    labels = quad.labels
    polygons = []
    for cycle in cycles:
        edges = [(labels[cycle[i]], labels[cycle[(i + 1) % len(cycle)]]) for i in range(len(cycle))]
        polygons.append(Polygon(edges, polygon_interior(edges)))
    polygons.sort(key=lambda p: (p.length, p.edges))
    logger.info("Enumerated %d polygon classes up to L = %d in %.2f s", len(polygons), L_max, time.time() - started)
    return polygons


def area_weighted_q(polygons, L_max=None):
    """``q_L`` as the sum over translation classes of the number of enclosed cells."""
    if L_max is None:
        L_max = max(p.length for p in polygons)
    q = {L: 0 for L in range(6, L_max + 1, 2)}
    for polygon in polygons:
        if polygon.length <= L_max:
            interior = polygon.interior if polygon.interior is not None else polygon_interior(polygon.edges)
            q[polygon.length] += len(interior)
    return q


def surrounding_translates(polygon):
    """All translates of ``polygon`` whose interior contains the origin cell ``(0, 0)``."""
    interior = polygon.interior if polygon.interior is not None else polygon_interior(polygon.edges)
    return [polygon.translate(-a, -b) for a, b in sorted(interior)]


def crossing_check(polygons, quad=None, K=0):
    """
    Check that every polygon crosses one of the first ``N = ceil(1 + K + L/4)`` edges of the geodesic ray from the
    origin.

    :param polygons: polygons positioned so that they surround the origin
    :param quad: diced patch holding the ray (default: large enough for the longest polygon)
    :param K: distance allowance of the ray
    :raises ValidationError: for a polygon that does not surround the origin
    """

    polygons = list(polygons)
    K = Fraction(K)
    if quad is None:
        longest = max(p.length for p in polygons) if polygons else 6
        quad = _patch(int(math.ceil(1 + K + Fraction(longest, 4))) + 2)

    ray = geodesic_ray(quad)
    labels = quad.labels
    ray_edges = {}
    for k in range(1, len(ray)):
        dual = quad.edges_g1[quad.dual_of_g0[quad.g0_edge_id(ray[k - 1], ray[k])]]
        ray_edges[frozenset(labels[v] for v in dual)] = k

    worst = None
    failures = []
    for polygon in polygons:
        interior = polygon.interior if polygon.interior is not None else polygon_interior(polygon.edges)
        if (0, 0) not in interior:
            raise ValidationError("polygon of length {} does not surround the origin".format(polygon.length))
        hits = [ray_edges[frozenset(e)] for e in polygon.edges if frozenset(e) in ray_edges]
        if not hits:
            raise ValidationError("the ray is too short for a polygon of length {}".format(polygon.length))
        first = min(hits)
        N = int(math.ceil(1 + K + Fraction(polygon.length, 4)))
        margin = N - first
        worst = margin if worst is None else min(worst, margin)
        if margin < 0:
            failures.append({'length': polygon.length, 'first_crossing': first, 'N': N})

    return CheckReport('crossing', not failures, checked=len(polygons), failures=failures,
                       details={'worst_margin': worst, 'K': K})


def polyhex_oracle(L_max=14):
    """
    Independent ``q_L``: the sum of cell counts over hole-free fixed polyhexes of perimeter ``L``.  A polyhex of ``n``
    cells with ``a`` adjacent pairs has perimeter ``6n - 2a``, and at least ``2 ceil(sqrt(12n - 3))``.
    """

    L_max = _check_length(L_max, 24, 'L_max')
    n_max = 1
    while 2 * int(math.ceil(math.sqrt(12 * (n_max + 1) - 3))) <= L_max:
        n_max += 1

    def normalize(cells):
        r0, q0 = min((r, q) for q, r in cells)
        return frozenset((q - q0, r - r0) for q, r in cells)

    level = {frozenset([(0, 0)])}
    shapes = list(level)
    for _ in range(n_max - 1):
        grown = set()
        for shape in level:
            for q, r in shape:
                for dq, dr in CELL_DIRECTIONS:
                    cell = (q + dq, r + dr)
                    if cell not in shape:
                        grown.add(normalize(shape | {cell}))
        level = grown
        shapes.extend(level)

    q = {L: 0 for L in range(6, L_max + 1, 2)}
    for shape in shapes:
        adjacent = sum(1 for q0, r0 in shape for dq, dr in CELL_DIRECTIONS if (q0 + dq, r0 + dr) in shape) // 2
        perimeter = 6 * len(shape) - 2 * adjacent
        if perimeter <= L_max and not _has_hole(shape):
            q[perimeter] += len(shape)
    logger.debug("polyhex oracle: %d fixed shapes with at most %d cells", len(shapes), n_max)
    return q


def _has_hole(shape):
    qs = [q for q, _ in shape]
    rs = [r for _, r in shape]
    box = set((q, r) for q in range(min(qs) - 1, max(qs) + 2) for r in range(min(rs) - 1, max(rs) + 2))
    outside = box - shape
    start = (min(qs) - 1, min(rs) - 1)
    seen = {start}
    queue = deque([start])
    while queue:
        q, r = queue.popleft()
        for dq, dr in CELL_DIRECTIONS:
            cell = (q + dq, r + dr)
            if cell in outside and cell not in seen:
                seen.add(cell)
                queue.append(cell)
    return len(seen) != len(outside)


def _count_paths(quad, tail, head, n_max):
    adjacency = quad.g1_neighbors
    counts = [0] * (n_max + 1)
    counts[1] = 1
    visited = {tail, head}

    def extend(v, length):
        if length == n_max:
            return
        for w in adjacency[v]:
            if w not in visited:
                counts[length + 1] += 1
                visited.add(w)
                extend(w, length + 1)
                visited.discard(w)

    extend(head, 1)
    return counts


def enumerate_paths(n_max, guard=26, verify_upto=6):
    """
    ``C_n*``: the number of self-avoiding paths of ``n`` edges starting with a fixed directed edge.

    The hexagonal lattice is edge-transitive, so one start edge suffices; for ``n <= verify_upto`` the count is also
    maximized over every directed edge around the origin and recorded in ``per_edge_max``.
    """

    if n_max < 1:
        raise ValidationError("n_max must be at least 1, got {}".format(n_max))
    if guard is not None and n_max > guard:
        raise CapExceededError('n_max', n_max, guard)

    started = time.time()
    quad = _patch(2 * n_max // 3 + 3)
    index = quad.label_index
    tail, head = index[('U', 0, 0)], index[('D', 0, 0)]
    counts = _count_paths(quad, tail, head, n_max)
    c_star = {n: counts[n] for n in range(1, n_max + 1)}

    per_edge_max = None
    if verify_upto:
        m = min(verify_upto, n_max)
        around = [t for t in quad.neighbors[quad.origin]]
        per_edge_max = {n: 0 for n in range(1, m + 1)}
        for u in around:
            for w in quad.g1_neighbors[u]:
                other = _count_paths(quad, u, w, m)
                for n in range(1, m + 1):
                    per_edge_max[n] = max(per_edge_max[n], other[n])

    logger.info("Counted self-avoiding paths up to n = %d in %.2f s", n_max, time.time() - started)
    return PathCountTable(c_star, start_edge=(quad.labels[tail], quad.labels[head]), per_edge_max=per_edge_max)


def connective_estimate(table):
    """
    The roots ``(C_{n+1}*)^(1/n)`` and their running infimum.

    No circuit closes in fewer than 6 steps, so the roots equal 2 for ``n <= 4``; the check requires every root to be
    at most 2, the roots for ``n >= 5`` to be below 2, and the infimum to be below 2.
    """

    if not table.c_star:
        raise ValidationError("the path table is empty")
    roots = []
    with mpmath.workdps(30):
        for n in range(1, table.n_max):
            if n + 1 in table.c_star:
                roots.append((n, mpmath.root(table.c_star[n + 1], n)))
        infimum = min(r for _, r in roots) if roots else None
        target = mpmath.sqrt(2 + mpmath.sqrt(2))

    failures = [n for n, r in roots if r > 2 or (n >= 5 and r >= 2) or r < 1]
    passed = not failures and infimum is not None and infimum < 2
    return CheckReport('connective', passed, checked=len(roots), failures=failures,
                       details={'roots': [[n, float(r)] for n, r in roots],
                                'infimum': float(infimum) if infimum is not None else None,
                                'distance_to_connective_constant': float(abs(infimum - target))
                                if infimum is not None else None})


def submultiplicativity_check(table):
    """``C_{m+n-1}* <= C_m* C_n*`` and ``C_{n+1}* <= 2^n`` for every enumerated index."""
    c = table.c_star
    failures = []
    checked = 0
    for m in c:
        for n in c:
            if m + n - 1 in c:
                checked += 1
                if c[m + n - 1] > c[m] * c[n]:
                    failures.append(('sub', m, n))
    for n in c:
        if n + 1 in c:
            checked += 1
            if c[n + 1] > 2 ** n:
                failures.append(('power', n))
    return CheckReport('submultiplicativity', not failures, checked=checked, failures=failures)


def supermultiplicativity_check(table):
    """``p_{L+M-2} >= p_L p_M`` wherever all three counts are known."""
    p = table.p_entries or {}
    failures = []
    checked = 0
    for L in p:
        for M in p:
            if L <= M and L + M - 2 in p:
                checked += 1
                if p[L + M - 2] < p[L] * p[M]:
                    failures.append((L, M))
    return CheckReport('supermultiplicativity', not failures, checked=checked, failures=failures)


def circuit_bound(L):
    """``(L^2 / 36) (2 + sqrt 2)^((L - 2) / 2)`` as an :class:`ExactQuad`."""
    return Fraction(L * L, 36) * ALPHA_SQUARED ** ((L - 2) // 2)


def circuit_bound_check(table):
    """``q_L <= (L^2 / 36)(2 + sqrt 2)^((L - 2) / 2)``, decided exactly."""
    failures = [L for L, q in sorted(table.entries.items()) if ExactQuad(q) > circuit_bound(L)]
    return CheckReport('circuit_bound', not failures, checked=len(table.entries), failures=failures)


def compare_tables(enumerated, reference, L_max=None):
    """Exact agreement of two ``q_L`` tables on their shared lengths (up to ``L_max``)."""
    shared = sorted(set(enumerated.entries) & set(reference.entries))
    if L_max is not None:
        shared = [L for L in shared if L <= L_max]
    failures = [{'L': L, 'enumerated': enumerated.entries[L], 'reference': reference.entries[L]}
                for L in shared if enumerated.entries[L] != reference.entries[L]]
    return CheckReport('prefix_agreement', not failures and bool(shared), checked=len(shared), failures=failures)


def timing_report(lengths, threads=1, guard=38):
    """Enumerate each ``L`` separately and time it.  Returns ``[(L, q_L, seconds)]``."""
    rows = []
    for L in lengths:
        started = time.time()
        table = enumerate_q(L, threads=threads, guard=guard)
        rows.append((L, table.entries[L], time.time() - started))
    return rows
