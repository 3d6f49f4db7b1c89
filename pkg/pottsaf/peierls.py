# python 2 backwards compatibility
from __future__ import print_function, division

# external imports
import logging
from fractions import Fraction

import mpmath

# package imports
from .errors import NonConvergentError, ValidationError
from .exact_quad import ALPHA_SQUARED, ExactQuad
from .models import Beta, BoundReport, CheckReport, ContourWeights, WeightForm
from .models.beta import _mpf_to_fraction
from .utils import dyadic_ceil

logger = logging.getLogger(__name__)

DEFAULT_BITS = 200

# sums over the published series, L = 6..140 (the strong value is an upper bound)
PUBLISHED_MAX_L = 140
PUBLISHED_WEAK_PREFIX = Fraction(22074233899340881133583692519761872405249, 2 ** 139)
PUBLISHED_STRONG_PREFIX = Fraction(3119, 100000)


def _p_of(x):
    return (1 + x + x * x) / (2 + x ** 3)


def _q_of(x):
    return 9 * x * x * (2 + x ** 3) / (1 + x + x * x) ** 3


def contour_weights(beta, precision_bits=128):
    """
    The contour weights

        p = (1 + x + x^2) / (2 + x^3),   q = 9 x^2 (2 + x^3) / (1 + x + x^2)^3,   x = exp(-beta).

    Both are increasing in ``x``, so enclosures of ``x`` give enclosures of ``p`` and ``q``.

    :param beta: anything :meth:`Beta.parse` accepts
    :return: a :class:`ContourWeights`, exact when ``exp(-beta)`` is rational
    """

    beta = Beta.parse(beta)
    if beta.is_exact:
        x = beta.boltzmann
        p, q = _p_of(x), _q_of(x)
        return ContourWeights(beta, p, q, p, p, q, q)

    x_lo, x_hi = beta.boltzmann_interval(precision_bits)
    with mpmath.workprec(precision_bits):
        x = beta.boltzmann_mpf(precision_bits)
        p, q = _p_of(x), _q_of(x)
    return ContourWeights(beta, p, q, _p_of(x_lo), _p_of(x_hi), _q_of(x_lo), _q_of(x_hi),
                          precision_bits=precision_bits)


def _check_table(table):
    if not table.entries:
        raise ValidationError("the polygon table is empty")
    missing = [L for L in range(6, table.max_L + 1, 2) if L not in table.entries]
    if missing:
        raise ValidationError("the polygon table has gaps at L = {}".format(missing[:10]))


def prefix_sum(table, form=WeightForm.WEAK):
    """
    ``sum q_L 2^-L`` (weak) or ``sum q_L 2^-L / (1 + 2^(1-L))`` (strong), exactly.
    """

    form = WeightForm.parse(form)
    total = Fraction(0)
    for L, q in table.entries.items():
        term = Fraction(q, 1 << L)
        if form == WeightForm.STRONG:
            term /= 1 + Fraction(2, 1 << L)
        total += term
    return total


def _check_start(L_start):
    if int(L_start) != L_start or L_start % 2 or L_start < 6:
        raise ValidationError("the tail must start at an even L >= 6, got {}".format(L_start))
    return int(L_start)


def tail_bound(L_start, p=Fraction(1, 2)):
    """
    Closed form of ``sum over even L >= L_start of (L^2/36)(2 + sqrt 2)^((L-2)/2) p^L`` in Q[sqrt 2].

    With ``L = 2m`` and ``y = (2 + sqrt 2) p^2`` the terms are ``m^2 y^m / (9 (2 + sqrt 2))``, and
    ``sum_{m >= M} m^2 y^m = y^M (M^2 S0 + 2 M S1 + S2)`` with ``S0 = 1/(1-y)``, ``S1 = y/(1-y)^2`` and
    ``S2 = y(1+y)/(1-y)^3``.

    :raises NonConvergentError: unless ``y < 1``
    """

    L_start = _check_start(L_start)
    y = ALPHA_SQUARED * (Fraction(p) ** 2)
    if y >= 1:
        raise NonConvergentError('(2 + sqrt 2) p^2', float(y))
    M = L_start // 2
    one_minus = 1 - y
    s0 = one_minus.inverse()
    s1 = y * s0 * s0
    s2 = y * (1 + y) * s0 * s0 * s0
    return y ** M * (M * M * s0 + 2 * M * s1 + s2) / (9 * ALPHA_SQUARED)


def tail_partial_sum(L_start, L_stop, p=Fraction(1, 2)):
    """The same series summed term by term over ``L_start <= L < L_stop``."""
    L_start = _check_start(L_start)
    y = ALPHA_SQUARED * (Fraction(p) ** 2)
    total = ExactQuad(0)
    term = y ** (L_start // 2)
    for m in range(L_start // 2, (L_stop + 1) // 2):
        total = total + m * m * term
        term = term * y
    return total / (9 * ALPHA_SQUARED)


def tail_consistency_check(L_start, extra=200):
    """``tail(L) == partial(L, L + extra) + tail(L + extra)``, exactly."""
    whole = tail_bound(L_start)
    split = tail_partial_sum(L_start, L_start + extra) + tail_bound(L_start + extra)
    return CheckReport('tail_consistency', whole == split, checked=1,
                       details={'L_start': L_start, 'extra': extra})


def _resolve_tail_from(table, tail_from):
    if tail_from is None:
        tail_from = table.max_L + 2
    tail_from = _check_start(tail_from)
    if tail_from <= table.max_L:
        raise ValidationError("tail_from = {} overlaps the table, which reaches L = {}".format(tail_from, table.max_L))
    return tail_from


def zero_temp_bound(table, form=WeightForm.WEAK, tail_from=None, bits=DEFAULT_BITS):
    """
    The zero-temperature Peierls bound: ``total = prefix_sum + tail_bound(tail_from)`` and
    ``magnetization_lower = 1 - 2 * total``.

    :param table: :class:`PolygonTable` with every even ``L`` from 6 to its maximum
    :param form: ``"weak"`` or ``"strong"``
    :param tail_from: first ``L`` handled by the tail (default ``max_L + 2``)
    :param bits: width of the rational enclosure of the total
    """

    _check_table(table)
    tail_from = _resolve_tail_from(table, tail_from)
    if tail_from > table.max_L + 2:
        logger.warning("lengths %d..%d are covered by neither the table nor the tail", table.max_L + 2, tail_from - 2)

    prefix = prefix_sum(table, form)
    tail = tail_bound(tail_from)
    total = tail + prefix
    lo, hi = total.bounds(bits)
    report = BoundReport(prefix, tail, lo, hi, form=form, beta=Beta.infinite(), max_L=table.max_L,
                         tail_from=tail_from, total_exact=total)
    logger.debug("zero-temperature %s bound: total <= %s", form, float(hi))
    return report


def prefix_bound(prefix, tail_from=PUBLISHED_MAX_L + 2, form=WeightForm.WEAK, bits=DEFAULT_BITS):
    """
    The zero-temperature bound from a known prefix sum (or an upper bound on it) instead of a table.
    """

    prefix = Fraction(prefix)
    if prefix < 0:
        raise ValidationError("a prefix sum cannot be negative, got {}".format(prefix))
    tail_from = _check_start(tail_from)
    tail = tail_bound(tail_from)
    total = tail + prefix
    lo, hi = total.bounds(bits)
    return BoundReport(prefix, tail, lo, hi, form=WeightForm.parse(form), beta=Beta.infinite(), max_L=tail_from - 2,
                       tail_from=tail_from, total_exact=total)


def published_bound(form=WeightForm.WEAK):
    """:func:`prefix_bound` with the published prefix sums to ``L = 140`` and the tail from 142."""
    form = WeightForm.parse(form)
    prefix = PUBLISHED_STRONG_PREFIX if form == WeightForm.STRONG else PUBLISHED_WEAK_PREFIX
    return prefix_bound(prefix, PUBLISHED_MAX_L + 2, form)


def magnetization_exceeds(report, threshold):
    """Exact test of ``1 - 2 * total > threshold`` for a report with an exact total."""
    if report.total_exact is None:
        return report.raw_magnetization_lower > threshold
    return 1 - 2 * report.total_exact > Fraction(threshold)


def _t1_series(r):
    """``sum_{L >= 3} L^2 r^L`` for ``0 <= r < 1``."""
    return r * (1 + r) / (1 - r) ** 3 - r - 4 * r * r


def positive_temp_bound(table, beta, constant_c=100, alpha_squared=ALPHA_SQUARED, tail_from=None,
                        precision_bits=128):
    """
    The positive-temperature Peierls bound.

    The simple contours contribute ``sum q_L p^L / (1 + 2 p^L)`` over the table plus the circuit tail with ``p`` in
    place of 1/2; contours with triple points contribute half of
    ``16 C^2 q sum_{L >= 3} L^2 r^L`` with ``r = alpha p exp(sqrt(8 C q))``.  The upper ends of the weight enclosures
    are used throughout, so the result is rigorous for every ``beta``.

    :raises NonConvergentError: when ``r >= 1``
    """

    _check_table(table)
    tail_from = _resolve_tail_from(table, tail_from)
    beta = Beta.parse(beta)
    constant_c = Fraction(constant_c)
    if constant_c <= 0:
        raise ValidationError("C must be positive")
    alpha_squared = alpha_squared if isinstance(alpha_squared, ExactQuad) else ExactQuad(Fraction(alpha_squared))

    weights = contour_weights(beta, precision_bits)

    def simple_sum(p):
        return sum((q * p ** L / (1 + 2 * p ** L) for L, q in table.entries.items()), Fraction(0))

    prefix_hi = simple_sum(weights.p_hi)
    prefix_lo = simple_sum(weights.p_lo) if weights.p_lo != weights.p_hi else prefix_hi
    tail_hi = tail_bound(tail_from, weights.p_hi)
    tail_lo = tail_bound(tail_from, weights.p_lo) if weights.p_lo != weights.p_hi else tail_hi

    with mpmath.workprec(precision_bits + 32):
        alpha = mpmath.sqrt(alpha_squared.to_mpf())
        q_hi = mpmath.mpf(weights.q_hi.numerator) / weights.q_hi.denominator
        p_hi = mpmath.mpf(weights.p_hi.numerator) / weights.p_hi.denominator
        ratio = alpha * p_hi * mpmath.exp(mpmath.sqrt(8 * constant_c.numerator * q_hi / constant_c.denominator))
        if weights.q_hi == 0:
            extra = Fraction(0)
        else:
            if ratio >= 1:
                raise NonConvergentError('alpha p exp(sqrt(8 C q))', mpmath.nstr(ratio, 10))
            value = 16 * (mpmath.mpf(constant_c.numerator) / constant_c.denominator) ** 2 * q_hi * _t1_series(ratio)
            slack = Fraction(1, 1 << precision_bits) * max(1, int(mpmath.ceil(value)))
            extra = dyadic_ceil(_mpf_to_fraction(value) + slack, precision_bits)

    total_exact = None
    if weights.is_exact and extra == 0:
        total_exact = tail_hi + prefix_hi
    report = BoundReport(prefix_hi, tail_hi,
                         total_lo=prefix_lo + tail_lo.lower(DEFAULT_BITS),
                         total_hi=prefix_hi + tail_hi.upper(DEFAULT_BITS) + extra / 2,
                         form=WeightForm.STRONG, beta=beta, max_L=table.max_L, tail_from=tail_from,
                         extra_sum=extra, ratio=mpmath.nstr(ratio, 12), total_exact=total_exact)
    logger.debug("positive-temperature bound at beta = %s: total <= %s", beta.label(), float(report.total_hi))
    return report


def v1_upper_bound(m0_lower, beta):
    """
    Upper bound on ``mu(sigma_w = 1)`` for a hexagonal vertex ``w``:
    ``(3/2)(1 - m0_lower) + x^2 / (1 + x + x^2)``, clamped at 1, with ``x = exp(-beta)`` rounded up.
    """

    m0_lower = Fraction(m0_lower)
    if m0_lower < 0 or m0_lower > 1:
        raise ValidationError("m0_lower must lie in [0, 1], got {}".format(m0_lower))
    beta = Beta.parse(beta)
    x = beta.boltzmann if beta.is_exact else beta.boltzmann_interval()[1]
    bound = Fraction(3, 2) * (1 - m0_lower) + x * x / (1 + x + x * x)
    return min(Fraction(1), bound)


def asymptotic_tail(L_start):
    """
    Non-rigorous tail estimate from the conjectured asymptotics ``q_L ~ (2 + sqrt 2)^(L/2) / (4 pi L)``:
    ``sum_{m >= L_start/2} y^m / (8 pi m)`` with ``y = (2 + sqrt 2)/4``.
    """

    M = _check_start(L_start) // 2
    with mpmath.workdps(30):
        y = (2 + mpmath.sqrt(2)) / 4
        return mpmath.nsum(lambda m: y ** m / (8 * mpmath.pi * m), [M, mpmath.inf])


def conjectural_bound(prefix, L_start):
    """
    The bound obtained by replacing the rigorous tail with :func:`asymptotic_tail`.  Flagged ``rigorous = False``.
    """

    prefix = Fraction(prefix)
    tail = asymptotic_tail(L_start)
    tail_hi = dyadic_ceil(_mpf_to_fraction(tail), 64)
    return BoundReport(prefix, None, prefix, prefix + tail_hi, form='conjectural', tail_from=L_start,
                       extra_sum=tail_hi, rigorous=False)


def large_beta_profile(table, betas, constant_c=100, alpha_squared=ALPHA_SQUARED, tail_from=None,
                       precision_bits=128):
    """
    ``total(beta) - total(inf)`` and the same difference scaled by ``exp(beta)``.  The largest scaled value is the
    fitted constant of the exponential approach to the zero-temperature bound.
    """

    reference = positive_temp_bound(table, Beta.infinite(), constant_c, alpha_squared, tail_from, precision_bits)
    rows = []
    for beta in betas:
        beta = Beta.parse(beta)
        if beta.is_infinite:
            continue
        report = positive_temp_bound(table, beta, constant_c, alpha_squared, tail_from, precision_bits)
        difference = report.total_hi - reference.total_hi
        with mpmath.workprec(precision_bits):
            scaled = mpmath.mpf(difference.numerator) / difference.denominator * mpmath.exp(beta.to_mpf())
        rows.append({'beta': beta.label(), 'difference': float(difference), 'scaled': float(scaled)})

    negative = [row['beta'] for row in rows if row['difference'] < 0]
    constant = max(row['scaled'] for row in rows) if rows else None
    return CheckReport('large_beta_profile', not negative, checked=len(rows), failures=negative,
                       details={'rows': rows, 'fitted_constant': constant})


def beta_monotonicity_check(table, betas, constant_c=100, alpha_squared=ALPHA_SQUARED, tail_from=None,
                            precision_bits=128):
    """``magnetization_lower`` is nondecreasing in ``beta`` along ``betas``."""
    parsed = sorted((Beta.parse(b) for b in betas), key=lambda b: b.to_mpf())
    values = [(b.label(), positive_temp_bound(table, b, constant_c, alpha_squared, tail_from,
                                              precision_bits).raw_magnetization_lower) for b in parsed]
    failures = [values[i + 1][0] for i in range(len(values) - 1) if values[i + 1][1] < values[i][1]]
    return CheckReport('beta_monotonicity', not failures, checked=len(values), failures=failures,
                       details={'magnetization_lower': [[label, float(v)] for label, v in values]})


def contour_weights_check(points=20, precision_bits=128):
    """
    Endpoint values ``(p, q) = (1, 1)`` at ``beta = 0`` and ``(1/2, 0)`` at ``beta = inf``, and monotone decrease of
    both weights on a grid of ``points`` inverse temperatures in ``[0, 10]``.
    """

    failures = []
    zero, infinite = contour_weights(0), contour_weights(Beta.infinite())
    if (zero.p, zero.q) != (1, 1):
        failures.append('beta=0')
    if (infinite.p, infinite.q) != (Fraction(1, 2), 0):
        failures.append('beta=inf')

    grid = [Fraction(10 * i, points - 1) for i in range(points)]
    previous = None
    for b in grid:
        w = contour_weights(b, precision_bits)
        if not (Fraction(1, 2) <= w.p_lo <= w.p_hi <= 1 and 0 <= w.q_lo <= w.q_hi <= 1):
            failures.append('range at beta={}'.format(float(b)))
        if previous is not None and (w.p_hi > previous.p_lo or w.q_hi > previous.q_lo):
            failures.append('monotonicity at beta={}'.format(float(b)))
        previous = w
    return CheckReport('contour_weights', not failures, checked=len(grid) + 2, failures=failures)
