"""Pure-Python enumeration and prefilter kernels.

Same contracts as the compiled module linscat._speedups; used as the
fallback when the extension is unavailable (or when LINSCAT_FORCE_PURE
is set).  Points are primitive integer tuples in canonical form: gcd 1,
first nonzero coordinate positive, emitted in lexicographic order.
"""

import math


def enum_p1(bound):
    """All canonical points of P^1(Q) with max|coordinate| <= bound."""
    out = [(0, 1)]
    for a in range(1, bound + 1):
        for b in range(-bound, bound + 1):
            if math.gcd(a, abs(b)) == 1:
                out.append((a, b))
    return out


def count_p1(bound):
    c = 1
    for a in range(1, bound + 1):
        for b in range(-bound, bound + 1):
            if math.gcd(a, abs(b)) == 1:
                c += 1
    return c


def enum_p2(bound):
    """All canonical points of P^2(Q) with max|coordinate| <= bound."""
    out = []
    for b in range(0, bound + 1):
        for c in range(-bound, bound + 1):
            if b == 0 and c <= 0:
                continue
            if math.gcd(b, abs(c)) == 1:
                out.append((0, b, c))
    for a in range(1, bound + 1):
        for b in range(-bound, bound + 1):
            g = math.gcd(a, abs(b))
            for c in range(-bound, bound + 1):
                if math.gcd(g, abs(c)) == 1:
                    out.append((a, b, c))
    return out


def count_p2(bound):
    c = 0
    for b in range(0, bound + 1):
        for cc in range(-bound, bound + 1):
            if b == 0 and cc <= 0:
                continue
            if math.gcd(b, abs(cc)) == 1:
                c += 1
    for a in range(1, bound + 1):
        for b in range(-bound, bound + 1):
            g = math.gcd(a, abs(b))
            for cc in range(-bound, bound + 1):
                if math.gcd(g, abs(cc)) == 1:
                    c += 1
    return c


def prefilter_p1(bound, coeffs, exponent, log_slack, margin=1e-6, tiny=1e-12):
    """Streaming float prefilter over canonical P^1 points.

    coeffs: per form a pair (c0, c1) of floats (one entry per (place, form)
    pair, archimedean places only).  A point survives when the product of
    |c0*a + c1*b| over all forms is at most max(|a|,|b|)^exponent times
    exp(log_slack + margin), or when some form value is numerically tiny
    (near the support or a true near-solution; the exact recheck decides).
    Returns candidate (a, b) pairs; callers re-evaluate them exactly.
    """
    thresholds = [0.0] * (bound + 1)
    for m in range(1, bound + 1):
        thresholds[m] = math.exp(exponent * math.log(m) + log_slack + margin)
    out = []
    scaled_tiny = tiny * bound

    def check(a, b):
        prod = 1.0
        for c0, c1 in coeffs:
            d = c0 * a + c1 * b
            if -scaled_tiny < d < scaled_tiny:
                return True
            prod *= d if d > 0 else -d
        m = a if a > b else b
        mb = -b
        if mb > m:
            m = mb
        return prod <= thresholds[m]

    if check(0, 1):
        out.append((0, 1))
    for a in range(1, bound + 1):
        for b in range(-bound, bound + 1):
            if math.gcd(a, abs(b)) == 1 and check(a, b):
                out.append((a, b))
    return out


def prefilter_p2(bound, coeffs, exponent, log_slack, margin=1e-6, tiny=1e-12):
    """P^2 analogue of prefilter_p1; coeffs are float triples."""
    thresholds = [0.0] * (bound + 1)
    for m in range(1, bound + 1):
        thresholds[m] = math.exp(exponent * math.log(m) + log_slack + margin)
    scaled_tiny = tiny * bound
    out = []

    def check(a, b, c):
        prod = 1.0
        for c0, c1, c2 in coeffs:
            d = c0 * a + c1 * b + c2 * c
            if -scaled_tiny < d < scaled_tiny:
                return True
            prod *= d if d > 0 else -d
        m = max(a, b, -b, c, -c)
        return prod <= thresholds[m]

    for pt in enum_p2(bound):
        if check(*pt):
            out.append(pt)
    return out
