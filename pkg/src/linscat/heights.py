"""Projective heights on P^n(Q) and local Weil functions for hyperplanes.

Points carry primitive integer coordinates with a canonical sign, so the
multiplicative height is exactly max|x_i| and all finite-place terms of the
height are zero.  Linear forms may have coefficients in a number field; the
local Weil function lambda(x, v) = max_j log|x_j / l(x)|_{v,K} uses the
extension absolute value at a chosen place w above v.
"""

import math
from fractions import Fraction

import mpmath

from .errors import BadParameter, OnSupport
from .fieldarith import FieldElement, RATIONALS
from .places import INF, arch_abs, log_abs, nonarch_exponent, ord_p_fraction, places_above


class ProjectivePoint:
    """Point of P^n(Q): primitive integer coordinates, canonical sign."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = [Fraction(c) for c in coords]
        if not coords or not any(coords):
            raise BadParameter("projective point needs a nonzero coordinate")
        den = 1
        for c in coords:
            den = math.lcm(den, c.denominator)
        ints = [int(c * den) for c in coords]
        g = math.gcd(*ints)
        ints = [c // g for c in ints]
        lead = next(c for c in ints if c)
        if lead < 0:
            ints = [-c for c in ints]
        self.coords = tuple(ints)

    @property
    def n(self):
        return len(self.coords) - 1

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __lt__(self, other):
        return self.coords < other.coords

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        return "[" + ":".join(str(c) for c in self.coords) + "]"


def mult_height(x):
    """H(x) = prod over places of max|x_i|_v; exactly max|x_i| here."""
    return Fraction(max(abs(c) for c in x.coords))


def log_height(x, precision=17):
    h = max(abs(c) for c in x.coords)
    if precision <= 17:
        return math.log(h)
    with mpmath.workdps(precision + 5):
        return mpmath.log(h)


class LinearForm:
    """Linear form sum_j a_j x_j with coefficients in a number field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        elems = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.field != field:
                    raise BadParameter("coefficient from a different field")
                elems.append(c)
            else:
                elems.append(field.from_rational(c))
        if not any(elems):
            raise BadParameter("linear form needs a nonzero coefficient")
        self.field = field
        self.coeffs = tuple(elems)

    @property
    def n_vars(self):
        return len(self.coeffs)

    @property
    def is_rational(self):
        return all(c.is_rational_value for c in self.coeffs)

    def evaluate(self, x):
        """Value at a projective point, as a field element."""
        if len(x.coords) != len(self.coeffs):
            raise BadParameter(
                "form in %d variables applied to a point of P^%d"
                % (len(self.coeffs), x.n)
            )
        out = self.field.zero()
        for a, xi in zip(self.coeffs, x.coords):
            if xi:
                out = out + a * xi
        return out

    def __repr__(self):
        return "LinearForm(%r)" % (list(self.coeffs),)


class HyperplanePresentation:
    """The standard presentation of the hyperplane l(x) = 0: the form itself
    together with the coordinate sections x_0..x_n and the trivial twist."""

    __slots__ = ("form",)

    def __init__(self, form):
        self.form = form

    @property
    def field(self):
        return self.form.field


def _resolve_place(field, v, w_index, precision):
    padic = max(40, precision)
    ws = places_above(field, v, padic if v not in (INF, "oo", None) else max(30, precision))
    for w in ws:
        if w.w_index == w_index:
            return w
    raise BadParameter("no place with index %d above %r" % (w_index, v))


def weil_hyperplane(pres, x, v, w_index=0, precision=17, place=None):
    """max_j log|x_j / l(x)|_{v,K} at the place w of index w_index above v.

    Coordinates are rational, so |x_j|_{v,K} = |x_j|_v; for primitive
    integer coordinates the finite-place max is 1.
    """
    form = pres.form if isinstance(pres, HyperplanePresentation) else pres
    field = form.field
    val = form.evaluate(x)
    if not val:
        raise OnSupport("point %r lies on the hyperplane %r" % (x, form))
    if place is None:
        place = _resolve_place(field, v, w_index, precision)
    if place.kind == "nonarch":
        p = place.prime
        if val.is_rational_value:
            t = Fraction(ord_p_fraction(val.rational_value(), p))
        else:
            t = nonarch_exponent(field, place, val)
        # max_j |x_j|_p = 1 for primitive coordinates
        if t == 0:
            return 0.0
        if precision <= 17:
            return float(t) * math.log(p)
        with mpmath.workdps(precision + 5):
            return mpmath.mpf(t.numerator) / t.denominator * mpmath.log(p)
    mx = max(abs(c) for c in x.coords)
    mag = arch_abs(field, place, val, precision)
    if precision <= 17:
        return math.log(mx) - math.log(mag)
    with mpmath.workdps(precision + 5):
        return mpmath.log(mx) - mpmath.log(mag)


def proximity(pres, x, S, w_choices=None, precision=17):
    """Sum of the local Weil function over the places in S.

    S lists places of Q ("inf" or primes); w_choices optionally gives the
    index of the place of the coefficient field used above each v.
    """
    total = 0.0
    for k, v in enumerate(S):
        w_index = 0
        if w_choices is not None:
            w_index = w_choices[k] if not isinstance(w_choices, dict) else w_choices.get(v, 0)
        term = weil_hyperplane(pres, x, v, w_index=w_index, precision=precision)
        total = total + term
    return total


def height_weil_defect(x, precision=17):
    """Residual of the height identity h(x) = sum_v lambda_{x_0}(x, v).

    Uses the x_0-coordinate presentation; requires x_0 != 0.  The finite
    sum runs over primes dividing a coordinate (all other terms vanish).
    """
    if x.coords[0] == 0:
        raise OnSupport("identity needs x_0 != 0")
    import sympy

    pres = HyperplanePresentation(LinearForm(RATIONALS, [1] + [0] * x.n))
    total = weil_hyperplane(pres, x, INF, precision=precision)
    primes = set()
    for c in x.coords:
        if c and abs(c) > 1:
            primes |= set(sympy.factorint(abs(c)))
    for p in sorted(primes):
        total = total + weil_hyperplane(pres, x, p, precision=precision)
    return abs(total - log_height(x, precision))
