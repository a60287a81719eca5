"""Places of Q and of a number field F, and the normalized absolute values.

Two normalizations are exposed and every caller must name one:

* ``extension`` -- |a|_{v,K} = |N_{F_w/Q_v}(a)|_v^(1/[F_w:Q_v]), the value
  extending |.|_v from Q to F;
* ``field``     -- |a|_w with exponent [F_w:Q_p]/[F:Q], the normalization
  for which the product over all places of F is 1.

Non-archimedean values are exact rational powers of p.  Archimedean values
come from real embeddings isolated by Sturm sequences (certified rational
enclosures) or from complex conjugate root pairs.
"""

import math
from fractions import Fraction

import mpmath
import sympy
from sympy.polys.domains import ZZ
from sympy.polys.factortools import dup_zz_hensel_lift
from sympy.polys.galoistools import gf_factor

from .errors import BadParameter, PrecisionExhausted, UnsupportedRamification
from .fieldarith import FieldElement, charpoly_norm

INF = "inf"

_LIFT_CAP = 256  # residue cap in the p-adic lifting BFS


# ---------------------------------------------------------------------------
# small integer / rational helpers

def ord_p_int(n, p):
    if n == 0:
        raise ValueError("ord_p of zero")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def ord_p_fraction(q, p):
    q = Fraction(q)
    if q == 0:
        raise ValueError("ord_p of zero")
    k = 0
    num, den = q.numerator, q.denominator
    if num % p == 0:
        return ord_p_int(num, p)
    if den % p == 0:
        return -ord_p_int(den, p)
    return k


def squarefree_part(n):
    """Signed squarefree part of a nonzero integer."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    for q, e in sympy.factorint(n).items():
        if e % 2:
            out *= q
    return sign * out


def _poly_eval_int(coeffs, x, mod=None):
    """Evaluate an ascending integer-coefficient poly, optionally mod m."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
        if mod is not None:
            acc %= mod
    return acc


# ---------------------------------------------------------------------------
# Sturm sequences and real root isolation (exact rational arithmetic)

def _frac_poly(coeffs):
    return [Fraction(c) for c in coeffs]


def _poly_eval_frac(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deriv(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _poly_rem(a, b):
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db:
            break
        c = a[-1] / b[-1]
        shift = len(a) - 1 - db
        for j in range(db + 1):
            a[shift + j] -= c * b[j]
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def sturm_chain(coeffs):
    """Sturm chain of a squarefree rational polynomial (ascending coeffs)."""
    chain = [_frac_poly(coeffs)]
    d = _poly_deriv(chain[0])
    if d:
        chain.append(d)
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x):
    signs = []
    for poly in chain:
        v = _poly_eval_frac(poly, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    changes = 0
    for a, b in zip(signs, signs[1:]):
        if a != b:
            changes += 1
    return changes


def isolate_real_roots(coeffs):
    """Disjoint rational intervals (lo, hi], one per real root."""
    chain = sturm_chain(coeffs)
    bound = Fraction(1) + max(abs(Fraction(c)) for c in coeffs[:-1]) / abs(Fraction(coeffs[-1]))
    lo, hi = -bound, bound

    def count(a, b):
        return _sign_changes(chain, a) - _sign_changes(chain, b)

    out = []
    stack = [(lo, hi, count(lo, hi))]
    while stack:
        a, b, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        if _poly_eval_frac(_frac_poly(coeffs), mid) == 0:
            # nudge the split point off the root
            mid = mid + (b - a) / 4
        ka = count(a, mid)
        stack.append((a, mid, ka))
        stack.append((mid, b, k - ka))
    out.sort()
    return out


def refine_interval(coeffs, interval, digits):
    """Bisect an isolating interval until its width is below 10^-digits."""
    f = _frac_poly(coeffs)
    a, b = interval
    target = Fraction(1, 10 ** digits)
    fa = _poly_eval_frac(f, a)
    if fa == 0:
        return (a, a)
    while b - a > target:
        mid = (a + b) / 2
        fm = _poly_eval_frac(f, mid)
        if fm == 0:
            return (mid, mid)
        if (fa > 0) == (fm > 0):
            a, fa = mid, fm
        else:
            b = mid
    return (a, b)


# ---------------------------------------------------------------------------
# p-adic root lifting

def lift_padic_roots(coeffs, p, digits, expected=None):
    """All p-adic roots of an ascending integer poly, to the given precision.

    Returns (reps, certified) where reps represent the root clusters of the
    solution set mod p^digits and certified is the number of leading digits
    on which a representative agrees with its true root.  When the number
    of roots is known in advance pass it as expected; otherwise the cluster
    count is taken from the longest stable plateau over the precision range
    (solutions mod p^k can both merge at small k and split spuriously near
    k = digits).
    """
    mod = p
    residues = [r for r in range(p) if _poly_eval_int(coeffs, r, p) == 0]
    dcoeffs = [i * c for i, c in enumerate(coeffs)][1:]
    for k in range(1, digits):
        nxt_mod = mod * p
        nxt = []
        for r in residues:
            fpr = _poly_eval_int(dcoeffs, r, p)
            if fpr:
                # unit derivative: the next digit is forced (Hensel step)
                fr = _poly_eval_int(coeffs, r, nxt_mod)
                t = (-(fr // mod) * pow(fpr, -1, p)) % p
                cand = r + t * mod
                if _poly_eval_int(coeffs, cand, nxt_mod) == 0:
                    nxt.append(cand)
            else:
                for t in range(p):
                    cand = r + t * mod
                    if _poly_eval_int(coeffs, cand, nxt_mod) == 0:
                        nxt.append(cand)
            if len(nxt) > _LIFT_CAP:
                raise PrecisionExhausted(
                    "p-adic root lifting blow-up at p=%d level %d" % (p, k)
                )
        residues = nxt
        mod = nxt_mod
        if not residues:
            return [], digits
    if not residues:
        return [], digits
    classes = {k: sorted({r % p ** k for r in residues}) for k in range(1, digits + 1)}
    if expected is not None:
        certified = max((k for k in classes if len(classes[k]) == expected), default=None)
        if certified is None:
            raise PrecisionExhausted(
                "no precision level shows %d roots at p=%d (digits=%d)"
                % (expected, p, digits)
            )
    else:
        runs = []  # (length, max_k, count) per constant-count run
        k = digits
        while k >= 1:
            j = k
            while j > 1 and len(classes[j - 1]) == len(classes[k]):
                j -= 1
            runs.append((k - j + 1, k, len(classes[k])))
            k = j - 1
        runs.sort(key=lambda t: (t[0], t[1]))
        certified = runs[-1][1]
    reps = [min(r for r in residues if r % p ** certified == rep)
            for rep in classes[certified]]
    return reps, certified


# ---------------------------------------------------------------------------
# places

class Place:
    """A place of a number field above a place of Q.

    Non-archimedean places carry an approximate local factor of the minimal
    polynomial over Q_p (exact enough for valuations up to the certified
    precision).  Archimedean places carry a certified real enclosure or a
    complex approximation of the corresponding root.
    """

    def __init__(self, field, kind, *, prime=None, w_index=0, embedding_index=None,
                 e=1, f=1, local_degree=1, precision=0, local_factor=None,
                 root=None, certified=0, real_interval=None, is_real=True):
        self.field = field
        self.kind = kind  # "arch" | "nonarch"
        self.prime = prime
        self.w_index = w_index
        self.embedding_index = embedding_index
        self.e = e
        self.f = f
        self.local_degree = local_degree
        self.precision = precision
        self.local_factor = local_factor
        self.root = root
        self.certified = certified
        self.is_real = is_real
        self._real_interval = real_interval
        self._approx = {}

    @property
    def is_arch(self):
        return self.kind == "arch"

    def real_enclosure(self, digits):
        """Certified rational enclosure of the real embedding of theta."""
        if not (self.is_arch and self.is_real):
            raise BadParameter("real enclosure only for real archimedean places")
        if self.field.degree == 1:
            return (Fraction(0), Fraction(0))
        key = ("encl", digits)
        if key not in self._approx:
            self._approx[key] = refine_interval(
                list(self.field.min_poly), self._real_interval, digits
            )
        return self._approx[key]

    def embedding_value(self, dps=17):
        """Approximate image of theta under this archimedean embedding."""
        if not self.is_arch:
            raise BadParameter("embedding of a non-archimedean place")
        if self.field.degree == 1:
            return mpmath.mpf(0) if dps > 17 else 0.0
        key = ("emb", dps)
        if key in self._approx:
            return self._approx[key]
        if self.is_real:
            lo, hi = self.real_enclosure(dps + 5)
            if dps <= 17:
                val = float((lo + hi) / 2)
            else:
                with mpmath.workdps(dps + 5):
                    val = (mpmath.mpf(lo.numerator) / lo.denominator
                           + mpmath.mpf(hi.numerator) / hi.denominator) / 2
        else:
            val = _complex_embedding(self.field, self.embedding_index, dps)
        self._approx[key] = val
        return val

    def serial(self):
        v = "inf" if self.is_arch else self.prime
        return {"v": v, "w_index": self.w_index, "e": self.e, "f": self.f}

    def __repr__(self):
        v = "inf" if self.is_arch else self.prime
        return "Place(v=%s, w=%d, e=%d, f=%d)" % (v, self.w_index, self.e, self.f)


def _complex_embedding(field, embedding_index, dps):
    """Complex root (imag > 0) for the given embedding index.

    Embedding indices enumerate real roots first (ascending), then complex
    conjugate pairs sorted by (real part, imaginary part).
    """
    n_real = len(isolate_real_roots(list(field.min_poly)))
    with mpmath.workdps(dps + 15):
        coeffs = [mpmath.mpf(c) for c in reversed(field.min_poly)]
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=80)
        upper = [r for r in roots if mpmath.im(r) > 1e-20]
        upper.sort(key=lambda z: (mpmath.re(z), mpmath.im(z)))
        k = embedding_index - n_real
        if k < 0 or k >= len(upper):
            raise BadParameter("bad embedding index %d" % embedding_index)
        return upper[k]


def _arch_places(field, precision):
    n = field.degree
    if n == 1:
        return [Place(field, "arch", w_index=0, embedding_index=0,
                      local_degree=1, precision=precision)]
    intervals = isolate_real_roots(list(field.min_poly))
    places = []
    for i, iv in enumerate(intervals):
        places.append(Place(field, "arch", w_index=i, embedding_index=i,
                            local_degree=1, precision=precision,
                            real_interval=iv, is_real=True))
    n_pairs = (n - len(intervals)) // 2
    for k in range(n_pairs):
        idx = len(intervals) + k
        places.append(Place(field, "arch", w_index=idx, embedding_index=idx,
                            local_degree=2, precision=precision, is_real=False))
    return places


def _quadratic_splitting(field, p):
    """'split' | 'inert' | 'ramified' via the fundamental discriminant."""
    d = squarefree_part(field.poly_disc)
    delta = d if d % 4 == 1 else 4 * d
    if p == 2:
        if delta % 2 == 0:
            return "ramified"
        return "split" if d % 8 == 1 else "inert"
    if delta % p == 0:
        return "ramified"
    ls = pow(delta % p, (p - 1) // 2, p)
    return "split" if ls == 1 else "inert"


def _nonarch_places(field, p, precision):
    n = field.degree
    if n == 1:
        return [Place(field, "nonarch", prime=p, w_index=0, e=1, f=1,
                      local_degree=1, precision=precision)]
    coeffs = list(field.min_poly)
    if n == 2:
        kind = _quadratic_splitting(field, p)
        if kind == "split":
            reps, certified = lift_padic_roots(coeffs, p, precision, expected=2)
            return [
                Place(field, "nonarch", prime=p, w_index=i, e=1, f=1,
                      local_degree=1, precision=precision,
                      local_factor=(-r, 1), root=r, certified=certified)
                for i, r in enumerate(sorted(reps))
            ]
        if kind == "inert":
            return [Place(field, "nonarch", prime=p, w_index=0, e=1, f=2,
                          local_degree=2, precision=precision,
                          local_factor=tuple(coeffs), certified=precision)]
        return [Place(field, "nonarch", prime=p, w_index=0, e=2, f=1,
                      local_degree=2, precision=precision,
                      local_factor=tuple(coeffs), certified=precision)]
    # degree > 2: only unramified primes (p not dividing the poly disc)
    if field.poly_disc % p == 0:
        raise UnsupportedRamification(
            "prime %d divides disc(min_poly); degree-%d fields are only "
            "supported away from the discriminant" % (p, n)
        )
    f_desc = [ZZ(c) for c in reversed(coeffs)]
    _, factors = gf_factor(f_desc, p, ZZ)
    factors = [g for g, _ in factors]
    if len(factors) == 1:
        lifted = [f_desc]
    else:
        lifted = dup_zz_hensel_lift(p, f_desc, factors, precision, ZZ)
    mod = p ** precision
    places = []
    lifted_asc = [tuple(int(c) % mod for c in reversed(g)) for g in lifted]
    lifted_asc.sort()
    for i, g in enumerate(lifted_asc):
        deg = len(g) - 1
        root = None
        if deg == 1:
            # monic x + c: root is -c mod p^precision
            root = (-g[0]) % mod
        places.append(Place(field, "nonarch", prime=p, w_index=i, e=1, f=deg,
                            local_degree=deg, precision=precision,
                            local_factor=g, root=root, certified=precision))
    return places


def places_above(field, v, precision=40):
    """All places of the field above v (a rational prime, or "inf").

    precision counts p-adic digits for finite v and decimal digits for the
    archimedean embeddings.  Results are cached on the field.
    """
    if v in (INF, "oo", None):
        v = INF
    else:
        v = int(v)
        if not sympy.isprime(v):
            raise BadParameter("v must be a prime or 'inf', got %r" % (v,))
    key = (v, precision)
    cache = field._places_cache
    if key not in cache:
        if v == INF:
            cache[key] = _arch_places(field, precision)
        else:
            cache[key] = _nonarch_places(field, v, precision)
    return cache[key]


def _refreshed(place, precision):
    """Same place at a higher non-archimedean precision."""
    fresh = places_above(place.field, place.prime, precision)
    for cand in fresh:
        if cand.w_index == place.w_index:
            return cand
    raise PrecisionExhausted("place disappeared on refinement")  # pragma: no cover


# ---------------------------------------------------------------------------
# absolute values

class LocalAbs:
    """A local absolute value: exact p-power exponent or archimedean float."""

    __slots__ = ("kind", "prime", "exponent", "value")

    def __init__(self, kind, prime, exponent, value):
        self.kind = kind
        self.prime = prime
        self.exponent = exponent  # |a| = p^(-exponent); None for arch
        self.value = value

    def __repr__(self):
        if self.kind == "nonarch":
            return "LocalAbs(%d^-%s)" % (self.prime, self.exponent)
        return "LocalAbs(%s)" % (self.value,)

    def __float__(self):
        return float(self.value)


def _integer_rep(a):
    """(integer ascending coeff list, denominator) with a = A0(theta)/den."""
    den = a.denominator_lcm()
    return [int(c * den) for c in a.coeffs], den


def nonarch_exponent(field, place, a, _depth=0):
    """Exact exponent t with |a|_{v,K} = p^(-t), extension normalization."""
    if isinstance(a, (int, Fraction)):
        a = field.from_rational(a)
    if not a:
        raise ValueError("absolute value exponent of zero")
    p = place.prime
    if a.is_rational_value:
        return Fraction(ord_p_fraction(a.rational_value(), p))
    coeffs, den = _integer_rep(a)
    shift = Fraction(ord_p_int(den, p)) if den % p == 0 else Fraction(0)
    d = place.local_degree
    if d == field.degree:
        # one place covering the whole completion: local norm = global norm
        elem = field.element([Fraction(c) for c in coeffs])
        _, nm, _ = charpoly_norm(elem)
        return Fraction(ord_p_fraction(nm, p), d) - shift
    if place.root is not None:
        mod = p ** place.precision
        val = _poly_eval_int(coeffs, place.root, mod)
        if val == 0 or (val % p == 0 and ord_p_int(val, p) >= place.certified):
            if _depth >= 4:
                raise PrecisionExhausted(
                    "valuation at p=%d undecided at precision %d" % (p, place.precision)
                )
            finer = _refreshed(place, 2 * place.precision)
            return nonarch_exponent(field, finer, a, _depth + 1)
        return Fraction(ord_p_int(val, p)) - shift
    # general local factor: p-order of the resultant with a's representative
    mod = p ** place.precision
    g = sympy.Poly(list(reversed(place.local_factor)), _RES_X)
    h = sympy.Poly(list(reversed(coeffs)), _RES_X)
    res = int(g.resultant(h))
    res %= mod
    if res == 0:
        if _depth >= 4:
            raise PrecisionExhausted(
                "resultant order undecided at p=%d precision %d" % (p, place.precision)
            )
        finer = _refreshed(place, 2 * place.precision)
        return nonarch_exponent(field, finer, a, _depth + 1)
    return Fraction(ord_p_int(res, p), d) - shift


_RES_X = sympy.Symbol("_linscat_res_x")


def _norm_scale(place, normalization):
    if normalization == "extension":
        return Fraction(1)
    if normalization == "field":
        return Fraction(place.local_degree, place.field.degree)
    raise BadParameter("unknown normalization %r" % (normalization,))


def arch_abs(field, place, a, precision=17):
    """|sigma(a)| for the chosen archimedean embedding (extension value)."""
    if isinstance(a, (int, Fraction)):
        a = field.from_rational(a)
    if not a:
        return mpmath.mpf(0) if precision > 17 else 0.0
    if a.is_rational_value or field.degree == 1:
        q = a.coeffs[0]
        if precision <= 17:
            return abs(q.numerator / q.denominator)
        with mpmath.workdps(precision + 5):
            return abs(mpmath.mpf(q.numerator) / q.denominator)
    theta = place.embedding_value(precision)
    if precision <= 17 and place.is_real:
        acc = 0.0
        for c in reversed(a.coeffs):
            acc = acc * theta + c.numerator / c.denominator
        return abs(acc)
    with mpmath.workdps(precision + 5):
        acc = mpmath.mpf(0)
        for c in reversed(a.coeffs):
            acc = acc * theta + mpmath.mpf(c.numerator) / c.denominator
        return abs(acc)


def abs_value(field, place, a, precision=40, normalization="extension"):
    """The named normalized absolute value of a at the given place."""
    scale = _norm_scale(place, normalization)
    if isinstance(a, (int, Fraction)):
        a = field.from_rational(a)
    if not a:
        return LocalAbs(place.kind, place.prime, None, 0.0)
    if place.kind == "nonarch":
        t = nonarch_exponent(field, place, a) * scale
        approx = float(place.prime) ** float(-t)
        return LocalAbs("nonarch", place.prime, t, approx)
    mag = arch_abs(field, place, a, precision)
    if scale != 1:
        if isinstance(mag, float):
            mag = mag ** float(scale)
        else:
            mag = mpmath.power(mag, mpmath.mpf(scale.numerator) / scale.denominator)
    return LocalAbs("arch", None, None, mag)


def log_abs(field, place, a, precision=17, normalization="extension"):
    """log of the normalized absolute value, as float (mpf above 17 digits)."""
    scale = _norm_scale(place, normalization)
    if isinstance(a, (int, Fraction)):
        a = field.from_rational(a)
    if not a:
        raise ValueError("log of zero absolute value")
    if place.kind == "nonarch":
        t = nonarch_exponent(field, place, a) * scale
        if t == 0:
            return 0.0
        if precision <= 17:
            return -float(t) * math.log(place.prime)
        with mpmath.workdps(precision + 5):
            return -mpmath.mpf(t.numerator) / t.denominator * mpmath.log(place.prime)
    mag = arch_abs(field, place, a, precision)
    if precision <= 17:
        return float(scale) * math.log(mag)
    with mpmath.workdps(precision + 5):
        return mpmath.mpf(scale.numerator) / scale.denominator * mpmath.log(mag)


# ---------------------------------------------------------------------------
# product formula

def _support_primes(field, a):
    coeffs, den = _integer_rep(a)
    primes = set(sympy.factorint(den))
    elem = field.element([Fraction(c) for c in coeffs])
    _, nm, _ = charpoly_norm(elem)
    nm = Fraction(nm)
    if nm.numerator != 0:
        primes |= set(sympy.factorint(abs(nm.numerator)))
    primes |= set(sympy.factorint(nm.denominator))
    return sorted(primes)


def product_formula_defect(field, a, precision=30):
    """|sum over all places of log|a|_w| with the field normalization.

    For rational input over Q this is an exact-zero check (returns 0.0).
    """
    if isinstance(a, (int, Fraction)):
        a = field.from_rational(a)
    if not a:
        raise ValueError("product formula needs a nonzero element")
    if field.degree == 1 or a.is_rational_value:
        q = Fraction(a.rational_value() if field.degree > 1 else a.coeffs[0])
        rebuilt = Fraction(1)
        for p in set(sympy.factorint(abs(q.numerator))) | set(sympy.factorint(q.denominator)):
            rebuilt *= Fraction(p) ** ord_p_fraction(q, p)
        return 0.0 if rebuilt == abs(q) else float("inf")
    with mpmath.workdps(precision + 10):
        total = mpmath.mpf(0)
        for p in _support_primes(field, a):
            for w in places_above(field, p, max(40, precision)):
                t = nonarch_exponent(field, w, a) * _norm_scale(w, "field")
                if t:
                    total += -mpmath.mpf(t.numerator) / t.denominator * mpmath.log(p)
        for w in places_above(field, INF, precision):
            total += log_abs(field, w, a, precision + 10, normalization="field")
        return float(abs(total))
