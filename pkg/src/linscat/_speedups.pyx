# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration and prefilter kernels.

Contract-identical to linscat._pykernels; see that module for semantics.
"""

from libc.math cimport exp, log, fabs
from libc.stdlib cimport free, malloc


cdef inline long c_gcd(long a, long b) nogil:
    cdef long t
    while b:
        t = a % b
        a = b
        b = t
    return a if a >= 0 else -a


def enum_p1(long bound):
    cdef long a, b
    out = [(0, 1)]
    for a in range(1, bound + 1):
        for b in range(-bound, bound + 1):
            if c_gcd(a, b) == 1:
                out.append((a, b))
    return out


def count_p1(long bound):
    cdef long a, b, c = 1
    with nogil:
        for a in range(1, bound + 1):
            for b in range(-bound, bound + 1):
                if c_gcd(a, b) == 1:
                    c += 1
    return c


def enum_p2(long bound):
    cdef long a, b, c, g
    out = []
    for b in range(0, bound + 1):
        for c in range(-bound, bound + 1):
            if b == 0 and c <= 0:
                continue
            if c_gcd(b, c) == 1:
                out.append((0, b, c))
    for a in range(1, bound + 1):
        for b in range(-bound, bound + 1):
            g = c_gcd(a, b)
            for c in range(-bound, bound + 1):
                if c_gcd(g, c) == 1:
                    out.append((a, b, c))
    return out


def count_p2(long bound):
    cdef long a, b, c, g, total = 0
    with nogil:
        for b in range(0, bound + 1):
            for c in range(-bound, bound + 1):
                if b == 0 and c <= 0:
                    continue
                if c_gcd(b, c) == 1:
                    total += 1
        for a in range(1, bound + 1):
            for b in range(-bound, bound + 1):
                g = c_gcd(a, b)
                for c in range(-bound, bound + 1):
                    if c_gcd(g, c) == 1:
                        total += 1
    return total


def prefilter_p1(long bound, coeffs, double exponent, double log_slack,
                 double margin=1e-6, double tiny=1e-12):
    cdef long a, b, m, k
    cdef int nf = len(coeffs)
    cdef double d, prod, scaled_tiny = tiny * bound
    cdef int hit
    cdef double *c0 = <double *>malloc(nf * sizeof(double))
    cdef double *c1 = <double *>malloc(nf * sizeof(double))
    cdef double *thr = <double *>malloc((bound + 1) * sizeof(double))
    if c0 == NULL or c1 == NULL or thr == NULL:
        raise MemoryError()
    out = []
    try:
        for k in range(nf):
            c0[k] = coeffs[k][0]
            c1[k] = coeffs[k][1]
        thr[0] = 0.0
        for m in range(1, bound + 1):
            thr[m] = exp(exponent * log(<double>m) + log_slack + margin)
        # [0:1]
        prod = 1.0
        hit = 0
        for k in range(nf):
            d = c1[k]
            if fabs(d) < scaled_tiny:
                hit = 1
                break
            prod *= fabs(d)
        if hit or prod <= thr[1]:
            out.append((0, 1))
        for a in range(1, bound + 1):
            for b in range(-bound, bound + 1):
                if c_gcd(a, b) != 1:
                    continue
                prod = 1.0
                hit = 0
                for k in range(nf):
                    d = c0[k] * a + c1[k] * b
                    if fabs(d) < scaled_tiny:
                        hit = 1
                        break
                    prod *= fabs(d)
                if not hit:
                    m = a
                    if b > m:
                        m = b
                    if -b > m:
                        m = -b
                    if prod > thr[m]:
                        continue
                out.append((a, b))
    finally:
        free(c0)
        free(c1)
        free(thr)
    return out


def prefilter_p2(long bound, coeffs, double exponent, double log_slack,
                 double margin=1e-6, double tiny=1e-12):
    cdef long a, b, c, g, m, k
    cdef int nf = len(coeffs)
    cdef double d, prod, scaled_tiny = tiny * bound
    cdef int hit
    cdef double *c0 = <double *>malloc(nf * sizeof(double))
    cdef double *c1 = <double *>malloc(nf * sizeof(double))
    cdef double *c2 = <double *>malloc(nf * sizeof(double))
    cdef double *thr = <double *>malloc((bound + 1) * sizeof(double))
    if c0 == NULL or c1 == NULL or c2 == NULL or thr == NULL:
        raise MemoryError()
    out = []
    try:
        for k in range(nf):
            c0[k] = coeffs[k][0]
            c1[k] = coeffs[k][1]
            c2[k] = coeffs[k][2]
        thr[0] = 0.0
        for m in range(1, bound + 1):
            thr[m] = exp(exponent * log(<double>m) + log_slack + margin)
        for b in range(0, bound + 1):
            for c in range(-bound, bound + 1):
                if b == 0 and c <= 0:
                    continue
                if c_gcd(b, c) != 1:
                    continue
                prod = 1.0
                hit = 0
                for k in range(nf):
                    d = c1[k] * b + c2[k] * c
                    if fabs(d) < scaled_tiny:
                        hit = 1
                        break
                    prod *= fabs(d)
                if not hit:
                    m = b
                    if c > m:
                        m = c
                    if -c > m:
                        m = -c
                    if prod > thr[m]:
                        continue
                out.append((0, b, c))
        for a in range(1, bound + 1):
            for b in range(-bound, bound + 1):
                g = c_gcd(a, b)
                for c in range(-bound, bound + 1):
                    if c_gcd(g, c) != 1:
                        continue
                    prod = 1.0
                    hit = 0
                    for k in range(nf):
                        d = c0[k] * a + c1[k] * b + c2[k] * c
                        if fabs(d) < scaled_tiny:
                            hit = 1
                            break
                        prod *= fabs(d)
                    if not hit:
                        m = a
                        if b > m:
                            m = b
                        if -b > m:
                            m = -b
                        if c > m:
                            m = c
                        if -c > m:
                            m = -c
                        if prod > thr[m]:
                            continue
                    out.append((a, b, c))
    finally:
        free(c0)
        free(c1)
        free(c2)
        free(thr)
    return out
