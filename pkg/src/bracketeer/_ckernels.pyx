# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels. Same contract as ``_pykernels``."""

import numpy as np

from libc.math cimport sin, cos, exp, log, sqrt, floor, fabs, pow, lgamma, cbrt, copysign, NAN, INFINITY, M_PI

from ._pykernels import FACTORIALS

cdef double LANCZOS_G = 7.0
cdef double[9] LANCZOS_COEF
LANCZOS_COEF[:] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]
cdef double SQRT_2PI = 2.5066282746310002
cdef double BESSEL_SERIES_MAX_X = 2.0
cdef double BESSEL_ASYMPTOTIC_X = 25.0
cdef double BESSEL_NEGATIVE_SERIES_X = 13.0

cdef double[171] FACT
FACT[:] = FACTORIALS

cdef enum:
    KIND_EXP = 1
    KIND_SIN = 2
    KIND_COS = 3
    KIND_BESSELJ = 4
    KIND_MULTI = 5


cdef inline double c_sinpi(double x) nogil:
    cdef double n = floor(x + 0.5)
    cdef double s = sin(M_PI * (x - n))
    if <long long>n & 1:
        return -s
    return s


cdef double c_lanczos(double x, bint split) nogil:
    cdef double a, t, p
    cdef int i
    x -= 1.0
    a = LANCZOS_COEF[0]
    t = x + LANCZOS_G + 0.5
    for i in range(1, 9):
        a += LANCZOS_COEF[i] / (x + i)
    if split:
        p = pow(t, (x + 0.5) / 2.0)
        return SQRT_2PI * p * (p * exp(-t)) * a
    return SQRT_2PI * pow(t, x + 0.5) * exp(-t) * a


cdef double c_gamma(double x) nogil:
    if x <= 0.0 and x == floor(x):
        return NAN
    if x < 0.5:
        return M_PI / (c_sinpi(x) * c_gamma(1.0 - x))
    if x <= 171.0 and x == floor(x):
        return FACT[<int>x - 1]
    if x > 171.7:
        return INFINITY
    if x > 140.0:
        return c_lanczos(x, True)
    return c_lanczos(x, False)


cdef double c_bessel_series(double nu, double x) nogil:
    cdef double h = 0.5 * x
    cdef double q = -h * h
    cdef double term, total
    cdef int m = 0
    if nu != 0.0:
        term = pow(h, nu) / c_gamma(nu + 1.0)
    else:
        term = 1.0
    total = term
    while True:
        m += 1
        term *= q / (m * (m + nu))
        total += term
        if fabs(term) <= 1e-17 * fabs(total) and m > h:
            break
        if m > 500:
            break
    return total


cdef double c_bessel_miller(double nu, double x) nogil:
    cdef long top = 2 * <long>((x + 30.0 + 12.0 * cbrt(x)) / 2.0)
    cdef double g = 1.0, f_next = 0.0, f = 1e-300, norm = 0.0, f_prev, r
    cdef long j = top, k
    while j > 0:
        if j % 2 == 0:
            norm += (nu + j) * g * f
            k = j // 2
            if k > 1:
                g *= k / (nu + k - 1.0)
                if g > 1e50 or g < 1e-50:
                    norm /= g
                    g = 1.0
        f_prev = 2.0 * (nu + j) / x * f - f_next
        f_next = f
        f = f_prev
        j -= 1
        if fabs(f) > 1e50:
            f *= 1e-50
            f_next *= 1e-50
            norm *= 1e-50
    norm += g * f
    r = f / norm
    if r == 0.0:
        return 0.0
    return copysign(exp(log(fabs(r)) + log(g) - lgamma(nu + 1.0) + nu * log(0.5 * x)), r)


cdef double c_bessel_asymptotic(double nu, double x) nogil:
    cdef double mu = 4.0 * nu * nu
    cdef double p = 1.0, q = 0.0, term = 1.0, mag, chi
    cdef double prev = INFINITY
    cdef int k = 0
    while k < 200:
        k += 1
        term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x)
        mag = fabs(term)
        if mag > prev:
            break
        prev = mag
        if k % 4 == 1:
            q += term
        elif k % 4 == 2:
            p -= term
        elif k % 4 == 3:
            q -= term
        else:
            p += term
        if mag < 1e-17:
            break
    chi = x - (0.5 * nu + 0.25) * M_PI
    return sqrt(2.0 / (M_PI * x)) * (p * cos(chi) - q * sin(chi))


cdef double c_bessel_j(double nu, double x) nogil:
    cdef double n, s
    if x < 0.0:
        return NAN
    if nu < 0.0 and nu == floor(nu):
        n = -nu
        s = c_bessel_j(n, x)
        if <long long>n & 1:
            return -s
        return s
    if x == 0.0:
        if nu == 0.0:
            return 1.0
        if nu > 0.0:
            return 0.0
        return INFINITY
    if nu < 0.0:
        if x <= BESSEL_NEGATIVE_SERIES_X - nu:
            return c_bessel_series(nu, x)
        return c_bessel_asymptotic(nu, x)
    if x <= BESSEL_SERIES_MAX_X:
        return c_bessel_series(nu, x)
    if x < BESSEL_ASYMPTOTIC_X + 0.5 * nu * nu:
        return c_bessel_miller(nu, x)
    return c_bessel_asymptotic(nu, x)


cdef double c_atom_product(const double[:, :] prog, const double[:, :] terms,
                           double x, double logx, double log_part) nogil:
    cdef double value = 1.0, c, best, lt, acc
    cdef Py_ssize_t r, j, start, count
    cdef int kind
    for r in range(prog.shape[0]):
        kind = <int>prog[r, 0]
        c = prog[r, 1]
        if kind == KIND_EXP:
            log_part -= c * exp(prog[r, 2] * logx)
        elif kind == KIND_SIN:
            value *= sin(c * x)
        elif kind == KIND_COS:
            value *= cos(c * x)
        elif kind == KIND_BESSELJ:
            value *= c_bessel_j(prog[r, 3], c * x)
        elif kind == KIND_MULTI:
            start = <Py_ssize_t>prog[r, 4]
            count = <Py_ssize_t>prog[r, 5]
            best = -INFINITY
            for j in range(start, start + count):
                lt = terms[j, 0] + terms[j, 1] * logx
                if lt > best:
                    best = lt
            acc = 0.0
            for j in range(start, start + count):
                acc += exp(terms[j, 0] + terms[j, 1] * logx - best)
            log_part += prog[r, 3] * (best + log(acc))
    if value == 0.0:
        return 0.0
    return value * exp(log_part)


def sinpi(double x):
    return c_sinpi(x)


def gamma_real(double x):
    """Gamma function; NaN at the poles 0, -1, -2, ..."""
    return c_gamma(x)


def bessel_j(double nu, double x):
    """J_nu(x) for real order and x >= 0."""
    return c_bessel_j(nu, x)


def eval_points(prog, terms, xs, logxs, double power, logw=None):
    """Integrand ``x**power * exp(logw) * prod(atoms)`` at every node."""
    cdef const double[:, :] p = np.ascontiguousarray(prog, dtype=np.float64).reshape(-1, 6)
    cdef const double[:, :] t = np.ascontiguousarray(terms, dtype=np.float64).reshape(-1, 2)
    cdef const double[:] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef const double[:] lv = np.ascontiguousarray(logxs, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    cdef const double[:] wv
    cdef bint has_w = logw is not None
    if has_w:
        wv = np.ascontiguousarray(logw, dtype=np.float64)
    else:
        wv = np.zeros(1, dtype=np.float64)
    out = np.empty(n, dtype=np.float64)
    cdef double[:] ov = out
    cdef double base
    with nogil:
        for i in range(n):
            base = 0.0 if power == 0.0 else power * lv[i]
            if has_w:
                base += wv[i]
            ov[i] = c_atom_product(p, t, xv[i], lv[i], base)
    return out
