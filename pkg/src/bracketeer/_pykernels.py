"""Pure-Python numeric kernels.

Mirror of ``_ckernels.pyx``; selected by :mod:`bracketeer.kernels` when the
compiled module is unavailable. Keep the two in lockstep.
"""

import math

import numpy as np

# Lanczos approximation, g = 7, n = 9.
LANCZOS_G = 7.0
LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
SQRT_2PI = 2.5066282746310002

# J_nu: power series below BESSEL_SERIES_MAX_X, backward recurrence up to
# BESSEL_ASYMPTOTIC_X + nu^2/2, Hankel asymptotic beyond.
BESSEL_SERIES_MAX_X = 2.0
BESSEL_ASYMPTOTIC_X = 25.0
BESSEL_NEGATIVE_SERIES_X = 13.0

FACTORIALS = tuple(float(math.factorial(n)) for n in range(171))

KIND_EXP = 1
KIND_SIN = 2
KIND_COS = 3
KIND_BESSELJ = 4
KIND_MULTI = 5


def sinpi(x):
    """sin(pi*x) with exact argument reduction."""
    n = math.floor(x + 0.5)
    r = x - n
    s = math.sin(math.pi * r)
    return -s if int(n) & 1 else s


def _lanczos(x):
    # valid for x >= 0.5
    x -= 1.0
    a = LANCZOS_COEF[0]
    t = x + LANCZOS_G + 0.5
    for i in range(1, 9):
        a += LANCZOS_COEF[i] / (x + i)
    return SQRT_2PI * t ** (x + 0.5) * math.exp(-t) * a


def gamma_real(x):
    """Gamma function; NaN at the poles 0, -1, -2, ..."""
    if x <= 0.0 and x == math.floor(x):
        return math.nan
    if x < 0.5:
        return math.pi / (sinpi(x) * gamma_real(1.0 - x))
    if x <= 171.0 and x == math.floor(x):
        return FACTORIALS[int(x) - 1]
    if x > 171.7:
        return math.inf
    if x > 140.0:
        # t ** (x + 0.5) overflows before the product does
        half = _lanczos_split(x)
        return half
    return _lanczos(x)


def _lanczos_split(x):
    x -= 1.0
    a = LANCZOS_COEF[0]
    t = x + LANCZOS_G + 0.5
    for i in range(1, 9):
        a += LANCZOS_COEF[i] / (x + i)
    p = t ** ((x + 0.5) / 2.0)
    return SQRT_2PI * p * (p * math.exp(-t)) * a


def _bessel_series(nu, x):
    h = 0.5 * x
    q = -h * h
    term = h ** nu / gamma_real(nu + 1.0) if nu != 0.0 else 1.0
    total = term
    m = 0
    while True:
        m += 1
        term *= q / (m * (m + nu))
        total += term
        if abs(term) <= 1e-17 * abs(total) and m > h:
            break
        if m > 500:
            break
    return total


def _bessel_miller(nu, x):
    """Backward recurrence normalized by (x/2)^nu = sum (nu+2k) Gamma(nu+k)/k! J_{nu+2k}.

    The weights g_k = Gamma(nu+k)/k! are carried with an arbitrary scale
    (g, f and the running sum are rescaled to stay in range); the scale is
    fixed at the end from g_1 = Gamma(nu+1).
    """
    top = 2 * int((x + 30.0 + 12.0 * x ** (1.0 / 3.0)) / 2.0)
    g = 1.0
    f_next = 0.0
    f = 1e-300
    norm = 0.0
    j = top
    while j > 0:
        if j % 2 == 0:
            norm += (nu + j) * g * f
            k = j // 2
            if k > 1:
                g *= k / (nu + k - 1.0)
                if g > 1e50 or g < 1e-50:
                    norm /= g
                    g = 1.0
        f_next, f = f, 2.0 * (nu + j) / x * f - f_next
        j -= 1
        if abs(f) > 1e50:
            f *= 1e-50
            f_next *= 1e-50
            norm *= 1e-50
    # the k = 0 weight Gamma(nu + 1) equals g_1
    norm += g * f
    r = f / norm
    if r == 0.0:
        return 0.0
    log_scale = math.log(g) - math.lgamma(nu + 1.0)
    return math.copysign(math.exp(math.log(abs(r)) + log_scale + nu * math.log(0.5 * x)), r)


def _bessel_asymptotic(nu, x):
    mu = 4.0 * nu * nu
    p = 1.0
    q = 0.0
    term = 1.0
    k = 0
    prev = math.inf
    while k < 200:
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = abs(term)
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
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_j(nu, x):
    """J_nu(x) for real order and x >= 0."""
    if x < 0.0:
        return math.nan
    if nu < 0.0 and nu == math.floor(nu):
        n = -nu
        s = bessel_j(n, x)
        return -s if int(n) & 1 else s
    if x == 0.0:
        if nu == 0.0:
            return 1.0
        return 0.0 if nu > 0.0 else math.inf
    if nu < 0.0:
        if x <= BESSEL_NEGATIVE_SERIES_X - nu:
            return _bessel_series(nu, x)
        return _bessel_asymptotic(nu, x)
    if x <= BESSEL_SERIES_MAX_X:
        return _bessel_series(nu, x)
    if x < BESSEL_ASYMPTOTIC_X + 0.5 * nu * nu:
        return _bessel_miller(nu, x)
    return _bessel_asymptotic(nu, x)


def _exp(t):
    # C semantics: overflow gives inf instead of raising
    return math.exp(t) if t < 709.0 else math.inf


def _atom_product(prog, terms, x, logx, log_part):
    """Product of the atoms at one node.

    Exponential-type atoms are accumulated in ``log_part`` and exponentiated
    once, so large and small factors cancel before anything overflows.
    """
    value = 1.0
    for row in prog:
        kind = int(row[0])
        c = row[1]
        if kind == KIND_EXP:
            log_part -= c * _exp(row[2] * logx)
        elif kind == KIND_SIN:
            value *= math.sin(c * x)
        elif kind == KIND_COS:
            value *= math.cos(c * x)
        elif kind == KIND_BESSELJ:
            value *= bessel_j(row[3], c * x)
        elif kind == KIND_MULTI:
            start = int(row[4])
            count = int(row[5])
            best = -math.inf
            for j in range(start, start + count):
                lt = terms[j][0] + terms[j][1] * logx
                if lt > best:
                    best = lt
            acc = 0.0
            for j in range(start, start + count):
                acc += math.exp(terms[j][0] + terms[j][1] * logx - best)
            log_part += row[3] * (best + math.log(acc))
    if value == 0.0:
        return 0.0
    return value * _exp(log_part)


def eval_points(prog, terms, xs, logxs, power, logw=None):
    """Integrand ``x**power * exp(logw) * prod(atoms)`` at every node.

    ``prog`` rows are ``[kind, coeff, xpower, order_or_exponent, start, count]``;
    ``terms`` rows are ``[log(coeff), xpower]`` for multinomial atoms.
    ``logw`` is an optional per-node log weight (quadrature Jacobians).
    """
    prog = np.asarray(prog, dtype=float).reshape(-1, 6).tolist()
    terms = np.asarray(terms, dtype=float).reshape(-1, 2).tolist()
    out = np.empty(len(xs))
    for i in range(len(xs)):
        logx = float(logxs[i])
        base = 0.0 if power == 0.0 else power * logx
        if logw is not None:
            base += float(logw[i])
        out[i] = _atom_product(prog, terms, float(xs[i]), logx, base)
    return out
