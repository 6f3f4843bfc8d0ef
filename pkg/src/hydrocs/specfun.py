"""Special functions over complex arguments, implemented in-repo.

Windows and switchover radii are module constants so tolerances can be audited.
"""

from __future__ import annotations

import cmath
import decimal
import math

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7
_LANCZOS = (
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

BESSEL_MAX_ABS = 50.0
# series is abandoned for Miller recurrence once cancellation exceeds this factor
BESSEL_CANCELLATION = 1e4
# series window; on the imaginary axis the Taylor series cancels like e^{|z|},
# which is absorbed by extended-precision summation up to this radius
HYP1F1_MAX_ABS = 60.0
# apparent cancellation beyond which the series is redone in decimal arithmetic
HYP1F1_CANCELLATION = 1e3
# beyond the series window the asymptotic expansion needs |Im z| at least this large
HYP1F1_ASYMPTOTIC_RADIUS = 17.0
SERIES_MAX_TERMS = 2000
EPS = 2.220446049250313e-16


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def gamma(z) -> complex:
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise ValueError(f"gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma(1 - z))
    z -= 1
    x = _LANCZOS[0]
    for i in range(1, _LANCZOS_G + 2):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def rgamma(z) -> complex:
    """1/Gamma(z), zero at the poles."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        return 0j
    return 1 / gamma(z)


def laguerre(n: int, alpha: float, x: float) -> float:
    """Associated Laguerre polynomial by the three-term recurrence."""
    if n < 0:
        raise ValueError("n must be non-negative")
    prev, cur = 1.0, 1.0 + alpha - x
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def laguerre_all(n_max: int, alpha: float, x):
    """L_0..L_nmax at x (scalar or numpy array)."""
    out = [x * 0 + 1.0]
    if n_max >= 1:
        out.append(1.0 + alpha - x)
    for k in range(1, n_max):
        out.append(((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1))
    return out


def _bessel_series_scaled(nu: float, z: complex):
    """sum_k (-z^2/4)^k / (k! Gamma(nu+k+1)); returns (value, cancellation factor)."""
    w = -(z * z) / 4
    term = rgamma(nu + 1)
    total, biggest = term, abs(term)
    k = 0
    while k < SERIES_MAX_TERMS:
        k += 1
        term *= w / (k * (nu + k))
        total += term
        biggest = max(biggest, abs(term))
        if abs(term) <= 0.1 * EPS * abs(total) and k > abs(z):
            break
    cancel = biggest / abs(total) if total else math.inf
    return total, cancel


def bessel_j_scaled(nu: float, q) -> complex:
    """J_nu(q) / (q/2)^nu, an entire function of q^2 (no branch choice)."""
    return _bessel_series_scaled(nu, complex(q))[0]


def _bessel_miller(n: int, z: complex) -> complex:
    """Integer order by backward recurrence normalized with e^{-/+ i z}."""
    start = int(max(abs(z), n)) + 40 + int(2 * math.sqrt(abs(z) + n + 1))
    start += start % 2
    # the generating function is large on the side where |e^{-isz}| > 1
    s = 1 if z.imag >= 0 else -1
    f_next, f = 0j, 1e-300 + 0j
    values = {}
    norm = 0j
    for k in range(start, -1, -1):
        values[k] = f
        norm += (2 if k else 1) * (-1j * s) ** k * f
        f_prev = (2 * k / z) * f - f_next if k else None
        f_next, f = f, f_prev
        if k and abs(f) > 1e250:
            scale = 1e-250
            f *= scale
            f_next *= scale
            norm *= scale
            values = {i: v * scale for i, v in values.items()}
    return values[n] * cmath.exp(-1j * s * z) / norm


def _bessel_miller_fractional(nu: float, z: complex) -> complex:
    """Non-integer order: backward recurrence on J_{nu+k}, normalized with
    (z/2)^nu = sum_k c_k J_{nu+2k}, c_0 = Gamma(nu+1), c_k = (nu+2k) Gamma(nu+k)/k!."""
    start = int(abs(z)) + 40 + int(2 * math.sqrt(abs(z) + nu + 1))
    start += start % 2
    f_next, f = 0j, 1e-300 + 0j
    values = [0j] * (start + 1)
    for k in range(start, -1, -1):
        values[k] = f
        if k == 0:
            break
        f_prev = (2 * (nu + k) / z) * f - f_next
        f_next, f = f, f_prev
        if abs(f) > 1e250:
            f *= 1e-250
            f_next *= 1e-250
            values = [v * 1e-250 for v in values]
    norm = gamma(nu + 1) * values[0]
    g = gamma(nu + 1)  # Gamma(nu+k)/k! at k = 1
    for k in range(1, start // 2 + 1):
        if k > 1:
            g *= (nu + k - 1) / k
        norm += (nu + 2 * k) * g * values[2 * k]
    return values[0] * (z / 2) ** nu / norm


def bessel_j(nu: float, z) -> complex:
    """Bessel function of the first kind, real order nu >= 0 (negative integers allowed)."""
    z = complex(z)
    if abs(z) > BESSEL_MAX_ABS:
        raise ValueError(f"|z| = {abs(z):.3g} is outside the Bessel window {BESSEL_MAX_ABS}")
    if nu < 0:
        if nu != int(nu):
            raise ValueError("negative non-integer order is not supported")
        n = int(-nu)
        return (-1) ** n * bessel_j(n, z)
    if z == 0:
        return 1.0 + 0j if nu == 0 else 0j
    scaled, cancel = _bessel_series_scaled(nu, z)
    if cancel < BESSEL_CANCELLATION:
        return (z / 2) ** nu * scaled
    if nu == int(nu):
        return _bessel_miller(int(nu), z)
    return _bessel_miller_fractional(nu, z)


def _pochhammer_ratio_series(a, b, z, max_terms=SERIES_MAX_TERMS):
    term = 1 + 0j
    total, biggest = term, 1.0
    for k in range(max_terms):
        term *= (a + k) / (b + k) * z / (k + 1)
        total += term
        biggest = max(biggest, abs(term))
        if abs(term) <= EPS * 1e-1 * abs(total) and k > abs(z):
            return total, biggest / max(abs(total), 1e-300)
    raise ValueError("1F1 series did not converge")


def _pochhammer_ratio_series_decimal(a, b, z, digits: int):
    """Same series carried in decimal arithmetic with ``digits`` significant digits."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        D = decimal.Decimal
        ar, ai = D(a.real), D(a.imag)
        zr, zi = D(z.real), D(z.imag)
        tr, ti = D(1), D(0)
        sr, si = D(1), D(0)
        tiny = D(10) ** (-digits)
        for k in range(SERIES_MAX_TERMS):
            # term *= (a + k) * z / ((b + k)(k + 1))
            pr, pi = ar + k, ai
            qr, qi = pr * zr - pi * zi, pr * zi + pi * zr
            den = D((b + k) * (k + 1))
            tr, ti = (tr * qr - ti * qi) / den, (tr * qi + ti * qr) / den
            sr += tr
            si += ti
            if k > abs(z) and abs(tr) + abs(ti) <= tiny * (abs(sr) + abs(si)):
                return complex(float(sr), float(si))
    raise ValueError("1F1 series did not converge")


def _asymptotic_sum(p, q, w, max_terms: int = 200):
    """sum_s (p)_s (q)_s / s! w^s truncated just before the smallest term."""
    terms = [1 + 0j]
    for s in range(max_terms):
        nxt = terms[-1] * (p + s) * (q + s) / (s + 1) * w
        terms.append(nxt)
        if abs(nxt) < EPS * 1e-2:
            break
    mags = [abs(t) for t in terms]
    stop = min(range(len(terms)), key=mags.__getitem__)
    return sum(terms[:stop + 1]), mags[stop]


def hyp1f1_asymptotic(a, b, z):
    """Large-|z| expansion (two-term Tricomi split), valid off the negative real axis."""
    a, b, z = complex(a), complex(b), complex(z)
    s = -1 if z.imag < 0 or (z.imag == 0 and z.real > 0) else 1
    s1, _ = _asymptotic_sum(a, a - b + 1, -1 / z)
    s2, _ = _asymptotic_sum(b - a, 1 - a, 1 / z)
    first = cmath.exp(s * 1j * math.pi * a) * z ** (-a) * rgamma(b - a) * s1
    second = cmath.exp(z) * z ** (a - b) * rgamma(a) * s2
    return gamma(b) * (first + second)


def hyp1f1(a, b, z) -> complex:
    """Confluent hypergeometric 1F1(a; b; z) for positive integer b.

    |z| <= 60: Taylor series (Kummer transform when Re z < 0); when the
    terms cancel by more than 1e3 the series is rerun in decimal arithmetic
    with enough extra digits. Beyond that radius, off the real axis: the
    asymptotic expansion.
    """
    a, z = complex(a), complex(z)
    if not (float(b) == int(b) and int(b) >= 1):
        raise ValueError("b must be a positive integer")
    b = int(b)
    if z == 0:
        return 1 + 0j
    if a.imag == 0 and _is_nonpositive_integer(a) and abs(z) <= HYP1F1_MAX_ABS:
        # terminating polynomial
        return _pochhammer_ratio_series(a, b, z)[0]
    if z.real < 0:
        return cmath.exp(z) * hyp1f1(b - a, b, -z)
    if abs(z) > HYP1F1_MAX_ABS:
        if abs(z.imag) < HYP1F1_ASYMPTOTIC_RADIUS:
            raise ValueError(f"|z| = {abs(z):.3g} is outside both 1F1 windows")
        return hyp1f1_asymptotic(a, b, z)
    value, cancel = _pochhammer_ratio_series(a, b, z)
    if cancel > HYP1F1_CANCELLATION:
        # the double-precision sum may be pure roundoff, so size the precision
        # from the largest term rather than from the apparent cancellation
        biggest = cancel * max(abs(value), 1e-300)
        digits = 25 + max(int(math.log10(max(biggest, 1.0))), int(math.log10(cancel))) + 1
        value = _pochhammer_ratio_series_decimal(a, b, z, digits)
    return value


def check_bilinear_laguerre(alpha: int, x: float, y: float, z, N: int = 60) -> float:
    """|sum_{n<=N} n!/Gamma(n+alpha+1) L_n L_n z^n - closed form|."""
    z = complex(z)
    if abs(z) >= 1:
        raise ValueError("|z| must be < 1")
    Lx = laguerre_all(N, alpha, x)
    Ly = laguerre_all(N, alpha, y)
    lhs = 0j
    coef = rgamma(alpha + 1)  # n!/Gamma(n+alpha+1) at n = 0
    zn = 1 + 0j
    for n in range(N + 1):
        lhs += coef * Lx[n] * Ly[n] * zn
        coef *= (n + 1) / (n + alpha + 1)
        zn *= z
    # (-xyz)^{-alpha/2} J_alpha(2(-xyz)^{1/2}/(1-z)) = (1-z)^{-alpha} J_alpha(q)/(q/2)^alpha
    q2 = -4 * x * y * z / (1 - z) ** 2
    q = cmath.sqrt(q2)
    rhs = (1 - z) ** (-1 - alpha) * cmath.exp(-z * (x + y) / (1 - z)) * bessel_j_scaled(alpha, q)
    return abs(lhs - rhs)


def check_bessel_generating(t, z, n_max: int = None, floor: float = 1e-14, limit: int = 200) -> float:
    """|sum_n t^n J_n(z) - exp((t - 1/t) z / 2)|.

    With ``n_max`` the sum is the fixed window |n| <= n_max. Otherwise the
    window grows until both edge terms fall below ``floor``.
    """
    t, z = complex(t), complex(z)
    lhs = bessel_j(0, z)
    n = 0
    while True:
        n += 1
        hi = t**n * bessel_j(n, z)
        lo = t**-n * bessel_j(-n, z)
        lhs += hi + lo
        if n_max is not None:
            if n >= n_max:
                break
        elif max(abs(hi), abs(lo)) < floor or n >= limit:
            break
    return abs(lhs - cmath.exp((t - 1 / t) * z / 2))
