"""Double-double arithmetic on ``(hi, lo)`` float pairs.

About 32 significant digits, enough to absorb the ~e^{2u} cancellation
when K_{ia}(u) is assembled from the power series at moderate u.  Only the
handful of operations the Bessel series needs are provided.
"""

import math
from fractions import Fraction

_SPLIT = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def from_fraction(fr):
    hi = float(fr)
    return hi, float(fr - Fraction(hi))


def dd(x):
    return (float(x), 0.0)


PI = from_fraction(Fraction(
    314159265358979323846264338327950288419716939937510582097494459, 10**62))
TWO_PI = (2.0 * PI[0], 2.0 * PI[1])
HALF_PI = (0.5 * PI[0], 0.5 * PI[1])
LN2 = from_fraction(Fraction(
    693147180559945309417232121458176568075500134360255254120680009, 10**63))
EULER_GAMMA = from_fraction(Fraction(
    577215664901532860606512090082402431042159335939923598805767235, 10**63))


def add(x, y):
    s, e = two_sum(x[0], y[0])
    t, f = two_sum(x[1], y[1])
    e += t
    s, e = quick_two_sum(s, e)
    e += f
    return quick_two_sum(s, e)


def neg(x):
    return (-x[0], -x[1])


def sub(x, y):
    return add(x, (-y[0], -y[1]))


def mul(x, y):
    p, e = two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    return quick_two_sum(p, e)


def mul_d(x, d):
    p, e = two_prod(x[0], d)
    e += x[1] * d
    return quick_two_sum(p, e)


def div(x, y):
    q1 = x[0] / y[0]
    r = sub(x, mul_d(y, q1))
    q2 = r[0] / y[0]
    r = sub(r, mul_d(y, q2))
    q3 = r[0] / y[0]
    q1, q2 = quick_two_sum(q1, q2)
    return add((q1, q2), (q3, 0.0))


def ldexp(x, k):
    return (math.ldexp(x[0], k), math.ldexp(x[1], k))


def sqrt(x):
    if x[0] <= 0.0:
        if x[0] == 0.0:
            return (0.0, 0.0)
        raise ValueError("sqrt of negative double-double")
    q = math.sqrt(x[0])
    r = sub(x, two_prod(q, q))
    return quick_two_sum(q, r[0] / (2.0 * q))


def to_float(x):
    return x[0] + x[1]


def exp(x):
    if x[0] > 709.0:
        raise OverflowError("double-double exp overflow")
    if x[0] < -745.0:
        return (0.0, 0.0)
    k = round(x[0] / LN2[0])
    r = sub(x, mul_d(LN2, float(k)))
    # r / 2**10 keeps the Taylor series short
    r = ldexp(r, -10)
    term = (1.0, 0.0)
    acc = (1.0, 0.0)
    for n in range(1, 30):
        term = mul(term, r)
        term = div(term, dd(n))
        acc = add(acc, term)
        if abs(term[0]) < 1e-36:
            break
    for _ in range(10):
        acc = mul(acc, acc)
    return ldexp(acc, k)


def log(x):
    if x[0] <= 0.0:
        raise ValueError("log of non-positive double-double")
    y = (math.log(x[0]), 0.0)
    # one Newton step doubles the ~16 correct digits
    e = mul(x, exp(neg(y)))
    return add(y, sub(e, (1.0, 0.0)))


def _sin_cos_taylor(r):
    r2 = mul(r, r)
    s = r
    c = (1.0, 0.0)
    ts = r
    tc = (1.0, 0.0)
    for n in range(1, 40):
        ts = div(mul(ts, r2), dd(-(2 * n) * (2 * n + 1)))
        tc = div(mul(tc, r2), dd(-(2 * n - 1) * (2 * n)))
        s = add(s, ts)
        c = add(c, tc)
        if abs(ts[0]) < 1e-36 and abs(tc[0]) < 1e-36:
            break
    return s, c


def sin_cos(x):
    """Return ``(sin x, cos x)`` as double-doubles."""
    k = round(x[0] / TWO_PI[0])
    r = sub(x, mul_d(TWO_PI, float(k)))
    j = round(r[0] / HALF_PI[0])
    r = sub(r, mul_d(HALF_PI, float(j)))
    s, c = _sin_cos_taylor(r)
    j %= 4
    if j == 0:
        return s, c
    if j == 1:
        return c, neg(s)
    if j == 2:
        return neg(s), neg(c)
    return neg(c), s


def atan(x):
    if x[0] == 0.0:
        return (0.0, 0.0)
    if x[0] < 0.0:
        return neg(atan(neg(x)))
    if x[0] > 1.0:
        return sub(HALF_PI, atan(div((1.0, 0.0), x)))
    # two half-angle reductions: atan x = 2 atan(x / (1 + sqrt(1 + x^2)))
    for _ in range(2):
        x = div(x, add((1.0, 0.0), sqrt(add((1.0, 0.0), mul(x, x)))))
    x2 = mul(x, x)
    term = x
    acc = x
    for n in range(1, 60):
        term = neg(mul(term, x2))
        contrib = div(term, dd(2 * n + 1))
        acc = add(acc, contrib)
        if abs(contrib[0]) < 1e-36 * abs(acc[0]):
            break
    return ldexp(acc, 2)
