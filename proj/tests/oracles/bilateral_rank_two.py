"""Independent check of the A_r very-well-poised 6psi6 summation at r = 1, 2.

Both sides are written directly from the summation formula in mpmath at 50
digits; the bilateral sum is taken over the cube [-W, W]^r. For r = 2 the
sides agree only when every e_i = a q^{-m_i}; a generic e breaks agreement.
Run: python3 tests/oracles/bilateral_rank_two.py  (about a minute)
"""
import itertools

from mpmath import mp, mpf

mp.dps = 50


def poch(x, q, k):
    p = mpf(1)
    if k >= 0:
        for j in range(k):
            p *= 1 - x * q**j
        return p
    for j in range(1, -k + 1):
        p *= 1 - x / q**j
    return 1 / p


def rpoch(x, q, k):
    """1 / (x;q)_k, zero when k < 0 and a factor vanishes."""
    if k >= 0:
        return 1 / poch(x, q, k)
    p = mpf(1)
    for j in range(1, -k + 1):
        p *= 1 - x / q**j
    return p


def pinf(x, q):
    return mp.qp(x, q)


def lhs(q, a, b, c, d, e, x, width):
    r, C, E = len(x), mp.fprod(c), mp.fprod(e)
    total = mpf(0)
    for k in itertools.product(range(-width, width + 1), repeat=r):
        K = sum(k)
        t = mpf(1)
        for i in range(r):
            for j in range(i + 1, r):
                t *= (1 - q ** (k[i] - k[j]) * x[i] / x[j]) / (1 - x[i] / x[j])
        for i in range(r):
            for j in range(r):
                t *= poch(c[j] * x[i] / x[j], q, k[i]) * rpoch(a * x[i] * q / (e[j] * x[j]), q, k[i])
            t *= poch(a * q / (b * C * x[i]), q, K - k[i]) * poch(d * E / (a ** (r - 1) * e[i] * x[i]), q, K)
            t *= poch(b * x[i], q, k[i])
            t *= rpoch(d * E / (a**r * x[i]), q, K - k[i]) * rpoch(a * c[i] * q / (b * C * x[i]), q, K)
            t *= rpoch(a * x[i] * q / d, q, k[i])
        t *= (1 - a * q ** (2 * K)) / (1 - a) * poch(E / a ** (r - 1), q, K) * rpoch(a * q / C, q, K)
        t *= (a ** (r + 1) * q / (b * C * d * E)) ** K * q ** sum(i * k[i] for i in range(r))
        total += t
    return total


def rhs(q, a, b, c, d, e, x):
    r, C, E = len(x), mp.fprod(c), mp.fprod(e)
    v = pinf(a * q, q) * pinf(q / a, q) * pinf(a * q / (b * d), q)
    v /= pinf(a * q / C, q) * pinf(a ** (r + 1) * q / (b * C * d * E), q) * pinf(a ** (r - 1) * q / E, q)
    for i in range(r):
        for j in range(r):
            v *= pinf(q * x[i] / x[j], q) * pinf(a * x[i] * q / (c[i] * e[j] * x[j]), q)
            v /= pinf(q * x[i] / (c[i] * x[j]), q) * pinf(a * x[i] * q / (e[j] * x[j]), q)
        v *= pinf(a**r * x[i] * q / (d * E), q) * pinf(a * q / (b * e[i] * x[i]), q)
        v *= pinf(a * q / (b * C * x[i]), q) * pinf(a * x[i] * q / (c[i] * d), q)
        v /= pinf(a ** (r - 1) * e[i] * x[i] * q / (d * E), q) * pinf(q / (b * x[i]), q)
        v /= pinf(a * x[i] * q / d, q) * pinf(a * c[i] * q / (b * C * x[i]), q)
    return v


def report(label, q, a, b, c, d, e, x, width):
    left, right = lhs(q, a, b, c, d, e, x, width), rhs(q, a, b, c, d, e, x)
    print(f"{label:28s} lhs={mp.nstr(left, 20):>28s} rhs={mp.nstr(right, 20):>28s} "
          f"rel.diff={mp.nstr(abs(left - right) / abs(right), 3)}")


if __name__ == "__main__":
    q = mpf(3) / 10
    a, b, d = mpf(5) / 4, mpf(-7), mpf(9) / 2
    report("r=1 generic e", q, a, b, [mpf(2) / 3], d, [mpf(11) / 3], [mpf(1)], 120)
    c, x = [mpf(2) / 3, mpf(-3) / 5], [mpf(1), mpf(-5) / 7]
    report("r=2 e = (a, a)", q, a, b, c, d, [a, a], x, 30)
    report("r=2 e = (a/q, a)", q, a, b, c, d, [a / q, a], x, 30)
    report("r=2 e = (a/q, a/q^2)", q, a, b, c, d, [a / q, a / q**2], x, 30)
    report("r=2 e = (1.0001 a, a)", q, a, b, c, d, [a * mpf("1.0001"), a], x, 30)
    report("r=2 e = (11/3, -13/4)", q, a, b, c, d, [mpf(11) / 3, mpf(-13) / 4], x, 30)
