"""Reference values for the K+ unit tests (mpmath, 30 digits).

Raw products are summed term by term in extended precision. The converged
reference is a two-level Richardson extrapolation of raw products in 1/N,
which does not use the tail-correction coefficients.
"""
import mpmath as mp

mp.mp.dps = 30


def p(k, b, n):
    c = mp.pi * n / (2 * b)
    d = (k - c) * (k + c)
    return mp.sqrt(d) if d > 0 else 1j * mp.sqrt(-d)


def raw(k, b, alpha, n_terms):
    s = mp.mpf(0)
    for n in range(1, n_terms + 1):
        s += mp.log(1 - mp.mpf(1) / (2 * n)) + mp.log(p(k, b, 2 * n) + alpha) - mp.log(p(k, b, 2 * n - 1) + alpha)
    return mp.exp(s)


def richardson(k, b, alpha, n0):
    # log K+ error expands in 1/N; eliminate the 1/N and 1/N^2 terms.
    l1, l2, l4 = (mp.log(raw(k, b, alpha, m)) for m in (n0, 2 * n0, 4 * n0))
    r1 = 2 * l2 - l1
    r2 = 2 * l4 - l2
    return mp.exp((4 * r2 - r1) / 3)


def asymptotic(k, b, alpha):
    return mp.exp(1j * mp.pi / 4) / mp.sqrt(b * (k + alpha))


if __name__ == "__main__":
    k, b = mp.mpf(200), mp.mpf(1)
    v = raw(k, b, mp.mpf("100.56"), 5000)
    print("raw k=200 alpha=100.56 N=5000:", mp.nstr(v, 17))
    print("  |ratio to asymptotic|:", mp.nstr(abs(v / asymptotic(k, b, mp.mpf("100.56"))), 10))
    v = raw(mp.mpf(10), b, mp.mpf("3.7"), 400)
    print("raw k=10 alpha=3.7 N=400:", mp.nstr(v, 17))
    v = raw(mp.mpf(10), b, mp.mpf("2.5") * 1j, 400)
    print("raw k=10 alpha=2.5i N=400:", mp.nstr(v, 17))
    ref = richardson(k, b, mp.mpf(150), 250000)
    print("reference k=200 alpha=150:", mp.nstr(ref, 17))
