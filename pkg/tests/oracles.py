"""Independent reference computations used only by the tests.

Nothing here imports the package; series are plain dicts
``{q_exponent: {r_exponent: coefficient}}`` truncated at a bound.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, isqrt


# ---------------------------------------------------------------------------
# dict series in q (integral exponents) and r (integral exponents)
# ---------------------------------------------------------------------------


def smul(a: dict, b: dict, prec: int) -> dict:
    out: dict = {}
    for n1, p1 in a.items():
        for n2, p2 in b.items():
            n = n1 + n2
            if n >= prec:
                continue
            tgt = out.setdefault(n, {})
            for l1, c1 in p1.items():
                for l2, c2 in p2.items():
                    tgt[l1 + l2] = tgt.get(l1 + l2, 0) + c1 * c2
    return clean(out)


def clean(a: dict) -> dict:
    out = {}
    for n, p in a.items():
        p = {l: c for l, c in p.items() if c}
        if p:
            out[n] = p
    return out


def geometric(n: int, l: int, prec: int) -> dict:
    """1 / (1 - q^n r^l) truncated (n >= 1)."""
    return {n * k: {l * k: 1} for k in range(0, (prec - 1) // n + 1)}


def binomial_factor(n: int, l: int, sign: int = -1) -> dict:
    """1 + sign q^n r^l."""
    if n == 0:
        return clean({0: {0: 1, l: sign}}) if l else {0: {0: 1 + sign}}
    return {0: {0: 1}, n: {l: sign}}


def product(factors, prec: int) -> dict:
    out = {0: {0: 1}}
    for f in factors:
        out = smul(out, f, prec)
    return out


def eta_power_product(e: int, prec: int) -> list[int]:
    """Coefficients of prod (1 - q^n)^e (without the q^(e/24) prefactor)."""
    series = {0: {0: 1}}
    for n in range(1, prec):
        f = binomial_factor(n, 0) if e > 0 else geometric(n, 0, prec)
        for _ in range(abs(e)):
            series = smul(series, f, prec)
    return [series.get(k, {}).get(0, 0) for k in range(prec)]


def theta_triple_product(prec: int) -> dict:
    """prod (1-q^n)(1-q^n r)(1-q^(n-1) r^-1) with r exponents doubled and shifted:
    returns q^(1/8) r^(1/2) * sum as {n: {2l+1: c}} after multiplying by r^(1/2)."""
    factors = []
    for n in range(1, prec + 1):
        factors += [binomial_factor(n, 0), binomial_factor(n, 1), binomial_factor(n - 1, -1)]
    p = product(factors, prec)
    return {n: {2 * l + 1: c for l, c in poly.items()} for n, poly in p.items()}


def phi_m2_1_product(prec: int) -> dict:
    """(r - 2 + r^-1) prod (1 - q^n r)^2 (1 - q^n r^-1)^2 / (1 - q^n)^4."""
    factors = [{0: {1: 1, 0: -2, -1: 1}}]
    for n in range(1, prec):
        factors += [binomial_factor(n, 1)] * 2 + [binomial_factor(n, -1)] * 2 + [geometric(n, 0, prec)] * 4
    return product(factors, prec)


def theta_ratio_product(k: int, prec: int) -> dict:
    """theta(k z) / theta(z) for odd k, times nothing else.

    (r^(k/2) - r^(-k/2)) / (r^(1/2) - r^(-1/2)) prod (1-q^n r^k)(1-q^n r^-k) / ((1-q^n r)(1-q^n r^-1)).
    """
    if k % 2 == 0:
        raise ValueError("odd k only (integral r exponents)")
    lead = {0: {j: 1 for j in range(-(k - 1) // 2, (k - 1) // 2 + 1)}}
    factors = [lead]
    for n in range(1, prec):
        factors += [binomial_factor(n, k), binomial_factor(n, -k), geometric(n, 1, prec), geometric(n, -1, prec)]
    return product(factors, prec)


def theta_ratio_squared(k: int, prec: int) -> dict:
    """(theta(k z) / theta(z))^2 for any k >= 1, r exponents integral."""
    # (r^(k/2) - r^(-k/2))^2 / (r^(1/2) - r^(-1/2))^2 = (sum_{j} r^{j - (k-1)/2})^2
    half = {}
    for j in range(k):
        e2 = 2 * j - (k - 1)  # doubled exponent
        half[e2] = 1
    sq: dict = {}
    for a, ca in half.items():
        for b, cb in half.items():
            sq[(a + b) // 2] = sq.get((a + b) // 2, 0) + ca * cb
    factors = [{0: sq}]
    for n in range(1, prec):
        factors += [binomial_factor(n, k), binomial_factor(n, -k), geometric(n, 1, prec),
                    geometric(n, -1, prec)] * 2
    return product(factors, prec)


# ---------------------------------------------------------------------------
# phi_0,1 from the even theta constants, in the variable x = q^(1/2)
# ---------------------------------------------------------------------------


def _xmul(a: dict, b: dict, prec: int) -> dict:
    out: dict = {}
    for n1, p1 in a.items():
        for n2, p2 in b.items():
            n = n1 + n2
            if n >= prec:
                continue
            tgt = out.setdefault(n, {})
            for l1, c1 in p1.items():
                for l2, c2 in p2.items():
                    tgt[l1 + l2] = tgt.get(l1 + l2, 0) + c1 * c2
    return clean(out)


def _xinv_scalar(a: list, prec: int) -> list:
    """Inverse of a power series in x with invertible constant term (Fractions)."""
    inv = [Fraction(0)] * prec
    inv[0] = Fraction(1) / a[0]
    for k in range(1, prec):
        s = sum(a[j] * inv[k - j] for j in range(1, min(k, len(a) - 1) + 1))
        inv[k] = -s / a[0]
    return inv


def phi01_theta_quotient(prec: int) -> dict:
    """4 sum_{i=2,3,4} theta_i(z)^2 / theta_i(0)^2 with exact rationals.

    theta_2 carries x^(1/4) r^(1/2) factors; squaring gives x^(1/2) r^(...)
    that cancel against theta_2(0)^2, so we track exponents of x^(1/4)
    as 4 * exponent and r doubled.
    """
    xprec = 2 * prec  # x = q^(1/2)
    nmax = isqrt(4 * xprec) + 2

    def theta_sq(kind: str, zero: bool) -> dict:
        # keys: exponent of x^(1/4) ; r doubled
        terms: dict = {}
        for n in range(-nmax, nmax + 1):
            if kind == "2":
                e4 = (2 * n + 1) ** 2  # x^(((2n+1)/2)^2) = x^((2n+1)^2 / 4)
                r2 = 2 * n + 1
                c = 1
            else:
                e4 = 4 * n * n
                r2 = 2 * n
                c = (-1) ** n if kind == "4" else 1
            if e4 >= 4 * xprec + 4:
                continue
            key = r2 if not zero else 0
            terms.setdefault(e4, {})
            terms[e4][key] = terms[e4].get(key, 0) + c
        return _xmul(terms, terms, 4 * xprec + 4)

    total: dict = {}
    for kind in "234":
        num = theta_sq(kind, False)
        den = theta_sq(kind, True)
        shift = min(den)  # 2 for theta_2 (x^(1/2)), 0 otherwise
        num = {k - shift: v for k, v in num.items()}
        den = {k - shift: v for k, v in den.items()}
        length = 4 * xprec + 4
        dlist = [Fraction(den.get(k, {}).get(0, 0)) for k in range(length)]
        inv = _xinv_scalar(dlist, length)
        invd = {k: {0: c} for k, c in enumerate(inv) if c}
        quot = _xmul(num, invd, length)
        for k, p in quot.items():
            for l, c in p.items():
                total.setdefault(k, {})
                total[k][l] = total[k].get(l, 0) + 4 * c
    total = clean(total)
    out: dict = {}
    for k, p in total.items():
        # k counts x^(1/4) = q^(1/8); keep q-integral exponents below prec
        if k % 8:
            raise AssertionError("non-integral q exponent in theta quotient")
        n = k // 8
        if n >= prec:
            continue
        poly = {}
        for l2, c in p.items():
            if l2 % 2 or Fraction(c).denominator != 1:
                raise AssertionError("non-integral term in theta quotient")
            poly[l2 // 2] = int(c)
        out[n] = poly
    return out


# ---------------------------------------------------------------------------
# Cohen numbers and E_4,1
# ---------------------------------------------------------------------------


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d / n) for n >= 1."""
    if n == 1:
        return 1
    res = 1
    while n % 2 == 0:
        n //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            res = -res
    # Jacobi symbol (d / n), n odd
    a = d % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                res = -res
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            res = -res
        a %= n
    return res if n == 1 else 0


def bernoulli_poly_3(x: Fraction) -> Fraction:
    return x ** 3 - Fraction(3, 2) * x ** 2 + Fraction(1, 2) * x


def fundamental_decomposition(minus_n: int) -> tuple[int, int]:
    """-N = D f^2 with D a fundamental discriminant."""
    for f in range(isqrt(abs(minus_n)), 0, -1):
        if minus_n % (f * f):
            continue
        d = minus_n // (f * f)
        if _is_fundamental(d):
            return d, f
    raise ValueError(minus_n)


def _squarefree(m: int) -> bool:
    m = abs(m)
    return all(m % (p * p) for p in range(2, isqrt(m) + 1))


def _is_fundamental(d: int) -> bool:
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def mobius(n: int) -> int:
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


def sigma(n: int, k: int) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def cohen_h3(N: int) -> Fraction:
    """Cohen's H(3, N)."""
    if N == 0:
        return Fraction(-1, 252)  # zeta(-5)
    if N % 4 in (1, 2):
        return Fraction(0)
    D, f = fundamental_decomposition(-N)
    m = abs(D)
    b3 = m ** 2 * sum(kronecker(D, a) * bernoulli_poly_3(Fraction(a, m)) for a in range(1, m + 1))
    L = -b3 / 3
    s = sum(mobius(d) * kronecker(D, d) * d ** 2 * sigma(f // d, 5) for d in range(1, f + 1) if f % d == 0)
    return L * s


def e41_coefficient(n: int, r: int) -> int:
    N = 4 * n - r * r
    if N < 0:
        return 0
    v = cohen_h3(N) / Fraction(-1, 252)
    assert v.denominator == 1
    return int(v)


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------


def box_roots(gram: list[list[int]], bound: int = 2) -> int:
    n = len(gram)
    count = 0
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        if sum(v[i] * gram[i][j] * v[j] for i in range(n) for j in range(n)) == 2:
            count += 1
    return count


def an_min_norms(n: int) -> list[Fraction]:
    return sorted(Fraction(i * (n + 1 - i), n + 1) for i in range(n + 1))


def int_det(m: list[list[int]]) -> int:
    """Bareiss determinant."""
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def gcd_list(xs) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
