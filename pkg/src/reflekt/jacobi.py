"""Named Jacobi forms, their singular Fourier coefficients, and theta blocks.

Scalar-index forms are one-variable :class:`QRSeries` with ``a(n, l)`` at
``q^n r^l``.  Lattice-index forms store *doubled* elliptic exponents so
that the half-integral exponents of theta factors stay integral; the
:class:`LatticeIndex` records how a stored exponent vector maps to
coordinates in the index lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg as la
from .lattice import (IntegerLattice, discriminant_group, lattice_L, min_norm_per_class,
                      paramodular_lattice, primitive_multiple, div as lattice_div)
from .series import (LaurentPoly, QRSeries, SeriesError, eisenstein, eta_power,
                     map_exponents, q_dilate, q_section, series_div, series_divexact, theta,
                     delta)


class JacobiError(ValueError):
    pass


class IncompletePrecision(JacobiError):
    pass


@dataclass(frozen=True)
class LatticeIndex:
    lattice: IntegerLattice
    coords: tuple  # rows: stored exponent unit vectors -> coordinates in the lattice basis
    label: str

    def coordinates(self, exps: Sequence[int]) -> list[Fraction]:
        n = self.lattice.rank
        return [sum(Fraction(e) * self.coords[i][j] for i, e in enumerate(exps)) for j in range(n)]

    def norm(self, exps: Sequence[int]) -> Fraction:
        c = self.coordinates(exps)
        return Fraction(self.lattice.norm(c))


@dataclass(frozen=True)
class JacobiFormSeries:
    weight: int
    index: int | LatticeIndex
    series: QRSeries
    holomorphy_class: str  # holomorphic | weak | nearly-holomorphic
    name: str = ""

    @property
    def scalar(self) -> bool:
        return isinstance(self.index, int)

    @property
    def prec(self):
        return self.series.prec

    def coeff(self, n: int, l) -> int:
        if self.series.qpref:
            raise JacobiError("coefficient access needs integral q-exponents")
        if isinstance(l, int):
            l = (l,)
        return self.series.coefficient(n)[tuple(l)]

    def hyperbolic_norm(self, n: int, l) -> Fraction:
        """4tn - l^2 for scalar index t, 2n - (l, l) for a lattice index."""
        if self.scalar:
            ll = l if isinstance(l, int) else l[0]
            return Fraction(4 * self.index * n - ll * ll)
        return 2 * n - self.index.norm(l)

    def dump(self) -> str:
        return self.series.dump()


# ---------------------------------------------------------------------------
# one-variable building blocks
# ---------------------------------------------------------------------------


def _const(poly_terms: dict, arity: int = 1) -> QRSeries:
    return QRSeries(arity, [LaurentPoly(arity, poly_terms)], 0, None)


@lru_cache(maxsize=None)
def phi_m2_1(prec: int) -> JacobiFormSeries:
    """theta^2 / eta^6, q^0 term r - 2 + r^-1."""
    s = theta(prec) ** 2 / eta_power(6, prec)
    return JacobiFormSeries(-2, 1, s.truncate(prec), "weak", "phi_-2,1")


def _weierstrass_part(prec: int) -> QRSeries:
    """1 + 12 sum_{n>=1} sum_{d|n} d (r^d - 2 + r^-d) q^n."""
    data = {0: {(0,): 1}}
    for n in range(1, prec):
        terms: dict = {}
        for d in range(1, n + 1):
            if n % d == 0:
                terms[(d,)] = terms.get((d,), 0) + 12 * d
                terms[(-d,)] = terms.get((-d,), 0) + 12 * d
                terms[(0,)] = terms.get((0,), 0) - 24 * d
        data[n] = terms
    return QRSeries.from_dict(1, data, prec)


@lru_cache(maxsize=None)
def _phi01(prec: int) -> JacobiFormSeries:
    m2 = phi_m2_1(prec).series
    # phi_-2,1 / (r - 2 + r^-1) = prod (1 - q^n r)^2 (1 - q^n / r)^2 / (1 - q^n)^4
    reduced = series_divexact(m2, _const({(1,): 1, (0,): -2, (-1,): 1}))
    s = m2 * _weierstrass_part(prec) + reduced * 12
    return JacobiFormSeries(0, 1, s.truncate(prec), "weak", "phi_0,1")


@lru_cache(maxsize=None)
def _phi02(prec: int) -> JacobiFormSeries:
    p1 = _phi01(prec).series
    m2 = phi_m2_1(prec).series
    s = (p1 * p1 - eisenstein(4, prec) * m2 * m2).divexact_int(24)
    return JacobiFormSeries(0, 2, s, "weak", "phi_0,2")


@lru_cache(maxsize=None)
def _phi03(prec: int) -> JacobiFormSeries:
    # unique weak form of weight 0, index 3 with q^0 term r + 2 + r^-1
    fixed = {(0, 0): 2, (0, 1): 1, (0, 2): 0, (0, 3): 0}
    s = solve_weak_form(0, 3, prec, fixed=fixed)
    return JacobiFormSeries(0, 3, s, "weak", "phi_0,3")


@lru_cache(maxsize=None)
def _phi04(prec: int) -> JacobiFormSeries:
    # the ring relation 4 phi_0,4 = phi_0,1 phi_0,3 - phi_0,2^2; division by 4 must be exact
    p1, p2, p3 = _phi01(prec).series, _phi02(prec).series, _phi03(prec).series
    num = p1 * p3 - p2 * p2
    try:
        s = num.divexact_int(4)
    except SeriesError as exc:
        raise JacobiError("phi_0,4 relation is not divisible by 4: generator normalisation is off") from exc
    return JacobiFormSeries(0, 4, s, "weak", "phi_0,4")


def weak_generator(t: int, prec: int) -> JacobiFormSeries:
    """phi_{0,t}, t = 1..4, weak, weight 0, q^0 term r^-1 + c_t + r."""
    builders = {1: _phi01, 2: _phi02, 3: _phi03, 4: _phi04}
    if t not in builders:
        raise JacobiError(f"no weight-0 generator of index {t}")
    if prec < 1:
        raise JacobiError("prec must be >= 1")
    return builders[t](prec)


# ---------------------------------------------------------------------------
# weak-form module over modular forms and the Jacobi-Eisenstein series
# ---------------------------------------------------------------------------


def modular_monomials(weight: int) -> list[tuple[int, int]]:
    """Exponents (c, d) with 4c + 6d = weight (a basis of M_weight)."""
    return [(c, d) for d in range(weight // 6 + 1) for c in [(weight - 6 * d) // 4]
            if c >= 0 and 4 * c + 6 * d == weight]


def weak_basis(weight: int, t: int, prec: int) -> list[tuple[str, QRSeries]]:
    """E4^c E6^d phi_-2,1^b phi_0,1^(t-b): a Z-spanning set of the even weak forms."""
    e4, e6 = eisenstein(4, prec), eisenstein(6, prec)
    m2, p1 = phi_m2_1(prec).series, _phi01(prec).series
    out = []
    for b in range(t + 1):
        for c, d in modular_monomials(weight + 2 * b):
            s = (e4 ** c) * (e6 ** d) * (m2 ** b) * (p1 ** (t - b))
            out.append((f"E4^{c} E6^{d} phi_-2,1^{b} phi_0,1^{t - b}", s.truncate(prec)))
    return out


def _combine(basis: Sequence[QRSeries], coeffs: Sequence[Fraction]) -> QRSeries:
    den = 1
    for c in coeffs:
        den = math.lcm(den, Fraction(c).denominator)
    total = None
    for s, c in zip(basis, coeffs):
        if c:
            term = s.scale(int(c * den))
            total = term if total is None else total + term
    return total.divexact_int(den)


def solve_weak_form(weight: int, t: int, prec: int, *, fixed: dict, holomorphic: bool = False,
                    rows: int | None = None) -> QRSeries:
    """Unique element of the weak-form module with prescribed coefficients.

    ``fixed`` maps (n, l) to a required value; with ``holomorphic`` all
    coefficients of negative norm 4tn - l^2 in the first ``rows`` q-orders
    are forced to vanish.
    """
    basis = [s for _, s in weak_basis(weight, t, prec)]
    rows = prec if rows is None else min(rows, prec)
    eqs, rhs = [], []
    for (n, l), v in sorted(fixed.items()):
        eqs.append([s.coefficient(n)[(l,)] for s in basis])
        rhs.append(v)
    if holomorphic:
        for n in range(rows):
            lmax = max((abs(e[0]) for s in basis for e in s.coefficient(n).terms), default=0)
            for l in range(0, lmax + 1):
                if 4 * t * n - l * l < 0:
                    eqs.append([s.coefficient(n)[(l,)] for s in basis])
                    rhs.append(0)
    try:
        x, nullity = la.solve(eqs, rhs)
    except ValueError as exc:
        raise JacobiError(f"no weak form of weight {weight}, index {t} meets the constraints") from exc
    if nullity:
        raise JacobiError(f"constraints leave a {nullity}-dimensional family (weight {weight}, index {t})")
    return _combine(basis, x)


@lru_cache(maxsize=None)
def jacobi_eisenstein(t: int, prec: int) -> JacobiFormSeries:
    """E_{4,t}: the holomorphic Jacobi form of weight 4, index t with a(0,0) = 1."""
    if t not in (1, 2, 3):
        raise JacobiError("E_4,t is only provided for t = 1, 2, 3")
    s = solve_weak_form(4, t, prec, fixed={(0, 0): 1}, holomorphic=True)
    return JacobiFormSeries(4, t, s, "holomorphic", f"E_4,{t}")


# ---------------------------------------------------------------------------
# the index-21 form
# ---------------------------------------------------------------------------

DEFAULT_XI_PREC = 10


@lru_cache(maxsize=None)
def build_xi021(prec: int = DEFAULT_XI_PREC) -> JacobiFormSeries:
    """Nearly holomorphic weight-0 index-21 form with q-valuation -1."""
    if prec < 1:
        raise JacobiError("prec must be >= 1")
    w = prec + 1
    p1, p2, p3, p4 = (weak_generator(t, w).series for t in (1, 2, 3, 4))
    e41, e42, e43 = (jacobi_eisenstein(t, w).series for t in (1, 2, 3))
    e4 = eisenstein(4, w)
    cache: dict = {}

    def pw(name: str, k: int) -> QRSeries:
        key = (name, k)
        if key not in cache:
            base = {"1": p1, "2": p2, "3": p3, "4": p4}[name]
            cache[key] = base if k == 1 else pw(name, k - 1) * base
        return cache[key]

    def mono(c: int, **exps) -> QRSeries:
        out = None
        for name, k in sorted(exps.items()):
            f = pw(name[1:], k)
            out = f if out is None else out * f
        return out.scale(c) if c != 1 else out

    block = e4 * pw("4", 1) * (mono(-6, p3=2, p4=2) * e4 + mono(10, p3=3, p4=1) * e41
                               + pw("4", 3) * e42 + mono(-5, p3=4) * e42) \
        + e41 * e42 * pw("3", 1) * (pw("3", 4) - pw("4", 3).scale(4))
    polar = series_div(e43, delta(w + 1)) * block

    rest = mono(-228, p1=3, p3=2, p4=3)
    rest += mono(1, p1=2, p3=1, p4=1) * (pw("4", 3).scale(958) + mono(240, p2=2, p4=2)
                                         + mono(2137, p2=1, p3=2, p4=1) + pw("3", 4).scale(11))
    rest += pw("1", 1) * (mono(24, p2=1, p3=6) + mono(-27, p2=2, p3=4, p4=1)
                          + (mono(-4080, p2=3, p3=2) + pw("3", 4).scale(-6273)) * pw("4", 2)
                          + mono(-8826, p2=1, p3=2, p4=3) + pw("4", 5).scale(30))
    rest += mono(-75, p3=1, p2=1, p4=4)
    rest += (mono(7668, p3=1, p2=3) + pw("3", 3).scale(24796)) * pw("4", 3)
    rest += (mono(1920, p3=1, p2=5) + mono(6513, p3=3, p2=2)) * pw("4", 2)
    rest += (mono(24, p3=3, p2=4) + mono(96, p3=5, p2=1)) * pw("4", 1)
    rest += mono(-24, p3=5, p2=3)
    rest += pw("3", 7).scale(-72)

    xi = (polar + rest).truncate(prec)
    if xi.prec < prec:
        raise JacobiError(f"precision underflow: reached O(q^{xi.prec}), wanted O(q^{prec})")
    return JacobiFormSeries(0, 21, xi, "nearly-holomorphic", "xi_0,21")


# ---------------------------------------------------------------------------
# singular coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SingularCoefficient:
    n: int
    l: tuple
    a: int
    norm: Fraction  # 4tn - l^2 (scalar index) or 2n - (l, l) (lattice index)


def _class_key(f: JacobiFormSeries, l: tuple):
    if f.scalar:
        t = f.index
        r = l[0] % (2 * t)
        return min(r, (-r) % (2 * t))
    dg = discriminant_group(f.index.lattice)
    c = f.index.coordinates(l)
    cls = dg.class_of(c)
    neg = tuple((-x) % d for x, d in zip(cls, dg.invariant_factors))
    return min(cls, neg)


def _reduction_bound(f: JacobiFormSeries) -> Fraction:
    """Every singular class has a representative with q-exponent < this bound."""
    if f.scalar:
        return Fraction(f.index, 4)
    mins = min_norm_per_class(f.index.lattice)
    return max(mins.values()) / 2


def _is_reduced(f: JacobiFormSeries, l: tuple, cache: dict) -> bool:
    if f.scalar:
        return 0 <= l[0] <= f.index
    if "mins" not in cache:
        cache["mins"] = min_norm_per_class(f.index.lattice)
        cache["dg"] = discriminant_group(f.index.lattice)
    cls = cache["dg"].class_of(f.index.coordinates(l))
    return f.index.norm(l) == cache["mins"][cls]


def singular_part(f: JacobiFormSeries, *, reduced: bool = True) -> list[SingularCoefficient]:
    """Nonzero coefficients of negative hyperbolic norm.

    ``reduced=True`` returns one representative per equivalence class of
    Fourier indices (l modulo the index lattice and up to sign, with equal
    norm) and certifies completeness from the stored precision.  With
    ``reduced=False`` every singular coefficient in the stored range is
    listed, deduplicated under l -> -l.
    """
    s = f.series
    if s.qpref:
        raise JacobiError("singular_part needs integral q-exponents")
    if s.rpref != (0,) * s.arity:
        raise JacobiError("singular_part needs integral elliptic exponents")
    if reduced:
        need = math.ceil(_reduction_bound(f))
        if s.prec is not None and s.prec < need:
            raise IncompletePrecision(
                f"precision O(q^{s.prec}) cannot certify completeness; need O(q^{need})")
    found: dict = {}
    cache: dict = {}
    for n, poly in s.items():
        for l, a in poly.terms.items():
            nm = f.hyperbolic_norm(n, l)
            if nm >= 0:
                continue
            neg = tuple(-x for x in l)
            if reduced:
                if not _is_reduced(f, l, cache):
                    continue
                key = (_class_key(f, l), nm)
            else:
                key = max(l, neg)
            if key in found:
                continue
            found[key] = SingularCoefficient(n, max(l, neg) if not f.scalar else (abs(l[0]),), a, nm)
    return sorted(found.values(), key=lambda c: (c.n, c.l))


# ---------------------------------------------------------------------------
# Fourier index -> vector of the orthogonal lattice
# ---------------------------------------------------------------------------


def index_lattice(f: JacobiFormSeries) -> IntegerLattice:
    """The lattice of signature (2, n) the Borcherds lift lives on."""
    if f.scalar:
        return paramodular_lattice(f.index)
    return lattice_L(f.index.lattice)


def fourier_index_vector(f: JacobiFormSeries, n: int, l) -> list[Fraction]:
    """(n, l) as a dual vector n e' + l + f' of U + U + S(-1)."""
    if isinstance(l, int):
        l = (l,)
    if f.scalar:
        t = f.index
        # basis e, e', s, f', f of L_t
        return [Fraction(0), Fraction(n), Fraction(l[0], 2 * t), Fraction(1), Fraction(0)]
    c = f.index.coordinates(l)
    return [Fraction(0), Fraction(0), Fraction(n), Fraction(1)] + c


def orbit_data(f: JacobiFormSeries, n: int, l) -> tuple[int, int, list[int]]:
    """(norm, div, primitive lattice vector) of the divisor attached to (n, l)."""
    lat = index_lattice(f)
    v = primitive_multiple(fourier_index_vector(f, n, l))
    return lat.norm(v), lattice_div(v, lat), v


# ---------------------------------------------------------------------------
# theta blocks with lattice index
# ---------------------------------------------------------------------------


def _dm_basis(m: int) -> list[list[int]]:
    if m == 1:
        return [[2]]
    rows = []
    for i in range(m - 1):
        r = [0] * m
        r[i], r[i + 1] = 1, -1
        rows.append(r)
    r = [0] * m
    r[m - 2], r[m - 1] = 1, 1
    rows.append(r)
    return rows


def dm_index(m: int) -> LatticeIndex:
    """D_m inside Z^m (Euclidean form); stored exponents are 2 * ambient exponents."""
    b = _dm_basis(m)
    gram = la.matmul(b, la.transpose(b))
    binv = la.inverse(b)
    coords = tuple(tuple(x / 2 for x in row) for row in binv)
    return LatticeIndex(IntegerLattice(gram, name=f"D{m}"), coords, f"D{m}")


def a2_index() -> LatticeIndex:
    """A2; stored exponents are 2 * coefficients on the fundamental weights."""
    g = [[2, -1], [-1, 2]]
    ginv = la.inverse(g)
    coords = tuple(tuple(x / 2 for x in row) for row in ginv)
    return LatticeIndex(IntegerLattice(g, name="A2"), coords, "A2")


def _theta_in(arity: int, direction: Sequence[int], prec: int) -> QRSeries:
    """theta(tau, <direction, z>) with doubled exponents in ``arity`` variables."""
    return map_exponents(theta(prec), [[2 * d for d in direction]])


@lru_cache(maxsize=None)
def theta_product_Dm(m: int, prec: int) -> JacobiFormSeries:
    """eta^(24-3m) theta(z_1) ... theta(z_m): weight 12 - m, index D_m."""
    if not 1 <= m <= 8:
        raise JacobiError("m must be in 1..8")
    s = eta_power(24 - 3 * m, prec, arity=m)
    for i in range(m):
        e = [0] * m
        e[i] = 1
        s = s * _theta_in(m, e, prec)
    return JacobiFormSeries(12 - m, dm_index(m), s.truncate(prec), "holomorphic",
                            f"eta^{24 - 3 * m} theta^{m}")


@lru_cache(maxsize=None)
def theta_product_A2(prec: int) -> JacobiFormSeries:
    """eta^15 theta(z_1) theta(z_2) theta(z_2 - z_1): weight 9, index A2."""
    s = eta_power(15, prec, arity=2)
    for d in ((1, 0), (0, 1), (-1, 1)):
        s = s * _theta_in(2, d, prec)
    return JacobiFormSeries(9, a2_index(), s.truncate(prec), "holomorphic", "eta^15 theta theta theta")


def hecke_tminus2(f: JacobiFormSeries) -> QRSeries:
    """f | T_-(2) = 2^(k-1) f(2 tau, 2 z) + sum_n a(2n, l) q^n r^l."""
    s = f.series
    if s.qpref:
        raise JacobiError("T_-(2) needs integral q-exponents")
    if s.rpref != (0,) * s.arity:
        raise JacobiError("T_-(2) needs integral stored exponents")
    doubled = map_exponents(s, [[2 * int(i == j) for j in range(s.arity)] for i in range(s.arity)])
    part1 = q_dilate(doubled, 2)
    if f.weight >= 1:
        part1 = part1.scale(2 ** (f.weight - 1))
    else:
        raise JacobiError("T_-(2) is implemented for positive weight")
    return part1 + q_section(s, 2)


def borcherds_input(f: JacobiFormSeries) -> JacobiFormSeries:
    """Weight-0 form -(f | T_-(2)) / f whose singular part gives the lift's divisor."""
    psi = -series_divexact(hecke_tminus2(f), f.series)
    return JacobiFormSeries(0, f.index, psi, "weak", f"-({f.name})|T_-(2)/({f.name})")


# ---------------------------------------------------------------------------
# named forms for the command line
# ---------------------------------------------------------------------------


def named_form(name: str, prec: int, m: int = 3) -> JacobiFormSeries:
    if name.startswith("phi0") and name[-1] in "1234":
        return weak_generator(int(name[-1]), prec)
    if name == "phim21":
        return phi_m2_1(prec)
    if name.startswith("e4t") and name[-1] in "123":
        return jacobi_eisenstein(int(name[-1]), prec)
    if name == "xi021":
        return build_xi021(prec)
    if name == "dm-product":
        return theta_product_Dm(m, prec)
    if name == "a2-product":
        return theta_product_A2(prec)
    raise JacobiError(f"unknown form {name!r}")


FORM_NAMES = ("phi01", "phi02", "phi03", "phi04", "phim21", "e4t1", "e4t2", "e4t3", "xi021",
              "dm-product", "a2-product")
