"""Even integral lattices, discriminant forms, reflections and short vectors.

Vectors are coordinate vectors in the lattice basis; elements of the dual
lattice are rational coordinate vectors x with G x integral.
"""

from __future__ import annotations

import itertools
import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg as la

DEFAULT_MAX_ENUM = 10 ** 7


class LatticeError(ValueError):
    pass


class EnumerationCapExceeded(RuntimeError):
    pass


def max_enum() -> int:
    return int(os.environ.get("REFLEKT_MAX_ENUM", DEFAULT_MAX_ENUM))


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IntegerLattice:
    gram: tuple
    name: str = ""
    even: bool = True
    # True when the lattice was built with two unscaled copies of U as
    # orthogonal summands (precondition of the Eichler criterion).
    splits_2u: bool = False

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("Gram matrix must be symmetric")
        if self.even and any(g[i][i] % 2 for i in range(n)):
            raise LatticeError(f"odd diagonal in {self.name or 'lattice'} but an even lattice was demanded")
        if n and la.det(g) == 0:
            raise LatticeError("degenerate Gram matrix")

    def __repr__(self):
        return f"IntegerLattice({self.name or self.gram})"

    def __eq__(self, other):
        return isinstance(other, IntegerLattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return int(la.det(self.gram))

    @cached_property
    def gram_inverse(self) -> list:
        return la.inverse(self.gram)

    def inner(self, u: Sequence, v: Sequence):
        return la.bilinear(self.gram, u, v)

    def norm(self, v: Sequence):
        return self.inner(v, v)

    def contains(self, v: Sequence) -> bool:
        return la.is_integral(v)

    def in_dual(self, v: Sequence) -> bool:
        return la.is_integral(la.matvec(self.gram, v))

    def signature(self) -> tuple[int, int]:
        return signature(self)

    def discriminant_group(self) -> "DiscriminantGroup":
        return discriminant_group(self)


def signature(lat: IntegerLattice) -> tuple[int, int]:
    """(p, q) by exact rational congruence diagonalisation."""
    diag = la.symmetric_diagonal(lat.gram)
    if any(d == 0 for d in diag):
        raise LatticeError("degenerate Gram matrix")
    return sum(1 for d in diag if d > 0), sum(1 for d in diag if d < 0)


def cartan_matrix(label: str) -> list[list[int]]:
    """Gram matrix of the simple roots (Bourbaki numbering)."""
    m = re.fullmatch(r"([ADE])(\d+)", label)
    if not m:
        raise LatticeError(f"unknown root lattice {label!r}")
    kind, n = m.group(1), int(m.group(2))
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2

    def link(i, j):
        g[i][j] = g[j][i] = -1

    if kind == "A":
        if n < 1:
            raise LatticeError("A_n needs n >= 1")
        for i in range(n - 1):
            link(i, i + 1)
    elif kind == "D":
        if n < 2:
            raise LatticeError("D_n needs n >= 2")
        if n == 2:
            return g  # D2 = 2A1
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    else:
        if n not in (6, 7, 8):
            raise LatticeError("E_n needs n in 6..8")
        link(0, 2)
        link(1, 3)
        link(2, 3)
        for i in range(3, n - 1):
            link(i, i + 1)
    return g


def dynkin_edges(label: str) -> list[tuple[int, int]]:
    g = cartan_matrix(label)
    n = len(g)
    return [(i, j) for i in range(n) for j in range(i + 1, n) if g[i][j]]


def root_lattice(label: str) -> IntegerLattice:
    return IntegerLattice(cartan_matrix(label), name=label)


def hyperbolic_plane() -> IntegerLattice:
    return IntegerLattice([[0, 1], [1, 0]], name="U")


def rank_one(m: int) -> IntegerLattice:
    return IntegerLattice([[m]], name=f"<{m}>", even=m % 2 == 0)


def rescale(lat: IntegerLattice, m: int) -> IntegerLattice:
    even = lat.even or m % 2 == 0
    g = [[m * x for x in row] for row in lat.gram]
    return IntegerLattice(g, name=f"{lat.name}({m})", even=even, splits_2u=lat.splits_2u and m in (1, -1))


def direct_sum(*lats: IntegerLattice, name: str | None = None) -> IntegerLattice:
    g = la.block_diag(*[l.gram for l in lats])
    return IntegerLattice(g, name=name or "+".join(l.name for l in lats),
                          even=all(l.even for l in lats),
                          splits_2u=any(l.splits_2u for l in lats))


def lattice_L(S: IntegerLattice) -> IntegerLattice:
    """2U + S(-1) for a positive definite S."""
    two_u = direct_sum(hyperbolic_plane(), hyperbolic_plane(), name="2U")
    g = la.block_diag(two_u.gram, [[-x for x in row] for row in S.gram])
    return IntegerLattice(g, name=f"2U+{S.name}(-1)", even=True, splits_2u=True)


def paramodular_lattice(t: int) -> IntegerLattice:
    """L_t = 2U + <-2t> with the Gram matrix S_t (basis e, e', s, f', f)."""
    g = [[0, 0, 0, 0, 1],
         [0, 0, 0, 1, 0],
         [0, 0, -2 * t, 0, 0],
         [0, 1, 0, 0, 0],
         [1, 0, 0, 0, 0]]
    return IntegerLattice(g, name=f"2U+<{-2 * t}>", splits_2u=True)


_TERM = re.compile(r"(\d*)(U|[ADE]\d+|<-?\d+>)(?:\((-?\d+)\))?")


def parse_lattice(spec: str) -> IntegerLattice:
    """Parse the mini-language ``2U+A7(-1)``, ``2U(3)+A2(-1)``, ``2U+<-42>``."""
    text = re.sub(r"\s+", "", spec)
    if not text:
        raise LatticeError("empty lattice spec")
    parts = []
    plain_u = 0
    for term in text.split("+"):
        m = _TERM.fullmatch(term)
        if not m:
            raise LatticeError(f"cannot parse lattice term {term!r}")
        mult = int(m.group(1)) if m.group(1) else 1
        if mult < 1:
            raise LatticeError(f"bad multiplicity in {term!r}")
        base = m.group(2)
        scale = int(m.group(3)) if m.group(3) else 1
        if scale == 0:
            raise LatticeError("rescaling by 0")
        if base == "U":
            lat = hyperbolic_plane()
            if scale == 1:
                plain_u += mult
        elif base.startswith("<"):
            lat = IntegerLattice([[int(base[1:-1])]], name=base, even=False)
        else:
            lat = root_lattice(base)
        if scale != 1:
            lat = rescale(lat, scale)
        parts.extend([lat] * mult)
    out = direct_sum(*parts, name=text)
    if any(out.gram[i][i] % 2 for i in range(out.rank)):
        raise LatticeError(f"{text} is not even")
    return IntegerLattice(out.gram, name=text, even=True, splits_2u=plain_u >= 2)


# ---------------------------------------------------------------------------
# discriminant groups
# ---------------------------------------------------------------------------


@dataclass
class DiscriminantGroup:
    lattice: IntegerLattice
    invariant_factors: list[int]
    generators: list[list[Fraction]]  # dual vectors in lattice coordinates
    _u: list = field(repr=False)
    _slots: list[int] = field(repr=False)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    def describe(self) -> str:
        if not self.invariant_factors:
            return "trivial"
        return "x".join(f"C{d}" for d in self.invariant_factors)

    def class_of(self, x: Sequence) -> tuple[int, ...]:
        """Residue vector of a dual-lattice element x (lattice coordinates)."""
        y = la.matvec(self.lattice.gram, x)
        if not la.is_integral(y):
            raise LatticeError("vector is not in the dual lattice")
        uy = la.matvec(self._u, la.to_int(y))
        return tuple(uy[i] % d for i, d in zip(self._slots, self.invariant_factors))

    def element(self, residues: Sequence[int]) -> list[Fraction]:
        n = self.lattice.rank
        x = [Fraction(0)] * n
        for a, g in zip(residues, self.generators):
            x = [xi + a * gi for xi, gi in zip(x, g)]
        return x

    def q(self, residues: Sequence[int]) -> Fraction:
        """Discriminant quadratic form value x^2 mod 2."""
        x = self.element(residues)
        return Fraction(self.lattice.norm(x)) % 2

    def elements(self, cap: int | None = None) -> Iterable[tuple[int, ...]]:
        if cap is not None and self.order > cap:
            raise EnumerationCapExceeded(f"discriminant group of order {self.order} exceeds cap {cap}")
        return itertools.product(*[range(d) for d in self.invariant_factors])

    def form_profile(self) -> list[tuple[int, Fraction, int]]:
        """Sorted counts of (element order, q value): an isometry invariant."""
        counts: dict = {}
        for a in self.elements(cap=max_enum()):
            order = 1
            for ai, d in zip(a, self.invariant_factors):
                order = math.lcm(order, d // math.gcd(ai, d))
            key = (order, self.q(a))
            counts[key] = counts.get(key, 0) + 1
        return sorted((o, qv, c) for (o, qv), c in counts.items())


def discriminant_group(lat: IntegerLattice) -> DiscriminantGroup:
    diag, u, _ = la.smith_normal_form(lat.gram)
    uinv = la.inverse(u)
    ginv = lat.gram_inverse
    factors, gens, slots = [], [], []
    for i, d in enumerate(diag):
        d = abs(d)
        if d > 1:
            y = [row[i] for row in uinv]
            gens.append(la.matvec(ginv, y))
            factors.append(d)
            slots.append(i)
    return DiscriminantGroup(lat, factors, gens, u, slots)


# ---------------------------------------------------------------------------
# vectors: div, reflections, Eichler invariants
# ---------------------------------------------------------------------------


def div(v: Sequence, lat: IntegerLattice) -> int:
    """Positive generator of the ideal (v, L)."""
    w = la.matvec(lat.gram, v)
    if not any(w):
        raise LatticeError("div of the zero vector")
    if not la.is_integral(w):
        raise LatticeError("(v, L) is not integral")
    return la.vector_gcd(la.to_int(w))


def primitive_multiple(v: Sequence) -> list[int]:
    """Smallest positive rational multiple of v that is a primitive integral vector."""
    d = la.lcm_denominators(v)
    w = [int(Fraction(x) * d) for x in v]
    g = la.vector_gcd(w)
    if g == 0:
        raise LatticeError("zero vector")
    return [x // g for x in w]


@dataclass
class Reflection:
    vector: list
    matrix: list  # acts on column coordinate vectors
    integral: bool
    stable: bool
    discriminant_action: list | None  # images of the generators, as residue vectors

    def apply(self, x: Sequence) -> list:
        return la.matvec(self.matrix, x)


def reflection(r: Sequence, lat: IntegerLattice) -> Reflection:
    """sigma_r(l) = l - 2 (r, l) / (r, r) r."""
    rr = Fraction(lat.norm(r))
    if rr == 0:
        raise LatticeError("reflection in an isotropic vector")
    gr = la.matvec(lat.gram, r)  # (r, e_j)
    n = lat.rank
    mat = [[Fraction(int(i == j)) - 2 * Fraction(r[i]) * gr[j] / rr for j in range(n)] for i in range(n)]
    integral = la.is_integral(mat)
    action = None
    stable = False
    if integral:
        dg = discriminant_group(lat)
        action = [dg.class_of(la.matvec(mat, g)) for g in dg.generators]
        ident = [tuple(int(i == j) for j in range(len(dg.generators))) for i in range(len(dg.generators))]
        stable = action == ident
    return Reflection(list(r), mat, integral, stable, action)


def discriminant_action_is_minus_identity(refl: Reflection, lat: IntegerLattice) -> bool:
    dg = discriminant_group(lat)
    k = len(dg.generators)
    minus = [tuple((-int(i == j)) % dg.invariant_factors[j] for j in range(k)) for i in range(k)]
    return refl.discriminant_action == minus


def eichler_invariants(v: Sequence[int], lat: IntegerLattice) -> tuple[int, int, tuple]:
    """(v^2, div(v), class of v/div(v) in L^/L) for a primitive v in L."""
    if not la.is_integral(v):
        raise LatticeError("vector is not in the lattice")
    v = la.to_int(v)
    if la.vector_gcd(v) != 1:
        raise LatticeError("vector is not primitive")
    d = div(v, lat)
    dg = discriminant_group(lat)
    cls = dg.class_of([Fraction(x, d) for x in v])
    return lat.norm(v), d, cls


def eichler_equivalent(u: Sequence[int], v: Sequence[int], lat: IntegerLattice) -> bool:
    """Orbit equality under the stable orthogonal group via the Eichler criterion."""
    if not lat.splits_2u:
        raise LatticeError("the Eichler criterion needs a lattice containing 2U")
    return eichler_invariants(u, lat) == eichler_invariants(v, lat)


# ---------------------------------------------------------------------------
# short vectors (Fincke-Pohst, exact)
# ---------------------------------------------------------------------------


def _ldl(gram: Sequence[Sequence]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """x^T G x = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise LatticeError("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= mu[i][j] * a[i][k]
                a[k][j] = a[j][k]
    return d, mu


def short_vectors(gram: Sequence[Sequence], bound, *, cap: int | None = None,
                  include_zero: bool = False) -> list[tuple[tuple[int, ...], Fraction]]:
    """All nonzero x with 0 < |x^T G x| <= bound for a definite Gram matrix G.

    Negative definite input is handled by negation.  Returns (vector, norm)
    pairs sorted by (|norm|, vector); the norm carries the sign of G.
    """
    bound = Fraction(bound)
    g = [[Fraction(x) for x in row] for row in gram]
    n = len(g)
    sign = 1
    if n and g[0][0] < 0:
        sign = -1
        g = [[-x for x in row] for row in g]
    d, mu = _ldl(g)
    cap = max_enum() if cap is None else cap
    out = []
    x = [0] * n
    visited = 0

    def rec(i: int, budget: Fraction):
        nonlocal visited
        if i < 0:
            norm = bound - budget
            if norm or include_zero:
                out.append((tuple(x), sign * norm))
            return
        c = -sum(mu[i][j] * x[j] for j in range(i + 1, n))
        rad2 = budget / d[i]
        rad = math.sqrt(float(rad2)) if rad2 > 0 else 0.0
        lo = math.floor(float(c) - rad) - 1
        hi = math.ceil(float(c) + rad) + 1
        for xi in range(lo, hi + 1):
            t = xi - c
            used = d[i] * t * t
            if used <= budget:
                visited += 1
                if visited > cap:
                    raise EnumerationCapExceeded(f"short-vector enumeration exceeded {cap} candidates")
                x[i] = xi
                rec(i - 1, budget - used)
        x[i] = 0

    rec(n - 1, bound)
    out.sort(key=lambda p: (abs(p[1]), p[0]))
    return out


def roots(lat_or_gram) -> list[tuple[int, ...]]:
    g = lat_or_gram.gram if isinstance(lat_or_gram, IntegerLattice) else lat_or_gram
    return [v for v, nv in short_vectors(g, 2) if abs(nv) == 2]


def min_norm_per_class(S: IntegerLattice, *, cap: int = 10 ** 5) -> dict[tuple, Fraction]:
    """Minimal norm of each class of S^/S, S positive definite."""
    if signature(S)[1] != 0:
        raise LatticeError("min_norm_per_class needs a positive definite lattice")
    dg = discriminant_group(S)
    if dg.order > cap:
        raise EnumerationCapExceeded(f"discriminant group of order {dg.order} exceeds cap {cap}")
    ginv = S.gram_inverse
    best: dict[tuple, Fraction] = {tuple(0 for _ in dg.invariant_factors): Fraction(0)}
    bound = Fraction(2)
    while len(best) < dg.order:
        best = {tuple(0 for _ in dg.invariant_factors): Fraction(0)}
        for a, nv in short_vectors(ginv, bound):
            # a are dual-basis coordinates, so G x = a
            uy = la.matvec(dg._u, list(a))
            cls = tuple(uy[i] % dd for i, dd in zip(dg._slots, dg.invariant_factors))
            if cls not in best or nv < best[cls]:
                best[cls] = nv
        bound *= 2
    return best


def minimal_dual_norm(S: IntegerLattice) -> Fraction:
    """Smallest norm of a nonzero vector of S^ (S positive definite)."""
    bound = Fraction(1)
    while True:
        sv = short_vectors(S.gram_inverse, bound)
        if sv:
            return min(nv for _, nv in sv)
        bound *= 2


def discriminant_forms_match(a: IntegerLattice, b: IntegerLattice) -> bool:
    """Genus-level comparison: signature, determinant, invariant factors, q-profile."""
    da, db = discriminant_group(a), discriminant_group(b)
    return (signature(a) == signature(b) and a.det == b.det
            and da.invariant_factors == db.invariant_factors
            and da.form_profile() == db.form_profile())


def dual_lattice_rescaled(lat: IntegerLattice, m: int) -> IntegerLattice:
    """L^(m): the dual lattice (dual basis) with the form multiplied by m."""
    g = [[m * x for x in row] for row in lat.gram_inverse]
    if not la.is_integral(g):
        raise LatticeError(f"L^({m}) is not integral")
    return IntegerLattice(la.to_int(g), name=f"{lat.name}^({m})")
