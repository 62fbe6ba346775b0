"""Divisor bookkeeping and uniruledness / Kodaira-dimension verdicts.

A :class:`Certificate` records what was checked by exact computation and
which facts are taken on trust; it is not a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import jacobi as J
from . import niemeier as nm
from .lattice import (dual_lattice_rescaled, discriminant_forms_match,
                      discriminant_action_is_minus_identity, eichler_invariants,
                      paramodular_lattice, parse_lattice, primitive_multiple, reflection, div)
from . import linalg as la


class CertifyError(ValueError):
    pass


ORBIT = "orthogonal-orbit"
HUMBERT = "humbert"


@dataclass
class DivisorDatum:
    kind: str
    mult: int
    D: int | None = None
    l: int | None = None
    t: int | None = None
    norm: int | None = None
    div: int | None = None
    reflective: bool | None = None
    vector: list | None = None

    def __post_init__(self):
        if self.kind not in (ORBIT, HUMBERT):
            raise CertifyError(f"unknown divisor kind {self.kind!r}")
        if not isinstance(self.mult, int) or self.mult < 1:
            raise CertifyError("divisor multiplicity must be a positive integer")
        if self.kind == HUMBERT and (self.D is None or self.D <= 0):
            raise CertifyError("a Humbert divisor needs D > 0")
        if self.kind == ORBIT and self.norm is not None and self.norm >= 0:
            raise CertifyError("an orthogonal-orbit divisor needs a negative norm")

    def to_json(self) -> dict:
        return {"kind": self.kind, "D": self.D, "l": self.l, "norm": self.norm, "div": self.div,
                "mult": self.mult, "reflective": self.reflective}

    @classmethod
    def from_json(cls, data: dict) -> "DivisorDatum":
        if not isinstance(data, dict):
            raise CertifyError("each divisor must be a JSON object")
        unknown = set(data) - {"kind", "D", "l", "t", "norm", "div", "mult", "reflective"}
        if unknown:
            raise CertifyError(f"unknown divisor fields: {sorted(unknown)}")
        if "mult" not in data:
            raise CertifyError("divisor without 'mult'")
        kind = data.get("kind") or (HUMBERT if "D" in data else ORBIT)
        return cls(kind=kind, mult=data["mult"], D=data.get("D"), l=data.get("l"), t=data.get("t"),
                   norm=data.get("norm"), div=data.get("div"), reflective=data.get("reflective"))


# ---------------------------------------------------------------------------
# paramodular Humbert divisors
# ---------------------------------------------------------------------------


def humbert_reflective(t: int, n: int, l: int, a: int) -> DivisorDatum:
    """H_D(l) with multiplicity a; ``reflective`` is D | gcd(4t, 2l)."""
    if a == 0:
        raise CertifyError("zero Fourier coefficient carries no divisor")
    D = l * l - 4 * t * n
    if D <= 0:
        raise CertifyError(f"(n, l) = ({n}, {l}) has D = {D} <= 0: not a divisor index")
    ok = math.gcd(4 * t, 2 * l) % D == 0
    return DivisorDatum(HUMBERT, abs(a), D=D, l=l, t=t, reflective=ok)


def humbert_to_orbit(t: int, n: int, l: int) -> DivisorDatum:
    """Orbit data (norm, div) of the primitive vector of L_t attached to (n, l)."""
    if l * l - 4 * t * n <= 0:
        raise CertifyError("not a divisor index")
    lat = paramodular_lattice(t)
    v = primitive_multiple([Fraction(0), Fraction(n), Fraction(l, 2 * t), Fraction(1), Fraction(0)])
    refl = reflection(v, lat)
    return DivisorDatum(ORBIT, 1, norm=lat.norm(v), div=div(v, lat), reflective=refl.integral, vector=v)


def borcherds_lift_weight(f: J.JacobiFormSeries) -> int:
    """a(0, 0) / 2 of a weight-0 input."""
    if f.weight != 0:
        raise CertifyError("the Borcherds input must have weight 0")
    zero = (0,) * f.series.arity
    c = f.series.coefficient(0)[zero]
    if c % 2:
        raise CertifyError(f"a(0,0) = {c} is odd")
    return c // 2


# ---------------------------------------------------------------------------
# decision logic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    reflective: bool
    strongly_reflective: bool
    m: int


def classify(divisors) -> Classification:
    divisors = list(divisors)
    if not divisors:
        raise CertifyError("empty divisor: a non-constant modular form has m > 0 (Koecher)")
    if any(d.reflective is None for d in divisors):
        raise CertifyError("every divisor needs a reflection flag")
    refl = all(d.reflective for d in divisors)
    m = max(d.mult for d in divisors)
    return Classification(refl, refl and m == 1, m)


UNIRULED = "uniruled"
KODAIRA_ZERO = "kodaira-zero"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    label: str
    reason: str
    group_note: str | None = None


def verdict(k: int, n: int, m: int, cusp: bool | None = None, strongly_reflective: bool = False) -> Verdict:
    if n < 3:
        raise CertifyError("dimension n must be at least 3")
    if k < 1 or m < 1:
        raise CertifyError("weight and multiplicity must be positive")
    if k > m * n:
        return Verdict(UNIRULED, f"k = {k} > m*n = {m * n}")
    if strongly_reflective and m == 1 and k == n:
        if cusp is None:
            return Verdict(INCONCLUSIVE, "k = n but the cusp flag is unknown")
        if not cusp:
            return Verdict(UNIRULED, f"k = n = {n}, strongly reflective, not a cusp form (kappa = -infinity)")
        return Verdict(KODAIRA_ZERO, f"k = n = {n}, strongly reflective cusp form",
                       "Gamma_chi = ker(chi * det)")
    return Verdict(INCONCLUSIVE, f"k = {k} <= m*n = {m * n}")


@dataclass
class Certificate:
    lattice: str
    group: str
    weight: int
    dimension: int
    divisors: list[DivisorDatum]
    m: int
    cusp: bool | None
    verdict: str
    checked: list[str] = field(default_factory=list)
    trusted: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "lattice": self.lattice,
            "group": self.group,
            "weight": self.weight,
            "dimension": self.dimension,
            "divisors": [d.to_json() for d in self.divisors],
            "m": self.m,
            "cusp": self.cusp,
            "verdict": self.verdict,
            "checked": self.checked,
            "trusted": self.trusted,
        }


TRUSTED_LIFT = "the Borcherds/Gritsenko lift of the input is modular for the stated group"
TRUSTED_CHARACTER = "the character of the lift has finite order (recorded, not verified)"


def certify(weight: int, dim: int, divisors, *, cusp: bool | None = None, lattice: str = "",
            group: str = "") -> Certificate:
    """Generic certificate from user-supplied divisor data."""
    divs = list(divisors)
    for d in divs:
        if d.reflective is None:
            d.reflective = True
    cls = classify(divs)
    v = verdict(weight, dim, cls.m, cusp, cls.strongly_reflective)
    checked = [f"m = max multiplicity = {cls.m}", v.reason]
    trusted = ["divisor data as supplied", "unflagged divisors are reflective"]
    if v.group_note:
        checked.append(f"group: {v.group_note}")
    return Certificate(lattice, group, weight, dim, divs, cls.m, cusp, v.label, checked, trusted)


# ---------------------------------------------------------------------------
# pipelines
# ---------------------------------------------------------------------------


def xi21_pipeline(prec: int = J.DEFAULT_XI_PREC) -> Certificate:
    """Weight-12 reflective form on L_21 from the index-21 input, end to end."""
    t = 21
    xi = J.build_xi021(prec)
    sing = J.singular_part(xi)
    checked = [f"xi_0,21 built to O(q^{xi.prec})",
               f"singular part complete: every class has a representative with n < {t}/4"]
    lat = paramodular_lattice(t)
    divisors = []
    for c in sing:
        if c.a <= 0:
            raise CertifyError(f"singular coefficient a({c.n},{c.l[0]}) = {c.a} is not positive")
        h = humbert_reflective(t, c.n, c.l[0], c.a)
        o = humbert_to_orbit(t, c.n, c.l[0])
        refl = reflection(o.vector, lat)
        divisors.append(DivisorDatum(HUMBERT, h.mult, D=h.D, l=h.l, t=t, norm=o.norm, div=o.div,
                                     reflective=bool(h.reflective and refl.integral), vector=o.vector))
        action = "trivial" if refl.stable else (
            "-id" if discriminant_action_is_minus_identity(refl, lat) else "non-trivial")
        checked.append(f"H_{h.D}({h.l}) mult {h.mult}: D | gcd(4t, 2l) = {h.reflective}; "
                       f"v^2 = {o.norm}, div {o.div}; sigma_v integral = {refl.integral}; "
                       f"action on discriminant: {action}")
    checked.append("all singular coefficients positive")
    k = borcherds_lift_weight(xi)
    checked.append(f"lift weight a(0,0)/2 = {k}")
    cls = classify(divisors)
    v = verdict(k, 3, cls.m, None, cls.strongly_reflective)
    checked.append(f"reflective = {cls.reflective}, strongly reflective = {cls.strongly_reflective}")
    checked.append(v.reason)
    return Certificate(lat.name, "O+(L_21)", k, 3, divisors, cls.m, None, v.label, checked,
                       [TRUSTED_LIFT, TRUSTED_CHARACTER])


def qpb_certificate(S: str, niemeier_name: str | None = None) -> Certificate:
    """Quasi-pullback of Phi_12 to L(S) with all -2-vector divisors of multiplicity 1."""
    comps = nm.parse_root_sum(S)
    key = nm.format_root_sum(comps)
    model = niemeier_name or nm.THEOREM_MODELS.get(key)
    if model is None:
        raise CertifyError(f"no default Niemeier model for {S}")
    rep = nm.quasi_pullback(comps, model)
    checked = [f"embedding {rep.embedding.describe()} in N({rep.R.name})",
               f"N = {rep.N}, weight 12 + N = {rep.weight}"] + rep.trace.steps + rep.notes
    divisors = [DivisorDatum(ORBIT, 1, norm=-2, div=1, reflective=rep.strongly_reflective)]
    cls = classify(divisors)
    v = verdict(rep.weight, rep.dimension, cls.m, rep.cusp, cls.strongly_reflective)
    checked.append(v.reason)
    return Certificate(f"2U+{key}(-1)", "O~+(L)", rep.weight, rep.dimension, divisors, cls.m,
                       rep.cusp, v.label, checked, [TRUSTED_LIFT, TRUSTED_CHARACTER,
                                                    "primitivity of the embedding in II_2,26"])


def _no_isotropic_coefficients(f: J.JacobiFormSeries) -> bool:
    return all(f.hyperbolic_norm(n, l) != 0 for n, poly in f.series.items() for l in poly.terms)


THETA_BLOCKS = {
    "D3": ("SO~+(L(D3))", 13),
    "A2": ("O~+(2U(3)+A2(-1))", 13),
    "2A1": ("<SO~+(L(2A1)), sigma_-4>", 13),
}


def theta_block_certificate(name: str, prec: int | None = None) -> Certificate:
    """Strongly reflective theta-block lift with the simplest divisor."""
    if name not in THETA_BLOCKS:
        raise CertifyError(f"unknown theta block {name!r}; choose from {sorted(THETA_BLOCKS)}")
    group, default_prec = THETA_BLOCKS[name]
    p = prec or default_prec
    phi = J.theta_product_A2(p) if name == "A2" else J.theta_product_Dm(3 if name == "D3" else 2, p)
    psi = J.borcherds_input(phi)
    k = borcherds_lift_weight(psi)
    lat = J.index_lattice(psi)
    sing = J.singular_part(psi, reduced=False)
    checked = [f"input weight {phi.weight}, Borcherds input psi = -(phi|T_-(2))/phi to O(q^{psi.prec})",
               f"lift weight a(0,0)/2 = {k}"]
    dg = lat.discriminant_group()
    invariants = set()
    orbit_reps = {}
    for c in sing:
        nv, d, v = J.orbit_data(psi, c.n, c.l)
        cls = eichler_invariants(v, lat)[2]
        neg = tuple((-x) % f for x, f in zip(cls, dg.invariant_factors))
        invariants.add((nv, d, min(cls, neg)))
        orbit_reps.setdefault((nv, d), (c, v))
    checked.append(f"{len(sing)} singular coefficients in {len(invariants)} Eichler class(es) up to sign")
    divisors = []
    for (nv, d), (c, v) in sorted(orbit_reps.items()):
        refl = reflection(v, lat)
        minus = refl.integral and discriminant_action_is_minus_identity(refl, lat)
        if name == "A2":
            # sigma_v read on L^(3): v / 3 is a -2-vector there
            lat3 = dual_lattice_rescaled(lat, 3)
            w = primitive_multiple(la.matvec(lat.gram, [Fraction(x, 3) for x in v]))
            r3 = reflection(w, lat3)
            in_group = r3.integral and r3.stable
            checked.append(f"v/3 has norm {lat3.norm(w)} in L^(3); sigma stable there = {in_group}")
            model = parse_lattice("2U(3)+A2(-1)")
            checked.append(f"L^(3) and 2U(3)+A2(-1) share genus invariants = {discriminant_forms_match(lat3, model)}")
        elif name == "2A1":
            extra = reflection([0, 0, 0, 0, 1, 1], lat)  # 2 e_1 = b_1 + b_2 in D2
            in_group = refl.integral and (refl.stable or minus or refl.discriminant_action == extra.discriminant_action)
            checked.append(f"sigma_(2e1) acts non-trivially on the discriminant: {not extra.stable}")
        else:
            in_group = refl.integral and (refl.stable or minus)
        checked.append(f"divisor v^2 = {nv}, div {d}, mult {c.a}: reflection in group = {in_group}")
        divisors.append(DivisorDatum(ORBIT, c.a, norm=nv, div=d, reflective=in_group, vector=v))
    cls = classify(divisors)
    dim = 2 + phi.index.lattice.rank
    cusp = _no_isotropic_coefficients(phi)
    checked.append(f"no coefficient of hyperbolic norm 0 below O(q^{phi.prec}): {cusp}")
    v = verdict(k, dim, cls.m, cusp, cls.strongly_reflective)
    checked.append(v.reason)
    lattice_name = "2U(3)+A2(-1)" if name == "A2" else f"2U+{name}(-1)"
    return Certificate(lattice_name, group, k, dim, divisors, cls.m, cusp, v.label, checked,
                       [TRUSTED_LIFT, TRUSTED_CHARACTER, "divisor read from the singular part of psi",
                        "cusp flag extrapolated from the stored precision"])
