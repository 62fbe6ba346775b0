"""Exact truncated q-series with Laurent-polynomial coefficients.

A :class:`QRSeries` stands for

    q^(qpref/24) * prod_i r_i^(rpref_i/2) * sum_{k >= val} c_k(r) q^k  + O(q^prec)

where every ``c_k`` is a :class:`LaurentPoly` with integer coefficients and
integral exponents.  Fractional powers of q and r only ever live in the two
prefactors; they are kept normalised (``0 <= qpref < 24``, ``rpref_i`` in
{0, 1}) so that two series with the same fractional part are always
directly comparable.

``prec is None`` marks an exact (finitely supported) series.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

MAX_ARITY = 8


class SeriesError(ValueError):
    pass


class DivisionError(SeriesError):
    pass


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


class LaurentPoly:
    """Integer Laurent polynomial in ``arity`` variables (sparse)."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Mapping[tuple, int] | None = None):
        if not 0 <= arity <= MAX_ARITY:
            raise SeriesError(f"arity {arity} outside 0..{MAX_ARITY}")
        self.arity = arity
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    e = tuple(e)
                    if len(e) != arity:
                        raise SeriesError(f"exponent {e} does not have arity {arity}")
                    clean[e] = int(c)
        self.terms = clean

    @classmethod
    def _raw(cls, arity: int, terms: dict) -> "LaurentPoly":
        p = object.__new__(cls)
        p.arity = arity
        p.terms = terms
        return p

    @classmethod
    def constant(cls, arity: int, c: int = 1) -> "LaurentPoly":
        return cls._raw(arity, {(0,) * arity: int(c)} if c else {})

    @classmethod
    def monomial(cls, exps: Sequence[int], c: int = 1) -> "LaurentPoly":
        exps = tuple(int(e) for e in exps)
        return cls._raw(len(exps), {exps: int(c)} if c else {})

    @classmethod
    def zero(cls, arity: int) -> "LaurentPoly":
        return cls._raw(arity, {})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == ({(0,) * self.arity: other} if other else {})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)})"

    def __getitem__(self, exps) -> int:
        if isinstance(exps, int):
            exps = (exps,)
        return self.terms.get(tuple(exps), 0)

    def __neg__(self):
        return LaurentPoly._raw(self.arity, {e: -c for e, c in self.terms.items()})

    def _check(self, other: "LaurentPoly"):
        if self.arity != other.arity:
            raise SeriesError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.arity, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.arity, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.arity, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero(self.arity)
            return LaurentPoly._raw(self.arity, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        _mul_into(out, self.terms, other.terms, self.arity)
        return LaurentPoly._raw(self.arity, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_unit():
                raise DivisionError("negative power of a non-unit Laurent polynomial")
            return self.unit_inverse() ** (-n)
        result = LaurentPoly.constant(self.arity, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_unit(self) -> bool:
        return len(self.terms) == 1 and next(iter(self.terms.values())) in (1, -1)

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise DivisionError(f"{format_poly(self)} is not a unit")
        (e, c), = self.terms.items()
        return LaurentPoly._raw(self.arity, {tuple(-x for x in e): c})

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def divexact_int(self, d: int) -> "LaurentPoly":
        out = {}
        for e, c in self.terms.items():
            q, rem = divmod(c, d)
            if rem:
                raise DivisionError(f"coefficient {c} not divisible by {d}")
            out[e] = q
        return LaurentPoly._raw(self.arity, out)

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        exps = tuple(exps)
        return LaurentPoly._raw(self.arity, {_add_exp(e, exps): c for e, c in self.terms.items()})

    def leading_term(self) -> tuple[tuple, int]:
        e = max(self.terms)
        return e, self.terms[e]

    def degree_box(self) -> tuple[tuple, tuple]:
        es = list(self.terms)
        lo = tuple(min(e[i] for e in es) for i in range(self.arity))
        hi = tuple(max(e[i] for e in es) for i in range(self.arity))
        return lo, hi

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient ``self / other``; raises :class:`DivisionError` otherwise.

        Lexicographic long division.  Every quotient exponent of an exact
        division lies in the box [lo(self) - lo(other), hi(self) - hi(other)],
        so leaving that box proves inexactness and guarantees termination.
        """
        self._check(other)
        if not other:
            raise DivisionError("division by zero polynomial")
        if not self:
            return LaurentPoly.zero(self.arity)
        if other.is_unit():
            return self * other.unit_inverse()
        (slo, shi), (olo, ohi) = self.degree_box(), other.degree_box()
        qlo = tuple(a - b for a, b in zip(slo, olo))
        qhi = tuple(a - b for a, b in zip(shi, ohi))
        oe, oc = other.leading_term()
        rem = dict(self.terms)
        quot = {}
        while rem:
            e = max(rem)
            c = rem[e]
            qe = tuple(a - b for a, b in zip(e, oe))
            qc, r = divmod(c, oc)
            if r or any(x < lo or x > hi for x, lo, hi in zip(qe, qlo, qhi)):
                raise DivisionError(f"{format_poly(other)} does not divide exactly")
            quot[qe] = qc
            for fe, fc in other.terms.items():
                te = _add_exp(qe, fe)
                v = rem.get(te, 0) - qc * fc
                if v:
                    rem[te] = v
                else:
                    rem.pop(te, None)
        return LaurentPoly._raw(self.arity, quot)

    def map_exponents(self, matrix: Sequence[Sequence], offset: Sequence | None = None,
                      arity: int | None = None) -> "LaurentPoly":
        """Apply the affine exponent map ``e -> (e + offset) @ matrix``.

        ``offset`` and ``matrix`` may be rational; every image must be integral.
        """
        new_arity = len(matrix[0]) if matrix else (arity or 0)
        off = tuple(offset) if offset is not None else (0,) * self.arity
        out: dict = {}
        for e, c in self.terms.items():
            src = [x + o for x, o in zip(e, off)]
            img = []
            for j in range(new_arity):
                v = sum(Fraction(s) * matrix[i][j] for i, s in enumerate(src))
                if v.denominator != 1:
                    raise SeriesError(f"exponent {tuple(src)} maps to non-integral {v}")
                img.append(int(v))
            img = tuple(img)
            v = out.get(img, 0) + c
            if v:
                out[img] = v
            else:
                out.pop(img, None)
        return LaurentPoly._raw(new_arity, out)


def _mul_into(acc: dict, a: dict, b: dict, arity: int, scale: int = 1) -> None:
    if arity == 1:
        for (ea,), ca in a.items():
            if scale != 1:
                ca *= scale
            for (eb,), cb in b.items():
                k = (ea + eb,)
                acc[k] = acc.get(k, 0) + ca * cb
        return
    for ea, ca in a.items():
        if scale != 1:
            ca *= scale
        for eb, cb in b.items():
            k = tuple(x + y for x, y in zip(ea, eb))
            acc[k] = acc.get(k, 0) + ca * cb


def _fmt_exp(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_poly(p: LaurentPoly, rpref: Sequence[int] | None = None) -> str:
    """Deterministic text form, terms in lexicographic exponent order."""
    if not p.terms:
        return "0"
    rpref = tuple(rpref) if rpref is not None else (0,) * p.arity
    names = ["r"] if p.arity == 1 else [f"r{i + 1}" for i in range(p.arity)]
    pieces = []
    for e in sorted(p.terms):
        c = p.terms[e]
        mons = []
        for name, x, h in zip(names, e, rpref):
            ex = Fraction(x) + Fraction(h, 2)
            if ex:
                mons.append(f"{name}^{_fmt_exp(ex)}")
        mon = "*".join(mons)
        a = abs(c)
        if mon:
            body = mon if a == 1 else f"{a}*{mon}"
        else:
            body = str(a)
        pieces.append((c < 0, body))
    neg, body = pieces[0]
    out = ("-" if neg else "") + body
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------


def _pmin(*values):
    finite = [v for v in values if v is not None]
    return min(finite) if finite else None


class QRSeries:
    """Truncated Laurent series in q over integer Laurent polynomials in r."""

    __slots__ = ("arity", "qpref", "rpref", "val", "coeffs", "prec")

    def __init__(self, arity: int, coeffs: Iterable, val: int = 0, prec: int | None = None,
                 qpref: int = 0, rpref: Sequence[int] | None = None):
        if not 0 <= arity <= MAX_ARITY:
            raise SeriesError(f"arity {arity} outside 0..{MAX_ARITY}")
        coeffs = [c if isinstance(c, LaurentPoly) else LaurentPoly.constant(arity, c) for c in coeffs]
        for c in coeffs:
            if c.arity != arity:
                raise SeriesError("coefficient arity mismatch")
        rpref = tuple(rpref) if rpref is not None else (0,) * arity
        if len(rpref) != arity:
            raise SeriesError("r-prefactor arity mismatch")
        if prec is not None:
            coeffs = coeffs[: max(prec - val, 0)]
        # q-prefactor normalisation
        shift, qpref = divmod(int(qpref), 24)
        val += shift
        if prec is not None:
            prec += shift
        # r-prefactor normalisation
        rshift = []
        rp = []
        for p in rpref:
            s, p = divmod(int(p), 2)
            rshift.append(s)
            rp.append(p)
        if any(rshift):
            coeffs = [c.shift(rshift) for c in coeffs]
        # strip leading and (for exact series) trailing zeros
        i = 0
        while i < len(coeffs) and not coeffs[i]:
            i += 1
        coeffs = coeffs[i:]
        val += i
        if prec is None:
            while coeffs and not coeffs[-1]:
                coeffs.pop()
            if not coeffs:
                val = 0
        elif not coeffs:
            val = prec
        self.arity = arity
        self.qpref = qpref
        self.rpref = tuple(rp)
        self.val = val
        self.coeffs = tuple(coeffs)
        self.prec = prec

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zero(cls, arity: int = 1, prec: int | None = None) -> "QRSeries":
        return cls(arity, [], 0, prec)

    @classmethod
    def one(cls, arity: int = 1, prec: int | None = None) -> "QRSeries":
        return cls(arity, [LaurentPoly.constant(arity, 1)], 0, prec)

    @classmethod
    def from_dict(cls, arity: int, data: Mapping[int, Mapping[tuple, int]], prec: int | None = None,
                  qpref: int = 0, rpref=None) -> "QRSeries":
        if not data:
            return cls(arity, [], 0, prec, qpref, rpref)
        lo = min(data)
        hi = max(data) if prec is None else prec
        coeffs = [LaurentPoly(arity, data.get(k, {})) for k in range(lo, hi)]
        if prec is None:
            coeffs.append(LaurentPoly(arity, data.get(hi, {})))
        return cls(arity, coeffs, lo, prec, qpref, rpref)

    # -- access ----------------------------------------------------------------

    def __repr__(self):
        return f"QRSeries(arity={self.arity}, qpref={self.qpref}/24, rpref={self.rpref}, val={self.val}, prec={self.prec})"

    def coefficient(self, k: int) -> LaurentPoly:
        """Laurent polynomial at stored q-exponent ``k`` (prefactor excluded)."""
        if self.prec is not None and k >= self.prec:
            raise SeriesError(f"q^{k} is beyond the known precision O(q^{self.prec})")
        i = k - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return LaurentPoly.zero(self.arity)

    __getitem__ = coefficient

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int:
        return self.val

    def items(self):
        """Yield (k, poly) for stored q-exponents with nonzero coefficient."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.val + i, c

    def known_exponents(self) -> range:
        end = self.prec if self.prec is not None else self.val + len(self.coeffs)
        return range(self.val, end)

    def truncate(self, prec: int) -> "QRSeries":
        newp = prec if self.prec is None else min(prec, self.prec)
        return QRSeries(self.arity, self.coeffs, self.val, newp, self.qpref, self.rpref)

    def with_prec(self, prec: int) -> "QRSeries":
        return self.truncate(prec)

    def prefactor(self) -> tuple[Fraction, tuple]:
        return Fraction(self.qpref, 24), tuple(Fraction(p, 2) for p in self.rpref)

    def __eq__(self, other):
        if not isinstance(other, QRSeries):
            return NotImplemented
        d = series_sub(self, other)
        return d.is_zero()

    __hash__ = None

    # -- arithmetic operators ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, int):
            return QRSeries(self.arity, [LaurentPoly.constant(self.arity, other)], 0, None)
        if isinstance(other, LaurentPoly):
            return QRSeries(other.arity, [other], 0, None)
        return other

    def __add__(self, other):
        return series_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return QRSeries(self.arity, [-c for c in self.coeffs], self.val, self.prec, self.qpref, self.rpref)

    def __sub__(self, other):
        return series_sub(self, self._coerce(other))

    def __rsub__(self, other):
        return series_sub(self._coerce(other), self)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return series_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            return self.divexact_int(other)
        return series_div(self, self._coerce(other))

    def __pow__(self, n: int):
        return series_pow(self, n)

    def scale(self, c: int) -> "QRSeries":
        return QRSeries(self.arity, [p * c for p in self.coeffs], self.val, self.prec, self.qpref, self.rpref)

    def divexact_int(self, d: int) -> "QRSeries":
        return QRSeries(self.arity, [p.divexact_int(d) for p in self.coeffs], self.val, self.prec,
                        self.qpref, self.rpref)

    def map_coefficients(self, fn) -> "QRSeries":
        return QRSeries(self.arity, [fn(p) for p in self.coeffs], self.val, self.prec, self.qpref, self.rpref)

    def dump(self) -> str:
        return dump_series(self)


def _align(a: QRSeries, b: QRSeries) -> tuple[QRSeries, QRSeries]:
    """Bring ``b`` onto ``a``'s prefactor (or vice versa) when one side is zero."""
    if a.arity != b.arity:
        raise SeriesError(f"arity mismatch: {a.arity} vs {b.arity}")
    if a.qpref == b.qpref and a.rpref == b.rpref:
        return a, b
    if b.is_zero():
        return a, _rebase_zero(b, a)
    if a.is_zero():
        return _rebase_zero(a, b), b
    raise SeriesError(
        f"irreconcilable prefactors q^{a.qpref}/24 r^{a.rpref}/2 vs q^{b.qpref}/24 r^{b.rpref}/2")


def _rebase_zero(z: QRSeries, like: QRSeries) -> QRSeries:
    if z.prec is None:
        return QRSeries(like.arity, [], 0, None, like.qpref, like.rpref)
    # O(q^(prec + qpref_z/24)) expressed against like's fractional part
    num = 24 * z.prec + z.qpref - like.qpref
    prec = -((-num) // 24)
    return QRSeries(like.arity, [], prec, prec, like.qpref, like.rpref)


def series_add(a: QRSeries, b: QRSeries) -> QRSeries:
    """Exact sum; precision is the smaller operand precision."""
    a, b = _align(a, b)
    prec = _pmin(a.prec, b.prec)
    vals = [x.val for x in (a, b) if x.coeffs]
    lo = min(vals) if vals else (prec if prec is not None else 0)
    hi = max(a.val + len(a.coeffs), b.val + len(b.coeffs))
    if prec is not None:
        hi = min(hi, prec)
        lo = min(lo, prec)
    coeffs = []
    for k in range(lo, hi):
        ca, cb = a.coefficient_unchecked(k), b.coefficient_unchecked(k)
        coeffs.append(ca + cb if ca and cb else (ca or cb))
    return QRSeries(a.arity, coeffs, lo, prec, a.qpref, a.rpref)


def _coefficient_unchecked(self: QRSeries, k: int) -> LaurentPoly:
    i = k - self.val
    if 0 <= i < len(self.coeffs):
        return self.coeffs[i]
    return LaurentPoly.zero(self.arity)


QRSeries.coefficient_unchecked = _coefficient_unchecked


def series_sub(a: QRSeries, b: QRSeries) -> QRSeries:
    return series_add(a, -b)


def series_mul(a: QRSeries, b: QRSeries) -> QRSeries:
    """Truncated Cauchy product; prefactors add."""
    if a.arity != b.arity:
        raise SeriesError(f"arity mismatch: {a.arity} vs {b.arity}")
    arity = a.arity
    qpref = a.qpref + b.qpref
    rpref = tuple(x + y for x, y in zip(a.rpref, b.rpref))
    val = a.val + b.val
    prec = _pmin(None if b.prec is None else a.val + b.prec,
                 None if a.prec is None else b.val + a.prec)
    if not a.coeffs or not b.coeffs:
        return QRSeries(arity, [], val if prec is None else prec, prec, qpref, rpref)
    n_out = len(a.coeffs) + len(b.coeffs) - 1
    if prec is not None:
        n_out = min(n_out, prec - val)
    acc = [dict() for _ in range(max(n_out, 0))]
    for i, pa in enumerate(a.coeffs):
        if i >= n_out or not pa:
            continue
        ta = pa.terms
        for j, pb in enumerate(b.coeffs):
            if i + j >= n_out:
                break
            if pb:
                _mul_into(acc[i + j], ta, pb.terms, arity)
    coeffs = [LaurentPoly._raw(arity, {e: c for e, c in d.items() if c}) for d in acc]
    return QRSeries(arity, coeffs, val, prec, qpref, rpref)


def series_pow(a: QRSeries, n: int) -> QRSeries:
    if n < 0:
        return series_div(QRSeries.one(a.arity), series_pow(a, -n))
    result = QRSeries.one(a.arity)
    base = a
    while n:
        if n & 1:
            result = series_mul(result, base)
        n >>= 1
        if n:
            base = series_mul(base, base)
    return result


def series_inverse(b: QRSeries, rel_prec: int | None = None) -> QRSeries:
    """1/b for b whose leading coefficient is a unit monomial."""
    if b.is_zero():
        raise DivisionError("division by a zero series")
    lead = b.coeffs[0]
    if not lead.is_unit():
        raise DivisionError(f"leading coefficient {format_poly(lead)} is not a unit; division refused")
    if b.prec is not None:
        n = b.prec - b.val
        if rel_prec is not None:
            n = min(n, rel_prec)
    elif rel_prec is not None:
        n = rel_prec
    else:
        raise SeriesError("inverse of an exact series needs an explicit precision")
    inv0 = lead.unit_inverse()
    arity = b.arity
    bc = b.coeffs
    out = [inv0]
    for k in range(1, n):
        acc: dict = {}
        for j in range(1, min(k, len(bc) - 1) + 1):
            if bc[j] and out[k - j]:
                _mul_into(acc, bc[j].terms, out[k - j].terms, arity)
        s = LaurentPoly._raw(arity, {e: c for e, c in acc.items() if c})
        out.append(-(s * inv0) if s else s)
    return QRSeries(arity, out, -b.val, -b.val + n, -b.qpref, tuple(-p for p in b.rpref))


def series_div(a: QRSeries, b: QRSeries, prec: int | None = None) -> QRSeries:
    """Exact quotient a/b; b must have a unit (signed monomial) leading coefficient."""
    if a.arity != b.arity:
        raise SeriesError(f"arity mismatch: {a.arity} vs {b.arity}")
    rel = None
    if b.prec is None:
        if a.prec is not None:
            rel = a.prec - a.val
        elif prec is not None:
            rel = prec - (a.val - b.val)
        else:
            raise SeriesError("exact / exact division needs an explicit precision")
    result = series_mul(a, series_inverse(b, rel))
    if prec is not None:
        result = result.truncate(prec)
    return result


def series_divexact(a: QRSeries, b: QRSeries) -> QRSeries:
    """Quotient a/b when b's leading coefficient is not a unit.

    Every q-coefficient of the quotient is obtained by exact Laurent division;
    :class:`DivisionError` is raised as soon as one of them is inexact.
    """
    if a.arity != b.arity:
        raise SeriesError(f"arity mismatch: {a.arity} vs {b.arity}")
    if b.is_zero():
        raise DivisionError("division by a zero series")
    lead = b.coeffs[0]
    if lead.is_unit():
        return series_div(a, b)
    rel = _pmin(None if a.prec is None else a.prec - a.val,
                None if b.prec is None else b.prec - b.val)
    if rel is None:
        raise SeriesError("exact / exact division needs an explicit precision")
    arity = a.arity
    bc = b.coeffs
    out: list[LaurentPoly] = []
    for k in range(rel):
        acc = dict(a.coefficient_unchecked(a.val + k).terms)
        for j in range(1, min(k, len(bc) - 1) + 1):
            if bc[j] and out[k - j]:
                _mul_into(acc, bc[j].terms, out[k - j].terms, arity, scale=-1)
        rem = LaurentPoly._raw(arity, {e: c for e, c in acc.items() if c})
        out.append(rem.divexact(lead))
    return QRSeries(arity, out, a.val - b.val, a.val - b.val + rel, a.qpref - b.qpref,
                    tuple(x - y for x, y in zip(a.rpref, b.rpref)))


# ---------------------------------------------------------------------------
# exponent transformations
# ---------------------------------------------------------------------------


def map_exponents(s: QRSeries, matrix: Sequence[Sequence]) -> QRSeries:
    """Linear substitution on the *true* r-exponents (prefactor included).

    The r-prefactor is folded into the exponents before mapping, so the
    image must be integral; the result has no r-prefactor.
    """
    off = [Fraction(p, 2) for p in s.rpref]
    new_arity = len(matrix[0])
    coeffs = [c.map_exponents(matrix, off) for c in s.coeffs]
    return QRSeries(new_arity, coeffs, s.val, s.prec, s.qpref, (0,) * new_arity)


def q_dilate(s: QRSeries, m: int) -> QRSeries:
    """f(q) -> f(q^m) for a series without q-prefactor."""
    if s.qpref:
        raise SeriesError("q-dilation needs an integral q-prefactor")
    data = {m * k: c for k, c in s.items()}
    prec = None if s.prec is None else m * s.prec
    if not data:
        return QRSeries(s.arity, [], 0 if prec is None else prec, prec, 0, s.rpref)
    lo = min(data)
    hi = max(data) + 1 if prec is None else prec
    coeffs = [data.get(k, LaurentPoly.zero(s.arity)) for k in range(lo, hi)]
    return QRSeries(s.arity, coeffs, lo, prec, 0, s.rpref)


def q_section(s: QRSeries, m: int) -> QRSeries:
    """Keep exponents divisible by m and divide them by m: sum a(mk) q^k."""
    if s.qpref:
        raise SeriesError("q-section needs an integral q-prefactor")
    prec = None if s.prec is None else -((-s.prec) // m)
    data = {k // m: c for k, c in s.items() if k % m == 0}
    if prec is None and not data:
        return QRSeries(s.arity, [], 0, None, 0, s.rpref)
    lo = min(data) if data else prec
    hi = (max(data) + 1) if prec is None else prec
    coeffs = [data.get(k, LaurentPoly.zero(s.arity)) for k in range(lo, hi)]
    return QRSeries(s.arity, coeffs, lo, prec, 0, s.rpref)


# ---------------------------------------------------------------------------
# classical building blocks
# ---------------------------------------------------------------------------


def _const_series(values: Sequence[int], arity: int, val: int = 0, prec: int | None = None,
                  qpref: int = 0) -> QRSeries:
    return QRSeries(arity, [LaurentPoly.constant(arity, v) for v in values], val, prec, qpref)


def euler_coefficients(n: int) -> list[int]:
    """Coefficients of prod_{k>=1} (1 - q^k) up to q^(n-1), by pentagonal numbers."""
    out = [0] * n
    k = 0
    while True:
        hit = False
        for m in ((k, -k) if k else (0,)):
            e = m * (3 * m - 1) // 2
            if e < n:
                out[e] += -1 if m % 2 else 1
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return out


def power_series_power(f: Sequence[int], e: int, n: int) -> list[int]:
    """f^e mod q^n for an integer power series with f[0] = 1 (exact recurrence)."""
    if n == 0:
        return []
    if f[0] != 1:
        raise SeriesError("power recurrence needs constant term 1")
    g = [0] * n
    if n:
        g[0] = 1
    for k in range(1, n):
        s = 0
        for j in range(1, min(k, len(f) - 1) + 1):
            if f[j]:
                s += (e * j - k + j) * f[j] * g[k - j]
        q, rem = divmod(s, k)
        if rem:
            raise SeriesError("non-integral power coefficient")
        g[k] = q
    return g


def eta_power(e: int, prec: int, arity: int = 1) -> QRSeries:
    """eta(tau)^e = q^(e/24) prod (1 - q^n)^e, known to O(q^prec) overall."""
    if prec < 1:
        raise SeriesError("prec must be >= 1")
    # stored exponents k carry q^(k + e/24); integral part of e/24 moves into val
    shift = e // 24
    n = max(prec - shift, 0)
    coeffs = power_series_power(euler_coefficients(n), e, n)
    return _const_series(coeffs, arity, 0, n, e)


def delta(prec: int, arity: int = 1) -> QRSeries:
    return eta_power(24, prec, arity)


def divisor_sigma(n: int, k: int) -> int:
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d ** k
            if d * d != n:
                s += (n // d) ** k
        d += 1
    return s


def eisenstein(weight: int, prec: int, arity: int = 1) -> QRSeries:
    """Normalised E_4 or E_6."""
    c = {4: 240, 6: -504}.get(weight)
    if c is None:
        raise SeriesError(f"unsupported Eisenstein weight {weight}")
    coeffs = [1] + [c * divisor_sigma(n, weight - 1) for n in range(1, prec)]
    return _const_series(coeffs[:prec], arity, 0, prec)


def theta(prec: int) -> QRSeries:
    """Odd Jacobi theta: q^(1/8) r^(1/2) sum_n (-1)^n q^(n(n+1)/2) r^n."""
    if prec < 1:
        raise SeriesError("prec must be >= 1")
    data: dict[int, dict] = {}
    n = 0
    while n * (n + 1) // 2 < prec:
        k = n * (n + 1) // 2
        sign = -1 if n % 2 else 1
        terms = data.setdefault(k, {})
        terms[(n,)] = terms.get((n,), 0) + sign
        m = -n - 1
        terms[(m,)] = terms.get((m,), 0) - sign
        n += 1
    return QRSeries.from_dict(1, data, prec, qpref=3, rpref=(1,))


def dump_series(s: QRSeries) -> str:
    """One line per stored q-exponent: ``q^k : <poly>``."""
    lines = []
    for k in s.known_exponents():
        c = s.coefficient_unchecked(k)
        ex = Fraction(k) + Fraction(s.qpref, 24)
        lines.append(f"q^{_fmt_exp(ex)} : {format_poly(c, s.rpref)}")
    if s.prec is not None:
        lines.append(f"O(q^{_fmt_exp(Fraction(s.prec) + Fraction(s.qpref, 24))})")
    return "\n".join(lines) + "\n"
