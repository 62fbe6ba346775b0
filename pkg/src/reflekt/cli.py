"""``reflekt`` command line."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import certify as C
from . import jacobi as J
from . import niemeier as nm
from .lattice import EnumerationCapExceeded, LatticeError, min_norm_per_class, parse_lattice
from .series import SeriesError

# (n, l, value, boldface) as printed for the index-21 form
XI21_EXPECTED = (
    (-1, 0, 1, True), (0, 0, 24, False),
    (1, 9, 42, False), (1, 8, 168, False),
    (2, 14, 3, True), (2, 12, 322, False),
    (3, 15, 420, False), (3, 14, 4152, False),
    (4, 18, 105, False), (4, 17, 2016, False),
    (5, 21, 2, True), (5, 20, 168, False),
)


class UsageError(Exception):
    pass


def _frac(x: Fraction) -> str:
    return str(x) if isinstance(x, Fraction) else str(x)


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=False))
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_jacobi_dump(args) -> int:
    if args.prec < 1:
        raise UsageError("--prec must be >= 1")
    f = J.named_form(args.form, args.prec, m=args.m)
    s = f.series
    if args.json:
        index = f.index if f.scalar else f.index.label
        coeffs = [{"n": n, "terms": [[list(e), c] for e, c in sorted(p.terms.items())]} for n, p in s.items()]
        data = {"form": f.name, "weight": f.weight, "index": index, "holomorphy": f.holomorphy_class,
                "qpref": str(s.prefactor()[0]), "rpref": [str(x) for x in s.prefactor()[1]],
                "prec": s.prec, "coefficients": coeffs}
        print(json.dumps(data, indent=2))
    else:
        index = f.index if f.scalar else f.index.label
        print(f"# {f.name}  weight {f.weight}  index {index}  ({f.holomorphy_class})")
        if not f.scalar:
            print("# elliptic exponents are doubled")
        print(s.dump())
    return 0


def cmd_lattice_info(args) -> int:
    lat = parse_lattice(args.spec)
    dg = lat.discriminant_group()
    p, q = lat.signature()
    data = {"spec": args.spec, "rank": lat.rank, "signature": [p, q], "det": lat.det,
            "discriminant": dg.describe(), "invariant_factors": dg.invariant_factors,
            "even": lat.even, "splits_2U": lat.splits_2u}
    text = "\n".join([
        f"lattice      {args.spec}",
        f"rank         {lat.rank}",
        f"signature    ({p},{q})",
        f"det          {lat.det}",
        f"discriminant {dg.describe()}",
        f"even         {lat.even}",
        f"splits 2U    {lat.splits_2u}",
    ])
    _emit(args, data, text)
    return 0


def cmd_lattice_minnorms(args) -> int:
    lat = parse_lattice(args.spec)
    if lat.signature()[1] != 0:
        raise UsageError("minnorms needs a positive definite lattice")
    mins = min_norm_per_class(lat)
    rows = sorted(mins.items())
    mx = max(mins.values())
    data = {"spec": args.spec, "classes": [{"class": list(k), "min_norm": _frac(v)} for k, v in rows],
            "max": _frac(mx), "all_at_most_2": mx <= 2}
    lines = [f"{list(k)}  {_frac(v)}" for k, v in rows]
    lines.append(f"max {_frac(mx)}  ({'<=' if mx <= 2 else '>'} 2)")
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_qpb(args) -> int:
    rep = nm.quasi_pullback(args.s, args.niemeier)
    print(json.dumps(rep.to_dict(), indent=2))
    return 0


def cmd_xi21_verify(args) -> int:
    cert = C.xi21_pipeline(args.prec)
    xi = J.build_xi021(args.prec)
    ok = True
    rows = []
    for n, l, want, bold in XI21_EXPECTED:
        got = xi.coeff(n, l)
        good = got == want
        ok &= good
        rows.append({"n": n, "l": l, "expected": want, "got": got, "singular": bold, "ok": good})
    divs = [d for d in cert.divisors]
    expected_divs = {(84, 0, 1), (28, 14, 3), (21, 21, 2)}
    got_divs = {(d.D, d.l, d.mult) for d in divs}
    ok &= got_divs == expected_divs
    ok &= cert.verdict == C.UNIRULED
    if args.json:
        data = {"coefficients": rows, "certificate": cert.to_json(), "ok": ok}
        print(json.dumps(data, indent=2))
    else:
        for r in rows:
            mark = "ok" if r["ok"] else "MISMATCH"
            star = "*" if r["singular"] else " "
            print(f"a({r['n']:>2},{r['l']:>2}){star} expected {r['expected']:>5}  got {r['got']:>5}  {mark}")
        for d in divs:
            print(f"H_{d.D}({d.l})  mult {d.mult}  v^2 = {d.norm}  div {d.div}  reflective {d.reflective}")
        print(f"weight {cert.weight}  dimension {cert.dimension}  m {cert.m}")
        print(f"verdict {cert.verdict}")
        print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def cmd_certify(args) -> int:
    if args.preset:
        cert = _preset(args.preset)
    else:
        if args.weight is None or args.dim is None or args.divisors is None:
            raise UsageError("certify needs --weight, --dim and --divisors (or --preset)")
        try:
            raw = json.loads(args.divisors)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--divisors is not valid JSON: {exc}") from exc
        if not isinstance(raw, list):
            raise UsageError("--divisors must be a JSON list")
        try:
            divs = [C.DivisorDatum.from_json(d) for d in raw]
            cert = C.certify(args.weight, args.dim, divs, cusp=args.cusp)
        except C.CertifyError as exc:
            raise UsageError(str(exc)) from exc
    if args.json:
        print(json.dumps(cert.to_json(), indent=2))
    else:
        print(f"weight {cert.weight}  dimension {cert.dimension}  m {cert.m}  cusp {cert.cusp}")
        for line in cert.checked:
            print(f"  checked: {line}")
        for line in cert.trusted:
            print(f"  trusted: {line}")
        print(f"verdict {cert.verdict}")
    return 0


def _preset(name: str) -> C.Certificate:
    if name == "xi21":
        return C.xi21_pipeline()
    if name in C.THETA_BLOCKS:
        return C.theta_block_certificate(name)
    if name.startswith("qpb:"):
        return C.qpb_certificate(name[4:])
    raise UsageError(f"unknown preset {name!r}")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reflekt", description="Reflective modular forms toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    jac = sub.add_parser("jacobi", help="Jacobi form expansions")
    jsub = jac.add_subparsers(dest="action", required=True)
    dump = jsub.add_parser("dump", parents=[common], help="print a truncated q-expansion")
    dump.add_argument("--form", required=True, choices=J.FORM_NAMES)
    dump.add_argument("--prec", type=int, required=True)
    dump.add_argument("--m", type=int, default=3, help="m for dm-product (1..8)")
    dump.set_defaults(func=cmd_jacobi_dump)

    lat = sub.add_parser("lattice", help="lattice invariants")
    lsub = lat.add_subparsers(dest="action", required=True)
    info = lsub.add_parser("info", parents=[common])
    info.add_argument("--spec", required=True)
    info.set_defaults(func=cmd_lattice_info)
    mins = lsub.add_parser("minnorms", parents=[common])
    mins.add_argument("--spec", required=True)
    mins.set_defaults(func=cmd_lattice_minnorms)

    qpb = sub.add_parser("qpb", parents=[common], help="quasi-pullback report (JSON)")
    qpb.add_argument("--s", required=True, help="root sum such as A7 or 3A2")
    qpb.add_argument("--niemeier", required=True, help="Niemeier root system such as 2A7+2D5")
    qpb.set_defaults(func=cmd_qpb)

    xi = sub.add_parser("xi21", help="index-21 pipeline")
    xsub = xi.add_subparsers(dest="action", required=True)
    ver = xsub.add_parser("verify", parents=[common])
    ver.add_argument("--prec", type=int, default=J.DEFAULT_XI_PREC)
    ver.set_defaults(func=cmd_xi21_verify)

    cert = sub.add_parser("certify", parents=[common], help="verdict from weight, dimension, divisors")
    cert.add_argument("--weight", type=int)
    cert.add_argument("--dim", type=int)
    cert.add_argument("--divisors", help='JSON list such as [{"mult":1},{"mult":2}]')
    cert.add_argument("--cusp", action=argparse.BooleanOptionalAction, default=None)
    cert.add_argument("--preset", help="xi21, D3, A2, 2A1 or qpb:<root sum>")
    cert.set_defaults(func=cmd_certify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"reflekt: error: {exc}", file=sys.stderr)
        return 2
    except EnumerationCapExceeded as exc:
        print(f"reflekt: enumeration cap: {exc}", file=sys.stderr)
        return 1
    except (C.CertifyError, J.JacobiError, LatticeError, SeriesError) as exc:
        print(f"reflekt: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
