"""Command-line driver: ``strata-chow <subcommand> [flags]``.

Exit codes: 0 success, 1 bad input, 2 a mathematical verification failed.
Errors are reported on stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import ideals, ordered, pgl2, unordered, verification
from .partitions import IntPartition, SetPartition, count_good_closed, good_partitions, rank
from .poly import PolyRing, parse_poly
from .rings import SCHEMA, OrderedClass, ProjClass

DEFAULT_CAP = 12
CAP_ENV = "STRATA_CHOW_CAP"
DIRECT_LIMIT = 9


class InputError(ValueError):
    """Malformed or out-of-range input (exit code 1)."""


class VerificationFailure(AssertionError):
    """A computed identity did not hold (exit code 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _emit(args, text: str, payload: dict):
    if args.json:
        payload = {"schema": SCHEMA, **payload}
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(text)


def _cap(args) -> int:
    if args.cap is not None:
        return args.cap
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{CAP_ENV}={raw!r} is not an integer") from None


def _check_n(args, n: int) -> int:
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    cap = _cap(args)
    if n > cap:
        raise InputError(f"n={n} exceeds the safety cap {cap}; raise it with --cap or {CAP_ENV}")
    return n


def _set_partition(args) -> SetPartition:
    if not args.partition:
        raise InputError("--partition is required")
    if args.n is not None:
        _check_n(args, args.n)
    try:
        P = SetPartition.parse(args.partition, args.n)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    _check_n(args, P.n)
    return P


def _int_partition(args) -> IntPartition:
    if not args.lam:
        raise InputError("--lambda is required")
    try:
        lam = IntPartition.parse(args.lam)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    if args.n is not None and args.n != lam.n:
        raise InputError(f"{lam} is not a partition of n={args.n}")
    _check_n(args, lam.n)
    return lam


def _forest(text: str) -> list[tuple[int, int]]:
    edges = []
    for item in text.split(","):
        a, sep, b = item.strip().partition("-")
        if not sep:
            raise InputError(f"forest edges look like 1-2,3-4; got {item!r}")
        edges.append((int(a), int(b)))
    return edges


# -- subcommands ---------------------------------------------------------------

def cmd_delta(args):
    P = _set_partition(args)
    cls = ordered.delta_P(P) if args.forest is None else ordered.spanning_forest_product(P, _forest(args.forest))
    _emit(args, f"Delta[{P}] = {cls}", {"partition": P.to_json(), "class": cls.to_json()})


def _read_ordered_input(args) -> OrderedClass:
    if args.partition:
        return ordered.delta_P(_set_partition(args))
    if args.input:
        data = json.loads(Path(args.input).read_text() if args.input != "-" else sys.stdin.read())
        try:
            cls = OrderedClass.from_json(data)
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"bad OrderedClass JSON: {exc}") from None
        _check_n(args, cls.n)
        return cls
    if args.expr:
        if args.n is None:
            raise InputError("--n is required with a polynomial expression")
        n = _check_n(args, args.n)
        ring = PolyRing(tuple(f"H{i}" for i in range(1, n + 1)) + ("u", "v"))
        try:
            p = parse_poly(args.expr, ring)
            return OrderedClass.from_poly(p, n)
        except (ValueError, TypeError) as exc:
            raise InputError(str(exc)) from None
    raise InputError("give a polynomial expression, --partition or --input")


def cmd_decompose(args):
    alpha = _read_ordered_input(args)
    try:
        combo = ordered.decompose(alpha, args.degree)
    except ordered.NotInSpan as exc:
        raise VerificationFailure(f"not in the span of strata classes: {exc}") from None
    _emit(args, f"{alpha} = {combo}", {"input": alpha.to_json(), "decomposition": combo.to_json()})


def cmd_goodify(args):
    Q = _set_partition(args)
    try:
        combo, cert = ordered.goodify(Q, verify=True)
    except AssertionError as exc:
        raise VerificationFailure(str(exc)) from None
    lines = [f"Delta[{Q}] = {combo}", f"certificate: {len(cert)} square relations"]
    for P, idx, m in cert.steps:
        lines.append(f"  {m:+d} * square({P}; {','.join(map(str, idx))})")
    _emit(args, "\n".join(lines), {"partition": Q.to_json(), "result": combo.to_json(),
                                   "certificate": cert.to_json()})


def cmd_ranks(args):
    if args.n is None:
        raise InputError("--n is required")
    n = _check_n(args, args.n)
    # brute-force enumeration walks all set partitions; keep it to small n
    brute = n <= DIRECT_LIMIT
    rows = []
    for k in range(0, n - 1):
        row = {"k": k, "rank": rank(k, n), "good_closed": count_good_closed(n - k, n)}
        row["good_direct"] = len(good_partitions(n - k, n)) if brute else None
        if args.matrix:
            row["matrix_rank"] = verification.delta_rank(k, n)
        rows.append(row)
    cell = lambda x: "-" if x is None else str(x)
    head = "k  rank  good(direct)  good(closed)" + ("  matrix" if args.matrix else "")
    body = [f"{r['k']:<2} {r['rank']:<5} {cell(r['good_direct']):<13} {r['good_closed']:<13}"
            + (f" {r['matrix_rank']}" if args.matrix else "") for r in rows]
    if not brute:
        body.append(f"(direct enumeration skipped for n > {DIRECT_LIMIT})")
    ok = all(r["rank"] == r["good_closed"] and r["good_direct"] in (None, r["rank"])
             and r.get("matrix_rank", r["rank"]) == r["rank"] for r in rows)
    _emit(args, "\n".join([head] + [b.rstrip() for b in body]), {"n": n, "rows": rows, "agree": ok})
    if not ok:
        raise VerificationFailure("rank formulas disagree")


def cmd_unordered(args):
    lam = _int_partition(args)
    Z = unordered.class_Z(lam)
    text = f"Z{lam} = {Z}"
    if args.normalized:
        text += f"\nN{lam} = {lam.normalization()}*Z{lam} = {unordered.class_unordered(lam)}"
    _emit(args, text, {"partition": lam.to_json(), "class": Z.to_json(),
                       "normalization": lam.normalization()})


def cmd_check_relation(args):
    if not args.relation:
        raise InputError("a relation such as '1*[4,1,1]+3*[2,2,2]-1*[3,2,1]' is required")
    try:
        S = unordered.StrataCombinationUnordered.parse(args.relation, args.n)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _check_n(args, S.n)
    try:
        v = unordered.relation_check(S, certificate=not args.no_certificate)
    except unordered.IdentityFailure as exc:
        raise VerificationFailure(str(exc)) from None
    lines = [("HOLDS" if v.holds else "DOES NOT HOLD") + f": {S}",
             f"  Q[z] criterion: {v.by_polynomial}",
             f"  direct evaluation: {v.by_evaluation}"]
    if v.certificate is not None:
        lines.append(f"  certificate replay: {v.by_certificate} ({len(v.certificate.moves)} moves; N = (prod e_i!) Z)")
        for lam, m in v.certificate.moves:
            l1, l2, l3 = unordered.square_move(lam)
            lines.append(f"    {m} * (N{lam} = N{l1} + N{l2} - N{l3})")
        if v.residual:
            res = ", ".join(f"{c}*N{lam}" for lam, c in sorted(v.residual.items(), key=lambda it: it[0].parts))
            lines.append(f"  residual in the [a,b,1^c] basis: {res}")
    lines.append(f"  zero after u=v=0: {v.nonequivariant_zero}")
    payload = {"relation": S.to_json(), "holds": v.holds, "by_polynomial": v.by_polynomial,
               "by_evaluation": v.by_evaluation, "by_certificate": v.by_certificate,
               "nonequivariant_zero": v.nonequivariant_zero}
    if v.certificate is not None:
        payload["certificate"] = v.certificate.to_json()
        payload["residual"] = [{"partition": lam.to_json(), "coeff": str(c)} for lam, c in v.residual.items()]
    _emit(args, "\n".join(lines), payload)


def cmd_mod2(args):
    lam = _int_partition(args)
    if lam.n % 2:
        raise InputError("mod-2 classes are only interesting for even n")
    m = pgl2.pgl2_mod2_class(lam)
    ic = pgl2.pgl2_integral_class(lam)
    if not ic.consistent:
        raise VerificationFailure(f"GL2 image of the mod-2 class of {lam} disagrees")
    lines = [f"lambda = {lam} (special: {lam.is_special()})",
             f"[Z_lambda] mod 2 = {m or 0}",
             f"c3-part = {ic.torsion_part or 0}"]
    _emit(args, "\n".join(lines), {"partition": lam.to_json(), "special": lam.is_special(),
                                   "mod2": m.to_json(), "integral": ic.to_json()})


def cmd_affine(args):
    lam = _int_partition(args)
    Z = unordered.class_Z(lam)
    p0 = Z.affine_part()
    back = unordered.reconstruct(p0, lam.n)
    if back != Z:
        raise VerificationFailure(f"reconstruction from the affine class of {lam} fails")
    _emit(args, f"Z{lam} at H=0: {p0}", {"partition": lam.to_json(), "affine": p0.to_json(),
                                        "reconstructs": True})


def _generators(text: str | None, n: int) -> list[ProjClass] | None:
    if not text:
        return None
    gens = []
    for item in text.split(";"):
        mu = IntPartition.parse(item.strip())
        if mu.n != n:
            raise InputError(f"generator {mu} is not a partition of {n}")
        gens.append(unordered.class_Z(mu))
    return gens


def cmd_ideal_dims(args):
    lam = _int_partition(args)
    n = lam.n
    try:
        gens = _generators(args.generators, n)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    bound = args.max_degree if args.max_degree is not None else n + 2
    rows = ideals.compare_ideal_ranks(lam, gens, bound)
    lines = [f"lambda = {lam}; generators: "
             + (args.generators if args.generators else "merges of lambda")
             + f"; degrees <= {bound} (truncated check)",
             "k   ambient  full  generated  sum  match"]
    for r in rows:
        lines.append(f"{r.degree:<3} {r.ambient:<8} {r.full:<5} {r.generated:<10} {r.union:<4} {r.match}")
    payload = {"partition": lam.to_json(), "max_degree": bound,
               "rows": [{"k": r.degree, "ambient": r.ambient, "full": r.full, "generated": r.generated,
                         "sum": r.union, "match": r.match} for r in rows]}
    if args.affine:
        arows = ideals.compare_affine_ranks(lam, gens, bound)
        lines.append("affine: k   full  generated  sum  match")
        for r in arows:
            lines.append(f"        {r.degree:<3} {r.full:<5} {r.generated:<10} {r.union:<4} {r.match}")
        payload["affine_rows"] = [{"k": r.degree, "full": r.full, "generated": r.generated,
                                   "sum": r.union, "match": r.match} for r in arows]
    _emit(args, "\n".join(lines), payload)


def cmd_appendix_check(args):
    top = _check_n(args, args.n if args.n is not None else 10)
    results = []
    for n in range(3, top + 1):
        for c in range(1, n - 1):
            for a in range(1, n - c):
                b = n - a - c
                results.append(("u+v", a, b, c, unordered.multiplicative_uplusv(a, b, c, check=False).holds))
                if c >= 2:
                    results.append(("uv", a, b, c, unordered.multiplicative_uv(a, b, c, check=False).holds))
    bad = [r for r in results if not r[4]]
    text = f"{len(results) - len(bad)}/{len(results)} identities hold for n <= {top}"
    for kind, a, b, c, _ in bad:
        text += f"\n  FAIL {kind} at (a,b,c)=({a},{b},{c})"
    _emit(args, text, {"max_n": top, "checked": len(results),
                       "failures": [{"identity": k, "a": a, "b": b, "c": c} for k, a, b, c, _ in bad]})
    if bad:
        raise VerificationFailure(f"{len(bad)} identities fail")


def cmd_verify_paper(args):
    keys = [k for k, _, _ in verification.CHECKS]
    if args.only:
        want = [k.strip() for k in args.only.split(",")]
        unknown = set(want) - set(keys)
        if unknown:
            raise InputError(f"unknown check(s): {', '.join(sorted(unknown))}")
        keys = want
    results = [verification.run_check(k) for k in keys]
    _emit(args, "\n".join(r.line() for r in results),
          {"results": [{"key": r.key, "title": r.title, "ok": r.ok, "detail": r.detail,
                        "seconds": round(r.seconds, 3)} for r in results]})
    if not all(r.ok for r in results):
        raise VerificationFailure("some checks failed: " + ", ".join(r.key for r in results if not r.ok))


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, help="number of points")
    common.add_argument("--json", action="store_true", help="emit versioned JSON")
    common.add_argument("--cap", type=int, help=f"safety cap on n (default ${CAP_ENV} or {DEFAULT_CAP})")

    p = _Parser(prog="strata-chow", description="Exact equivariant Chow classes of strata on P^1.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("delta", parents=[common], help="class of an ordered stratum")
    s.add_argument("--partition", help='set partition, e.g. "1,2|3,4"')
    s.add_argument("--forest", help='spanning forest edges, e.g. "1-2,3-4"')
    s.set_defaults(func=cmd_delta)

    s = sub.add_parser("decompose", parents=[common], help="write a class in the strata basis")
    s.add_argument("expr", nargs="?", help='polynomial in H1..Hn, u, v, e.g. "H1*H2 + (u+v)*H1"')
    s.add_argument("--partition", help="decompose Delta_P")
    s.add_argument("--input", help="OrderedClass JSON file ('-' for stdin)")
    s.add_argument("--degree", type=int, help="degree k (default: the degree of the class)")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("goodify", parents=[common], help="rewrite a stratum in good strata")
    s.add_argument("--partition", help="set partition")
    s.set_defaults(func=cmd_goodify)

    s = sub.add_parser("ranks", parents=[common], help="ranks of the strata span per degree")
    s.add_argument("--matrix", action="store_true", help="also compute exact matrix ranks")
    s.set_defaults(func=cmd_ranks)

    for name, func, hlp in (("unordered", cmd_unordered, "class of an unordered stratum"),
                            ("mod2", cmd_mod2, "PGL2 class mod 2 and its torsion part"),
                            ("affine", cmd_affine, "affine (constant-in-H) class")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--lambda", dest="lam", help='integer partition, e.g. "3+2+1"')
        if name == "unordered":
            s.add_argument("--normalized", action="store_true", help="also print (prod e_i!) [Z_lambda]")
        s.set_defaults(func=func)

    s = sub.add_parser("check-relation", parents=[common], help="test a relation among [Z_lambda]")
    s.add_argument("relation", nargs="?", help='e.g. "1*[4,1,1]+3*[2,2,2]-1*[3,2,1] @ n=6"')
    s.add_argument("--no-certificate", action="store_true", help="skip the rewriting certificate")
    s.set_defaults(func=cmd_check_relation)

    s = sub.add_parser("ideal-dims", parents=[common], help="graded ranks of pushforward ideals")
    s.add_argument("--lambda", dest="lam", help="integer partition")
    s.add_argument("--generators", help='";"-separated partitions, e.g. "[3,1];[4]"')
    s.add_argument("--max-degree", type=int, help="largest degree (default n+2)")
    s.add_argument("--affine", action="store_true", help="also compare the affine variant")
    s.set_defaults(func=cmd_ideal_dims)

    s = sub.add_parser("appendix-check", parents=[common], help="multiplicative identities up to --n")
    s.set_defaults(func=cmd_appendix_check)

    s = sub.add_parser("verify-paper", parents=[common], help="run the full reproduction suite")
    s.add_argument("--only", help='comma-separated check keys, e.g. "1,4"')
    s.set_defaults(func=cmd_verify_paper)
    return p


def _fail(code: int, kind: str, message: str, as_json: bool) -> int:
    err = {"schema": SCHEMA, "error": {"kind": kind, "message": message, "exit_code": code}}
    print(json.dumps(err), file=sys.stderr)
    if not as_json:
        print(f"error: {message}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except InputError as exc:
        return _fail(1, "parse", str(exc), as_json)
    except VerificationFailure as exc:
        return _fail(2, "verification", str(exc), as_json)
    except json.JSONDecodeError as exc:
        return _fail(1, "parse", f"invalid JSON: {exc}", as_json)
    except OSError as exc:
        return _fail(1, "parse", str(exc), as_json)
    except (ValueError, KeyError) as exc:
        return _fail(1, "parse", str(exc), as_json)
    return 0


if __name__ == "__main__":
    sys.exit(main())
