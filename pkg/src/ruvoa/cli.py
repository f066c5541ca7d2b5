"""Command line entry point: ruvoa <subcommand> [options].

Exit codes: 0 success, 1 verification failure, 2 usage error.
The worker count for lattice enumeration defaults to $RUVOA_WORKERS (or 1).
"""

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import qseries, frameshape, cwlattice, weylvoa, moonshine

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _frac(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a rational number: %r" % text) from None


def _emit(args, payload, rows=None, header=None):
    """Write payload as JSON, or rows as CSV, to --output or stdout."""
    if args.format == "csv":
        if rows is None:
            header = ["key", "value"]
            rows = [[k, json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v]
                    for k, v in payload.items()]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _log(msg):
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# series / character


def _series_rows(series, lead):
    rows = []
    for (pn, qn), v in sorted(series.terms.items(), key=lambda t: (t[0][1], t[0][0])):
        rows.append([str(Fraction(qn - lead, qseries.Q_DEN)), str(Fraction(qn, qseries.Q_DEN)),
                     str(Fraction(pn, qseries.P_DEN)), str(v.re), str(v.im)])
    return rows


def cmd_series(args):
    try:
        c = moonshine.get_class(args.cls)
    except moonshine.UnknownClassError:
        raise UsageError("unknown class %r" % args.cls)
    sign = 1 if args.sign == "+" else -1
    qmax = int(args.qmax * qseries.Q_DEN)
    h = c.shape(sign)
    if args.space == moonshine.W:
        lead = h.dimension
        s = moonshine.mt_series(c, args.space, sign, lead + qmax)
    elif args.space == moonshine.A_SPACE:
        lead = -c.shape(-sign).dimension
        s = moonshine.mt_series(c, args.space, sign, lead + qmax)
    else:
        f = moonshine.mt_series(c, args.space, sign, qmax)
        try:
            s = f.expand()
        except qseries.NotExpandableError:
            # poles in p at q^0: only the product form is finite
            _emit(args, _factored_payload(c, args, h, f), *_factored_rows(f))
            return EXIT_OK
        lead = qseries._ladder(f.qExp, qseries.Q_DEN, "q")
    header = ["degree", "q_exponent", "p_exponent", "re", "im"]
    rows = _series_rows(s, lead)
    payload = {"class": c.ru, "space": args.space, "sign": args.sign, "shape": h.format(),
               "columns": header, "terms": rows}
    _emit(args, payload, rows, header)
    return EXIT_OK


def _factored_rows(f):
    header = ["zeta_re", "zeta_im", "p_exponent", "q_exponent", "exponent"]
    rows = [[str(a.zeta.re), str(a.zeta.im), str(a.pExp), str(a.qExp), a.exponent] for a in f.atoms]
    return rows, header


def _factored_payload(c, args, h, f):
    rows, header = _factored_rows(f)
    return {"class": c.ru, "space": args.space, "sign": args.sign, "shape": h.format(),
            "factored": True, "coefficient": f.coeff.to_json(), "p_exponent": str(f.pExp),
            "q_exponent": str(f.qExp), "complete_through": str(Fraction(f.atomsComplete, qseries.Q_DEN)),
            "columns": header, "atoms": rows}


def cmd_character(args):
    table = moonshine.character_table(args.qmax, args.n)
    if args.format == "csv":
        text = moonshine.character_csv(table)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    entries = [{"degree": str(d), "charge": str(ch), "value": v.to_json()}
               for (d, ch), v in sorted(table.items()) if ch >= 0]
    _emit(args, {"n": args.n, "entries": entries})
    return EXIT_OK


# ---------------------------------------------------------------------------
# lattice


def _build(args):
    t = time.time()
    try:
        L = cwlattice.build_lattice(check=True)
    except cwlattice.ConstructionError as exc:
        _log("construction failed: %s" % exc)
        return None
    _log("lattice built in %.1f s" % (time.time() - t))
    return L


def _vectors(args, L):
    if args.vectors:
        return cwlattice.read_vectors(args.vectors)
    workers = args.workers or cwlattice.default_workers()
    return cwlattice.enumerate_minimal(L, workers=workers, checkpoint=args.checkpoint,
                                       progress=_progress if args.verbose else None)


def _progress(done, total):
    _log("jobs %d / %d" % (done, total))


def cmd_lattice(args):
    L = _build(args)
    if L is None:
        return EXIT_FAIL
    if args.action == "verify":
        out = {"rank": L.rank, "determinant": L.determinant(), "even": L.is_even(),
               "minimum": L.minimum()}
        ok = out["rank"] == cwlattice.DIM and out["determinant"] == 1 and out["even"] \
            and out["minimum"] == cwlattice.MIN_NORM
        out["passed"] = ok
        _emit(args, out)
        return EXIT_OK if ok else EXIT_FAIL
    if args.action == "enumerate":
        if args.resume:
            args.checkpoint = args.resume
        V = _vectors(args, L)
        if args.vectors_out:
            cwlattice.write_vectors(args.vectors_out, V)
        out = {"count": int(len(V)), "expected": cwlattice.MINIMAL_VECTOR_COUNT,
               "real_or_imaginary": cwlattice.entries_real_or_imaginary(V)}
        out["passed"] = out["count"] == cwlattice.MINIMAL_VECTOR_COUNT
        _emit(args, out)
        return EXIT_OK if out["passed"] else EXIT_FAIL
    # delta
    V = _vectors(args, L)
    delta = cwlattice.build_delta(V)
    out = {"vectors": int(len(V)), "nonzero": delta.is_nonzero(),
           "corner_value": int(delta.corner_value().real), "scale": delta.scale}
    ok = out["nonzero"]
    if args.check_invariance:
        group = cwlattice.monomial_group()
        bad = [g.key() for g in group if not cwlattice.delta_invariant_under(delta, g)]
        out["group_order"] = len(group)
        out["invariant_failures"] = [list(k) for k in bad]
        ok = ok and not bad
    if args.delta_out:
        with open(args.delta_out, "w") as fh:
            json.dump(delta.to_json(), fh, sort_keys=True)
    out["passed"] = ok
    _emit(args, out)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# vertex algebra checks


def cmd_voa_check(args):
    N = args.n
    if args.counts_only:
        dims = weylvoa.graded_dims(N, args.qmax)
        table = moonshine.character_table(args.qmax, N)
        bad = []
        keys = set(dims) | {k for k, v in table.items() if v}
        for key in sorted(keys):
            if table.get(key, qseries.ZERO) != qseries.GaussRat(dims.get(key, 0)):
                bad.append([str(key[0]), str(key[1])])
        out = {"n": N, "points": len(keys), "mismatches": bad, "passed": not bad}
        _emit(args, out)
        return EXIT_OK if not bad else EXIT_FAIL
    sector = weylvoa.TWISTED if args.twisted else weylvoa.UNTWISTED
    qmax = args.qmax
    try:
        res = weylvoa.relation_suite(N, sector, max_degree=qmax, mmax=args.mmax,
                                     max_zero=args.max_zero)
        space = weylvoa.ModeSpace(N, sector, qmax, args.max_zero)
    except weylvoa.ResourceError as exc:
        raise UsageError(str(exc))
    ok_L, ok_J = weylvoa.grading_checks(space)
    failures = [[name, m, n] for name, m, n, ok in res if not ok]
    out = {"n": N, "sector": sector, "window": str(qmax), "relations": len(res),
           "failures": failures, "grading_L0": ok_L, "grading_J0": ok_J}
    ok = not failures and ok_L and ok_J
    if args.twisted:
        lead = weylvoa.twisted_vacuum_omega(N)
        out["twisted_vacuum_leading"] = lead.to_json()
        ok = ok and lead == qseries.GaussRat(Fraction(-N, 8))
    else:
        H = weylvoa.HermSpace(N)
        h1, h3 = Fraction(-1, 2), Fraction(-3, 2)
        a = weylvoa.make_state([(H.e_prime(0), h1), (H.e(0), h3)])
        b = weylvoa.make_state([(H.e(0), h1), (H.e_prime(0), h3)])
        da, db = weylvoa.delta_z(a, N), weylvoa.delta_z(b, N)
        vac = weylvoa.vacuum()
        ok_d = (da == {2: {k: v * qseries.GaussRat(Fraction(-1, 4)) for k, v in vac.items()}}
                and db == {2: {k: v * qseries.GaussRat(Fraction(1, 4)) for k, v in vac.items()}}
                and not weylvoa.delta_z_power(a, N, 2) and not weylvoa.delta_z_power(b, N, 2))
        out["delta_z"] = ok_d
        ok = ok and ok_d
    out["passed"] = ok
    _emit(args, out)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# moonshine


def _classes(text):
    if not text:
        return [c.ru for c in moonshine.load_classes()]
    names = [t.strip() for t in text.split(",") if t.strip()]
    known = {c.ru for c in moonshine.load_classes()}
    unknown = [n for n in names if n not in known]
    if unknown:
        raise UsageError("unknown class %s" % ", ".join(unknown))
    return names


def cmd_genus_zero(args):
    names = _classes(args.classes)
    if not args.classes:
        names = [c.ru for c in moonshine.load_classes() if moonshine.closed_form_for(c.ru)]
    reports, ok = [], True
    for name in names:
        c = moonshine.get_class(name)
        r = moonshine.genus_zero_check(c, args.tolerance)
        if "passed" in r:
            r["reciprocity"] = moonshine.reciprocity_check(c, args.order)
            r["passed"] = r["passed"] and r["reciprocity"]
            ok = ok and r["passed"]
        reports.append(r)
    rows = [[r["class"], r.get("level", ""), r.get("group", ""), r.get("max_deviation", ""),
             r.get("fricke_swap", ""), r.get("reciprocity", ""), r.get("passed", r.get("status"))]
            for r in reports]
    _emit(args, {"tolerance": args.tolerance, "classes": reports, "passed": ok}, rows,
          ["class", "level", "group", "max_deviation", "fricke_swap", "reciprocity", "passed"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_report(args):
    names = _classes(args.classes) if args.classes else None
    rep = moonshine.report(names, args.order, not args.no_modular, args.tolerance)
    ok = True
    for r in rep["classes"]:
        if "closed_form_match" in r:
            ok = ok and r["closed_form_match"] and r["reciprocity"]
            if "genus_zero" in r:
                ok = ok and r["genus_zero"]["passed"]
    rep["passed"] = ok
    _emit(args, rep)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_decompose(args):
    ru, cover = moonshine.degree_table()
    degrees = cover if args.family == "cover" else ru
    if args.identities:
        rows, ok = [], True
        for fam, value, parts in moonshine.printed_identities():
            allowed = cover if fam == "cover" else ru
            good = moonshine.check_identity(value, parts, set(allowed))
            ok = ok and good
            rows.append({"family": fam, "value": value,
                         "parts": {str(k): m for k, m in sorted(parts.items())}, "passed": good})
        _emit(args, {"identities": rows, "passed": ok},
              [[r["family"], r["value"], json.dumps(r["parts"], sort_keys=True), r["passed"]] for r in rows],
              ["family", "value", "parts", "passed"])
        return EXIT_OK if ok else EXIT_FAIL
    if args.value is None or args.value <= 0:
        raise UsageError("a positive value is required")
    sols = moonshine.decompose_coefficient(args.value, degrees, args.max_parts, args.limit)
    payload = {"value": args.value, "family": args.family,
               "decompositions": [{str(k): m for k, m in sorted(s.items())} for s in sols]}
    _emit(args, payload, [[json.dumps(d, sort_keys=True)] for d in payload["decompositions"]],
          ["parts"])
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="ruvoa", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        return sp

    s = common(sub.add_parser("series", help="trace series of a class"))
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--space", choices=moonshine.SPACES, default=moonshine.W)
    s.add_argument("--sign", choices=("+", "-"), default="+")
    s.add_argument("--qmax", type=_frac, default=Fraction(2),
                   help="q-order above the leading term (default 2)")
    s.set_defaults(func=cmd_series)

    s = common(sub.add_parser("character", help="two-variable character of 1/phi(1^n)"))
    s.add_argument("--n", type=int, default=28)
    s.add_argument("--qmax", type=_frac, default=Fraction(7, 2))
    s.set_defaults(func=cmd_character)

    s = common(sub.add_parser("lattice", help="lattice construction, enumeration, quartic invariant"))
    s.add_argument("action", choices=("verify", "enumerate", "delta"))
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--checkpoint")
    s.add_argument("--resume", help="resume from (and keep updating) this checkpoint")
    s.add_argument("--vectors", help="read minimal vectors from this JSON-lines file")
    s.add_argument("--vectors-out", help="write minimal vectors to this JSON-lines file")
    s.add_argument("--delta-out", help="write the quartic invariant to this JSON file")
    s.add_argument("--check-invariance", action="store_true")
    s.add_argument("--verbose", "-v", action="store_true")
    s.set_defaults(func=cmd_lattice)

    s = common(sub.add_parser("voa-check", help="mode relations of the Weyl-module algebra"))
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--mmax", type=int, default=3)
    s.add_argument("--qmax", type=_frac, default=None, help="degree window (default 4, twisted 3)")
    s.add_argument("--max-zero", type=int, default=None)
    s.add_argument("--twisted", action="store_true")
    s.add_argument("--counts-only", action="store_true",
                   help="compare graded dimensions with the series extraction only")
    s.set_defaults(func=cmd_voa_check)

    s = common(sub.add_parser("genus-zero", help="numerical modular checks"))
    s.add_argument("--classes", help="comma separated (default: all nonconstant classes)")
    s.add_argument("--tolerance", type=float, default=moonshine.DEFAULT_TOLERANCE)
    s.add_argument("--order", type=int, default=20)
    s.set_defaults(func=cmd_genus_zero)

    s = common(sub.add_parser("report", help="per-class report"))
    s.add_argument("--classes")
    s.add_argument("--order", type=int, default=20)
    s.add_argument("--tolerance", type=float, default=moonshine.DEFAULT_TOLERANCE)
    s.add_argument("--no-modular", action="store_true")
    s.set_defaults(func=cmd_report)

    s = common(sub.add_parser("decompose", help="degree decompositions of coefficients"))
    s.add_argument("value", type=int, nargs="?")
    s.add_argument("--family", choices=("ru", "cover"), default="ru")
    s.add_argument("--max-parts", type=int, default=6)
    s.add_argument("--limit", type=int, default=50)
    s.add_argument("--identities", action="store_true", help="check the stored identities")
    s.set_defaults(func=cmd_decompose)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "voa-check":
        if args.qmax is None:
            args.qmax = Fraction(3) if args.twisted else Fraction(4)
        if args.max_zero is None:
            args.max_zero = 4 if args.twisted else 2
    try:
        return args.func(args)
    except UsageError as exc:
        _log("error: %s" % exc)
        return EXIT_USAGE
    except moonshine.RecognitionError as exc:
        _log("verification failed: %s" % exc)
        return EXIT_FAIL
    except (frameshape.FrameShapeError, qseries.ConfigurationError, ValueError) as exc:
        _log("error: %s" % exc)
        return EXIT_USAGE


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
