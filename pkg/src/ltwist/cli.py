"""Command-line surface.

Subcommands: lvalue, classnumber, cesaro, dirichlet-avg, fock, qseries,
cocycle, report.  Exit codes: 0 all checks pass, 1 a verified identity
failed, 2 usage or configuration error.  Configuration precedence for
`report`: defaults < config file < LTWIST_* environment < flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ltwist.exactnum import rat, scalar_str
from ltwist.report import (
    RunConfig,
    config_from_env,
    config_from_mapping,
    load_config_file,
    report_all,
    report_to_csv,
    report_to_json,
    report_to_text,
)

FOCK_CHECK_IDS = ("2.3", "2.4", "3.1", "3.28", "scaling")
QSERIES_IDS = ("euler", "jacobi", "314", "316", "312", "char-cross")


def _char(N: int, index: int):
    from ltwist.characters import dirichlet_characters

    chars = dirichlet_characters(N)
    if not 0 <= index < len(chars):
        raise SystemExit(f"character index out of range (0..{len(chars)-1})")
    return chars[index]


def cmd_lvalue(args) -> int:
    from ltwist.lvalues import l_minus_one, l_zero

    chi = _char(args.modulus, args.char)
    value = l_zero(chi) if args.point == 0 else l_minus_one(chi)
    print(scalar_str(value))
    return 0


def cmd_classnumber(args) -> int:
    from ltwist.lvalues import class_number_imag_quadratic

    print(class_number_imag_quadratic(args.q))
    return 0


def cmd_cesaro(args) -> int:
    from ltwist import summation
    from ltwist.lvalues import l_minus_one, l_zero

    chi = _char(args.modulus, args.char)
    doc: dict = {
        "series": f"sum chi(i){'*i' if args.weight == 'linear' else ''} mod {args.modulus}",
    }
    if args.exact:
        value = summation.limit_exact_periodic(chi, args.weight)
        doc.update(mode="exact-closed-form", value=scalar_str(value), residual=None)
    else:
        series = summation.periodic_series(chi, args.weight)
        rep = summation.limit_numeric(
            summation.partial_sums(series), args.depth, args.terms, rat_from(args.tol)
        )
        if not rep.converged:
            doc.update(mode=rep.mode, value="divergent", residual=rep.residual,
                       error=rep.message)
            print(json.dumps(doc, sort_keys=True))
            return 1
        doc.update(mode=rep.mode, value=_fmt_num(rep.value), residual=rep.residual)
    print(json.dumps(doc, sort_keys=True))
    return 0


def rat_from(text):
    if isinstance(text, str) and "/" in text:
        p, q = text.split("/")
        return rat(int(p), int(q))
    return float(text)


def _fmt_num(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.12e}{'+' if v.imag >= 0 else '-'}{abs(v.imag):.12e}j"
    return f"{float(v):.12e}"


def cmd_dirichlet_avg(args) -> int:
    from ltwist import summation

    chi = _char(args.modulus, args.char)
    value = summation.averaged_dirichlet(
        chi, rat_from(args.s), args.terms, precision_bits=args.precision
    )
    value = complex(value)
    doc = {
        "series": f"averaged L(s, chi) at s={args.s}, chi index {args.char} mod {args.modulus}",
        "mode": f"numeric(n_terms={args.terms}, precision={args.precision})",
        "value": _fmt_num(value),
        "residual": None,
    }
    print(json.dumps(doc, sort_keys=True))
    return 0


def cmd_fock_verify(args) -> int:
    from ltwist import fock
    from ltwist.characters import dirichlet_characters, even_twist_group

    N, D = args.modulus, args.cutoff
    which = args.theorem or FOCK_CHECK_IDS
    if isinstance(which, str):
        which = (which,)
    G = even_twist_group(N)
    rows = []

    def record(check, res):
        rows.append({
            "check": check,
            "status": "pass" if res.passed else "fail",
            "cases": res.cases,
            "witness": None if res.passed else str(res.witness),
        })

    try:
        for check in which:
            if check == "2.3":
                ok, cases, witness = True, 0, None
                for chi in G.elements:
                    for k in range(-6, 7):
                        for n in range(-2, 3):
                            res = fock.verify_lemma_2_3(chi, k, n, D)
                            cases += 1
                            if not res.passed and ok:
                                ok, witness = False, res.witness
                record("2.3", fock.VerifyResult(ok, cases, witness))
            elif check == "2.4":
                case_log: list = []
                res = fock.verify_theorem_2_4_suite(G, D, case_log=case_log)
                record("2.4", res)
                if args.json:
                    rows[-1]["cases_detail"] = [
                        {"chi1": a, "chi2": b, "m": m, "n": n,
                         "status": "pass" if ok else "fail",
                         "witness": None if ok else str(w)}
                        for (a, b, m, n, ok, w) in case_log
                    ]
            elif check == "3.1":
                record("3.1", fock.verify_theorem_3_1(G, D))
            elif check == "3.28":
                ok = True
                for i in range(1, len(G) + 1):
                    res = fock.verify_eq_3_28(N, i)
                    ok = ok and res.passed
                record("3.28", fock.VerifyResult(ok, len(G)))
            elif check == "scaling":
                ok, cases = True, 0
                for l in (2, 3):
                    for (m, n) in ((1, -1), (1, 0)):
                        res = fock.scaling_embed_check(
                            dirichlet_characters(N)[0], l, m, n, D
                        )
                        ok, cases = ok and res.passed, cases + res.cases
                record("scaling", fock.VerifyResult(ok, cases))
            else:
                raise SystemExit(f"unknown check id {check!r}")
    except ValueError as exc:
        if "cutoff too small" in str(exc):
            rows.append({"check": "window", "status": "skip", "cases": 0,
                         "witness": str(exc)})
        else:
            raise
    if args.json:
        print(json.dumps({"modulus": N, "cutoff": D, "rows": rows}, sort_keys=True))
    else:
        for r in rows:
            line = f"{r['status'].upper():4}  {r['check']:<8} cases={r['cases']}"
            if r["witness"]:
                line += f"  [{r['witness']}]"
            print(line)
    return 0 if all(r["status"] != "fail" for r in rows) else 1


def cmd_fock_qtrace(args) -> int:
    from ltwist import fock
    from ltwist.characters import even_twist_group

    G = even_twist_group(args.modulus)
    series = fock.qtrace(G, args.index, args.mode, args.order)
    terms = ", ".join(
        f"q^({e}) * {scalar_str(c)}" for e, c in series.terms()[:12]
    )
    print(json.dumps({
        "modulus": args.modulus,
        "index": args.index,
        "mode": args.mode,
        "offset": str(series.offset),
        "terms": terms,
    }, sort_keys=True))
    return 0


def cmd_qseries_verify(args) -> int:
    from ltwist import fock, qseries
    from ltwist.characters import even_twist_group

    ident = args.identity
    order = args.order
    if order < 1:
        raise SystemExit("order must be positive")
    ok = True
    detail = ""
    if ident == "euler":
        ok = qseries.euler_check(order)
    elif ident == "jacobi":
        ok = qseries.jacobi_check(order, args.z_range)
    elif ident == "314":
        lhs, rhs = qseries.specialize_314(args.k, args.j, order)
        diff = lhs.first_difference(rhs)
        ok, detail = diff is None, f"first difference at {diff}" if diff else ""
    elif ident == "316":
        ok = qseries.verify_316(args.k, args.j, order)
    elif ident == "312":
        ok = qseries.eta_theta_check(order)
    elif ident == "char-cross":
        G = even_twist_group(2 * args.k + 1)
        for i in range(1, args.k + 1):
            energy = fock.vacuum_energies(G, i)
            tr = fock.qtrace(G, i, "char", max(order, 2 * (2 * args.k + 1)))
            mc = qseries.minimal_char(args.k, energy.residue, order)
            bound = min(tr.order, mc.order)
            if tr.truncate(bound) != mc.truncate(bound):
                ok, detail = False, f"i={i}"
                break
    else:
        raise SystemExit(f"unknown identity {ident!r}")
    print(json.dumps({"identity": ident, "order": order,
                      "status": "pass" if ok else "fail",
                      "detail": detail}, sort_keys=True))
    return 0 if ok else 1


def cmd_qseries_modular(args) -> int:
    from ltwist import qseries

    residual, _ = qseries.modular_s_check(
        args.k, order=args.order, precision_bits=args.precision
    )
    print(json.dumps({"k": args.k, "order": args.order,
                      "precision_bits": args.precision,
                      "residual": f"{residual:.6e}"}, sort_keys=True))
    return 0


def cmd_cocycle(args) -> int:
    from ltwist import cocycle

    sys_ = cocycle.build_system(args.field, args.height)
    dim, basis = cocycle.nullspace_dim(sys_)
    fits = [cocycle.fit_cubic(sys_, v) is not None for v in basis]
    ok = dim == 2 and all(fits)
    print(json.dumps({
        "field": args.field,
        "height": args.height,
        "dimension": dim,
        "basis_is_m_m3": all(fits),
        "status": "pass" if ok else "fail",
    }, sort_keys=True))
    return 0 if ok else 1


def cmd_report(args) -> int:
    cfg = RunConfig()
    if args.config:
        cfg = load_config_file(args.config, cfg)
    cfg = config_from_env(os.environ, cfg)
    overrides = {}
    for key in ("cutoff", "seed", "jobs", "n_terms", "precision_bits"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if args.format:
        overrides["output_format"] = args.format
    if args.timings:
        overrides["timings"] = True
    cfg = config_from_mapping(overrides, cfg)
    doc = report_all(cfg)
    fmt = cfg.output_format
    text = {"json": report_to_json, "csv": report_to_csv, "text": report_to_text}[fmt](doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if doc["summary"]["failed"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ltwist",
        description="Exact verification workbench for special L-values, "
                    "divergent-series axioms, twisted oscillator algebras, "
                    "and q-series identities.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("lvalue", help="exact special value L(0) or L(-1)")
    q.add_argument("--modulus", type=int, required=True)
    q.add_argument("--char", type=int, default=0, help="character index")
    q.add_argument("--point", type=int, choices=(0, -1), required=True)
    q.set_defaults(fn=cmd_lvalue)

    q = sub.add_parser("classnumber", help="class number of Q(sqrt(-q))")
    q.add_argument("--q", type=int, required=True)
    q.set_defaults(fn=cmd_classnumber)

    q = sub.add_parser("cesaro", help="averaged limit of a twisted series")
    q.add_argument("--modulus", type=int, required=True)
    q.add_argument("--char", type=int, default=0)
    q.add_argument("--weight", choices=("const", "linear"), default="const")
    q.add_argument("--depth", type=int, default=1)
    q.add_argument("--terms", type=int, default=100_000)
    q.add_argument("--tol", default="1e-3")
    q.add_argument("--exact", action="store_true")
    q.set_defaults(fn=cmd_cesaro)

    q = sub.add_parser("dirichlet-avg", help="averaged partial sums of L(s, chi)")
    q.add_argument("--modulus", type=int, required=True)
    q.add_argument("--char", type=int, default=0)
    q.add_argument("--s", required=True)
    q.add_argument("--terms", type=int, default=100_000)
    q.add_argument("--precision", type=int, default=53)
    q.set_defaults(fn=cmd_dirichlet_avg)

    q = sub.add_parser("fock", help="oscillator-algebra verifications")
    fsub = q.add_subparsers(dest="fock_command", required=True)
    fv = fsub.add_parser("verify", help="bracket and energy identities")
    fv.add_argument("--modulus", type=int, required=True)
    fv.add_argument("--cutoff", type=int, default=30)
    fv.add_argument("--theorem", choices=FOCK_CHECK_IDS, default=None,
                    help="one identity id from the catalog; default all")
    fv.add_argument("--json", action="store_true")
    fv.set_defaults(fn=cmd_fock_verify)
    fq = fsub.add_parser("qtrace", help="graded traces on component vacua")
    fq.add_argument("--modulus", type=int, required=True)
    fq.add_argument("--index", type=int, required=True)
    fq.add_argument("--mode", choices=("char", "kernel"), required=True)
    fq.add_argument("--order", type=int, default=30)
    fq.set_defaults(fn=cmd_fock_qtrace)

    q = sub.add_parser("qseries", help="series identity verifications")
    qsub = q.add_subparsers(dest="qseries_command", required=True)
    qv = qsub.add_parser("verify")
    qv.add_argument("--identity", choices=QSERIES_IDS, required=True)
    qv.add_argument("--k", type=int, default=2)
    qv.add_argument("--j", type=int, default=1)
    qv.add_argument("--order", type=int, default=50)
    qv.add_argument("--z-range", type=int, default=6)
    qv.set_defaults(fn=cmd_qseries_verify)
    qm = qsub.add_parser("modular")
    qm.add_argument("--k", type=int, default=2)
    qm.add_argument("--order", type=int, default=400)
    qm.add_argument("--precision", type=int, default=256)
    qm.set_defaults(fn=cmd_qseries_modular)

    q = sub.add_parser("cocycle", help="central-term null-space check")
    csub = q.add_subparsers(dest="cocycle_command", required=True)
    cv = csub.add_parser("verify")
    cv.add_argument("--field", choices=("Q", "Q(sqrt2)", "Q(sqrt5)", "Q(i)"),
                    default="Q")
    cv.add_argument("--height", type=int, default=4)
    cv.set_defaults(fn=cmd_cocycle)

    q = sub.add_parser("report", help="run the whole suite, emit a document")
    q.add_argument("--config", help="flat key=value configuration file")
    q.add_argument("--format", choices=("json", "csv", "text"), default=None)
    q.add_argument("--out", help="write the document here instead of stdout")
    q.add_argument("--jobs", type=int, default=None)
    q.add_argument("--seed", type=int, default=None)
    q.add_argument("--cutoff", type=int, default=None)
    q.add_argument("--n-terms", dest="n_terms", type=int, default=None)
    q.add_argument("--precision-bits", dest="precision_bits", type=int, default=None)
    q.add_argument("--timings", action="store_true",
                   help="include per-check runtimes (breaks byte-identity)")
    q.set_defaults(fn=cmd_report)
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        return int(exc.code or 0)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(dispatch())


if __name__ == "__main__":
    main()
