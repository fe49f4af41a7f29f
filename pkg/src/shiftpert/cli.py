"""Command-line front end.

Exit codes: 0 success, 1 a check or golden case failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .classification import CnuStatus, classify, format_complex, report_to_dict, report_to_text
from .corpus import export_corpus, run_corpus
from .kernel import Tolerance
from .model import SpecFormatError, load_spec
from .oracle import OracleConfig, random_contraction, verify

SEARCH_COLUMNS = [
    "d", "k", "index", "contraction", "dim_DT", "dim_DTstar", "inclusion",
    "douglas_lambda", "hyponormal", "analytic", "cnu", "point_spectrum",
]

SEARCH_EPILOG = """\
CSV columns (fixed order):
  d, k, index          dimensions and sample index
  contraction          true/false
  dim_DT, dim_DTstar   numerical defect indices
  inclusion            D_T contained in D_T*
  douglas_lambda       least lambda with D_T^2 <= lambda D_T*^2 (empty if none)
  hyponormal           true/false/n/a
  analytic             true/false/inconclusive
  cnu                  certified/not_cnu/inconclusive/n/a
  point_spectrum       non-zero eigenvalues as re+imi, ';'-separated
Lines starting with '#' are summary counts.
"""


def _add_tolerance_flags(p: argparse.ArgumentParser):
    default = Tolerance()
    p.add_argument("--eps-psd", type=float, default=default.eps_psd, help="PSD slack (default: %(default)g)")
    p.add_argument("--eps-rank", type=float, default=default.eps_rank,
                   help="relative singular-value cut-off (default: %(default)g)")
    p.add_argument("--eps-eig", type=float, default=default.eps_eig,
                   help="eigenvalue grouping radius (default: %(default)g)")
    p.add_argument("--max-depth", type=int, default=64, help="c.n.u. iteration cap (default: %(default)s)")


def _tolerance(args) -> Tolerance:
    return Tolerance(args.eps_psd, args.eps_rank, args.eps_eig)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftpert",
        description="Classify finite-rank perturbations T = S_k + F of the unilateral shift.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify an operator-spec JSON file")
    p.add_argument("path")
    p.add_argument("--format", choices=["json", "text"], default="text")
    _add_tolerance_flags(p)

    p = sub.add_parser("verify", help="cross-check closed forms against dense truncations")
    p.add_argument("path", nargs="?")
    p.add_argument("--random", action="store_true", help="verify seeded random contractions instead of a file")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=int, default=None, help="fix d in random mode (default: cycle 1..4)")
    p.add_argument("--k", type=int, default=None, help="fix k in random mode (default: cycle 1..3)")
    p.add_argument("--margin", type=float, default=0.05)
    p.add_argument("--r-max", type=int, default=4)
    p.add_argument("--N", type=int, default=None, help="truncation size (default: per check)")
    p.add_argument("--tol-match", type=float, default=1e-10)
    p.add_argument("--format", choices=["json", "text"], default="text")
    _add_tolerance_flags(p)

    p = sub.add_parser(
        "search", help="classify random contractions and write CSV",
        epilog=SEARCH_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--margin", type=float, default=0.05)
    p.add_argument("--jobs", type=int, default=1, help="worker processes; output order is fixed")
    _add_tolerance_flags(p)

    p = sub.add_parser("corpus", help="run the golden cases")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--export", metavar="DIR", help="also write spec and expectation JSON files to DIR")
    _add_tolerance_flags(p)
    return parser


def cmd_classify(args, out) -> int:
    try:
        spec = load_spec(args.path)
    except (OSError, SpecFormatError) as exc:
        print(f"error: {args.path}: {exc}", file=sys.stderr)
        return 2
    report = classify(spec, _tolerance(args), args.max_depth)
    if args.format == "json":
        out.write(json.dumps(report_to_dict(report), indent=2) + "\n")
    else:
        out.write(report_to_text(report) + "\n")
    return 0


def _random_specs(args):
    for i in range(args.samples):
        d = args.d if args.d is not None else 1 + i % 4
        k = args.k if args.k is not None else 1 + (i // 4) % 3
        yield f"random[{i}] d={d} k={k}", random_contraction(d, k, [args.seed, i], args.margin)


def cmd_verify(args, out) -> int:
    if args.random == (args.path is not None):
        print("error: give exactly one of PATH or --random", file=sys.stderr)
        return 2
    if args.samples < 1 or args.r_max < 1:
        print("error: --samples and --r-max must be positive", file=sys.stderr)
        return 2
    if args.random:
        if (args.d is not None and args.d < 1) or (args.k is not None and args.k < 1):
            print("error: --d and --k must be positive", file=sys.stderr)
            return 2
        specs = list(_random_specs(args))
    else:
        try:
            specs = [(args.path, load_spec(args.path))]
        except (OSError, SpecFormatError) as exc:
            print(f"error: {args.path}: {exc}", file=sys.stderr)
            return 2
    config = OracleConfig(N=args.N, tol_match=args.tol_match, seed=args.seed)
    tol = _tolerance(args)
    all_ok = True
    records = []
    for label, spec in specs:
        try:
            results = verify(spec, args.r_max, config, tol)
        except ValueError as exc:
            print(f"error: {label}: {exc}", file=sys.stderr)
            return 2
        for res in results:
            all_ok &= res.passed
            records.append({"instance": label, "check": res.name, "passed": res.passed,
                            "discrepancy": res.discrepancy, "detail": res.detail})
    if args.format == "json":
        out.write(json.dumps({"passed": all_ok, "checks": records}, indent=2) + "\n")
    else:
        for rec in records:
            status = "PASS" if rec["passed"] else "FAIL"
            out.write(f"{status} {rec['instance']} {rec['check']} max_err={rec['discrepancy']:.3e}\n")
        out.write(f"{'all checks passed' if all_ok else 'some checks FAILED'} ({len(records)} checks)\n")
    return 0 if all_ok else 1


def _v(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    return x.value


def _search_row(job):
    d, k, seed, i, margin, tol, max_depth = job
    spec = random_contraction(d, k, [seed, i], margin)
    rep = classify(spec, tol, max_depth)
    cnu = rep.cnu.verdict.value if isinstance(rep.cnu, CnuStatus) else rep.cnu.value
    lam = "" if rep.douglas_lambda is None else f"{rep.douglas_lambda:.12g}"
    spectrum = ";".join(format_complex(p.value) for p in rep.point_spectrum)
    return [d, k, i, _v(rep.is_contraction), rep.dim_DT, rep.dim_DTstar, _v(rep.inclusion),
            lam, _v(rep.hyponormal), _v(rep.analytic), cnu, spectrum]


def cmd_search(args, out) -> int:
    if args.samples < 1 or args.d < 1 or args.k < 1 or not 0 < args.margin < 1 or args.jobs < 1:
        print("error: need --samples >= 1, --d >= 1, --k >= 1, 0 < --margin < 1, --jobs >= 1",
              file=sys.stderr)
        return 2
    tol = _tolerance(args)
    jobs = [(args.d, args.k, args.seed, i, args.margin, tol, args.max_depth) for i in range(args.samples)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_search_row, jobs, chunksize=8))
    else:
        rows = [_search_row(j) for j in jobs]

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SEARCH_COLUMNS)
    writer.writerows(rows)
    col = {name: i for i, name in enumerate(SEARCH_COLUMNS)}
    contractions = [r for r in rows if r[col["contraction"]] == "true"]
    incl = [r for r in contractions if r[col["inclusion"]] == "true"]
    hypo = [r for r in incl if r[col["hyponormal"]] == "true"]
    frac = f"{len(hypo) / len(incl):.6f}" if incl else "nan"
    buf.write(f"# samples={len(rows)} contractions={len(contractions)} inclusion={len(incl)} "
              f"hyponormal_given_inclusion={len(hypo)}\n")
    buf.write(f"# hyponormal_fraction_given_inclusion={frac}\n")
    out.write(buf.getvalue())
    return 0


def cmd_corpus(args, out) -> int:
    results = run_corpus(_tolerance(args), max_depth=args.max_depth)
    if args.export:
        export_corpus(args.export)
    if args.format == "json":
        payload = [{"name": r.name, "passed": r.passed, "diffs": r.diffs} for r in results]
        out.write(json.dumps({"passed": all(r.passed for r in results), "cases": payload}, indent=2) + "\n")
    else:
        for r in results:
            out.write(f"{'PASS' if r.passed else 'FAIL'} {r.name}\n")
            for diff in r.diffs:
                out.write(f"    {diff}\n")
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {"classify": cmd_classify, "verify": cmd_verify, "search": cmd_search, "corpus": cmd_corpus}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _tolerance(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return COMMANDS[args.command](args, out)


if __name__ == "__main__":
    sys.exit(main())
