"""The mfk command line: session execution, lemma suites, JSON reports.

Exit codes: 0 all verdicts pass, 1 some verdict failed, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .cosection import cosection_localized_gysin
from .kclass import ClassComparisonError, KClass, SupportViolation, gysin_fiber, localized_class
from .modules import hilbert_series, length, INFINITE, UngradedError, specialize_parameter
from .periodic import homology, tensor
from .rings import ParseError
from .session import Session, SessionError, parse_session
from .suites import SUITES, Report, run_suite


def _module_summary(m):
    try:
        numerator = hilbert_series(m).numerator.serialize()
    except UngradedError:
        numerator = None
    size = length(m)
    return {"numerator": numerator, "length": None if size is INFINITE else size}


def execute_session(session: Session, seed=0, count=None, timings=False):
    """Run every command statement; returns (records, reports-by-suite)."""
    records = []
    for st in session.statements:
        if st.kind == "gb":
            ideal = session.ideals[st.args["ideal"]]
            records.append(
                {
                    "kind": "gb",
                    "inputs": st.echo,
                    "basis": [str(g) for g in ideal.groebner_basis()],
                    "verdict": True,
                }
            )
        elif st.kind == "homology":
            cx = session.complexes[st.args["complex"]]
            coeff = session.coeffs.get(st.args.get("coeff"))
            h_plus, h_minus = homology(cx, coeff)
            records.append(
                {
                    "kind": "homology",
                    "inputs": st.echo,
                    "h_plus": _module_summary(h_plus),
                    "h_minus": _module_summary(h_minus),
                    "verdict": True,
                }
            )
        elif st.kind == "tensor":
            left = session.complexes[st.args["left"]]
            right = session.complexes[st.args["right"]]
            prod = session.complexes.get(st.args.get("as")) or tensor(left, right)
            records.append(
                {
                    "kind": "tensor",
                    "inputs": st.echo,
                    "plus_rank": prod.plus.rank,
                    "minus_rank": prod.minus.rank,
                    "verdict": True,
                }
            )
        elif st.kind == "class":
            cx = session.complexes[st.args["complex"]]
            coeff = session.coeffs.get(st.args.get("coeff"))
            support = session.ideals[st.args["support"]]
            try:
                cls = localized_class(cx, coeff, support)
                records.append(
                    {"kind": "class", "inputs": st.echo, "class": cls.serialize(), "verdict": True}
                )
            except SupportViolation as exc:
                records.append(
                    {"kind": "class", "inputs": st.echo, "error": str(exc), "verdict": False}
                )
        elif st.kind == "gysin":
            cx = session.complexes[st.args["complex"]]
            value = Fraction(st.args["value"])
            fiber = gysin_fiber(cx, value)
            h_plus, h_minus = homology(fiber)
            var = cx.ring.deformation_vars[0]
            sp = specialize_parameter(h_plus, var, value)
            sm = specialize_parameter(h_minus, var, value)
            cls = KClass.from_homology(sp, sm)
            records.append(
                {"kind": "gysin", "inputs": st.echo, "class": cls.serialize(), "verdict": True}
            )
        elif st.kind == "coslocal":
            model = session.cosections[st.args["model"]]
            coeff = session.coeffs[st.args["coeff"]]
            try:
                cls = cosection_localized_gysin(model, coeff)
                records.append(
                    {
                        "kind": "coslocal",
                        "inputs": st.echo,
                        "class": cls.serialize(),
                        "verdict": True,
                    }
                )
            except SupportViolation as exc:
                records.append(
                    {"kind": "coslocal", "inputs": st.echo, "error": str(exc), "verdict": False}
                )
        elif st.kind == "verify":
            suite = st.args["suite"]
            report = run_suite(
                suite,
                seed=st.args.get("seed", seed),
                count=st.args.get("count", count),
                timings=timings,
            )
            records.append(
                {
                    "kind": "verify",
                    "inputs": st.echo,
                    "report": report.to_dict(),
                    "verdict": report.all_pass,
                }
            )
    return records


def _emit(payload: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _session_report(name, records):
    return (
        json.dumps(
            {
                "schema": 1,
                "tool": "mfk",
                "version": __version__,
                "session": name,
                "records": records,
                "all_pass": all(r.get("verdict", False) for r in records),
            },
            sort_keys=True,
            separators=(",", ":"),
        )
        + "\n"
    )


def _records_text(records):
    lines = []
    for r in records:
        mark = "pass" if r.get("verdict") else "FAIL"
        detail = {k: v for k, v in r.items() if k not in ("kind", "inputs", "verdict")}
        lines.append(f"[{mark}] {r['inputs']}  {json.dumps(detail, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mfk",
        description="Exact 2-periodic complex engine: classes, Gysin maps, lemma suites.",
    )
    parser.add_argument("--version", action="version", version=f"mfk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_target):
        if needs_target:
            p.add_argument("target", help="session file (or suite name, for `verify`)")
        p.add_argument("--order", choices=("degrevlex", "lex"), default="degrevlex")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--count", type=int, default=None)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", default=None)
        p.add_argument("--timings", action="store_true", help="include wall times (breaks byte-determinism)")

    for name, blurb in (
        ("verify", "run a lemma suite (by name) or a session's verify statements"),
        ("class", "run a session and report its class statements"),
        ("gb", "run a session and report its gb statements"),
        ("homology", "run a session and report its homology statements"),
        ("tensor", "run a session and report its tensor statements"),
        ("gysin", "run a session and report its gysin statements"),
        ("coslocal", "run a session and report its coslocal statements"),
        ("run", "run a session and report every statement"),
    ):
        p = sub.add_parser(name, help=blurb)
        common(p, True)

    args = parser.parse_args(argv)

    try:
        if args.command == "verify" and args.target in SUITES:
            report = run_suite(args.target, seed=args.seed, count=args.count, timings=args.timings)
            payload = report.to_json() if args.format == "json" else report.to_text()
            _emit(payload, args.out)
            return 0 if report.all_pass else 1

        try:
            with open(args.target, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"mfk: cannot read {args.target!r}: {exc}", file=sys.stderr)
            return 2
        session = parse_session(text, default_order=args.order)
        records = execute_session(session, seed=args.seed, count=args.count, timings=args.timings)
        if args.command != "run":
            records = [r for r in records if r["kind"] == args.command]
        payload = (
            _session_report(args.target, records)
            if args.format == "json"
            else _records_text(records)
        )
        _emit(payload, args.out)
        return 0 if all(r.get("verdict", False) for r in records) else 1
    except (SessionError, ParseError) as exc:
        print(f"mfk: {exc}", file=sys.stderr)
        return 2
    except (SupportViolation, ClassComparisonError) as exc:
        print(f"mfk: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
