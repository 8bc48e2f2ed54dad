"""
taufact_app.py

Command-line front end for the τ-factorization toolkit.

This script:
- Loads environment variables (TAUFACT_*) from .env
- Parses ring specs such as "Z/12", "GF(4)" or "GF(2) x Z/4"
- Emits structured JSON logs via logger.get_logger() to stderr and logs/taufact.jsonl
- Provides:
    * info            ring summary and the présimplifiable / strongly associate flags
    * classify        the four irreducibility flags of one element
    * check           one factorization or relation property, as a verdict
    * graph           the zero-divisor graph (optionally as DOT)
    * factorizations  every non-trivial τ-factorization of an element up to --max-len
    * verify-paper    replay the catalogue of published examples as assertions
    * corpus          sweep a range of rings through the corpus pipeline

Exit codes: 0 yes/pass, 1 no/fail, 2 bad ring spec or relation, 3 bad element,
4 verdict only verified up to the search bound.

How to run:

    python taufact_app.py info "Z/4"
    python taufact_app.py classify "Z/6" full 2
    python taufact_app.py check "Z/12" tau_z bfr
    python taufact_app.py graph "Z/30" plain --dot
    python taufact_app.py factorizations "Z/30" tau_z 0 --max-len 3
    python taufact_app.py verify-paper --json
    python taufact_app.py corpus "Z/2..Z/30" full,tau_z,tau_z_delta --max-len 6 --jobs 4
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Any, Dict, Iterable, List, Optional

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

from logger import get_logger
from taufact.corpus import aiter_corpus, build_entries, parse_range, parse_taus, summarize
from taufact.errors import (
    ElementError,
    RingSpecError,
    SearchBoundError,
    SearchBudgetExceeded,
    TauRelationError,
    TheoremMismatch,
)
from taufact.factorization.factor import enumerate_factorizations
from taufact.factorization.irr import Alpha, classify
from taufact.factorization.props import Beta, evaluator, verify_ff_diagram
from taufact.paper import nilpotent_product_tau_z, standard_tau_z, verify_paper
from taufact.structures.associates import AssocKind, cached_ring_class
from taufact.structures.ring import ring_from_text
from taufact.structures.taurel import TauProperty, check_property, pairs_record, parse_tau
from taufact.structures.zdgraph import (
    GraphMode,
    build,
    clique_census,
    clique_number,
    diameter,
    export_dot,
    is_connected,
    to_adjacency_json,
)
from taufact.verdicts import (
    EXIT_BOUNDED,
    EXIT_ELEMENT,
    EXIT_NO,
    EXIT_PARSE,
    EXIT_YES,
    PropVerdict,
)
from utils import to_jsonable, write_bug_report

log = get_logger()

FACTORIZATION_PROPS = ("atomic", "accp", "tau_accp", "bfr", "ffr", "wffr", "df", "hfr", "ufr")
RELATION_PROPS = tuple(p.value for p in TauProperty)
CHECK_PROPS = FACTORIZATION_PROPS + RELATION_PROPS + ("ff_diagram",)


# Helper functions


def pretty_print_section(title: str, content: Any) -> None:
    """Print a section with a title and nicely formatted content."""
    print("\n" + "=" * 80)
    print(title)
    print("=" * 80)
    if isinstance(content, dict):
        for k, v in content.items():
            print(f"{k}: {v}")
    elif isinstance(content, list):
        for item in content:
            print(item)
    else:
        print(content)


def emit_json(command: str, records: Iterable[Dict[str, Any]]) -> None:
    """Line-delimited JSON, one record per line, each tagged with its command."""
    for record in records:
        print(json.dumps({"command": command, **to_jsonable(record)}, sort_keys=True, ensure_ascii=False))
    sys.stdout.flush()


def _mark(value: bool) -> str:
    return "✓" if value else "✗"


def _beta(args: argparse.Namespace) -> Beta:
    if args.strong:
        return None
    return AssocKind(args.beta)


def _verdict_for(args: argparse.Namespace, parser: argparse.ArgumentParser) -> PropVerdict:
    R = ring_from_text(args.ring)
    t = parse_tau(R, args.tau)
    prop = args.property

    if prop in RELATION_PROPS:
        kind = AssocKind(args.kind) if args.kind else None
        return check_property(t, prop, kind=kind, max_len=args.max_len)

    ev = evaluator(R, t, args.max_len)
    alpha = Alpha(args.alpha)
    if prop == "atomic":
        return ev.atomic(alpha)
    if prop == "accp":
        return ev.accp()
    if prop == "tau_accp":
        return ev.tau_accp()
    if prop == "bfr":
        return ev.bfr()
    if prop == "ffr":
        return ev.ffr(_beta(args))
    if prop == "wffr":
        return ev.wffr(_beta(args))
    if prop == "df":
        return ev.df(alpha, _beta(args))
    if prop == "hfr":
        return ev.hfr(alpha)
    if args.strong:
        parser.error("ufr compares factorizations up to an associate relation; drop --strong")
    return ev.ufr(alpha, AssocKind(args.beta))


# Commands


def cmd_info(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    R = ring_from_text(args.ring)
    summary: Dict[str, Any] = {
        **R.to_json(),
        "field": R.is_field,
        "domain": R.is_domain,
        "reduced": R.is_reduced,
        "local": R.is_local,
        **cached_ring_class(R),
    }
    log.info("cli_info", extra={"extra_data": {"ring": R.name, "order": R.order}})

    if args.json:
        emit_json("info", [summary])
    else:
        pretty_print_section(f"Ring {R.name}", summary)
    return EXIT_YES


def cmd_classify(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    R = ring_from_text(args.ring)
    t = parse_tau(R, args.tau)
    a = R.parse_element(args.element)
    flags = classify(R, t, a, args.max_len)
    record = {"ring_spec": R.name, "tau": t.name, **flags.to_record(R)}
    log.info("cli_classify", extra={"extra_data": {"ring": R.name, "tau": t.name, "elem": record["elem"]}})

    if args.json:
        emit_json("classify", [record])
    else:
        pretty_print_section(
            f"Irreducibility of {record['elem']} in {R.name} under {t.name}",
            {
                "irr": _mark(flags.irr),
                "strong-irr": _mark(flags.strong),
                "m-irr": _mark(flags.m),
                "vs-irr": _mark(flags.vs) + ("  (a ≇ a)" if flags.precondition_failed else ""),
                "verified_up_to": flags.verified_up_to,
                "m readings diverge": flags.m_readings_diverge,
            },
        )
        if flags.witnesses:
            pretty_print_section("Witnesses", flags.witnesses)

    uncertain = not flags.exact and any((flags.irr, flags.strong, flags.m, flags.vs))
    return EXIT_BOUNDED if uncertain else EXIT_YES


def cmd_check(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.property == "ff_diagram":
        return _check_diagram(args)

    verdict = _verdict_for(args, parser)
    record = {"ring_spec": args.ring, "tau": args.tau, **verdict.to_record()}
    log.info(
        "cli_check",
        extra={"extra_data": {"ring": args.ring, "tau": args.tau, "property": verdict.prop,
                              "verdict": verdict.verdict.value}},
    )

    if args.json:
        if args.property in RELATION_PROPS:
            record["pairs"] = pairs_record(parse_tau(ring_from_text(args.ring), args.tau))
        emit_json("check", [record])
    else:
        pretty_print_section(f"{verdict.prop} for {args.ring} under {args.tau}", record)
    return verdict.exit_code


def _check_diagram(args: argparse.Namespace) -> int:
    R = ring_from_text(args.ring)
    t = parse_tau(R, args.tau)
    diagram = verify_ff_diagram(R, t, args.max_len)
    record = diagram.to_record()

    if args.json:
        emit_json("check", [record])
    else:
        pretty_print_section(
            f"Finite-factorization diagram for {R.name} under {t.name}",
            {
                "star (refinable + associate preserving)": diagram.star,
                "star exact": diagram.star_exact,
                "arrows checked": diagram.arrows_checked,
                "violations": len(diagram.violations),
                "inconclusive": len(diagram.inconclusive),
                "informational": len(diagram.informational),
            },
        )
        for v in diagram.violations:
            print(f"  VIOLATED {v['arrow']}")

    if diagram.violations:
        return EXIT_NO
    return EXIT_BOUNDED if diagram.inconclusive else EXIT_YES


def cmd_graph(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    R = ring_from_text(args.ring)
    zg = build(R, args.mode)

    if args.dot:
        sys.stdout.write(export_dot(zg))
        return EXIT_YES

    diam = diameter(zg)
    record = {
        "ring_spec": R.name,
        **to_adjacency_json(zg),
        "omega": clique_number(zg),
        "connected": is_connected(zg),
        "diameter": diam if diam != float("inf") else "inf",
        "census": clique_census(zg).to_record(),
    }
    if args.json:
        emit_json("graph", [record])
    else:
        pretty_print_section(f"Zero-divisor graph of {R.name} ({zg.mode.value})", record)
    return EXIT_YES


def cmd_factorizations(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    R = ring_from_text(args.ring)
    t = parse_tau(R, args.tau)
    a = R.parse_element(args.element)
    result = enumerate_factorizations(R, t, a, args.max_len)
    record = {"ring_spec": R.name, "tau": t.name, **result.to_record(R)}

    if args.json:
        emit_json("factorizations", [record])
    else:
        pretty_print_section(
            f"τ-factorizations of {record['target']} in {R.name} under {t.name} (length <= {args.max_len})",
            [" · ".join(m) for m in record["factorizations"]] or ["(only trivial factorizations)"],
        )
        print(f"\ntrivial class: {record['trivial_class']}")
        print(f"complete: {record['complete']}")
    return EXIT_YES if result.complete else EXIT_BOUNDED


def cmd_verify_paper(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    builder = nilpotent_product_tau_z if args.corrupt_tau_z else standard_tau_z
    report = verify_paper(builder)

    if args.json:
        emit_json("verify-paper", [c.to_record() for c in report.checks])
    else:
        pretty_print_section(
            "Published examples",
            [f"[{'PASS' if c.passed else 'FAIL'}] {c.tag}: {c.name}" for c in report.checks],
        )
        for c in report.failed:
            pretty_print_section(f"FAILED {c.tag}: {c.name}", c.detail)
        print(f"\n{len(report.checks) - len(report.failed)}/{len(report.checks)} passed")
    return EXIT_YES if report.passed else EXIT_NO


async def _stream_corpus(args: argparse.Namespace, entries: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    results = []
    async for result in aiter_corpus(entries, args.jobs):
        results.append(result)
        if args.json:
            emit_json("corpus", result["records"])
        else:
            status = "ok" if not result["violations"] else f"{len(result['violations'])} violation(s)"
            print(f"{result['ring_spec']:<36} records={len(result['records']):<5} {status}")
    return results


def cmd_corpus(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    specs = parse_range(args.range)
    taus = parse_taus(args.taus)
    entries = build_entries(specs, taus, max_len=args.max_len)
    log.info("cli_corpus", extra={"extra_data": {"rings": len(specs), "taus": taus, "jobs": args.jobs}})

    results = asyncio.run(_stream_corpus(args, entries))
    summary = summarize(results)

    if args.json:
        emit_json("corpus", [{"summary": summary}])
    else:
        pretty_print_section(
            "Corpus summary",
            {k: v for k, v in summary.items() if k not in ("violated", "bug_reports")},
        )
        if summary["violated"]:
            pretty_print_section("Violated invariants", summary["violated"])
            pretty_print_section("Bug reports", summary["bug_reports"])
    return EXIT_YES if summary["passed"] else EXIT_NO


# CLI


def search_len(text: str) -> int:
    """argparse type for --max-len: an integer of at least 2."""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}")
    if value < 2:
        raise argparse.ArgumentTypeError(f"must be at least 2, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taufact",
        description="τ-factorization in finite commutative rings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def ring_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument("ring", help='ring spec, e.g. "Z/12", "GF(4)", "GF(2) x Z/4"')

    def tau_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "tau",
            help="full, empty, tau_z, tau_z_delta, subset:<elems>, ideal:<gen> or explicit:<file.json>",
        )

    def json_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="line-delimited JSON records")

    p = sub.add_parser("info", help="ring summary")
    ring_arg(p)
    json_arg(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("classify", help="irreducibility flags of one non-unit")
    ring_arg(p)
    tau_arg(p)
    p.add_argument("element", help='integer for Z/n and GF(q), tuple "(a,b)" for products')
    p.add_argument("--max-len", type=search_len, default=None)
    json_arg(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("check", help="one property verdict")
    ring_arg(p)
    tau_arg(p)
    p.add_argument("property", choices=CHECK_PROPS)
    p.add_argument("--alpha", choices=[a.value for a in Alpha], default=Alpha.ATOMIC.value)
    p.add_argument("--beta", choices=[k.value for k in AssocKind], default=AssocKind.ASSOCIATE.value)
    p.add_argument("--strong", action="store_true", help="strong variants of ffr/wffr/df (no β)")
    p.add_argument("--kind", choices=[k.value for k in AssocKind], default=None,
                   help="associate flavor for associate_preserving")
    p.add_argument("--max-len", type=search_len, default=None)
    json_arg(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("graph", help="zero-divisor graph")
    ring_arg(p)
    p.add_argument("mode", nargs="?", choices=[m.value for m in GraphMode], default=GraphMode.PLAIN.value)
    p.add_argument("--dot", action="store_true", help="print Graphviz DOT")
    json_arg(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("factorizations", help="non-trivial τ-factorizations of one element")
    ring_arg(p)
    tau_arg(p)
    p.add_argument("element")
    p.add_argument("--max-len", type=search_len, default=4)
    json_arg(p)
    p.set_defaults(func=cmd_factorizations)

    p = sub.add_parser("verify-paper", help="replay the published examples as assertions")
    json_arg(p)
    p.add_argument("--corrupt-tau-z", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("corpus", help="sweep a range of rings")
    p.add_argument("range", help='e.g. "Z/2..Z/60", "products", "products:fields:n<=4"')
    p.add_argument("taus", nargs="?", default="tau_z", help="comma list of full, empty, tau_z, tau_z_delta, sampled")
    p.add_argument("--max-len", type=search_len, default=None)
    p.add_argument("--jobs", type=int, default=1)
    json_arg(p)
    p.set_defaults(func=cmd_corpus)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        return args.func(args, parser)
    except (RingSpecError, TauRelationError, SearchBoundError) as e:
        log.warning("cli_parse_error", extra={"extra_data": {"command": args.command, "error": str(e)}})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ElementError as e:
        log.warning("cli_element_error", extra={"extra_data": {"command": args.command, "error": str(e)}})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ELEMENT
    except SearchBudgetExceeded as e:
        log.warning("cli_search_budget", extra={"extra_data": {"command": args.command, **e.context}})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BOUNDED
    except TheoremMismatch as e:
        path = write_bug_report("theorem_mismatch", e.report)
        log.error("cli_theorem_mismatch", extra={"extra_data": {"theorem": e.theorem, "bug_report": path}})
        print(f"theorem mismatch ({e.theorem}); report written to {path}", file=sys.stderr)
        return EXIT_NO


if __name__ == "__main__":
    sys.exit(main())
