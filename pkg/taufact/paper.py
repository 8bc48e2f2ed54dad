"""
Catalogue of replayed facts about τ-factorization in small rings.

Every check is tagged with the statement it replays (Lemma 2.2(5), Thm 5.1(3),
Example (4), ...). Checks that use τ_z obtain it from an injectable builder, so
a faulty builder can be swapped in to confirm that the failures surface in the
Thm 5.1 checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Tuple

from logger import get_logger
from taufact.errors import TaufactError
from taufact.factorization.factor import certify, combine, Factorization, factor_table, tau_divides
from taufact.factorization.irr import Alpha, classify
from taufact.factorization.props import (
    is_alpha_atomic,
    is_bfr,
    is_ffr,
    is_hfr,
    is_ufr,
    satisfies_tau_accp,
    tau_z_criteria,
)
from taufact.structures.associates import AssocKind, cached_ring_class, lemma_2_2_violations, related
from taufact.structures.ring import Ring, ring_from_text
from taufact.structures.taurel import (
    TauKind,
    TauProperty,
    TauRelation,
    check_property,
    make_tau,
    subset_closure,
)
from taufact.structures.zdgraph import GraphMode, build, clique_number, diameter, is_connected
from taufact.verdicts import Verdict

log = get_logger()

TauBuilder = Callable[[Ring], TauRelation]
Outcome = Tuple[bool, Dict[str, Any]]


def standard_tau_z(R: Ring) -> TauRelation:
    return make_tau(R, TauKind.TAU_Z)


def nilpotent_product_tau_z(R: Ring) -> TauRelation:
    """Faulty τ_z: relates a, b whenever ab is nilpotent. Agrees with τ_z on reduced rings."""
    sharp = sorted(R.sharp)
    pairs = {(a, b) for a in sharp for b in sharp if R.mul(a, b) in R.nilpotents}
    return TauRelation(R, frozenset(pairs), TauKind.EXPLICIT)


@dataclass
class PaperCheck:
    tag: str
    name: str
    passed: bool
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_record(self) -> Dict[str, Any]:
        return {"tag": self.tag, "check": self.name, "passed": self.passed, "detail": self.detail}


_CHECKS: List[Tuple[str, str, Callable[[TauBuilder], Outcome]]] = []


def _check(tag: str, name: str):
    def register(fn: Callable[[TauBuilder], Outcome]) -> Callable[[TauBuilder], Outcome]:
        _CHECKS.append((tag, name, fn))
        return fn
    return register


def _el(R: Ring, text: str) -> int:
    return R.parse_element(text)


# Examples of relations

@_check("Example (1)", "full relation: tau-divides is ordinary divides on Z/12")
def _full_divides(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("Z/12")
    t = make_tau(R, TauKind.FULL)
    bad = [
        (R.label(b), R.label(a))
        for a in sorted(R.nonunits)
        for b in sorted(R.sharp)
        if tau_divides(R, t, b, a, nontrivial=False, max_len=3) != R.divides(b, a)
    ]
    return not bad, {"mismatches": bad}


@_check("Example (2)", "empty relation: tau-divides is strong associate on Z/12")
def _empty_divides(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("Z/12")
    t = make_tau(R, TauKind.EMPTY)
    bad = [
        (R.label(b), R.label(a))
        for a in sorted(R.sharp)
        for b in sorted(R.sharp)
        if tau_divides(R, t, b, a, nontrivial=False, max_len=3) != related(R, AssocKind.STRONG, b, a)
    ]
    return not bad, {"mismatches": bad}


@_check("Example (3)", "S x S closure criteria on Z/12")
def _subset_closure(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("Z/12")
    rows = []
    for subset in ([4, 8], [3, 9], [2, 4, 8], [6], [2, 4, 6, 8, 10]):
        t = make_tau(R, TauKind.SUBSET, subset)
        closure = subset_closure(R, subset)
        mult = check_property(t, TauProperty.MULTIPLICATIVE).holds
        div = check_property(t, TauProperty.DIVISIVE).holds
        rows.append({
            "subset": subset,
            "multiplicative": mult,
            "closed_under_products": closure["closed_under_products"],
            "divisive": div,
            "closed_under_factors": closure["closed_under_factors"],
        })
    ok = all(
        r["multiplicative"] == r["closed_under_products"] and r["divisive"] == r["closed_under_factors"]
        for r in rows
    )
    return ok, {"subsets": rows}


@_check("Example (4)", "ideal congruence mod (5) on Z/210")
def _ideal_congruence(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("Z/210")
    t = make_tau(R, TauKind.IDEAL, 5)
    facts = {
        "7 tau 2": t.related(7, 2),
        "7 tau 7": t.related(7, 7),
        "7 not tau 14": not t.related(7, 14),
        "9 tau 4": t.related(9, 4),
        "2 divides 4": R.divides(2, 4),
        "9 not tau 2": not t.related(9, 2),
        "not multiplicative": not check_property(t, TauProperty.MULTIPLICATIVE).holds,
        "not divisive": not check_property(t, TauProperty.DIVISIVE).holds,
    }
    return all(facts.values()), facts


# τ_z and τ_z^Δ

@_check("Thm 5.1(1)", "elements of R# have only trivial tau_z-factorizations")
def _only_trivial(tau_z: TauBuilder) -> Outcome:
    detail = {}
    for spec in ("Z/6", "Z/12", "Z/30"):
        R = ring_from_text(spec)
        table = factor_table(tau_z(R), 6)
        nontrivial = {R.label(a): [R.labels(m) for m in table.factorizations(a)]
                      for a in sorted(R.sharp) if table.factorizations(a)}
        detail[spec] = nontrivial
    return not any(detail.values()), detail


@_check("Thm 5.1(2)", "0 = 6*10*15 certifies on Z/30 while 6*(10*15) does not")
def _not_combinable(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("Z/30")
    t = tau_z(R)
    f = Factorization(R.zero, R.one, (6, 10, 15))
    merged = combine(R, f, 1)
    verdict = check_property(t, TauProperty.COMBINABLE)
    detail = {
        "certifies": certify(R, t, R.zero, R.one, f.factors),
        "merged": merged.to_record(R),
        "merged_certifies": certify(R, t, merged.target, merged.unit, merged.factors),
        "combinable": verdict.to_record(),
    }
    ok = detail["certifies"] and not detail["merged_certifies"] and verdict.verdict is Verdict.NO
    return ok, detail


@_check("Thm 5.1(2)", "tau_z is refinable")
def _refinable(tau_z: TauBuilder) -> Outcome:
    detail = {}
    for spec in ("Z/6", "Z/12", "Z/30"):
        R = ring_from_text(spec)
        detail[spec] = check_property(tau_z(R), TauProperty.REFINABLE).verdict.value
    return all(v == Verdict.YES.value for v in detail.values()), detail


@_check("Thm 5.1(2)", "tau_z on Z/12 is not divisive: 2 tau 6, 3 | 6, 2 not tau 3")
def _not_divisive(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("Z/12")
    t = tau_z(R)
    detail = {
        "2 tau 6": t.related(2, 6),
        "3 divides 6": R.divides(3, 6),
        "2 not tau 3": not t.related(2, 3),
        "divisive": check_property(t, TauProperty.DIVISIVE).verdict.value,
    }
    ok = detail["2 tau 6"] and detail["3 divides 6"] and detail["2 not tau 3"] and detail["divisive"] == "no"
    return ok, detail


@_check("Thm 5.1(3)", "tau_z-ACCP holds with longest chain 1")
def _accp_chain(tau_z: TauBuilder) -> Outcome:
    detail = {}
    for spec in ("Z/6", "Z/12", "Z/30"):
        R = ring_from_text(spec)
        v = satisfies_tau_accp(R, tau_z(R))
        detail[spec] = v.details["longest_chain"] if v.verdict is Verdict.YES else v.verdict.value
    return all(n == 1 for n in detail.values()), detail


@_check("Thm 5.1(4)", "R is tau_z-atomic")
def _tau_z_atomic(tau_z: TauBuilder) -> Outcome:
    detail = {}
    for spec in ("Z/4", "Z/6", "Z/12", "Z/30"):
        R = ring_from_text(spec)
        detail[spec] = is_alpha_atomic(R, tau_z(R), Alpha.ATOMIC).verdict.value
    return all(v == "yes" for v in detail.values()), detail


@_check("Thm 5.1(4)", "0 is a tau_z^Delta-atom on Z/4; 0 = 2*2 is tau_z-atomic")
def _zero_atom(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("Z/4")
    delta = make_tau(R, TauKind.TAU_Z_DELTA)
    zero_flags = classify(R, delta, R.zero)
    t = tau_z(R)
    two = classify(R, t, 2)
    detail = {
        "zero_is_delta_atom": zero_flags.irr,
        "2*2 certifies": certify(R, t, R.zero, R.one, (2, 2)),
        "2 is tau_z_atom": two.irr,
    }
    return all(detail.values()), detail


@_check("Thm 5.1(5)", "a field is a tau_z-atomic-associate-UFR")
def _domain_ufr(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("GF(5)")
    t = tau_z(R)
    v = is_ufr(R, t, Alpha.ATOMIC, AssocKind.ASSOCIATE)
    return (not t.pairs and v.verdict is Verdict.YES), {"pairs": len(t.pairs), "ufr": v.verdict.value}


@_check("Thm 5.1(6)", "tau_z preserves all three associate relations")
def _tau_z_preserving(tau_z: TauBuilder) -> Outcome:
    detail = {}
    for spec in ("Z/6", "Z/12", "Z/30"):
        R = ring_from_text(spec)
        t = tau_z(R)
        detail[spec] = [
            check_property(t, TauProperty.ASSOCIATE_PRESERVING, kind).verdict.value for kind in AssocKind
        ]
    return all(v == ["yes"] * 3 for v in detail.values()), detail


@_check("Thm 5.1(6)", "tau_z^Delta on Z/9 is not associate preserving via (3, 6)")
def _delta_not_preserving(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("Z/9")
    v = check_property(make_tau(R, TauKind.TAU_Z_DELTA), TauProperty.ASSOCIATE_PRESERVING, AssocKind.ASSOCIATE)
    ok = v.verdict is Verdict.NO and (v.witness.get("a"), v.witness.get("b"), v.witness.get("associate")) == (
        "3", "6", "3")
    return ok, v.to_record()


@_check("Example after Thm 5.6", "Z/4: tau_z = {(2,2)}, tau_z^Delta empty, FFR split")
def _z4_ffr(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("Z/4")
    t = tau_z(R)
    delta = make_tau(R, TauKind.TAU_Z_DELTA)
    detail = {
        "tau_z": sorted(t.pairs),
        "tau_z_delta": sorted(delta.pairs),
        "strong_delta_ffr": is_ffr(R, delta, None).verdict.value,
        "strong_tau_z_ffr": is_ffr(R, t, None).verdict.value,
    }
    ok = (
        detail["tau_z"] == [(2, 2)]
        and detail["tau_z_delta"] == []
        and detail["strong_delta_ffr"] == "yes"
        and detail["strong_tau_z_ffr"] == "no"
    )
    return ok, detail


# Zero-divisor graphs

@_check("Thm 5.2(1)", "Gamma(Z/12): the eight edges, connected, diameter <= 3, omega = 2")
def _z12_graph(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("Z/12")
    g = build(R, GraphMode.PLAIN)
    expected = [(2, 6), (3, 4), (3, 8), (4, 6), (4, 9), (6, 8), (6, 10), (8, 9)]
    detail = {
        "edges": g.edges,
        "connected": is_connected(g),
        "diameter": diameter(g),
        "omega": clique_number(g),
    }
    ok = g.edges == expected and detail["connected"] and detail["diameter"] <= 3 and detail["omega"] == 2
    return ok, detail


@_check("Thm 5.2(7)", "omega(Gamma(K1 x ... x Kn)) = n")
def _omega_products(tau_z: TauBuilder) -> Outcome:
    detail = {}
    for spec, n in (("GF(2) x GF(3)", 2), ("GF(2) x GF(3) x GF(5)", 3), ("GF(2) x GF(2) x GF(2) x GF(2)", 4)):
        omega = clique_number(build(ring_from_text(spec), GraphMode.PLAIN))
        detail[spec] = {"omega": omega, "factors": n}
    return all(d["omega"] == d["factors"] for d in detail.values()), detail


@_check("Example after Thm 5.7", "the standard basis factors 0 with maximal length n")
def _standard_basis(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("GF(2) x GF(3) x GF(5)")
    basis = R.standard_basis() or []
    t = tau_z(R)
    delta = make_tau(R, TauKind.TAU_Z_DELTA)
    bfr = is_bfr(R, t)
    detail = {
        "basis": [R.label(e) for e in basis],
        "tau_z": certify(R, t, R.zero, R.one, basis),
        "tau_z_delta": certify(R, delta, R.zero, R.one, basis),
        "N(0)": bfr.details.get("N", {}).get(R.label(R.zero)),
    }
    ok = len(basis) == 3 and detail["tau_z"] and detail["tau_z_delta"] and detail["N(0)"] == 3
    return ok, detail


@_check("Thm 5.7", "tau_z-BFR: Z/30 yes with N(0) = omega = 3, Z/12 no")
def _bfr(tau_z: TauBuilder) -> Outcome:
    z30 = ring_from_text("Z/30")
    z12 = ring_from_text("Z/12")
    yes30 = is_bfr(z30, tau_z(z30))
    no12 = is_bfr(z12, tau_z(z12))
    detail = {
        "Z/30": yes30.to_record(),
        "omega Z/30": tau_z_criteria(z30)["omega"],
        "Z/12": no12.to_record(),
    }
    ok = (
        yes30.verdict is Verdict.YES
        and yes30.details["N"]["0"] == 3 == detail["omega Z/30"]
        and no12.verdict is Verdict.NO
    )
    return ok, detail


@_check("Thm 5.8", "atomic-HFR: Z/6 tau_z yes, Z/30 tau_z no, GF(2) x Z/4 tau_z^Delta yes")
def _hfr(tau_z: TauBuilder) -> Outcome:
    z6, z30 = ring_from_text("Z/6"), ring_from_text("Z/30")
    mixed = ring_from_text("GF(2) x Z/4")
    detail = {
        "Z/6": is_hfr(z6, tau_z(z6), Alpha.ATOMIC).verdict.value,
        "Z/30": is_hfr(z30, tau_z(z30), Alpha.ATOMIC).to_record(),
        "GF(2) x Z/4": is_hfr(mixed, make_tau(mixed, TauKind.TAU_Z_DELTA), Alpha.ATOMIC).verdict.value,
    }
    ok = (
        detail["Z/6"] == "yes"
        and detail["Z/30"]["verdict"] == "no"
        and sorted(detail["Z/30"]["witness"]["lengths"]) == [2, 3]
        and detail["GF(2) x Z/4"] == "yes"
    )
    return ok, detail


@_check("UFR theorem", "tau_z-atomic-associate-UFR iff domain or two fields")
def _ufr_two_fields(tau_z: TauBuilder) -> Outcome:
    detail = {}
    for spec, expected in (("Z/6", True), ("Z/30", False), ("Z/4", False)):
        R = ring_from_text(spec)
        v = is_ufr(R, tau_z(R), Alpha.ATOMIC, AssocKind.ASSOCIATE)
        crit = tau_z_criteria(R)
        detail[spec] = {
            "ufr": v.verdict.value,
            "structural": crit["domain"] or crit["two_fields"],
            "expected": expected,
        }
    ok = all((d["ufr"] == "yes") == d["structural"] == d["expected"] for d in detail.values())
    return ok, detail


@_check("Example after the UFR theorems", "GF(2) x Z/4: tau_z^Delta-HFR but not UFR")
def _hfr_not_ufr(tau_z: TauBuilder) -> Outcome:
    R = ring_from_text("GF(2) x Z/4")
    t = make_tau(R, TauKind.TAU_Z_DELTA)
    zero = R.zero
    first = [_el(R, "(1,0)"), _el(R, "(0,1)")]
    second = [_el(R, "(1,2)"), _el(R, "(0,2)")]
    b = _el(R, "(0,2)")
    detail = {
        "first_certifies": certify(R, t, zero, R.one, first),
        "second_certifies": certify(R, t, zero, R.one, second),
        "(0,2) not ~ (1,0)": not related(R, AssocKind.ASSOCIATE, b, first[0]),
        "(0,2) not ~ (0,1)": not related(R, AssocKind.ASSOCIATE, b, first[1]),
        "hfr": is_hfr(R, t, Alpha.ATOMIC).verdict.value,
        "ufr": is_ufr(R, t, Alpha.ATOMIC, AssocKind.ASSOCIATE).verdict.value,
        "omega": tau_z_criteria(R)["omega"],
    }
    ok = all(v for k, v in detail.items() if k not in ("hfr", "ufr", "omega"))
    ok = ok and detail["hfr"] == "yes" and detail["ufr"] == "no" and detail["omega"] == 2
    return ok, detail


# Associates

@_check("Lemma 2.2(5)", "Z/4 is presimplifiable, Z/6 is not")
def _presimplifiable(tau_z: TauBuilder) -> Outcome:
    z4 = cached_ring_class(ring_from_text("Z/4"))
    z6 = cached_ring_class(ring_from_text("Z/6"))
    ok = all(z4[k] for k in z4 if k != "strongly_associate") and not z6["presimplifiable"]
    return ok, {"Z/4": dict(z4), "Z/6": dict(z6)}


@_check("Lemma 2.2(1),(4)", "associate chain and a = a iff ann(a) in J(R)")
def _lemma_2_2(tau_z: TauBuilder) -> Outcome:
    detail = {spec: lemma_2_2_violations(ring_from_text(spec)) for spec in ("Z/4", "Z/6", "Z/12")}
    return not any(detail.values()), detail


@dataclass
class PaperReport:
    checks: List[PaperCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> List[PaperCheck]:
        return [c for c in self.checks if not c.passed]


def verify_paper(tau_z_builder: TauBuilder = standard_tau_z) -> PaperReport:
    checks = []
    for tag, name, fn in _CHECKS:
        try:
            passed, detail = fn(tau_z_builder)
        except (TaufactError, KeyError) as e:
            passed, detail = False, {"error": str(e), "error_type": type(e).__name__}
        checks.append(PaperCheck(tag=tag, name=name, passed=bool(passed), detail=detail))
        if not passed:
            log.warning("paper_check_failed", extra={"extra_data": {"tag": tag, "check": name}})
    log.info(
        "paper_verified",
        extra={"extra_data": {"checks": len(checks), "failed": sum(not c.passed for c in checks),
                              "builder": getattr(tau_z_builder, "__name__", "custom")}},
    )
    return PaperReport(checks)
