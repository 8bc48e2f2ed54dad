from __future__ import annotations

import operator
import uuid
from typing import Annotated, Any, Dict, List, TypedDict

from langgraph.checkpoint.memory import MemorySaver
from langgraph.graph import END, START, StateGraph
from langgraph.types import RunnableConfig
from sympy import factorint

from logger import get_logger
from taufact.errors import SearchBudgetExceeded, TheoremMismatch
from taufact.factorization.irr import (
    Alpha,
    check_strong_associate_closure,
    collapse_violations,
    diagram_violations,
)
from taufact.factorization.props import evaluator, tau_z_criteria, verify_ff_diagram
from taufact.structures.associates import AssocKind, cached_ring_class, lemma_2_2_violations
from taufact.structures.ring import ProductSpec, Ring, ZnSpec, build_ring, ring_from_text
from taufact.structures.taurel import (
    TauKind,
    TauProperty,
    TauRelation,
    check_property,
    expand_relations,
    make_tau,
)
from taufact.structures.zdgraph import (
    GraphMode,
    build,
    clique_census,
    clique_number,
    diameter,
    is_connected,
    zn_vertex_count,
)
from taufact.verdicts import Verdict
from utils import BFR_SEARCH_LEN, DEFAULT_MAX_LEN, SAMPLE_SEED, log_stage, write_bug_report

log = get_logger()


# State schema

class CorpusState(TypedDict, total=False):
    """
    Shared state for one corpus entry (one ring, several relations).

    Only JSON-friendly data lives here; ring objects are rebuilt from the
    spec text through the cached builder.
    """

    ring_spec: str
    taus: List[str]
    max_len: int
    bfr_len: int
    ring: Dict[str, Any]
    records: Annotated[List[Dict[str, Any]], operator.add]
    violations: Annotated[List[Dict[str, Any]], operator.add]
    bug_reports: List[str]


# helper to extract IDs for logging
def _ids_for_log(state: CorpusState, config: RunnableConfig | None = None) -> Dict[str, Any]:
    data: Dict[str, Any] = {"ring": state.get("ring_spec")}
    if config is not None:
        thread_id = (config.get("configurable", {}) or {}).get("thread_id")
        if thread_id:
            data["thread_id"] = thread_id
    return data


def _ring(state: CorpusState) -> Ring:
    return ring_from_text(state["ring_spec"])


def _check(spec: str, tau: str, check: str, violations: List[Any], **extra: Any) -> Dict[str, Any]:
    return {"ring_spec": spec, "tau": tau, "check": check, "violations": violations, **extra}


def _violation(spec: str, tau: str, check: str, detail: Any) -> Dict[str, Any]:
    return {"ring_spec": spec, "tau": tau, "check": check, "detail": detail}


def _mismatch_violation(spec: str, tau: str, e: TheoremMismatch) -> Dict[str, Any]:
    return _violation(spec, tau, f"theorem_mismatch:{e.theorem}", e.report)


def _skipped(spec: str, tau: str, e: SearchBudgetExceeded) -> Dict[str, Any]:
    return {"ring_spec": spec, "tau": tau, "status": "skipped", "reason": str(e)}


def _field_product(R: Ring) -> bool:
    if not isinstance(R.spec, ProductSpec):
        return False
    return all(build_ring(atom).is_field for atom in R.spec.factors)


# Node implementations

def ring_node(state: CorpusState, config: RunnableConfig) -> CorpusState:
    ids = _ids_for_log(state, config)
    log.info("node_start_ring", extra={"extra_data": ids})

    spec = state["ring_spec"]
    R = _ring(state)
    records: List[Dict[str, Any]] = []
    violations: List[Dict[str, Any]] = []
    summary: Dict[str, Any] = R.to_json()

    try:
        summary.update(cached_ring_class(R))
    except TheoremMismatch as e:
        violations.append(_mismatch_violation(spec, "-", e))

    lemma = lemma_2_2_violations(R)
    records.append(_check(spec, "-", "lemma_2_2", lemma))
    violations += [_violation(spec, "-", "lemma_2_2", v) for v in lemma]

    if R.is_local and not summary.get("presimplifiable", True):
        violations.append(_violation(spec, "-", "local_implies_presimplifiable", {}))

    log.info("node_end_ring", extra={"extra_data": {**ids, "order": R.order, "violations": len(violations)}})
    return {"ring": summary, "records": records, "violations": violations}


def graph_node(state: CorpusState, config: RunnableConfig) -> CorpusState:
    """Zero-divisor graph invariants."""
    ids = _ids_for_log(state, config)
    log.info("node_start_graph", extra={"extra_data": ids})

    spec = state["ring_spec"]
    R = _ring(state)
    violations: List[Dict[str, Any]] = []

    g = build(R, GraphMode.PLAIN)
    try:
        quotient = build(R, GraphMode.QUOTIENT)
    except TheoremMismatch as e:
        quotient = None
        violations.append(_mismatch_violation(spec, "-", e))

    omega = clique_number(g)
    diam = diameter(g)
    census = clique_census(g)
    record = {
        "ring_spec": spec,
        "tau": "-",
        "check": "zero_divisor_graph",
        "vertices": g.graph.number_of_nodes(),
        "edges": g.graph.number_of_edges(),
        "omega": omega,
        "diameter": diam if diam != float("inf") else "inf",
        "connected": is_connected(g),
        "quotient_vertices": quotient.graph.number_of_nodes() if quotient is not None else None,
        "census": census.to_record(),
    }

    if g.graph.number_of_nodes() >= 2 and not (record["connected"] and diam <= 3):
        violations.append(_violation(spec, "-", "Thm 5.2(1) connected, diameter <= 3", record))
    if isinstance(R.spec, ZnSpec) and record["vertices"] != zn_vertex_count(R.spec.n):
        violations.append(_violation(spec, "-", "vertex count n-1-phi(n)", record))
    if _field_product(R) and omega != len(R.spec.factors):
        violations.append(_violation(spec, "-", "Thm 5.2(7) omega = n", record))
    if R.is_reduced and not R.is_domain and len(R.local_components()) != omega:
        violations.append(_violation(spec, "-", "components = omega", record))
    if census.overflow:
        violations.append(_violation(spec, "-", "Thm 5.3(6) finite census", census.to_record()))

    missing = [
        R.label(a) for a in R.elements
        if R.principal_ideal(a) == R.principal_ideal(R.mul(a, a)) and R.idempotent_associate(a) is None
    ]
    if missing:
        violations.append(_violation(spec, "-", "idempotent associate", missing))

    log.info("node_end_graph", extra={"extra_data": {**ids, "omega": omega, "violations": len(violations)}})
    return {"records": [record], "violations": violations}


def _relation_checks(spec: str, R: Ring, t: TauRelation, max_len: int):
    records: List[Dict[str, Any]] = []
    violations: List[Dict[str, Any]] = []
    ev = evaluator(R, t, max_len)

    for verdict in ev.all_verdicts():
        records.append({"ring_spec": spec, "tau": t.name, **verdict.to_record()})
    for prop in TauProperty:
        verdict = check_property(t, prop, max_len=max_len)
        records.append({"ring_spec": spec, "tau": t.name, **verdict.to_record()})

    flags = ev.flags
    irr_checks = {
        "irr_diagram": diagram_violations(R, flags),
        "presimplifiable_collapse": collapse_violations(R, flags),
    }
    for alpha in Alpha:
        pairs = check_strong_associate_closure(R, t, alpha, flags=flags)
        irr_checks[f"strong_associate_closure:{alpha.value}"] = [
            [R.label(a), R.label(b)] for a, b in pairs
        ]
    for check, found in irr_checks.items():
        records.append(_check(spec, t.name, check, found))
        violations += [_violation(spec, t.name, check, v) for v in found]

    diverging = [R.label(a) for a, f in flags.items() if f.m_readings_diverge]
    records.append(_check(spec, t.name, "m_irr_readings_diverge", [], elements=diverging))

    diagram = verify_ff_diagram(R, t, max_len)
    records.append(_check(spec, t.name, "ff_diagram", diagram.violations,
                          inconclusive=len(diagram.inconclusive), informational=len(diagram.informational),
                          star=diagram.star))
    violations += [_violation(spec, t.name, "ff_diagram", v) for v in diagram.violations]
    return records, violations


def relations_node(state: CorpusState, config: RunnableConfig) -> CorpusState:
    """Property verdicts, irreducibility diagram and the finite-factorization diagram per relation."""
    ids = _ids_for_log(state, config)
    log.info("node_start_relations", extra={"extra_data": ids})

    spec = state["ring_spec"]
    R = _ring(state)
    max_len = state["max_len"] if state.get("max_len") is not None else DEFAULT_MAX_LEN
    records: List[Dict[str, Any]] = []
    violations: List[Dict[str, Any]] = []

    for t in expand_relations(R, state.get("taus", []), SAMPLE_SEED):
        try:
            found_records, found_violations = _relation_checks(spec, R, t, max_len)
        except SearchBudgetExceeded as e:
            log.warning("relation_skipped", extra={"extra_data": {**ids, "tau": t.name, "error": str(e)}})
            records.append(_skipped(spec, t.name, e))
            continue
        except TheoremMismatch as e:
            violations.append(_mismatch_violation(spec, t.name, e))
            continue
        records += found_records
        violations += found_violations

    log.info("node_end_relations", extra={"extra_data": {**ids, "records": len(records), "violations": len(violations)}})
    return {"records": records, "violations": violations}


def _squarefree(R: Ring) -> bool:
    if isinstance(R.spec, ZnSpec):
        return all(e == 1 for e in factorint(R.spec.n).values())
    return R.is_reduced


def _tau_z_suite(spec: str, R: Ring, t: TauRelation, max_len: int, bfr_len: int) -> List[Dict[str, Any]]:
    """Thm 5.1, 5.3/5.4, 5.7, 5.8 and the UFR theorems on one τ_z / τ_z^Δ relation."""
    crit = tau_z_criteria(R)
    ev = evaluator(R, t, max_len)
    delta = t.kind is TauKind.TAU_Z_DELTA
    found: List[Dict[str, Any]] = []

    def expect(check: str, ok: bool, detail: Any) -> None:
        if not ok:
            found.append(_violation(spec, t.name, check, detail))

    table = ev.table
    nontrivial = [R.label(a) for a in sorted(R.sharp) if table.factorizations(a)]
    expect("Thm 5.1(1) only trivial factorizations", not nontrivial, nontrivial)

    chain = ev.tau_accp().details["longest_chain"]
    # 0 has a non-trivial factorization exactly when some a, b in R# (a != b for τ_z^Δ) have ab = 0
    has_zero_product = crit["omega"] >= 2 or (not delta and not R.is_domain)
    expect("Thm 5.1(3) longest chain", chain == (1 if has_zero_product else 0), chain)
    expect("Thm 5.1(4) atomic", ev.atomic(Alpha.ATOMIC).verdict is Verdict.YES,
           ev.atomic(Alpha.ATOMIC).to_record())

    if not delta:
        preserving = {k.value: check_property(t, TauProperty.ASSOCIATE_PRESERVING, k).verdict.value
                      for k in AssocKind}
        expect("Thm 5.1(6) associate preserving", set(preserving.values()) == {"yes"}, preserving)

    strong_ffr = ev.ffr(None)
    expected_ffr = True if delta else crit["reduced"]
    expect("Thm 5.3/5.4 strong FFR", strong_ffr.exact and strong_ffr.holds == expected_ffr, strong_ffr.to_record())
    assoc_ffr = ev.ffr(AssocKind.ASSOCIATE)
    expect("Thm 5.5/5.6 associate FFR", assoc_ffr.exact and assoc_ffr.holds == expected_ffr, assoc_ffr.to_record())

    bfr = evaluator(R, t, bfr_len).bfr()
    expected_bfr = True if delta else _squarefree(R)
    expect("Thm 5.7 BFR", bfr.exact and bfr.holds == expected_bfr, bfr.to_record())

    hfr = ev.hfr(Alpha.ATOMIC)
    expected_hfr = crit["omega"] <= 2 and (delta or crit["reduced"])
    expect("Thm 5.8 atomic HFR", hfr.exact and hfr.holds == expected_hfr, hfr.to_record())

    if not delta:
        ufr = ev.ufr(Alpha.ATOMIC, AssocKind.ASSOCIATE)
        expect("UFR iff domain or two fields", ufr.exact and ufr.holds == (crit["domain"] or crit["two_fields"]),
               ufr.to_record())
        if crit["reduced"]:
            expect("finite reduced: HFR iff UFR", hfr.holds == ufr.holds,
                   {"hfr": hfr.verdict.value, "ufr": ufr.verdict.value})
    return found


def theorems_node(state: CorpusState, config: RunnableConfig) -> CorpusState:
    """τ_z / τ_z^Δ classification theorems, evaluated whenever the relation list names them."""
    ids = _ids_for_log(state, config)
    log.info("node_start_theorems", extra={"extra_data": ids})

    spec = state["ring_spec"]
    R = _ring(state)
    max_len = state["max_len"] if state.get("max_len") is not None else DEFAULT_MAX_LEN
    bfr_len = state["bfr_len"] if state.get("bfr_len") is not None else BFR_SEARCH_LEN
    records: List[Dict[str, Any]] = []
    violations: List[Dict[str, Any]] = []

    for name in ("tau_z", "tau_z_delta"):
        if name not in state.get("taus", []):
            continue
        t = make_tau(R, name)
        try:
            found = _tau_z_suite(spec, R, t, max_len, bfr_len)
        except SearchBudgetExceeded as e:
            records.append(_skipped(spec, name, e))
            continue
        except TheoremMismatch as e:
            found = [_mismatch_violation(spec, name, e)]
        records.append(_check(spec, name, "tau_z_theorems", found))
        violations += found

    log.info("node_end_theorems", extra={"extra_data": {**ids, "violations": len(violations)}})
    return {"records": records, "violations": violations}


def report_node(state: CorpusState, config: RunnableConfig) -> CorpusState:
    """Persist collected violations as a bug-report artifact."""
    ids = _ids_for_log(state, config)
    log.info("node_start_report", extra={"extra_data": ids})

    path = write_bug_report(
        "corpus_violation",
        {"ring_spec": state["ring_spec"], "ring": state.get("ring", {}), "violations": state.get("violations", [])},
    )

    log.info("node_end_report", extra={"extra_data": {**ids, "bug_report": path}})
    return {"bug_reports": [path]}


# Routing logic

def route_after_theorems(state: CorpusState) -> str:
    if state.get("violations"):
        return "report"
    return END


# Build and compile workflow

def build_workflow():
    graph = StateGraph(CorpusState)

    graph.add_node("ring", ring_node)
    graph.add_node("graph", graph_node)
    graph.add_node("relations", relations_node)
    graph.add_node("theorems", theorems_node)
    graph.add_node("report", report_node)

    graph.add_edge(START, "ring")
    graph.add_edge("ring", "graph")
    graph.add_edge("graph", "relations")
    graph.add_edge("relations", "theorems")
    graph.add_edge("report", END)

    graph.add_conditional_edges(
        "theorems",
        route_after_theorems,
        {
            "report": "report",
            END: END,
        },
    )

    memory = MemorySaver()
    app = graph.compile(checkpointer=memory)
    return app


orchestrator = build_workflow()


def run_corpus_entry(entry: Dict[str, Any]) -> Dict[str, Any]:
    """
    Run the pipeline for one ring.

    `entry` carries ring_spec, taus and optionally max_len / bfr_len.
    """
    ring_spec = entry["ring_spec"]
    initial_state: CorpusState = {
        "ring_spec": ring_spec,
        "taus": list(entry.get("taus", [])),
        "max_len": entry["max_len"] if entry.get("max_len") is not None else DEFAULT_MAX_LEN,
        "bfr_len": entry["bfr_len"] if entry.get("bfr_len") is not None else BFR_SEARCH_LEN,
        "records": [],
        "violations": [],
        "bug_reports": [],
    }
    config = {"configurable": {"thread_id": f"{ring_spec}#{uuid.uuid4().hex[:8]}"}}

    with log_stage(log, "corpus_entry", ring=ring_spec, taus=initial_state["taus"]) as counts:
        final_state = orchestrator.invoke(initial_state, config=config)
        counts["records"] = len(final_state.get("records", []))
        counts["violations"] = len(final_state.get("violations", []))
    return {
        "ring_spec": ring_spec,
        "ring": final_state.get("ring", {}),
        "records": final_state.get("records", []),
        "violations": final_state.get("violations", []),
        "bug_reports": final_state.get("bug_reports", []),
    }
