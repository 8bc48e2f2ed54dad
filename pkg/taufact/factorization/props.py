"""
Ring-level finite-factorization properties.

Each property is decided definitionally from one FactorTable and the IrrFlags
of every non-unit. For τ_z and τ_z^Δ the matching structural criterion
(reduced, ω(Γ(R)), two-field decomposition) is evaluated as well and the two
must agree; disagreement raises TheoremMismatch.

In a finite ring ACCP, τ-ACCP, WFFR and df always hold and every β-FFR
verdict equals the BFR verdict; those are still computed so the implication
diagram can be evaluated arrow by arrow.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx

from logger import get_logger
from taufact.errors import TauRelationError, TheoremMismatch
from taufact.factorization.factor import FactorTable, Multiset, factor_table, pumping_certificate
from taufact.factorization.irr import Alpha, IrrFlags, classify_with_table
from taufact.structures.associates import AssocKind, assoc_classes
from taufact.structures.ring import Ring
from taufact.structures.taurel import TauKind, TauRelation, is_star
from taufact.structures.zdgraph import GraphMode, build, clique_number
from taufact.verdicts import PropVerdict, Verdict, bounded, no, yes
from utils import DEFAULT_MAX_LEN

log = get_logger()

# None stands for the strong variants (rearrangement only, no β)
Beta = Optional[AssocKind]


def beta_name(beta: Beta) -> str:
    return "strong" if beta is None else beta.value


@lru_cache(maxsize=256)
def tau_z_criteria(R: Ring) -> Dict[str, Any]:
    """The structural data every τ_z / τ_z^Δ classification theorem reads."""
    return {
        "reduced": R.is_reduced,
        "domain": R.is_domain,
        "omega": clique_number(build(R, GraphMode.PLAIN)),
        "omega_quotient": clique_number(build(R, GraphMode.QUOTIENT)),
        "two_fields": R.two_field_decomposition() is not None,
    }


def _mismatch(theorem: str, R: Ring, t: TauRelation, definitional: PropVerdict, expected: bool) -> None:
    report = {
        "ring": R.name,
        "tau": t.name,
        "property": definitional.prop,
        "definitional": definitional.to_record(),
        "criterion": expected,
        "criteria": tau_z_criteria(R),
    }
    log.error("theorem_mismatch", extra={"extra_data": {"theorem": theorem, **report}})
    raise TheoremMismatch(theorem, report)


def _conjoin(prop: str, *verdicts: PropVerdict) -> PropVerdict:
    for v in verdicts:
        if v.verdict is Verdict.NO:
            return no(prop, v.witness, exact=v.exact, failed=v.prop)
    bounds = [v.bound for v in verdicts if v.verdict is Verdict.VERIFIED_UP_TO]
    if bounds:
        return bounded(prop, min(bounds))
    return yes(prop)


class PropEvaluator:
    """
    All property verdicts for one (R, τ, L), memoized.

    For τ_z^Δ, and for τ_z on reduced rings, every valid multiset is a clique
    of Γ(R), so the bound is raised to ω(Γ(R)) and the table is complete.
    """

    def __init__(self, R: Ring, t: TauRelation, max_len: Optional[int] = None):
        if t.ring is not R:
            raise TauRelationError(f"relation {t.name} is defined on {t.ring.name}, not {R.name}")
        L = max_len if max_len is not None else DEFAULT_MAX_LEN
        if t.kind is TauKind.TAU_Z_DELTA or (t.kind is TauKind.TAU_Z and R.is_reduced):
            L = max(L, tau_z_criteria(R)["omega"])
        self.R = R
        self.t = t
        self.max_len = L
        self._cache: Dict[Tuple, PropVerdict] = {}
        self._flags: Optional[Dict[int, IrrFlags]] = None
        self._classes: Dict[AssocKind, Dict[int, int]] = {}

    @property
    def table(self) -> FactorTable:
        return factor_table(self.t, self.max_len)

    @property
    def flags(self) -> Dict[int, IrrFlags]:
        if self._flags is None:
            table = self.table
            self._flags = {a: classify_with_table(self.R, self.t, table, a) for a in sorted(self.R.nonunits)}
        return self._flags

    def _memo(self, key: Tuple, compute) -> PropVerdict:
        verdict = self._cache.get(key)
        if verdict is None:
            verdict = compute()
            self._cache[key] = verdict
            log.debug(
                "property_evaluated",
                extra={"extra_data": {"ring": self.R.name, "tau": self.t.name, "property": verdict.prop,
                                      "verdict": verdict.verdict.value, "exact": verdict.exact}},
            )
        return verdict

    # helpers

    def signature(self, m: Multiset, beta: Beta) -> Tuple[int, ...]:
        if beta is None:
            return tuple(sorted(m))
        class_of = self._classes.get(beta)
        if class_of is None:
            class_of = assoc_classes(self.R, beta, self.R.elements).class_of()
            self._classes[beta] = class_of
        return tuple(sorted(class_of[x] for x in m))

    def alpha_factorizations(self, a: int, alpha: Alpha) -> List[Multiset]:
        """Known τ-α-factorizations of a; the trivial one when a is itself τ-α."""
        flags = self.flags
        out: List[Multiset] = [(a,)] if flags[a].flag(alpha) else []
        out += [m for m in self.table.factorizations(a) if all(flags[x].flag(alpha) for x in m)]
        return out

    def _genuine(self, m: Multiset) -> bool:
        # a False flag carries a witness; a True flag is only certain when exact
        return all(self.flags[x].exact for x in m)

    def _labels(self, m: Multiset) -> List[str]:
        return [self.R.label(x) for x in m]

    def _all_exact(self) -> bool:
        return all(self.table.is_exact(a) for a in self.R.nonunits)

    # properties

    def atomic(self, alpha: Alpha) -> PropVerdict:
        return self._memo(("atomic", alpha), lambda: self._atomic(alpha))

    def _atomic(self, alpha: Alpha) -> PropVerdict:
        prop = f"atomic:{alpha.value}"
        uncertain = False
        for a in sorted(self.R.nonunits):
            facts = self.alpha_factorizations(a, alpha)
            if not facts:
                if self.table.is_exact(a):
                    return no(
                        prop,
                        {"element": self.R.label(a),
                         "factorizations_checked": [self._labels(m) for m in self.table.factorizations(a)]},
                    )
                uncertain = True
            elif not any(self._genuine(m) for m in facts):
                uncertain = True
        return bounded(prop, self.max_len) if uncertain else yes(prop)

    def accp(self) -> PropVerdict:
        return yes("accp", reason="finitely many principal ideals")

    def tau_accp(self) -> PropVerdict:
        return self._memo(("tau_accp",), self._tau_accp)

    def _tau_accp(self) -> PropVerdict:
        R = self.R
        partition = assoc_classes(R, AssocKind.ASSOCIATE, R.nonunits)
        class_of = partition.class_of()
        chains = nx.DiGraph()
        chains.add_nodes_from(range(len(partition.classes)))
        for a in sorted(R.nonunits):
            ideal_a = R.principal_ideal(a)
            for b in self.table.divisors(a):
                if ideal_a < R.principal_ideal(b):
                    chains.add_edge(class_of[b], class_of[a])
        if not nx.is_directed_acyclic_graph(chains):
            raise TheoremMismatch("tau-ACCP acyclicity", {"ring": R.name, "tau": self.t.name})
        path = nx.dag_longest_path(chains)
        return yes(
            "tau_accp",
            longest_chain=max(len(path) - 1, 0),
            chain=[R.label(min(partition.classes[c])) for c in path],
            chain_exact=self._all_exact(),
        )

    def bfr(self) -> PropVerdict:
        return self._memo(("bfr",), self._bfr)

    def _bfr(self) -> PropVerdict:
        R, table = self.R, self.table
        if self._all_exact():
            lengths = {
                a: max((len(m) for m in table.factorizations(a)), default=1)
                for a in sorted(R.nonunits)
            }
            verdict = yes("bfr", N={R.label(a): n for a, n in lengths.items()})
        else:
            cert = pumping_certificate(table)
            if cert is not None:
                verdict = no("bfr", cert.to_record(R))
            else:
                verdict = bounded("bfr", self.max_len)
        self._check_bfr(verdict)
        return verdict

    def _check_bfr(self, verdict: PropVerdict) -> None:
        if self.t.kind not in (TauKind.TAU_Z, TauKind.TAU_Z_DELTA) or not verdict.exact:
            return
        crit = tau_z_criteria(self.R)
        expected = crit["reduced"] if self.t.kind is TauKind.TAU_Z else True
        if verdict.holds != expected:
            _mismatch("Thm 5.7", self.R, self.t, verdict, expected)
        if verdict.verdict is Verdict.YES and not crit["domain"]:
            n0 = verdict.details["N"][self.R.label(self.R.zero)]
            if n0 != max(crit["omega"], 1):
                _mismatch("Thm 5.7 N(0)=omega", self.R, self.t, verdict, True)

    def ffr(self, beta: Beta) -> PropVerdict:
        return self._memo(("ffr", beta), lambda: self._ffr(beta))

    def _ffr(self, beta: Beta) -> PropVerdict:
        prop = f"ffr:{beta_name(beta)}"
        bfr = self.bfr()
        if bfr.verdict is Verdict.NO:
            verdict = no(prop, bfr.witness, exact=bfr.exact, reason="factorization lengths are unbounded")
        elif bfr.verdict is Verdict.VERIFIED_UP_TO:
            verdict = bounded(prop, self.max_len)
        else:
            counts = {}
            for a in sorted(self.R.nonunits):
                facts = self.table.factorizations(a)
                counts[self.R.label(a)] = {
                    "multisets": len(facts),
                    "up_to_beta": len({self.signature(m, beta) for m in facts}),
                }
            verdict = yes(prop, counts=counts)
        self._check_ffr(beta, verdict)
        return verdict

    def _check_ffr(self, beta: Beta, verdict: PropVerdict) -> None:
        if beta not in (None, AssocKind.ASSOCIATE) or not verdict.exact:
            return
        if self.t.kind is TauKind.TAU_Z_DELTA:
            theorem, expected = ("Thm 5.3" if beta is None else "Thm 5.5"), True
        elif self.t.kind is TauKind.TAU_Z:
            theorem, expected = ("Thm 5.4" if beta is None else "Thm 5.6"), self.R.is_reduced
        else:
            return
        if verdict.holds != expected:
            _mismatch(theorem, self.R, self.t, verdict, expected)

    def wffr(self, beta: Beta) -> PropVerdict:
        return self._memo(("wffr", beta), lambda: self._wffr(beta))

    def _wffr(self, beta: Beta) -> PropVerdict:
        counts = {
            self.R.label(a): len({self.signature((b,), beta) for b in self.table.divisors(a)})
            for a in sorted(self.R.nonunits)
        }
        return yes(f"wffr:{beta_name(beta)}", divisor_counts=counts, counts_exact=self._all_exact())

    def df(self, alpha: Alpha, beta: Beta) -> PropVerdict:
        return self._memo(("df", alpha, beta), lambda: self._df(alpha, beta))

    def _df(self, alpha: Alpha, beta: Beta) -> PropVerdict:
        flags = self.flags
        counts = {
            self.R.label(a): len({
                self.signature((b,), beta) for b in self.table.divisors(a) if flags[b].flag(alpha)
            })
            for a in sorted(self.R.nonunits)
        }
        return yes(f"df:{alpha.value}:{beta_name(beta)}", divisor_counts=counts, counts_exact=self._all_exact())

    def hfr(self, alpha: Alpha) -> PropVerdict:
        return self._memo(("hfr", alpha), lambda: self._hfr(alpha))

    def _length_pair(self, genuine: List[Multiset]) -> Optional[Tuple[Multiset, Multiset]]:
        lengths = {len(m) for m in genuine}
        if len(lengths) < 2:
            return None
        longest = next(m for m in genuine if len(m) == max(lengths))
        shortest = [m for m in genuine if len(m) == min(lengths)]
        # prefer a short factorization sharing a factor with the long one
        short = next((m for m in shortest if longest[0] in m), shortest[0])
        return short, longest

    def _hfr(self, alpha: Alpha) -> PropVerdict:
        prop = f"hfr:{alpha.value}"
        atomic = self.atomic(alpha)
        if atomic.verdict is Verdict.NO:
            verdict = no(prop, {"not_atomic": atomic.witness}, exact=atomic.exact)
        else:
            verdict = None
            uncertain = atomic.verdict is Verdict.VERIFIED_UP_TO
            for a in sorted(self.R.nonunits):
                facts = self.alpha_factorizations(a, alpha)
                genuine = [m for m in facts if self._genuine(m)]
                pair = self._length_pair(genuine)
                if pair is not None:
                    short, long_ = pair
                    verdict = no(
                        prop,
                        {"element": self.R.label(a), "first": self._labels(short), "second": self._labels(long_),
                         "lengths": [len(short), len(long_)]},
                    )
                    break
                if not self.table.is_exact(a) or len({len(m) for m in facts}) > 1:
                    uncertain = True
            if verdict is None:
                verdict = bounded(prop, self.max_len) if uncertain else yes(prop)
        self._check_hfr(alpha, verdict)
        return verdict

    def _check_hfr(self, alpha: Alpha, verdict: PropVerdict) -> None:
        if alpha is not Alpha.ATOMIC or not verdict.exact:
            return
        crit = tau_z_criteria(self.R)
        if self.t.kind is TauKind.TAU_Z:
            expected = crit["reduced"] and crit["omega"] <= 2
        elif self.t.kind is TauKind.TAU_Z_DELTA:
            expected = crit["omega"] <= 2
        else:
            return
        if verdict.holds != expected:
            _mismatch("Thm 5.8", self.R, self.t, verdict, expected)

    def ufr(self, alpha: Alpha, beta: AssocKind) -> PropVerdict:
        return self._memo(("ufr", alpha, beta), lambda: self._ufr(alpha, beta))

    def _ufr(self, alpha: Alpha, beta: AssocKind) -> PropVerdict:
        prop = f"ufr:{alpha.value}:{beta.value}"
        atomic = self.atomic(alpha)
        if atomic.verdict is Verdict.NO:
            verdict = no(prop, {"not_atomic": atomic.witness}, exact=atomic.exact)
        else:
            verdict = None
            uncertain = atomic.verdict is Verdict.VERIFIED_UP_TO
            for a in sorted(self.R.nonunits):
                facts = self.alpha_factorizations(a, alpha)
                genuine = [m for m in facts if self._genuine(m)]
                if genuine:
                    first = genuine[0]
                    sig = self.signature(first, beta)
                    other = next((m for m in genuine if self.signature(m, beta) != sig), None)
                    if other is not None:
                        verdict = no(
                            prop,
                            {"element": self.R.label(a), "first": self._labels(first),
                             "second": self._labels(other), "beta": beta.value},
                        )
                        break
                if not self.table.is_exact(a) or len({self.signature(m, beta) for m in facts}) > 1:
                    uncertain = True
            if verdict is None:
                verdict = bounded(prop, self.max_len) if uncertain else yes(prop)
        self._check_ufr(alpha, beta, verdict)
        return verdict

    def _check_ufr(self, alpha: Alpha, beta: AssocKind, verdict: PropVerdict) -> None:
        if (self.t.kind is not TauKind.TAU_Z or alpha is not Alpha.ATOMIC
                or beta is not AssocKind.ASSOCIATE or not verdict.exact):
            return
        crit = tau_z_criteria(self.R)
        expected = crit["domain"] or crit["two_fields"]
        if verdict.holds != expected:
            _mismatch("UFR two-field theorem", self.R, self.t, verdict, expected)

    def all_verdicts(self) -> List[PropVerdict]:
        out = [self.accp(), self.tau_accp(), self.bfr()]
        betas: List[Beta] = [None, *AssocKind]
        out += [self.ffr(b) for b in betas]
        out += [self.wffr(b) for b in betas]
        for alpha in Alpha:
            out.append(self.atomic(alpha))
            out.append(self.hfr(alpha))
            out += [self.ufr(alpha, b) for b in AssocKind]
            out += [self.df(alpha, b) for b in betas]
        return out


_EVALUATORS: "weakref.WeakKeyDictionary[TauRelation, Dict[int, PropEvaluator]]" = weakref.WeakKeyDictionary()


def evaluator(R: Ring, t: TauRelation, max_len: Optional[int] = None) -> PropEvaluator:
    per_len = _EVALUATORS.setdefault(t, {})
    key = max_len if max_len is not None else DEFAULT_MAX_LEN
    ev = per_len.get(key)
    if ev is None:
        ev = PropEvaluator(R, t, max_len)
        per_len[key] = ev
    return ev


def is_alpha_atomic(R: Ring, t: TauRelation, alpha: Alpha, max_len: Optional[int] = None) -> PropVerdict:
    return evaluator(R, t, max_len).atomic(alpha)


def satisfies_accp(R: Ring) -> PropVerdict:
    return yes("accp", reason="finitely many principal ideals")


def satisfies_tau_accp(R: Ring, t: TauRelation, max_len: Optional[int] = None) -> PropVerdict:
    return evaluator(R, t, max_len).tau_accp()


def is_bfr(R: Ring, t: TauRelation, max_len: Optional[int] = None) -> PropVerdict:
    return evaluator(R, t, max_len).bfr()


def is_ffr(R: Ring, t: TauRelation, beta: Beta = None, max_len: Optional[int] = None) -> PropVerdict:
    return evaluator(R, t, max_len).ffr(beta)


def is_wffr(R: Ring, t: TauRelation, beta: Beta = None, max_len: Optional[int] = None) -> PropVerdict:
    return evaluator(R, t, max_len).wffr(beta)


def is_df(R: Ring, t: TauRelation, alpha: Alpha, beta: Beta = None, max_len: Optional[int] = None) -> PropVerdict:
    return evaluator(R, t, max_len).df(alpha, beta)


def is_hfr(R: Ring, t: TauRelation, alpha: Alpha, max_len: Optional[int] = None) -> PropVerdict:
    return evaluator(R, t, max_len).hfr(alpha)


def is_ufr(R: Ring, t: TauRelation, alpha: Alpha, beta: AssocKind, max_len: Optional[int] = None) -> PropVerdict:
    return evaluator(R, t, max_len).ufr(alpha, beta)


def evaluate_all(R: Ring, t: TauRelation, max_len: Optional[int] = None) -> List[PropVerdict]:
    return evaluator(R, t, max_len).all_verdicts()


# Implication diagram

@dataclass
class DiagramCheck:
    ring: str
    tau: str
    star: bool
    star_exact: bool
    violations: List[Dict[str, Any]] = field(default_factory=list)
    inconclusive: List[Dict[str, Any]] = field(default_factory=list)
    informational: List[Dict[str, Any]] = field(default_factory=list)
    arrows_checked: int = 0

    def to_record(self) -> Dict[str, Any]:
        return {
            "ring_spec": self.ring,
            "tau": self.tau,
            "star": self.star,
            "star_exact": self.star_exact,
            "arrows_checked": self.arrows_checked,
            "violations": self.violations,
            "inconclusive": self.inconclusive,
            "informational": self.informational,
        }


def _arrow(
    check: DiagramCheck,
    arrow: str,
    premise: PropVerdict,
    conclusion: PropVerdict,
    starred: bool = False,
    informational: bool = False,
) -> None:
    check.arrows_checked += 1
    if premise.verdict is Verdict.NO or conclusion.verdict is Verdict.YES:
        return
    if starred and not check.star:
        return
    entry = {
        "arrow": arrow,
        "premise": premise.to_record(),
        "conclusion": conclusion.to_record(),
    }
    if informational:
        if conclusion.verdict is Verdict.NO:
            check.informational.append(entry)
        return
    certain = (
        premise.verdict is Verdict.YES
        and conclusion.verdict is Verdict.NO
        and conclusion.exact
        and (check.star_exact or not starred)
    )
    (check.violations if certain else check.inconclusive).append(entry)


def verify_ff_diagram(R: Ring, t: TauRelation, max_len: Optional[int] = None) -> DiagramCheck:
    """
    Evaluate every arrow of the finite-factorization diagram for every α and β.

    ⋆-arrows are checked only when τ is refinable and associate preserving.
    The two arrows concluding "R is τ-α" only follow for α atomic or strongly
    atomic; for the other two flavors a failure is reported as informational.
    """
    ev = evaluator(R, t, max_len)
    star, star_exact = is_star(t, ev.max_len)
    check = DiagramCheck(ring=R.name, tau=t.name, star=star, star_exact=star_exact)

    bfr, accp, tau_accp = ev.bfr(), ev.accp(), ev.tau_accp()
    _arrow(check, "(8) BFR => tau-ACCP", bfr, tau_accp, starred=True)
    _arrow(check, "(10) ACCP => tau-ACCP", accp, tau_accp)

    for beta in AssocKind:
        ffr, wffr = ev.ffr(beta), ev.wffr(beta)
        _arrow(check, f"(4) FFR[{beta.value}] => BFR", ffr, bfr)
        _arrow(check, f"(5) FFR[{beta.value}] => WFFR[{beta.value}]", ffr, wffr)

    for alpha in Alpha:
        weak_flavor = alpha in (Alpha.M_ATOMIC, Alpha.VERY_STRONGLY_ATOMIC)
        atomic, hfr = ev.atomic(alpha), ev.hfr(alpha)
        _arrow(check, f"(2) HFR[{alpha.value}] => BFR", hfr, bfr, starred=True)
        _arrow(check, f"(9) tau-ACCP => {alpha.value}", tau_accp, atomic,
               starred=True, informational=weak_flavor)
        for beta in AssocKind:
            tag = f"{alpha.value},{beta.value}"
            ufr, ffr, wffr, df = ev.ufr(alpha, beta), ev.ffr(beta), ev.wffr(beta), ev.df(alpha, beta)
            _arrow(check, f"(1) UFR[{tag}] => HFR[{alpha.value}]", ufr, hfr)
            _arrow(check, f"(3) UFR[{tag}] => FFR[{beta.value}]", ufr, ffr, starred=True)
            _arrow(check, f"(5) WFFR[{beta.value}] => df[{tag}]", wffr, df)
            _arrow(check, f"(6) WFFR[{beta.value}] => {alpha.value} and df[{tag}]", wffr,
                   _conjoin(f"{alpha.value}+df", atomic, df), starred=True, informational=weak_flavor)
            _arrow(check, f"(7) {alpha.value} and df[{tag}] => df[{tag}]",
                   _conjoin(f"{alpha.value}+df", atomic, df), df)

    log.info(
        "ff_diagram_checked",
        extra={"extra_data": {"ring": R.name, "tau": t.name, "star": star,
                              "violations": len(check.violations), "inconclusive": len(check.inconclusive)}},
    )
    return check
