"""
The four τ-irreducibility flavors and their cross-checks.

Every flag is computed from the same FactorTable, so a flag is exact exactly
when the element's factorization list is complete (`FactorTable.is_exact`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from logger import get_logger
from taufact.errors import ElementError, TheoremMismatch
from taufact.factorization.factor import FactorTable, factor_table
from taufact.structures.associates import AssocKind, cached_ring_class, related
from taufact.structures.ring import Ring
from taufact.structures.taurel import TauKind, TauRelation
from utils import IRR_MAX_LEN

log = get_logger()


class Alpha(str, Enum):
    ATOMIC = "atomic"
    STRONGLY_ATOMIC = "strongly_atomic"
    M_ATOMIC = "m_atomic"
    VERY_STRONGLY_ATOMIC = "very_strongly_atomic"

    @property
    def flag(self) -> str:
        return {
            "atomic": "irr",
            "strongly_atomic": "strong",
            "m_atomic": "m",
            "very_strongly_atomic": "vs",
        }[self.value]


@dataclass
class IrrFlags:
    element: int
    irr: bool
    strong: bool
    m: bool
    vs: bool
    self_very_strong: bool
    m_exclusive: bool
    exact: bool
    max_len: int
    witnesses: Dict[str, Any] = field(default_factory=dict)

    @property
    def verified_up_to(self) -> Optional[int]:
        return None if self.exact else self.max_len

    @property
    def precondition_failed(self) -> bool:
        """vs is only defined for a ≅ a; it reads False otherwise."""
        return not self.self_very_strong

    @property
    def m_readings_diverge(self) -> bool:
        return self.m != self.m_exclusive

    def flag(self, alpha: Alpha) -> bool:
        return getattr(self, alpha.flag)

    def to_record(self, R: Ring) -> Dict[str, Any]:
        return {
            "elem": R.label(self.element),
            "irr": self.irr,
            "strong": self.strong,
            "m": self.m,
            "vs": self.vs,
            "verified_up_to": self.verified_up_to,
            "precondition_failed": self.precondition_failed,
            "m_readings_diverge": self.m_readings_diverge,
            "witnesses": self.witnesses,
        }


def default_irr_len(t: TauRelation) -> int:
    # τ_z^Δ never repeats a factor, so |R#| bounds every factorization
    if t.kind is TauKind.TAU_Z_DELTA:
        return max(2, len(t.ring.sharp))
    return IRR_MAX_LEN


def _labels(R: Ring, m) -> List[str]:
    return [R.label(x) for x in m]


def classify_with_table(R: Ring, t: TauRelation, table: FactorTable, a: int) -> IrrFlags:
    facts = table.factorizations(a)
    ideal_a = R.principal_ideal(a)
    orbit = R.unit_orbit(a)

    def assoc(x: int) -> bool:
        return R.principal_ideal(x) == ideal_a

    witnesses: Dict[str, Any] = {}

    irr_witness = next((m for m in facts if not any(assoc(x) for x in m)), None)
    strong_witness = next((m for m in facts if not any(x in orbit for x in m)), None)
    if irr_witness is not None:
        witnesses["irr"] = _labels(R, irr_witness)
    if strong_witness is not None:
        witnesses["strong"] = _labels(R, strong_witness)

    # m-irreducible: (a) maximal among (b), b ∣_τ a, trivial divisors included
    nontrivial_divisors = table.divisors(a)
    trivial_divisors = {R.zero} if a == R.zero else orbit
    larger = sorted(b for b in nontrivial_divisors | trivial_divisors if ideal_a < R.principal_ideal(b))
    m_ideal_form = not larger
    m_universal_form = all(all(assoc(x) for x in m) for m in facts)
    if m_ideal_form != m_universal_form:
        raise TheoremMismatch(
            "Prop 3.5 (1)<=>(2)",
            {"ring": R.name, "tau": t.name, "element": R.label(a),
             "ideal_form": m_ideal_form, "universal_form": m_universal_form},
        )
    if larger:
        witnesses["m"] = {"larger_divisor_ideals": _labels(R, larger)}
    m_exclusive = bool(nontrivial_divisors) and all(assoc(b) for b in nontrivial_divisors)

    self_vs = related(R, AssocKind.VERY_STRONG, a, a)
    vs = self_vs and not facts
    if not self_vs:
        witnesses["vs"] = "precondition failed: a is not very strongly associate to itself"
    elif facts:
        witnesses["vs"] = _labels(R, facts[0])

    up_to_associate = None
    if self_vs:
        up_to_associate = table.factorizations_up_to_associate(a)
        form3 = all(any(assoc(x) for x in m) for m in up_to_associate)
        if form3 != (not facts):
            raise TheoremMismatch(
                "Prop 3.7 (3)<=>(4)",
                {"ring": R.name, "tau": t.name, "element": R.label(a), "form3": form3, "form4": not facts},
            )

    if cached_ring_class(R)["strongly_associate"]:
        if up_to_associate is None:
            up_to_associate = table.factorizations_up_to_associate(a)
        ideal_product_form = all(any(assoc(x) for x in m) for m in up_to_associate)
        if ideal_product_form != (irr_witness is None):
            raise TheoremMismatch(
                "Prop 3.1 (1)<=>(3)",
                {"ring": R.name, "tau": t.name, "element": R.label(a),
                 "ideal_product_form": ideal_product_form, "irr": irr_witness is None},
            )

    return IrrFlags(
        element=a,
        irr=irr_witness is None,
        strong=strong_witness is None,
        m=m_ideal_form,
        vs=vs,
        self_very_strong=self_vs,
        m_exclusive=m_exclusive,
        exact=table.is_exact(a),
        max_len=table.max_len,
        witnesses=witnesses,
    )


def classify(R: Ring, t: TauRelation, a: int, max_len: Optional[int] = None) -> IrrFlags:
    """Classify the non-unit a; raises ElementError for units."""
    a = R.check_element(a)
    if R.is_unit(a):
        raise ElementError(f"{R.label(a)} is a unit of {R.name}; classify needs a non-unit")
    table = factor_table(t, max_len if max_len is not None else default_irr_len(t))
    return classify_with_table(R, t, table, a)


def classify_all(R: Ring, t: TauRelation, max_len: Optional[int] = None) -> Dict[int, IrrFlags]:
    table = factor_table(t, max_len if max_len is not None else default_irr_len(t))
    flags = {a: classify_with_table(R, t, table, a) for a in sorted(R.nonunits)}
    log.debug(
        "classified_all",
        extra={"extra_data": {"ring": R.name, "tau": t.name, "elements": len(flags),
                              "exact": all(f.exact for f in flags.values())}},
    )
    return flags


def check_strong_associate_closure(
    R: Ring,
    t: TauRelation,
    flavor: Alpha,
    max_len: Optional[int] = None,
    flags: Optional[Dict[int, IrrFlags]] = None,
) -> List[Tuple[int, int]]:
    """Pairs a ≈ a′ where a has the flavor and a′ does not (expected empty)."""
    flags = flags if flags is not None else classify_all(R, t, max_len)
    violations = []
    for a, fa in flags.items():
        if not fa.flag(flavor):
            continue
        for a2 in sorted(R.unit_orbit(a)):
            if a2 != a and not flags[a2].flag(flavor):
                violations.append((a, a2))
    return violations


def diagram_violations(R: Ring, flags: Dict[int, IrrFlags]) -> List[Dict[str, Any]]:
    """vs ⇒ m, vs ⇒ strong, m ⇒ irr, strong ⇒ irr, and m ⇒ strong on strongly associate rings."""
    strongly_associate = cached_ring_class(R)["strongly_associate"]
    arrows = [("vs", "m"), ("vs", "strong"), ("m", "irr"), ("strong", "irr")]
    if strongly_associate:
        arrows.append(("m", "strong"))
    out = []
    for a, f in flags.items():
        for src, dst in arrows:
            if getattr(f, src) and not getattr(f, dst):
                out.append({"element": R.label(a), "arrow": f"{src}=>{dst}"})
    return out


def collapse_violations(R: Ring, flags: Dict[int, IrrFlags]) -> List[Dict[str, Any]]:
    """On a présimplifiable ring all four flags agree."""
    if not cached_ring_class(R)["presimplifiable"]:
        return []
    return [
        {"element": R.label(a), "flags": [f.irr, f.strong, f.m, f.vs]}
        for a, f in flags.items()
        if len({f.irr, f.strong, f.m, f.vs}) != 1
    ]
