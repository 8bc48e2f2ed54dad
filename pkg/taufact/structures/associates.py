"""Associate relations ∼, ≈, ≅ and ring-level associate classes."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, TypedDict

import networkx as nx

from logger import get_logger
from taufact.errors import TheoremMismatch
from taufact.structures.ring import Ring

log = get_logger()


class AssocKind(str, Enum):
    ASSOCIATE = "associate"
    STRONG = "strong_associate"
    VERY_STRONG = "very_strong_associate"

    @property
    def symbol(self) -> str:
        return {"associate": "∼", "strong_associate": "≈", "very_strong_associate": "≅"}[self.value]


def related(R: Ring, kind: AssocKind, a: int, b: int) -> bool:
    if kind is AssocKind.ASSOCIATE:
        return R.principal_ideal(a) == R.principal_ideal(b)
    if kind is AssocKind.STRONG:
        return a in R.unit_orbit(b)
    if R.principal_ideal(a) != R.principal_ideal(b):
        return False
    if a == R.zero and b == R.zero:
        return True
    # every r with a = rb must be a unit
    return R.multipliers(b, a) <= R.units


@dataclass(frozen=True)
class AssocPartition:
    kind: AssocKind
    classes: List[FrozenSet[int]]
    non_reflexive: FrozenSet[int]

    def class_of(self) -> Dict[int, int]:
        """Element → index of its class."""
        return {a: i for i, cls in enumerate(self.classes) for a in cls}


def assoc_classes(R: Ring, kind: AssocKind, domain: Iterable[int]) -> AssocPartition:
    """
    Partition `domain` by `kind`.

    ≅ is only symmetric and transitive, so its classes come from the reflexive
    closure; elements with a ≇ a land in singleton classes and are reported in
    `non_reflexive`.
    """
    elems = sorted(set(domain))
    by_ideal: Dict[FrozenSet[int], List[int]] = {}
    for a in elems:
        by_ideal.setdefault(R.principal_ideal(a), []).append(a)

    if kind is AssocKind.ASSOCIATE:
        classes = [frozenset(group) for group in by_ideal.values()]
        non_reflexive: FrozenSet[int] = frozenset()
    elif kind is AssocKind.STRONG:
        members = set(elems)
        seen = set()
        classes = []
        for a in elems:
            if a in seen:
                continue
            cls = frozenset(R.unit_orbit(a) & members)
            seen |= cls
            classes.append(cls)
        non_reflexive = frozenset()
    else:
        g = nx.Graph()
        g.add_nodes_from(elems)
        for group in by_ideal.values():
            for i, a in enumerate(group):
                for b in group[i + 1:]:
                    if related(R, kind, a, b):
                        g.add_edge(a, b)
        classes = [frozenset(c) for c in nx.connected_components(g)]
        non_reflexive = frozenset(a for a in elems if not related(R, kind, a, a))

    classes.sort(key=min)
    return AssocPartition(kind=kind, classes=classes, non_reflexive=non_reflexive)


class RingClass(TypedDict):
    presimplifiable: bool
    strongly_associate: bool
    very_strongly_associate: bool
    very_strong_reflexive: bool
    very_strong_equivalence: bool
    relations_coincide: bool


def ring_class(R: Ring) -> RingClass:
    """
    Evaluate the three ring-level flags independently and cross-assert
    Lemma 2.2(5): présimplifiable ⇔ very strongly associate ⇔ ≅ reflexive
    ⇔ ≅ an equivalence ⇔ ∼, ≈, ≅ coincide.
    """
    presimplifiable = all(
        R.multipliers(x, x) <= R.units for x in R.elements if x != R.zero
    )

    assoc_groups = assoc_classes(R, AssocKind.ASSOCIATE, R.elements).classes
    strongly_associate = all(R.unit_orbit(a) == cls for cls in assoc_groups for a in cls)

    vs_pairs = set()
    strong_pairs = set()
    assoc_pairs = set()
    for cls in assoc_groups:
        for a in cls:
            for b in cls:
                assoc_pairs.add((a, b))
                if related(R, AssocKind.STRONG, a, b):
                    strong_pairs.add((a, b))
                if related(R, AssocKind.VERY_STRONG, a, b):
                    vs_pairs.add((a, b))

    very_strongly_associate = vs_pairs == assoc_pairs
    reflexive = all((a, a) in vs_pairs for a in R.elements)
    symmetric = all((b, a) in vs_pairs for a, b in vs_pairs)
    transitive = all(
        (a, c) in vs_pairs
        for cls in assoc_groups
        for a in cls
        for b in cls
        if (a, b) in vs_pairs
        for c in cls
        if (b, c) in vs_pairs
    )
    equivalence = reflexive and symmetric and transitive
    coincide = vs_pairs == strong_pairs == assoc_pairs

    result: RingClass = {
        "presimplifiable": presimplifiable,
        "strongly_associate": strongly_associate,
        "very_strongly_associate": very_strongly_associate,
        "very_strong_reflexive": reflexive,
        "very_strong_equivalence": equivalence,
        "relations_coincide": coincide,
    }
    lemma_flags = [
        presimplifiable, very_strongly_associate, reflexive, equivalence, coincide
    ]
    if len(set(lemma_flags)) != 1:
        log.error("theorem_mismatch", extra={"extra_data": {"ring": R.name, **result}})
        raise TheoremMismatch("Lemma 2.2(5)", {"ring": R.name, "flags": dict(result)})
    return result


def self_very_strong_report(R: Ring, a: int) -> Dict[str, bool]:
    """Both sides of Lemma 2.2(4): a ≅ a versus a = 0 or ann(a) ⊆ J(R)."""
    return {
        "self_very_strong": related(R, AssocKind.VERY_STRONG, a, a),
        "ann_in_jacobson": a == R.zero or R.annihilator(a) <= R.jacobson,
    }


def lemma_2_2_violations(R: Ring) -> List[Dict[str, object]]:
    """Element-wise failures of the ≅ ⇒ ≈ ⇒ ∼ chain and of Lemma 2.2(4)."""
    violations: List[Dict[str, object]] = []
    class_of = assoc_classes(R, AssocKind.ASSOCIATE, R.elements).class_of()
    for a in R.elements:
        report = self_very_strong_report(R, a)
        if report["self_very_strong"] != report["ann_in_jacobson"]:
            violations.append({"check": "lemma_2_2_4", "a": R.label(a), **report})
        orbit = R.unit_orbit(a)
        for b in R.elements:
            assoc = class_of[a] == class_of[b]
            strong = b in orbit
            vs = assoc and related(R, AssocKind.VERY_STRONG, a, b)
            if (vs and not strong) or (strong and not assoc):
                violations.append({"check": "lemma_2_2_1", "a": R.label(a), "b": R.label(b)})
    return violations


@lru_cache(maxsize=256)
def cached_ring_class(R: Ring) -> RingClass:
    return ring_class(R)
