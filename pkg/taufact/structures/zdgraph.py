"""
Zero-divisor graphs Γ(R) and Γ(R/∼).

Γ(R) has vertex set Z(R)∖{0} and an edge a–b (a ≠ b) whenever ab = 0. The
associate quotient collapses ∼-classes; a vertex is labelled by the least
element index of its class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Union

import networkx as nx
from sympy import totient

from logger import get_logger
from taufact.errors import TheoremMismatch
from taufact.structures.associates import AssocKind, assoc_classes
from taufact.structures.ring import Ring
from utils import CLIQUE_CENSUS_CAP

log = get_logger()


class GraphMode(str, Enum):
    PLAIN = "plain"
    QUOTIENT = "associate-quotient"


@dataclass
class ZdGraph:
    ring: Ring
    mode: GraphMode
    graph: nx.Graph
    # quotient mode only: representative → its ∼-class
    classes: Dict[int, FrozenSet[int]] = field(default_factory=dict)

    def label(self, v: int) -> str:
        if self.mode is GraphMode.QUOTIENT:
            return f"[{self.ring.label(v)}]"
        return self.ring.label(v)

    @property
    def vertices(self) -> List[int]:
        return sorted(self.graph.nodes)

    @property
    def edges(self) -> List[tuple]:
        return sorted(tuple(sorted(e)) for e in self.graph.edges)


@dataclass(frozen=True)
class CliqueCensus:
    counts: Dict[int, int]
    total: int
    cap: int
    overflow: bool

    def to_record(self) -> Dict[str, Any]:
        return {
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "total": self.total,
            "cap": self.cap,
            "overflow": self.overflow,
        }


def build(R: Ring, mode: Union[GraphMode, str] = GraphMode.PLAIN) -> ZdGraph:
    mode = GraphMode(mode)
    vertices = sorted(R.zero_divisors - {R.zero})
    g = nx.Graph()

    if mode is GraphMode.PLAIN:
        g.add_nodes_from(vertices)
        for i, a in enumerate(vertices):
            for b in vertices[i + 1:]:
                if R.mul(a, b) == R.zero:
                    g.add_edge(a, b)
        return ZdGraph(R, mode, g)

    partition = assoc_classes(R, AssocKind.ASSOCIATE, vertices)
    reps = {min(cls): cls for cls in partition.classes}
    g.add_nodes_from(sorted(reps))
    ordered = sorted(reps)
    for i, ra in enumerate(ordered):
        for rb in ordered[i + 1:]:
            zero_products = {R.mul(a, b) == R.zero for a in reps[ra] for b in reps[rb]}
            if len(zero_products) != 1:
                raise TheoremMismatch(
                    "associate-quotient adjacency",
                    {"ring": R.name, "classes": [R.labels(reps[ra]), R.labels(reps[rb])]},
                )
            if zero_products.pop():
                g.add_edge(ra, rb)
    return ZdGraph(R, mode, g, classes=reps)


def is_connected(zg: ZdGraph) -> bool:
    # the empty graph counts as connected
    if zg.graph.number_of_nodes() == 0:
        return True
    return nx.is_connected(zg.graph)


def diameter(zg: ZdGraph) -> Union[int, float]:
    """Largest eccentricity; 0 for empty and singleton graphs, inf when disconnected."""
    if zg.graph.number_of_nodes() <= 1:
        return 0
    if not nx.is_connected(zg.graph):
        return math.inf
    return nx.diameter(zg.graph)


def clique_number(zg: ZdGraph) -> int:
    if zg.graph.number_of_nodes() == 0:
        return 0
    return max(len(c) for c in nx.find_cliques(zg.graph))


def clique_census(zg: ZdGraph, cap: Optional[int] = None) -> CliqueCensus:
    """Count complete subgraphs K^r with r ≥ 2, stopping once `cap` have been seen."""
    cap = cap or CLIQUE_CENSUS_CAP
    counts: Dict[int, int] = {}
    total = 0
    overflow = False
    for clique in nx.enumerate_all_cliques(zg.graph):
        if len(clique) < 2:
            continue
        if total >= cap:
            overflow = True
            break
        counts[len(clique)] = counts.get(len(clique), 0) + 1
        total += 1
    if overflow:
        log.warning(
            "clique_census_overflow",
            extra={"extra_data": {"ring": zg.ring.name, "mode": zg.mode.value, "cap": cap}},
        )
    return CliqueCensus(counts=counts, total=total, cap=cap, overflow=overflow)


def export_dot(zg: ZdGraph) -> str:
    name = "Gamma" if zg.mode is GraphMode.PLAIN else "Gamma_quotient"
    lines = [
        f'graph "{name}({zg.ring.name})" {{',
        f"  // mode={zg.mode.value} omega={clique_number(zg)}",
    ]
    for v in zg.vertices:
        lines.append(f'  "{zg.label(v)}";')
    for a, b in zg.edges:
        lines.append(f'  "{zg.label(a)}" -- "{zg.label(b)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_adjacency_json(zg: ZdGraph) -> Dict[str, Any]:
    return {
        "vertices": [zg.label(v) for v in zg.vertices],
        "edges": [[zg.label(a), zg.label(b)] for a, b in zg.edges],
        "mode": zg.mode.value,
    }


def zn_vertex_count(n: int) -> int:
    """|Γ(ℤ/nℤ)| = n − 1 − φ(n): every non-zero non-unit of ℤ/nℤ is a zero-divisor."""
    return n - 1 - int(totient(n))
