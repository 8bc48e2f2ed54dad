"""
τ-factorizations: certification, enumeration, τ-divisibility, refinement and
combination.

The search materializes one FactorTable per (τ, L): every pairwise-τ multiset
of R# with 2..L elements, bucketed by product, plus the products of the
multisets of length L+1 ("probe products"). A factorization of a longer than L
contains a pairwise-τ sub-multiset of length L+1 whose product divides a, so
the factorization list of a is complete whenever no probe product divides a.
"""

from __future__ import annotations

import weakref
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import TYPE_CHECKING, Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from logger import get_logger
from taufact.errors import ElementError, FactorizationError, SearchBoundError, SearchBudgetExceeded
from taufact.structures.ring import Ring
from utils import SEARCH_NODE_BUDGET

if TYPE_CHECKING:
    from taufact.structures.taurel import TauRelation

log = get_logger()

Multiset = Tuple[int, ...]


@dataclass(frozen=True)
class Factorization:
    """a = λ·a₁⋯a_n; the factors are kept sorted (the multiset is the identity)."""

    target: int
    unit: int
    factors: Tuple[int, ...]

    @classmethod
    def of(cls, target: int, unit: int, factors: Iterable[int]) -> "Factorization":
        return cls(target, unit, tuple(sorted(factors)))

    @property
    def length(self) -> int:
        return len(self.factors)

    def is_degenerate(self, R: Ring) -> bool:
        """0 = λ·0."""
        return self.factors == (R.zero,)

    def is_trivial(self, R: Ring) -> bool:
        return len(self.factors) == 1 and (
            self.is_degenerate(R) or self.factors[0] in R.unit_orbit(self.target)
        )

    def to_record(self, R: Ring) -> Dict[str, Any]:
        return {
            "target": R.label(self.target),
            "lambda": R.label(self.unit),
            "factors": [R.label(x) for x in self.factors],
        }


def certify(R: Ring, t: "TauRelation", a: int, unit: int, factors: Sequence[int]) -> bool:
    """True iff a = λ·a₁⋯a_n is a τ-factorization (0 = λ·0 included)."""
    factors = tuple(factors)
    if not factors or unit not in R.units:
        return False
    if R.mul(unit, R.product(factors)) != a:
        return False
    if factors == (R.zero,):
        return a == R.zero
    if any(x not in R.sharp for x in factors):
        return False
    return all(t.related(x, y) for x, y in combinations(factors, 2))


def unit_for(R: Ring, a: int, factors: Sequence[int]) -> Optional[int]:
    """Least unit λ with a = λ·∏factors, if any."""
    p = R.product(factors)
    for u in sorted(R.units):
        if R.mul(u, p) == a:
            return u
    return None


@dataclass
class FactorTable:
    tau: "TauRelation"
    max_len: int
    by_product: Dict[int, List[Multiset]]
    probe_products: FrozenSet[int]
    nodes: int
    _factorizations: Dict[int, List[Multiset]] = field(default_factory=dict, repr=False)
    _exact: Dict[int, bool] = field(default_factory=dict, repr=False)

    @property
    def ring(self) -> Ring:
        return self.tau.ring

    @property
    def complete(self) -> bool:
        """No valid multiset of length max_len+1 exists, so nothing longer does either."""
        return not self.probe_products

    def is_exact(self, a: int) -> bool:
        cached = self._exact.get(a)
        if cached is None:
            cached = not any(self.ring.divides(p, a) for p in self.probe_products)
            self._exact[a] = cached
        return cached

    def multisets(self) -> Iterator[Multiset]:
        for p in sorted(self.by_product):
            yield from self.by_product[p]

    def factorizations(self, a: int) -> List[Multiset]:
        """Non-trivial multisets with product ≈ a, sorted by (length, elements)."""
        found = self._factorizations.get(a)
        if found is None:
            R = self.ring
            targets = R.unit_orbit(a) if a != R.zero else {R.zero}
            found = sorted(
                (m for p in targets for m in self.by_product.get(p, ())),
                key=lambda m: (len(m), m),
            )
            self._factorizations[a] = found
        return found

    def factorizations_up_to_associate(self, a: int) -> List[Multiset]:
        """Non-trivial multisets whose product generates the same principal ideal as a."""
        R = self.ring
        ideal = R.principal_ideal(a)
        return sorted(
            (m for p, ms in self.by_product.items() if R.principal_ideal(p) == ideal for m in ms),
            key=lambda m: (len(m), m),
        )

    def divisors(self, a: int) -> FrozenSet[int]:
        """Non-trivial τ-divisors: elements occurring in a non-trivial factorization of a."""
        return frozenset(x for m in self.factorizations(a) for x in m)

    def restrict(self, max_len: int) -> "FactorTable":
        if max_len >= self.max_len:
            return self
        by_product: Dict[int, List[Multiset]] = defaultdict(list)
        probe = set()
        for p, ms in self.by_product.items():
            for m in ms:
                if len(m) <= max_len:
                    by_product[p].append(m)
                elif len(m) == max_len + 1:
                    probe.add(p)
        return FactorTable(self.tau, max_len, dict(by_product), frozenset(probe), self.nodes)


_TABLES: "weakref.WeakKeyDictionary[TauRelation, Dict[int, FactorTable]]" = weakref.WeakKeyDictionary()


def _search(t: "TauRelation", max_len: int, budget: int) -> FactorTable:
    R = t.ring
    rows = R.mul_rows
    nbrs = t.neighbors
    by_product: Dict[int, List[Multiset]] = defaultdict(list)
    probe: set = set()
    limit = max_len + 1
    nodes = 0
    prefix: List[int] = []

    def extend(product: int, allowed: List[int]) -> None:
        nonlocal nodes
        for pos, y in enumerate(allowed):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(nodes, budget, {"ring": R.name, "tau": t.name, "max_len": max_len})
            new_product = rows[product][y]
            prefix.append(y)
            if len(prefix) == limit:
                probe.add(new_product)
            else:
                if len(prefix) >= 2:
                    by_product[new_product].append(tuple(prefix))
                ny = nbrs.get(y, frozenset())
                nxt = [z for z in allowed[pos:] if z in ny]
                if nxt:
                    extend(new_product, nxt)
            prefix.pop()

    # elements without neighbours only ever form trivial factorizations
    extend(R.one, sorted(x for x in R.sharp if nbrs.get(x)))
    return FactorTable(t, max_len, dict(by_product), frozenset(probe), nodes)


def factor_table(t: "TauRelation", max_len: int, budget: Optional[int] = None) -> FactorTable:
    """The cached table of all τ-factorizations of length ≤ max_len."""
    if max_len < 2:
        raise SearchBoundError(f"max_len must be at least 2, got {max_len}")
    tables = _TABLES.setdefault(t, {})
    table = tables.get(max_len)
    if table is not None:
        return table
    larger = [L for L in tables if L > max_len]
    if larger:
        table = tables[min(larger)].restrict(max_len)
    else:
        table = _search(t, max_len, budget or SEARCH_NODE_BUDGET)
        log.info(
            "factor_table_built",
            extra={
                "extra_data": {
                    "ring": t.ring.name,
                    "tau": t.name,
                    "max_len": max_len,
                    "nodes": table.nodes,
                    "multisets": sum(len(v) for v in table.by_product.values()),
                    "probe_products": len(table.probe_products),
                }
            },
        )
    tables[max_len] = table
    return table


@dataclass(frozen=True)
class Enumeration:
    target: int
    max_len: int
    multisets: List[Multiset]
    trivial_class: FrozenSet[int]
    complete: bool

    def to_record(self, R: Ring) -> Dict[str, Any]:
        return {
            "target": R.label(self.target),
            "max_len": self.max_len,
            "factorizations": [[R.label(x) for x in m] for m in self.multisets],
            "trivial_class": R.labels(self.trivial_class),
            "complete": self.complete,
        }


def _require_nonunit(R: Ring, a: int, role: str = "element") -> None:
    R.check_element(a)
    if R.is_unit(a):
        raise ElementError(f"{role} {R.label(a)} is a unit of {R.name}; a non-unit is required")


def enumerate_factorizations(R: Ring, t: "TauRelation", a: int, max_len: int) -> Enumeration:
    """
    All non-trivial τ-factorizations of a with at most max_len factors.

    The trivial family is summarized by the ≈-class of a ({0} stands for the
    degenerate 0 = λ·0). `complete` is True when no longer factorization exists.
    """
    R.check_element(a)
    table = factor_table(t, max_len)
    trivial = frozenset({R.zero}) if a == R.zero else R.unit_orbit(a)
    return Enumeration(
        target=a,
        max_len=max_len,
        multisets=list(table.factorizations(a)),
        trivial_class=trivial,
        complete=table.is_exact(a),
    )


def tau_divides(R: Ring, t: "TauRelation", b: int, a: int, nontrivial: bool, max_len: int) -> bool:
    """b ∣_τ a; with nontrivial=False the trivial factorization counts (b ≈ a)."""
    _require_nonunit(R, a, "target")
    _require_nonunit(R, b, "divisor")
    if not nontrivial and (b in R.unit_orbit(a) or (a == R.zero and b == R.zero)):
        return True
    return b in factor_table(t, max_len).divisors(a)


def refine(R: Ring, f: Factorization, i: int, sub: Factorization) -> Factorization:
    """Splice sub (a factorization of a_i) in at position i; the caller certifies."""
    if not 0 <= i < f.length:
        raise FactorizationError(f"position {i} out of range for {f.length} factors")
    if sub.target != f.factors[i]:
        raise FactorizationError(
            f"sub-factorization targets {R.label(sub.target)}, not factor {R.label(f.factors[i])}"
        )
    factors = f.factors[:i] + sub.factors + f.factors[i + 1:]
    return Factorization.of(f.target, R.mul(f.unit, sub.unit), factors)


def combine(R: Ring, f: Factorization, i: int) -> Factorization:
    """Merge positions i and i+1; the caller certifies."""
    if f.length < 2:
        raise FactorizationError("combine needs at least two factors")
    if not 0 <= i < f.length - 1:
        raise FactorizationError(f"position {i} out of range for combining {f.length} factors")
    merged = R.mul(f.factors[i], f.factors[i + 1])
    factors = f.factors[:i] + (merged,) + f.factors[i + 2:]
    return Factorization.of(f.target, f.unit, factors)


@dataclass(frozen=True)
class PumpingCertificate:
    """M + j·p copies of `element` is a factorization of `target` for every j ≥ 0."""

    target: int
    multiset: Multiset
    element: int
    period: int

    def lengths(self, count: int = 3) -> List[int]:
        return [len(self.multiset) + j * self.period for j in range(count)]

    def to_record(self, R: Ring) -> Dict[str, Any]:
        return {
            "target": R.label(self.target),
            "factors": [R.label(x) for x in self.multiset],
            "pump": R.label(self.element),
            "period": self.period,
            "lengths": self.lengths(),
        }


def pumping_certificate(table: FactorTable, targets: Optional[Iterable[int]] = None) -> Optional[PumpingCertificate]:
    """
    Shortest multiset containing some x τ x with multiplicity ≥ k0(x), where
    x^(k0+p) = x^k0; appending p more copies keeps both product and validity.
    """
    R = table.ring
    t = table.tau
    wanted = None if targets is None else set(targets)
    candidates = sorted(
        ((m, p) for p, ms in table.by_product.items() for m in ms
         if wanted is None or p in wanted),
        key=lambda mp: (len(mp[0]), mp[0]),
    )
    cycles: Dict[int, Tuple[int, int]] = {}
    for m, p in candidates:
        for x in sorted(set(m)):
            if not t.related(x, x):
                continue
            if x not in cycles:
                cycles[x] = R.power_cycle(x)
            k0, period = cycles[x]
            if m.count(x) >= k0:
                return PumpingCertificate(target=p, multiset=m, element=x, period=period)
    return None
