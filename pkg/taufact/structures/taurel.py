"""
τ-relations on R# and their structural properties.

A relation is stored as an explicit symmetric pair set; the factorization
search and every property checker read the same `neighbors` map.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from logger import get_logger
from taufact.errors import TauRelationError
from taufact.factorization.factor import (
    Factorization,
    certify,
    combine,
    factor_table,
    refine,
    unit_for,
)
from taufact.structures.associates import AssocKind, assoc_classes
from taufact.structures.ring import Ring
from taufact.verdicts import PropVerdict, bounded, no, yes
from utils import DEFAULT_MAX_LEN

log = get_logger()

Pair = Tuple[int, int]


class TauKind(str, Enum):
    FULL = "full"
    EMPTY = "empty"
    SUBSET = "subset"
    IDEAL = "ideal_congruence"
    TAU_Z = "tau_z"
    TAU_Z_DELTA = "tau_z_delta"
    EXPLICIT = "explicit"


class TauProperty(str, Enum):
    MULTIPLICATIVE = "multiplicative"
    DIVISIVE = "divisive"
    ASSOCIATE_PRESERVING = "associate_preserving"
    COMBINABLE = "combinable"
    REFINABLE = "refinable"


@dataclass(frozen=True, eq=False)
class TauRelation:
    ring: Ring
    pairs: FrozenSet[Pair]
    kind: TauKind
    data: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        sharp = self.ring.sharp
        for a, b in self.pairs:
            if a not in sharp or b not in sharp:
                raise TauRelationError(
                    f"pair ({self.ring.label(a)}, {self.ring.label(b)}) is not in R# × R# of {self.ring.name}"
                )
            if (b, a) not in self.pairs:
                raise TauRelationError(f"relation is not symmetric at ({a}, {b})")

    @cached_property
    def neighbors(self) -> Dict[int, FrozenSet[int]]:
        out: Dict[int, set] = {}
        for a, b in self.pairs:
            out.setdefault(a, set()).add(b)
        return {a: frozenset(bs) for a, bs in out.items()}

    def related(self, a: int, b: int) -> bool:
        return (a, b) in self.pairs

    @property
    def name(self) -> str:
        R = self.ring
        if self.kind is TauKind.SUBSET:
            return "subset:" + ",".join(R.label(a) for a in self.data)
        if self.kind is TauKind.IDEAL:
            return f"ideal:{R.label(self.data[0])}"
        return self.kind.value

    def sorted_pairs(self) -> List[Pair]:
        return sorted(self.pairs)


@lru_cache(maxsize=256)
def _standard_tau(R: Ring, kind: TauKind) -> TauRelation:
    # one instance per (ring, kind); factor tables are cached per relation object
    sharp = sorted(R.sharp)
    if kind is TauKind.FULL:
        pairs = {(a, b) for a in sharp for b in sharp}
    elif kind is TauKind.EMPTY:
        pairs = set()
    elif kind is TauKind.TAU_Z:
        pairs = {(a, b) for a in sharp for b in sharp if R.mul(a, b) == R.zero}
    else:
        pairs = {(a, b) for a in sharp for b in sharp if a != b and R.mul(a, b) == R.zero}
    return TauRelation(R, frozenset(pairs), kind)


def make_tau(R: Ring, kind: Union[TauKind, str], data: Any = None) -> TauRelation:
    kind = TauKind(kind)
    sharp = sorted(R.sharp)
    if kind in (TauKind.FULL, TauKind.EMPTY, TauKind.TAU_Z, TauKind.TAU_Z_DELTA):
        return _standard_tau(R, kind)
    if kind is TauKind.SUBSET:
        subset = frozenset(int(a) for a in (data or ()))
        outside = subset - R.sharp
        if outside:
            raise TauRelationError(
                f"subset elements {R.labels(outside)} are not non-zero non-units of {R.name}"
            )
        pairs = {(a, b) for a in subset for b in subset}
        return TauRelation(R, frozenset(pairs), kind, tuple(sorted(subset)))
    if kind is TauKind.IDEAL:
        if data is None:
            raise TauRelationError("ideal_congruence needs a generator c for I = (c)")
        c = R.check_element(int(data))
        ideal = R.principal_ideal(c)
        pairs = {(a, b) for a in sharp for b in sharp if R.sub(a, b) in ideal}
        return TauRelation(R, frozenset(pairs), kind, (c,))
    return load_explicit(R, data or ())


def load_explicit(R: Ring, pairs: Iterable[Any]) -> TauRelation:
    """Symmetrize a list of [a, b] pairs (indices or element labels)."""
    out = set()
    for entry in pairs:
        if len(entry) != 2:
            raise TauRelationError(f"explicit relation entries must be pairs, got {entry!r}")
        a, b = (_element(R, x) for x in entry)
        out.add((a, b))
        out.add((b, a))
    return TauRelation(R, frozenset(out), TauKind.EXPLICIT)


def _element(R: Ring, value: Any) -> int:
    if isinstance(value, int):
        return R.check_element(value)
    return R.parse_element(str(value))


def split_elements(text: str) -> List[str]:
    """Split on commas outside parentheses: "(1,0),(0,1)" → ["(1,0)", "(0,1)"]."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        parts.append(tail)
    return [p for p in parts if p]


def parse_tau(R: Ring, text: str) -> TauRelation:
    """CLI names: full, empty, tau_z, tau_z_delta, subset:<elems>, ideal:<gen>, explicit:<file.json>."""
    name, _, arg = text.strip().partition(":")
    if name in ("full", "empty", "tau_z", "tau_z_delta") and not arg:
        return make_tau(R, name)
    if name == "subset":
        return make_tau(R, TauKind.SUBSET, [R.parse_element(x) for x in split_elements(arg)])
    if name == "ideal" and arg:
        return make_tau(R, TauKind.IDEAL, R.parse_element(arg))
    if name == "explicit" and arg:
        try:
            with open(arg, "r", encoding="utf-8") as f:
                raw = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise TauRelationError(f"cannot load explicit relation from {arg}: {e}")
        return load_explicit(R, raw)
    raise TauRelationError(
        f"unknown relation {text!r}; use full, empty, tau_z, tau_z_delta, "
        f"subset:<elems>, ideal:<gen> or explicit:<file.json>"
    )


def sampled_subsets(R: Ring, count: int, seed: int, max_size: int = 5) -> List[FrozenSet[int]]:
    """`count` random non-empty subsets of R# (empty list when R# is empty)."""
    sharp = sorted(R.sharp)
    if not sharp:
        return []
    rng = random.Random(f"{R.name}:{seed}")
    out = []
    for _ in range(count):
        size = rng.randint(1, min(max_size, len(sharp)))
        out.append(frozenset(rng.sample(sharp, size)))
    return out


CORPUS_TAUS = ("full", "empty", "tau_z", "tau_z_delta", "sampled")


def expand_relations(R: Ring, names: Iterable[str], seed: int, samples: int = 2) -> List[TauRelation]:
    """Corpus relation names; `sampled` expands to `samples` random S×S relations."""
    out = []
    for name in names:
        if name == "sampled":
            out += [make_tau(R, TauKind.SUBSET, sorted(s)) for s in sampled_subsets(R, samples, seed)]
        else:
            out.append(parse_tau(R, name))
    return out


# Property checks

def _check_multiplicative(t: TauRelation) -> PropVerdict:
    R = t.ring
    for a in sorted(t.neighbors):
        nbrs = sorted(t.neighbors[a])
        for b in nbrs:
            for c in nbrs:
                bc = R.mul(b, c)
                if bc not in R.sharp or not t.related(a, bc):
                    return no(
                        TauProperty.MULTIPLICATIVE.value,
                        {"a": R.label(a), "b": R.label(b), "c": R.label(c), "bc": R.label(bc)},
                    )
    return yes(TauProperty.MULTIPLICATIVE.value)


def _check_divisive(t: TauRelation) -> PropVerdict:
    R = t.ring
    sharp = sorted(R.sharp)
    for a, b in t.sorted_pairs():
        bad = [b2 for b2 in sharp if R.divides(b2, b) and not t.related(a, b2)]
        if bad:
            # prefer a divisor other than a
            b2 = next((d for d in bad if d != a), bad[0])
            return no(
                TauProperty.DIVISIVE.value,
                {"a": R.label(a), "b": R.label(b), "divisor": R.label(b2)},
            )
    return yes(TauProperty.DIVISIVE.value)


def _check_associate_preserving(t: TauRelation, kind: AssocKind) -> PropVerdict:
    R = t.ring
    prop = f"{TauProperty.ASSOCIATE_PRESERVING.value}:{kind.value}"
    partition = assoc_classes(R, kind, R.sharp)
    class_of = partition.class_of()
    for a, b in t.sorted_pairs():
        for b2 in sorted(partition.classes[class_of[b]]):
            if kind is AssocKind.VERY_STRONG and b2 == b and b in partition.non_reflexive:
                continue
            if not t.related(a, b2):
                return no(
                    prop,
                    {"a": R.label(a), "b": R.label(b), "associate": R.label(b2), "kind": kind.symbol},
                )
    return yes(prop)


def _valid_triples(t: TauRelation) -> List[Tuple[int, int, int]]:
    triples = []
    for x in sorted(t.neighbors):
        for y in sorted(t.neighbors[x]):
            if y < x:
                continue
            for z in sorted(t.neighbors[x] & t.neighbors[y]):
                if z >= y:
                    triples.append((x, y, z))
    return triples


def _check_combinable(t: TauRelation, max_len: int) -> PropVerdict:
    """
    A failed merge in a valid multiset already fails inside the sub-multiset
    {x, y, z} formed by the merged pair and one offending factor, and merging
    two factors always certifies (possibly as 0 = λ·0), so valid triples decide.
    """
    R = t.ring
    prop = TauProperty.COMBINABLE.value
    if max_len < 3:
        return bounded(prop, max_len)
    for triple in _valid_triples(t):
        target = R.product(triple)
        f = Factorization(target, R.one, triple)
        # merge the last two first, then the outer pair, then the first two
        for order in ((0, 1, 2), (1, 0, 2), (2, 0, 1)):
            arranged = Factorization(target, R.one, tuple(triple[k] for k in order))
            candidate = combine(R, arranged, 1)
            if not certify(R, t, candidate.target, candidate.unit, candidate.factors):
                return no(
                    prop,
                    {
                        "factorization": f.to_record(R),
                        "merged": [R.label(arranged.factors[1]), R.label(arranged.factors[2])],
                        "candidate": candidate.to_record(R),
                    },
                )
    return yes(prop, decided_by="pairwise-tau triples")


def _check_refinable(t: TauRelation, max_len: int) -> PropVerdict:
    """
    A refinement of v inside a factorization fails exactly when a factor b of
    a non-trivial factorization of v is not τ-related to some w co-occurring
    with v; the pair {v, w} is itself a valid multiset, so pairs decide.
    """
    R = t.ring
    prop = TauProperty.REFINABLE.value
    table = factor_table(t, max_len)
    for v in sorted(t.neighbors):
        for sub in table.factorizations(v):
            for w in sorted(t.neighbors[v]):
                bad = [b for b in sub if not t.related(b, w)]
                if bad:
                    outer = Factorization.of(R.mul(v, w), R.one, (v, w))
                    sub_f = Factorization.of(v, unit_for(R, v, sub), sub)
                    candidate = refine(R, outer, outer.factors.index(v), sub_f)
                    return no(
                        prop,
                        {
                            "factorization": outer.to_record(R),
                            "refined_factor": R.label(v),
                            "sub_factorization": sub_f.to_record(R),
                            "candidate": candidate.to_record(R),
                            "unrelated": [R.label(bad[0]), R.label(w)],
                        },
                    )
    refined = [v for v in t.neighbors if table.factorizations(v)]
    if all(table.is_exact(v) for v in t.neighbors):
        return yes(prop, elements_with_subfactorizations=len(refined))
    return bounded(prop, max_len)


def check_property(
    t: TauRelation,
    prop: Union[TauProperty, str],
    kind: Optional[AssocKind] = None,
    max_len: Optional[int] = None,
) -> PropVerdict:
    """
    multiplicative, divisive and associate_preserving are exact pair scans.
    combinable and refinable quantify over factorizations; they are decided
    exactly where the search proves it and otherwise report verified_up_to(L).
    """
    prop = TauProperty(prop)
    L = max_len if max_len is not None else DEFAULT_MAX_LEN
    if prop is TauProperty.MULTIPLICATIVE:
        verdict = _check_multiplicative(t)
    elif prop is TauProperty.DIVISIVE:
        verdict = _check_divisive(t)
    elif prop is TauProperty.ASSOCIATE_PRESERVING:
        verdict = _check_associate_preserving(t, kind or AssocKind.ASSOCIATE)
    elif prop is TauProperty.COMBINABLE:
        verdict = _check_combinable(t, L)
    else:
        verdict = _check_refinable(t, L)
    log.debug(
        "tau_property_checked",
        extra={"extra_data": {"ring": t.ring.name, "tau": t.name, "property": verdict.prop, "verdict": verdict.verdict.value}},
    )
    return verdict


def is_star(t: TauRelation, max_len: Optional[int] = None) -> Tuple[bool, bool]:
    """
    (holds, exact) for ⋆: refinable and associate preserving.

    holds is True unless refuted; exact is False when refinable was only
    verified up to the bound.
    """
    refinable = check_property(t, TauProperty.REFINABLE, max_len=max_len)
    preserving = check_property(t, TauProperty.ASSOCIATE_PRESERVING, AssocKind.ASSOCIATE)
    return refinable.holds and preserving.holds, refinable.exact


def subset_closure(R: Ring, subset: Iterable[int]) -> Dict[str, bool]:
    """S×S multiplicative ⇔ S closed under products in R#; divisive ⇔ closed under non-unit factors."""
    S = frozenset(subset)
    closed_products = all(R.mul(b, c) in S for b in S for c in S)
    closed_factors = all(b2 in S for b in S for b2 in R.sharp if R.divides(b2, b))
    return {"closed_under_products": closed_products, "closed_under_factors": closed_factors}


def pairs_record(t: TauRelation) -> List[List[str]]:
    R = t.ring
    return [[R.label(a), R.label(b)] for a, b in t.sorted_pairs()]

