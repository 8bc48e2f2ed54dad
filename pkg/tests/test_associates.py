import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taufact.structures.associates import (
    AssocKind,
    assoc_classes,
    lemma_2_2_violations,
    related,
    ring_class,
    self_very_strong_report,
)
from taufact.structures.ring import ring_from_text


def test_z9_three_and_six_are_associate_in_every_sense(ring):
    R = ring("Z/9")
    for kind in AssocKind:
        assert related(R, kind, 3, 6)


def test_z6_strong_but_not_very_strong(ring):
    R = ring("Z/6")
    assert related(R, AssocKind.STRONG, 2, 4)
    assert not related(R, AssocKind.VERY_STRONG, 2, 4)


def test_zero_is_very_strongly_self_associate(ring):
    for spec in ("Z/6", "Z/4", "GF(3) x Z/9"):
        R = ring(spec)
        assert related(R, AssocKind.VERY_STRONG, R.zero, R.zero)


def test_assoc_classes_on_z6_zero_divisors(ring):
    R = ring("Z/6")
    partition = assoc_classes(R, AssocKind.ASSOCIATE, {2, 3, 4})
    assert sorted(sorted(c) for c in partition.classes) == [[2, 4], [3]]


def test_assoc_classes_field_is_one_class(ring):
    R = ring("GF(7)")
    partition = assoc_classes(R, AssocKind.ASSOCIATE, R.nonzero)
    assert len(partition.classes) == 1


def test_very_strong_classes_flag_non_reflexive(ring):
    R = ring("Z/6")
    partition = assoc_classes(R, AssocKind.VERY_STRONG, R.sharp)
    # 2, 3, 4 all fail a ≅ a in Z/6
    assert partition.non_reflexive == {2, 3, 4}
    assert all(len(c) == 1 for c in partition.classes)


def test_z4_two_is_self_very_strong(ring):
    R = ring("Z/4")
    report = self_very_strong_report(R, 2)
    assert report == {"self_very_strong": True, "ann_in_jacobson": True}


@pytest.mark.parametrize(
    "spec, presimplifiable",
    [("Z/4", True), ("Z/8", True), ("Z/9", True), ("GF(5)", True), ("Z/6", False), ("Z/12", False)],
)
def test_ring_class_presimplifiable(ring, spec, presimplifiable):
    flags = ring_class(ring(spec))
    assert flags["presimplifiable"] is presimplifiable
    # Lemma 2.2(5): the five conditions agree
    assert flags["very_strongly_associate"] is presimplifiable
    assert flags["relations_coincide"] is presimplifiable


def test_field_is_associate_in_all_three_senses(ring):
    flags = ring_class(ring("GF(9)"))
    assert flags["presimplifiable"]
    assert flags["strongly_associate"]
    assert flags["very_strongly_associate"]


def test_finite_rings_are_strongly_associate(ring):
    for spec in ("Z/6", "Z/12", "GF(2) x Z/4"):
        assert ring_class(ring(spec))["strongly_associate"]


@pytest.mark.parametrize("spec", ["Z/4", "Z/6", "Z/12", "Z/30", "GF(2) x Z/4", "Z/4 x Z/2"])
def test_lemma_2_2_holds(ring, spec):
    assert lemma_2_2_violations(ring(spec)) == []


@settings(max_examples=80, deadline=None)
@given(spec=st.sampled_from(["Z/8", "Z/12", "Z/18", "GF(2) x Z/4", "GF(3) x GF(3)"]), data=st.data())
def test_implication_chain(spec, data):
    R = ring_from_text(spec)
    a = data.draw(st.integers(0, R.order - 1))
    b = data.draw(st.integers(0, R.order - 1))
    if related(R, AssocKind.VERY_STRONG, a, b):
        assert related(R, AssocKind.STRONG, a, b)
    if related(R, AssocKind.STRONG, a, b):
        assert related(R, AssocKind.ASSOCIATE, a, b)
