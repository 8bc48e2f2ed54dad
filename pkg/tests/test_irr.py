import pytest

from taufact.errors import ElementError, SearchBoundError
from taufact.factorization.irr import (
    Alpha,
    check_strong_associate_closure,
    classify,
    classify_all,
    collapse_violations,
    default_irr_len,
    diagram_violations,
)
from taufact.structures.associates import AssocKind, related
from taufact.structures.taurel import TauKind, make_tau


def test_z6_full_two(tau):
    R, t = tau("Z/6", "full")
    flags = classify(R, t, 2)
    assert flags.irr and flags.strong and flags.m
    assert not flags.vs
    assert flags.precondition_failed


def test_z4_full_two_has_all_four_flags(tau):
    R, t = tau("Z/4", "full")
    flags = classify(R, t, 2)
    assert (flags.irr, flags.strong, flags.m, flags.vs) == (True, True, True, True)
    assert flags.exact
    assert flags.verified_up_to is None


@pytest.mark.parametrize("spec", ["Z/6", "Z/12", "Z/30", "GF(2) x Z/4"])
def test_tau_z_elements_of_sharp_are_atoms(tau, spec):
    R, t = tau(spec, "tau_z")
    for a in sorted(R.sharp):
        flags = classify(R, t, a)
        assert flags.irr
        assert flags.vs == related(R, AssocKind.VERY_STRONG, a, a)


def test_zero_under_tau_z_has_a_witness(tau):
    R, t = tau("Z/6", "tau_z")
    flags = classify(R, t, 0)
    assert not flags.irr
    assert flags.witnesses["irr"] == ["2", "3"]


def test_classify_rejects_units(tau):
    R, t = tau("Z/6", "full")
    with pytest.raises(ElementError):
        classify(R, t, 5)


def test_record_shape(tau):
    R, t = tau("Z/4", "tau_z")
    record = classify(R, t, 2).to_record(R)
    assert record["elem"] == "2"
    assert set(record) >= {"irr", "strong", "m", "vs", "verified_up_to", "precondition_failed"}


def test_default_irr_len(ring):
    R = ring("Z/30")
    assert default_irr_len(make_tau(R, TauKind.TAU_Z_DELTA)) == len(R.sharp)
    assert default_irr_len(make_tau(ring("GF(5)"), TauKind.TAU_Z_DELTA)) == 2


@pytest.mark.parametrize("name", ["tau_z", "tau_z_delta", "full"])
def test_strong_associate_closure_on_z9(tau, name):
    R, t = tau("Z/9", name)
    for flavor in Alpha:
        assert check_strong_associate_closure(R, t, flavor) == []


@pytest.mark.parametrize("spec", ["GF(2) x GF(3)", "GF(2) x GF(3) x GF(5)"])
def test_strong_associate_closure_on_field_products(tau, spec):
    R, t = tau(spec, "tau_z")
    for flavor in Alpha:
        assert check_strong_associate_closure(R, t, flavor) == []


@pytest.mark.parametrize("spec", ["Z/6", "Z/12", "Z/30", "GF(2) x Z/4", "Z/4 x Z/2"])
@pytest.mark.parametrize("name", ["full", "tau_z", "tau_z_delta"])
def test_implication_diagram_holds(tau, spec, name):
    R, t = tau(spec, name)
    flags = classify_all(R, t, max_len=5)
    assert diagram_violations(R, flags) == []


@pytest.mark.parametrize("spec", ["Z/4", "Z/8", "Z/9", "GF(4)"])
@pytest.mark.parametrize("name", ["full", "tau_z", "empty"])
def test_presimplifiable_rings_collapse(tau, spec, name):
    R, t = tau(spec, name)
    flags = classify_all(R, t, max_len=5)
    assert collapse_violations(R, flags) == []


def test_collapse_is_not_checked_on_z6(tau):
    R, t = tau("Z/6", "full")
    assert collapse_violations(R, classify_all(R, t, max_len=4)) == []


def test_explicit_bound_is_kept(tau):
    R, t = tau("Z/6", "full")
    assert classify(R, t, 2, 3).max_len == 3
    assert classify(R, t, 2).max_len == default_irr_len(t)
    with pytest.raises(SearchBoundError):
        classify(R, t, 2, 0)
    with pytest.raises(SearchBoundError):
        classify_all(R, t, 0)
