import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taufact.errors import ElementError, FactorizationError, SearchBoundError
from taufact.factorization.factor import (
    Factorization,
    certify,
    combine,
    enumerate_factorizations,
    factor_table,
    pumping_certificate,
    refine,
    tau_divides,
)
from taufact.structures.ring import ring_from_text
from taufact.structures.taurel import parse_tau


def _multisets(R, enumeration):
    return [[R.label(x) for x in m] for m in enumeration.multisets]


def test_certify_examples(tau):
    R, t = tau("Z/30", "tau_z")
    assert certify(R, t, 0, 1, [6, 10, 15])
    assert not certify(R, t, 0, 1, [6, 0])
    # wrong product
    assert not certify(R, t, 6, 1, [6, 10, 15])


def test_certify_trivial_factorizations(tau):
    R, t = tau("Z/12", "tau_z")
    for a in R.sharp:
        for u in R.units:
            inverse = next(v for v in R.units if R.mul(u, v) == R.one)
            assert certify(R, t, a, u, [R.mul(inverse, a)])


def test_certify_degenerate_zero(tau):
    R, t = tau("Z/6", "empty")
    assert certify(R, t, 0, 5, [0])
    assert not certify(R, t, 2, 1, [0])


def test_enumerate_z6_zero(tau):
    R, t = tau("Z/6", "tau_z")
    result = enumerate_factorizations(R, t, 0, 4)
    assert _multisets(R, result) == [["2", "3"], ["3", "4"]]
    assert result.complete
    assert result.trivial_class == {0}


def test_enumerate_z4_zero_is_incomplete(tau):
    R, t = tau("Z/4", "tau_z")
    result = enumerate_factorizations(R, t, 0, 5)
    assert _multisets(R, result) == [["2"] * n for n in range(2, 6)]
    assert not result.complete


def test_enumerate_empty_relation_has_only_trivial(tau):
    R, t = tau("Z/12", "empty")
    for a in R.nonunits:
        result = enumerate_factorizations(R, t, a, 4)
        assert result.multisets == []
        assert result.complete


def test_enumerate_record_shape(tau):
    R, t = tau("Z/6", "tau_z")
    record = enumerate_factorizations(R, t, 2, 3).to_record(R)
    assert record == {
        "target": "2",
        "max_len": 3,
        "factorizations": [],
        "trivial_class": ["2", "4"],
        "complete": True,
    }


@pytest.mark.parametrize("spec", ["Z/6", "Z/12", "Z/30", "GF(2) x Z/4", "Z/4 x Z/2"])
def test_tau_z_nonzero_elements_have_only_trivial_factorizations(tau, spec):
    R, t = tau(spec, "tau_z")
    table = factor_table(t, 4)
    for a in R.sharp:
        assert table.factorizations(a) == []


def test_every_enumerated_multiset_certifies(tau):
    for spec, name in [("Z/12", "full"), ("Z/30", "tau_z"), ("GF(2) x Z/4", "tau_z_delta")]:
        R, t = tau(spec, name)
        table = factor_table(t, 4)
        for m in table.multisets():
            a = R.product(m)
            assert certify(R, t, a, R.one, m)


def test_tau_divides(tau):
    R, t = tau("Z/30", "tau_z")
    assert tau_divides(R, t, 6, 0, nontrivial=True, max_len=3)

    S, s = tau("Z/6", "tau_z")
    assert not tau_divides(S, s, 2, 4, nontrivial=True, max_len=4)
    assert tau_divides(S, s, 2, 4, nontrivial=False, max_len=4)

    F, f = tau("Z/12", "full")
    assert tau_divides(F, f, 6, 6, nontrivial=False, max_len=3)
    with pytest.raises(ElementError):
        tau_divides(F, f, 1, 6, nontrivial=False, max_len=3)


def test_refine_in_full_relation(tau):
    R, t = tau("Z/12", "full")
    outer = Factorization.of(0, 1, (6, 2))
    sub = Factorization.of(6, 1, (2, 3))
    candidate = refine(R, outer, outer.factors.index(6), sub)
    assert candidate.factors == (2, 2, 3)
    assert certify(R, t, candidate.target, candidate.unit, candidate.factors)


def test_refine_rejects_wrong_sub_factorization(ring):
    R = ring("Z/12")
    outer = Factorization.of(0, 1, (6, 2))
    with pytest.raises(FactorizationError):
        refine(R, outer, 0, Factorization.of(6, 1, (2, 3)))
    with pytest.raises(FactorizationError):
        refine(R, outer, 5, Factorization.of(6, 1, (2, 3)))


def test_combine_z30_counterexample(tau):
    R, t = tau("Z/30", "tau_z")
    f = Factorization.of(0, 1, (6, 10, 15))
    candidate = combine(R, f, 1)
    assert candidate.factors == (0, 6)
    assert not certify(R, t, candidate.target, candidate.unit, candidate.factors)


def test_combine_position_errors(ring):
    R = ring("Z/30")
    with pytest.raises(FactorizationError):
        combine(R, Factorization.of(0, 1, (6, 10, 15)), 2)
    with pytest.raises(FactorizationError):
        combine(R, Factorization.of(6, 1, (6,)), 0)


def test_pumping_certificate_z12(tau):
    R, t = tau("Z/12", "tau_z")
    cert = pumping_certificate(factor_table(t, 6))
    assert cert is not None
    record = cert.to_record(R)
    assert record["target"] == "0"
    assert record["factors"] == ["6", "6"]
    assert record["pump"] == "6"
    assert record["lengths"] == [2, 3, 4]


def test_no_pumping_on_reduced_ring(tau):
    _, t = tau("Z/30", "tau_z")
    assert pumping_certificate(factor_table(t, 4)) is None


def test_smaller_tables_are_restrictions(tau):
    R, t = tau("Z/12", "full")
    big = factor_table(t, 4)
    small = factor_table(t, 3)
    assert all(len(m) <= 3 for m in small.multisets())
    assert set(small.multisets()) == {m for m in big.multisets() if len(m) <= 3}


def test_factor_table_rejects_short_bound(tau):
    _, t = tau("Z/6", "full")
    with pytest.raises(SearchBoundError):
        factor_table(t, 1)
    with pytest.raises(SearchBoundError):
        enumerate_factorizations(t.ring, t, 0, 0)


@settings(max_examples=60, deadline=None)
@given(
    spec=st.sampled_from(["Z/12", "Z/30", "GF(2) x Z/4"]),
    name=st.sampled_from(["full", "tau_z", "tau_z_delta"]),
    data=st.data(),
)
def test_certify_is_invariant_under_permutation(spec, name, data):
    R = ring_from_text(spec)
    t = parse_tau(R, name)
    sharp = sorted(R.sharp)
    factors = data.draw(st.lists(st.sampled_from(sharp), min_size=1, max_size=4))
    shuffled = data.draw(st.permutations(factors))
    a = R.product(factors)
    assert certify(R, t, a, R.one, factors) == certify(R, t, a, R.one, shuffled)
