import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import totient

from taufact.errors import ElementError, RingSpecError
from taufact.structures.ring import GFSpec, ProductSpec, ZnSpec, parse_spec, ring_from_text


def _labels(R, elems):
    return set(R.labels(elems))


# Parsing


def test_parse_spec_atoms_and_products():
    assert parse_spec("Z/30") == ZnSpec(30)
    assert parse_spec("GF(4)") == GFSpec(q=4, p=2, k=2)

    spec = parse_spec("GF(2) x Z/4")
    assert isinstance(spec, ProductSpec)
    assert spec.factors == (GFSpec(q=2, p=2, k=1), ZnSpec(4))
    assert str(spec) == "GF(2) x Z/4"


def test_parse_spec_ignores_whitespace():
    assert parse_spec("  GF( 2 )x  Z/ 4 ") == parse_spec("GF(2) x Z/4")


@pytest.mark.parametrize("text", ["GF(6)", "GF(1)", "Z/1", "Z/0", "Z/4 x", "Q/5", ""])
def test_parse_spec_rejects_bad_specs(text):
    with pytest.raises(RingSpecError):
        parse_spec(text)


# Construction and cached sets


def test_z4_sets():
    R = ring_from_text("Z/4")
    assert R.order == 4
    assert _labels(R, R.units) == {"1", "3"}
    assert _labels(R, R.zero_divisors) == {"0", "2"}
    assert _labels(R, R.nilpotents) == {"0", "2"}
    assert _labels(R, R.jacobson) == {"0", "2"}
    assert R.is_local
    assert not R.is_reduced


def test_gf4_is_a_field():
    R = ring_from_text("GF(4)")
    assert R.order == 4
    assert R.units == R.nonzero
    assert R.zero_divisors == {R.zero}
    assert R.is_field and R.is_domain


def test_gf2_times_z4_units():
    R = ring_from_text("GF(2) x Z/4")
    assert R.order == 8
    assert _labels(R, R.units) == {"(1,1)", "(1,3)"}


def test_gf_multiplication_is_a_group_on_nonzero():
    R = ring_from_text("GF(8)")
    for a in R.nonzero:
        assert {R.mul(a, b) for b in R.nonzero} == set(R.nonzero)


def test_commutativity_exhaustive():
    for spec in ("Z/12", "GF(9)", "GF(2) x Z/4"):
        R = ring_from_text(spec)
        for a in R.elements:
            for b in R.elements:
                assert R.mul(a, b) == R.mul(b, a)


def test_coprime_product_unit_count():
    R = ring_from_text("Z/4 x Z/9")
    assert len(R.units) == int(totient(4) * totient(9))


def test_nilpotents_inside_jacobson_and_zero_divisors():
    for spec in ("Z/8", "Z/12", "Z/36", "GF(3) x Z/9", "Z/4 x Z/2"):
        R = ring_from_text(spec)
        assert R.nilpotents <= R.jacobson
        assert R.nilpotents <= R.zero_divisors


# Element queries


def test_divides_examples():
    R = ring_from_text("Z/12")
    assert R.divides(3, 6)
    assert not R.divides(4, 6)
    assert all(R.divides(R.one, a) for a in R.elements)


def test_annihilator_examples():
    R = ring_from_text("Z/12")
    assert R.annihilator(4) == {0, 3, 6, 9}
    assert R.annihilator(R.zero) == frozenset(R.elements)

    F = ring_from_text("GF(5)")
    assert all(F.annihilator(a) == {F.zero} for a in F.nonzero)


def test_power_cycle():
    R = ring_from_text("Z/12")
    assert R.power_cycle(6) == (2, 1)
    # 4^2 = 16 = 4
    assert R.power_cycle(4) == (1, 1)


def test_parse_element_and_label():
    R = ring_from_text("GF(2) x Z/4")
    a = R.parse_element("(1,2)")
    assert R.label(a) == "(1,2)"
    with pytest.raises(ElementError):
        R.parse_element("3")
    with pytest.raises(ElementError):
        R.parse_element("(1,2,3)")

    Z = ring_from_text("Z/6")
    assert Z.parse_element("8") == 2
    with pytest.raises(ElementError):
        Z.parse_element("two")
    with pytest.raises(ElementError):
        Z.check_element(6)


# Idempotents and decompositions


def test_idempotents_and_decomposition_z6():
    R = ring_from_text("Z/6")
    assert R.idempotents == {0, 1, 3, 4}
    dec = R.find_decomposition()
    assert dec is not None
    assert dec.idempotent in (3, 4)
    assert dec.is_isomorphism(R)


@pytest.mark.parametrize("spec", ["Z/4", "GF(7)", "Z/9"])
def test_no_decomposition_without_nontrivial_idempotents(spec):
    R = ring_from_text(spec)
    assert R.idempotents == {R.zero, R.one}
    assert R.find_decomposition() is None


def test_two_field_decomposition():
    assert ring_from_text("Z/6").two_field_decomposition() is not None
    assert ring_from_text("Z/30").two_field_decomposition() is None
    assert ring_from_text("Z/12").two_field_decomposition() is None


def test_local_components_count_matches_fields():
    R = ring_from_text("GF(2) x GF(3) x GF(5)")
    components = R.local_components()
    assert len(components) == 3
    assert all(c.is_field for c in components)

    S = ring_from_text("GF(2) x Z/4")
    assert sorted(c.is_field for c in S.local_components()) == [False, True]
    assert all(c.is_local for c in S.local_components())


def test_standard_basis_multiplies_to_zero():
    R = ring_from_text("GF(2) x GF(3) x GF(5)")
    basis = R.standard_basis()
    assert basis is not None and len(basis) == 3
    assert R.product(basis) == R.zero
    assert ring_from_text("Z/4").standard_basis() is None


def test_idempotent_associate_exists_when_ideal_is_idempotent():
    R = ring_from_text("Z/12")
    for a in R.elements:
        if R.principal_ideal(a) == R.principal_ideal(R.mul(a, a)):
            e = R.idempotent_associate(a)
            assert e is not None
            assert R.mul(e, e) == e
            assert a in R.unit_orbit(e)
    # (2) = {0,2,..,10} but (4) = {0,4,8}
    assert R.idempotent_associate(2) is None


def test_to_json_fields():
    record = ring_from_text("Z/4").to_json()
    assert record["spec"] == "Z/4"
    assert record["order"] == 4
    assert record["units"] == ["1", "3"]
    assert record["nilpotents"] == ["0", "2"]


# Property-based


_SPECS = st.sampled_from(["Z/6", "Z/8", "Z/12", "GF(4)", "GF(9)", "GF(2) x Z/4", "Z/2 x Z/6"])


@settings(max_examples=60, deadline=None)
@given(spec=_SPECS, data=st.data())
def test_divides_iff_ideal_containment(spec, data):
    R = ring_from_text(spec)
    a = data.draw(st.integers(0, R.order - 1))
    b = data.draw(st.integers(0, R.order - 1))
    assert R.divides(a, b) == (R.principal_ideal(b) <= R.principal_ideal(a))


@settings(max_examples=60, deadline=None)
@given(spec=_SPECS, data=st.data())
def test_jacobson_definition(spec, data):
    R = ring_from_text(spec)
    a = data.draw(st.integers(0, R.order - 1))
    in_radical = all(R.sub(R.one, R.mul(a, b)) in R.units for b in R.elements)
    assert (a in R.jacobson) == in_radical
