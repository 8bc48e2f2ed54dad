import pytest

from taufact.errors import SearchBoundError, TauRelationError, TheoremMismatch
from taufact.factorization import props
from taufact.factorization.irr import Alpha
from taufact.factorization.props import (
    PropEvaluator,
    evaluate_all,
    is_alpha_atomic,
    is_bfr,
    is_df,
    is_ffr,
    is_hfr,
    is_ufr,
    is_wffr,
    satisfies_accp,
    satisfies_tau_accp,
    tau_z_criteria,
    verify_ff_diagram,
)
from taufact.structures.associates import AssocKind
from taufact.structures.taurel import TauKind, make_tau
from taufact.verdicts import EXIT_BOUNDED, EXIT_NO, EXIT_YES, Verdict


# Atomicity and ACCP


@pytest.mark.parametrize("spec", ["Z/6", "Z/12", "Z/30", "Z/4", "GF(2) x Z/4", "GF(7)"])
def test_tau_z_atomic(tau, spec):
    R, t = tau(spec, "tau_z")
    assert is_alpha_atomic(R, t, Alpha.ATOMIC).verdict is Verdict.YES


def test_z4_delta_zero_is_an_atom(tau):
    R, t = tau("Z/4", "tau_z_delta")
    assert is_alpha_atomic(R, t, Alpha.ATOMIC).verdict is Verdict.YES
    assert props.evaluator(R, t).flags[R.zero].irr


def test_tau_accp_chain_lengths(tau):
    R, t = tau("Z/30", "tau_z")
    verdict = satisfies_tau_accp(R, t)
    assert verdict.verdict is Verdict.YES
    assert verdict.details["longest_chain"] == 1

    F, f = tau("GF(5)", "tau_z")
    assert satisfies_tau_accp(F, f).details["longest_chain"] == 0

    Z, full = tau("Z/12", "full")
    chained = satisfies_tau_accp(Z, full, max_len=4)
    assert chained.verdict is Verdict.YES
    assert chained.details["longest_chain"] >= 1
    assert len(chained.details["chain"]) == chained.details["longest_chain"] + 1


def test_accp_always_holds(ring):
    assert satisfies_accp(ring("Z/12")).verdict is Verdict.YES


# BFR / FFR


def test_z12_tau_z_not_bfr(tau):
    R, t = tau("Z/12", "tau_z")
    verdict = is_bfr(R, t)
    assert verdict.verdict is Verdict.NO
    assert verdict.exact
    assert verdict.witness["target"] == "0"
    assert verdict.witness["factors"] == ["6", "6"]
    assert verdict.exit_code == EXIT_NO


def test_z30_tau_z_bfr_with_n_zero_three(tau):
    R, t = tau("Z/30", "tau_z")
    verdict = is_bfr(R, t)
    assert verdict.verdict is Verdict.YES
    assert verdict.details["N"]["0"] == 3
    assert verdict.exit_code == EXIT_YES


def test_field_product_bfr_reaches_standard_basis_length(tau):
    R, t = tau("GF(2) x GF(3) x GF(5)", "tau_z")
    verdict = is_bfr(R, t)
    assert verdict.verdict is Verdict.YES
    assert verdict.details["N"][R.label(R.zero)] == 3


def test_z4_ffr_split(tau):
    R, delta = tau("Z/4", "tau_z_delta")
    _, t = tau("Z/4", "tau_z")
    assert is_ffr(R, delta, None).verdict is Verdict.YES
    assert is_ffr(R, t, None).verdict is Verdict.NO
    assert is_ffr(R, t, AssocKind.ASSOCIATE).verdict is Verdict.NO
    assert is_ffr(R, delta, AssocKind.ASSOCIATE).verdict is Verdict.YES


def test_z6_ffr_counts(tau):
    R, t = tau("Z/6", "tau_z")
    verdict = is_ffr(R, t, AssocKind.ASSOCIATE)
    assert verdict.verdict is Verdict.YES
    assert verdict.details["counts"]["0"] == {"multisets": 2, "up_to_beta": 1}


@pytest.mark.parametrize("spec", ["Z/6", "Z/30", "GF(2) x GF(3)", "GF(2) x GF(2) x GF(3)"])
def test_finite_reduced_rings_are_strong_ffr(tau, spec):
    R, t = tau(spec, "tau_z")
    assert is_ffr(R, t, None).verdict is Verdict.YES


def test_wffr_and_df_always_hold(tau):
    R, t = tau("Z/12", "tau_z")
    wffr = is_wffr(R, t, None)
    assert wffr.verdict is Verdict.YES
    # every zero divisor of Z/12 occurs in a factorization of 0
    assert wffr.details["divisor_counts"]["0"] == len(R.sharp)
    df = is_df(R, t, Alpha.ATOMIC, AssocKind.ASSOCIATE)
    assert df.verdict is Verdict.YES


# HFR / UFR


def test_hfr_examples(tau):
    R, t = tau("Z/6", "tau_z")
    assert is_hfr(R, t, Alpha.ATOMIC).verdict is Verdict.YES

    R, t = tau("Z/30", "tau_z")
    verdict = is_hfr(R, t, Alpha.ATOMIC)
    assert verdict.verdict is Verdict.NO
    assert verdict.witness["element"] == "0"
    assert verdict.witness["lengths"] == [2, 3]
    assert verdict.witness["first"] == ["5", "6"]
    assert verdict.witness["second"] == ["6", "10", "15"]

    R, t = tau("GF(2) x Z/4", "tau_z_delta")
    assert is_hfr(R, t, Alpha.ATOMIC).verdict is Verdict.YES


def test_ufr_examples(tau):
    R, t = tau("Z/6", "tau_z")
    assert is_ufr(R, t, Alpha.ATOMIC, AssocKind.ASSOCIATE).verdict is Verdict.YES

    R, t = tau("Z/30", "tau_z")
    assert is_ufr(R, t, Alpha.ATOMIC, AssocKind.ASSOCIATE).verdict is Verdict.NO

    R, t = tau("Z/4", "tau_z")
    assert is_ufr(R, t, Alpha.ATOMIC, AssocKind.ASSOCIATE).verdict is Verdict.NO


def test_gf2_z4_delta_hfr_but_not_ufr(tau):
    R, t = tau("GF(2) x Z/4", "tau_z_delta")
    verdict = is_ufr(R, t, Alpha.ATOMIC, AssocKind.ASSOCIATE)
    assert verdict.verdict is Verdict.NO
    assert verdict.witness["element"] == "(0,0)"
    assert len(verdict.witness["first"]) == len(verdict.witness["second"]) == 2


def test_ufr_criterion_inputs(ring):
    assert tau_z_criteria(ring("Z/6"))["two_fields"]
    assert not tau_z_criteria(ring("Z/30"))["two_fields"]
    assert tau_z_criteria(ring("GF(5)"))["domain"]
    assert tau_z_criteria(ring("Z/30"))["omega"] == 3


# Whole-table views


def test_evaluate_all_covers_every_combination(tau):
    R, t = tau("Z/6", "tau_z")
    verdicts = evaluate_all(R, t)
    names = {v.prop for v in verdicts}
    assert "bfr" in names and "tau_accp" in names
    assert {f"ufr:{a.value}:{b.value}" for a in Alpha for b in AssocKind} <= names
    assert {f"df:{a.value}:strong" for a in Alpha} <= names
    assert all(v.verdict is not Verdict.NO or v.witness for v in verdicts)


def test_generic_relation_can_stay_bounded(tau):
    R, t = tau("Z/12", "full")
    verdict = is_bfr(R, t, max_len=3)
    assert verdict.verdict in (Verdict.NO, Verdict.VERIFIED_UP_TO)
    if verdict.verdict is Verdict.VERIFIED_UP_TO:
        assert verdict.exit_code == EXIT_BOUNDED


@pytest.mark.parametrize("spec", ["Z/6", "Z/12", "Z/30", "Z/4", "GF(2) x Z/4"])
@pytest.mark.parametrize("name", ["tau_z", "tau_z_delta"])
def test_ff_diagram_has_no_violations(tau, spec, name):
    R, t = tau(spec, name)
    check = verify_ff_diagram(R, t)
    assert check.violations == []
    assert check.arrows_checked > 0


def test_ff_diagram_full_relation(tau):
    R, t = tau("Z/12", "full")
    assert verify_ff_diagram(R, t, max_len=4).violations == []


# Cross-checks


def test_theorem_mismatch_is_raised_when_criterion_disagrees(ring, monkeypatch):
    R = ring("Z/10")
    t = make_tau(R, TauKind.TAU_Z)
    wrong = {"reduced": False, "domain": False, "omega": 2, "omega_quotient": 2, "two_fields": True}
    monkeypatch.setattr(props, "tau_z_criteria", lambda _R: wrong)

    with pytest.raises(TheoremMismatch) as excinfo:
        PropEvaluator(R, t).bfr()
    assert excinfo.value.theorem == "Thm 5.7"
    assert excinfo.value.report["ring"] == "Z/10"


def test_evaluator_rejects_foreign_relation(tau, ring):
    _, t = tau("Z/6", "tau_z")
    with pytest.raises(TauRelationError):
        PropEvaluator(ring("Z/12"), t)


def test_evaluator_keeps_explicit_bound(tau):
    R, t = tau("Z/12", "tau_z")
    assert props.evaluator(R, t, 3).max_len == 3
    R, delta = tau("Z/12", "tau_z_delta")
    assert props.evaluator(R, delta, 0).max_len == tau_z_criteria(R)["omega"]
    R, full = tau("Z/12", "full")
    with pytest.raises(SearchBoundError):
        props.evaluator(R, full, 0).table
