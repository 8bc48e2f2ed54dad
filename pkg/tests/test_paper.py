import pytest

from taufact.paper import nilpotent_product_tau_z, standard_tau_z, verify_paper
from taufact.structures.taurel import TauKind


def test_every_replayed_fact_holds():
    report = verify_paper()
    assert report.checks
    failed = [(c.tag, c.name, c.detail) for c in report.failed]
    assert failed == []
    assert report.passed


def test_checks_are_tagged():
    tags = {c.tag for c in verify_paper().checks}
    assert {"Thm 5.1(1)", "Thm 5.1(2)", "Thm 5.7", "Thm 5.8", "Lemma 2.2(5)"} <= tags


def test_faulty_tau_z_is_caught_by_the_tau_z_checks():
    report = verify_paper(nilpotent_product_tau_z)
    assert not report.passed
    assert all(c.tag.startswith("Thm 5.1") for c in report.failed)


@pytest.mark.parametrize("spec", ["Z/6", "Z/30", "GF(2) x GF(3)"])
def test_faulty_tau_z_agrees_on_reduced_rings(ring, spec):
    R = ring(spec)
    assert nilpotent_product_tau_z(R).pairs == standard_tau_z(R).pairs


def test_faulty_tau_z_differs_on_z12(ring):
    R = ring("Z/12")
    faulty = nilpotent_product_tau_z(R)
    assert faulty.kind is TauKind.EXPLICIT
    # 2 * 3 = 6 is nilpotent but not zero
    assert faulty.related(2, 3)
    assert not standard_tau_z(R).related(2, 3)
