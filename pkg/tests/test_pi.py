import pytest

from oretower.erase import erase_all
from oretower.pi import centrality_witness, pi_report
from oretower.scalars import QQ, CyclotomicField, FunctionField
from oretower.skewpoly import is_central
from oretower.tower import BaseRing, OreTower, TowerLevel, validate_tower

from conftest import mat2_inner_tower, qplane, qweyl, weyl_gf5, zeta5_deriv_tower


def test_quantum_plane_verdicts():
    field = CyclotomicField(3)
    report = pi_report(qplane(field, field.gen))
    assert report.verdict == "PI"
    assert report.lambda_orders == {(1, 0): 3}

    report2 = pi_report(qplane(QQ, 2))
    assert report2.verdict == "NotPI"
    assert report2.lambda_orders == {(1, 0): None}


def test_quantum_weyl_verdicts():
    field5 = CyclotomicField(5)
    assert pi_report(qweyl(field5, field5.gen)).verdict == "PI"
    field_t = FunctionField(QQ, "t")
    assert pi_report(qweyl(field_t, field_t.gen)).verdict == "NotPI"


def test_base_orders_recorded():
    tower = zeta5_deriv_tower()
    report = pi_report(tower)
    assert report.base_orders == {0: 4}
    assert report.verdict == "PI"  # height 1: no lambda conditions remain


def test_undecided_when_delta_unquantised():
    report = pi_report(weyl_gf5())
    assert report.verdict == "Undecided"
    assert "no q" in report.reason


def test_undecided_when_sigma_not_diagonal():
    field = QQ
    tower = OreTower(
        BaseRing.field_ring(field),
        [
            TowerLevel("x1"),
            TowerLevel("x2", sigma_vars={0: (QQ.coerce(2), {(0, 0): QQ.one})}),
        ],
    )
    report = pi_report(tower)
    assert report.verdict == "Undecided"
    assert "scalar multiple" in report.reason


def test_undecided_when_base_order_unbounded():
    tower = mat2_inner_tower()  # conjugation by diag(1, q) has infinite order
    report = pi_report(tower, order_bound=8)
    assert report.verdict == "Undecided"
    assert "order" in report.reason


def test_verdict_matches_erasure():
    fixtures = [
        qplane(CyclotomicField(3), CyclotomicField(3).gen),
        qplane(QQ, 2),
        qweyl(CyclotomicField(5), CyclotomicField(5).gen),
        qweyl(FunctionField(QQ, "t"), FunctionField(QQ, "t").gen),
    ]
    for tower in fixtures:
        before = pi_report(tower).verdict
        after = pi_report(erase_all(tower).new_tower).verdict
        assert before == after


@pytest.mark.parametrize("order", [2, 3, 5])
def test_central_powers_in_quantum_planes(order):
    field = CyclotomicField(order)
    tower = qplane(field, field.gen)
    hits = centrality_witness(tower, order)
    expected = {(str(tower.var(0) ** order), order), (str(tower.var(1) ** order), order)}
    assert {(str(p), n) for p, n in hits} >= expected
    for p, _n in hits:
        assert is_central(p)[0]


def test_no_central_powers_for_lambda_two():
    tower = qplane(QQ, 2)
    assert centrality_witness(tower, 4) == []


def test_weyl_gf5_fifth_powers_central():
    tower = weyl_gf5()
    x, y = tower.var(0), tower.var(1)
    assert y * x - x * y == tower.one()
    hits = centrality_witness(tower, 5)
    assert (str(y**5), 5) in {(str(p), n) for p, n in hits}
    assert (str(x**5), 5) in {(str(p), n) for p, n in hits}
    # smaller powers of y are not central
    assert not any(n < 5 and str(p).startswith("y") for p, n in hits)


def test_report_carries_quotient_note():
    report = pi_report(qplane(QQ, 2))
    assert any("certificate" in note for note in report.notes)


def test_invalid_tower_is_undecided():
    field = FunctionField(QQ, "q")
    q = field.gen
    broken = OreTower(
        BaseRing.field_ring(field),
        [
            TowerLevel("x1"),
            TowerLevel(
                "x2",
                sigma_vars={0: (q, {})},
                delta_vars={0: {(1, 0): field.one}},
                q=q,
            ),
        ],
    )
    validate_tower(broken)
    report = pi_report(broken)
    assert report.verdict == "Undecided"
    assert "invalid" in report.reason
