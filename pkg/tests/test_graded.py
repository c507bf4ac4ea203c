import random

import pytest

from oretower.errors import HypothesisViolation
from oretower.graded import associated_graded_tower, level_sigma, rees_closure_check
from oretower.pi import pi_report
from oretower.scalars import GF, QQ, CyclotomicField
from oretower.skewpoly import degree_leading
from oretower.tower import BaseRing, OreTower, TowerLevel, validate_tower

from conftest import (
    ARITHMETIC_FIXTURES,
    qplane,
    random_poly,
    three_level_graded,
    weyl_gf5,
)


def test_three_level_degeneration():
    tower = three_level_graded()
    assert validate_tower(tower).ok
    pres = associated_graded_tower(tower)
    out = pres.result

    a32, c32 = out.sigma_var(2, 1)
    assert a32 == 5 and not c32
    a31, c31 = out.sigma_var(2, 0)
    assert a31 == 2 and not c31
    for i in range(out.height):
        assert out.levels[i].delta_is_zero()
    assert out.validated == "valid"

    # a data preserved entrywise
    for i in range(tower.height):
        for j in range(i):
            assert out.sigma_var(i, j)[0] == tower.sigma_var(i, j)[0]

    # the degeneration log walks from the top level down
    assert [s.level for s in pres.step_log] == [2, 1, 0]
    assert pres.step_log[1].dropped_c == [(2, 1)]


def test_weyl_gf5_degenerates_to_commutative():
    tower = weyl_gf5()
    pres = associated_graded_tower(tower)
    out = pres.result
    assert out.sigma_var(1, 0)[0] == GF(5).one
    assert out.levels[1].delta_is_zero()
    y1, y2 = out.var(0), out.var(1)
    assert y2 * y1 == y1 * y2


def test_zero_a_is_rejected():
    tower = OreTower(
        BaseRing.field_ring(QQ),
        [TowerLevel("x1"), TowerLevel("x2", sigma_vars={0: (QQ.zero, {})})],
    )
    with pytest.raises(HypothesisViolation):
        associated_graded_tower(tower)


@pytest.mark.parametrize("name", sorted(ARITHMETIC_FIXTURES))
def test_leading_form_multiplicativity(name):
    # top-variable leading forms multiply to the leading form of the product
    # whenever that product is nonzero
    tower = ARITHMETIC_FIXTURES[name]()
    rng = random.Random(31)
    top = tower.height - 1
    checked = 0
    for _ in range(40):
        p = random_poly(tower, rng)
        q = random_poly(tower, rng)
        if p.is_zero() or q.is_zero():
            continue
        dp, lead_p = degree_leading(p, top)
        dq, lead_q = degree_leading(q, top)
        lead_prod = lead_p * lead_q
        d_lead, top_of_lead = degree_leading(lead_prod, top)
        if lead_prod.is_zero() or d_lead < dp + dq:
            continue  # leading coefficients annihilated (matrix bases)
        dpq, lead_pq = degree_leading(p * q, top)
        assert dpq == dp + dq
        assert lead_pq == top_of_lead
        checked += 1
    assert checked > 10


def test_rees_closure_diagonal_sigma():
    tower = three_level_graded()
    assert rees_closure_check(tower, 0, level_sigma(tower, 2), 4).ok
    assert rees_closure_check(tower, 1, level_sigma(tower, 2), 4).ok


def test_rees_closure_with_c_term():
    # sigma3(x2) = 5 x2 + x1 does not raise the x2 degree
    tower = three_level_graded()
    check = rees_closure_check(tower, 1, level_sigma(tower, 2), 4)
    assert check.ok


def test_rees_closure_detects_degree_raise():
    tower = three_level_graded()
    square = lambda p: p * p
    check = rees_closure_check(tower, 0, square, 2)
    assert not check.ok
    assert check.witness == tower.var(0)


def test_pi_transfer_source_to_result():
    # wherever both source and degenerated tower get a verdict, a PI source
    # forces a PI result (the converse direction is false in general)
    fixtures = [
        qplane(CyclotomicField(3), CyclotomicField(3).gen),
        qplane(QQ, 2),
        three_level_graded(),
        weyl_gf5(),
    ]
    for tower in fixtures:
        source = pi_report(tower)
        result = pi_report(associated_graded_tower(tower).result)
        if source.verdict == "PI":
            assert result.verdict == "PI"


def test_weyl_char_zero_one_way_only():
    # the degenerated Weyl tower is commutative (PI) while the source gets
    # no PI verdict: the transfer is one-directional
    field = QQ
    tower = OreTower(
        BaseRing.field_ring(field),
        [TowerLevel("x"), TowerLevel("y", delta_vars={0: {(0, 0): field.one}})],
    )
    source = pi_report(tower)
    assert source.verdict == "Undecided"
    result = pi_report(associated_graded_tower(tower).result)
    assert result.verdict == "PI"


def test_graded_keeps_sigma_base():
    tower = three_level_graded()
    pres = associated_graded_tower(tower)
    gen_poly = tower.from_base(QQ.coerce(7))
    for i in range(tower.height):
        assert pres.result.apply_sigma0(i, QQ.coerce(7)) == tower.apply_sigma0(
            i, QQ.coerce(7)
        )
