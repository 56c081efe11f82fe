import math

import pytest

from fusioncox.errors import StructureError
from fusioncox.fusion_ring import chebyshev, fpdim, integer_ring
from fusioncox.realisation import (
    INF,
    CoxeterMatrix,
    act,
    build_RM_realisation,
    check_geometric,
    enumerate_realisation,
    generator_matrix,
    infer_label,
    realisation_from_cartan,
    real_cartan_entry,
    sesquilinear_form,
    verify_coxeter_relations,
    word_matrix,
)

import fixtures
from oracles import coxeter_data


def test_coxeter_matrix_file_encoding():
    cm = CoxeterMatrix.from_rows([[1, 0], [0, 1]])
    assert cm.label(0, 1) == INF
    assert cm.to_rows() == [[1, 0], [0, 1]]
    assert cm.names == ("s", "t")


@pytest.mark.parametrize("rows", [[[1, 3], [4, 1]], [[2, 3], [3, 1]], [[1, 1], [1, 1]], [[1, 3, 2], [3, 1]]])
def test_coxeter_matrix_rejects_invalid(rows):
    with pytest.raises(StructureError):
        CoxeterMatrix.from_rows(rows)


def test_real_cartan_entries():
    assert real_cartan_entry(2) == 0
    assert real_cartan_entry(3) == -1
    assert real_cartan_entry(INF) == -2
    assert real_cartan_entry(5) == pytest.approx(-(1 + math.sqrt(5)) / 2)
    assert infer_label(-math.sqrt(2)) == 4
    assert infer_label(-2.5) == INF


def test_pentagon_even_variant():
    real = build_RM_realisation(fixtures.coxeter("i2_5"), "even")
    ring = real.ring
    assert ring.rank == 2
    x = -real.r(0, 1)
    assert x * x == ring.one() + x
    assert real.r(1, 0) == real.r(0, 1)
    assert real.r(0, 0) == ring.scalar(2)


def test_affine_a1_rep_s3_variant():
    real = build_RM_realisation(fixtures.coxeter("i2_inf"), "infty_S3")
    assert real.ring.rank == 3
    assert -real.r(0, 1) == real.ring.basis("V(inf)")


def test_standard_variant_uses_verlinde_factors():
    real = build_RM_realisation(fixtures.coxeter("h3"))
    # labels 3 and 5 give R_3 (rank 2) and R_5 (rank 4)
    assert real.ring.rank == 8
    assert fpdim(real.r(0, 1)) == pytest.approx(real_cartan_entry(5))
    assert fpdim(real.r(1, 2)) == pytest.approx(-1.0)


def test_degenerate_label_set_gives_integers():
    real = build_RM_realisation(fixtures.coxeter("i2_2"))
    assert real.ring.rank == 1
    assert real.r(0, 1).is_zero()


def test_unknown_variant_rejected():
    with pytest.raises(ValueError):
        build_RM_realisation(fixtures.coxeter("a3"), "odd")


def test_word_convention_row_vectors():
    real = build_RM_realisation(fixtures.coxeter("a3"))
    s, t = generator_matrix(real, 0), generator_matrix(real, 1)
    assert word_matrix(real, [0, 1]) == t @ s
    v = real.simple_root(2)
    assert act(real, [0, 1], v) == s.act(t.act(v))
    assert act(real, [0, 1], v) == (t @ s).act(v)


def test_simple_reflection_formula():
    real = build_RM_realisation(fixtures.coxeter("i2_5"), "even")
    x = -real.r(0, 1)
    one, zero = real.ring.one(), real.ring.zero()
    # s(alpha_t) = alpha_t - B(alpha_s, alpha_t) alpha_s = alpha_t + x alpha_s
    assert act(real, [0], real.simple_root(1)) == [x, one]
    assert act(real, [0], real.simple_root(0)) == [-one, zero]


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
def test_rank_two_closed_form(m):
    real = build_RM_realisation(CoxeterMatrix.from_rows([[1, m], [m, 1]]))
    x = -real.r(0, 1)
    d = lambda k: chebyshev(x, k)
    a_s, a_t = real.simple_root(0), real.simple_root(1)
    for k in range(1, m + 1):
        assert act(real, [0, 1] * k, a_s) == [d(2 * k), d(2 * k - 1)]
        assert act(real, [0, 1] * k, a_t) == [-d(2 * k - 1), -d(2 * k - 2)]


@pytest.mark.parametrize("m,other", [(5, 3), (4, 6), (7, 2)])
def test_rank_two_closed_form_on_third_root(m, other):
    # both coefficients of alpha_u's image carry a minus sign
    real = build_RM_realisation(CoxeterMatrix.from_rows([[1, m, 3], [m, 1, other], [3, other, 1]]))
    x = -real.r(0, 1)
    d = lambda k: chebyshev(x, k)
    rsu, rtu = real.r(0, 2), real.r(1, 2)
    for k in range(1, m + 1):
        got = act(real, [0, 1] * k, real.simple_root(2))
        assert got[0] == -(d(k - 1) * d(k - 1) * rsu + d(k - 1) * d(k) * rtu)
        assert got[1] == -(d(k - 1) * d(k - 2) * rsu + d(k - 1) * d(k - 1) * rtu)
        assert got[2] == real.ring.one()


def test_sesquilinear_form_values():
    real = build_RM_realisation(fixtures.coxeter("i2_5"), "even")
    ring = real.ring
    x = ring.basis(1)
    a_s, a_t = real.simple_root(0), real.simple_root(1)
    assert sesquilinear_form(real, a_s, a_t) == real.r(0, 1)
    # B(x alpha_s, alpha_t) = r_st x* = -x^2 = -1 - x
    xa_s = [x, ring.zero()]
    assert sesquilinear_form(real, xa_s, a_t) == -ring.one() - x


def test_sesquilinear_form_noncommutative():
    real = fixtures.s3_group_ring_a2()
    ring = real.ring
    g = ring.basis(3)
    h = ring.basis(1)
    u = [g, h]
    v = [h * g, g]
    lam = ring.basis(4)
    lhs = sesquilinear_form(real, [lam * a for a in u], v)
    assert lhs == sesquilinear_form(real, u, v) * lam.star
    rhs = sesquilinear_form(real, u, [lam * a for a in v])
    assert rhs == lam * sesquilinear_form(real, u, v)


@pytest.mark.parametrize("name,real", fixtures.special_realisations())
def test_special_realisations_are_geometric(name, real):
    assert check_geometric(real) == []
    rep = verify_coxeter_relations(real)
    assert rep.ok and rep.complete


def test_wrong_label_detected():
    z = integer_ring()
    cm = CoxeterMatrix.from_rows([[1, 5], [5, 1]])
    real = realisation_from_cartan(z, cm, [[[2], [-1]], [[-1], [2]]])
    problems = check_geometric(real)
    assert [p["condition"] for p in problems] == ["fpdim", "fpdim"]
    assert "fits label 3" in problems[0]["detail"]
    rep = verify_coxeter_relations(real)
    braid = next(e for e in rep.entries if e["relation"] == "braid")
    assert braid["status"] == "fail"
    assert "order 3" in braid["detail"]


def test_star_symmetry_violation_detected():
    real = fixtures.s3_group_ring_a2()
    bad = realisation_from_cartan(real.ring, real.coxeter,
                                  [[list(real.r(0, 0).coeffs), list(real.r(0, 1).coeffs)],
                                   [list(real.r(0, 1).coeffs), list(real.r(1, 1).coeffs)]])
    assert "star-symmetry" in {p["condition"] for p in check_geometric(bad)}


def test_relation_cap_marks_unchecked():
    real = build_RM_realisation(fixtures.coxeter("i2_7"))
    rep = verify_coxeter_relations(real, cap=6)
    assert rep.ok and not rep.complete
    assert rep.unchecked[0]["detail"] == "label 7 exceeds relation cap 6"


def test_infinite_label_has_no_braid_check():
    rep = verify_coxeter_relations(fixtures.rep_s3_affine())
    braid = [e for e in rep.entries if e["relation"] == "braid"]
    assert [e["status"] for e in braid] == ["vacuous"]


_ORACLE_KIND = {"i2_2": ("I2", 2), "i2_3": ("A", 2), "i2_4": ("B", 2), "i2_5": ("I2", 5),
                "i2_6": ("I2", 6), "i2_7": ("I2", 7), "a3": ("A", 3), "b3": ("B", 3), "h3": ("H3",),
                "a4": ("A", 4), "b4": ("B", 4), "d4": ("D", 4), "a1": ("A", 1)}


@pytest.mark.parametrize("name", sorted(_ORACLE_KIND))
def test_group_order_matches_classification(name):
    order, _ = coxeter_data(*_ORACLE_KIND[name])
    for variant in ("standard", "even"):
        enum = enumerate_realisation(build_RM_realisation(fixtures.coxeter(name), variant), cap=1200)
        assert enum.complete
        assert len(enum) == order
