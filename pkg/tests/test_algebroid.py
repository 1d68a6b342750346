import pytest
from hypothesis import given, strategies as st

from fglthh.exactalg import GradedPoly
from fglthh.fgl import m_name, x_name, ell_name
from fglthh.algebroid import (CoordFlavor, moving_right_unit,
                              typicality_filter, b_name, c_name)


def gens(table, *names):
    return [GradedPoly.gen(table, n) for n in names]


# ---------------------------------------------------------------------------
# right unit, absolute coordinates
# ---------------------------------------------------------------------------

def test_eta_on_integral_generators(structure6):
    ms = structure6
    x1, x2, x3, x4 = gens(ms.xb_table, "x_1", "x_2", "x_3", "x_4")
    b1, b2, b3, b4 = gens(ms.xb_table, "b_1", "b_2", "b_3", "b_4")
    assert ms.eta_x(1) == x1 + 2 * b1
    assert ms.eta_x(2) == x2 + x1 * b1 + (3 * b2 - 2 * b1 ** 2)
    assert ms.eta_x(3) == (x3 + (2 * x2 + x1 ** 2) * b1
                           + x1 * (4 * b2 - b1 ** 2)
                           + (2 * b3 + 2 * b1 * b2 - 2 * b1 ** 3))
    assert ms.eta_x(4) == (x4 + (2 * x1 * x2 - 2 * x3) * b1
                           + x2 * (b2 - b1 ** 2)
                           + x1 * (3 * b3 - 8 * b1 * b2 + 5 * b1 ** 3)
                           + (5 * b4 - 14 * b1 * b3 - 6 * b2 ** 2
                              + 25 * b1 ** 2 * b2 - 10 * b1 ** 4))


def test_eta_m_unit_element():
    assert moving_right_unit(0) == GradedPoly.one(moving_right_unit(0).table)


def test_counit_after_eta(structure6):
    ms = structure6
    zeros = {b_name(k): GradedPoly.zero(ms.basis.m_table) for k in range(1, 7)}
    for n in range(1, 7):
        assert (ms.eta_m(n).substitute(zeros, ms.basis.m_table)
                == GradedPoly.gen(ms.basis.m_table, m_name(n)))


@given(i=st.integers(min_value=1, max_value=3), j=st.integers(min_value=1, max_value=3),
       k=st.integers(min_value=1, max_value=3), l=st.integers(min_value=1, max_value=3))
def test_eta_ring_map_on_monomials(structure6, i, j, k, l):
    # eta on a product of logarithm monomials equals the product of images
    ms = structure6
    table = ms.basis.m_table
    images = {m_name(n): ms.eta_m(n) for n in range(1, 7)}
    p1 = GradedPoly.gen(table, m_name(i)) * GradedPoly.gen(table, m_name(j))
    p2 = GradedPoly.gen(table, m_name(k)) * GradedPoly.gen(table, m_name(l))
    if (p1 * p2).weight() > 6:
        return
    lhs = (p1 * p2).substitute(images, ms.mb_table)
    rhs = p1.substitute(images, ms.mb_table) * p2.substitute(images, ms.mb_table)
    assert lhs == rhs


# ---------------------------------------------------------------------------
# moving coordinates
# ---------------------------------------------------------------------------

def test_eta_moving_divisor_sums(structure6):
    ms = structure6
    m1, m3, c1, c3 = gens(ms.mc_table, "m_1", "m_3", "c_1", "c_3")
    assert ms.eta_m_moving(1) == m1 + c1
    assert ms.eta_m_moving(3) == m3 + m1 * c1 ** 2 + c3
    assert ms.eta_m_moving(0) == GradedPoly.one(ms.mc_table)


def test_moving_coordinates_low_degrees(structure6):
    ms = structure6
    x1, x2, x3 = gens(ms.xb_table, "x_1", "x_2", "x_3")
    b1, b2, b3, b4 = gens(ms.xb_table, "b_1", "b_2", "b_3", "b_4")
    assert ms.c_in_xb(1) == -b1
    assert ms.c_in_xb(2) == x1 * b1 + (2 * b1 ** 2 - b2)
    assert ms.c_in_xb(3) == (x2 * b1 - x1 ** 2 * b1 + x1 * (b2 - 2 * b1 ** 2)
                             + (-5 * b1 ** 3 + 5 * b1 * b2 - b3))
    expected4 = (14 * b1 ** 4 + (x1 ** 2 - x2) * b1 ** 2 - 21 * b1 ** 2 * b2
                 + (x1 ** 2 + x1 * b1 - x2) * (2 * b1 ** 2 - b2)
                 + x1 * (5 * b1 ** 3 - 5 * b1 * b2 + b3)
                 + (x1 ** 3 - 4 * x1 * x2 + 2 * x3) * b1
                 + 3 * b2 ** 2 + 6 * b1 * b3 - b4)
    assert ms.c_in_xb(4) == expected4


def test_moving_coordinates_additive_specialization(structure6):
    # with the integral generators killed the formal sum degenerates and
    # the moving coordinates reduce to the conjugates
    ms = structure6
    kill = {x_name(k): GradedPoly.zero(ms.b_table) for k in range(1, 7)}
    for n in range(1, 7):
        assert ms.c_in_xb(n).substitute(kill, ms.b_table) == ms.chi[n]


def test_moving_absolute_consistency(structure6):
    ms = structure6
    c_images = {c_name(k): ms.c_in_mb(k) for k in range(1, 7)}
    for n in range(1, 7):
        assert (ms.eta_m_moving(n).substitute(c_images, ms.mb_table)
                == ms.eta_m(n))


# ---------------------------------------------------------------------------
# conjugation and coproduct
# ---------------------------------------------------------------------------

def test_chi_low_degrees(structure6):
    ms = structure6
    b1, b2, b3 = gens(ms.b_table, "b_1", "b_2", "b_3")
    assert ms.chi[1] == -b1
    assert ms.chi[3] == -5 * b1 ** 3 + 5 * b1 * b2 - b3


def test_chi_involution(structure6):
    ms = structure6
    images = {b_name(k): ms.chi[k] for k in range(1, 7)}
    for n in range(1, 7):
        assert (ms.chi[n].substitute(images, ms.b_table)
                == GradedPoly.gen(ms.b_table, b_name(n)))


def test_exp_coefficients(structure6):
    ms = structure6
    m1, m2, m3, m4 = gens(ms.basis.m_table, "m_1", "m_2", "m_3", "m_4")
    assert ms.mbar[1] == -m1
    assert ms.mbar[2] == 2 * m1 ** 2 - m2
    assert ms.mbar[3] == -5 * m1 ** 3 + 5 * m1 * m2 - m3
    assert ms.mbar[4] == (14 * m1 ** 4 - 21 * m1 ** 2 * m2 + 3 * m2 ** 2
                          + 6 * m1 * m3 - m4)


def _tensor_dict(pairs, table):
    return {tuple(sorted(l.terms)): r for l, r in pairs}


def test_psi_tables(structure6):
    ms = structure6
    b1, b2, b3, b4 = gens(ms.b_table, "b_1", "b_2", "b_3", "b_4")

    def pair_map(n):
        return {str(l): r for l, r in ms.psi(n)}

    p2 = pair_map(2)
    assert p2["b_2"] == GradedPoly.one(ms.b_table)
    assert p2["b_1"] == 2 * b1
    assert p2["1"] == b2

    p3 = pair_map(3)
    assert p3["b_3"] == GradedPoly.one(ms.b_table)
    assert p3["b_1^2"] == b1
    assert p3["b_2"] == 2 * b1
    assert p3["b_1"] == 3 * b2
    assert p3["1"] == b3

    p4 = pair_map(4)
    assert p4["b_4"] == GradedPoly.one(ms.b_table)
    assert p4["b_1*b_2"] == 2 * b1
    assert p4["b_3"] == 2 * b1
    assert p4["b_1^2"] == 3 * b2
    assert p4["b_2"] == 3 * b2
    assert p4["b_1"] == 4 * b3
    assert p4["1"] == b4


def test_psi_axioms(structure6):
    ms = structure6
    for n in range(1, 6):
        assert ms.counit_residual(n).is_zero()
        assert ms.coassociativity_residual(n).is_zero()
        assert ms.antipode_residual(n).is_zero()


# ---------------------------------------------------------------------------
# p-typical right unit
# ---------------------------------------------------------------------------

def test_eta_typical(typical_structures):
    for p, ts in typical_structures.items():
        t = ts.ellt_table
        l1, l2, t1, t2 = gens(t, "ell_1", "ell_2", "t_1", "t_2")
        assert ts.eta_ell(1) == l1 + t1
        assert ts.eta_ell(2) == l2 + l1 * t1 ** p + t2
        for n in range(1, 4):
            assert (ts.epsilon_eta_ell(n)
                    == GradedPoly.gen(ts.tbasis.ell_table, ell_name(n)))


def test_typicality_filter(structure6, typical_structures):
    # the correspondence keeps exactly the prime-power indices
    for p, ts in typical_structures.items():
        for k in (1, 2):
            n = p ** k - 1
            source = structure6 if n <= 6 else None
            assert typicality_filter(source, ts, n) == ts.eta_ell(k)


def test_coord_flavor_tables():
    fl = CoordFlavor.typical(3)
    table = fl.coord_table(2)
    assert table.weight_of("t_1") == 2
    assert table.weight_of("t_2") == 8
    assert CoordFlavor.moving().ext_prefix == "lambda'"
    assert CoordFlavor.absolute().ext_prefix == "e"


def test_chi_psi_flavor_guard(structure6):
    from fglthh.algebroid import conjugation_chi, coproduct_psi, UnsupportedFlavorError
    assert conjugation_chi(structure6, CoordFlavor.absolute())[1] == structure6.chi[1]
    assert coproduct_psi(structure6, CoordFlavor.absolute(), 2) == structure6.psi(2)
    with pytest.raises(UnsupportedFlavorError):
        conjugation_chi(structure6, CoordFlavor.moving())
    with pytest.raises(UnsupportedFlavorError):
        coproduct_psi(structure6, CoordFlavor.typical(2), 1)


def test_truncation_shortfall(structure6):
    from fglthh.exactalg import DegreeGuardError
    with pytest.raises(DegreeGuardError):
        structure6.eta_m(7)
    with pytest.raises(DegreeGuardError):
        structure6.eta_x(7)
    with pytest.raises(DegreeGuardError):
        structure6.psi(7)
