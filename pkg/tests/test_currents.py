import pytest

from kn_families.currents import (
    CurrentElement,
    CurrentFamily,
    current_bracket,
    degeneration_identifications,
    verify_almost_grading,
    verify_jacobi,
)
from kn_families.exact_arith import var
from kn_families.families import all_families, elliptic, line_s, three_point
from kn_families.lie import abelian, from_entries, sl2_standard

h, e, f = 0, 1, 2
X = CurrentElement.basis
E, S = var("e"), var("s")
SL2 = sl2_standard()


def test_bracket_examples():
    F = CurrentFamily(SL2, line_s())
    assert current_bracket(F, X(e, 1), X(f, 1)) == X(h, 2) + X(h, 0, 3 * E) + X(h, -2, E**2 * (1 - S) * (2 + S))
    for spec in all_families():
        G = CurrentFamily(SL2, spec)
        assert current_bracket(G, X(h, 0), X(e, 7)) == X(e, 7, 2)
        assert current_bracket(G, X(e, 3), X(e, -5)).is_zero()


def test_bracket_bilinear_and_antisymmetric():
    F = CurrentFamily(SL2, elliptic())
    u = X(h, 1, 2) + X(e, -1, var("e1"))
    v = X(f, 3) + X(e, 2, -1)
    assert current_bracket(F, u, v) == -current_bracket(F, v, u)
    parts = CurrentElement()
    for (a, n), cu in u.terms.items():
        for (b, m), cv in v.terms.items():
            parts = parts + current_bracket(F, X(a, n), X(b, m)).scale(cu * cv)
    assert current_bracket(F, u, v) == parts


@pytest.mark.parametrize("spec", all_families(), ids=lambda s: s.kind)
def test_jacobi_small_window(spec):
    assert verify_jacobi(CurrentFamily(SL2, spec), 2).passed


def test_jacobi_detects_corrupted_product():
    bad = elliptic().corrupt(1, 1, shift2=4 * var("e1"), symmetric=True)
    report = verify_jacobi(CurrentFamily(SL2, bad), 2)
    assert not report.passed and report.witness[0] == "jacobi"


def test_jacobi_detects_non_commutative_product():
    bad = elliptic().corrupt(1, -1, shift4=var("e2"))
    report = verify_jacobi(CurrentFamily(SL2, bad), 2)
    assert not report.passed and report.witness[0] == "antisymmetry"


def test_abelian_currents_are_abelian():
    F = CurrentFamily(abelian(2), elliptic())
    assert verify_jacobi(F, 2).passed
    assert current_bracket(F, X(0, 1), X(1, 1)).is_zero()


def test_heisenberg_currents():
    heis = from_entries(3, [(1, 2, 3, 1), (2, 1, 3, -1)])
    assert verify_jacobi(CurrentFamily(heis, three_point()), 2).passed


def test_almost_grading():
    assert verify_almost_grading(CurrentFamily(SL2, elliptic()), 4).passed
    assert not verify_almost_grading(CurrentFamily(SL2, elliptic()), 4, lower=-2).passed


def test_degenerations():
    report = degeneration_identifications(3)
    assert report.passed and len(report.parts) == 4
    with pytest.raises(ValueError):
        degeneration_identifications(1)
