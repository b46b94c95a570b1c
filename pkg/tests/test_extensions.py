from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kn_families.currents import CurrentElement, CurrentFamily
from kn_families.errors import NonInvariantForm, RecursionInconsistent, TruncationTooShallow
from kn_families.exact_arith import ZERO, MultiPoly, substitute_square, var
from kn_families.extensions import (
    ExtendedElement,
    elliptic_constants,
    extended_bracket,
    gamma_closed_form,
    gamma_for_spec,
    gamma_recursion,
    gamma_residue_oracle,
    gamma_singular,
    gamma_table,
    verify_gamma_agreement,
    verify_gamma_properties,
)
from kn_families.families import elliptic, laurent, line_s, subalgebra_w, three_point
from kn_families.lie import BilinearForm, killing_form, sl2_standard

e1, e2, e, alpha = var("e1"), var("e2"), var("e"), var("alpha")
a, b = elliptic_constants()
h, E, f = 0, 1, 2
SL2 = sl2_standard()
KAPPA = killing_form(SL2)


def test_closed_form_examples():
    assert gamma_closed_form(2, -2) == -2
    assert gamma_closed_form(1, 1) == 0
    assert gamma_closed_form(3, 1) == -(e1 - e2) * (2 * e1 + e2)
    assert gamma_closed_form(1, 3) == (e1 - e2) * (2 * e1 + e2)
    assert gamma_closed_form(3, -1) == -6 * e1
    assert gamma_closed_form(2, 1) == 0
    assert gamma_closed_form(4, -2) == 0


def test_residue_examples():
    for n in range(-8, 9, 2):
        assert gamma_residue_oracle(n, -n, 12) == -n
    assert gamma_residue_oracle(3, -1, 10) == -6 * e1
    assert gamma_residue_oracle(5, -9, 20) == 0
    assert gamma_residue_oracle(3, 1, 8) == -b
    with pytest.raises(TruncationTooShallow):
        gamma_residue_oracle(4, -4, 3)


def test_recursion_examples():
    table = gamma_recursion(a, b, 6)
    assert all(table[k] == gamma_closed_form(*k) for k in table)
    assert table[(2, 1)] == 0
    assert all(table[(n, -n + 6)] == 0 for n in range(-5, 6, 2) if abs(-n + 6) <= 6)
    assert table[(2, -2)] == -2


def test_recursion_is_generic_in_constants():
    p, q = var("g2"), var("t")
    table = gamma_recursion(p, q, 4)
    assert all(table[k] == gamma_closed_form(*k, p, q) for k in table)


def test_recursion_detects_corruption():
    bad = elliptic().corrupt(3, 1, shift2=4 * e1, symmetric=True)
    with pytest.raises(RecursionInconsistent):
        gamma_recursion(a, b, 4, product=bad.product)


def test_agreement_small():
    report = verify_gamma_agreement(4, anchor=20)
    assert report.passed, str(report)
    for route in ("closed", "residue", "recursion"):
        assert len(gamma_table(route, 2)) == 25


def test_singular_examples():
    assert gamma_singular("classical", 4, -4) == -4
    assert gamma_singular("classical", 3, -1) == 0
    assert gamma_singular("three_point", 3, -1) == -2 * alpha**2
    assert gamma_singular("three_point", 2, 0) == 0
    assert gamma_singular("W_family", 3, 1) == -(alpha**4)
    assert gamma_singular("W_family", 3, -1) == 4 * alpha**2
    with pytest.raises(ValueError):
        gamma_singular("cusp", 1, 1)


def test_singular_tables_match_recursion():
    for case, consts in (("three_point", (alpha**2, 0)), ("W_family", (-2 * alpha**2, alpha**4))):
        table = gamma_recursion(*consts, 5)
        assert all(table[k] == gamma_singular(case, *k) for k in table)
    assert all(gamma_singular("classical", n, m) == gamma_closed_form(n, m, 0, 0) for n, m in product(range(-5, 6), repeat=2))


def test_singular_identifications_reproduce_lines():
    for n, m in product(range(-6, 7), repeat=2):
        tp = substitute_square(gamma_singular("three_point", n, m), "alpha", 3 * e)
        assert tp == gamma_for_spec(line_s(1))(n, m)
        w = substitute_square(gamma_singular("W_family", n, m), "alpha", -3 * e / 2)
        assert w == gamma_for_spec(line_s(MultiPoly.const(-1) / 2))(n, m)


@given(st.integers(-30, 30), st.integers(-30, 30))
def test_closed_form_antisymmetric_and_local(n, m):
    g = gamma_closed_form(n, m)
    assert g == -gamma_closed_form(m, n)
    if g:
        assert n + m in (0, 2, 4)


@given(st.integers(-20, 20))
def test_level_zero(n):
    assert gamma_closed_form(n, -n) == -n


def test_extended_bracket_examples():
    F = CurrentFamily(SL2, elliptic())
    for n in (-4, 0, 2, 6):
        out = extended_bracket(F, KAPPA, 1, ExtendedElement.basis(E, n), ExtendedElement.basis(f, -n))
        assert out == ExtendedElement(CurrentElement.basis(h, 0), 4 * -n)
    assert extended_bracket(F, KAPPA, 1, ExtendedElement.t(), ExtendedElement.basis(h, 3)).is_zero()
    mixed = extended_bracket(F, KAPPA, 1, ExtendedElement.basis(h, 2), ExtendedElement.basis(h, 3))
    assert mixed.central == 0
    p = 1 + e1 - e2**2
    odd = extended_bracket(F, KAPPA, p, ExtendedElement.basis(h, 3), ExtendedElement.basis(h, -1))
    assert odd.central == p * 8 * -6 * e1


def test_extended_bracket_needs_invariant_form():
    F = CurrentFamily(SL2, elliptic())
    with pytest.raises(NonInvariantForm):
        extended_bracket(F, BilinearForm(((1, 0, 0), (0, 1, 0), (0, 0, 1))), 1, ExtendedElement.basis(E, 1), ExtendedElement.basis(f, -1))


def test_gamma_properties_small():
    report = verify_gamma_properties(3, p=1 + e1 - e2**2, jacobi_window=2)
    assert report.passed, str(report)
    assert report.parts[1].details["levels"] == [0, 2, 4]


def test_gamma_mutation_breaks_multiplicativity():
    report = verify_gamma_properties(4, gamma=lambda n, m: gamma_closed_form(n, m, 4 * e1, b), jacobi_window=1)
    assert not report.passed
    assert report.witness[0] == "multiplicativity"


def test_laurent_locality_tightens():
    report = verify_gamma_properties(4, spec=laurent(), jacobi_window=1)
    assert report.passed and report.parts[1].details["levels"] == [0]


@pytest.mark.parametrize("spec", [three_point(), subalgebra_w(), line_s()], ids=lambda s: s.kind)
def test_gamma_properties_other_families(spec):
    assert verify_gamma_properties(3, spec=spec, jacobi_window=1).passed


def test_zero_gamma_is_trivially_a_cocycle():
    report = verify_gamma_properties(2, gamma=lambda n, m: ZERO, jacobi_window=1)
    assert report.passed
