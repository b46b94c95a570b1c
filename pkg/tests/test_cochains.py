from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kn_families.cochains import (
    AdjCochain2,
    FnLinMap,
    HarrisonCochain2,
    LinMap1,
    base_family,
    omega_shift2,
    omega_shift4,
    deformation_differential,
    first_order_harrison,
    harrison_delta1,
    harrison_delta2,
    harrison_differentials,
    lie_d1_adjoint,
    lie_d2_adjoint,
    lie_d2_trivial,
    trivializing_map,
    verify_adjoint_cocycle,
    verify_coboundary,
    verify_harrison,
)
from kn_families.currents import CurrentElement, CurrentFamily
from kn_families.errors import NotPolynomialInE
from kn_families.exact_arith import ZERO, MultiPoly
from kn_families.extensions import gamma_closed_form, scalar_cocycle
from kn_families.families import FnElement, elliptic, laurent, line_infinity, line_s, three_point
from kn_families.lie import BilinearForm, killing_form, sl2_standard

h, e, f = 0, 1, 2
X = CurrentElement.basis
A = FnElement.basis
L0 = base_family()
SL2 = sl2_standard()
HALF = MultiPoly.const(Fraction(1, 2))


def test_d2_examples():
    w = omega_shift2()
    assert lie_d2_adjoint(L0, w, (X(e, 1), X(f, 1), X(h, 2))).is_zero()
    assert lie_d2_adjoint(L0, AdjCochain2.odd_shift(), (X(e, 1), X(f, 3), X(h, -1))).is_zero()


def test_d1_examples():
    eta = trivializing_map(-2)
    assert lie_d1_adjoint(L0, eta, (X(e, 1), X(f, 1))) == X(h, 0)
    assert lie_d1_adjoint(L0, eta, (X(e, 1), X(f, 1))) == omega_shift2()(SL2, X(e, 1), X(f, 1))
    assert lie_d1_adjoint(L0, LinMap1.odd_shift(-2, 0), (X(e, 1), X(f, 1))).is_zero()
    assert lie_d1_adjoint(L0, eta, (X(e, 2), X(f, 4))).is_zero()


def test_deformation_differential():
    assert deformation_differential(CurrentFamily(SL2, line_s())) == AdjCochain2.odd_shift((-2, 3))
    assert deformation_differential(line_infinity()) == AdjCochain2.odd_shift((-4, -1))
    assert deformation_differential(laurent()) == AdjCochain2.odd_shift()
    with pytest.raises(NotPolynomialInE):
        deformation_differential(elliptic())
    with pytest.raises(NotPolynomialInE):
        deformation_differential(three_point())


def test_deformation_differential_is_scaled_shift_cocycle():
    assert deformation_differential(line_s()) == omega_shift2().scaled(3)
    assert deformation_differential(line_infinity()) == omega_shift4().scaled(-1)


@pytest.mark.parametrize("spec", [line_s(), line_infinity()], ids=lambda s: s.kind)
def test_deformation_differential_is_closed(spec):
    assert verify_adjoint_cocycle(deformation_differential(spec), 4).passed


def test_coboundary():
    assert verify_coboundary(omega_shift2(), trivializing_map(-2), 8).passed
    assert verify_coboundary(omega_shift4(), trivializing_map(-4), 8).passed
    report = verify_coboundary(omega_shift2(), trivializing_map(-4), 8)
    assert not report.passed and report.witness is not None
    scaled = LinMap1.odd_shift(-2, Fraction(-3, 2))
    assert verify_coboundary(omega_shift2().scaled(3), scaled, 6).passed


def test_non_cocycle_rule_has_witness():
    # omega(x A_n, y A_m) = [x,y] A_{n+m} for n, m both positive: alternating but not closed
    def rule(lie, a, n, b, m):
        if n > 0 and m > 0:
            return CurrentElement({(c, n + m): v for c, v in lie.bracket_basis(a, b).items()})
        return CurrentElement()

    report = verify_adjoint_cocycle(AdjCochain2.custom(rule), 2)
    assert not report.passed


coeffs = st.fractions(-3, 3, max_denominator=3)


@st.composite
def random_eta(draw):
    """Linear map with random values on a bounded set of basis elements."""
    table = {}
    for a in range(3):
        for n in range(-2, 3):
            if draw(st.booleans()):
                b = draw(st.integers(0, 2))
                k = draw(st.integers(-3, 3))
                table[(a, n)] = X(b, k, draw(coeffs))
    return LinMap1.custom(lambda a, n: table.get((a, n), CurrentElement()))


@given(random_eta(), st.tuples(*[st.tuples(st.integers(0, 2), st.integers(-2, 2))] * 3))
def test_d2_of_d1_vanishes(eta, triple):
    omega = AdjCochain2.custom(lambda lie, a, n, b, m: lie_d1_adjoint(L0, eta, (X(a, n), X(b, m))))
    assert lie_d2_adjoint(L0, omega, tuple(X(*p) for p in triple)).is_zero()


def test_harrison_examples():
    phi = FnLinMap(-2, HALF)
    base = laurent()
    assert harrison_delta1(base, phi, A(1), A(1)) == A(0)
    assert harrison_delta1(base, phi, A(2), A(4)).is_zero()
    F = first_order_harrison(line_s())
    assert F == HarrisonCochain2(((-2, MultiPoly.const(3)),))
    assert harrison_delta2(base, F, A(1), A(1), A(1)).is_zero()
    assert F(A(1), A(1)) == harrison_delta1(base, phi, A(1), A(1)).scale(3)
    assert harrison_differentials(base, F, A(1), A(3), A(-1)).is_zero()
    assert harrison_differentials(base, phi, A(1), A(1)) == A(0)


def test_harrison_verification():
    assert verify_harrison(8).passed
    assert not verify_harrison(4, phi=FnLinMap(-4, HALF)).passed
    assert not verify_harrison(4, scalar=1).passed
    assert verify_harrison(6, spec=line_infinity(), phi=FnLinMap(-4, HALF), scalar=-1).passed


def test_lie_d2_trivial():
    F = CurrentFamily(SL2, elliptic())
    psi = scalar_cocycle(killing_form(SL2), 1, gamma_closed_form)
    triple = (X(e, 1), X(f, 1), X(h, -2))
    assert lie_d2_trivial(F, psi, triple) == 0
    assert lie_d2_trivial(F, lambda u, v: ZERO, triple) == 0
    bad = scalar_cocycle(BilinearForm(((1, 0, 0), (0, 1, 0), (0, 0, 1))), 1, gamma_closed_form)
    basis = [X(a, n) for a in range(3) for n in range(-2, 3)]
    hits = [(x, y, z) for x in basis for y in basis for z in basis if lie_d2_trivial(F, bad, (x, y, z))]
    assert hits
