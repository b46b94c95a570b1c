import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from kn_families.errors import DimensionMismatch, InvalidLieAlgebra
from kn_families.lie import (
    BilinearForm,
    abelian,
    bracket_fd,
    from_entries,
    killing_form,
    lie_by_name,
    load_lie_json,
    sl2_standard,
    verify_invariance,
    verify_lie_axioms,
)

L = sl2_standard()
H, E, F = ([1, 0, 0], [0, 1, 0], [0, 0, 1])


def test_sl2_relations():
    assert bracket_fd(L, H, E) == [0, 2, 0]
    assert bracket_fd(L, H, F) == [0, 0, -2]
    assert bracket_fd(L, E, F) == [1, 0, 0]
    assert bracket_fd(L, F, E) == [-1, 0, 0]
    assert bracket_fd(L, E, E) == [0, 0, 0]
    assert verify_lie_axioms(L).passed


def test_abelian():
    A = abelian(4)
    assert verify_lie_axioms(A).passed
    assert all(v == 0 for row in killing_form(A).matrix for v in row)


def test_antisymmetry_violation():
    with pytest.raises(InvalidLieAlgebra):
        from_entries(2, [(1, 2, 1, 1), (2, 1, 1, 1)])
    report = verify_lie_axioms(from_entries(2, [(1, 2, 1, 1), (2, 1, 1, 1)], validate=False))
    assert not report.passed and report.witness == (1, 2, 1)


def test_jacobi_violation():
    # antisymmetric but not Jacobi: [T1,T2]=T3, [T2,T3]=T1, [T1,T3]=T1
    entries = [(1, 2, 3, 1), (2, 1, 3, -1), (2, 3, 1, 1), (3, 2, 1, -1), (1, 3, 1, 1), (3, 1, 1, -1)]
    assert not verify_lie_axioms(from_entries(3, entries, validate=False)).passed


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        bracket_fd(L, [1, 0], [0, 1])
    with pytest.raises(DimensionMismatch):
        from_entries(2, [(1, 3, 1, 1)])


def sympy_killing(lie):
    n = lie.dim
    ads = []
    for a in range(n):
        ads.append(sympy.Matrix(n, n, lambda c, b: sympy.Rational(str(lie.structure[a][b][c]))))
    return sympy.Matrix(n, n, lambda a, b: (ads[a] * ads[b]).trace())


def test_killing_form_values():
    kappa = killing_form(L)
    assert kappa.on_basis(0, 0) == 8
    assert kappa.on_basis(1, 2) == kappa.on_basis(2, 1) == 4
    assert kappa.on_basis(1, 1) == 0
    assert kappa.determinant() == -128
    assert sympy.Matrix(kappa.matrix) == sympy_killing(L)
    assert verify_invariance(L, kappa).passed


def test_non_invariant_form():
    assert not verify_invariance(L, BilinearForm(((1, 0, 0), (0, 1, 0), (0, 0, 1)))).passed
    assert not verify_invariance(L, BilinearForm(((0, 1, 0), (0, 0, 0), (0, 0, 0)))).passed


def test_json_round_trip(tmp_path):
    data = {
        "dim": 3,
        "names": ["h", "e", "f"],
        "entries": [
            {"a": 1, "b": 2, "c": 2, "value": 2},
            {"a": 2, "b": 1, "c": 2, "value": -2},
            {"a": 1, "b": 3, "c": 3, "value": "-2"},
            {"a": 3, "b": 1, "c": 3, "value": "2"},
            {"a": 2, "b": 3, "c": 1, "value": "1"},
            {"a": 3, "b": 2, "c": 1, "value": "-1"},
        ],
    }
    path = tmp_path / "sl2.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert load_lie_json(path) == L
    assert lie_by_name(str(path)) == L
    assert lie_by_name("sl2") == L and lie_by_name("abelian2").dim == 2
    with pytest.raises(InvalidLieAlgebra):
        load_lie_json({"entries": []})


vectors = st.lists(st.fractions(-3, 3, max_denominator=4), min_size=3, max_size=3)


@given(vectors, vectors, vectors)
def test_bracket_identities(x, y, z):
    assert bracket_fd(L, x, y) == [-v for v in bracket_fd(L, y, x)]
    jac = [
        a + b + c
        for a, b, c in zip(
            bracket_fd(L, bracket_fd(L, x, y), z),
            bracket_fd(L, bracket_fd(L, y, z), x),
            bracket_fd(L, bracket_fd(L, z, x), y),
        )
    ]
    assert jac == [0, 0, 0]
    kappa = killing_form(L)
    assert kappa(bracket_fd(L, x, y), z) == kappa(x, bracket_fd(L, y, z))


def test_heisenberg_is_valid():
    heis = from_entries(3, [(1, 2, 3, 1), (2, 1, 3, -1)])
    assert verify_lie_axioms(heis).passed
    assert killing_form(heis).determinant() == 0
    assert bracket_fd(heis, [1, 0, 0], [0, Fraction(1, 2), 0]) == [0, 0, Fraction(1, 2)]
