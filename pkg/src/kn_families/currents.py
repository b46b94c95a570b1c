"""Current algebras g (x) A over the function-algebra families.

[x (x) A_n, y (x) A_m] = [x, y] (x) (A_n * A_m), with the product of the
chosen family.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Mapping

from .exact_arith import ZERO, MultiPoly, PolyLike, substitute_square, var
from .families import FamilySpec, elliptic, laurent, line_s, specialize_family, subalgebra_w, three_point
from .lie import FiniteLieAlgebra, sl2_standard
from .report import Report

Key = tuple[int, int]  # (Lie basis index, degree n)


class CurrentElement:
    """Finite combination of x_a (x) A_n with polynomial coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, PolyLike] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = MultiPoly.coerce(c)
            if c:
                clean[k] = c
        self.terms = clean

    @classmethod
    def basis(cls, a: int, n: int, coeff: PolyLike = 1) -> "CurrentElement":
        return cls({(a, n): coeff})

    def __add__(self, other: "CurrentElement") -> "CurrentElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return CurrentElement(out)

    def __neg__(self) -> "CurrentElement":
        return CurrentElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "CurrentElement") -> "CurrentElement":
        return self + (-other)

    def scale(self, c: PolyLike) -> "CurrentElement":
        c = MultiPoly.coerce(c)
        return CurrentElement({k: v * c for k, v in self.terms.items()})

    def map_degrees(self, fn) -> "CurrentElement":
        return CurrentElement({(a, fn(n)): c for (a, n), c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {n for _, n in self.terms}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CurrentElement):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*x{a}(x)A_{n}" for (a, n), c in sorted(self.terms.items()))


@dataclass(frozen=True)
class CurrentFamily:
    lie: FiniteLieAlgebra
    spec: FamilySpec

    def __post_init__(self):
        object.__setattr__(self, "_brackets", {})

    def basis(self, window: int) -> list[Key]:
        return [(a, n) for n in range(-window, window + 1) for a in range(self.lie.dim)]


def _basis_bracket(F: CurrentFamily, a: int, n: int, b: int, m: int) -> CurrentElement:
    key = (a, n, b, m)
    cached = F._brackets.get(key)
    if cached is not None:
        return cached
    out: dict[Key, MultiPoly] = {}
    prod = F.spec.product(n, m)
    for c, v in F.lie.bracket_basis(a, b).items():
        for j, k in prod.items():
            out[(c, j)] = out.get((c, j), ZERO) + k * v
    F._brackets[key] = result = CurrentElement(out)
    return result


def current_bracket(F: CurrentFamily, u: CurrentElement, v: CurrentElement) -> CurrentElement:
    out: dict[Key, MultiPoly] = {}
    for (a, n), cu in u.terms.items():
        for (b, m), cv in v.terms.items():
            cc = cu * cv
            for key, k in _basis_bracket(F, a, n, b, m).terms.items():
                out[key] = out.get(key, ZERO) + cc * k
    return CurrentElement(out)


def verify_jacobi(F: CurrentFamily, window: int) -> Report:
    """Antisymmetry and Jacobi on all basis triples with degrees in [-N, N]."""
    if window < 1:
        raise ValueError("window must be >= 1")
    name = f"jacobi[{F.spec.kind}]"
    basis = F.basis(window)
    checked = 0
    for p, q in cartesian(basis, repeat=2):
        checked += 1
        if _basis_bracket(F, *p, *q) != -_basis_bracket(F, *q, *p):
            return Report(name, False, checked, witness=("antisymmetry", p, q))
    elems = {p: CurrentElement.basis(*p) for p in basis}
    for p, q, r in cartesian(basis, repeat=3):
        checked += 1
        total = (
            current_bracket(F, _basis_bracket(F, *p, *q), elems[r])
            + current_bracket(F, _basis_bracket(F, *q, *r), elems[p])
            + current_bracket(F, _basis_bracket(F, *r, *p), elems[q])
        )
        if not total.is_zero():
            return Report(name, False, checked, witness=("jacobi", p, q, r))
    return Report(name, True, checked)


def verify_almost_grading(F: CurrentFamily, window: int, lower: int = -4, upper: int = 0) -> Report:
    name = f"almost-grading[{F.spec.kind}]"
    checked = 0
    for (a, n), (b, m) in cartesian(F.basis(window), repeat=2):
        checked += 1
        for d in _basis_bracket(F, a, n, b, m).degrees():
            if not lower <= d - n - m <= upper:
                return Report(name, False, checked, witness=((a, n), (b, m), d))
    return Report(name, True, checked)


def _compare_products(name: str, left: FamilySpec, right: FamilySpec, window: int, alpha_sq=None, lie=None) -> Report:
    """Equality of brackets g(x)left vs g(x)right, optionally after alpha^2 -> alpha_sq on the right."""
    lie = lie or sl2_standard()
    FL, FR = CurrentFamily(lie, left), CurrentFamily(lie, right)
    checked = 0
    rng = range(-window, window + 1)
    for n, m in cartesian(rng, repeat=2):
        for a, b in cartesian(range(lie.dim), repeat=2):
            checked += 1
            lhs = _basis_bracket(FL, a, n, b, m)
            rhs = _basis_bracket(FR, a, n, b, m)
            if alpha_sq is not None:
                rhs = CurrentElement({k: substitute_square(c, "alpha", alpha_sq) for k, c in rhs.terms.items()})
            if lhs != rhs:
                return Report(name, False, checked, witness=(a, n, b, m))
    return Report(name, True, checked)


def degeneration_identifications(window: int, lie: FiniteLieAlgebra | None = None) -> Report:
    """The singular fibers of the two-parameter family, identified by structure constants:
    D_1 and D_-2 with the three-point family (alpha^2 = 3e), D_-1/2 with the
    W family (alpha^2 = -3e/2), and (e1, e2) = (0, 0) with Laurent polynomials.
    """
    if window < 2:
        raise ValueError("window must be >= 2")
    e = var("e")
    parts = [
        _compare_products("D_1 ~ three_point", line_s(1), three_point(), window, 3 * e, lie),
        _compare_products("D_-2 ~ three_point", line_s(-2), three_point(), window, 3 * e, lie),
        _compare_products("D_-1/2 ~ W", line_s(MultiPoly.const(-1) / 2), subalgebra_w(), window, -3 * e / 2, lie),
        _compare_products("(0,0) ~ laurent", specialize_family(elliptic(), {"e1": 0, "e2": 0}), laurent(), window, None, lie),
    ]
    return Report.combine("degeneration", parts)
