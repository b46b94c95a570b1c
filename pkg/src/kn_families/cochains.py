"""Two-cochains on current algebras and on the function algebras.

Adjoint-valued cochains are evaluated against the undeformed bracket of a
base :class:`CurrentFamily` (normally g (x) Laurent polynomials).  All
closed-form cochains used here share the "odd-odd shift" shape::

    omega(x (x) A_n, y (x) A_m) = sum_k c_k [x, y] (x) A_{n+m+k}   n, m odd
                                = 0                                otherwise

and the maps eta that trivialise them act only on odd degrees.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Callable

from .currents import CurrentElement, CurrentFamily, current_bracket
from .errors import NotPolynomialInE
from .exact_arith import ZERO, MultiPoly, PolyLike
from .families import FamilySpec, FnElement, laurent, multiply
from .lie import FiniteLieAlgebra, sl2_standard
from .report import Report

Shifts = tuple[tuple[int, MultiPoly], ...]


def _shifts(items) -> Shifts:
    return tuple((k, MultiPoly.coerce(c)) for k, c in items if MultiPoly.coerce(c))


@dataclass(frozen=True)
class AdjCochain2:
    """Alternating bilinear map on g (x) A with values in g (x) A."""

    tag: str = "odd-odd"
    shifts: Shifts = ()
    rule: Callable | None = field(default=None, compare=False)

    @classmethod
    def odd_shift(cls, *pairs: tuple[int, PolyLike]) -> "AdjCochain2":
        return cls("odd-odd", _shifts(pairs))

    @classmethod
    def custom(cls, rule: Callable[[FiniteLieAlgebra, int, int, int, int], CurrentElement]) -> "AdjCochain2":
        return cls("custom", (), rule)

    def on_basis(self, lie: FiniteLieAlgebra, a: int, n: int, b: int, m: int) -> CurrentElement:
        if self.rule is not None:
            return self.rule(lie, a, n, b, m)
        if n % 2 == 0 or m % 2 == 0:
            return CurrentElement()
        out: dict = {}
        for c, v in lie.bracket_basis(a, b).items():
            for k, coeff in self.shifts:
                key = (c, n + m + k)
                out[key] = out.get(key, ZERO) + coeff * v
        return CurrentElement(out)

    def __call__(self, lie: FiniteLieAlgebra, u: CurrentElement, v: CurrentElement) -> CurrentElement:
        out = CurrentElement()
        for (a, n), cu in u.terms.items():
            for (b, m), cv in v.terms.items():
                out = out + self.on_basis(lie, a, n, b, m).scale(cu * cv)
        return out

    def scaled(self, c: PolyLike) -> "AdjCochain2":
        c = MultiPoly.coerce(c)
        if self.rule is not None:
            rule = self.rule
            return AdjCochain2.custom(lambda lie, a, n, b, m: rule(lie, a, n, b, m).scale(c))
        return AdjCochain2(self.tag, _shifts((k, v * c) for k, v in self.shifts))


@dataclass(frozen=True)
class LinMap1:
    """Linear map on g (x) A defined on basis elements."""

    tag: str = "odd-shift"
    shift: int = 0
    scalar: MultiPoly = ZERO
    rule: Callable | None = field(default=None, compare=False)

    @classmethod
    def odd_shift(cls, shift: int, scalar: PolyLike) -> "LinMap1":
        return cls("odd-shift", shift, MultiPoly.coerce(scalar))

    @classmethod
    def custom(cls, rule: Callable[[int, int], CurrentElement]) -> "LinMap1":
        return cls("custom", 0, ZERO, rule)

    def on_basis(self, a: int, n: int) -> CurrentElement:
        if self.rule is not None:
            return self.rule(a, n)
        if n % 2 == 0:
            return CurrentElement()
        return CurrentElement.basis(a, n + self.shift, self.scalar)

    def __call__(self, u: CurrentElement) -> CurrentElement:
        out = CurrentElement()
        for (a, n), c in u.terms.items():
            out = out + self.on_basis(a, n).scale(c)
        return out


def base_family(lie: FiniteLieAlgebra | None = None) -> CurrentFamily:
    """The undeformed current algebra g (x) C[z, 1/z]."""
    return CurrentFamily(lie or sl2_standard(), laurent())


def lie_d2_adjoint(L0: CurrentFamily, omega: AdjCochain2, triple) -> CurrentElement:
    x, y, z = triple
    br = lambda u, v: current_bracket(L0, u, v)  # noqa: E731
    w = lambda u, v: omega(L0.lie, u, v)  # noqa: E731
    return (
        w(br(x, y), z)
        - w(br(x, z), y)
        + w(br(y, z), x)
        - br(x, w(y, z))
        + br(y, w(x, z))
        - br(z, w(x, y))
    )


def lie_d1_adjoint(L0: CurrentFamily, eta: LinMap1, pair) -> CurrentElement:
    x, y = pair
    return eta(current_bracket(L0, x, y)) - current_bracket(L0, x, eta(y)) - current_bracket(L0, eta(x), y)


def omega_shift2() -> AdjCochain2:
    """omega(x A_n, y A_m) = [x,y] A_{n+m-2} for n, m odd: first-order term over D_s."""
    return AdjCochain2.odd_shift((-2, 1))


def omega_shift4() -> AdjCochain2:
    """omega(x A_n, y A_m) = [x,y] A_{n+m-4} for n, m odd: first-order term over D_infinity."""
    return AdjCochain2.odd_shift((-4, 1))


def trivializing_map(shift: int) -> LinMap1:
    """eta(x A_n) = -1/2 x A_{n+shift} for odd n, zero on even degrees."""
    return LinMap1.odd_shift(shift, MultiPoly.const(-1) / 2)


def _first_e_order(spec: FamilySpec) -> int | None:
    consts = [spec.shift2, spec.shift4]
    if any(not c.params() <= {"e", "s"} for c in consts):
        raise NotPolynomialInE(f"{spec.kind} family is not a one-parameter family in e")
    degrees = [k for c in consts for k in range(1, c.degree("e") + 1) if c.coefficient("e", k)]
    for c in consts:
        if c.coefficient("e", 0):
            raise NotPolynomialInE(f"{spec.kind} family does not specialise to Laurent at e = 0")
    return min(degrees, default=None)


def deformation_differential(family: CurrentFamily | FamilySpec) -> AdjCochain2:
    """Lowest-order e-coefficient of the family bracket, as an odd-odd cochain.

    D_s gives 3 * (shift -2); D_infinity gives -1 * (shift -4); an
    e-independent family gives the zero cochain.
    """
    spec = family.spec if isinstance(family, CurrentFamily) else family
    k = _first_e_order(spec)
    if k is None:
        return AdjCochain2.odd_shift()
    return AdjCochain2.odd_shift((-2, spec.shift2.coefficient("e", k)), (-4, spec.shift4.coefficient("e", k)))


def _window_basis(lie: FiniteLieAlgebra, window: int):
    return [(a, n) for n in range(-window, window + 1) for a in range(lie.dim)]


def verify_coboundary(omega: AdjCochain2, eta: LinMap1, window: int, lie: FiniteLieAlgebra | None = None) -> Report:
    """omega(p, q) == (d1 eta)(p, q) on all basis pairs with degrees in [-N, N]."""
    L0 = base_family(lie)
    shifts = ", ".join(f"{c}@{k}" for k, c in omega.shifts) or "0"
    name = f"coboundary[omega {shifts} vs eta {eta.scalar}@{eta.shift}]"
    checked = 0
    for p, q in cartesian(_window_basis(L0.lie, window), repeat=2):
        checked += 1
        u, v = CurrentElement.basis(*p), CurrentElement.basis(*q)
        if omega(L0.lie, u, v) != lie_d1_adjoint(L0, eta, (u, v)):
            return Report(name, False, checked, witness=(p, q))
    return Report(name, True, checked)


def verify_adjoint_cocycle(omega: AdjCochain2, window: int, lie: FiniteLieAlgebra | None = None) -> Report:
    """d2(omega) == 0 on all basis triples with degrees in [-N, N]."""
    L0 = base_family(lie)
    checked = 0
    for p, q, r in cartesian(_window_basis(L0.lie, window), repeat=3):
        checked += 1
        triple = tuple(CurrentElement.basis(*x) for x in (p, q, r))
        if not lie_d2_adjoint(L0, omega, triple).is_zero():
            return Report("d2-closed", False, checked, witness=(p, q, r))
    return Report("d2-closed", True, checked)


# -- Harrison (commutative) side --------------------------------------------


@dataclass(frozen=True)
class HarrisonCochain2:
    """Symmetric F(A_n, A_m) = sum_k c_k A_{n+m+k} for n, m odd, zero otherwise."""

    shifts: Shifts = ()

    def on_basis(self, n: int, m: int) -> FnElement:
        if n % 2 == 0 or m % 2 == 0:
            return FnElement()
        return FnElement({n + m + k: c for k, c in self.shifts})

    def __call__(self, f: FnElement, g: FnElement) -> FnElement:
        out = FnElement()
        for n, a in f.terms.items():
            for m, b in g.terms.items():
                out = out + self.on_basis(n, m).scale(a * b)
        return out

    def scaled(self, c: PolyLike) -> "HarrisonCochain2":
        c = MultiPoly.coerce(c)
        return HarrisonCochain2(_shifts((k, v * c) for k, v in self.shifts))


@dataclass(frozen=True)
class FnLinMap:
    """phi(A_n) = scalar * A_{n+shift} for odd n, zero on even n."""

    shift: int
    scalar: MultiPoly

    def __call__(self, f: FnElement) -> FnElement:
        return FnElement({n + self.shift: c * self.scalar for n, c in f.terms.items() if n % 2})


def first_order_harrison(spec: FamilySpec) -> HarrisonCochain2:
    k = _first_e_order(spec)
    if k is None:
        return HarrisonCochain2()
    return HarrisonCochain2(_shifts([(-2, spec.shift2.coefficient("e", k)), (-4, spec.shift4.coefficient("e", k))]))


def harrison_delta2(base: FamilySpec, F: HarrisonCochain2, a: FnElement, b: FnElement, c: FnElement) -> FnElement:
    mul = lambda f, g: multiply(base, f, g)  # noqa: E731
    return mul(a, F(b, c)) - F(mul(a, b), c) + F(a, mul(b, c)) - mul(F(a, b), c)


def harrison_delta1(base: FamilySpec, phi: FnLinMap, a: FnElement, b: FnElement) -> FnElement:
    mul = lambda f, g: multiply(base, f, g)  # noqa: E731
    return mul(a, phi(b)) - phi(mul(a, b)) + mul(phi(a), b)


def harrison_differentials(base: FamilySpec, op, *args: FnElement) -> FnElement:
    """delta_2 F(a, b, c) for a cochain F, delta_1 phi(a, b) for a linear map phi."""
    if isinstance(op, HarrisonCochain2):
        return harrison_delta2(base, op, *args)
    return harrison_delta1(base, op, *args)


def verify_harrison(window: int, spec: FamilySpec | None = None, phi: FnLinMap | None = None, scalar: PolyLike = 3) -> Report:
    """For the first-order Harrison cochain F of a family: delta_2 F = 0 and F = scalar * delta_1 phi."""
    from .families import line_s

    spec = spec or line_s()
    phi = phi or FnLinMap(-2, MultiPoly.const(1) / 2)
    scalar = MultiPoly.coerce(scalar)
    F = first_order_harrison(spec)
    base = laurent()
    rng = range(-window, window + 1)
    checked = 0
    closed = None
    for n, m, k in cartesian(rng, repeat=3):
        checked += 1
        if not harrison_delta2(base, F, FnElement.basis(n), FnElement.basis(m), FnElement.basis(k)).is_zero():
            closed = Report("harrison delta2 F = 0", False, checked, witness=(n, m, k))
            break
    if closed is None:
        closed = Report("harrison delta2 F = 0", True, checked)
    checked = 0
    exact = None
    for n, m in cartesian(rng, repeat=2):
        checked += 1
        a, b = FnElement.basis(n), FnElement.basis(m)
        if F(a, b) != harrison_delta1(base, phi, a, b).scale(scalar):
            exact = Report(f"harrison F = {scalar}*delta1 phi", False, checked, witness=(n, m))
            break
    if exact is None:
        exact = Report(f"harrison F = {scalar}*delta1 phi", True, checked)
    return Report.combine("harrison", [closed, exact])


# -- trivial-module cocycles --------------------------------------------------


def lie_d2_trivial(algebra: CurrentFamily, psi: Callable[[CurrentElement, CurrentElement], MultiPoly], triple) -> MultiPoly:
    """psi([x,y],z) + psi([y,z],x) + psi([z,x],y)."""
    x, y, z = triple
    br = lambda u, v: current_bracket(algebra, u, v)  # noqa: E731
    return psi(br(x, y), z) + psi(br(y, z), x) + psi(br(z, x), y)
