"""Central extensions of the current algebras by the cocycle gamma(f, g) = res(f dg).

gamma is computed three independent ways:

* ``gamma_closed_form``: the case table in the structure constants (a, b);
* ``gamma_residue_oracle``: -res_{z=0}(A_n * A_m') from the series expansions
  (z = 0 is the out-point, hence the sign);
* ``gamma_recursion``: solving the multiplicativity relations level by level,
  seeded only by locality and the normalisation gamma(A_2, A_-2) = -2.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as cartesian
from typing import Callable

from .cochains import lie_d2_trivial
from .currents import CurrentElement, CurrentFamily, current_bracket
from .errors import NonInvariantForm, RecursionInconsistent, TruncationTooShallow
from .exact_arith import ONE, ZERO, MultiPoly, PolyLike, var
from .families import FamilySpec, elliptic
from .lie import BilinearForm, FiniteLieAlgebra, killing_form, sl2_standard, verify_invariance
from .report import Report
from .series import basis_series

GammaValue = MultiPoly
GammaRule = Callable[[int, int], MultiPoly]

NORMALIZATION = (2, -2, MultiPoly.const(-2))


def elliptic_constants() -> tuple[MultiPoly, MultiPoly]:
    e1, e2 = var("e1"), var("e2")
    return 3 * e1, (e1 - e2) * (2 * e1 + e2)


def gamma_closed_form(n: int, m: int, a: PolyLike | None = None, b: PolyLike | None = None) -> GammaValue:
    """Case table for odd/odd structure constants A_n A_m = A_{n+m} + a A_{n+m-2} + b A_{n+m-4}.

    Defaults to the elliptic constants a = 3 e1, b = (e1 - e2)(2 e1 + e2).
    """
    if a is None or b is None:
        da, db = elliptic_constants()
        a = da if a is None else a
        b = db if b is None else b
    out = MultiPoly.const(-n) if m == -n else ZERO
    if n % 2 and m % 2:
        if m == -n + 2:
            out = MultiPoly.coerce(a) * (-n + 1)
        elif m == -n + 4:
            out = MultiPoly.coerce(b) * (-n + 2)
    return out


def gamma_for_spec(spec: FamilySpec) -> GammaRule:
    """Closed form driven by the odd/odd constants of a family."""
    a, b = spec.shift2, spec.shift4
    return lambda n, m: gamma_closed_form(n, m, a, b)


def gamma_singular(case: str, n: int, m: int) -> GammaValue:
    alpha = var("alpha")
    if case == "classical":
        return MultiPoly.const(-n) if m == -n else ZERO
    if case == "three_point":
        return gamma_closed_form(n, m, alpha**2, 0)
    if case in ("W_family", "W", "subalgebra_w"):
        return gamma_closed_form(n, m, -2 * alpha**2, alpha**4)
    raise ValueError(f"unknown singular case {case!r}")


def residue_window_order(window: int) -> int:
    return 2 * window + 8


def gamma_residue_oracle(n: int, m: int, order: int) -> GammaValue:
    """-res_{z=0}(A_n * dA_m/dz), reading off only the z^-1 coefficient."""
    f = basis_series(n, order)
    dg = basis_series(m, order).derivative()
    total = ZERO
    # coefficient of z^-1 in f * dg: sum over k of f_k * dg_{-1-k}
    try:
        for k in range(f.low, -dg.low):
            total = total + f.coefficient(k) * dg.coefficient(-1 - k)
    except TruncationTooShallow as exc:
        raise TruncationTooShallow(f"order {order} too small for the residue of A_{n} dA_{m}") from exc
    return -total


# -- recursion ---------------------------------------------------------------


class _Level:
    """Sparse row-reduced system for the unknowns of a single level."""

    def __init__(self):
        self.pivots: dict[tuple[int, int], tuple[dict, MultiPoly]] = {}

    def add(self, row: dict, rhs: MultiPoly) -> bool:
        row = dict(row)
        for v in [v for v in row if v in self.pivots]:
            c = row.pop(v)
            prow, prhs = self.pivots[v]
            for w, cw in prow.items():
                nv = row.get(w, 0) - c * cw
                if nv:
                    row[w] = nv
                else:
                    row.pop(w, None)
            rhs = rhs - prhs.scale(c)
        row = {v: c for v, c in row.items() if c}
        if not row:
            return not rhs
        pv = min(row)
        c = row.pop(pv)
        row = {w: cw / c for w, cw in row.items()}
        rhs = rhs.scale(1 / Fraction(c))
        for v, (prow, prhs) in list(self.pivots.items()):
            if pv in prow:
                k = prow.pop(pv)
                for w, cw in row.items():
                    nv = prow.get(w, 0) - k * cw
                    if nv:
                        prow[w] = nv
                    else:
                        prow.pop(w, None)
                self.pivots[v] = (prow, prhs - rhs.scale(k))
        self.pivots[pv] = (row, rhs)
        return True

    def solved(self) -> dict[tuple[int, int], MultiPoly]:
        return {v: rhs for v, (row, rhs) in self.pivots.items() if not row}


def gamma_recursion(
    a: PolyLike,
    b: PolyLike,
    window: int,
    product: Callable[[int, int], dict[int, MultiPoly]] | None = None,
    margin: int | None = None,
    anchors: range = range(-3, 4),
) -> dict[tuple[int, int], GammaValue]:
    """All gamma(A_n, A_m), |n|, |m| <= N, from multiplicativity alone.

    Seeds: gamma = 0 below level 0 (locality) and gamma(A_2, A_-2) = -2.
    At each level l = n + m the relations
        gamma(A_i A_j, A_k) + gamma(A_j A_k, A_i) + gamma(A_k A_i, A_j) = 0,  i+j+k = l,
    are linear in the level-l unknowns once lower levels are known; they are
    row-reduced exactly.  Triples are restricted to those with one index in
    ``anchors``; a contradiction raises RecursionInconsistent.  ``product``
    overrides the family product (used to feed corrupted structure constants).
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    if product is None:
        spec = FamilySpec("custom", MultiPoly.coerce(a), MultiPoly.coerce(b))
        product = spec.product
    K = 2 * window + (margin if margin is not None else 4)
    rng = range(-K, K + 1)
    known: dict[tuple[int, int], MultiPoly] = {}

    def lookup(p: int, q: int, level: int):
        """(coefficient-free value, or ('unknown', key, sign)); None if unavailable."""
        if p == q:
            return ZERO
        if p + q < 0:
            return ZERO
        key, sign = ((p, q), 1) if p < q else ((q, p), -1)
        if p + q == level:
            return ("u", key, sign)
        val = known.get(key)
        if val is None:
            return None
        return val if sign == 1 else -val

    for level in range(0, 2 * window + 1):
        system = _Level()
        if level == 0:
            n, m, val = NORMALIZATION
            system.add({(m, n): Fraction(1)}, -val)
        triples = set()
        for i in anchors:
            for j in rng:
                k = level - i - j
                if -K <= k <= K:
                    # ordered, so that non-commutative corruptions are seen too
                    triples.update({(i, j, k), (j, k, i), (k, i, j), (j, i, k), (i, k, j), (k, j, i)})
        for i, j, k in sorted(triples):
            row: dict = {}
            rhs = ZERO
            ok = True
            for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                for d, c in product(x, y).items():
                    if not -K <= d <= K:
                        ok = False
                        break
                    got = lookup(d, z, level)
                    if got is None:
                        ok = False
                        break
                    if isinstance(got, tuple):
                        if not c.is_constant():
                            raise ValueError("leading structure constants must be rational")
                        _, key, sign = got
                        row[key] = row.get(key, 0) + sign * c.constant_value()
                    else:
                        rhs = rhs - c * got
                if not ok:
                    break
            if ok and not system.add(row, rhs):
                raise RecursionInconsistent(f"level {level}: relation at {(i, j, k)} contradicts earlier ones")
        known.update(system.solved())

    table: dict[tuple[int, int], MultiPoly] = {}
    for n, m in cartesian(range(-window, window + 1), repeat=2):
        got = lookup(n, m, None)
        if got is None:
            raise RecursionInconsistent(f"gamma(A_{n}, A_{m}) is not determined by the relations")
        table[(n, m)] = got
    return table


def gamma_table(
    route: str, window: int, order: int | None = None, spec: FamilySpec | None = None
) -> dict[tuple[int, int], GammaValue]:
    """gamma on [-N, N]^2 by route closed | residue | recursion.

    ``closed`` and ``recursion`` use the structure constants of ``spec``
    (elliptic by default); ``residue`` always expands the elliptic basis.
    """
    spec = spec or elliptic()
    pairs = list(cartesian(range(-window, window + 1), repeat=2))
    if route == "closed":
        rule = gamma_for_spec(spec)
        return {(n, m): rule(n, m) for n, m in pairs}
    if route == "residue":
        order = residue_window_order(window) if order is None else order
        return {(n, m): gamma_residue_oracle(n, m, order) for n, m in pairs}
    if route == "recursion":
        return gamma_recursion(spec.shift2, spec.shift4, window, product=spec.product)
    raise ValueError(f"unknown route {route!r}")


def verify_gamma_agreement(
    window: int, order: int | None = None, anchor: int = 20, spec: FamilySpec | None = None
) -> Report:
    """closed == residue == recursion on the window, plus the level-0 anchors.

    With a non-default ``spec`` this checks whether that family's cocycle
    agrees with the one computed from the elliptic expansions.
    """
    spec = spec or elliptic()
    closed = gamma_table("closed", window, spec=spec)
    parts = []
    for route in ("residue", "recursion"):
        name = f"closed = {route}"
        try:
            other = gamma_table(route, window, order, spec)
        except RecursionInconsistent as exc:
            parts.append(Report(name, False, 0, witness=str(exc)))
            continue
        bad = next((k for k in sorted(closed) if closed[k] != other[k]), None)
        parts.append(Report(name, bad is None, len(closed), witness=bad and (bad, str(closed[bad]), str(other[bad]))))
    try:
        rec = gamma_recursion(spec.shift2, spec.shift4, anchor, product=spec.product)
    except RecursionInconsistent as exc:
        parts.append(Report("anchors", False, 0, witness=str(exc)))
        return Report.combine("gamma-agreement", parts)
    bad = next(
        (n for n in range(-anchor, anchor + 1) if not (gamma_closed_form(n, -n) == rec[(n, -n)] == -n)), None
    )
    parts.append(Report(f"gamma(A_n, A_-n) = -n, |n| <= {anchor}", bad is None, 2 * anchor + 1, witness=bad))
    norm = gamma_closed_form(2, -2) == -2 and rec[(2, -2)] == -2
    parts.append(Report("gamma(A_2, A_-2) = -2", norm, 1))
    return Report.combine("gamma-agreement", parts)


# -- extended bracket ---------------------------------------------------------


class ExtendedElement:
    """current + central * t."""

    __slots__ = ("current", "central")

    def __init__(self, current: CurrentElement | None = None, central: PolyLike = 0):
        self.current = current if current is not None else CurrentElement()
        self.central = MultiPoly.coerce(central)

    @classmethod
    def basis(cls, a: int, n: int, coeff: PolyLike = 1) -> "ExtendedElement":
        return cls(CurrentElement.basis(a, n, coeff))

    @classmethod
    def t(cls, coeff: PolyLike = 1) -> "ExtendedElement":
        return cls(None, coeff)

    def __add__(self, other: "ExtendedElement") -> "ExtendedElement":
        return ExtendedElement(self.current + other.current, self.central + other.central)

    def __neg__(self) -> "ExtendedElement":
        return ExtendedElement(-self.current, -self.central)

    def __sub__(self, other: "ExtendedElement") -> "ExtendedElement":
        return self + (-other)

    def is_zero(self) -> bool:
        return self.current.is_zero() and not self.central

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtendedElement):
            return NotImplemented
        return self.current == other.current and self.central == other.central

    def __repr__(self) -> str:
        return f"{self.current!r} + ({self.central})*t"


def scalar_cocycle(beta: BilinearForm, p: PolyLike, gamma: GammaRule) -> Callable[[CurrentElement, CurrentElement], MultiPoly]:
    """psi(x A_n, y A_m) = p * beta(x, y) * gamma(n, m), extended bilinearly."""
    p = MultiPoly.coerce(p)

    def psi(u: CurrentElement, v: CurrentElement) -> MultiPoly:
        total = ZERO
        for (a, n), cu in u.terms.items():
            for (b, m), cv in v.terms.items():
                bv = beta.on_basis(a, b)
                if bv:
                    g = gamma(n, m)
                    if g:
                        total = total + (cu * cv * g).scale(bv)
        return p * total

    return psi


def _check_form(lie: FiniteLieAlgebra, beta: BilinearForm) -> None:
    report = verify_invariance(lie, beta)
    if not report.passed:
        raise NonInvariantForm(f"bilinear form is not invariant: {report.witness}")


def _bracket(F: CurrentFamily, psi, u: ExtendedElement, v: ExtendedElement) -> ExtendedElement:
    return ExtendedElement(current_bracket(F, u.current, v.current), psi(u.current, v.current))


def extended_bracket(
    F: CurrentFamily,
    beta: BilinearForm,
    p: PolyLike,
    u: ExtendedElement,
    v: ExtendedElement,
    gamma: GammaRule | None = None,
) -> ExtendedElement:
    """[x A_n, y A_m]^ = [x, y] A_n A_m + p beta(x, y) gamma(n, m) t; t is central."""
    _check_form(F.lie, beta)
    psi = scalar_cocycle(beta, p, gamma or gamma_for_spec(F.spec))
    return _bracket(F, psi, u, v)


def verify_gamma_properties(
    window: int,
    spec: FamilySpec | None = None,
    gamma: GammaRule | None = None,
    p: PolyLike | None = None,
    lie: FiniteLieAlgebra | None = None,
    beta: BilinearForm | None = None,
    jacobi_window: int | None = None,
) -> Report:
    """Antisymmetry, locality, multiplicativity and extended Jacobi on [-N, N]."""
    spec = spec or elliptic()
    gamma = gamma or gamma_for_spec(spec)
    p = ONE if p is None else MultiPoly.coerce(p)
    lie = lie or sl2_standard()
    beta = beta or killing_form(lie)
    rng = range(-window, window + 1)
    parts = []

    checked, bad = 0, None
    for n, m in cartesian(rng, repeat=2):
        checked += 1
        if gamma(n, m) != -gamma(m, n):
            bad = (n, m)
            break
    parts.append(Report("antisymmetry", bad is None, checked, witness=bad))

    checked, bad, band = 0, None, set()
    for n, m in cartesian(rng, repeat=2):
        checked += 1
        if gamma(n, m):
            band.add(n + m)
            if n + m not in (0, 2, 4) and bad is None:
                bad = (n, m)
    parts.append(Report("locality", bad is None, checked, witness=bad, details={"levels": sorted(band)}))

    def g_lin(f: dict, k: int) -> MultiPoly:
        return sum((c * gamma(d, k) for d, c in f.items()), ZERO)

    checked, bad = 0, None
    for i, j, k in cartesian(rng, repeat=3):
        checked += 1
        total = g_lin(spec.product(i, j), k) + g_lin(spec.product(j, k), i) + g_lin(spec.product(k, i), j)
        if total:
            bad = (i, j, k)
            break
    parts.append(Report("multiplicativity", bad is None, checked, witness=bad))

    parts.append(verify_extended_jacobi(CurrentFamily(lie, spec), beta, p, gamma, jacobi_window or window))
    return Report.combine(f"gamma-properties[{spec.kind}]", parts, p=str(p))


def verify_extended_jacobi(
    F: CurrentFamily, beta: BilinearForm, p: PolyLike, gamma: GammaRule, window: int
) -> Report:
    """Jacobi for the extended bracket on all basis triples: both the current
    part and the scalar cocycle condition d2 psi = 0."""
    _check_form(F.lie, beta)
    psi = scalar_cocycle(beta, p, gamma)
    basis = F.basis(window)
    elems = {q: CurrentElement.basis(*q) for q in basis}
    checked = 0
    for x, y, z in cartesian(basis, repeat=3):
        checked += 1
        triple = (elems[x], elems[y], elems[z])
        central = lie_d2_trivial(F, psi, triple)
        if central:
            return Report("extended jacobi", False, checked, witness=(x, y, z, str(central)))
        u, v, w = triple
        cur = (
            current_bracket(F, current_bracket(F, u, v), w)
            + current_bracket(F, current_bracket(F, v, w), u)
            + current_bracket(F, current_bracket(F, w, u), v)
        )
        if not cur.is_zero():
            return Report("extended jacobi", False, checked, witness=(x, y, z))
    return Report("extended jacobi", True, checked)
