"""Commutative algebra families on the basis {A_n : n in Z}.

Every family here shares one shape of product rule::

    A_n * A_m = A_{n+m}                                   n or m even
    A_n * A_m = A_{n+m} + c2 A_{n+m-2} + c4 A_{n+m-4}     n, m both odd

and a family is fixed by the pair ``(c2, c4)`` of polynomials:

==============  =====================  =====================
kind            c2                     c4
==============  =====================  =====================
elliptic        3 e1                   (e1 - e2)(2 e1 + e2)
line_s          3 e                    e^2 (1 - s)(2 + s)
line_infinity   0                      -e
three_point     alpha^2                0
subalgebra_w    -2 alpha^2             alpha^4
laurent         0                      0
==============  =====================  =====================
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product as cartesian
from pathlib import Path
from typing import Iterable, Mapping

from .errors import InconsistentBinding, NonConstantDivision, NotOnCurve, SingularLine, TruncationTooShallow
from .exact_arith import ONE, ZERO, MultiPoly, PolyLike, Scalar, parse_poly, var
from .report import Report
from .series import basis_series

KINDS = ("elliptic", "line_s", "line_infinity", "three_point", "subalgebra_w", "laurent", "custom")


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    shift2: MultiPoly
    shift4: MultiPoly
    # per-pair replacements of (c2, c4); only used to build corrupted tables
    overrides: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        object.__setattr__(self, "_products", {})

    def _override(self, n: int, m: int) -> tuple[MultiPoly, MultiPoly, MultiPoly] | None:
        for pair, consts in self.overrides:
            if pair == (n, m):
                return consts
        return None

    def odd_constants(self, n: int, m: int) -> tuple[MultiPoly, MultiPoly]:
        o = self._override(n, m)
        return (o[1], o[2]) if o else (self.shift2, self.shift4)

    def product(self, n: int, m: int) -> dict[int, MultiPoly]:
        """Coefficients of A_n * A_m, keyed by degree."""
        cached = self._products.get((n, m))
        if cached is None:
            cached = self._products[(n, m)] = _product(self, n, m)
        return cached

    def params(self) -> set[str]:
        out = self.shift2.params() | self.shift4.params()
        for _, consts in self.overrides:
            for c in consts:
                out |= c.params()
        return out

    def corrupt(
        self,
        n: int,
        m: int,
        shift2: PolyLike | None = None,
        shift4: PolyLike | None = None,
        lead: PolyLike | None = None,
        symmetric: bool = False,
    ) -> "FamilySpec":
        """Copy in which the product A_n * A_m (and A_m * A_n when ``symmetric``)
        has the given coefficients at degrees n+m, n+m-2, n+m-4; the others keep
        their current values."""
        cur = self.product(n, m)
        d = n + m
        new = tuple(
            cur.get(j, ZERO) if v is None else MultiPoly.coerce(v)
            for j, v in ((d, lead), (d - 2, shift2), (d - 4, shift4))
        )
        entries = {(n, m), (m, n)} if symmetric else {(n, m)}
        return replace(self, kind="custom", overrides=tuple((e, new) for e in sorted(entries)) + self.overrides)

    def describe(self) -> str:
        odd = "A_{n+m}"
        if self.shift2:
            odd += f" + ({self.shift2})*A_{{n+m-2}}"
        if self.shift4:
            odd += f" + ({self.shift4})*A_{{n+m-4}}"
        return f"[{self.kind}] A_n*A_m = A_{{n+m}} (n or m even); {odd} (n, m odd)"


def _product(spec: FamilySpec, n: int, m: int) -> dict[int, MultiPoly]:
    o = spec._override(n, m)
    if o is not None:
        lead, c2, c4 = o
    elif n % 2 == 0 or m % 2 == 0:
        return {n + m: ONE}
    else:
        lead, c2, c4 = ONE, spec.shift2, spec.shift4
    return {d: c for d, c in ((n + m, lead), (n + m - 2, c2), (n + m - 4, c4)) if c}


def elliptic() -> FamilySpec:
    e1, e2 = var("e1"), var("e2")
    return FamilySpec("elliptic", 3 * e1, (e1 - e2) * (2 * e1 + e2))


def line_s(s: PolyLike | None = None) -> FamilySpec:
    """Restriction to the line e2 = s*e1 with e := e1; ``s`` symbolic unless given."""
    s = var("s") if s is None else MultiPoly.coerce(s)
    e = var("e")
    return FamilySpec("line_s", 3 * e, e * e * (1 - s) * (2 + s))


def line_infinity() -> FamilySpec:
    return FamilySpec("line_infinity", ZERO, -var("e"))


def three_point() -> FamilySpec:
    return FamilySpec("three_point", var("alpha") ** 2, ZERO)


def subalgebra_w() -> FamilySpec:
    alpha = var("alpha")
    return FamilySpec("subalgebra_w", -2 * alpha**2, alpha**4)


def laurent() -> FamilySpec:
    return FamilySpec("laurent", ZERO, ZERO)


FAMILY_BUILDERS = {
    "elliptic": elliptic,
    "lines": line_s,
    "line_s": line_s,
    "lineinfinity": line_infinity,
    "line_infinity": line_infinity,
    "threepoint": three_point,
    "three_point": three_point,
    "w": subalgebra_w,
    "subalgebra_w": subalgebra_w,
    "laurent": laurent,
}


def load_family_json(source: str | Path | dict) -> FamilySpec:
    """Family from ``{"base": "elliptic"}`` or ``{"shift2": "3*e1", "shift4": "..."}``,
    optionally followed by ``"corrupt": [{"n": 3, "m": 1, "shift2": "4*e1", "symmetric": true}]``.
    """
    data = source if isinstance(source, dict) else json.loads(Path(source).read_text(encoding="utf-8"))
    try:
        if "base" in data:
            spec = family_by_name(data["base"])
        else:
            spec = FamilySpec("custom", parse_poly(str(data["shift2"])), parse_poly(str(data["shift4"])))
        for c in data.get("corrupt", []):
            values = {k: parse_poly(str(c[k])) for k in ("shift2", "shift4", "lead") if k in c}
            spec = spec.corrupt(int(c["n"]), int(c["m"]), symmetric=bool(c.get("symmetric", False)), **values)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed family JSON: {exc}") from exc
    return spec


def family_by_name(name: str) -> FamilySpec:
    if name.lower().endswith(".json"):
        return load_family_json(name)
    try:
        return FAMILY_BUILDERS[name.lower().replace("-", "_")]()
    except KeyError:
        raise ValueError(f"unknown family {name!r}; choose from {sorted(set(FAMILY_BUILDERS))}") from None


def all_families() -> list[FamilySpec]:
    return [elliptic(), line_s(), line_infinity(), three_point(), subalgebra_w(), laurent()]


class FnElement:
    """Finite linear combination of basis functions A_n."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, PolyLike] | None = None):
        clean = {}
        for n, c in (terms or {}).items():
            c = MultiPoly.coerce(c)
            if c:
                clean[n] = c
        self.terms = clean

    @classmethod
    def basis(cls, n: int, coeff: PolyLike = 1) -> "FnElement":
        return cls({n: coeff})

    def __add__(self, other: "FnElement") -> "FnElement":
        out = dict(self.terms)
        for n, c in other.terms.items():
            out[n] = out.get(n, ZERO) + c
        return FnElement(out)

    def __neg__(self) -> "FnElement":
        return FnElement({n: -c for n, c in self.terms.items()})

    def __sub__(self, other: "FnElement") -> "FnElement":
        return self + (-other)

    def scale(self, c: PolyLike) -> "FnElement":
        c = MultiPoly.coerce(c)
        return FnElement({n: v * c for n, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FnElement):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*A_{n}" for n, c in sorted(self.terms.items(), reverse=True))


def multiply(spec: FamilySpec, f: FnElement, g: FnElement) -> FnElement:
    out: dict[int, MultiPoly] = {}
    for n, a in f.terms.items():
        for m, b in g.terms.items():
            ab = a * b
            for j, c in spec.product(n, m).items():
                out[j] = out.get(j, ZERO) + ab * c
    return FnElement(out)


def _window(N: int) -> range:
    return range(-N, N + 1)


def verify_associativity(spec: FamilySpec, window: int) -> Report:
    """Check (A_n A_m) A_k == A_n (A_m A_k) for all n, m, k in [-N, N]."""
    if window < 1:
        raise ValueError("window must be >= 1")
    checked = 0
    for n, m, k in cartesian(_window(window), repeat=3):
        a, b, c = FnElement.basis(n), FnElement.basis(m), FnElement.basis(k)
        checked += 1
        if multiply(spec, multiply(spec, a, b), c) != multiply(spec, a, multiply(spec, b, c)):
            return Report(f"associativity[{spec.kind}]", False, checked, witness=(n, m, k))
    return Report(f"associativity[{spec.kind}]", True, checked)


def verify_commutativity(spec: FamilySpec, window: int) -> Report:
    checked = 0
    for n, m in cartesian(_window(window), repeat=2):
        checked += 1
        if spec.product(n, m) != spec.product(m, n):
            return Report(f"commutativity[{spec.kind}]", False, checked, witness=(n, m))
    return Report(f"commutativity[{spec.kind}]", True, checked)


def grading_bounds_check(spec: FamilySpec, window: int) -> tuple[int, int]:
    """Tightest (R, S) with supp(A_n A_m) inside [n+m+R, n+m+S] over the window."""
    if window < 2:
        raise ValueError("window must be >= 2")
    lo, hi = 0, 0
    first = True
    for n, m in cartesian(_window(window), repeat=2):
        for j in spec.product(n, m):
            d = j - n - m
            if first:
                lo = hi = d
                first = False
            lo, hi = min(lo, d), max(hi, d)
    return lo, hi


def _classify(c2: MultiPoly, c4: MultiPoly, origin: str) -> str:
    e = var("e")
    if not c2 and not c4:
        return "laurent"
    if not c2:
        return "line_infinity"
    if not c4:
        return "three_point"
    if 4 * c4 == c2 * c2:
        return "subalgebra_w"
    if c2 == 3 * e and c4.params() <= {"e", "s"} and c4.degree("e") == 2:
        return "line_s"
    if origin == "elliptic" and c2.params() | c4.params() <= {"e1", "e2"}:
        return "elliptic"
    if not c2.params() | c4.params():
        # a single smooth fiber
        return "elliptic"
    return "custom"


def specialize_family(spec: FamilySpec, *bindings: Mapping[str, PolyLike]) -> FamilySpec:
    """Push a family forward along parameter substitutions, applied in order.

    Each mapping is substituted simultaneously; successive mappings compose,
    so ``specialize_family(elliptic(), {"e2": s*e1}, {"e1": e})`` is the
    restriction to the line D_s written in the parameter e.
    """
    c2, c4 = spec.shift2, spec.shift4
    overrides = spec.overrides
    for b in bindings:
        present = c2.params() | c4.params()
        for _, consts in overrides:
            for c in consts:
                present |= c.params()
        unknown = set(b) - present
        if unknown:
            raise InconsistentBinding(f"{spec.kind} family has no parameter(s) {sorted(unknown)} to bind")
        try:
            b = {k: MultiPoly.coerce(v) for k, v in b.items()}
        except (TypeError, ValueError) as exc:
            raise InconsistentBinding(str(exc)) from exc
        c2, c4 = c2.substitute(b), c4.substitute(b)
        overrides = tuple((pair, tuple(c.substitute(b) for c in consts)) for pair, consts in overrides)
    kind = "custom" if overrides else _classify(c2, c4, spec.kind)
    return FamilySpec(kind, c2, c4, overrides)


def rescale_check(spec: FamilySpec, window: int) -> Report:
    """Verify that A*_n = t^-n A_n with e = t^2 (line_s) or t^4 (line_infinity)
    removes e: the starred structure constants are the e = 1 constants.
    """
    if window < 2:
        raise ValueError("window must be >= 2")
    name = f"rescale[{spec.kind}]"
    if spec.kind == "line_s":
        power = 2
    elif spec.kind == "line_infinity":
        power = 4
    elif spec.kind == "laurent":
        power = 0
    else:
        raise ValueError("rescale_check needs a line_s, line_infinity or laurent family")
    t = var("t")
    sub = {"e": t**power} if power else {}
    checked = 0
    for n, m in cartesian(_window(window), repeat=2):
        target = {j: c.substitute({"e": ONE}) for j, c in spec.product(n, m).items()}
        starred = {}
        for j, c in spec.product(n, m).items():
            # A_n A_m = sum c_j A_j  =>  A*_n A*_m = sum c_j t^(j-n-m) A*_j, and j <= n+m
            try:
                starred[j] = c.substitute(sub).divide_monomial("t", n + m - j)
            except NonConstantDivision:
                return Report(name, False, checked, witness=(n, m, j))
        checked += 1
        if starred != target or any("t" in c.params() for c in starred.values()):
            return Report(name, False, checked, witness=(n, m))
    return Report(name, True, checked)


def oracle_check_structure(n: int, m: int, order: int, spec: FamilySpec | None = None) -> Report:
    """Re-derive A_n * A_m from Laurent expansions at z=0 and compare with the table."""
    spec = spec or elliptic()
    prod = basis_series(n, order) * basis_series(m, order)
    if prod.trunc < -(n + m) + 4:
        raise TruncationTooShallow(f"order {order} too small for ({n}, {m})")
    found: dict[int, MultiPoly] = {}
    rest = prod
    while True:
        lead = next(rest.items(), None)
        if lead is None:
            break
        k, c = lead
        j = -k
        basis = basis_series(j, rest.trunc)
        unit = basis.coefficient(-j).constant_value()
        coeff = c.scale(1 / unit)
        found[j] = found.get(j, ZERO) + coeff
        rest = rest - basis.scale(coeff)
    expected = spec.product(n, m)
    ok = found == expected
    return Report(
        f"structure-oracle({n},{m})",
        ok,
        1,
        witness=None if ok else {"series": found, "table": expected},
        details={"coefficients": {j: str(c) for j, c in sorted(found.items(), reverse=True)}},
    )


def _is_infinite(s) -> bool:
    return s is None or (isinstance(s, float) and math.isinf(s)) or (isinstance(s, str) and s.lower() in {"inf", "infinity", "oo"})


def j_invariant(s: Scalar | float | str | None) -> Fraction:
    """Modular invariant of the curves over the punctured line D_s (None/'inf' for D_infinity)."""
    if _is_infinite(s):
        return Fraction(1728)
    s = Fraction(s)
    den = (1 - s) ** 2 * (2 + s) ** 2 * (1 + 2 * s) ** 2
    if den == 0:
        raise SingularLine(f"s = {s}: the fibers over D_s are nodal cubics")
    return 1728 * 4 * (1 + s + s * s) ** 3 / den


def discriminant(e1: PolyLike, e2: PolyLike, e3: PolyLike):
    """16 (e1-e2)^2 (e1-e3)^2 (e2-e3)^2; rational when all inputs are."""
    p1, p2, p3 = (MultiPoly.coerce(x) for x in (e1, e2, e3))
    if not (p1 + p2 + p3).is_zero():
        raise NotOnCurve(f"e1 + e2 + e3 = {p1 + p2 + p3} != 0")
    delta = 16 * (p1 - p2) ** 2 * (p1 - p3) ** 2 * (p2 - p3) ** 2
    if all(isinstance(x, (int, Fraction)) for x in (e1, e2, e3)):
        return delta.constant_value()
    return delta


def j_from_roots(e1: Scalar, e2: Scalar) -> Fraction:
    """1728 g2^3 / Delta computed from the roots, e3 = -(e1 + e2)."""
    e1, e2 = Fraction(e1), Fraction(e2)
    e3 = -(e1 + e2)
    delta = discriminant(e1, e2, e3)
    if delta == 0:
        raise SingularLine(f"(e1, e2) = ({e1}, {e2}) gives a singular cubic")
    g2 = -4 * (e1 * e2 + e1 * e3 + e2 * e3)
    return 1728 * g2**3 / delta


def structure_rows(spec: FamilySpec, window: int) -> Iterable[tuple[int, int, int, MultiPoly]]:
    for n, m in cartesian(_window(window), repeat=2):
        for j, c in sorted(spec.product(n, m).items(), reverse=True):
            yield n, m, j, c
