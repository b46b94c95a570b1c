"""Truncated Laurent series in z with polynomial coefficients.

Used to expand the Weierstrass function and the basis functions
``A_{2k} = (wp - e1)^k`` and ``A_{2k+1} = 1/2 wp' (wp - e1)^(k-1)`` at
``z = 0``; residues of these expansions give an independent check of the
algebra structure constants and of the extension cocycle.

A series carries an inclusive truncation order ``trunc``: coefficients of
``z^k`` for ``k > trunc`` are unknown, and every operation returns the
tightest order it can guarantee.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import InversionLeadingNonUnit, TruncationTooShallow
from .exact_arith import ONE, ZERO, MultiPoly, PolyLike, var


class LaurentSeries:
    """``sum(coeffs[i] * z**(low + i))  + O(z**(trunc + 1))``."""

    __slots__ = ("low", "coeffs", "trunc")

    def __init__(self, low: int, coeffs: Sequence[PolyLike], trunc: int):
        coeffs = [MultiPoly.coerce(c) for c in coeffs[: max(trunc - low + 1, 0)]]
        if trunc < low:
            # nothing is known below the truncation; represent as zero at trunc
            low, coeffs = trunc, [ZERO]
        coeffs += [ZERO] * (trunc - low + 1 - len(coeffs))
        # strip leading zeros, keeping at least one slot
        k = 0
        while k < len(coeffs) - 1 and coeffs[k].is_zero():
            k += 1
        self.low = low + k
        self.coeffs = tuple(coeffs[k:])
        self.trunc = trunc

    @classmethod
    def monomial(cls, k: int, coeff: PolyLike = 1, trunc: int | None = None) -> "LaurentSeries":
        if trunc is None:
            trunc = k
        return cls(k, [coeff], trunc)

    @classmethod
    def from_dict(cls, terms: Mapping[int, PolyLike], trunc: int) -> "LaurentSeries":
        low = min(terms, default=trunc)
        coeffs = [terms.get(k, ZERO) for k in range(low, trunc + 1)]
        return cls(low, coeffs, trunc)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def coefficient(self, k: int) -> MultiPoly:
        if k > self.trunc:
            raise TruncationTooShallow(f"z^{k} lies beyond truncation order {self.trunc}")
        if k < self.low:
            return ZERO
        return self.coeffs[k - self.low]

    def items(self):
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                yield self.low + i, c

    def truncate(self, trunc: int) -> "LaurentSeries":
        if trunc > self.trunc:
            raise TruncationTooShallow(f"cannot extend truncation {self.trunc} to {trunc}")
        return LaurentSeries(self.low, self.coeffs, trunc)

    def map_coefficients(self, fn) -> "LaurentSeries":
        return LaurentSeries(self.low, [fn(c) for c in self.coeffs], self.trunc)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        trunc = min(self.trunc, other.trunc)
        low = min(self.low, other.low)
        coeffs = []
        for k in range(low, trunc + 1):
            a = self.coeffs[k - self.low] if self.low <= k else ZERO
            b = other.coeffs[k - other.low] if other.low <= k else ZERO
            coeffs.append(a + b)
        return LaurentSeries(low, coeffs, trunc)

    def __neg__(self) -> "LaurentSeries":
        return self.map_coefficients(lambda c: -c)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, c: PolyLike) -> "LaurentSeries":
        c = MultiPoly.coerce(c)
        return self.map_coefficients(lambda x: x * c)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        low = self.low + other.low
        trunc = min(self.trunc + other.low, other.trunc + self.low)
        a, b = self.coeffs, other.coeffs
        coeffs = []
        for k in range(trunc - low + 1):
            acc = ZERO
            for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
                if a[i] and b[k - i]:
                    acc = acc + a[i] * b[k - i]
            coeffs.append(acc)
        return LaurentSeries(low, coeffs, trunc)

    __rmul__ = __mul__

    def invert(self) -> "LaurentSeries":
        lead = self.coeffs[0]
        if lead.is_zero() or not lead.is_constant():
            raise InversionLeadingNonUnit(f"leading coefficient {lead} is not a nonzero rational")
        inv0 = 1 / lead.constant_value()
        precision = self.trunc - self.low
        c = self.coeffs
        out = [MultiPoly.const(inv0)]
        for j in range(1, precision + 1):
            acc = ZERO
            for i in range(1, j + 1):
                if c[i] and out[j - i]:
                    acc = acc + c[i] * out[j - i]
            out.append(acc.scale(-inv0))
        return LaurentSeries(-self.low, out, -self.low + precision)

    def __pow__(self, n: int) -> "LaurentSeries":
        if n < 0:
            return self.invert() ** (-n)
        result = LaurentSeries(0, [ONE], self.trunc - self.low)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self) -> "LaurentSeries":
        coeffs = [c.scale(self.low + i) for i, c in enumerate(self.coeffs)]
        return LaurentSeries(self.low - 1, coeffs, self.trunc - 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.low, self.coeffs, self.trunc) == (other.low, other.coeffs, other.trunc)

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*z^{k}" for k, c in self.items()) or "0"
        return f"LaurentSeries({body} + O(z^{self.trunc + 1}))"


def series_arith(op: str, s: LaurentSeries, t: LaurentSeries | int | None = None) -> LaurentSeries:
    """Name-dispatched series operation: add, mul, invert, pow or derivative."""
    if op == "add":
        return s + t
    if op == "mul":
        return s * t
    if op == "invert":
        return s.invert()
    if op == "pow":
        return s**t
    if op == "derivative":
        return s.derivative()
    raise ValueError(f"unknown op {op!r}")


def residue(ser: LaurentSeries) -> MultiPoly:
    """Coefficient of ``z**-1``."""
    if ser.trunc < -1:
        raise TruncationTooShallow(f"series known only to z^{ser.trunc}")
    return ser.coefficient(-1)


@lru_cache(maxsize=None)
def _wp_coefficients(count: int) -> tuple[MultiPoly, ...]:
    # wp = z^-2 + sum_{k>=1} c_k z^(2k).  Comparing z^(2k-2) in wp'' = 6 wp^2 - g2/2
    # gives (2k+3)(2k-4) c_k = 6 sum_{i+j=k-1} c_i c_j, which fixes c_1 and all
    # c_k with k >= 3; at k = 2 it degenerates and the constant term of
    # (wp')^2 = 4 wp^3 - g2 wp - g3 gives -16 c_2 = 12 c_2 - g3 instead.
    g2, g3 = var("g2"), var("g3")
    c: list[MultiPoly] = [ZERO]
    for k in range(1, count + 1):
        if k == 1:
            c.append(g2 / 20)
        elif k == 2:
            c.append(g3 / 28)
        else:
            acc = ZERO
            for i in range(1, k - 1):
                acc = acc + c[i] * c[k - 1 - i]
            c.append(acc * Fraction(6, (2 * k + 3) * (2 * k - 4)))
    return tuple(c[1:])


def wp_series(order: int) -> LaurentSeries:
    """Weierstrass wp at z=0 up to and including z**order, in symbolic g2, g3."""
    if order < 4:
        raise ValueError("order must be at least 4")
    cs = _wp_coefficients(order // 2)
    terms = {-2: ONE}
    for k, ck in enumerate(cs, start=1):
        terms[2 * k] = ck
    return LaurentSeries.from_dict(terms, order)


def weierstrass_invariants() -> dict[str, MultiPoly]:
    """g2, g3 in terms of e1, e2 with e3 = -(e1 + e2)."""
    e1, e2 = var("e1"), var("e2")
    e3 = -(e1 + e2)
    return {"g2": -4 * (e1 * e2 + e1 * e3 + e2 * e3), "g3": 4 * e1 * e2 * e3}


@lru_cache(maxsize=None)
def _basis_series_elliptic(n: int, order: int) -> LaurentSeries:
    # relative precision of every intermediate series is wp_order + 2
    wp_order = max(order + n, 0) + 4
    inv = weierstrass_invariants()
    wp = wp_series(wp_order).map_coefficients(lambda c: c.substitute(inv))
    shifted = wp - LaurentSeries.monomial(0, var("e1"), wp.trunc)
    if n % 2 == 0:
        ser = shifted ** (n // 2)
    else:
        k = (n - 1) // 2
        ser = wp.derivative().scale(Fraction(1, 2)) * shifted ** (k - 1)
    return ser.truncate(order)


def basis_series(n: int, order: int, e_bindings: Mapping[str, PolyLike] | None = None) -> LaurentSeries:
    """Expansion of the basis function A_n at z=0 through z**order.

    Coefficients are polynomials in e1, e2 (g2, g3, e3 eliminated); optional
    ``e_bindings`` are substituted afterwards, e.g. ``{"e2": s*e1}``.
    """
    ser = _basis_series_elliptic(n, order)
    if e_bindings:
        ser = ser.map_coefficients(lambda c: c.substitute(e_bindings))
    return ser
