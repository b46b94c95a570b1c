"""Exact sparse multivariate polynomials over Q in a fixed parameter alphabet.

Every structure constant and cocycle value in the package lives in this
ring.  Rationals are :class:`fractions.Fraction`; a polynomial is a map from
exponent vectors (one slot per parameter in :data:`PARAMS`) to non-zero
coefficients, so equality of canonical forms is equality of polynomials.

>>> e1, e2 = var("e1"), var("e2")
>>> str((e1 - e2) * (2 * e1 + e2))
'-e1*e2 + 2*e1^2 - e2^2'
"""
from __future__ import annotations

import ast
from fractions import Fraction
from typing import Mapping, Union

from .errors import NonConstantDivision

PARAMS: tuple[str, ...] = ("e1", "e2", "e", "s", "alpha", "a", "b", "t", "g2", "g3")
_INDEX = {name: i for i, name in enumerate(PARAMS)}
_NPARAMS = len(PARAMS)
_ONE_EXP = (0,) * _NPARAMS

Scalar = Union[int, Fraction]
PolyLike = Union["MultiPoly", int, Fraction]


def _check_param(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise ValueError(f"unknown parameter {name!r}; allowed: {', '.join(PARAMS)}") from None


class MultiPoly:
    """Immutable polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], Scalar] | None = None):
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, c in (terms or {}).items():
            if len(exp) != _NPARAMS or any(k < 0 for k in exp):
                raise ValueError(f"bad exponent vector {exp!r}")
            c = Fraction(c)
            if c:
                clean[tuple(exp)] = clean.get(tuple(exp), Fraction(0)) + c
        self._terms = {k: v for k, v in clean.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "MultiPoly":
        # caller guarantees canonical form (no zero coefficients)
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "MultiPoly":
        c = Fraction(c)
        return cls._raw({_ONE_EXP: c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MultiPoly":
        exp = [0] * _NPARAMS
        exp[_check_param(name)] = power
        return cls._raw({tuple(exp): Fraction(1)})

    @classmethod
    def coerce(cls, x: PolyLike) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to MultiPoly")

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _ONE_EXP in self._terms)

    def constant_value(self) -> Fraction:
        """Return the value of a constant polynomial; raise otherwise."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(_ONE_EXP, Fraction(0))

    def params(self) -> set[str]:
        out = set()
        for exp in self._terms:
            out.update(PARAMS[i] for i, k in enumerate(exp) if k)
        return out

    def degree(self, name: str) -> int:
        """Degree in one parameter; -1 for the zero polynomial."""
        i = _check_param(name)
        return max((exp[i] for exp in self._terms), default=-1)

    def coefficient(self, name: str, k: int) -> "MultiPoly":
        """Coefficient of ``name**k`` viewing the polynomial as univariate in ``name``."""
        i = _check_param(name)
        out = {}
        for exp, c in self._terms.items():
            if exp[i] == k:
                e = list(exp)
                e[i] = 0
                out[tuple(e)] = c
        return MultiPoly._raw(out)

    def monomials(self) -> list[tuple[list[tuple[str, int]], Fraction]]:
        """Terms as ``(sorted [(name, exponent)], coefficient)`` in canonical order."""
        rows = []
        for exp, c in self._terms.items():
            mono = sorted((PARAMS[i], k) for i, k in enumerate(exp) if k)
            rows.append((mono, c))
        rows.sort(key=lambda r: r[0])
        return rows

    # -- ring operations --------------------------------------------------

    def __add__(self, other: PolyLike) -> "MultiPoly":
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for exp, c in other._terms.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({k: -v for k, v in self._terms.items()})

    def __pos__(self) -> "MultiPoly":
        return self

    def __sub__(self, other: PolyLike) -> "MultiPoly":
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: PolyLike) -> "MultiPoly":
        return MultiPoly.coerce(other) - self

    def __mul__(self, other: PolyLike) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if not self._terms or not other._terms:
            return MultiPoly._raw({})
        if other.is_constant():
            return self.scale(other._terms[_ONE_EXP])
        if self.is_constant():
            return other.scale(self._terms[_ONE_EXP])
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                out[exp] = out.get(exp, 0) + c1 * c2
        return MultiPoly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "MultiPoly":
        c = Fraction(c)
        if not c:
            return MultiPoly._raw({})
        if c == 1:
            return self
        return MultiPoly._raw({k: v * c for k, v in self._terms.items()})

    def __truediv__(self, other: PolyLike) -> "MultiPoly":
        other = MultiPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if not other.is_constant():
            raise NonConstantDivision(f"cannot divide by {other}")
        return self.scale(1 / other.constant_value())

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divide_monomial(self, name: str, k: int) -> "MultiPoly":
        """Exact division by ``name**k``; raises if some term is not divisible."""
        i = _check_param(name)
        out = {}
        for exp, c in self._terms.items():
            if exp[i] < k:
                raise NonConstantDivision(f"{self} is not divisible by {name}^{k}")
            e = list(exp)
            e[i] -= k
            out[tuple(e)] = c
        return MultiPoly._raw(out)

    # -- homomorphisms ----------------------------------------------------

    def substitute(self, bindings: Mapping[str, PolyLike]) -> "MultiPoly":
        """Replace parameters by polynomials; unbound parameters stay as they are."""
        if not bindings:
            return self
        targets = {_check_param(k): MultiPoly.coerce(v) for k, v in bindings.items()}
        powers: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, k: int) -> MultiPoly:
            key = (i, k)
            if key not in powers:
                powers[key] = targets[i] ** k
            return powers[key]

        result = MultiPoly._raw({})
        for exp, c in self._terms.items():
            rest = list(exp)
            factor = MultiPoly.const(c)
            for i in targets:
                if exp[i]:
                    factor = factor * power(i, exp[i])
                    rest[i] = 0
            result = result + factor * MultiPoly._raw({tuple(rest): Fraction(1)})
        return result

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        missing = self.params() - set(point)
        if missing:
            raise ValueError(f"point does not bind {sorted(missing)}")
        return self.substitute({k: Fraction(v) for k, v in point.items()}).constant_value()

    # -- comparison / display ---------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.monomials():
            m = "*".join(name if k == 1 else f"{name}^{k}" for name, k in mono)
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append(f"{c}*{m}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({str(self)!r})"


def var(name: str) -> MultiPoly:
    return MultiPoly.var(name)


def const(c: Scalar) -> MultiPoly:
    return MultiPoly.const(c)


ZERO = MultiPoly.const(0)
ONE = MultiPoly.const(1)


def poly_arith(op: str, p: PolyLike, q: PolyLike | None = None) -> MultiPoly:
    """Dispatch a ring operation by name: add, sub, mul, neg or pow."""
    p = MultiPoly.coerce(p)
    if op == "neg":
        return -p
    if op == "pow":
        if not isinstance(q, int) or q < 0:
            raise ValueError("pow needs a non-negative integer exponent")
        return p**q
    q = MultiPoly.coerce(q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def poly_substitute(p: PolyLike, bindings: Mapping[str, PolyLike]) -> MultiPoly:
    return MultiPoly.coerce(p).substitute(bindings)


def poly_eval(p: PolyLike, point: Mapping[str, Scalar]) -> Fraction:
    return MultiPoly.coerce(p).evaluate(point)


def substitute_square(p: PolyLike, name: str, value: PolyLike) -> MultiPoly:
    """Substitute ``name**2 -> value`` in a polynomial that is even in ``name``.

    This is how the square roots in the degeneration identifications (for
    instance alpha = i*sqrt(3e/2)) are handled without leaving Q[params].
    """
    p = MultiPoly.coerce(p)
    value = MultiPoly.coerce(value)
    i = _check_param(name)
    result = ZERO
    for exp, c in p.terms.items():
        if exp[i] % 2:
            raise ValueError(f"{p} has an odd power of {name}")
        rest = list(exp)
        rest[i] = 0
        result = result + MultiPoly({tuple(rest): c}) * value ** (exp[i] // 2)
    return result


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div)


def parse_poly(text: str) -> MultiPoly:
    """Parse text such as ``'(e1-e2)*(2*e1+e2)'`` or ``'3/2*alpha^2'``.

    Accepts integers, parameter names, ``+ - * /`` (division by constants
    only), ``^`` or ``**`` with non-negative integer exponents, and parentheses.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}") from exc

    def ev(node: ast.AST) -> MultiPoly:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return MultiPoly.const(node.value)
        if isinstance(node, ast.Name):
            return MultiPoly.var(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
            k = right.constant_value() if right.is_constant() else None
            if k is None or k.denominator != 1 or k < 0:
                raise ValueError(f"bad exponent in {text!r}")
            return left ** int(k)
        raise ValueError(f"unsupported syntax in {text!r}")

    return ev(tree)


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())

