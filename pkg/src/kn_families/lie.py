"""Finite-dimensional Lie algebras over Q given by structure constants.

``structure[a][b][c]`` is the coefficient of T_c in [T_a, T_b] (0-based
internally; the JSON format is 1-based).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from pathlib import Path
from typing import Sequence

from .errors import DimensionMismatch, InvalidLieAlgebra
from .report import Report

Table = tuple[tuple[tuple[Fraction, ...], ...], ...]


def _freeze(structure) -> Table:
    return tuple(tuple(tuple(Fraction(v) for v in row) for row in plane) for plane in structure)


@dataclass(frozen=True)
class FiniteLieAlgebra:
    dim: int
    structure: Table
    names: tuple[str, ...] = ()
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "structure", _freeze(self.structure))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"T{a + 1}" for a in range(self.dim)))
        shape_ok = len(self.structure) == self.dim and all(
            len(plane) == self.dim and all(len(row) == self.dim for row in plane) for plane in self.structure
        )
        if not shape_ok or len(self.names) != self.dim:
            raise DimensionMismatch(f"structure table is not {self.dim}x{self.dim}x{self.dim}")
        if self.validate:
            report = verify_lie_axioms(self)
            if not report.passed:
                raise InvalidLieAlgebra(f"{report.name} failed at {report.witness}")

    def bracket_basis(self, a: int, b: int) -> dict[int, Fraction]:
        return _bracket_basis(self, a, b)

    def basis_vector(self, a: int) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        v[a] = Fraction(1)
        return v

    def index(self, name: str) -> int:
        return self.names.index(name)


def _bracket_basis(L: FiniteLieAlgebra, a: int, b: int) -> dict[int, Fraction]:
    cache = L.__dict__.setdefault("_bracket_cache", {})
    key = (a, b)
    if key not in cache:
        cache[key] = {c: v for c, v in enumerate(L.structure[a][b]) if v}
    return cache[key]


def bracket_fd(L: FiniteLieAlgebra, x: Sequence, y: Sequence) -> list[Fraction]:
    if len(x) != L.dim or len(y) != L.dim:
        raise DimensionMismatch(f"expected vectors of length {L.dim}")
    out = [Fraction(0)] * L.dim
    for a, xa in enumerate(x):
        if not xa:
            continue
        for b, yb in enumerate(y):
            if not yb:
                continue
            for c, v in L.bracket_basis(a, b).items():
                out[c] += Fraction(xa) * Fraction(yb) * v
    return out


def verify_lie_axioms(L: FiniteLieAlgebra) -> Report:
    """Antisymmetry C_ab^c + C_ba^c = 0 and the cyclic Jacobi sums, exhaustively."""
    n, C = L.dim, L.structure
    checked = 0
    for a, b, c in cartesian(range(n), repeat=3):
        checked += 1
        if C[a][b][c] + C[b][a][c] != 0:
            return Report("lie-axioms: antisymmetry", False, checked, witness=(a + 1, b + 1, c + 1))
    for a, b, c, d in cartesian(range(n), repeat=4):
        checked += 1
        total = sum(
            C[a][b][l] * C[l][c][d] + C[b][c][l] * C[l][a][d] + C[c][a][l] * C[l][b][d] for l in range(n)
        )
        if total != 0:
            return Report("lie-axioms: jacobi", False, checked, witness=(a + 1, b + 1, c + 1, d + 1))
    return Report("lie-axioms", True, checked)


@dataclass(frozen=True)
class BilinearForm:
    matrix: tuple[tuple[Fraction, ...], ...]

    def __call__(self, x: Sequence, y: Sequence) -> Fraction:
        return sum(
            (Fraction(xa) * self.matrix[a][b] * Fraction(yb) for a, xa in enumerate(x) for b, yb in enumerate(y)),
            Fraction(0),
        )

    def on_basis(self, a: int, b: int) -> Fraction:
        return self.matrix[a][b]

    def is_symmetric(self) -> bool:
        n = len(self.matrix)
        return all(self.matrix[a][b] == self.matrix[b][a] for a in range(n) for b in range(n))

    def determinant(self) -> Fraction:
        m = [list(row) for row in self.matrix]
        n = len(m)
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col]), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
                det = -det
            det *= m[col][col]
            for r in range(col + 1, n):
                f = m[r][col] / m[col][col]
                for k in range(col, n):
                    m[r][k] -= f * m[col][k]
        return det


def killing_form(L: FiniteLieAlgebra) -> BilinearForm:
    """kappa(T_a, T_b) = tr(ad T_a ad T_b) = sum_{c,d} C_ad^c C_bc^d."""
    n, C = L.dim, L.structure
    return BilinearForm(
        tuple(
            tuple(sum((C[a][d][c] * C[b][c][d] for c in range(n) for d in range(n)), Fraction(0)) for b in range(n))
            for a in range(n)
        )
    )


def verify_invariance(L: FiniteLieAlgebra, B: BilinearForm) -> Report:
    """Symmetry and beta([x,y],z) == beta(x,[y,z]) on all basis triples."""
    n = L.dim
    if not B.is_symmetric():
        return Report("invariance", False, 0, witness="form is not symmetric")
    checked = 0
    for a, b, c in cartesian(range(n), repeat=3):
        checked += 1
        lhs = sum((v * B.matrix[d][c] for d, v in L.bracket_basis(a, b).items()), Fraction(0))
        rhs = sum((v * B.matrix[a][d] for d, v in L.bracket_basis(b, c).items()), Fraction(0))
        if lhs != rhs:
            return Report("invariance", False, checked, witness=(a + 1, b + 1, c + 1))
    return Report("invariance", True, checked)


def from_entries(dim: int, entries, names: Sequence[str] = (), validate: bool = True) -> FiniteLieAlgebra:
    """Build from sparse 1-based entries ``(a, b, c, value)``; omitted entries are 0."""
    table = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for a, b, c, value in entries:
        if not all(1 <= i <= dim for i in (a, b, c)):
            raise DimensionMismatch(f"index out of range in entry {(a, b, c)}")
        table[a - 1][b - 1][c - 1] = Fraction(value)
    return FiniteLieAlgebra(dim, table, tuple(names), validate=validate)


def load_lie_json(source: str | Path | dict, validate: bool = True) -> FiniteLieAlgebra:
    """Read ``{"dim": n, "entries": [{"a":1,"b":2,"c":3,"value":"1/2"}, ...]}``."""
    if isinstance(source, dict):
        data = source
    else:
        data = json.loads(Path(source).read_text(encoding="utf-8"))
    try:
        dim = int(data["dim"])
        entries = [(int(e["a"]), int(e["b"]), int(e["c"]), Fraction(str(e["value"]))) for e in data.get("entries", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidLieAlgebra(f"malformed Lie algebra JSON: {exc}") from exc
    return from_entries(dim, entries, data.get("names", ()), validate=validate)


def sl2_standard() -> FiniteLieAlgebra:
    """sl(2) on the basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    h, e, f = 1, 2, 3
    return from_entries(
        3,
        [(h, e, e, 2), (e, h, e, -2), (h, f, f, -2), (f, h, f, 2), (e, f, h, 1), (f, e, h, -1)],
        names=("h", "e", "f"),
    )


def abelian(dim: int) -> FiniteLieAlgebra:
    return from_entries(dim, [])


def lie_by_name(name: str) -> FiniteLieAlgebra:
    if name.lower() == "sl2":
        return sl2_standard()
    if name.lower().startswith("abelian"):
        return abelian(int(name[len("abelian"):] or 1))
    return load_lie_json(name)
