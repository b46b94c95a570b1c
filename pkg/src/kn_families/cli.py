"""Command-line front end: tables, verification suites, specialisation.

Exit codes: 0 all checks pass, 2 a mathematical check failed, 1 usage or I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from pathlib import Path

from .cochains import omega_shift2, omega_shift4, deformation_differential, trivializing_map, verify_coboundary, verify_harrison
from .currents import CurrentFamily, _basis_bracket, degeneration_identifications, verify_almost_grading, verify_jacobi
from .errors import KNError, RecursionInconsistent, SingularLine
from .exact_arith import MultiPoly, parse_poly, var
from .extensions import (
    gamma_for_spec,
    gamma_recursion,
    gamma_residue_oracle,
    gamma_singular,
    residue_window_order,
    verify_gamma_agreement,
    verify_gamma_properties,
)
from .families import (
    FamilySpec,
    discriminant,
    family_by_name,
    grading_bounds_check,
    j_from_roots,
    j_invariant,
    line_infinity,
    line_s,
    rescale_check,
    specialize_family,
    structure_rows,
    verify_associativity,
    verify_commutativity,
)
from .lie import FiniteLieAlgebra, lie_by_name
from .report import Report

SUITES = ("associativity", "jacobi", "gamma-agreement", "gamma-properties", "coboundary", "harrison", "rescale", "degeneration", "grading")
EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    spec: FamilySpec
    window: int = 6
    order: int = 20
    output_format: str = "csv"
    output_path: Path | None = None
    lie: FiniteLieAlgebra | None = None


def _is_inf(text: str) -> bool:
    return text.strip().lower() in {"inf", "infinity", "oo"}


def _bindings(args) -> dict[str, MultiPoly]:
    out = {}
    for name in ("e1", "e2", "e", "alpha"):
        text = getattr(args, name)
        if text is not None:
            out[name] = parse_poly(text)
    return out


def _line(text: str) -> FamilySpec:
    return line_infinity() if _is_inf(text) else specialize_family(line_s(), {"s": parse_poly(text)})


def build_spec(args) -> FamilySpec:
    if args.s is not None and args.spec is None:
        base = _line(args.s)
    else:
        base = family_by_name(args.spec or "elliptic")
        if args.s is not None:
            if base.kind != "line_s":
                raise UsageError("--s only applies to the line_s family")
            base = _line(args.s)
    bindings = _bindings(args)
    return specialize_family(base, bindings) if bindings else base


def build_config(args) -> RunConfig:
    if args.window < 1:
        raise UsageError("--window must be >= 1")
    return RunConfig(
        command=args.command,
        spec=build_spec(args),
        window=args.window,
        order=args.order,
        output_format=args.format,
        output_path=Path(args.out) if args.out else None,
        lie=lie_by_name(args.lie),
    )


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output_path is None:
        sys.stdout.write(text)
        return
    try:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {cfg.output_path}: {exc}") from exc


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# -- tables ---------------------------------------------------------------------


def _products_table(cfg: RunConfig) -> str:
    rows = [(n, m, j, str(c)) for n, m, j, c in structure_rows(cfg.spec, cfg.window)]
    if cfg.output_format == "csv":
        return _csv(["n", "m", "j", "coefficient"], rows)
    grouped: dict = {}
    for n, m, j, c in rows:
        grouped.setdefault((n, m), []).append({"degree": j, "poly": c})
    return _json([{"n": n, "m": m, "coeffs": coeffs} for (n, m), coeffs in grouped.items()])


def _brackets_table(cfg: RunConfig) -> str:
    F = CurrentFamily(cfg.lie, cfg.spec)
    rng = range(-cfg.window, cfg.window + 1)
    entries = []
    for a, n, b, m in cartesian(range(F.lie.dim), rng, range(F.lie.dim), rng):
        terms = sorted(_basis_bracket(F, a, n, b, m).terms.items())
        entries.append((a + 1, n, b + 1, m, [(c + 1, j, str(v)) for (c, j), v in terms]))
    if cfg.output_format == "csv":
        rows = [(a, n, b, m, c, j, v) for a, n, b, m, terms in entries for c, j, v in terms]
        return _csv(["a", "n", "b", "m", "c", "j", "coefficient"], rows)
    return _json(
        [
            {"a": a, "n": n, "b": b, "m": m, "terms": [{"c": c, "degree": j, "poly": v} for c, j, v in terms]}
            for a, n, b, m, terms in entries
        ]
    )


def _gamma_table(cfg: RunConfig, route: str) -> str:
    N = cfg.window
    pairs = list(cartesian(range(-N, N + 1), repeat=2))
    if route == "closed":
        rule = gamma_for_spec(cfg.spec)
        values = {k: rule(*k) for k in pairs}
    elif route == "residue":
        if cfg.spec.kind != "elliptic" or cfg.spec.overrides:
            raise UsageError("the residue route expands the elliptic basis; use --spec elliptic")
        _require_order(cfg)
        values = {k: gamma_residue_oracle(*k, cfg.order) for k in pairs}
    elif route == "recursion":
        values = gamma_recursion(cfg.spec.shift2, cfg.spec.shift4, N, product=cfg.spec.product)
    else:
        raise UsageError(f"unknown route {route!r}")
    rows = [(n, m, str(values[(n, m)]), route) for n, m in pairs]
    if cfg.output_format == "csv":
        return _csv(["n", "m", "gamma", "route"], rows)
    return _json([{"n": n, "m": m, "gamma": g, "route": r} for n, m, g, r in rows])


def _require_order(cfg: RunConfig) -> None:
    need = residue_window_order(cfg.window)
    if cfg.order < need:
        raise UsageError(f"--order must be >= 2*window+8 = {need} for the residue oracle")


def cmd_tables(cfg: RunConfig, what: str, route: str) -> int:
    if what == "products":
        text = _products_table(cfg)
    elif what == "brackets":
        text = _brackets_table(cfg)
    else:
        text = _gamma_table(cfg, route)
    _emit(cfg, text)
    return EXIT_OK


# -- verify -----------------------------------------------------------------------


def _verify_degeneration(cfg: RunConfig) -> Report:
    N = cfg.window
    parts = [degeneration_identifications(max(N, 2), cfg.lie)]
    alpha = var("alpha")
    for case, (a, b) in (("three_point", (alpha**2, 0)), ("W_family", (-2 * alpha**2, alpha**4))):
        table = gamma_recursion(a, b, N)
        bad = next((k for k in sorted(table) if table[k] != gamma_singular(case, *k)), None)
        parts.append(Report(f"gamma_singular[{case}] = recursion", bad is None, len(table), witness=bad))
    return Report.combine("degeneration", parts)


def _verify_coboundary(cfg: RunConfig) -> Report:
    N, lie = cfg.window, cfg.lie
    scalar2 = deformation_differential(line_s()).shifts[0][1]
    scalar4 = deformation_differential(line_infinity()).shifts[0][1]
    return Report.combine(
        "coboundary",
        [
            verify_coboundary(omega_shift2(), trivializing_map(-2), N, lie),
            verify_coboundary(omega_shift4(), trivializing_map(-4), N, lie),
        ],
        line_s_scalar=str(scalar2),
        line_infinity_scalar=str(scalar4),
    )


def _verify_grading(cfg: RunConfig) -> Report:
    R, S = grading_bounds_check(cfg.spec, max(cfg.window, 2))
    ok = -4 <= R <= S <= 0
    parts = [
        Report("function product band within [-4, 0]", ok, 1, witness=None if ok else (R, S), details={"R": R, "S": S}),
        verify_almost_grading(CurrentFamily(cfg.lie, cfg.spec), cfg.window),
    ]
    return Report.combine("grading", parts)


def run_suite(cfg: RunConfig, suite: str, p: MultiPoly) -> Report:
    spec, N = cfg.spec, cfg.window
    if suite == "associativity":
        return Report.combine("associativity", [verify_associativity(spec, N), verify_commutativity(spec, N)])
    if suite == "jacobi":
        return verify_jacobi(CurrentFamily(cfg.lie, spec), N)
    if suite == "gamma-agreement":
        _require_order(cfg)
        return verify_gamma_agreement(N, cfg.order, spec=spec)
    if suite == "gamma-properties":
        return verify_gamma_properties(N, spec, p=p, lie=cfg.lie)
    if suite == "coboundary":
        return _verify_coboundary(cfg)
    if suite == "harrison":
        return verify_harrison(N)
    if suite == "rescale":
        targets = [spec] if spec.kind in ("line_s", "line_infinity") else [line_s(), line_infinity()]
        return Report.combine("rescale", [rescale_check(t, N) for t in targets])
    if suite == "degeneration":
        return _verify_degeneration(cfg)
    if suite == "grading":
        return _verify_grading(cfg)
    raise UsageError(f"unknown suite {suite!r}")


def cmd_verify(cfg: RunConfig, suite: str, p: MultiPoly) -> int:
    report = run_suite(cfg, suite, p)
    _emit(cfg, str(report) + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


# -- specialize -------------------------------------------------------------------


def _numeric(p: MultiPoly) -> Fraction | None:
    return p.constant_value() if p.is_constant() else None


def _fiber_invariants(args, spec: FamilySpec) -> tuple[list[str], list[str]]:
    """(lines, warnings) describing j and Delta when the fiber is determined."""
    lines, warnings = [], []
    b = _bindings(args)
    singular_kinds = {"three_point", "subalgebra_w", "laurent"}
    if args.s is not None and args.spec is None:
        if _is_inf(args.s):
            lines.append("j = 1728")
            e = _numeric(b["e"]) if "e" in b else None
            if e is not None:
                delta = 64 * e**3
                lines.append(f"Delta = {delta}")
                if delta == 0:
                    warnings.append("singular fiber: Delta = 0")
            return lines, warnings
        s = _numeric(parse_poly(args.s))
        if s is None:
            return lines, warnings
        try:
            lines.append(f"j = {j_invariant(s)}")
        except SingularLine as exc:
            warnings.append(f"singular line: {exc}")
        e = _numeric(b["e"]) if "e" in b else None
        if e is not None:
            delta = discriminant(e, s * e, -(1 + s) * e)
            lines.append(f"Delta = {delta}")
            if delta == 0:
                warnings.append("singular fiber: Delta = 0")
        return lines, warnings
    e1 = _numeric(b["e1"]) if "e1" in b else None
    e2 = _numeric(b["e2"]) if "e2" in b else None
    if spec.kind in singular_kinds or (e1 is not None and e2 is not None):
        if e1 is not None and e2 is not None:
            delta = discriminant(e1, e2, -(e1 + e2))
            lines.append(f"Delta = {delta}")
            if delta:
                lines.append(f"j = {j_from_roots(e1, e2)}")
        if spec.kind in singular_kinds or (e1 is not None and e2 is not None and delta == 0):
            warnings.append(f"singular fiber ({spec.kind}): Delta = 0")
    return lines, warnings


def cmd_specialize(cfg: RunConfig, args) -> int:
    lines = [f"kind: {cfg.spec.kind}", f"rule: {cfg.spec.describe()}"]
    inv, warnings = _fiber_invariants(args, cfg.spec)
    lines.extend(inv)
    lines.extend(f"warning: {w}" for w in warnings)
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--spec", default=None, help="family: elliptic, lines, lineinfinity, threepoint, w, laurent")
    common.add_argument("--lie", default="sl2", help="sl2, abelianN, or a JSON structure-constant file")
    common.add_argument("--window", type=int, default=6)
    common.add_argument("--order", type=int, default=20)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None)
    for name in ("s", "e", "e1", "e2", "alpha"):
        common.add_argument(f"--{name}", default=None)
    common.add_argument("--p", default="1", help="scaling polynomial of the central term")

    parser = _Parser(prog="kn-families", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    t = sub.add_parser("tables", parents=[common], help="structure constants, brackets or cocycle values")
    t.add_argument("--what", choices=("products", "brackets", "gamma"), default="products")
    t.add_argument("--route", choices=("closed", "residue", "recursion"), default="closed")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    sub.add_parser("specialize", parents=[common], help="push a family to a point or line")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "tables":
            return cmd_tables(cfg, args.what, args.route)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite, parse_poly(args.p))
        return cmd_specialize(cfg, args)
    except RecursionInconsistent as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, KNError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
