"""Command-line front end.

    torsionhelp validate    --group A5
    torsionhelp check       --group A5 --all
    torsionhelp check       --group A5 --order 5 --characters chi3
    torsionhelp spectrum    --group S5
    torsionhelp prime-graph --group S5
    torsionhelp examples    a5-order5

Exit codes: 0 all requested verdicts positive / valid, 1 inconclusive or
critical results, 2 input or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import help_core as hc
from .group_data import (
    SHIPPED_GROUPS,
    CharacterTable,
    ParseError,
    SchemaError,
    exponent,
    load_shipped,
    load_table_file,
    prime_graph,
    spectrum,
    validate,
)

EXAMPLES = ("s3-lattice", "s3-unit", "a5-order5")


class UnknownExample(KeyError):
    pass


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    group: str | None
    mode: str  # validate | check-order | check-all | spectrum | prime-graph | examples
    order: int | None = None
    characters: list[str] | None = None
    fmt: str = "text"
    verbosity: int = 0
    example: str | None = None


@dataclass
class OrderReport:
    order: int
    status: str
    solutions: list[dict[str, dict[str, int]]]  # per branch: divisor -> {class: eps}
    shortcut: bool = False
    nodes: int = 0
    constraints: int = 0
    forms: list[str] | None = None


@dataclass
class Report:
    group: str
    mode: str
    characters: list[str]
    orders: list[OrderReport] = field(default_factory=list)
    verdicts: dict[str, str] | None = None
    spectrum: list[int] | None = None
    surviving_orders: list[int] | None = None
    prime_graph: dict[str, list] | None = None
    violations: list[str] | None = None
    timing: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> Report:
        doc = dict(doc)
        doc["orders"] = [OrderReport(**o) for o in doc.get("orders", [])]
        return cls(**doc)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> Report:
        return cls.from_dict(json.loads(text))


# --- helpers ------------------------------------------------------------


def resolve_group(source: str) -> CharacterTable:
    path = Path(source)
    try:
        if path.exists():
            return load_table_file(path)
        if source in SHIPPED_GROUPS:
            return load_shipped(source)
    except (ParseError, SchemaError) as exc:
        raise InputError(f"{source}: {exc}") from exc
    raise InputError(f"no such group file: {source}")


def _character_indices(table: CharacterTable, names: Sequence[str] | None) -> list[int]:
    if not names:
        return list(range(len(table.characters)))
    try:
        return [table.character_index(n) for n in names]
    except KeyError as exc:
        known = ", ".join(ch.name for ch in table.characters)
        raise InputError(f"unknown character {exc.args[0]!r} (known: {known})") from None


def _branch_doc(table: CharacterTable, br: hc.PABranch) -> dict[str, dict[str, int]]:
    return {
        str(d): {table.classes[c].name: e for c, e in vec.entries}
        for d, vec in br.assignments
    }


def _format_form(table: CharacterTable, f: hc.MultiplicityForm, n: int) -> str:
    # printed as (1/n)(sum a_C eps_C + s)
    terms = []
    for c, a in f.coefficients.items():
        k = a * n
        if k:
            terms.append(f"{_signed(k, first=not terms)}*eps[{table.classes[c].name}]")
    s = f.constant * n
    if s or not terms:
        terms.append(_signed(s, first=not terms))
    name = table.characters[f.character].name
    return f"mu({name}, i={f.i}) = (1/{n})({''.join(terms)})"


def _signed(x: Fraction, first: bool) -> str:
    if first:
        return str(x)
    return f" + {x}" if x >= 0 else f" - {-x}"


def _order_report(table, s: hc.SolutionSet, verbosity: int, characters) -> OrderReport:
    rep = OrderReport(
        order=s.order,
        status=s.status.value,
        solutions=[_branch_doc(table, b) for b in s.solutions],
        shortcut=s.shortcut,
        nodes=s.nodes,
        constraints=s.constraints,
    )
    if verbosity >= 2 and s.solutions and s.order > 1:
        forms = []
        for chi in characters:
            for f in hc.build_multiplicity_forms(table, chi, s.order, s.solutions[0]):
                forms.append(_format_form(table, f, s.order))
        rep.forms = forms
    return rep


def _graph_doc(g) -> dict[str, list]:
    vertices, edges = g
    return {"vertices": sorted(vertices), "edges": sorted(sorted(e) for e in edges)}


# --- modes --------------------------------------------------------------


def build_report(cfg: RunConfig) -> tuple[Report, int]:
    table = resolve_group(cfg.group)
    chars = _character_indices(table, cfg.characters)
    report = Report(table.group_name, cfg.mode, [table.characters[i].name for i in chars])
    t0 = time.perf_counter()

    violations = validate(table)
    if cfg.mode == "validate" or violations:
        report.violations = violations
        report.timing = round(time.perf_counter() - t0, 6)
        return report, (2 if violations else 0)

    if cfg.mode == "check-order":
        n = cfg.order
        exp = exponent(table)
        if n is None or n < 1 or exp % n:
            raise InputError(f"order {n} does not divide the exponent {exp}")
        results: dict[int, hc.SolutionSet] = {}
        for d in sorted(d for d in range(1, n + 1) if n % d == 0):
            results[d] = hc.solve_order(table, d, results, chars)
        shown = [results[n]] if cfg.verbosity == 0 else list(results.values())
        report.orders = [_order_report(table, s, cfg.verbosity, chars) for s in shown]
        code = 1 if results[n].status == hc.Status.CRITICAL else 0
    else:
        results = hc.solve_all(table, chars)
        v = hc.verdicts(results, table)
        report.orders = [_order_report(table, s, cfg.verbosity, chars) for s in results.values()]
        report.surviving_orders = v.surviving_orders
        report.spectrum = sorted(spectrum(table))
        if cfg.mode == "check-all":
            report.verdicts = {"ZP1": v.zp1, "SpP": v.spp, "PGQ": v.pgq}
            wanted = [v.zp1, v.spp, v.pgq]
        elif cfg.mode == "spectrum":
            report.verdicts = {"SpP": v.spp}
            wanted = [v.spp]
        else:
            report.verdicts = {"PGQ": v.pgq}
            report.prime_graph = {
                "group": _graph_doc(prime_graph(table)),
                "units": _graph_doc(hc.orders_prime_graph(v.surviving_orders)),
            }
            wanted = [v.pgq]
        code = 0 if all(w == "Positive" for w in wanted) else 1
    report.timing = round(time.perf_counter() - t0, 6)
    return report, code


def render_text(report: Report, verbosity: int = 0) -> str:
    lines = [f"group {report.group}  [{report.mode}]"]
    if report.violations is not None:
        if report.violations:
            lines.append(f"{len(report.violations)} violation(s):")
            lines += [f"  {v}" for v in report.violations]
        else:
            lines.append("table is consistent")
    if report.characters and report.orders:
        lines.append("characters: " + ", ".join(report.characters))
    for o in report.orders:
        extra = " (single admissible class)" if o.shortcut and o.order > 1 else ""
        lines.append(f"order {o.order}: {o.status}, {len(o.solutions)} solution(s){extra}")
        if verbosity >= 1:
            lines.append(f"  constraints {o.constraints}, search nodes {o.nodes}")
        for sol in o.solutions:
            top = sol["1"]
            lines.append("  (" + ", ".join(f"{k}={v}" for k, v in top.items()) + ")")
            if verbosity >= 1:
                for d, vec in sol.items():
                    if d != "1":
                        lines.append(f"    u^{d}: " + ", ".join(f"{k}={v}" for k, v in vec.items()))
        for f in o.forms or []:
            lines.append("  " + f)
    if report.spectrum is not None:
        lines.append(f"spectrum of G: {report.spectrum}")
        lines.append(f"orders surviving HeLP: {report.surviving_orders}")
    if report.prime_graph is not None:
        for k in ("group", "units"):
            g = report.prime_graph[k]
            lines.append(f"prime graph ({k}): vertices {g['vertices']}, edges {g['edges']}")
    if report.verdicts:
        lines.append("verdicts: " + ", ".join(f"{k} {v}" for k, v in report.verdicts.items()))
    if verbosity >= 1:
        lines.append(f"time {report.timing:.3f}s")
    return "\n".join(lines)


# --- examples -----------------------------------------------------------


def run_example(name: str) -> tuple[dict, list[str], int]:
    """Returns (structured document, text lines, exit code)."""
    if name == "s3-lattice":
        from . import s3_example as s3

        t = s3.s3_table()
        image = s3.image_lattice(t)
        described = s3.described_lattice()
        ok = image == described
        doc = {
            "example": name,
            "image_basis": [list(r) for r in image.basis],
            "congruence_basis": [list(r) for r in described.basis],
            "index": image.index(),
            "equal": ok,
        }
        lines = ["phi(Z S3) in slot order (x, y, a, b, c, d), rho = [[a, 3b], [c, d]]", "HNF of the images of S3:"]
        lines += [f"  {list(r)}" for r in image.basis]
        lines.append("HNF of {x=y mod 2, x=a mod 3, y=d mod 3}:")
        lines += [f"  {list(r)}" for r in described.basis]
        lines.append(f"lattice index in Z^6: {image.index()}; congruence description "
                     + ("verified" if ok else "DOES NOT MATCH"))
        return doc, lines, 0 if ok else 1

    if name == "s3-unit":
        from . import s3_example as s3
        from .group_ring import element_order, mrsw_check, partial_augmentations

        t = s3.s3_table()
        table = load_shipped("S3")
        u = s3.example_unit(t)
        order = element_order(u)
        pa = partial_augmentations(u)
        res = mrsw_check(u, order)
        coeffs = {_cycles(t.elements[g]): int(c) for g, c in enumerate(u.coeffs) if c}
        doc = {
            "example": name,
            "unit": coeffs,
            "order": order,
            "identity_coefficient": int(u.coeffs[0]),
            "partial_augmentations": {table.classes[c].name: int(v) for c, v in enumerate(pa)},
            "rationally_conjugate": res.conjugate,
            "target": table.classes[res.targets[1]].name if res.conjugate else None,
        }
        lines = [
            "u = " + " ".join(f"{'+' if c > 0 else '-'}{abs(c) if abs(c) != 1 else ''}{g}" for g, c in coeffs.items()),
            f"phi(u) = (1, -1, diag(1, -1)); order {order}; coefficient of 1: {doc['identity_coefficient']}",
            "partial augmentations: " + ", ".join(f"{k}={v}" for k, v in doc["partial_augmentations"].items()),
            "rationally conjugate to " + doc["target"] if res.conjugate else f"not rationally conjugate: {res.witness}",
        ]
        return doc, lines, 0 if res.conjugate and order == 2 else 1

    if name == "a5-order5":
        table = load_shipped("A5")
        chi = table.character_index("chi3")
        trivial = {1: hc.SolutionSet(1, [hc.PABranch.from_dict(1, {1: hc.PAVector.identity()})], hc.Status.ALL_TRIVIAL)}
        powers = {5: hc.PAVector.identity()}
        forms = hc.build_multiplicity_forms(table, chi, 5, powers)
        sol = hc.solve_order(table, 5, trivial, [chi])
        tuples = [list(b.top.values) for b in sol.solutions]
        doc = {
            "example": name,
            "forms": {str(f.i): _format_form(table, f, 5) for f in forms},
            "solutions": tuples,
            "status": sol.status.value,
        }
        lines = ["A5, u of order 5, character chi3 of degree 3:"]
        lines += ["  " + _format_form(table, forms[i], 5) for i in (1, 2)]
        lines.append(f"solutions (eps[5a], eps[5b]): {[tuple(t) for t in tuples]}  [{sol.status.value}]")
        return doc, lines, 0 if sol.status == hc.Status.ALL_TRIVIAL else 1

    raise UnknownExample(name)


def _cycles(perm) -> str:
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = []
        j = i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = perm[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


# --- entry point --------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--verbose", "-v", action="count", default=0)
    group_opts = argparse.ArgumentParser(add_help=False)
    group_opts.add_argument("--group", required=True, help="group data file, or a shipped name: " + ", ".join(SHIPPED_GROUPS))
    group_opts.add_argument("--characters", help="comma-separated character names to use")

    p = argparse.ArgumentParser(prog="torsionhelp", description="HeLP checks for torsion units of integral group rings")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common, group_opts], help="check table consistency")
    chk = sub.add_parser("check", parents=[common, group_opts], help="run the HeLP solver")
    which = chk.add_mutually_exclusive_group(required=True)
    which.add_argument("--order", type=int)
    which.add_argument("--all", action="store_true")
    sub.add_parser("spectrum", parents=[common, group_opts], help="Spectrum Problem verdict")
    sub.add_parser("prime-graph", parents=[common, group_opts], help="Prime Graph Question verdict")
    ex = sub.add_parser("examples", parents=[common], help="reproduce a worked example")
    ex.add_argument("name", help=", ".join(EXAMPLES))
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    chars = args.characters.split(",") if getattr(args, "characters", None) else None
    mode = {
        "validate": "validate",
        "spectrum": "spectrum",
        "prime-graph": "prime-graph",
        "examples": "examples",
    }.get(args.command)
    if args.command == "check":
        mode = "check-all" if args.all else "check-order"
    return RunConfig(
        group=getattr(args, "group", None),
        mode=mode,
        order=getattr(args, "order", None),
        characters=chars,
        fmt=args.format,
        verbosity=args.verbose,
        example=getattr(args, "name", None),
    )


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        if cfg.mode == "examples":
            doc, lines, code = run_example(cfg.example)
            text = json.dumps(doc, indent=2, sort_keys=True) if cfg.fmt == "structured" else "\n".join(lines)
        else:
            report, code = build_report(cfg)
            text = report.dumps() if cfg.fmt == "structured" else render_text(report, cfg.verbosity)
    except UnknownExample as exc:
        print(f"error: unknown example {exc.args[0]!r} (choose from {', '.join(EXAMPLES)})", file=sys.stderr)
        return 2
    except (InputError, hc.UnboundedSystem, hc.SubfieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(text, file=out)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
