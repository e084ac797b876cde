"""Command-line front end.

Every subcommand builds one output document: a key-sorted mapping with the
command, its parameters, a body and an ``errata`` list.  ``--format json``
prints it canonically; ``text`` and ``latex`` are renderings of the same body.

Exit status: 0 success, 2 usage error, 3 certification failure, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import combinatorics as comb
from .divisors import BasisContext, DivisorClass, divisors, expand_delta, gamma, pullback_class
from .errors import SpinPicError, UsageError
from .picard import (
    genus1_chow,
    genus1_component_bounds,
    genus1_mu_plus_order,
    genus1_presentation,
    genus1_sanity,
    presented_open_picard,
    torsion_certificate,
)
from .relations import (
    bis_relation,
    corollary_table,
    derive_main_via_deligne,
    main_relation,
    main_relation_class,
    render_row,
    table_latex,
)

FORMATS = ("text", "json", "latex")


@dataclass
class OutputDocument:
    command: str
    params: dict
    body: dict
    errata: list = field(default_factory=list)
    text: str = ""
    latex: str = ""

    def to_dict(self) -> dict:
        return {"command": self.command, "params": self.params, "body": self.body, "errata": self.errata}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return dumps(self.to_dict())
        out = self.latex if fmt == "latex" else self.text
        if self.errata and fmt == "text":
            out += "\n" + "\n".join(f"ERRATA {e['where']}: {e['detail']}" for e in self.errata)
        return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def loads(text: str) -> dict:
    return json.loads(text)


# -- parameter checks ---------------------------------------------------------


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"{args.command} requires --{n}")


def _reject(args, *names):
    for n in names:
        val = getattr(args, n)
        if val not in (None, False, []):
            raise UsageError(f"{args.command} does not take --{n.replace('_', '-')}")


def _check_r(r: int) -> None:
    if r < 2:
        raise UsageError(f"precondition r >= 2 violated: r = {r}")


def _check_s(r: int, s: int) -> None:
    if s < 1 or r % s:
        raise UsageError(f"precondition s | r violated: s = {s}, r = {r}")


def _context(args) -> BasisContext:
    if (args.g is None) == (not args.generic_g):
        raise UsageError(f"{args.command} needs exactly one of --g N or --generic-g")
    if args.g is None:
        return BasisContext(args.r)
    if args.g < 2:
        raise UsageError(f"precondition g >= 2 violated: g = {args.g}")
    if (2 * args.g - 2) % args.r:
        raise UsageError(f"precondition r | 2g - 2 violated: r = {args.r}, g = {args.g} (empty stack)")
    return BasisContext(args.r, args.g)


def _ctx_params(ctx: BasisContext) -> dict:
    return {"r": ctx.r, "g": ctx.g, "generic_g": ctx.generic}


# -- subcommands --------------------------------------------------------------


def cmd_table(args) -> OutputDocument:
    _need(args, "r")
    _reject(args, "s", "g", "generic_g", "m", "case", "d")
    levels = sorted(set(args.r))
    for r in levels:
        _check_r(r)
    rows = [row for r in levels for row in corollary_table(r)]
    errata = [
        {"where": f"r={row.r}, s={row.s}", "detail": row.errata, "printed": row.printed_latex,
         "derived": render_row(row.derived.cls, row.s)}
        for row in rows if row.errata
    ]
    lines = []
    for row in rows:
        status = "no printed row" if row.printed is None else ("ERRATA" if row.errata else "match")
        lines.append(f"r={row.r} s={row.s}: {render_row(row.derived.cls, row.s)}  [{status}]")
    return OutputDocument(
        "table", {"r": levels}, {"rows": [row.to_dict() for row in rows]}, errata,
        "\n".join(lines), table_latex(rows),
    )


def _relation_doc(name: str, args, build) -> OutputDocument:
    _need(args, "r", "s")
    _reject(args, "m", "case", "d")
    _check_r(args.r)
    _check_s(args.r, args.s)
    ctx = _context(args)
    rel = build(ctx, args.s)
    text = f"{rel}\n{render_row(rel.cls, args.s)}"
    return OutputDocument(
        name, {**_ctx_params(ctx), "s": args.s}, {"relation": rel.to_dict()}, [],
        text, render_row(rel.cls, args.s, latex=True),
    )


def cmd_relation(args) -> OutputDocument:
    return _relation_doc("relation", args, main_relation)


def cmd_bis(args) -> OutputDocument:
    doc = _relation_doc("bis", args, bis_relation)
    main = main_relation(_context(args), args.s)
    agrees = doc.body["relation"]["class"] == main.cls.to_mapping()
    doc.body["agrees_with_main"] = agrees
    doc.text += f"\nagrees with main relation: {'yes' if agrees else 'NO'}"
    return doc


def cmd_derive(args) -> OutputDocument:
    holder = {}

    def build(ctx, s):
        rel, trace = derive_main_via_deligne(ctx, s)
        holder["trace"] = trace
        return rel

    doc = _relation_doc("derive", args, build)
    trace = holder["trace"]
    doc.body["trace"] = trace.to_dict()
    steps = []
    for n, st in enumerate(trace.steps):
        terms = " + ".join(f"({v})·{_sym_text(k)}" for k, v in st.identity.items()) or "0"
        steps.append(f"step {n} [{st.axiom} x {st.multiplier}] {st.description}:\n    {terms} = 0")
    doc.text = "\n".join(steps) + "\n" + doc.text
    return doc


def _sym_text(sym) -> str:
    return sym.value if hasattr(sym, "value") else str(sym)


def cmd_boundary(args) -> OutputDocument:
    _need(args, "g", "r")
    _reject(args, "s", "generic_g", "m", "case", "d")
    _check_r(args.r)
    labels = comb.boundary_inventory(args.g, args.r)
    body = []
    lines = []
    for lab in labels:
        sec = lab.order.sector()
        entry = {
            "name": lab.name,
            "kind": lab.kind,
            "index": lab.index,
            "order": [lab.order.u, lab.order.v],
            "sector": sec.tag.value,
            "ell": sec.ell,
            "ramification": lab.ramification,
            "components_above": lab.components_above,
            "gluing_count": lab.gluing_count,
            "half_gluing": lab.half_gluing,
            "gluing_classes_range": list(lab.gluing_classes_range) if lab.gluing_classes_range else None,
            "gluing_note": lab.gluing_note,
        }
        body.append(entry)
        extra = f" gluings={lab.gluing_count}" if lab.gluing_count is not None else ""
        lines.append(
            f"{lab.name}: order {{{lab.order.u},{lab.order.v}}} {sec.tag.value} ramification={lab.ramification}"
            f" components={lab.components_above}{extra}" + (f"  ({lab.gluing_note})" if lab.gluing_note else "")
        )
    latex = "\n".join(_boundary_latex(e) for e in body)
    return OutputDocument("boundary", {"g": args.g, "r": args.r}, {"labels": body}, [], "\n".join(lines), latex)


def _boundary_latex(e: dict) -> str:
    sym = r"\alpha" if e["kind"] == "alpha" else r"\gamma"
    u, v = e["order"]
    return rf"{sym}_{{{e['index']}}} & \{{{u},{v}\}} & {e['ramification']} & {e['components_above']} \\"


def cmd_components(args) -> OutputDocument:
    _need(args, "g", "r")
    _reject(args, "s", "generic_g", "case", "d")
    if args.r < 1:
        raise UsageError(f"precondition r >= 1 violated: r = {args.r}")
    m = tuple(args.m or ())
    ell = comb.ell_invariant(args.g, args.r, m)
    count = comb.component_count(args.g, args.r, m)
    body = {"ell": ell, "components": count, "spin_structures": comb.spin_structure_count(args.g, args.r)}
    text = f"{count}\nell = {ell}"
    return OutputDocument(
        "components", {"g": args.g, "r": args.r, "m": list(m)}, body, [], text, str(count),
    )


def cmd_torsion(args) -> OutputDocument:
    _need(args, "r", "case")
    _reject(args, "g", "generic_g", "m", "d")
    _check_r(args.r)
    cert = torsion_certificate(args.r, args.case, args.s)
    body = cert.to_dict()
    errata = []
    if cert.printed_constant is not None:
        errata.append({
            "where": f"torsion case {cert.case}, r={cert.r}, s={cert.s}",
            "detail": f"λ-constant d² - rd + r + 1 = {cert.printed_constant} leaves λ-residue "
                      f"{cert.printed_lambda_residue}; derived d² - rd + r - 1 = {cert.derived_constant}",
            "printed": cert.printed_constant,
            "derived": cert.derived_constant,
        })
    lines = [
        f"candidate: {cert.candidate}",
        f"presented-group upper bound: {cert.upper_bound_order}",
    ]
    for w in cert.witnesses:
        lines.append(
            f"witness: {w.modulus}·{w.multiple}·candidate + B = 0, γ_0 coefficient of B = {w.coefficient} "
            f"(nonzero mod {w.modulus})"
        )
    lines.append(f"certified: {cert.statement}")
    latex = rf"{cert.candidate}\ \text{{has {cert.statement}}}"
    return OutputDocument(
        "torsion", {"r": args.r, "case": str(args.case), "s": args.s}, body, errata, "\n".join(lines), latex,
    )


def cmd_presentation(args) -> OutputDocument:
    _need(args, "r")
    _reject(args, "s", "g", "generic_g", "m", "case", "d")
    _check_r(args.r)
    pres, struct = presented_open_picard(args.r)
    lines = [f"generators: {', '.join(pres.generators)}"]
    for row in pres.relations.tolist():
        terms = " ".join(f"{'-' if c < 0 else '+'} {abs(c)}{g}" for g, c in zip(pres.generators, row) if c)
        lines.append(f"relation: {terms.removeprefix('+ ')} = 0")
    lines.append(f"structure (upper bound): {struct}")
    latex = r"\langle " + ", ".join(pres.generators) + r" \rangle \to " + str(struct).replace("+", r"\oplus")
    return OutputDocument(
        "presentation", {"r": args.r}, {"presentation": pres.to_dict(), "structure": struct.to_dict()}, [],
        "\n".join(lines), latex,
    )


def cmd_genus1(args) -> OutputDocument:
    _need(args, "r")
    _reject(args, "s", "g", "generic_g", "m", "case")
    _check_r(args.r)
    r = args.r
    if args.d is not None:
        ds = [args.d]
        if args.d < 2 or r % args.d:
            raise UsageError(f"precondition d | r, d >= 2 violated: d = {args.d}, r = {r}")
    else:
        ds = [d for d in divisors(r) if d > 1]
    open_, closed = genus1_chow(r)
    order = genus1_mu_plus_order(r)
    bounds = [genus1_component_bounds(r, d) for d in ds]
    body = {
        "chow_open": open_.to_dict(),
        "chow_compactified": closed.to_dict(),
        "trivial_component": genus1_presentation(r).to_dict(),
        "mu_plus_order": order,
        "main_relation_residue": genus1_sanity(r),
        "component_bounds": [b.to_dict() for b in bounds],
    }
    lines = [
        f"open Chow ring: {open_}",
        f"compactified Chow ring: {closed}",
        f"order of μ+ on the trivial-index component: {order}",
        f"main relation with δ = 12λ, μ = λ: residue {genus1_sanity(r)}λ",
    ]
    for b in bounds:
        lines.append(
            f"d={b.d}: order of μ^(d/r,+) in [{b.lower_bound}, {b.upper_bound}] "
            f"(image in Z/{b.target_order}); CONJECTURE: {b.conjecture}"
        )
    latex = rf"A^* = \mathbb{{Z}}[t]/{open_.modulus_linear}t,\quad \overline{{A}}^* = \mathbb{{Z}}[t]/{closed.modulus_quadratic}t^2"
    return OutputDocument("genus1", {"r": r, "d": args.d}, body, [], "\n".join(lines), latex)


def cmd_pullback(args) -> OutputDocument:
    _need(args, "r", "s")
    _reject(args, "m", "case", "d")
    _check_r(args.r)
    _check_s(args.r, args.s)
    ctx = _context(args)
    src = ctx.level(args.s)
    images = []
    boundary = [gamma(j) for j in range(args.s // 2 + 1)] + src.alpha_gens()
    for gen in boundary:
        img = pullback_class(ctx, DivisorClass.of(src, gen))
        images.append({"source": DivisorClass.of(src, gen).to_mapping(), "image": img.to_mapping(),
                       "text": f"{gen} -> {img}"})
    rel_s = main_relation_class(src, args.s)
    pulled = pullback_class(ctx, rel_s)
    target = main_relation_class(ctx, args.s)
    delta_ok = pullback_class(ctx, expand_delta(src)) == expand_delta(ctx)
    body = {
        "images": images,
        "main_relation_pulled_back": pulled.to_mapping(),
        "relation_coherent": pulled == target,
        "delta_coherent": delta_ok,
    }
    lines = [im["text"] for im in images]
    lines.append(f"pulled-back level-{args.s} main relation matches level {args.r}: {'yes' if pulled == target else 'NO'}")
    lines.append(f"pulled-back δ matches: {'yes' if delta_ok else 'NO'}")
    return OutputDocument(
        "pullback", {**_ctx_params(ctx), "s": args.s}, body, [], "\n".join(lines),
        render_row(pulled, args.s, latex=True),
    )


COMMANDS = {
    "table": cmd_table,
    "relation": cmd_relation,
    "bis": cmd_bis,
    "derive": cmd_derive,
    "boundary": cmd_boundary,
    "components": cmd_components,
    "torsion": cmd_torsion,
    "presentation": cmd_presentation,
    "genus1": cmd_genus1,
    "pullback": cmd_pullback,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinpic", description="Exact Picard-group relations for moduli of r-spin curves.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name == "table":
            p.add_argument("--r", type=int, nargs="+", help="one or more spin levels")
        else:
            p.add_argument("--r", type=int, help="spin level")
        p.add_argument("--s", type=int, help="divisor of r")
        p.add_argument("--g", type=int, help="finite genus")
        p.add_argument("--generic-g", action="store_true", help="residue (generic genus) basis")
        p.add_argument("--m", type=int, nargs="*", help="marking vector")
        p.add_argument("--case", choices=["1", "2", "3", "4", "composite"])
        p.add_argument("--d", type=int, help="component index for genus1")
        p.add_argument("--format", choices=FORMATS, default="text")
    return parser


def run(argv: list[str]) -> OutputDocument:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        doc = COMMANDS[args.command](args)
    except SpinPicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    print(doc.render(args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
