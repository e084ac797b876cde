"""The relation family among lambda, the mu classes and boundary divisors.

Every relation is stored as a single class ``R`` meaning ``R = 0``, normalized
so that its first nonzero coefficient (in canonical generator order) is
positive.  The main relation is the ground truth; the closed "bis" form, the
Deligne-pairing elimination and the reference table are checked against it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from . import combinatorics as comb
from .divisors import (
    LAMBDA,
    BasisContext,
    DivisorClass,
    Gen,
    divisors,
    expand_delta,
    expand_pairing,
    expand_sigma,
    gamma,
    mu,
    pullback_class,
)
from .errors import InvariantViolation, UsageError
from .lattice import IntMatrix, solve_rational


class Origin(enum.Enum):
    MAIN = "MainThm"
    BIS = "BisThm"
    OPEN_LOCUS = "OpenLocus"
    MU_CROSS = "MuCross"
    DELIGNE = "DeligneDerivation"
    TABLE = "PrintedTableRow"


def normalize(cls: DivisorClass) -> DivisorClass:
    items = list(cls.items())
    return -cls if items and items[0][1] < 0 else cls


@dataclass(frozen=True)
class Relation:
    cls: DivisorClass
    origin: Origin

    def __post_init__(self):
        object.__setattr__(self, "cls", normalize(self.cls))

    @property
    def ctx(self) -> BasisContext:
        return self.cls.ctx

    def same_as(self, other: Relation) -> bool:
        return self.cls == other.cls

    def __str__(self) -> str:
        return f"{self.cls} = 0"

    def to_dict(self) -> dict:
        return {
            "context": context_dict(self.ctx),
            "origin": self.origin.value,
            "class": self.cls.to_mapping(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> Relation:
        ctx = context_from_dict(data["context"])
        return cls(DivisorClass.from_mapping(ctx, data["class"]), Origin(data["origin"]))


def context_dict(ctx: BasisContext) -> dict:
    return {"r": ctx.r, "g": ctx.g}


def context_from_dict(data: dict) -> BasisContext:
    return BasisContext(data["r"], data["g"])


def _check_s(ctx: BasisContext, s: int) -> None:
    ctx.level(s)


def lambda_coefficient(s: int) -> int:
    return 2 * s * s - 12 * s + 12


def main_relation_class(ctx: BasisContext, s: int) -> DivisorClass:
    """``(2s^2-12s+12) lambda - 2s^2 mu_s + (s-1) delta - s <E_s, frak E_s>``, unnormalized."""
    _check_s(ctx, s)
    taut = DivisorClass(ctx, [(LAMBDA, lambda_coefficient(s)), (mu(s), -2 * s * s)])
    return taut + (s - 1) * expand_delta(ctx) - s * expand_pairing(ctx, s)


def main_relation(ctx: BasisContext, s: int) -> Relation:
    return Relation(main_relation_class(ctx, s), Origin.MAIN)


def gamma_at_level(ctx: BasisContext, s: int, j: int) -> DivisorClass:
    """The level-s non-separating class of order j, pulled back to level r."""
    return DivisorClass(ctx, [(gamma(k), m) for k, m in comb.pullback_targets_gamma(j, s, ctx.r)])


def bis_rhs(ctx: BasisContext, s: int) -> DivisorClass:
    """Right-hand side of the closed form equal to ``(2s^2-12s+12) lambda - 2s^2 mu_s``."""
    _check_s(ctx, s)
    half = Fraction(s + 1, 2)
    out = (1 - s) * (expand_sigma(ctx, s, half) + gamma_at_level(ctx, s, 0))
    for k in range(2, s):
        if 2 * k < s:
            poly = s * k - 2 * k * k + 2 * k - s
        elif 2 * k > s + 2:
            poly = 3 * s * k - 2 * k * k + 2 * k - 2 * s - s * s
        else:
            continue
        out = out + 2 * (s // comb.c_level(k, s)) * poly * expand_sigma(ctx, s, k)
    for j in range(2, s // 2 + 1):
        coeff = (s // comb.d_level(j, s)) * (j * (s - j) - (s - 1))
        out = out + coeff * gamma_at_level(ctx, s, j)
    return out


def bis_relation(ctx: BasisContext, s: int) -> Relation:
    lhs = DivisorClass(ctx, [(LAMBDA, lambda_coefficient(s)), (mu(s), -2 * s * s)])
    return Relation(lhs - bis_rhs(ctx, s), Origin.BIS)


def _open_ctx(r: int) -> BasisContext:
    if r < 2:
        raise UsageError(f"spin level r must be at least 2, got {r}")
    return BasisContext(r)


def open_locus_relation(r: int, s: int) -> Relation:
    """``(2s^2-12s+12) lambda = 2s^2 mu_s`` on the smooth locus."""
    ctx = _open_ctx(r)
    _check_s(ctx, s)
    return Relation(DivisorClass(ctx, [(LAMBDA, lambda_coefficient(s)), (mu(s), -2 * s * s)]), Origin.OPEN_LOCUS)


def mu_cross_relation(r: int, s: int) -> Relation:
    """``2r^2(s^2-6s+6) mu_r = 2s^2(r^2-6r+6) mu_s``."""
    ctx = _open_ctx(r)
    _check_s(ctx, s)
    cls = DivisorClass(ctx, [(mu(r), 2 * r * r * (s * s - 6 * s + 6)), (mu(s), -2 * s * s * (r * r - 6 * r + 6))])
    return Relation(cls, Origin.MU_CROSS)


# -- Deligne pairing elimination ----------------------------------------------


class PairingSymbol(enum.Enum):
    EE = "<E,E>"
    EW = "<E,w>"
    WW = "<w,w>"


Symbol = Gen | PairingSymbol
LinearForm = dict  # Symbol -> Fraction, meaning sum(coeff * symbol) = 0


def _form(*parts) -> LinearForm:
    out: dict = {}
    for scale, terms in parts:
        for sym, c in terms:
            out[sym] = out.get(sym, Fraction(0)) + Fraction(scale) * c
    return {k: v for k, v in out.items() if v}


def _sub(a: LinearForm, b: LinearForm, t: Fraction = Fraction(1)) -> LinearForm:
    return _form((1, a.items()), (-t, b.items()))


@dataclass(frozen=True)
class TraceStep:
    description: str
    identity: LinearForm
    axiom: str | None = None
    multiplier: Fraction = Fraction(0)


@dataclass
class ProofTrace:
    s: int
    ctx: BasisContext
    axioms: dict[str, LinearForm]
    steps: list[TraceStep] = field(default_factory=list)

    def validate(self) -> None:
        """Re-check every step: each differs from the previous by one axiom multiple."""
        prev: LinearForm = {}
        for n, step in enumerate(self.steps):
            if step.axiom not in self.axioms:
                raise InvariantViolation(f"step {n} cites unknown axiom {step.axiom!r}")
            ax = self.axioms[step.axiom]
            diff = _sub(step.identity, prev)
            sym, c = next(iter(ax.items()))
            t = diff.get(sym, Fraction(0)) / c
            if t == 0 or _sub(diff, ax, t):
                raise InvariantViolation(f"step {n} is not a single application of {step.axiom}")
            if t != step.multiplier:
                raise InvariantViolation(f"step {n} records multiplier {step.multiplier}, found {t}")
            prev = step.identity
        final = self.steps[-1].identity
        if any(isinstance(k, PairingSymbol) for k in final):
            raise InvariantViolation("final step still contains pairing symbols")
        if any(v.denominator != 1 for v in final.values()):
            raise InvariantViolation("final step has non-integral coefficients")

    def final_class(self) -> DivisorClass:
        return DivisorClass(self.ctx, [(g, c) for g, c in self.steps[-1].identity.items()])

    def to_dict(self) -> dict:
        def enc(form: LinearForm) -> dict:
            return {_sym_key(k): str(v) for k, v in sorted(form.items(), key=lambda kv: _sym_key(kv[0]))}

        return {
            "s": self.s,
            "context": context_dict(self.ctx),
            "axioms": {name: enc(f) for name, f in sorted(self.axioms.items())},
            "steps": [
                {"description": st.description, "axiom": st.axiom, "multiplier": str(st.multiplier),
                 "identity": enc(st.identity)}
                for st in self.steps
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> ProofTrace:
        ctx = context_from_dict(data["context"])

        def dec(d: dict) -> LinearForm:
            return {_sym_from_key(k): Fraction(v) for k, v in d.items()}

        trace = cls(data["s"], ctx, {k: dec(v) for k, v in data["axioms"].items()})
        trace.steps = [
            TraceStep(st["description"], dec(st["identity"]), st["axiom"], Fraction(st["multiplier"]))
            for st in data["steps"]
        ]
        return trace


def _sym_key(sym: Symbol) -> str:
    if isinstance(sym, PairingSymbol):
        return f"0:{sym.name}"
    return f"{sym.rank + 1}:{sym.kind}:{sym.index:04d}"


def _sym_from_key(key: str) -> Symbol:
    parts = key.split(":")
    if parts[0] == "0":
        return PairingSymbol[parts[1]]
    return Gen(int(parts[0]) - 1, int(parts[2]))


def deligne_axioms(ctx: BasisContext, s: int) -> dict[str, LinearForm]:
    """The four identities the elimination runs on, each as ``form = 0``.

    A1 Riemann-Roch for the root line:  2 mu_s = <E,E> - <E,w> + 2 lambda
    A2 <w, frak E_s> = 0 with frak E_s = w - s E:  <w,w> = s <E,w>
    A3 Mumford:  <w,w> = 12 lambda - delta
    A4 pairing:  <E,w> - s <E,E> = <E_s, frak E_s> (expanded boundary class)
    """
    EE, EW, WW = PairingSymbol.EE, PairingSymbol.EW, PairingSymbol.WW
    delta = list(expand_delta(ctx).items())
    pairing = list(expand_pairing(ctx, s).items())
    return {
        "A1": _form((1, [(EE, 1), (EW, -1), (LAMBDA, 2), (mu(s), -2)])),
        "A2": _form((1, [(WW, 1), (EW, -s)])),
        "A3": _form((1, [(WW, 1), (LAMBDA, -12)]), (1, delta)),
        "A4": _form((1, [(EW, 1), (EE, -s)]), (-1, pairing)),
    }


_STEP_TEXT = {
    "A4": "expand s<E_s, frak E_s> bilinearly in <E,E>, <E,w>",
    "A1": "Riemann-Roch for the root line removes <E,E>",
    "A2": "triviality of <w, frak E_s> removes <E,w>",
    "A3": "Mumford's isomorphism removes <w,w>",
}


def derive_main_via_deligne(ctx: BasisContext, s: int) -> tuple[Relation, ProofTrace]:
    """Re-derive the level-s main relation by exact rational elimination."""
    _check_s(ctx, s)
    axioms = deligne_axioms(ctx, s)
    trace = ProofTrace(s, ctx, axioms)
    start = _form((s, axioms["A4"].items()))
    trace.steps.append(TraceStep(_STEP_TEXT["A4"], start, "A4", Fraction(s)))

    # multipliers y with start - sum(y_j A_j) free of pairing symbols
    order = ["A1", "A2", "A3"]
    syms = [PairingSymbol.EE, PairingSymbol.EW, PairingSymbol.WW]
    mat = IntMatrix.from_rows([[int(axioms[a].get(p, 0)) for a in order] for p in syms], len(order))
    sol = solve_rational(mat, [start.get(p, Fraction(0)) for p in syms])
    if sol is None or sol.degenerate:
        raise InvariantViolation(f"pairing elimination is not uniquely solvable for s = {s}")
    cur = start
    for name, y in zip(order, sol.x):
        if y:
            cur = _sub(cur, axioms[name], y)
            trace.steps.append(TraceStep(_STEP_TEXT[name], cur, name, -y))
    trace.validate()
    derived = Relation(trace.final_class(), Origin.DELIGNE)
    if not derived.same_as(main_relation(ctx, s)):
        raise InvariantViolation(f"Deligne elimination disagrees with the main relation at s = {s}")
    return derived, trace


# -- the special-case table ---------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    r: int
    s: int
    derived: Relation
    printed: Relation | None = None
    printed_latex: str | None = None
    errata: str | None = None

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "s": self.s,
            "derived": self.derived.to_dict(),
            "derived_text": render_row(self.derived.cls, self.s),
            "printed": self.printed.to_dict() if self.printed else None,
            "printed_latex": self.printed_latex,
            "errata": self.errata,
        }

    @classmethod
    def from_dict(cls, data: dict) -> TableRow:
        return cls(
            data["r"], data["s"], Relation.from_dict(data["derived"]),
            Relation.from_dict(data["printed"]) if data["printed"] else None,
            data["printed_latex"], data["errata"],
        )


def _split_row(cls: DivisorClass, s: int) -> tuple[list, list]:
    """Left side (lambda, mu) with positive lambda; right side the boundary terms."""
    if cls[LAMBDA] < 0:
        cls = -cls
    lhs = [(g, c) for g, c in cls.items() if g.rank <= 1]
    rhs = [(g, -c) for g, c in cls.items() if g.rank > 1]
    # gamma terms first, then sigma terms, each ascending
    rhs.sort(key=lambda gc: (0 if gc[0].rank == 4 else 1, gc[0].index))
    return lhs, rhs


def _group(rhs: list, latex: bool) -> str:
    from .divisors import format_terms

    by_coeff: dict[int, list] = {}
    for g, c in rhs:
        by_coeff.setdefault(c, []).append(g)
    parts = []
    for c, gens in by_coeff.items():
        if len(gens) == 1:
            parts.append((c, format_terms([(gens[0], 1)], latex)))
        else:
            inner = " + ".join(format_terms([(g, 1)], latex) for g in gens)
            parts.append((c, f"({inner})"))
    out = []
    for c, body in parts:
        mag = "" if abs(c) == 1 else str(abs(c))
        if not out:
            out.append(f"{'-' if c < 0 else ''}{mag}{body}")
        else:
            out.append(f"{'-' if c < 0 else '+'} {mag}{body}")
    return " ".join(out) or "0"


def render_row(cls: DivisorClass, s: int, latex: bool = False) -> str:
    """``a lambda + b mu = boundary`` with equal boundary coefficients grouped."""
    from .divisors import format_terms

    lhs, rhs = _split_row(cls, s)
    return f"{format_terms(lhs, latex) or '0'} = {_group(rhs, latex)}"


def _errata(derived: DivisorClass, printed: DivisorClass, s: int) -> str | None:
    if derived == printed:
        return None
    diffs = []
    for g in sorted(set(derived.support()) | set(printed.support())):
        if derived[g] != printed[g]:
            diffs.append(f"coefficient of {g}: printed {printed[g]}, derived {derived[g]}")
    return "; ".join(diffs) + f"; derived row: {render_row(derived, s)}"


def corollary_table(r: int) -> list[TableRow]:
    """Derived rows for every ``s | r, s >= 2`` (descending), diffed against stored rows."""
    from .table_data import printed_row

    if r < 2:
        raise UsageError(f"spin level r must be at least 2, got {r}")
    ctx = BasisContext(r)
    rows = []
    for s in sorted((s for s in divisors(r) if s > 1), reverse=True):
        derived = main_relation(ctx, s)
        src = printed_row(r, s)
        if src is None:
            rows.append(TableRow(r, s, derived))
            continue
        printed = Relation(src[1], Origin.TABLE)
        rows.append(TableRow(r, s, derived, printed, src[0], _errata(derived.cls, printed.cls, s)))
    return rows


def table_latex(rows: list[TableRow]) -> str:
    lines = [r"\begin{array}{|l|rcl|}", r"\hline"]
    for r in sorted({row.r for row in rows}):
        block = [row for row in rows if row.r == r]
        for n, row in enumerate(block):
            lhs, rhs = render_row(row.derived.cls, row.s, latex=True).split(" = ")
            head = f"r={r}" if n == 0 else ""
            lines.append(f"{head} & {lhs} & = & {rhs} \\\\")
        lines.append(r"\hline")
    lines.append(r"\end{array}")
    return "\n".join(lines)


def pullback_relation(ctx: BasisContext, rel: Relation) -> Relation:
    return Relation(pullback_class(ctx, rel.cls), rel.origin)
