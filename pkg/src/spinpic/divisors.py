"""Divisor classes on the compactified r-spin moduli over a coarse generator basis.

The basis for level ``r`` consists of ``lambda``, ``mu(s)`` for each divisor
``s >= 2`` of ``r`` (``mu(1)`` is ``lambda`` and is folded in on
construction), the boundary classes ``gamma(j)`` for ``0 <= j <= r/2``, and
either ``alpha(i)`` for ``1 <= i <= g/2`` (finite genus) or
``alpha_residue(k)`` for residues ``k mod r`` (generic genus, where
``alpha_residue(k)`` stands for the sum of all ``alpha(i)`` with
``i = k mod r``, i.e. the class usually written sigma_k).

Derived symbols (delta_i, delta, sigma, the pairing class) are never basis
elements; the ``expand_*`` functions write them out in the basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from . import combinatorics as comb
from .errors import InvariantViolation, UsageError

_KINDS = ("lambda", "mu", "alpha", "alpha_residue", "gamma")


@dataclass(frozen=True, order=True)
class Gen:
    """A basis generator.  Sort order is the canonical generator order."""

    rank: int
    index: int = 0

    @property
    def kind(self) -> str:
        return _KINDS[self.rank]

    def __str__(self) -> str:
        if self.rank == 0:
            return "λ"
        if self.rank == 1:
            return f"μ^{{1/{self.index}}}"
        if self.rank == 2:
            return f"α_{self.index}"
        if self.rank == 3:
            return f"σ_{self.index}"
        return f"γ_{self.index}"

    def latex(self) -> str:
        if self.rank == 0:
            return r"\lambda"
        if self.rank == 1:
            return rf"\mu^{{1/{self.index}}}"
        sym = {2: r"\alpha", 3: r"\sigma", 4: r"\gamma"}[self.rank]
        return f"{sym}_{{{self.index}}}"


LAMBDA = Gen(0)


def mu(s: int) -> Gen:
    return LAMBDA if s == 1 else Gen(1, s)


def alpha(i: int) -> Gen:
    return Gen(2, i)


def alpha_residue(k: int) -> Gen:
    return Gen(3, k)


def gamma(j: int) -> Gen:
    return Gen(4, j)


def is_boundary(gen: Gen) -> bool:
    return gen.rank >= 2


def divisors(r: int) -> list[int]:
    return [s for s in range(1, r + 1) if r % s == 0]


@dataclass(frozen=True)
class BasisContext:
    """Spin level ``r`` and genus ``g`` (``None`` selects generic-genus mode)."""

    r: int
    g: int | None = None

    def __post_init__(self):
        if self.r < 1:
            raise UsageError(f"level must be positive, got {self.r}")
        if self.g is not None and self.g < 2:
            raise UsageError(f"finite genus must be at least 2, got {self.g}")

    @property
    def generic(self) -> bool:
        return self.g is None

    def level(self, s: int) -> BasisContext:
        """The level-s basis in the same genus mode."""
        if s < 1 or self.r % s:
            raise UsageError(f"s = {s} must be a positive divisor of r = {self.r}")
        return BasisContext(s, self.g)

    def alpha_gens(self) -> list[Gen]:
        if self.generic:
            return [alpha_residue(k) for k in range(self.r)]
        return [alpha(i) for i in range(1, self.g // 2 + 1)]

    def gamma_gens(self) -> list[Gen]:
        return [gamma(j) for j in range(self.r // 2 + 1)]

    def mu_gens(self) -> list[Gen]:
        return [mu(s) for s in divisors(self.r) if s > 1]

    def generators(self) -> list[Gen]:
        return [LAMBDA, *self.mu_gens(), *self.alpha_gens(), *self.gamma_gens()]

    def contains(self, gen: Gen) -> bool:
        if gen.rank == 0:
            return True
        if gen.rank == 1:
            return gen.index > 1 and self.r % gen.index == 0
        if gen.rank == 2:
            return not self.generic and 1 <= gen.index <= self.g // 2
        if gen.rank == 3:
            return self.generic and 0 <= gen.index < self.r
        return 0 <= 2 * gen.index <= self.r

    def describe(self) -> str:
        return f"r={self.r}, " + ("generic genus" if self.generic else f"g={self.g}")


def _as_int(x: int | Fraction, what: str) -> int:
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise InvariantViolation(f"non-integral coefficient {x} in {what}")
        return x.numerator
    return x


class DivisorClass:
    """An exact integer combination of basis generators of one context."""

    __slots__ = ("ctx", "_coeffs")

    def __init__(self, ctx: BasisContext, coeffs: Mapping[Gen, int] | Iterable[tuple[Gen, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Gen, int] = {}
        for gen, c in items:
            if gen.rank == 1 and gen.index == 1:
                gen = LAMBDA
            if not ctx.contains(gen):
                raise UsageError(f"{gen} is not a generator for {ctx.describe()}")
            c = _as_int(c, str(gen))
            acc[gen] = acc.get(gen, 0) + c
        self.ctx = ctx
        self._coeffs = {g: acc[g] for g in sorted(acc) if acc[g]}

    @classmethod
    def zero(cls, ctx: BasisContext) -> DivisorClass:
        return cls(ctx)

    @classmethod
    def of(cls, ctx: BasisContext, gen: Gen, c: int = 1) -> DivisorClass:
        return cls(ctx, {gen: c})

    def __getitem__(self, gen: Gen) -> int:
        if gen.rank == 1 and gen.index == 1:
            gen = LAMBDA
        return self._coeffs.get(gen, 0)

    def items(self) -> Iterator[tuple[Gen, int]]:
        return iter(self._coeffs.items())

    def support(self) -> list[Gen]:
        return list(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def _check(self, other: DivisorClass) -> None:
        if not isinstance(other, DivisorClass):
            raise UsageError(f"expected a divisor class, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise UsageError(f"context mismatch: {self.ctx.describe()} vs {other.ctx.describe()}")

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return DivisorClass(self.ctx, [*self.items(), *other.items()])

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        return self + (-other)

    def __neg__(self) -> DivisorClass:
        return DivisorClass(self.ctx, [(g, -c) for g, c in self.items()])

    def __mul__(self, k: int) -> DivisorClass:
        if not isinstance(k, int):
            return NotImplemented
        return DivisorClass(self.ctx, [(g, k * c) for g, c in self.items()])

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.ctx == other.ctx and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.ctx, tuple(self._coeffs.items())))

    def restrict(self, keep) -> DivisorClass:
        return DivisorClass(self.ctx, [(g, c) for g, c in self.items() if keep(g)])

    def boundary_part(self) -> DivisorClass:
        return self.restrict(is_boundary)

    def tautological_part(self) -> DivisorClass:
        return self.restrict(lambda g: not is_boundary(g))

    def content(self) -> int:
        return math.gcd(*self._coeffs.values()) if self._coeffs else 0

    def __str__(self) -> str:
        return format_terms(list(self.items())) or "0"

    def __repr__(self) -> str:
        return f"DivisorClass({self.ctx.describe()}: {self})"

    def to_mapping(self) -> dict:
        """Canonical key-sorted mapping; keys of the inner maps are decimal strings."""
        out: dict = {}
        for gen, c in self.items():
            if gen.rank == 0:
                out["lambda"] = c
            else:
                out.setdefault(gen.kind, {})[str(gen.index)] = c
        return {k: (dict(sorted(v.items(), key=lambda kv: int(kv[0]))) if isinstance(v, dict) else v)
                for k, v in sorted(out.items())}

    @classmethod
    def from_mapping(cls, ctx: BasisContext, data: Mapping) -> DivisorClass:
        terms = []
        for kind, val in data.items():
            if kind == "lambda":
                terms.append((LAMBDA, val))
                continue
            if kind not in _KINDS:
                raise UsageError(f"unknown generator family {kind!r}")
            rank = _KINDS.index(kind)
            terms.extend((Gen(rank, int(i)), c) for i, c in val.items())
        return cls(ctx, terms)


def format_terms(terms: list[tuple[Gen, int]], latex: bool = False) -> str:
    out = []
    for gen, c in terms:
        sym = gen.latex() if latex else str(gen)
        mag = "" if abs(c) == 1 else str(abs(c))
        term = f"{mag}{sym}"
        if not out:
            out.append(term if c > 0 else f"-{term}")
        else:
            out.append(("+ " if c > 0 else "- ") + term)
    return " ".join(out)


def combine(a: DivisorClass, b: DivisorClass, x: int, y: int) -> DivisorClass:
    """``x*a + y*b``."""
    a._check(b)
    return x * a + y * b


# -- expansions ---------------------------------------------------------------


def _alpha_reps(ctx: BasisContext) -> list[tuple[Gen, int]]:
    """Basis alpha generators with a representative genus index for each."""
    if ctx.generic:
        return [(alpha_residue(k), k if k else ctx.r) for k in range(ctx.r)]
    return [(alpha(i), i) for i in range(1, ctx.g // 2 + 1)]


def _exact(num: int, den: int, what: str) -> int:
    if num % den:
        raise InvariantViolation(f"{what}: {num}/{den} is not integral")
    return num // den


def expand_delta_i(ctx: BasisContext, i: int) -> DivisorClass:
    """``delta_i = (r / c_i) alpha_i`` for a separating index ``i >= 1``."""
    if ctx.generic:
        raise UsageError("delta_i needs a finite genus; use expand_delta for the generic total")
    if not 1 <= i <= ctx.g // 2:
        raise UsageError(f"index i = {i} outside 1..{ctx.g // 2}")
    return DivisorClass.of(ctx, alpha(i), ctx.r // comb.c_level(i, ctx.r))


def expand_delta_0(ctx: BasisContext) -> DivisorClass:
    r = ctx.r
    return DivisorClass(ctx, [(gamma(j), r // comb.d_level(j, r)) for j in range(r // 2 + 1)])


def expand_delta(ctx: BasisContext) -> DivisorClass:
    """Total boundary pulled back from the moduli of stable curves."""
    r = ctx.r
    sep = DivisorClass(ctx, [(gen, r // comb.c_level(i, r)) for gen, i in _alpha_reps(ctx)])
    return expand_delta_0(ctx) + sep


def expand_pairing(ctx: BasisContext, s: int | None = None) -> DivisorClass:
    """The boundary class of the level-s pairing written in the level-r basis.

    Separating part: ``(r/s) u'(i) v'(i) / c_i`` with ``u'(i) = (2i-1) mod s``.
    Non-separating part: for each ``1 <= j <= s/2`` and each ``0 <= k <= r/2``
    with ``k = +-j (mod s)``, the coefficient ``(r/s) j (s-j) / d_k``.
    """
    r = ctx.r
    s = r if s is None else s
    ctx.level(s)
    terms = []
    for gen, i in _alpha_reps(ctx):
        u = (2 * i - 1) % s
        terms.append((gen, _exact(r * u * (s - u), s * comb.c_level(i, r), f"pairing coefficient of {gen}")))
    for j in range(1, s // 2 + 1):
        for k in comb.gamma_targets(j, s, r):
            terms.append((gamma(k), _exact(r * j * (s - j), s * comb.d_level(k, r), f"pairing coefficient of γ_{k}")))
    return DivisorClass(ctx, terms)


def expand_sigma(ctx: BasisContext, s: int, k: int | Fraction) -> DivisorClass:
    """Sum of the level-s separating classes with index ``= k (mod s)``, pulled back.

    A non-integral ``k`` gives the zero class.
    """
    ctx.level(s)
    if isinstance(k, Fraction):
        if k.denominator != 1:
            return DivisorClass.zero(ctx)
        k = k.numerator
    return DivisorClass(
        ctx,
        [(gen, comb.pullback_coeff_alpha(i, s, ctx.r)) for gen, i in _alpha_reps(ctx) if (i - k) % s == 0],
    )


def pullback_class(ctx: BasisContext, cls: DivisorClass) -> DivisorClass:
    """Pull a class from the level-s basis back along the forgetful map to level r."""
    src = cls.ctx
    if src.g != ctx.g:
        raise UsageError(f"genus mode mismatch: {src.describe()} vs {ctx.describe()}")
    s, r = src.r, ctx.r
    if r % s:
        raise UsageError(f"source level {s} does not divide target level {r}")
    out = DivisorClass.zero(ctx)
    for gen, c in cls.items():
        if gen.rank <= 1:
            part = DivisorClass.of(ctx, gen)
        elif gen.rank == 2:
            part = DivisorClass.of(ctx, gen, comb.pullback_coeff_alpha(gen.index, s, r))
        elif gen.rank == 3:
            part = DivisorClass(
                ctx,
                [(g2, comb.pullback_coeff_alpha(i, s, r)) for g2, i in _alpha_reps(ctx) if (i - gen.index) % s == 0],
            )
        else:
            part = DivisorClass(ctx, [(gamma(k), m) for k, m in comb.pullback_targets_gamma(gen.index, s, r)])
        out = out + c * part
    return out


def specialize(cls: DivisorClass, g: int) -> DivisorClass:
    """Replace each residue class by the sum of the separating classes it stands for."""
    if not cls.ctx.generic:
        raise UsageError("specialize expects a generic-genus class")
    ctx = BasisContext(cls.ctx.r, g)
    r = ctx.r
    terms = []
    for gen, c in cls.items():
        if gen.rank == 3:
            terms.extend((alpha(i), c) for i in range(1, g // 2 + 1) if i % r == gen.index)
        else:
            terms.append((gen, c))
    return DivisorClass(ctx, terms)
