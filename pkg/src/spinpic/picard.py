"""Presented Picard (sub)groups, torsion certificates and genus-1 results.

A presented group here is the free abelian group on the tautological
generators modulo the known relations.  It maps onto the true subgroup of the
Picard group, so orders computed in it are upper bounds only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .divisors import LAMBDA, BasisContext, DivisorClass, Gen, divisors, gamma, mu
from .errors import CertificationFailure, InvariantViolation, UsageError
from .lattice import INFINITE, IntMatrix, element_order_mod_lattice, snf
from .relations import lambda_coefficient, main_relation_class, normalize

UPPER_BOUND_NOTE = (
    "quotient of the free group on the listed generators by the known relations; "
    "it maps onto the true subgroup, so it is an upper bound (the relations are not known to be complete)"
)


@dataclass(frozen=True)
class GroupStructure:
    free_rank: int
    torsion_factors: tuple[int, ...]

    def __post_init__(self):
        f = self.torsion_factors
        if any(x < 2 for x in f) or any(b % a for a, b in zip(f, f[1:])):
            raise InvariantViolation(f"torsion factors {f} do not form a divisibility chain")

    def __str__(self) -> str:
        parts = (["Z"] if self.free_rank == 1 else [f"Z^{self.free_rank}"] if self.free_rank else [])
        parts += [f"Z/{t}" for t in self.torsion_factors]
        return " + ".join(parts) or "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion_factors": list(self.torsion_factors), "text": str(self)}

    @classmethod
    def from_dict(cls, data: dict) -> GroupStructure:
        return cls(data["free_rank"], tuple(data["torsion_factors"]))


@dataclass(frozen=True)
class AbelianPresentation:
    generators: tuple[str, ...]
    relations: IntMatrix
    note: str = ""

    def __post_init__(self):
        if self.relations.cols != len(self.generators):
            raise UsageError(f"relation width {self.relations.cols} != generator count {len(self.generators)}")

    def structure(self) -> GroupStructure:
        res = snf(self.relations)
        nonzero = [d for d in res.invariant_factors if d]
        return GroupStructure(len(self.generators) - len(nonzero), tuple(d for d in nonzero if d > 1))

    def order_of(self, x: list[int]) -> int | float:
        return element_order_mod_lattice(self.relations, x)

    def coords(self, named: dict[str, int]) -> list[int]:
        unknown = set(named) - set(self.generators)
        if unknown:
            raise UsageError(f"unknown generators {sorted(unknown)}")
        return [named.get(g, 0) for g in self.generators]

    def to_dict(self) -> dict:
        return {"generators": list(self.generators), "relations": self.relations.tolist(), "note": self.note}

    @classmethod
    def from_dict(cls, data: dict) -> AbelianPresentation:
        rows = data["relations"]
        return cls(tuple(data["generators"]), IntMatrix.from_rows(rows, len(data["generators"])), data["note"])


def _check_r(r: int) -> None:
    if r < 2:
        raise UsageError(f"spin level r must be at least 2, got {r}")


def _tautological(r: int) -> list[Gen]:
    return [LAMBDA, *BasisContext(r).mu_gens()]


def presented_open_picard(r: int) -> tuple[AbelianPresentation, GroupStructure]:
    """Generators lambda and mu_s (s | r, s >= 2), one open-locus relation per s."""
    _check_r(r)
    ctx = BasisContext(r)
    gens = _tautological(r)
    rows = []
    for s in divisors(r)[1:]:
        rel = normalize(DivisorClass(ctx, [(LAMBDA, lambda_coefficient(s)), (mu(s), -2 * s * s)]))
        rows.append([rel[g] for g in gens])
    pres = AbelianPresentation(tuple(str(g) for g in gens), IntMatrix.from_rows(rows, len(gens)), UPPER_BOUND_NOTE)
    return pres, pres.structure()


# -- torsion certificates -----------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """``multiple * candidate`` is ``1/modulus`` times a boundary class whose
    gamma_0 coefficient is not divisible by ``modulus``, so it is nonzero."""

    multiple: int
    modulus: int
    boundary: DivisorClass
    coefficient: int

    @property
    def generator(self) -> str:
        return str(gamma(0))

    @property
    def residue(self) -> int:
        return self.coefficient % self.modulus

    def to_dict(self) -> dict:
        return {
            "multiple": self.multiple,
            "modulus": self.modulus,
            "generator": "gamma_0",
            "coefficient": self.coefficient,
            "residue": self.residue,
            "boundary": self.boundary.to_mapping(),
        }


@dataclass(frozen=True)
class TorsionCertificate:
    r: int
    case: str
    s: int | None
    candidate: DivisorClass
    upper_bound_order: int
    witnesses: tuple[Witness, ...]
    possible_orders: tuple[int, ...]
    printed_constant: int | None = None
    derived_constant: int | None = None
    printed_lambda_residue: int | None = None
    derivation: tuple[str, ...] = field(default_factory=tuple)

    @property
    def exact_order(self) -> int | None:
        return self.possible_orders[0] if len(self.possible_orders) == 1 else None

    @property
    def statement(self) -> str:
        if self.exact_order is not None:
            return f"order {self.exact_order}"
        return "order in {" + ", ".join(map(str, self.possible_orders)) + "}"

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "case": self.case,
            "s": self.s,
            "candidate": self.candidate.to_mapping(),
            "candidate_text": str(self.candidate),
            "upper_bound_order": self.upper_bound_order,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "possible_orders": list(self.possible_orders),
            "exact_order": self.exact_order,
            "statement": self.statement,
            "printed_constant": self.printed_constant,
            "derived_constant": self.derived_constant,
            "printed_lambda_residue": self.printed_lambda_residue,
            "derivation": list(self.derivation),
            "note": UPPER_BOUND_NOTE,
        }

    @classmethod
    def from_dict(cls, data: dict) -> TorsionCertificate:
        ctx = BasisContext(data["r"])
        wits = tuple(
            Witness(w["multiple"], w["modulus"], DivisorClass.from_mapping(ctx, w["boundary"]), w["coefficient"])
            for w in data["witnesses"]
        )
        return cls(
            data["r"], data["case"], data["s"], DivisorClass.from_mapping(ctx, data["candidate"]),
            data["upper_bound_order"], wits, tuple(data["possible_orders"]),
            data["printed_constant"], data["derived_constant"], data["printed_lambda_residue"],
            tuple(data["derivation"]),
        )


_CASES = {"1": (2, ((2, 2),)), "2": (3, ((2, 3),)), "3": (2, ((2, 2),)), "4": (3, ((2, 3),)),
          "composite": (6, ((6, 2), (4, 3)))}


def _scaled(ctx: BasisContext, num: dict[Gen, int], q: int) -> DivisorClass:
    for g, c in num.items():
        if c % q:
            raise InvariantViolation(f"candidate coefficient {Fraction(c, q)} of {g} is not integral")
    return DivisorClass(ctx, {g: c // q for g, c in num.items()})


def _boundary_of(ctx: BasisContext, y: DivisorClass) -> DivisorClass:
    """The boundary class ``B`` with ``y + B = 0`` modulo the main relations."""
    acc = y
    for s in divisors(ctx.r)[1:]:
        c = y[mu(s)]
        if c % (2 * s * s):
            raise CertificationFailure(f"mu_{s} coefficient {c} is not a multiple of {2 * s * s}")
        acc = acc + (c // (2 * s * s)) * main_relation_class(ctx, s)
    if not acc.tautological_part().is_zero():
        raise CertificationFailure(f"combination leaves tautological residue {acc.tautological_part()}")
    return -acc


def torsion_certificate(r: int, case: str | int, s: int | None = None) -> TorsionCertificate:
    """Certify the order of the torsion candidates built from the open-locus relations."""
    _check_r(r)
    case = str(case)
    if case not in _CASES:
        raise UsageError(f"unknown case {case!r}; expected 1, 2, 3, 4 or composite")
    q, wit_spec = _CASES[case]
    ctx = BasisContext(r)
    derivation = []
    printed = derived = residue = None
    if case in ("1", "2", "composite"):
        need = {"1": 2, "2": 3, "composite": 6}[case]
        if r % need:
            raise UsageError(f"case {case} needs {need} | r, got r = {r}")
        if s is not None:
            raise UsageError(f"case {case} takes no --s")
        num = {mu(r): r * r, LAMBDA: -(r * r - 6 * r + 6)}
        derivation.append(f"x = {DivisorClass(ctx, num)}; candidate = x/{q}")
    else:
        if s is None or s < 2 or s >= r or r % s:
            raise UsageError(f"case {case} needs a proper divisor s of r with 2 <= s < r, got s = {s}")
        d = r // s
        if (case == "3" and d % 2) or (case == "4" and d % 3):
            raise UsageError(f"case {case} needs {'2' if case == '3' else '3'} | d = r/s, got d = {d}")
        derived = d * d - r * d + r - 1
        printed = d * d - r * d + r + 1
        num = {mu(s): r * r, mu(r): -r * r, LAMBDA: -6 * derived}
        derivation.append(
            f"x = {r * r}({mu(s)} - {mu(r)}) - 6·({derived})λ: the level-{r} open relation minus d² = {d * d} "
            f"times the level-{s} one, with λ-constant d² - rd + r - 1 = {derived}"
        )
        alt = DivisorClass(ctx, {mu(s): 2 * r * r, mu(r): -2 * r * r, LAMBDA: -12 * printed})
        residue = (alt + d * d * main_relation_class(ctx, s) - main_relation_class(ctx, r))[LAMBDA]
        derivation.append(
            f"with the alternative constant d² - rd + r + 1 = {printed} the same combination leaves λ-residue {residue}"
        )
    candidate = _scaled(ctx, num, q)
    two_x = DivisorClass(ctx, {g: 2 * c for g, c in num.items()})
    gens = _tautological(r)
    pres, _ = presented_open_picard(r)
    bound = pres.order_of([candidate[g] for g in gens])
    if bound == INFINITE:
        raise CertificationFailure(f"candidate {candidate} has infinite order in the presented group")
    witnesses = []
    for mult, mod in wit_spec:
        if mult * mod * candidate != two_x:
            raise InvariantViolation(f"{mod}·{mult}·candidate != 2x")
        boundary = _boundary_of(ctx, two_x)
        coeff = boundary[gamma(0)]
        if coeff % mod == 0:
            raise CertificationFailure(f"γ_0 coefficient {coeff} of the boundary class is divisible by {mod}")
        witnesses.append(Witness(mult, mod, boundary, coeff))
    derivation.append(
        "each witness: modulus·multiple·candidate + B = 0 with B a boundary class; its γ_0 coefficient is "
        "prime to the modulus, so multiple·candidate is nonzero"
    )
    # orders dividing the upper bound that no witness multiple kills
    orders = tuple(o for o in range(1, bound + 1) if bound % o == 0 and all(w.multiple % o for w in witnesses))
    if not orders:
        raise CertificationFailure(f"no order consistent with upper bound {bound} and the witnesses")
    return TorsionCertificate(
        r, case, s, candidate, int(bound), tuple(witnesses), orders, printed, derived, residue, tuple(derivation)
    )


# -- genus one ----------------------------------------------------------------


@dataclass(frozen=True)
class ChowPresentation:
    """``Z[t] / (modulus_linear t)`` on the open locus or ``Z[t] / (modulus_quadratic t^2)``."""

    generator: str
    modulus_linear: int | None
    modulus_quadratic: int | None
    weights: tuple[int, int]

    def __str__(self) -> str:
        if self.modulus_linear is not None:
            return f"Z[{self.generator}]/({self.modulus_linear}{self.generator})"
        return f"Z[{self.generator}]/({self.modulus_quadratic}{self.generator}^2)"

    def to_dict(self) -> dict:
        return {
            "generator": self.generator,
            "modulus_linear": self.modulus_linear,
            "modulus_quadratic": self.modulus_quadratic,
            "weights": list(self.weights),
            "text": str(self),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ChowPresentation:
        return cls(data["generator"], data["modulus_linear"], data["modulus_quadratic"], tuple(data["weights"]))


def genus1_chow(r: int) -> tuple[ChowPresentation, ChowPresentation]:
    """Equivariant Chow rings of the trivial-index genus-one component.

    The torus acts on (c4, c6) with weights 4r and 6r; the discriminant
    c4^3 - c6^2 has degree 3·4r = 2·6r, and the origin class is the product.
    """
    if r < 1:
        raise UsageError(f"level must be positive, got {r}")
    w4, w6 = 4 * r, 6 * r
    disc = 3 * w4
    if disc != 2 * w6:
        raise InvariantViolation("discriminant is not homogeneous")
    return ChowPresentation("t", disc, None, (w4, w6)), ChowPresentation("t", None, w4 * w6, (w4, w6))


def genus1_presentation(r: int) -> AbelianPresentation:
    """Open trivial-index component: generators mu+, mu-, lambda."""
    if r < 1:
        raise UsageError(f"level must be positive, got {r}")
    rows = [
        [-r, 0, 1],  # lambda = r mu+
        [0, 0, 12],  # 12 lambda = 0
        [-1, 1, 1],  # mu- = mu+ - lambda
    ]
    return AbelianPresentation(("μ+", "μ-", "λ"), IntMatrix.from_rows(rows), UPPER_BOUND_NOTE)


def genus1_mu_plus_order(r: int) -> int:
    pres = genus1_presentation(r)
    return pres.order_of(pres.coords({"μ+": 1}))


def genus1_sanity(r: int) -> int:
    """lambda-coefficient of the main relation at s = r after delta -> 12 lambda,
    mu -> lambda and dropping the pairing term (which vanishes in genus one)."""
    if r < 1:
        raise UsageError(f"level must be positive, got {r}")
    return lambda_coefficient(r) - 2 * r * r + 12 * (r - 1)


@dataclass(frozen=True)
class ComponentBounds:
    r: int
    d: int
    target_order: int
    image_exponent: int
    lower_bound: int
    upper_bound: int
    conjecture: int
    upper_presentation: AbelianPresentation

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "d": self.d,
            "target_order": self.target_order,
            "image_exponent": self.image_exponent,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "CONJECTURE": self.conjecture,
            "upper_presentation": self.upper_presentation.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ComponentBounds:
        return cls(
            data["r"], data["d"], data["target_order"], data["image_exponent"], data["lower_bound"],
            data["upper_bound"], data["CONJECTURE"], AbelianPresentation.from_dict(data["upper_presentation"]),
        )


def genus1_component_bounds(r: int, d: int) -> ComponentBounds:
    """Bounds on the order of mu^{d/r,+} on the index-d genus-one component.

    Lower bound: order of its image under the automorphism character, a
    cyclic group of order 4r (d = 2), 3r (d = 3) or r (d > 3) in which it is
    the ``d``-th power of a generator.  Upper bound: the presented group with
    lambda = (r/d) mu and 2 r^2 lambda = 0.
    """
    _check_r(r)
    if d < 2 or r % d:
        raise UsageError(f"d = {d} must be a divisor of r = {r} with d >= 2")
    target = {2: 4 * r, 3: 3 * r}.get(d, r)
    lower = target // math.gcd(d, target)
    rows = [[-(r // d), 1], [0, 2 * r * r]]
    pres = AbelianPresentation(("μ+", "λ"), IntMatrix.from_rows(rows), UPPER_BOUND_NOTE)
    upper = pres.order_of([1, 0])
    if upper % lower:
        raise InvariantViolation(f"lower bound {lower} does not divide upper bound {upper}")
    conjecture = {2: 2 * r, 3: r}.get(d, r // d)
    return ComponentBounds(r, d, target, d, lower, int(upper), conjecture, pres)
