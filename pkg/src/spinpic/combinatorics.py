"""Closed-form integer invariants of r-spin boundary combinatorics.

Conventions used throughout: ``gcd(0, s) == s`` (so a Ramond node of level
``r`` has ``ell == r`` and is unramified), and node orders are unordered
pairs ``{u, v}`` with ``u + v == r`` or ``u == v == 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InvariantViolation, UsageError


class Sector(enum.Enum):
    RAMOND = "Ramond"
    NEVEU_SCHWARZ = "NeveuSchwarz"
    SEMI_RAMOND = "SemiRamond"


@dataclass(frozen=True)
class SectorClass:
    tag: Sector
    ell: int


@dataclass(frozen=True)
class NodeOrder:
    u: int
    v: int
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise UsageError(f"level must be positive, got {self.r}")
        ok = (self.u == self.v == 0) or (0 < self.u < self.r and 0 < self.v < self.r and self.u + self.v == self.r)
        if not ok:
            raise UsageError(f"invalid node order {{{self.u}, {self.v}}} at level {self.r}")

    @property
    def is_ramond(self) -> bool:
        return self.u == 0

    def sector(self) -> SectorClass:
        if self.is_ramond:
            return SectorClass(Sector.RAMOND, self.r)
        ell = math.gcd(self.u, self.v, self.r)
        if math.gcd(self.u, self.v) == 1:
            return SectorClass(Sector.NEVEU_SCHWARZ, ell)
        return SectorClass(Sector.SEMI_RAMOND, ell)


def _check_level(r: int) -> None:
    if r < 2:
        raise UsageError(f"spin level r must be at least 2, got {r}")


def node_order_separating(i: int, r: int) -> NodeOrder:
    """Order of the node splitting off a genus-``i`` component: ``u = (2i-1) mod r``."""
    _check_level(r)
    if i < 1:
        raise UsageError(f"genus part must be at least 1, got {i}")
    u = (2 * i - 1) % r
    return NodeOrder(u, r - u if u else 0, r)


def c_level(i: int, s: int) -> int:
    """``gcd(2i - 1, s)``."""
    if s < 1:
        raise UsageError(f"level must be positive, got {s}")
    return math.gcd(2 * i - 1, s)


def d_level(j: int, s: int) -> int:
    """``gcd(j, s)``, equal to ``s`` for ``j == 0``."""
    if s < 1:
        raise UsageError(f"level must be positive, got {s}")
    return math.gcd(j, s)


def ell_invariant(g: int, r: int, m: Sequence[int] = (), n: int | None = None) -> int:
    """The gcd invariant governing the number of components; 0 for an empty stack."""
    if n is not None and n != len(m):
        raise UsageError(f"point count {n} does not match marking vector of length {len(m)}")
    if g < 0:
        raise UsageError(f"genus must be non-negative, got {g}")
    if r < 1:
        raise UsageError(f"level must be positive, got {r}")
    total = sum(m)
    if g == 0:
        return 1 if (2 + total) % r == 0 else 0
    if g == 1:
        return math.gcd(r, *m) if total % r == 0 else 0
    return math.gcd(2, r, *m) if (total + 2 - 2 * g) % r == 0 else 0


def divisor_count(n: int) -> int:
    if n <= 0:
        return 0
    count = 0
    for k in range(1, math.isqrt(n) + 1):
        if n % k == 0:
            count += 1 if k * k == n else 2
    return count


def component_count(g: int, r: int, m: Sequence[int] = (), n: int | None = None) -> int:
    return divisor_count(ell_invariant(g, r, m, n))


def spin_structure_count(g: int, r: int) -> int:
    """Number of r-th roots of the canonical bundle on a fixed smooth genus-g curve."""
    if g < 0 or r < 1:
        raise UsageError("genus must be non-negative and level positive")
    if (2 * g - 2) % r:
        return 0
    return r ** (2 * g)


def genus1_iso_class_count(r: int) -> int:
    """Isomorphism classes of r-spin structures over a generic 1-pointed elliptic curve."""
    if r < 3 or r % 2 == 0:
        raise UsageError(f"formula covers odd r >= 3 only, got {r}")
    return 1 + (r * r - 1) // 2


def node_ramification(o: NodeOrder) -> int:
    return o.r // (o.r if o.is_ramond else math.gcd(o.u, o.v))


@dataclass(frozen=True)
class BoundaryLabel:
    """One coarse boundary divisor over a one-node stratum.

    ``components_above`` counts the irreducible components summed into the
    coarse class.  For ``gamma`` labels ``gluing_count`` is the raw
    ``ell = gcd(j, r)``; ``half_gluing`` is ``ell // 2`` only when ``ell`` is
    even, and ``gluing_note`` flags the cases whose intended count is unclear.
    """

    kind: str
    index: int
    order: NodeOrder
    ramification: int
    components_above: int
    gluing_count: int | None = None
    half_gluing: int | None = None
    gluing_classes_range: tuple[int, int] | None = None
    gluing_note: str | None = None

    @property
    def name(self) -> str:
        return f"{self.kind}_{self.index}"


def _gamma_label(g: int, r: int, j: int) -> BoundaryLabel:
    order = NodeOrder(j, r - j, r) if j else NodeOrder(0, 0, r)
    ell = d_level(j, r)
    comps = component_count(g - 1, r, (j - 1, r - j - 1)) if j else component_count(g - 1, r, (-1, -1))
    half = ell // 2 if ell % 2 == 0 else None
    note = None
    if ell > 1 and ell % 2:
        note = f"odd gluing level {ell}: halved morphism count is not an integer; raw count reported"
    rng = None
    if 2 * j == r:
        # inversion on the ell gluings fixes +1, and -1 when ell is even
        fixed = 2 if ell % 2 == 0 else 1
        rng = (ell // 2, (ell + fixed) // 2)
        note = (note + "; " if note else "") + "self-paired order: gluing classes modulo swap given as a range"
    return BoundaryLabel(
        "gamma", j, order, node_ramification(order), comps,
        gluing_count=ell, half_gluing=half, gluing_classes_range=rng, gluing_note=note,
    )


def boundary_inventory(g: int, r: int) -> list[BoundaryLabel]:
    """Labels over every one-node boundary stratum of the genus-g, level-r spin moduli."""
    _check_level(r)
    if g < 2:
        raise UsageError(f"boundary inventory needs g >= 2, got {g}")
    if (2 * g - 2) % r:
        raise UsageError(f"r = {r} does not divide 2g - 2 = {2 * g - 2}: the stack is empty")
    labels = []
    for i in range(1, g // 2 + 1):
        order = node_order_separating(i, r)
        comps = component_count(i, r, (order.u - 1,)) * component_count(g - i, r, (order.v - 1,))
        labels.append(BoundaryLabel("alpha", i, order, node_ramification(order), comps))
    labels.extend(_gamma_label(g, r, j) for j in range(r // 2 + 1))
    for lab in labels:
        if lab.components_above < 1:
            raise InvariantViolation(f"{lab.name} has no components over a non-empty stack")
    return labels


def _check_sub_level(s: int, r: int) -> None:
    if s < 1 or r % s:
        raise UsageError(f"s = {s} must be a positive divisor of r = {r}")


def pullback_coeff_alpha(i: int, s: int, r: int) -> int:
    """Multiplicity of the level-r class over the level-s separating class of index i."""
    _check_sub_level(s, r)
    num, den = r * c_level(i, s), s * c_level(i, r)
    if num % den:
        raise InvariantViolation(f"alpha pullback coefficient {num}/{den} is not integral (i={i}, s={s}, r={r})")
    return num // den


def gamma_targets(j: int, s: int, r: int) -> list[int]:
    """Orders ``0 <= k <= r/2`` with ``k = +-j (mod s)``."""
    return [k for k in range(r // 2 + 1) if (k - j) % s == 0 or (k + j) % s == 0]


def pullback_targets_gamma(j: int, s: int, r: int) -> list[tuple[int, int]]:
    """Level-r classes (with multiplicity) lying over the level-s class of order j."""
    _check_sub_level(s, r)
    if not 0 <= 2 * j <= s:
        raise UsageError(f"order j = {j} must satisfy 0 <= j <= s/2 = {s / 2}")
    out = []
    for k in gamma_targets(j, s, r):
        num, den = r * d_level(k, s), s * d_level(k, r)
        if num % den:
            raise InvariantViolation(f"gamma pullback coefficient {num}/{den} is not integral (j={j}, k={k}, s={s}, r={r})")
        out.append((k, num // den))
    return out
