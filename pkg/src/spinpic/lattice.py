"""Exact integer and rational linear algebra.

Lattices are always given by their generators as the *rows* of an
:class:`IntMatrix`.  Nothing in this module ever rounds; integers are Python
ints and rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvariantViolation, UsageError

INFINITE = math.inf


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise UsageError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise UsageError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )
        for e in self.entries:
            if not isinstance(e, int) or isinstance(e, bool):
                raise UsageError(f"matrix entries must be integers, got {e!r}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise UsageError("column count required for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise UsageError("ragged rows")
        return cls(len(rows), cols, tuple(e for r in rows for e in r))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows(
            ([self[i, j] for i in range(self.rows)] for j in range(self.cols)), self.rows
        )

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise UsageError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            out.append([sum(ri[k] * other[k, j] for k in range(self.cols)) for j in range(other.cols)])
        return IntMatrix.from_rows(out, other.cols)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise UsageError("determinant of a non-square matrix")
        n = self.rows
        m = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SnfResult:
    """``d == u @ a @ v`` with ``u``, ``v`` unimodular and ``d`` in Smith form."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for f in self.invariant_factors if f)


def _min_nonzero(d: list[list[int]], t: int) -> tuple[int, int] | None:
    best = None
    for i in range(t, len(d)):
        for j in range(t, len(d[0]) if d else 0):
            if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                best = (i, j)
    return best


def snf(a: IntMatrix) -> SnfResult:
    """Smith normal form with unimodular transforms.

    The pivot is always the entry of smallest absolute value in the
    unreduced submatrix, which keeps the output deterministic.
    """
    m, n = a.rows, a.cols
    d = a.tolist()
    u = IntMatrix.identity(m).tolist()
    # v is tracked transposed so column operations become row operations
    vt = IntMatrix.identity(n).tolist()

    def row_axpy(mat, dst, src, q):
        if q:
            mat[dst] = [x - q * y for x, y in zip(mat[dst], mat[src])]

    def col_axpy(dst, src, q):
        if q:
            for row in d:
                row[dst] -= q * row[src]
            row_axpy(vt, dst, src, q)

    def swap_cols(j1, j2):
        if j1 != j2:
            for row in d:
                row[j1], row[j2] = row[j2], row[j1]
            vt[j1], vt[j2] = vt[j2], vt[j1]

    for t in range(min(m, n)):
        while True:
            piv = _min_nonzero(d, t)
            if piv is None:
                break
            i, j = piv
            d[t], d[i] = d[i], d[t]
            u[t], u[i] = u[i], u[t]
            swap_cols(t, j)
            p = d[t][t]
            clean = True
            for i in range(t + 1, m):
                q = d[i][t] // p
                row_axpy(d, i, t, q)
                row_axpy(u, i, t, q)
                clean = clean and d[i][t] == 0
            for j in range(t + 1, n):
                col_axpy(j, t, d[t][j] // p)
                clean = clean and d[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            # fold the offending row in; the next pass finds a smaller remainder
            row_axpy(d, t, bad, -1)
            row_axpy(u, t, bad, -1)
        if t < m and t < n and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    k = min(m, n)
    result = SnfResult(
        u=IntMatrix.from_rows(u, m),
        d=IntMatrix.from_rows(d, n),
        v=IntMatrix.from_rows(vt, n).transpose(),
        invariant_factors=tuple(d[i][i] for i in range(k)),
    )
    _check_snf(a, result)
    return result


def _check_snf(a: IntMatrix, res: SnfResult) -> None:
    if res.u @ a @ res.v != res.d:
        raise InvariantViolation("SNF transforms do not reproduce the diagonal")
    f = res.invariant_factors
    for i in range(res.d.rows):
        for j in range(res.d.cols):
            if i != j and res.d[i, j]:
                raise InvariantViolation("SNF result is not diagonal")
    for x, y in zip(f, f[1:]):
        if x < 0 or (x == 0 and y != 0) or (x and y % x):
            raise InvariantViolation(f"invariant factors {f} break the divisibility chain")


@dataclass(frozen=True)
class RationalSolution:
    x: tuple[Fraction, ...]
    nullity: int

    @property
    def degenerate(self) -> bool:
        """True when the solution set is positive-dimensional."""
        return self.nullity > 0


def solve_rational(a: IntMatrix, b: Sequence[int | Fraction]) -> RationalSolution | None:
    """Solve ``a @ x == b`` exactly.

    Returns ``None`` when the system is inconsistent.  For an underdetermined
    system the free variables are set to zero and ``nullity`` reports the
    dimension of the solution space.
    """
    if len(b) != a.rows:
        raise UsageError(f"right-hand side has length {len(b)}, expected {a.rows}")
    n = a.cols
    aug = [[Fraction(x) for x in a.row(i)] + [Fraction(b[i])] for i in range(a.rows)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(row[n] != 0 for row in aug[r:]):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return RationalSolution(tuple(x), n - len(pivots))


def _coords(lat: IntMatrix, x: Sequence[int]) -> tuple[SnfResult, list[int]]:
    if len(x) != lat.cols:
        raise UsageError(f"vector has length {len(x)}, lattice ambient dimension is {lat.cols}")
    res = snf(lat)
    y = [sum(x[k] * res.v[k, j] for k in range(lat.cols)) for j in range(lat.cols)]
    return res, y


def lattice_membership(lat: IntMatrix, x: Sequence[int]) -> tuple[int, ...] | None:
    """Integer ``c`` with ``c @ lat == x``, or ``None`` if ``x`` is not in the row lattice."""
    res, y = _coords(lat, x)
    f = res.invariant_factors
    cprime = [0] * lat.rows
    for j, yj in enumerate(y):
        dj = f[j] if j < len(f) else 0
        if dj == 0:
            if yj:
                return None
        elif yj % dj:
            return None
        else:
            cprime[j] = yj // dj
    c = tuple(sum(cprime[k] * res.u[k, i] for k in range(lat.rows)) for i in range(lat.rows))
    if tuple(sum(c[k] * lat[k, j] for k in range(lat.rows)) for j in range(lat.cols)) != tuple(x):
        raise InvariantViolation("membership coefficients do not reproduce the vector")
    return c


def element_order_mod_lattice(lat: IntMatrix, x: Sequence[int]) -> int | float:
    """Least ``k >= 1`` with ``k * x`` in the row lattice, or :data:`INFINITE`."""
    res, y = _coords(lat, x)
    f = res.invariant_factors
    order = 1
    for j, yj in enumerate(y):
        dj = f[j] if j < len(f) else 0
        if dj == 0:
            if yj:
                return INFINITE
        else:
            order = math.lcm(order, dj // math.gcd(dj, yj))
    return order
