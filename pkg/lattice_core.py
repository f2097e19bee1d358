"""
Exact integer lattice algebra.

Row-style Hermite normal form (positive pivots, entries above a pivot reduced
into [0, pivot)), Smith invariants, membership, exact solving, left kernels and
saturation.  Every ring in the engine is Z^d modulo a ``Lattice``; two ring
elements are equal iff their ``Lattice.reduce`` vectors are identical.
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors

from engine_errors import DomainError

Vector = Tuple[int, ...]
Rows = Sequence[Sequence[int]]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, entries in row-major order"""
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DomainError("DimensionMismatch",
                              f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Rows, cols: Optional[int] = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DomainError("DimensionMismatch", f"row of length {len(r)} in a {cols}-column matrix")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(transpose(self.to_rows(), self.cols), self.rows)


def transpose(rows: Rows, ncols: int) -> List[Vector]:
    return [tuple(r[j] for r in rows) for j in range(ncols)]


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0"""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _echelon(rows: List[List[int]], ncols: int) -> Tuple[List[List[int]], List[int]]:
    """Row-reduce the first ``ncols`` columns in place.

    Rows may be longer than ``ncols`` (a transform block rides along).  Returns
    the rows, pivot rows first, and the pivot columns.
    """
    pivots: List[int] = []
    top = 0
    nrows = len(rows)
    for j in range(ncols):
        if top >= nrows:
            break
        for i in range(top, nrows):
            if rows[i][j]:
                if i != top:
                    rows[top], rows[i] = rows[i], rows[top]
                break
        else:
            continue
        prow = rows[top]
        for i in range(top + 1, nrows):
            b = rows[i][j]
            if not b:
                continue
            a = prow[j]
            vec = rows[i]
            if b % a == 0:
                q = b // a
                rows[i] = [v - q * p for v, p in zip(vec, prow)]
            else:
                x, y, g = xgcd(a, b)
                ag, mbg = a // g, -b // g
                prow, rows[i] = ([x * p + y * v for p, v in zip(prow, vec)],
                                 [mbg * p + ag * v for p, v in zip(prow, vec)])
                rows[top] = prow
        if prow[j] < 0:
            prow = [-p for p in prow]
            rows[top] = prow
        p = prow[j]
        for i in range(top):
            q = rows[i][j] // p
            if q:
                rows[i] = [v - q * w for v, w in zip(rows[i], prow)]
        pivots.append(j)
        top += 1
    return rows, pivots


@dataclass(frozen=True)
class Lattice:
    """Integer row span in Z^ambient_dim, stored as its row-HNF basis"""
    ambient_dim: int
    basis: Tuple[Vector, ...] = ()
    pivots: Tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def zero(cls, dim: int) -> "Lattice":
        return cls(dim, (), ())

    @classmethod
    def full(cls, dim: int) -> "Lattice":
        return cls(dim, tuple(unit_vector(dim, i) for i in range(dim)), tuple(range(dim)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_dim

    def is_zero(self) -> bool:
        return not self.basis

    def index(self) -> Optional[int]:
        """|Z^d / L| when finite, else None"""
        if not self.is_full_rank():
            return None
        out = 1
        for row, j in zip(self.basis, self.pivots):
            out *= row[j]
        return out

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of v modulo the lattice"""
        if len(v) != self.ambient_dim:
            raise DomainError("DimensionMismatch",
                              f"vector of length {len(v)} in dimension {self.ambient_dim}")
        out = list(v)
        for row, j in zip(self.basis, self.pivots):
            q = out[j] // row[j]
            if q:
                for k in range(j, self.ambient_dim):
                    out[k] -= q * row[k]
        return tuple(out)

    def __contains__(self, v: Sequence[int]) -> bool:
        return member(v, self)

    def residues(self) -> Iterable[Vector]:
        """All canonical vectors of a full-rank lattice, in lexicographic order"""
        if not self.is_full_rank():
            raise DomainError("RingInfinite", "lattice is not of full rank")
        moduli = [row[j] for row, j in zip(self.basis, self.pivots)]
        current = [0] * self.ambient_dim
        while True:
            yield tuple(current)
            k = self.ambient_dim - 1
            while k >= 0:
                current[k] += 1
                if current[k] < moduli[k]:
                    break
                current[k] = 0
                k -= 1
            if k < 0:
                return


def unit_vector(dim: int, i: int, value: int = 1) -> Vector:
    out = [0] * dim
    out[i] = value
    return tuple(out)


def zero_vector(dim: int) -> Vector:
    return (0,) * dim


def _check_rows(rows: Rows, ncols: int) -> List[List[int]]:
    out = []
    for r in rows:
        if len(r) != ncols:
            raise DomainError("DimensionMismatch", f"row of length {len(r)} in dimension {ncols}")
        out.append([int(x) for x in r])
    return out


def hnf_rows(rows: Rows, ncols: int) -> Lattice:
    """HNF lattice of the row span of ``rows``"""
    work, pivots = _echelon(_check_rows(rows, ncols), ncols)
    basis = tuple(tuple(work[i]) for i in range(len(pivots)))
    return Lattice(ncols, basis, tuple(pivots))


def hnf(m: IntMatrix) -> Lattice:
    return hnf_rows(m.to_rows(), m.cols)


def hnf_with_transform(rows: Rows, ncols: int) -> Tuple[List[Vector], List[Vector]]:
    """Return (H, U) with U unimodular and U*A == H, H in row HNF padded with zero rows"""
    work = _check_rows(rows, ncols)
    m = len(work)
    augmented = [r + list(unit_vector(m, i)) for i, r in enumerate(work)]
    augmented, _ = _echelon(augmented, ncols)
    h = [tuple(r[:ncols]) for r in augmented]
    u = [tuple(r[ncols:]) for r in augmented]
    return h, u


def member(v: Sequence[int], lattice: Lattice) -> bool:
    """Back-substitution against the HNF basis with exact division"""
    if len(v) != lattice.ambient_dim:
        raise DomainError("DimensionMismatch",
                          f"vector of length {len(v)} in dimension {lattice.ambient_dim}")
    vec = list(v)
    pivot_at = {j: row for row, j in zip(lattice.basis, lattice.pivots)}
    for j in range(lattice.ambient_dim):
        b = vec[j]
        if not b:
            continue
        row = pivot_at.get(j)
        if row is None or b % row[j]:
            return False
        q = b // row[j]
        for k in range(j, lattice.ambient_dim):
            vec[k] -= q * row[k]
    return True


def express(v: Sequence[int], lattice: Lattice) -> Optional[Vector]:
    """Coefficients c with c * basis == v, or None"""
    vec = list(v)
    coeffs = [0] * lattice.rank
    pivot_at = {j: i for i, j in enumerate(lattice.pivots)}
    for j in range(lattice.ambient_dim):
        b = vec[j]
        if not b:
            continue
        i = pivot_at.get(j)
        if i is None:
            return None
        row = lattice.basis[i]
        if b % row[j]:
            return None
        q = b // row[j]
        coeffs[i] = q
        for k in range(j, lattice.ambient_dim):
            vec[k] -= q * row[k]
    return tuple(coeffs)


def solve(v: Sequence[int], rows: Rows, ncols: Optional[int] = None) -> Optional[Vector]:
    """Integer c with sum_i c_i * rows[i] == v, or None when v is outside the span"""
    ncols = len(v) if ncols is None else ncols
    if not rows:
        return () if not any(v) else None
    h, u = hnf_with_transform(rows, ncols)
    nonzero = [i for i, r in enumerate(h) if any(r)]
    span = Lattice(ncols, tuple(h[i] for i in nonzero),
                   tuple(next(j for j, x in enumerate(h[i]) if x) for i in nonzero))
    d = express(v, span)
    if d is None:
        return None
    m = len(rows)
    c = [0] * m
    for coeff, i in zip(d, nonzero):
        if coeff:
            for k in range(m):
                c[k] += coeff * u[i][k]
    return tuple(c)


def left_kernel(rows: Rows, ncols: int) -> Lattice:
    """Lattice of x in Z^len(rows) with x * A == 0"""
    m = len(rows)
    if m == 0:
        return Lattice.zero(0)
    h, u = hnf_with_transform(rows, ncols)
    kernel = [u[i] for i, r in enumerate(h) if not any(r)]
    return hnf_rows(kernel, m)


def lattice_sum(*lattices: Lattice) -> Lattice:
    dim = lattices[0].ambient_dim
    rows = [r for lat in lattices for r in lat.basis]
    return hnf_rows(rows, dim)


def contains(outer: Lattice, inner: Lattice) -> bool:
    return all(member(r, outer) for r in inner.basis)


def saturate(lattice: Lattice) -> Lattice:
    """{v : k*v in L for some k != 0}, computed as the double orthogonal"""
    dim = lattice.ambient_dim
    if lattice.is_zero():
        return lattice
    orthogonal = left_kernel(transpose(lattice.basis, dim), lattice.rank)
    if orthogonal.is_zero():
        return Lattice.full(dim)
    return left_kernel(transpose(orthogonal.basis, dim), orthogonal.rank)


def snf_diagonal(m: IntMatrix) -> Tuple[int, ...]:
    """Smith invariant factors d1 | d2 | ... (zeros last for the free part)"""
    size = min(m.rows, m.cols)
    if size == 0:
        return ()
    factors = invariant_factors(Matrix([list(r) for r in m.to_rows()]), domain=ZZ)
    nonzero = sorted(abs(int(d)) for d in factors if d)
    return tuple(nonzero) + (0,) * (size - len(nonzero))


def group_invariants(lattice: Lattice) -> Tuple[Tuple[int, ...], int]:
    """(torsion invariants > 1, free rank) of Z^d / L"""
    if lattice.is_zero():
        return (), lattice.ambient_dim
    diag = snf_diagonal(IntMatrix.from_rows(lattice.basis, lattice.ambient_dim))
    torsion = tuple(d for d in diag if d > 1)
    return torsion, lattice.ambient_dim - lattice.rank
