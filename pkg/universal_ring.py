"""
Rings as lattices: Z^d modulo an HNF lattice, with bilinear structure
constants.  Universal rings R_A, residue and product rings, quotients,
localizations at one element and the finite-ring ideal machinery all live
here.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

from engine_errors import DomainError, LimitError
from engine_settings import get_settings
from lattice_core import (Lattice, Vector, contains, group_invariants, hnf_rows,
                          lattice_sum, left_kernel, saturate, solve, unit_vector,
                          zero_vector)
from logging_config import get_logger

# struct[i][j] is a sparse product e_i * e_j: tuple of (k, coefficient)
Struct = Tuple[Tuple[Tuple[Tuple[int, int], ...], ...], ...]

SATURATION_CAP = 64


class LatticeRing:
    """Commutative ring Z^dim / lattice with multiplication given by struct"""

    def __init__(self, dim: int, lattice: Lattice, struct: Struct, one: Sequence[int], label: str = "ring"):
        self.dim = dim
        self.lattice = lattice
        self.struct = struct
        self.label = label
        self.one = self.reduce(one)
        self.zero = zero_vector(dim)

    # arithmetic

    def reduce(self, v: Sequence[int]) -> Vector:
        return self.lattice.reduce(v)

    def add(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        return self.reduce([a + b for a, b in zip(u, v)])

    def sub(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        return self.reduce([a - b for a, b in zip(u, v)])

    def neg(self, u: Sequence[int]) -> Vector:
        return self.reduce([-a for a in u])

    def scale(self, k: int, u: Sequence[int]) -> Vector:
        return self.reduce([k * a for a in u])

    def mul_raw(self, u: Sequence[int], v: Sequence[int]) -> List[int]:
        out = [0] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.struct[i]
            for j, vj in enumerate(v):
                if not vj:
                    continue
                c = ui * vj
                for k, s in row[j]:
                    out[k] += c * s
        return out

    def mul(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        return self.reduce(self.mul_raw(u, v))

    def power(self, u: Sequence[int], k: int) -> Vector:
        result = self.one
        base = self.reduce(u)
        while k > 0:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def prod(self, vectors: Iterable[Sequence[int]]) -> Vector:
        result = self.one
        for v in vectors:
            result = self.mul(result, v)
        return result

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.reduce(u) == self.reduce(v)

    def is_zero(self, u: Sequence[int]) -> bool:
        return not any(self.reduce(u))

    # structure

    def is_zero_ring(self) -> bool:
        return self.lattice.is_full_rank() and self.lattice.index() == 1

    def is_finite(self) -> bool:
        return self.lattice.is_full_rank()

    def cardinality(self) -> Optional[int]:
        """Number of elements, None when infinite"""
        return self.lattice.index()

    @cached_property
    def invariants(self) -> Tuple[Tuple[int, ...], int]:
        """(torsion invariants, free rank) of the additive group"""
        return group_invariants(self.lattice)

    def elements(self) -> List[Vector]:
        size = self.cardinality()
        if size is None:
            raise LimitError("RingInfinite", f"{self.label} is infinite")
        if size > get_settings().ring_limit:
            raise LimitError("RingTooLarge", f"{self.label} has {size} elements",
                             size=size, limit=get_settings().ring_limit)
        return list(self.lattice.residues())

    def multiples(self, x: Sequence[int]) -> List[Vector]:
        """x * e_i for every basis vector"""
        return [tuple(self.mul_raw(x, unit_vector(self.dim, i))) for i in range(self.dim)]

    def ideal(self, gens: Iterable[Sequence[int]]) -> Lattice:
        """Lattice of the ideal generated by gens (contains the relation lattice)"""
        rows = [r for g in gens for r in self.multiples(g)]
        rows.extend(self.lattice.basis)
        return hnf_rows(rows, self.dim)

    def annihilator(self, x: Sequence[int]) -> Lattice:
        """{y : x*y = 0}, as a lattice containing the relation lattice"""
        rows = self.multiples(x) + list(self.lattice.basis)
        kernel = left_kernel(rows, self.dim)
        projected = [r[:self.dim] for r in kernel.basis]
        projected.extend(self.lattice.basis)
        return hnf_rows(projected, self.dim)

    def inverse(self, x: Sequence[int]) -> Optional[Vector]:
        """Inverse of x, or None when x is not a unit"""
        rows = self.multiples(x) + list(self.lattice.basis)
        coeffs = solve(self.one, rows, self.dim)
        if coeffs is None:
            return None
        return self.reduce(coeffs[:self.dim])

    def is_unit(self, x: Sequence[int]) -> bool:
        return self.inverse(x) is not None

    def quotient(self, ideal: Lattice, label: Optional[str] = None) -> "LatticeRing":
        return LatticeRing(self.dim, lattice_sum(self.lattice, ideal), self.struct, self.one,
                           label or f"{self.label}/I")

    def describe(self) -> Dict:
        torsion, free_rank = self.invariants
        return {
            "dimension": self.dim,
            "cardinality": self.cardinality(),
            "torsion_invariants": list(torsion),
            "free_rank": free_rank,
        }


def integer_ring() -> LatticeRing:
    return LatticeRing(1, Lattice.zero(1), ((((0, 1),),),), (1,), "Z")


def residue_ring(moduli: Sequence[int]) -> LatticeRing:
    """Product of the residue rings Z/m for m in moduli"""
    dim = len(moduli)
    struct = tuple(tuple(((i, 1),) if i == j else () for j in range(dim)) for i in range(dim))
    lattice = hnf_rows([unit_vector(dim, i, m) for i, m in enumerate(moduli)], dim)
    label = "x".join(f"Z/{m}" for m in moduli)
    return LatticeRing(dim, lattice, struct, (1,) * dim, label)


def product_ring(rings: Sequence[LatticeRing]) -> LatticeRing:
    """Block product; coordinates of the factors are concatenated"""
    offsets = []
    dim = 0
    for r in rings:
        offsets.append(dim)
        dim += r.dim
    struct: List[List[Tuple]] = [[() for _ in range(dim)] for _ in range(dim)]
    rows = []
    one: List[int] = []
    for r, off in zip(rings, offsets):
        for i in range(r.dim):
            for j in range(r.dim):
                struct[off + i][off + j] = tuple((off + k, c) for k, c in r.struct[i][j])
        for row in r.lattice.basis:
            rows.append((0,) * off + row + (0,) * (dim - off - r.dim))
        one.extend(r.one)
    label = " x ".join(r.label for r in rings) or "0"
    return LatticeRing(dim, hnf_rows(rows, dim), tuple(tuple(s) for s in struct), one, label)


def split_vector(rings: Sequence[LatticeRing], v: Sequence[int]) -> List[Vector]:
    out = []
    off = 0
    for r in rings:
        out.append(tuple(v[off:off + r.dim]))
        off += r.dim
    return out


def tensor_ring(a: LatticeRing, b: LatticeRing) -> LatticeRing:
    """a (x) b with basis e_i (x) f_j at index i * b.dim + j"""
    dim = a.dim * b.dim

    def idx(i, j):
        return i * b.dim + j

    struct = [[() for _ in range(dim)] for _ in range(dim)]
    for i, j, k, l in cartesian(range(a.dim), range(b.dim), range(a.dim), range(b.dim)):
        terms: Dict[int, int] = {}
        for p, c in a.struct[i][k]:
            for q, d in b.struct[j][l]:
                terms[idx(p, q)] = terms.get(idx(p, q), 0) + c * d
        struct[idx(i, j)][idx(k, l)] = tuple((t, c) for t, c in sorted(terms.items()) if c)
    rows = []
    for row in a.lattice.basis:
        for j in range(b.dim):
            rows.append(tensor_vectors(row, unit_vector(b.dim, j)))
    for i in range(a.dim):
        for row in b.lattice.basis:
            rows.append(tensor_vectors(unit_vector(a.dim, i), row))
    one = tensor_vectors(a.one, b.one)
    return LatticeRing(dim, hnf_rows(rows, dim), tuple(tuple(s) for s in struct), one,
                       f"({a.label}) (x) ({b.label})")


def tensor_vectors(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(x * y for x in u for y in v)


class UniversalRing(LatticeRing):
    """R_A = Z_0[A] / I(A); basis = the nonzero elements of A in index order"""

    def __init__(self, dim, lattice, struct, one, basis_elements: Tuple[int, ...],
                 images: Tuple[Vector, ...], label: str = "R_A"):
        super().__init__(dim, lattice, struct, one, label)
        self.basis_elements = basis_elements
        self.raw_images = images
        self.images = tuple(self.reduce(v) for v in images)

    def image(self, a: int) -> Vector:
        return self.images[a]

    def element_of(self, v: Sequence[int]) -> Optional[int]:
        """Index of the element of A whose image is v, if any"""
        return self._image_index.get(self.reduce(v))

    @cached_property
    def _image_index(self) -> Dict[Vector, int]:
        index: Dict[Vector, int] = {}
        for a, v in enumerate(self.images):
            index.setdefault(v, a)
        return index

    def difference(self, a: int, b: int) -> Vector:
        return self.sub(self.images[a], self.images[b])


def build(sesquiad) -> UniversalRing:
    """Universal ring of a sesquiad.

    The relation lattice is spanned by the monoid translates x*r of the
    declared relation vectors; kernels handed over by ``from_embedding`` are
    already ideals and are used as they are.
    """
    logger = get_logger()
    table = sesquiad.table
    n = table.size
    basis_elements = tuple(i for i in range(n) if i != table.zero)
    dim = len(basis_elements)
    pos = {a: k for k, a in enumerate(basis_elements)}

    def img(a: int) -> Vector:
        if a == table.zero:
            return zero_vector(dim)
        return unit_vector(dim, pos[a])

    relation_vectors = []
    for rel in sesquiad.relations:
        v = [0] * dim
        for coeff, a in rel.terms:
            if a != table.zero:
                v[pos[a]] += coeff
        if rel.sum != table.zero:
            v[pos[rel.sum]] -= 1
        if any(v):
            relation_vectors.append(tuple(v))

    if sesquiad.ideal_closed:
        rows = relation_vectors
    else:
        rows = []
        for x in basis_elements:
            for v in relation_vectors:
                w = [0] * dim
                for k, c in enumerate(v):
                    if c:
                        p = table.mul[x][basis_elements[k]]
                        if p != table.zero:
                            w[pos[p]] += c
                if any(w):
                    rows.append(tuple(w))
    lattice = hnf_rows(rows, dim)

    struct = tuple(
        tuple(((pos[table.mul[a][b]], 1),) if table.mul[a][b] != table.zero else ()
              for b in basis_elements)
        for a in basis_elements)
    one = img(table.one) if dim else ()
    ring = UniversalRing(dim, lattice, struct, one, basis_elements,
                         tuple(img(a) for a in range(n)), label="R_A")
    logger.debug("Universal ring built", dimension=dim, relations=len(rows),
                 rank=lattice.rank, cardinality=ring.cardinality())

    seen: Dict[Vector, int] = {}
    for a in range(n):
        v = ring.images[a]
        if v in seen:
            raise DomainError("AdditionCollapses",
                              f"elements {table.elements[seen[v]]} and {table.elements[a]} "
                              f"coincide in the universal ring",
                              first=table.elements[seen[v]], second=table.elements[a])
        seen[v] = a
    return ring


def is_nilpotent(ring: LatticeRing, x: Sequence[int]) -> bool:
    """x^k = 0 for some k.

    Over Q the free part has rank f, so a nilpotent x has x^max(f,1) in the
    torsion part (the saturation); powers there are tracked until zero or a
    repeat.
    """
    x = ring.reduce(x)
    if not any(x):
        return True
    torsion, free_rank = ring.invariants
    y = ring.power(x, max(free_rank, 1))
    if not any(y):
        return True
    if free_rank and any(saturate(ring.lattice).reduce(y)):
        return False
    cap = 1
    for t in torsion:
        cap *= t
    seen = set()
    power = y
    for _ in range(cap + 1):
        if not any(power):
            return True
        if power in seen:
            return False
        seen.add(power)
        power = ring.mul(power, y)
    return False


def congruence_ideal(ring: UniversalRing, table, class_of: Sequence[int]) -> Lattice:
    """J(C): ideal lattice spanned by x*(a - rep(a)) over x in A and a ~ rep(a)"""
    reps: Dict[int, int] = {}
    diffs = []
    for a, c in enumerate(class_of):
        if c not in reps:
            reps[c] = a
        else:
            diffs.append(ring.difference(a, reps[c]))
    return ideal_from_differences(ring, table, diffs)


def ideal_from_differences(ring: UniversalRing, table, diffs: Sequence[Vector]) -> Lattice:
    """Span of x*d for x in A, d in diffs, plus the relation lattice"""
    rows = list(ring.lattice.basis)
    for d in diffs:
        if not any(d):
            continue
        for x in ring.basis_elements:
            rows.append(tuple(ring.mul_raw(ring.images[x], d)))
    return hnf_rows(rows, ring.dim)


def quotient_by_congruence(sesquiad, class_of: Sequence[int]):
    """A/C with the addition induced by A/C -> R_A/J(C)"""
    from sesquiad import quotient_sesquiad
    from spectrum import Congruence, is_congruence

    congruence = Congruence.from_classes(class_of)
    if not is_congruence(sesquiad, congruence):
        raise DomainError("NotACongruence", "partition is not a congruence",
                          partition=congruence.signature(sesquiad))
    return quotient_sesquiad(sesquiad, congruence.class_of)


@dataclass(frozen=True)
class Fraction:
    """num / g^power with num canonical modulo the saturation kernel"""
    num: Vector
    power: int


class LocalizedRing:
    """S^-1 R for S generated by gens, realized as (R / K)[1/g] with g = prod(gens)"""

    def __init__(self, base: LatticeRing, gens: Sequence[Sequence[int]]):
        logger = get_logger()
        self.base = base
        self.gens = tuple(base.reduce(g) for g in gens)
        self.g = base.prod(self.gens)
        kernel = base.annihilator(self.g)
        g_power = self.g
        stabilized = 1
        while True:
            if stabilized > SATURATION_CAP:
                raise LimitError("SaturationDiverged", "annihilator chain did not stabilize",
                                 cap=SATURATION_CAP)
            g_power = base.mul(g_power, self.g)
            following = base.annihilator(g_power)
            if following == kernel:
                break
            kernel = following
            stabilized += 1
        self.kernel = kernel
        self.stabilized_at = stabilized
        self.quotient = LatticeRing(base.dim, kernel, base.struct, base.one, f"{base.label}[1/g]")
        self._g_inverse: Optional[Vector] = None
        if self.quotient.is_finite():
            self._g_inverse = self.quotient.inverse(self.g)
        logger.debug("Localized ring", generators=len(self.gens), stabilized_at=stabilized,
                     cardinality=self.quotient.cardinality())

    def is_zero_ring(self) -> bool:
        return self.quotient.is_zero_ring()

    def is_finite(self) -> bool:
        return self.quotient.is_finite()

    def cardinality(self) -> Optional[int]:
        return self.quotient.cardinality()

    def fraction(self, x: Sequence[int], k: int = 0) -> Fraction:
        """Canonical form of x / g^k"""
        q = self.quotient
        num = q.reduce(x)
        if self._g_inverse is not None:
            if k:
                num = q.mul(num, q.power(self._g_inverse, k))
            return Fraction(num, 0)
        multiples = q.multiples(self.g) + list(q.lattice.basis)
        while k > 0:
            coeffs = solve(num, multiples, q.dim)
            if coeffs is None:
                break
            num = q.reduce(coeffs[:q.dim])
            k -= 1
        return Fraction(num, k)

    def value(self, x: Sequence[int], word: Sequence[int]) -> Fraction:
        """x / prod(gens[i]^word[i])"""
        if not word or not any(word):
            return self.fraction(x, 0)
        top = max(word)
        cofactor = self.base.prod(self.base.power(g, top - e) for g, e in zip(self.gens, word))
        return self.fraction(self.base.mul(x, cofactor), top)

    def mul_fraction(self, a: Fraction, b: Fraction) -> Fraction:
        return self.fraction(self.quotient.mul(a.num, b.num), a.power + b.power)

    def add_fraction(self, a: Fraction, b: Fraction) -> Fraction:
        q = self.quotient
        left = q.mul(a.num, q.power(self.g, b.power))
        right = q.mul(b.num, q.power(self.g, a.power))
        return self.fraction(q.add(left, right), a.power + b.power)

    def scaled(self, f: Fraction, power: int) -> Vector:
        """Numerator of f over the common denominator g^power (power >= f.power)"""
        return self.quotient.mul(f.num, self.quotient.power(self.g, power - f.power))

    def one(self) -> Fraction:
        return self.fraction(self.base.one, 0)

    def elements(self) -> List[Fraction]:
        return [Fraction(v, 0) for v in self.quotient.elements()]


def localize_ring(ring: LatticeRing, gens: Sequence[Sequence[int]]) -> LocalizedRing:
    return LocalizedRing(ring, gens)


def ring_ideals_finite(ring: LatticeRing) -> List[Lattice]:
    """All ideals of a finite ring, as sums of principal ideals"""
    logger = get_logger()
    size = ring.cardinality()
    if size is None:
        raise LimitError("RingInfinite", f"{ring.label} is infinite")
    if size > get_settings().ring_limit:
        raise LimitError("RingTooLarge", f"{ring.label} has {size} elements",
                         size=size, limit=get_settings().ring_limit)
    principal: Dict[Tuple, Lattice] = {}
    for x in ring.elements():
        lat = ring.ideal([x])
        principal.setdefault(lat.basis, lat)
    ideals: Dict[Tuple, Lattice] = dict(principal)
    frontier = list(ideals.values())
    while frontier:
        fresh = []
        for ideal in frontier:
            for p in principal.values():
                if contains(ideal, p):
                    continue
                s = lattice_sum(ideal, p)
                if s.basis not in ideals:
                    ideals[s.basis] = s
                    fresh.append(s)
        frontier = fresh
    logger.debug("Finite ring ideals", ring=ring.label, ideals=len(ideals))
    return sorted(ideals.values(), key=lambda lat: (-(lat.index() or 0), lat.basis))


@dataclass(frozen=True)
class PrimeIdealDescriptor:
    """Maximal ideal of a finite ring with the congruence it induces on A"""
    lattice: Lattice
    residue_size: int
    class_of: Optional[Tuple[int, ...]] = None


def ring_spectrum_finite(ring: LatticeRing) -> List[PrimeIdealDescriptor]:
    """Prime (= maximal) ideals of a finite commutative ring"""
    full = Lattice.full(ring.dim)
    proper = [i for i in ring_ideals_finite(ring) if i != full]
    maximal = [i for i in proper if not any(j != i and contains(j, i) for j in proper)]
    out = []
    for m in maximal:
        class_of = None
        if isinstance(ring, UniversalRing):
            residues: Dict[Vector, int] = {}
            class_of = tuple(residues.setdefault(m.reduce(v), len(residues)) for v in ring.images)
        out.append(PrimeIdealDescriptor(m, m.index(), class_of))
    return out


def is_field(ring: LatticeRing) -> bool:
    """Finite fields only: an infinite finitely generated ring is never a field"""
    size = ring.cardinality()
    if size is None or size < 2:
        return False
    # the additive group of a field is elementary abelian
    torsion, _ = ring.invariants
    if len(set(torsion)) != 1 or not sympy.isprime(torsion[0]):
        return False
    return all(ring.is_unit(x) for x in ring.elements() if any(x))


def _minimal_polynomial(ring: LatticeRing, u: Vector, limit: int) -> Optional[List[int]]:
    """Integer coefficients c_0..c_k of the least-degree relation among powers of u"""
    powers = [ring.one]
    for k in range(1, limit + 1):
        powers.append(ring.mul(powers[-1], u))
        rows = [tuple(p) for p in powers] + list(ring.lattice.basis)
        kernel = left_kernel(rows, ring.dim)
        for row in kernel.basis:
            coeffs = list(row[:k + 1])
            if any(coeffs):
                return coeffs
    return None


def is_integral_ring(ring: LatticeRing) -> bool:
    """Integral domain test.

    Finite rings: every nonzero element is a unit.  Infinite rings: no torsion
    and some element has an irreducible minimal polynomial over Q whose degree
    is the free rank, which makes R (x) Q a field.
    Raises LimitError when no candidate of full degree turns up.
    """
    size = ring.cardinality()
    if size is not None:
        return is_field(ring)
    torsion, free_rank = ring.invariants
    if torsion:
        return False
    t = sympy.Symbol("t")
    for attempt in range(1, 9):
        u = ring.reduce([(attempt * (i + 3)) % 7 - 3 + (i == 0) for i in range(ring.dim)])
        coeffs = _minimal_polynomial(ring, u, free_rank)
        if coeffs is None or len(coeffs) - 1 < free_rank:
            continue
        poly = sympy.Poly(list(reversed(coeffs)), t, domain=sympy.QQ)
        return bool(poly.is_irreducible)
    raise LimitError("PrimitiveElementNotFound", f"no primitive element found for {ring.label}",
                     free_rank=free_rank)


def ring_hom_matrix(source: UniversalRing, target: UniversalRing, mapping: Sequence[int]) -> List[Vector]:
    """Rows: images in R_B of the basis vectors of R_A under the induced map"""
    return [target.images[mapping[a]] for a in source.basis_elements]


def apply_hom(rows: Sequence[Vector], target: LatticeRing, v: Sequence[int]) -> Vector:
    out = [0] * target.dim
    for c, row in zip(v, rows):
        if c:
            for k, x in enumerate(row):
                out[k] += c * x
    return target.reduce(out)


def hom_kernel(source: LatticeRing, target: LatticeRing, rows: Sequence[Vector]) -> Lattice:
    """Kernel of the induced map as a lattice of source coordinates"""
    stacked = list(rows) + list(target.lattice.basis)
    if not stacked:
        return Lattice.zero(source.dim)
    kernel = left_kernel(stacked, target.dim)
    projected = [r[:source.dim] for r in kernel.basis] + list(source.lattice.basis)
    return hnf_rows(projected, source.dim)
