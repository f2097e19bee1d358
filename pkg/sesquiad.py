"""
Finite sesquiads: a commutative monoid with zero plus a partial addition,
stored as a generating list of addition relations and validated through the
universal ring.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import product as cartesian
from typing import Dict, List, Optional, Sequence, Tuple

from engine_errors import DomainError
from lattice_core import Lattice, Vector, hnf_rows, left_kernel
from logging_config import get_logger
from universal_ring import (LatticeRing, LocalizedRing, UniversalRing, build,
                            hom_kernel, localize_ring, product_ring, residue_ring,
                            ring_hom_matrix, tensor_ring, tensor_vectors)


class Provenance(Enum):
    ABSTRACT = "abstract"
    PAIR = "pair"
    EMBEDDED = "embedded"


@dataclass(frozen=True)
class MonoidTable:
    """Multiplication table of a commutative monoid with zero"""
    elements: Tuple[str, ...]
    zero: int
    one: int
    mul: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise DomainError("UnknownElement", f"no element named {name!r}", element=name)

    def product(self, a: int, b: int) -> int:
        return self.mul[a][b]


@dataclass(frozen=True)
class AdditionRelation:
    """sum_j k_j * a_j = sum"""
    terms: Tuple[Tuple[int, int], ...]
    sum: int
    padded: bool = False


@dataclass(frozen=True)
class FiniteRingDescriptor:
    """Product of residue rings Z/m together with a multiplicative subset"""
    moduli: Tuple[int, ...]
    subset: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Sesquiad:
    table: MonoidTable
    relations: Tuple[AdditionRelation, ...] = ()
    provenance: Provenance = Provenance.ABSTRACT
    descriptor: Optional[FiniteRingDescriptor] = None
    ideal_closed: bool = False
    notes: Tuple[str, ...] = field(default=(), compare=False)

    @cached_property
    def ring(self) -> UniversalRing:
        return build(self)

    @property
    def size(self) -> int:
        return self.table.size

    @property
    def elements(self) -> Tuple[str, ...]:
        return self.table.elements

    def name(self, a: int) -> str:
        return self.table.elements[a]

    def is_zero_sesquiad(self) -> bool:
        return self.table.size == 1


@dataclass(frozen=True)
class SesquiadMorphism:
    source: Sesquiad
    target: Sesquiad
    map: Tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.map[a]

    @cached_property
    def hom_rows(self) -> List[Vector]:
        return ring_hom_matrix(self.source.ring, self.target.ring, self.map)


def check_table(table: MonoidTable) -> None:
    """Raise unless the table is a commutative monoid with zero"""
    n = table.size
    if n == 0:
        raise DomainError("NoZero", "empty element list")
    if len(table.mul) != n or any(len(row) != n for row in table.mul):
        raise DomainError("DimensionMismatch", "multiplication table is not square", size=n)
    for a in range(n):
        for b in range(n):
            if not 0 <= table.mul[a][b] < n:
                raise DomainError("NotClosed", "product outside the element list",
                                  left=table.elements[a], right=table.elements[b])
    for a in range(n):
        if table.mul[table.zero][a] != table.zero:
            raise DomainError("NoZero", f"{table.elements[table.zero]} does not absorb {table.elements[a]}")
        if table.mul[table.one][a] != a:
            raise DomainError("NoOne", f"{table.elements[table.one]} is not neutral on {table.elements[a]}")
    for a in range(n):
        for b in range(a + 1, n):
            if table.mul[a][b] != table.mul[b][a]:
                raise DomainError("NotCommutative", "multiplication is not commutative",
                                  left=table.elements[a], right=table.elements[b])
    for a, b, c in cartesian(range(n), repeat=3):
        if table.mul[table.mul[a][b]][c] != table.mul[a][table.mul[b][c]]:
            raise DomainError("NotAssociative", "multiplication is not associative",
                              triple=[table.elements[a], table.elements[b], table.elements[c]])


def normalize_relations(table: MonoidTable, relations: Sequence[AdditionRelation]) -> Tuple[Tuple[AdditionRelation, ...], Tuple[str, ...]]:
    """Pad unary relations with a zero summand and record a note for them"""
    out = []
    notes = []
    for rel in relations:
        if not rel.terms:
            raise DomainError("EmptyRelation", "an addition relation needs at least one term")
        if len(rel.terms) == 1:
            coeff, a = rel.terms[0]
            rel = AdditionRelation(((coeff, a), (1, table.zero)), rel.sum, padded=True)
            notes.append(f"unary relation {coeff}*{table.elements[a]} = {table.elements[rel.sum]} "
                         f"padded with a zero summand")
        out.append(rel)
    return tuple(out), tuple(notes)


def validate(table: MonoidTable, relations: Sequence[AdditionRelation] = (),
             provenance: Provenance = Provenance.ABSTRACT,
             descriptor: Optional[FiniteRingDescriptor] = None,
             allow_zero: bool = False) -> Sesquiad:
    """Check the table, build R_A and verify that A injects into it"""
    check_table(table)
    if table.size == 1 and not allow_zero:
        raise DomainError("ZeroSesquiad", "the zero sesquiad is not accepted as input")
    rels, notes = normalize_relations(table, relations)
    sesquiad = Sesquiad(table, rels, provenance, descriptor, notes=notes)
    sesquiad.ring  # raises AdditionCollapses
    get_logger().debug("Sesquiad validated", elements=table.size, relations=len(rels))
    return sesquiad


def trivial_addition(table: MonoidTable) -> Sesquiad:
    return validate(table, ())


def zero_sesquiad() -> Sesquiad:
    table = MonoidTable(("0",), 0, 0, ((0,),))
    return Sesquiad(table, (), Provenance.EMBEDDED, ideal_closed=True)


def table_from_products(names: Sequence[str], zero: int, one: int, product) -> MonoidTable:
    n = len(names)
    return MonoidTable(tuple(names), zero, one,
                       tuple(tuple(product(a, b) for b in range(n)) for a in range(n)))


def kernel_relations(images: Sequence[Vector], lattice: Lattice, zero: int) -> Tuple[Tuple[int, ...], List[Vector]]:
    """HNF basis of {c : sum c_a * images[a] in lattice} over the nonzero elements"""
    basis_elements = tuple(a for a in range(len(images)) if a != zero)
    rows = [images[a] for a in basis_elements] + list(lattice.basis)
    if not basis_elements:
        return basis_elements, []
    kernel = left_kernel(rows, lattice.ambient_dim)
    m = len(basis_elements)
    projected = hnf_rows([r[:m] for r in kernel.basis], m)
    return basis_elements, list(projected.basis)


def from_embedding(table: MonoidTable, ring: LatticeRing, images: Sequence[Sequence[int]],
                   provenance: Provenance = Provenance.EMBEDDED,
                   descriptor: Optional[FiniteRingDescriptor] = None,
                   extra_relations: Sequence[AdditionRelation] = ()) -> Sesquiad:
    """Sesquiad with the maximal addition induced by an injective additive realization.

    Only the additive kernel of ``images`` is used, so fractions may be passed
    as numerators over one common denominator that is a nonzerodivisor.
    """
    check_table(table)
    reduced = [ring.reduce(v) for v in images]
    seen: Dict[Vector, int] = {}
    for a, v in enumerate(reduced):
        if v in seen:
            raise DomainError("NotInjective", "two elements share an image",
                              first=table.elements[seen[v]], second=table.elements[a])
        seen[v] = a
    basis_elements, kernel = kernel_relations(reduced, ring.lattice, table.zero)
    relations = []
    for row in kernel:
        terms = tuple((c, basis_elements[k]) for k, c in enumerate(row) if c)
        relations.append(AdditionRelation(terms, table.zero))
    relations.extend(extra_relations)
    sesquiad = Sesquiad(table, tuple(relations), provenance, descriptor, ideal_closed=True)
    sesquiad.ring
    return sesquiad


def residue_name(v: Sequence[int]) -> str:
    if len(v) == 1:
        return str(v[0])
    return "(" + ",".join(str(x) for x in v) + ")"


def from_pair(descriptor: FiniteRingDescriptor) -> Sesquiad:
    """The sesquiad (A, R) for a multiplicative subset A of a product of residue rings"""
    moduli = tuple(descriptor.moduli)
    if not moduli or any(m < 1 for m in moduli):
        raise DomainError("BadModuli", "moduli must be positive integers", moduli=list(moduli))
    ring = residue_ring(moduli)
    elements = sorted({tuple(x % m for x, m in zip(v, moduli)) for v in descriptor.subset})
    for v in descriptor.subset:
        if len(v) != len(moduli):
            raise DomainError("DimensionMismatch", "subset tuple does not match the moduli",
                              element=list(v))
    zero = tuple(0 for _ in moduli)
    one = tuple(1 % m for m in moduli)
    if zero not in elements:
        raise DomainError("SubsetNotClosed", "subset does not contain 0", element=residue_name(zero))
    if one not in elements:
        raise DomainError("SubsetNotClosed", "subset does not contain 1", element=residue_name(one))
    index = {v: i for i, v in enumerate(elements)}

    def mul(a: int, b: int) -> int:
        p = tuple(x * y % m for x, y, m in zip(elements[a], elements[b], moduli))
        if p not in index:
            raise DomainError("SubsetNotClosed", "subset is not closed under multiplication",
                              element=residue_name(p), left=residue_name(elements[a]),
                              right=residue_name(elements[b]))
        return index[p]

    table = table_from_products([residue_name(v) for v in elements], index[zero], index[one], mul)
    pair_sums = []
    for a in range(len(elements)):
        for b in range(a, len(elements)):
            s = tuple((x + y) % m for x, y, m in zip(elements[a], elements[b], moduli))
            if s in index and index[zero] not in (a, b):
                pair_sums.append(AdditionRelation(((1, a), (1, b)), index[s]))
    sesquiad = from_embedding(table, ring, elements, Provenance.PAIR,
                              FiniteRingDescriptor(moduli, tuple(elements)),
                              extra_relations=pair_sums)
    get_logger().debug("Pair sesquiad", moduli=list(moduli), elements=len(elements),
                       ring_size=sesquiad.ring.cardinality())
    return sesquiad


def quotient_sesquiad(sesquiad: Sesquiad, class_of: Sequence[int]) -> Sesquiad:
    """A/C realized inside R_A / J(C); the caller has checked C is a congruence"""
    from universal_ring import congruence_ideal

    ring = sesquiad.ring
    ideal = congruence_ideal(ring, sesquiad.table, class_of)
    quotient = ring.quotient(ideal, "R_A/J")
    reps: Dict[int, int] = {}
    for a, c in enumerate(class_of):
        reps.setdefault(c, a)
    classes = sorted(reps)
    position = {c: i for i, c in enumerate(classes)}
    table = sesquiad.table

    def mul(i: int, j: int) -> int:
        return position[class_of[table.mul[reps[classes[i]]][reps[classes[j]]]]]

    names = [table.elements[reps[c]] for c in classes]
    qtable = table_from_products(names, position[class_of[table.zero]], position[class_of[table.one]], mul)
    images = [ring.images[reps[c]] for c in classes]
    return from_embedding(qtable, quotient, images)


def tensor(a: Sesquiad, b: Sesquiad) -> Sesquiad:
    """Decomposable tensors inside R_A (x) R_B"""
    ring = tensor_ring(a.ring, b.ring)
    values: List[Vector] = []
    names: List[str] = []
    pairs: Dict[Vector, int] = {}
    for x in range(a.size):
        for y in range(b.size):
            v = ring.reduce(tensor_vectors(a.ring.images[x], b.ring.images[y]))
            if v in pairs:
                continue
            pairs[v] = len(values)
            values.append(v)
            if not any(v):
                names.append("0")
            elif x == a.table.one and y == b.table.one:
                names.append("1")
            else:
                names.append(f"{a.name(x)}⊗{b.name(y)}")
    zero = pairs[ring.zero]
    one = pairs[ring.one]

    def mul(i: int, j: int) -> int:
        return pairs[ring.mul(values[i], values[j])]

    table = table_from_products(names, zero, one, mul)
    get_logger().debug("Tensor product", elements=len(values), dimension=ring.dim)
    return from_embedding(table, ring, values)


def direct_product(a: Sesquiad, b: Sesquiad) -> Sesquiad:
    """Componentwise A x B inside R_A x R_B"""
    ring = product_ring([a.ring, b.ring])
    pairs = [(x, y) for x in range(a.size) for y in range(b.size)]
    index = {p: i for i, p in enumerate(pairs)}

    def mul(i: int, j: int) -> int:
        (x1, y1), (x2, y2) = pairs[i], pairs[j]
        return index[(a.table.mul[x1][x2], b.table.mul[y1][y2])]

    names = [f"({a.name(x)},{b.name(y)})" for x, y in pairs]
    table = table_from_products(names, index[(a.table.zero, b.table.zero)],
                                index[(a.table.one, b.table.one)], mul)
    images = [a.ring.images[x] + b.ring.images[y] for x, y in pairs]
    return from_embedding(table, ring, images)


def projections(a: Sesquiad, b: Sesquiad, product: Sesquiad) -> Tuple[SesquiadMorphism, SesquiadMorphism]:
    """The two projections of direct_product(a, b); element i is the pair (i // |B|, i % |B|)"""
    first = tuple(i // b.size for i in range(product.size))
    second = tuple(i % b.size for i in range(product.size))
    return (validate_morphism(product, a, first), validate_morphism(product, b, second))


def relation_vector(sesquiad: Sesquiad, rel: AdditionRelation, mapping: Optional[Sequence[int]] = None,
                    target: Optional[Sesquiad] = None) -> Vector:
    """Image in R_target of sum k_j a_j - sum, after transporting along mapping"""
    target = target or sesquiad
    ring = target.ring
    f = (lambda a: mapping[a]) if mapping is not None else (lambda a: a)
    v = [0] * ring.dim
    for coeff, a in rel.terms:
        for k, x in enumerate(ring.images[f(a)]):
            v[k] += coeff * x
    for k, x in enumerate(ring.images[f(rel.sum)]):
        v[k] -= x
    return tuple(v)


def validate_morphism(a: Sesquiad, b: Sesquiad, mapping: Sequence[int]) -> SesquiadMorphism:
    mapping = tuple(mapping)
    if len(mapping) != a.size or any(not 0 <= x < b.size for x in mapping):
        raise DomainError("NotTotal", "map must send every element of the source into the target")
    if mapping[a.table.zero] != b.table.zero:
        raise DomainError("NotMultiplicative", "zero is not mapped to zero")
    if mapping[a.table.one] != b.table.one:
        raise DomainError("NotMultiplicative", "one is not mapped to one")
    for x in range(a.size):
        for y in range(x, a.size):
            if mapping[a.table.mul[x][y]] != b.table.mul[mapping[x]][mapping[y]]:
                raise DomainError("NotMultiplicative", "map is not multiplicative",
                                  left=a.name(x), right=a.name(y))
    for rel in a.relations:
        v = relation_vector(a, rel, mapping, b)
        if any(b.ring.reduce(v)):
            raise DomainError("AdditionNotPreserved", "a relation of the source fails in the target",
                              relation=describe_relation(a, rel))
    return SesquiadMorphism(a, b, mapping)


def identity_morphism(a: Sesquiad) -> SesquiadMorphism:
    return SesquiadMorphism(a, a, tuple(range(a.size)))


def compose(first: SesquiadMorphism, second: SesquiadMorphism) -> SesquiadMorphism:
    """second after first"""
    return SesquiadMorphism(first.source, second.target,
                            tuple(second.map[x] for x in first.map))


def is_embedding(m: SesquiadMorphism) -> bool:
    """The induced ring map R_A -> R_B is injective"""
    kernel = hom_kernel(m.source.ring, m.target.ring, m.hom_rows)
    source_lattice = m.source.ring.lattice
    return all(source_lattice.reduce(r) == (0,) * source_lattice.ambient_dim for r in kernel.basis)


def unit_group(a: Sesquiad) -> Tuple[int, ...]:
    t = a.table
    return tuple(x for x in range(a.size) if any(t.mul[x][y] == t.one for y in range(a.size)))


def is_local(m: SesquiadMorphism) -> bool:
    """phi^-1(B^x) = A^x"""
    target_units = set(unit_group(m.target))
    preimage = {x for x in range(m.source.size) if m.map[x] in target_units}
    return preimage == set(unit_group(m.source))


def is_integral(a: Sesquiad) -> bool:
    """0 != 1 and every nonzero element cancels"""
    t = a.table
    if t.zero == t.one:
        return False
    for f in range(a.size):
        if f == t.zero:
            continue
        row = t.mul[f]
        if len(set(row)) != a.size:
            return False
    return True


def is_group_with_zero(a: Sesquiad) -> bool:
    return a.size > 1 and len(unit_group(a)) == a.size - 1


def has_trivial_addition(a: Sesquiad) -> bool:
    return a.ring.lattice.is_zero()


def defined_sum(a: Sesquiad, terms: Sequence[Tuple[int, int]]) -> Optional[int]:
    """The element equal to sum k_j a_j in R_A, or None when the sum is undefined in A"""
    ring = a.ring
    v = [0] * ring.dim
    for coeff, x in terms:
        for k, c in enumerate(ring.images[x]):
            v[k] += coeff * c
    return ring.element_of(v)


def describe_relation(a: Sesquiad, rel: AdditionRelation) -> str:
    parts = []
    for coeff, x in rel.terms:
        parts.append(a.name(x) if coeff == 1 else f"{coeff}*{a.name(x)}")
    return " + ".join(parts) + f" = {a.name(rel.sum)}"


def enumerate_morphisms(a: Sesquiad, b: Sesquiad) -> List[SesquiadMorphism]:
    """All sesquiad morphisms A -> B by brute force over multiplicative maps"""
    free = [x for x in range(a.size) if x not in (a.table.zero, a.table.one)]
    out = []
    for choice in cartesian(range(b.size), repeat=len(free)):
        mapping = [0] * a.size
        mapping[a.table.zero] = b.table.zero
        mapping[a.table.one] = b.table.one
        for x, y in zip(free, choice):
            mapping[x] = y
        try:
            out.append(validate_morphism(a, b, mapping))
        except DomainError:
            continue
    return out


@dataclass
class LocalizedSesquiad:
    """S^-1 A together with the localized ring its fractions live in"""
    sesquiad: Sesquiad
    localized: Optional[LocalizedRing]
    fractions: Tuple = ()


def localize_at_submonoid(a: Sesquiad, s: Sequence[int]) -> LocalizedSesquiad:
    """S^-1 A for a multiplicative subset S of A.

    A is finite, so the values are exactly the fractions x/t with x in A and
    t in S; they are realized over the common denominator g^top.
    """
    s = sorted(set(s))
    t = a.table
    if t.one not in s:
        raise DomainError("NotMultiplicative", "the submonoid must contain 1")
    for x in s:
        for y in s:
            if t.mul[x][y] not in s:
                raise DomainError("NotMultiplicative", "subset is not multiplicatively closed",
                                  left=a.name(x), right=a.name(y))
    if t.zero in s:
        return LocalizedSesquiad(zero_sesquiad(), None)
    ring = a.ring
    denominators = [x for x in s if x != t.one]
    loc = localize_ring(ring, [ring.images[x] for x in denominators])
    values: Dict = {}
    for x in range(a.size):
        values.setdefault(loc.fraction(ring.images[x], 0), a.name(x))
    for k, d in enumerate(denominators):
        word = [0] * len(denominators)
        word[k] = 1
        for x in range(a.size):
            values.setdefault(loc.value(ring.images[x], word), f"{a.name(x)}/{a.name(d)}")
    return materialize_fractions(loc, values)


def materialize_fractions(loc: LocalizedRing, values: Dict) -> LocalizedSesquiad:
    """Sesquiad on a multiplicatively closed set of fractions, keyed to their names"""
    fracs = list(values)
    index = {f: i for i, f in enumerate(fracs)}
    zero = index[loc.fraction(loc.base.zero, 0)]
    one = index[loc.one()]

    def mul(i: int, j: int) -> int:
        product = loc.mul_fraction(fracs[i], fracs[j])
        if product not in index:
            raise DomainError("NotMultiplicative", "fractions are not closed under multiplication",
                              left=values[fracs[i]], right=values[fracs[j]])
        return index[product]

    table = table_from_products([values[f] for f in fracs], zero, one, mul)
    top = max(f.power for f in fracs)
    images = [loc.scaled(f, top) for f in fracs]
    sesquiad = from_embedding(table, loc.quotient, images)
    return LocalizedSesquiad(sesquiad, loc, tuple(fracs))
