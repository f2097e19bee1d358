"""
Congruences, prime congruences and the finite space spec_c.

Points are prime congruences; the topology is the Alexandrov topology of the
inclusion order, so opens are the downward closed point sets.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from engine_errors import DomainError, LimitError, UsageError
from engine_settings import get_settings
from lattice_core import Lattice
from logging_config import get_logger
from parallel_executor import get_executor
from universal_ring import (congruence_ideal, is_nilpotent,
                            ring_ideals_finite, ring_spectrum_finite)

STRATEGIES = ("auto", "ring", "group", "partitions")


@dataclass(frozen=True)
class Congruence:
    """Equivalence relation on element indices, as a restricted growth string"""
    class_of: Tuple[int, ...]

    @classmethod
    def from_classes(cls, labels: Sequence) -> "Congruence":
        renumber: Dict = {}
        return cls(tuple(renumber.setdefault(x, len(renumber)) for x in labels))

    @classmethod
    def diagonal(cls, size: int) -> "Congruence":
        return cls(tuple(range(size)))

    @property
    def size(self) -> int:
        return len(self.class_of)

    @property
    def num_classes(self) -> int:
        return max(self.class_of) + 1 if self.class_of else 0

    def is_diagonal(self) -> bool:
        return self.num_classes == self.size

    def same(self, a: int, b: int) -> bool:
        return self.class_of[a] == self.class_of[b]

    def blocks(self) -> List[Tuple[int, ...]]:
        out: Dict[int, List[int]] = {}
        for a, c in enumerate(self.class_of):
            out.setdefault(c, []).append(a)
        return [tuple(out[c]) for c in sorted(out)]

    def class_members(self, a: int) -> Tuple[int, ...]:
        c = self.class_of[a]
        return tuple(x for x, k in enumerate(self.class_of) if k == c)

    def __le__(self, other: "Congruence") -> bool:
        """self is contained in other as a set of pairs"""
        image: Dict[int, int] = {}
        for a, c in enumerate(self.class_of):
            if image.setdefault(c, other.class_of[a]) != other.class_of[a]:
                return False
        return True

    def signature(self, sesquiad) -> str:
        """Canonical label: the nontrivial blocks by element name, or Δ"""
        parts = ["{" + ",".join(sesquiad.name(a) for a in block) + "}"
                 for block in self.blocks() if len(block) > 1]
        return " ".join(parts) if parts else "Δ"


PrimeCongruence = Congruence


def congruence_meet(first: Congruence, second: Congruence) -> Congruence:
    return Congruence.from_classes(list(zip(first.class_of, second.class_of)))


def congruence_meet_all(congruences: Iterable[Congruence]) -> Optional[Congruence]:
    result = None
    for c in congruences:
        result = c if result is None else congruence_meet(result, c)
    return result


def is_multiplicative(table, class_of: Sequence[int]) -> bool:
    reps: Dict[int, int] = {}
    for a, c in enumerate(class_of):
        reps.setdefault(c, a)
    for a, c in enumerate(class_of):
        r = reps[c]
        if r == a:
            continue
        for x in range(table.size):
            if class_of[table.mul[x][a]] != class_of[table.mul[x][r]]:
                return False
    return True


def quotient_is_integral(table, class_of: Sequence[int]) -> bool:
    """A/C integral: [1] != [0] and every class off [0] cancels"""
    zero_class = class_of[table.zero]
    if class_of[table.one] == zero_class:
        return False
    reps: Dict[int, int] = {}
    for a, c in enumerate(class_of):
        reps.setdefault(c, a)
    for cf, f in reps.items():
        if cf == zero_class:
            continue
        seen = set()
        for c, a in reps.items():
            image = class_of[table.mul[f][a]]
            if image in seen:
                return False
            seen.add(image)
    return True


def _separated_in(sesquiad, class_of: Sequence[int], ideal: Lattice) -> bool:
    """a - b not in J for representatives of distinct classes"""
    ring = sesquiad.ring
    reps: Dict[int, int] = {}
    for a, c in enumerate(class_of):
        reps.setdefault(c, a)
    rep_list = list(reps.values())
    for i, a in enumerate(rep_list):
        for b in rep_list[i + 1:]:
            if ring.difference(a, b) in ideal:
                return False
    return True


def is_congruence(sesquiad, congruence: Union[Congruence, Sequence[int]]) -> bool:
    class_of = _class_of(congruence)
    if len(class_of) != sesquiad.size:
        raise DomainError("DimensionMismatch", "partition does not cover the element list")
    if not is_multiplicative(sesquiad.table, class_of):
        return False
    ideal = congruence_ideal(sesquiad.ring, sesquiad.table, class_of)
    return _separated_in(sesquiad, class_of, ideal)


def is_prime(sesquiad, congruence: Union[Congruence, Sequence[int]]) -> bool:
    class_of = _class_of(congruence)
    if not is_congruence(sesquiad, class_of):
        raise DomainError("NotACongruence", "partition is not a congruence",
                          partition=Congruence.from_classes(class_of).signature(sesquiad))
    return quotient_is_integral(sesquiad.table, class_of)


def _class_of(congruence) -> Tuple[int, ...]:
    if isinstance(congruence, Congruence):
        return congruence.class_of
    return tuple(congruence)


@dataclass(frozen=True)
class SpectrumC:
    """Prime congruences in canonical order with their inclusion order"""
    sesquiad: object
    points: Tuple[Congruence, ...]
    strategy: str = "auto"

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def order(self) -> Tuple[Tuple[bool, ...], ...]:
        """order[i][j] is True when point i is contained in point j"""
        return tuple(tuple(p <= q for q in self.points) for p in self.points)

    def leq(self, i: int, j: int) -> bool:
        return self.order[i][j]

    def label(self, i: int) -> str:
        return self.points[i].signature(self.sesquiad)

    def labels(self) -> List[str]:
        return [self.label(i) for i in range(len(self.points))]

    def index(self, point: Union[int, str, Congruence]) -> int:
        if isinstance(point, int):
            if not 0 <= point < len(self.points):
                raise UsageError("BadPoint", f"no point with index {point}", point=point)
            return point
        if isinstance(point, str):
            for i in range(len(self.points)):
                if self.label(i) == point:
                    return i
            raise UsageError("BadPoint", f"no point labelled {point!r}", point=point)
        for i, p in enumerate(self.points):
            if p == point:
                return i
        raise DomainError("NotAPoint", "congruence is not a point of the spectrum",
                          partition=point.signature(self.sesquiad))

    def all_points(self) -> FrozenSet[int]:
        return frozenset(range(len(self.points)))


def _canonical_points(points: Iterable[Congruence]) -> Tuple[Congruence, ...]:
    unique = set(points)
    return tuple(sorted(unique, key=lambda c: (-c.num_classes, c.class_of)))


# enumeration strategies


def _unit_elements(table) -> List[int]:
    return [x for x in range(table.size)
            if any(table.mul[x][y] == table.one for y in range(table.size))]


def _is_group_with_zero(table) -> bool:
    return table.size > 1 and len(_unit_elements(table)) == table.size - 1


def subgroups(table, units: Sequence[int]) -> List[FrozenSet[int]]:
    """All subgroups of a finite abelian group given by the monoid table"""

    def generated(gens: Iterable[int]) -> FrozenSet[int]:
        group = {table.one}
        frontier = [table.one]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = table.mul[x][g]
                    if y not in group:
                        group.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(group)

    cyclic = {generated([u]) for u in units}
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        fresh = []
        for h in frontier:
            for c in cyclic:
                if c <= h:
                    continue
                joined = generated(set(h) | set(c))
                if joined not in found:
                    found.add(joined)
                    fresh.append(joined)
        frontier = fresh
    return sorted(found, key=lambda h: (len(h), sorted(h)))


def subgroup_congruence(table, subgroup: FrozenSet[int]) -> Congruence:
    """E_H on a group with zero: 0 alone, x ~ y iff y lies in xH"""
    labels: List = [None] * table.size
    labels[table.zero] = ("zero",)
    for x in range(table.size):
        if labels[x] is None:
            coset = frozenset(table.mul[x][h] for h in subgroup)
            for y in coset:
                labels[y] = tuple(sorted(coset))
    return Congruence.from_classes(labels)


def _primes_by_group(sesquiad) -> List[Congruence]:
    table = sesquiad.table
    ring = sesquiad.ring
    units = _unit_elements(table)
    points = []
    found = subgroups(table, units)
    for h in found:
        congruence = subgroup_congruence(table, h)
        ideal = ring.ideal([ring.difference(table.one, x) for x in h if x != table.one])
        if _separated_in(sesquiad, congruence.class_of, ideal):
            points.append(congruence)
    get_logger().log_enumeration("subgroups", subgroups=len(found), points=len(points))
    return points


def _primes_by_ring(sesquiad) -> List[Congruence]:
    ring = sesquiad.ring
    kernels = set()
    ideals = ring_ideals_finite(ring)
    for ideal in ideals:
        kernels.add(Congruence.from_classes([ideal.reduce(v) for v in ring.images]))
    points = [c for c in kernels if quotient_is_integral(sesquiad.table, c.class_of)]
    get_logger().log_enumeration("ring_ideals", ideals=len(ideals), kernels=len(kernels),
                                 points=len(points))
    return points


def _preimages(table) -> List[List[Tuple[int, int]]]:
    out: List[List[Tuple[int, int]]] = [[] for _ in range(table.size)]
    for x in range(table.size):
        for a in range(table.size):
            out[table.mul[x][a]].append((x, a))
    return out


class _PartitionSearch:
    """Restricted growth strings on (zero, one, rest) with prime pruning.

    Classes are numbered in assignment order, so zero is class 0 and one is
    class 1.  A branch is cut as soon as the assigned part already breaks
    multiplicative compatibility or cancellation.
    """

    def __init__(self, table):
        self.table = table
        self.order = [table.zero, table.one] + [x for x in range(table.size)
                                                if x not in (table.zero, table.one)]
        self.preimages = _preimages(table)

    def shards(self) -> List[Tuple[int, ...]]:
        if len(self.order) <= 2:
            return [(0, 1)]
        return [(0, 1, c) for c in range(3)]

    def run(self, prefix: Tuple[int, ...]) -> List[Tuple[int, ...]]:
        n = self.table.size
        cls = [-1] * n
        for k, c in enumerate(prefix):
            cls[self.order[k]] = c
            if not self._consistent(cls, self.order[k]):
                return []
        found: List[Tuple[int, ...]] = []
        self._extend(cls, len(prefix), max(prefix) + 1, found)
        return found

    def _extend(self, cls: List[int], k: int, used: int, found: List[Tuple[int, ...]]):
        if k == len(self.order):
            found.append(tuple(cls))
            return
        e = self.order[k]
        for c in range(used + 1):
            cls[e] = c
            if self._consistent(cls, e):
                self._extend(cls, k + 1, max(used, c + 1), found)
        cls[e] = -1

    def _consistent(self, cls: List[int], e: int) -> bool:
        mul = self.table.mul
        n = self.table.size
        ce = cls[e]
        assigned = [x for x in range(n) if cls[x] >= 0]
        # a ~ b implies xa ~ xb
        for b in assigned:
            if b != e and cls[b] == ce:
                for x in range(n):
                    p, q = cls[mul[x][e]], cls[mul[x][b]]
                    if p >= 0 and q >= 0 and p != q:
                        return False
        for x, a in self.preimages[e]:
            ca = cls[a]
            if ca < 0:
                continue
            for b in assigned:
                if b != a and cls[b] == ca:
                    q = cls[mul[x][b]]
                    if q >= 0 and q != ce:
                        return False
        # cancellation by classes other than [0]
        if ce != 0:
            for a in assigned:
                for b in assigned:
                    if cls[a] < cls[b]:
                        p, q = cls[mul[e][a]], cls[mul[e][b]]
                        if p >= 0 and p == q:
                            return False
        for f in assigned:
            if cls[f] == 0:
                continue
            p = cls[mul[f][e]]
            if p < 0:
                continue
            for b in assigned:
                if cls[b] != ce and cls[mul[f][b]] == p:
                    return False
        for f, a in self.preimages[e]:
            if cls[f] <= 0 or cls[a] < 0:
                continue
            for b in assigned:
                if cls[b] != cls[a] and cls[mul[f][b]] == ce:
                    return False
        return True


def _primes_by_partitions(sesquiad) -> List[Congruence]:
    settings = get_settings()
    cap = settings.element_cap()
    if sesquiad.size > cap:
        raise LimitError("TooLarge", f"{sesquiad.size} elements exceed the enumeration cap {cap}",
                         elements=sesquiad.size, cap=cap)
    search = _PartitionSearch(sesquiad.table)
    shards = search.shards()
    results = get_executor().run_shards(search.run, shards)
    candidates = [Congruence.from_classes(labels) for shard in results for labels in shard]
    points = [c for c in candidates if is_congruence(sesquiad, c)]
    get_logger().log_enumeration("partitions", shards=len(shards), candidates=len(candidates),
                                 points=len(points))
    return points


def choose_strategy(sesquiad) -> str:
    if _is_group_with_zero(sesquiad.table):
        return "group"
    ring = sesquiad.ring
    size = ring.cardinality()
    if size is not None and size <= get_settings().ring_limit:
        return "ring"
    return "partitions"


def spec_c(sesquiad, strategy: str = "auto") -> SpectrumC:
    """All prime congruences of a finite sesquiad"""
    if strategy not in STRATEGIES:
        raise UsageError("BadStrategy", f"unknown strategy {strategy!r}", strategy=strategy)
    chosen = choose_strategy(sesquiad) if strategy == "auto" else strategy
    if chosen == "group":
        if not _is_group_with_zero(sesquiad.table):
            raise UsageError("BadStrategy", "group strategy needs every nonzero element to be a unit")
        points = _primes_by_group(sesquiad)
    elif chosen == "ring":
        points = _primes_by_ring(sesquiad)
    else:
        points = _primes_by_partitions(sesquiad)
    spectrum = SpectrumC(sesquiad, _canonical_points(points), chosen)
    get_logger().debug("Spectrum computed", strategy=chosen, points=len(spectrum))
    return spectrum


# topology


def closure(s: SpectrumC, point) -> FrozenSet[int]:
    i = s.index(point)
    return frozenset(j for j in range(len(s)) if s.leq(i, j))


def minimal_open(s: SpectrumC, point) -> FrozenSet[int]:
    """Smallest open set containing the point: everything below it"""
    i = s.index(point)
    return frozenset(j for j in range(len(s)) if s.leq(j, i))


def closed_points(s: SpectrumC) -> FrozenSet[int]:
    return frozenset(i for i in range(len(s))
                     if not any(j != i and s.leq(i, j) for j in range(len(s))))


def basic_open(s: SpectrumC, pairs: Sequence[Tuple[int, int]]) -> FrozenSet[int]:
    """D(a, b) for a tuple of pairs: the points separating every a_k from b_k"""
    return frozenset(i for i, p in enumerate(s.points)
                     if all(not p.same(a, b) for a, b in pairs))


def is_open(s: SpectrumC, subset: Iterable[int]) -> bool:
    subset = set(subset)
    return all(j in subset for i in subset for j in range(len(s)) if s.leq(j, i))


def is_closed_set(s: SpectrumC, subset: Iterable[int]) -> bool:
    subset = set(subset)
    return all(j in subset for i in subset for j in range(len(s)) if s.leq(i, j))


def covering_edges(s: SpectrumC) -> List[Tuple[int, int]]:
    n = len(s)
    edges = []
    for i in range(n):
        for j in range(n):
            if i == j or not s.leq(i, j):
                continue
            if any(k not in (i, j) and s.leq(i, k) and s.leq(k, j) for k in range(n)):
                continue
            edges.append((i, j))
    return edges


def separating_pairs(s: SpectrumC, point) -> List[Tuple[int, int]]:
    """Pairs (a, b) with a not ~ b at the point"""
    p = s.points[s.index(point)]
    size = p.size
    return [(a, b) for a in range(size) for b in range(a + 1, size) if not p.same(a, b)]


# nilradical and reduction


def nilradical(sesquiad, spectrum: Optional[SpectrumC] = None) -> Congruence:
    spectrum = spectrum or spec_c(sesquiad)
    meet = congruence_meet_all(spectrum.points)
    if meet is None:
        raise DomainError("EmptySpectrum", "the sesquiad has no prime congruence")
    return meet


def nilpotent_congruence(sesquiad) -> Congruence:
    """{(a, b) : a - b nilpotent in R_A}, computed on the ring side"""
    ring = sesquiad.ring
    labels = list(range(sesquiad.size))
    for a in range(sesquiad.size):
        for b in range(a):
            if labels[b] == b and is_nilpotent(ring, ring.difference(a, b)):
                labels[a] = b
                break
    return Congruence.from_classes(labels)


def reduce(sesquiad, spectrum: Optional[SpectrumC] = None):
    from sesquiad import quotient_sesquiad

    nil = nilradical(sesquiad, spectrum)
    if nil.is_diagonal():
        return sesquiad
    return quotient_sesquiad(sesquiad, nil.class_of)


def is_irreducible(sesquiad, spectrum: Optional[SpectrumC] = None) -> bool:
    """A^red is integral, i.e. the nilradical is itself prime"""
    nil = nilradical(sesquiad, spectrum)
    return quotient_is_integral(sesquiad.table, nil.class_of)


def generic_point(s: SpectrumC, subset: Iterable[int]) -> int:
    subset = frozenset(subset)
    if not subset or not is_closed_set(s, subset):
        raise DomainError("NotClosed", "the point set is not closed", points=sorted(subset))
    eta = congruence_meet_all(s.points[i] for i in sorted(subset))
    for i in subset:
        if s.points[i] == eta:
            return i
    raise DomainError("NotIrreducible", "the closed set has no generic point",
                      points=sorted(subset))


# morphisms and products


def pullback(morphism, point: Congruence) -> Congruence:
    return Congruence.from_classes([point.class_of[morphism.map[x]]
                                    for x in range(morphism.source.size)])


def product_spectrum_check(a, b) -> bool:
    """spec_c(A x B) is the disjoint union of spec_c A and spec_c B via the projections"""
    from sesquiad import direct_product, projections

    product = direct_product(a, b)
    first, second = projections(a, b, product)
    total = spec_c(product)
    pulled = {pullback(first, p) for p in spec_c(a).points}
    pulled |= {pullback(second, p) for p in spec_c(b).points}
    sizes = len(spec_c(a)) + len(spec_c(b))
    return len(total) == sizes and pulled == set(total.points)


def is_simple(sesquiad, spectrum: Optional[SpectrumC] = None) -> bool:
    spectrum = spectrum or spec_c(sesquiad)
    return len(spectrum) == 1 and spectrum.points[0].is_diagonal()


def closed_point_criterion(sesquiad, point: Congruence) -> bool:
    """E is a closed point iff A/E is simple"""
    from sesquiad import quotient_sesquiad

    return is_simple(quotient_sesquiad(sesquiad, point.class_of))


def simple_by_maximal_ideals(sesquiad) -> bool:
    """A simple iff A injects into R_A/m for every maximal ideal m (finite R_A)"""
    maximal = ring_spectrum_finite(sesquiad.ring)
    return all(len(set(m.class_of)) == sesquiad.size for m in maximal)


# Zariski spectrum


@dataclass(frozen=True)
class ZariskiSpectrum:
    sesquiad: object
    primes: Tuple[Tuple[int, ...], ...]

    def labels(self) -> List[str]:
        return ["{" + ",".join(self.sesquiad.name(a) for a in p) + "}" for p in self.primes]


def _is_prime_ideal(sesquiad, members: FrozenSet[int]) -> bool:
    table = sesquiad.table
    for x in range(sesquiad.size):
        for p in members:
            if table.mul[x][p] not in members:
                return False
    for x in range(sesquiad.size):
        if x in members:
            continue
        for y in range(x, sesquiad.size):
            if y not in members and table.mul[x][y] in members:
                return False
    ring = sesquiad.ring
    ideal = ring.ideal([ring.images[p] for p in members])
    return all((ring.images[a] in ideal) == (a in members) for a in range(sesquiad.size))


def spec_z(sesquiad) -> ZariskiSpectrum:
    """Prime ideals p of A with (p) cap A = p"""
    table = sesquiad.table
    cap = get_settings().element_cap()
    if sesquiad.size > cap:
        raise LimitError("TooLarge", f"{sesquiad.size} elements exceed the enumeration cap {cap}",
                         elements=sesquiad.size, cap=cap)
    free = [x for x in range(sesquiad.size) if x not in (table.zero, table.one)]
    primes = []
    for mask in range(1 << len(free)):
        members = frozenset([table.zero] + [x for k, x in enumerate(free) if mask >> k & 1])
        if _is_prime_ideal(sesquiad, members):
            primes.append(tuple(sorted(members)))
    primes.sort(key=lambda p: (len(p), p))
    get_logger().log_enumeration("spec_z", subsets=1 << len(free), primes=len(primes))
    return ZariskiSpectrum(sesquiad, tuple(primes))


def zero_class(sesquiad, point: Congruence) -> Tuple[int, ...]:
    return point.class_members(sesquiad.table.zero)
