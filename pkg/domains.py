"""
Monoid-only machinery: quotient fields, the fibres of the zero-class map and
their subgroup tags, Ê and semi-closed kernels.
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from engine_errors import DomainError
from logging_config import get_logger
from sesquiad import MonoidTable, Sesquiad, has_trivial_addition, is_integral, table_from_products
from spectrum import (Congruence, SpectrumC, closure, is_open, spec_c, spec_z,
                      subgroups, zero_class)


def _require_monoid(sesquiad: Sesquiad):
    if not has_trivial_addition(sesquiad):
        raise DomainError("NotAMonoid", "this operation needs a sesquiad with trivial addition")


class _UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class QuotientField:
    """{0} plus the group completion of A minus p, with the map from A"""
    table: MonoidTable
    embedding: Tuple[int, ...]
    prime: Tuple[int, ...]

    @property
    def group(self) -> List[int]:
        return [x for x in range(self.table.size) if x != self.table.zero]

    def inverse(self, x: int) -> int:
        return next(y for y in self.group if self.table.mul[x][y] == self.table.one)


def group_completion(sesquiad: Sesquiad, prime: Sequence[int] = ()) -> QuotientField:
    """Q(A/p): pairs (x, s) over S = A minus p with (x,s) ~ (y,t) iff xtu = ysu for some u in S"""
    table = sesquiad.table
    excluded = set(prime) | {table.zero}
    s = [x for x in range(table.size) if x not in excluded]
    mul = table.mul
    pairs = [(x, d) for x in s for d in s]
    uf = _UnionFind(pairs)
    for i, (x, d) in enumerate(pairs):
        for y, e in pairs[i + 1:]:
            if any(mul[mul[x][e]][u] == mul[mul[y][d]][u] for u in s):
                uf.union((x, d), (y, e))
    classes = sorted({uf.find(p) for p in pairs})
    position = {c: k + 1 for k, c in enumerate(classes)}

    def cls(p) -> int:
        return position[uf.find(p)]

    names = ["0"]
    for x, d in classes:
        whole = next((y for y in s if uf.find((y, table.one)) == uf.find((x, d))), None)
        names.append(sesquiad.name(whole) if whole is not None
                     else f"{sesquiad.name(x)}/{sesquiad.name(d)}")

    def product(i: int, j: int) -> int:
        if i == 0 or j == 0:
            return 0
        (x, d), (y, e) = classes[i - 1], classes[j - 1]
        return cls((mul[x][y], mul[d][e]))

    one = cls((table.one, table.one))
    group_table = table_from_products(names, 0, one, product)
    embedding = tuple(0 if x in excluded else cls((x, table.one)) for x in range(table.size))
    get_logger().debug("Group completion", prime=len(excluded), pairs=len(pairs), group=len(classes))
    return QuotientField(group_table, embedding, tuple(sorted(excluded)))


def quotient_field(sesquiad: Sesquiad) -> QuotientField:
    """Q(A) for an integral monoid; for finite A this is A itself"""
    _require_monoid(sesquiad)
    if not is_integral(sesquiad):
        raise DomainError("NotIntegral", "the quotient field needs an integral monoid")
    return group_completion(sesquiad, (sesquiad.table.zero,))


def subgroup_point(sesquiad: Sesquiad, field: QuotientField, subgroup: FrozenSet[int]) -> Congruence:
    """E_H: x ~ 0 iff x in p, otherwise x ~ y iff x^-1 y in H"""
    g = field.table
    labels: List = []
    for x in range(sesquiad.size):
        image = field.embedding[x]
        if image == g.zero:
            labels.append(("zero",))
        else:
            labels.append(tuple(sorted(g.mul[image][h] for h in subgroup)))
    return Congruence.from_classes(labels)


@dataclass(frozen=True)
class FiberDescriptor:
    base: Tuple[int, ...]
    points: Tuple[int, ...]
    tags: Tuple[Tuple[int, Tuple[int, ...]], ...]
    subgroup_count: int
    bijective: bool


def fibers(sesquiad: Sesquiad, spectrum: Optional[SpectrumC] = None) -> List[FiberDescriptor]:
    """Spectrum points grouped by zero class, matched with subgroups of Q(A/p)^x"""
    _require_monoid(sesquiad)
    s = spectrum or spec_c(sesquiad)
    out = []
    for p in spec_z(sesquiad).primes:
        members = tuple(i for i, point in enumerate(s.points) if zero_class(sesquiad, point) == p)
        field = group_completion(sesquiad, p)
        groups = subgroups(field.table, field.group)
        tagged: Dict[Congruence, FrozenSet[int]] = {}
        for h in groups:
            tagged.setdefault(subgroup_point(sesquiad, field, h), h)
        fiber_points = {s.points[i] for i in members}
        bijective = len(tagged) == len(groups) and set(tagged) == fiber_points
        tags = tuple((i, tuple(sorted(tagged[s.points[i]])))
                     for i in members if s.points[i] in tagged)
        out.append(FiberDescriptor(p, members, tags, len(groups), bijective))
    get_logger().debug("Fibres computed", fibres=len(out))
    return out


def zero_class_fiber(sesquiad: Sesquiad, s: SpectrumC, i: int) -> FrozenSet[int]:
    base = zero_class(sesquiad, s.points[i])
    return frozenset(j for j, point in enumerate(s.points) if zero_class(sesquiad, point) == base)


def e_hat(sesquiad: Sesquiad, point, spectrum: Optional[SpectrumC] = None) -> FrozenSet[int]:
    """closure(E) intersected with the zero-class fibre of E"""
    _require_monoid(sesquiad)
    s = spectrum or spec_c(sesquiad)
    i = s.index(point)
    return closure(s, i) & zero_class_fiber(sesquiad, s, i)


def semi_closed_kernel(sesquiad: Sesquiad, u: Iterable[int],
                       spectrum: Optional[SpectrumC] = None) -> FrozenSet[int]:
    """SK(U) = {E in U : Ê inside U}"""
    _require_monoid(sesquiad)
    s = spectrum or spec_c(sesquiad)
    u = frozenset(u)
    kernel = frozenset(i for i in u if e_hat(sesquiad, i, s) <= u)
    if is_open(s, u):
        by_fiber = frozenset(i for i in u if zero_class_fiber(sesquiad, s, i) <= u)
        if by_fiber != kernel:
            raise DomainError("CrossCheckFailed", "semi-closed kernel disagrees with the fibre criterion",
                              kernel=sorted(kernel), fibre=sorted(by_fiber))
    return kernel


def is_semi_closed(sesquiad: Sesquiad, c: Iterable[int],
                   spectrum: Optional[SpectrumC] = None) -> bool:
    _require_monoid(sesquiad)
    s = spectrum or spec_c(sesquiad)
    c = frozenset(c)
    return all(e_hat(sesquiad, i, s) <= c for i in c)
