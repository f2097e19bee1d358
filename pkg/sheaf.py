"""
Structure sheaf on spec_c: stalks A_E, sections over opens, global sections,
conservativity, the essential spectrum and tame sets.

Stalks are exact when the localized ring is finite; otherwise denominators
are enumerated as words up to a depth and results carry ``exact=False``.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from engine_errors import DomainError, UsageError
from engine_settings import get_settings
from lattice_core import Vector
from logging_config import get_logger
from parallel_executor import get_executor
from sesquiad import (Sesquiad, SesquiadMorphism, from_embedding, has_trivial_addition,
                      is_integral, materialize_fractions, quotient_sesquiad,
                      table_from_products)
from spectrum import (Congruence, SpectrumC, is_open, minimal_open, pullback, spec_c)
from universal_ring import Fraction, LocalizedRing, apply_hom, localize_ring, product_ring


class Verdict(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class DenominatorMonoid:
    """Generators a - b with 0 !~ a !~ b !~ 1, one pair per distinct ring element"""
    point: Congruence
    pairs: Tuple[Tuple[int, int], ...]
    generators: Tuple[Vector, ...]


def denominators(sesquiad: Sesquiad, point: Congruence) -> DenominatorMonoid:
    ring = sesquiad.ring
    t = sesquiad.table
    seen: Dict[Vector, Tuple[int, int]] = {}
    for a in range(sesquiad.size):
        if point.same(a, t.zero):
            continue
        for b in range(sesquiad.size):
            if point.same(b, t.one) or point.same(a, b):
                continue
            seen.setdefault(ring.difference(a, b), (a, b))
    ordered = sorted(seen.items(), key=lambda item: item[1])
    return DenominatorMonoid(point, tuple(p for _, p in ordered), tuple(v for v, _ in ordered))


def denominator_label(sesquiad: Sesquiad, dm: DenominatorMonoid, word: Sequence[int]) -> str:
    parts = []
    for (a, b), e in zip(dm.pairs, word):
        if e:
            base = f"({sesquiad.name(a)}-{sesquiad.name(b)})"
            parts.append(base if e == 1 else f"{base}^{e}")
    return "*".join(parts) or "1"


@dataclass
class StalkSesquiad:
    point: Congruence
    denominators: DenominatorMonoid
    localized: LocalizedRing
    values: Dict[Fraction, Tuple[int, Tuple[int, ...]]]
    labels: Dict[Fraction, str]
    inverse_denominators: Dict[Fraction, Tuple[int, ...]]
    exact: bool
    depth: int
    stabilized_at: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.values)

    def is_zero_ring(self) -> bool:
        return self.localized.is_zero_ring()

    def label(self, value: Fraction) -> str:
        return self.labels.get(value, "[" + ",".join(str(x) for x in value.num) + f"]/g^{value.power}")

    def is_unit(self, value: Fraction) -> bool:
        """Unit within the enumerated value set"""
        one = self.localized.one()
        return any(self.localized.mul_fraction(value, w) == one for w in self.values)


def _denominator_closure(loc: LocalizedRing, count: int, depth: Optional[int]) -> Tuple[Dict[Fraction, Tuple[int, ...]], Optional[int]]:
    """1/s for s in the submonoid generated by the localized generators.

    Breadth first by word length; stops when a level adds nothing new or the
    depth is reached.  Returns the map 1/s -> word and the level at which the
    closure stabilized (None when cut off by depth).
    """
    base = loc.base
    start = (0,) * count
    found: Dict[Fraction, Tuple[int, ...]] = {loc.one(): start}
    frontier = [start]
    level = 0
    while frontier:
        if depth is not None and level >= depth:
            return found, None
        level += 1
        fresh = []
        for word in frontier:
            for k in range(count):
                nxt = list(word)
                nxt[k] += 1
                nxt = tuple(nxt)
                inv = loc.value(base.one, nxt)
                if inv not in found:
                    found[inv] = nxt
                    fresh.append(nxt)
        frontier = fresh
    return found, level


def stalk(sesquiad: Sesquiad, point: Congruence, depth: Optional[int] = None) -> StalkSesquiad:
    """A_E = S_E^-1 A inside S_E^-1 R_A"""
    depth = depth or get_settings().depth
    if depth < 1:
        raise UsageError("BadDepth", "depth must be at least 1", depth=depth)
    ring = sesquiad.ring
    dm = denominators(sesquiad, point)
    loc = localize_ring(ring, dm.generators)
    size = loc.cardinality()
    exact = size is not None and size <= get_settings().ring_limit
    inverses, stabilized = _denominator_closure(loc, len(dm.generators), None if exact else depth)
    values: Dict[Fraction, Tuple[int, Tuple[int, ...]]] = {}
    labels: Dict[Fraction, str] = {}
    for a in range(sesquiad.size):
        x = loc.fraction(ring.images[a], 0)
        for inv, word in inverses.items():
            v = loc.mul_fraction(x, inv)
            if v in values:
                continue
            values[v] = (a, word)
            if any(word):
                labels[v] = f"{sesquiad.name(a)}/{denominator_label(sesquiad, dm, word)}"
            else:
                labels[v] = sesquiad.name(a)
    get_logger().debug("Stalk computed", point=point.signature(sesquiad), generators=len(dm.generators),
                       values=len(values), exact=exact, stabilized_at=stabilized)
    return StalkSesquiad(point, dm, loc, values, labels, inverses, exact, depth, stabilized)


def stalk_sesquiad(st: StalkSesquiad) -> Sesquiad:
    """The stalk as a sesquiad (requires a multiplicatively closed value set)"""
    return materialize_fractions(st.localized, dict(st.labels)).sesquiad


# sections


@dataclass
class GammaResult:
    sesquiad: Sesquiad
    spectrum: SpectrumC
    points: Tuple[int, ...]
    stalks: Dict[int, StalkSesquiad]
    sections: Tuple[Tuple[Fraction, ...], ...]
    witnesses: Tuple[Tuple[Tuple[int, int, Tuple[int, ...]], ...], ...]
    constant: Tuple[int, ...]
    exact: bool
    depth: int
    shortcut: Optional[str] = None
    names: Tuple[str, ...] = field(default=())

    @property
    def size(self) -> int:
        return len(self.sections)

    def section_index(self, values: Sequence[Fraction]) -> Optional[int]:
        try:
            return self.sections.index(tuple(values))
        except ValueError:
            return None

    def column(self, point: int) -> int:
        return self.points.index(point)


def _submonoid_words(loc: LocalizedRing, ring_limit: int, depth: int) -> Tuple[Dict[Vector, Tuple[int, ...]], bool]:
    """Elements of the submonoid of R_A generated by loc.gens, with a word for each.

    Exact closure when R_A is finite and small, otherwise words up to depth.
    """
    base = loc.base
    size = base.cardinality()
    exact = size is not None and size <= ring_limit
    count = len(loc.gens)
    start = (0,) * count
    found: Dict[Vector, Tuple[int, ...]] = {base.one: start}
    frontier = [(base.one, start)]
    level = 0
    while frontier and (exact or level < depth):
        level += 1
        fresh = []
        for v, word in frontier:
            for k, g in enumerate(loc.gens):
                w = base.mul(v, g)
                if w not in found:
                    nxt = list(word)
                    nxt[k] += 1
                    found[w] = tuple(nxt)
                    fresh.append((w, tuple(nxt)))
        frontier = fresh
    return found, exact


def _local_tuples(sesquiad: Sesquiad, s: SpectrumC, stalks: Dict[int, StalkSesquiad], e: int,
                  depth: int) -> Tuple[Tuple[int, ...], Dict[Tuple[Fraction, ...], Tuple[int, Tuple[int, ...]]], bool]:
    """Tuples (a/f)_{F <= E} with f in the intersection of the S_F"""
    below = tuple(sorted(minimal_open(s, e)))
    if below == (e,):
        st = stalks[e]
        return below, {(v,): prov for v, prov in st.values.items()}, st.exact
    ring = sesquiad.ring
    limit = get_settings().ring_limit
    maps = []
    exact = True
    for f in below:
        words, closed = _submonoid_words(stalks[f].localized, limit, depth)
        maps.append(words)
        exact = exact and closed
    common = set(maps[0])
    for words in maps[1:]:
        common &= set(words)
    tuples: Dict[Tuple[Fraction, ...], Tuple[int, Tuple[int, ...]]] = {}
    for f_vec in sorted(common):
        for a in range(sesquiad.size):
            values = tuple(stalks[f].localized.value(ring.images[a], words[f_vec])
                           for f, words in zip(below, maps))
            tuples.setdefault(values, (a, maps[below.index(e)][f_vec]))
    return below, tuples, exact


def _join(points: Sequence[int], maximal: Sequence[int], local: Dict[int, Tuple]) -> List[Dict[int, Fraction]]:
    partial: List[Dict[int, Fraction]] = [{}]
    for e in maximal:
        below, tuples, _ = local[e]
        merged = []
        for assignment in partial:
            for values in tuples:
                if all(assignment.get(f, v) == v for f, v in zip(below, values)):
                    nxt = dict(assignment)
                    nxt.update(zip(below, values))
                    merged.append(nxt)
        partial = merged
    out = []
    for assignment in partial:
        if all(tuple(assignment[f] for f in local[e][0]) in local[e][1] for e in points):
            out.append(assignment)
    return out


def _compute_stalks(sesquiad: Sesquiad, s: SpectrumC, points: Iterable[int], depth: int) -> Dict[int, StalkSesquiad]:
    points = sorted(points)
    results = get_executor().run_shards(lambda i: stalk(sesquiad, s.points[i], depth), points)
    return dict(zip(points, results))


def _constant_sections(sesquiad: Sesquiad, points: Sequence[int], stalks: Dict[int, StalkSesquiad]) -> List[Tuple[Fraction, ...]]:
    ring = sesquiad.ring
    return [tuple(stalks[f].localized.fraction(ring.images[a], 0) for f in points)
            for a in range(sesquiad.size)]


def _is_ring_input(sesquiad: Sesquiad) -> bool:
    return sesquiad.ring.cardinality() == sesquiad.size


def _names(sesquiad: Sesquiad, points: Sequence[int], stalks: Dict[int, StalkSesquiad],
           sections: Sequence[Tuple[Fraction, ...]], constant: Sequence[int]) -> Tuple[str, ...]:
    names = []
    by_section = {}
    for a, idx in enumerate(constant):
        by_section.setdefault(idx, sesquiad.name(a))
    for i, values in enumerate(sections):
        if i in by_section:
            names.append(by_section[i])
        else:
            names.append("<" + ",".join(stalks[f].label(v) for f, v in zip(points, values)) + ">")
    return tuple(names)


def sections(sesquiad: Sesquiad, u: Iterable[int], depth: Optional[int] = None,
             spectrum: Optional[SpectrumC] = None) -> GammaResult:
    """Sections of the structure sheaf over an open set of points"""
    logger = get_logger()
    depth = depth or get_settings().depth
    s = spectrum or spec_c(sesquiad)
    points = tuple(sorted(set(u)))
    if not is_open(s, points):
        raise DomainError("NotOpen", "the point set is not open", points=list(points))
    stalks = _compute_stalks(sesquiad, s, points, depth)
    whole = len(points) == len(s)

    shortcut = None
    if whole and _is_ring_input(sesquiad):
        shortcut = "ring"
    elif whole and is_integral(sesquiad) and has_trivial_addition(sesquiad):
        shortcut = "integral-monoid"

    constants = _constant_sections(sesquiad, points, stalks)
    if shortcut:
        found = list(dict.fromkeys(constants))
        witnesses = [tuple((f, a, ()) for f in points) for a in range(len(found))]
        exact = True
    else:
        local = {e: _local_tuples(sesquiad, s, stalks, e, depth) for e in points}
        maximal = [e for e in points if not any(f != e and s.leq(e, f) for f in points)]
        assignments = _join(points, maximal, local)
        found = []
        witnesses = []
        for assignment in assignments:
            values = tuple(assignment[f] for f in points)
            if values in found:
                continue
            found.append(values)
            witnesses.append(tuple((e, ) + local[e][1][tuple(assignment[f] for f in local[e][0])]
                                   for e in points))
        exact = all(local[e][2] for e in points)
        # sort for deterministic reports: constants first in element order
        order = sorted(range(len(found)), key=lambda i: (
            constants.index(found[i]) if found[i] in constants else len(constants),
            [(v.power, v.num) for v in found[i]]))
        found = [found[i] for i in order]
        witnesses = [witnesses[i] for i in order]

    index = {v: i for i, v in enumerate(found)}
    for values in constants:
        if values not in index:
            raise DomainError("MissingConstantSection", "a constant section was not found")
    constant = tuple(index[v] for v in constants)
    result = GammaResult(sesquiad, s, points, stalks, tuple(found), tuple(witnesses), constant,
                         exact, depth, shortcut)
    result.names = _names(sesquiad, points, stalks, result.sections, constant)
    logger.debug("Sections assembled", points=len(points), sections=len(found), exact=exact,
                 shortcut=shortcut)
    return result


def global_sections(sesquiad: Sesquiad, depth: Optional[int] = None,
                    spectrum: Optional[SpectrumC] = None) -> GammaResult:
    s = spectrum or spec_c(sesquiad)
    return sections(sesquiad, range(len(s)), depth, s)


def is_conservative(sesquiad: Sesquiad, depth: Optional[int] = None) -> Verdict:
    gamma = global_sections(sesquiad, depth)
    if gamma.exact:
        return Verdict.TRUE if gamma.size == sesquiad.size else Verdict.FALSE
    return Verdict.FALSE if gamma.size > sesquiad.size else Verdict.UNKNOWN


# materialization


@dataclass
class MaterializedSections:
    result: GammaResult
    sesquiad: Sesquiad
    canonical_map: Tuple[int, ...]
    exact: bool


def materialize(result: GammaResult) -> MaterializedSections:
    """Section sesquiad as a monoidal pair inside the product of the stalk rings"""
    source = result.sesquiad
    if result.shortcut:
        return MaterializedSections(result, source, result.constant, True)
    points = result.points
    locs = [result.stalks[f].localized for f in points]
    index = {v: i for i, v in enumerate(result.sections)}

    def mul(i: int, j: int) -> int:
        values = tuple(loc.mul_fraction(x, y) for loc, x, y in
                       zip(locs, result.sections[i], result.sections[j]))
        if values not in index:
            raise DomainError("NonMaterializable", "section set is not closed under multiplication",
                              left=result.names[i], right=result.names[j])
        return index[values]

    zero = result.constant[source.table.zero]
    one = result.constant[source.table.one]
    table = table_from_products(list(result.names), zero, one, mul)
    ring = product_ring([loc.quotient for loc in locs])
    tops = [max((s[k].power for s in result.sections), default=0) for k in range(len(points))]
    images = [sum((loc.scaled(s[k], tops[k]) for k, loc in enumerate(locs)), ())
              for s in result.sections]
    sesquiad = from_embedding(table, ring, images)
    get_logger().debug("Sections materialized", elements=table.size, dimension=ring.dim)
    return MaterializedSections(result, sesquiad, result.constant, result.exact)


# subsets, tameness, essential spectrum


def o_of_subset(sesquiad: Sesquiad, t: Iterable[int], depth: Optional[int] = None,
                spectrum: Optional[SpectrumC] = None) -> MaterializedSections:
    """O(T): sections over the smallest open set containing T"""
    s = spectrum or spec_c(sesquiad)
    t = frozenset(t)
    if not t:
        raise UsageError("EmptySubset", "the point set must not be empty")
    u = frozenset().union(*(minimal_open(s, i) for i in t))
    return materialize(sections(sesquiad, u, depth, s))


def is_tame(sesquiad: Sesquiad, t: Iterable[int], depth: Optional[int] = None,
            spectrum: Optional[SpectrumC] = None) -> Verdict:
    s = spectrum or spec_c(sesquiad)
    t = frozenset(t)
    try:
        local = o_of_subset(sesquiad, t, depth, s)
    except DomainError as e:
        if e.code != "NonMaterializable":
            raise
        return Verdict.UNKNOWN
    if not local.exact:
        return Verdict.UNKNOWN
    morphism = SesquiadMorphism(sesquiad, local.sesquiad, local.canonical_map)
    for point in spec_c(local.sesquiad).points:
        if s.index(pullback(morphism, point)) not in t:
            return Verdict.FALSE
    return Verdict.TRUE


@dataclass
class EssentialSpectrum:
    points: FrozenSet[int]
    exact: bool
    # points whose sections could not be closed up at the current depth
    undecided: FrozenSet[int] = frozenset()


def essential_spectrum(sesquiad: Sesquiad, depth: Optional[int] = None,
                       spectrum: Optional[SpectrumC] = None) -> EssentialSpectrum:
    """Points E with Γ(A/E) integral"""
    s = spectrum or spec_c(sesquiad)
    members, undecided = set(), set()
    exact = True
    for i, point in enumerate(s.points):
        quotient = quotient_sesquiad(sesquiad, point.class_of)
        try:
            gamma = materialize(global_sections(quotient, depth))
        except DomainError as e:
            if e.code != "NonMaterializable":
                raise
            get_logger().debug("Essential point undecided", point=s.label(i), depth=depth)
            undecided.add(i)
            exact = False
            continue
        exact = exact and gamma.exact
        if is_integral(gamma.sesquiad):
            members.add(i)
    return EssentialSpectrum(frozenset(members), exact, frozenset(undecided))


def common_kernel_check(sesquiad: Sesquiad, spectrum: Optional[SpectrumC] = None) -> bool:
    """The localization maps A -> A_E jointly separate the elements of A"""
    s = spectrum or spec_c(sesquiad)
    ring = sesquiad.ring
    locs = [localize_ring(ring, denominators(sesquiad, p).generators) for p in s.points]
    images = {tuple(loc.fraction(ring.images[a], 0) for loc in locs) for a in range(sesquiad.size)}
    return len(images) == sesquiad.size


# morphisms


def _transport(morphism: SesquiadMorphism, source: StalkSesquiad, target: StalkSesquiad,
               value: Fraction) -> Fraction:
    """phi(num) / phi(g)^k for value = num / g^k"""
    b_ring = morphism.target.ring
    position = {v: k for k, v in enumerate(target.denominators.generators)}
    word = [0] * len(position)
    for x, y in source.denominators.pairs:
        v = b_ring.difference(morphism.map[x], morphism.map[y])
        if v not in position:
            raise DomainError("NotLocal", "a denominator does not map to a denominator",
                              pair=[morphism.source.name(x), morphism.source.name(y)])
        word[position[v]] += value.power
    num = apply_hom(morphism.hom_rows, b_ring, value.num)
    return target.localized.value(num, word)


@dataclass
class LocalizedMorphism:
    source: StalkSesquiad
    target: StalkSesquiad
    mapping: Dict[Fraction, Fraction]
    local: bool
    exact: bool


def localized_morphism(morphism: SesquiadMorphism, point: Congruence,
                       depth: Optional[int] = None) -> LocalizedMorphism:
    """A_{phi*F} -> B_F on enumerated stalks, with the non-units to non-units check"""
    target = stalk(morphism.target, point, depth)
    source = stalk(morphism.source, pullback(morphism, point), depth)
    mapping = {v: _transport(morphism, source, target, v) for v in source.values}
    local = all(source.is_unit(v) or not target.is_unit(w)
                for v, w in mapping.items())
    return LocalizedMorphism(source, target, mapping, local, source.exact and target.exact)


@dataclass
class GammaMorphism:
    source: GammaResult
    target: GammaResult
    mapping: Tuple[Optional[int], ...]
    injective: bool
    surjective: bool
    exact: bool


def gamma_morphism(morphism: SesquiadMorphism, depth: Optional[int] = None) -> GammaMorphism:
    """phi_Γ: ΓA -> ΓB, s |-> (phi_F(s(phi*F)))_F"""
    a_gamma = global_sections(morphism.source, depth)
    b_gamma = global_sections(morphism.target, depth)
    a_spec, b_spec = a_gamma.spectrum, b_gamma.spectrum
    columns = []
    for f in b_gamma.points:
        e = a_spec.index(pullback(morphism, b_spec.points[f]))
        columns.append((a_gamma.column(e), a_gamma.stalks[e], b_gamma.stalks[f]))
    mapping = []
    for values in a_gamma.sections:
        image = tuple(_transport(morphism, src, tgt, values[col]) for col, src, tgt in columns)
        mapping.append(b_gamma.section_index(image))
    hits = [m for m in mapping if m is not None]
    injective = len(set(hits)) == len(hits) == len(mapping)
    surjective = len(set(hits)) == b_gamma.size
    get_logger().debug("Section map", source=a_gamma.size, target=b_gamma.size,
                       injective=injective, surjective=surjective)
    return GammaMorphism(a_gamma, b_gamma, tuple(mapping), injective, surjective,
                         a_gamma.exact and b_gamma.exact)
