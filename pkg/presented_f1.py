"""
Finitely presented sesquiads over free commutative generators and their
F₁-points, i.e. the 0/1 assignments that are ring maps to Z landing in
{0, 1} on the monoid.  Builders for the GL, Sp and O Tits models.
"""

from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Dict, List, Sequence, Tuple

import sympy

from engine_errors import LimitError, UsageError
from logging_config import get_logger
from parallel_executor import get_executor

MAX_GENERATORS = 64

Monomial = Tuple[int, ...]
Polynomial = Tuple[Tuple[int, Monomial], ...]


@dataclass(frozen=True)
class PresentedSesquiad:
    """Relations are polynomials equal to zero; named sums must evaluate into {0, 1}"""
    generators: Tuple[str, ...]
    relations: Tuple[Polynomial, ...] = ()
    named_sums: Tuple[Tuple[str, Polynomial], ...] = ()
    name: str = ""

    def symbols(self) -> List[sympy.Symbol]:
        return [sympy.Symbol(g) for g in self.generators]


@dataclass(frozen=True)
class F1Point:
    assignment: Tuple[Tuple[str, int], ...]

    def value(self, generator: str) -> int:
        return dict(self.assignment)[generator]


def from_sympy(expr, gens: Sequence[sympy.Symbol]) -> Polynomial:
    """Integer exponent-vector form of a polynomial expression"""
    poly = sympy.Poly(sympy.expand(expr), *gens)
    terms = []
    for monom, coeff in poly.terms():
        if not coeff.is_integer:
            raise UsageError("NonIntegerCoefficient", f"coefficient {coeff} is not an integer")
        terms.append((int(coeff), tuple(int(e) for e in monom)))
    return tuple(sorted(terms, key=lambda t: t[1]))


def to_sympy(poly: Polynomial, gens: Sequence[sympy.Symbol]):
    return sympy.Add(*[c * sympy.Mul(*[g ** e for g, e in zip(gens, m)]) for c, m in poly])


def evaluate(poly: Polynomial, values: Sequence[int]) -> int:
    total = 0
    for coeff, monom in poly:
        term = coeff
        for v, e in zip(values, monom):
            if e:
                term *= v ** e
        total += term
    return total


def _reorder(poly: Polynomial, permutation: Sequence[int]) -> Polynomial:
    """Exponent vectors rearranged so that new position k holds old position permutation[k]"""
    return tuple(sorted(((c, tuple(m[i] for i in permutation)) for c, m in poly), key=lambda t: t[1]))


def canonical(p: PresentedSesquiad) -> Tuple[PresentedSesquiad, List[int]]:
    """Generators sorted by name, with the permutation used"""
    order = sorted(range(len(p.generators)), key=lambda i: p.generators[i])
    return PresentedSesquiad(
        tuple(p.generators[i] for i in order),
        tuple(_reorder(r, order) for r in p.relations),
        tuple((name, _reorder(s, order)) for name, s in p.named_sums),
        p.name,
    ), order


class _Constraint:
    """Polynomial with the set of values it may take"""

    def __init__(self, poly: Polynomial, low: int, high: int):
        self.terms = [(c, [i for i, e in enumerate(m) if e]) for c, m in poly]
        self.low = low
        self.high = high

    def feasible(self, values: List[int]) -> bool:
        lo = hi = 0
        for coeff, support in self.terms:
            state = 1
            for i in support:
                v = values[i]
                if v == 0:
                    state = 0
                    break
                if v < 0:
                    state = -1
            if state == 1:
                lo += coeff
                hi += coeff
            elif state == -1:
                if coeff < 0:
                    lo += coeff
                else:
                    hi += coeff
        return lo <= self.high and hi >= self.low


class _PointSearch:
    def __init__(self, p: PresentedSesquiad):
        self.p = p
        self.n = len(p.generators)
        self.constraints = [_Constraint(r, 0, 0) for r in p.relations]
        self.constraints += [_Constraint(s, 0, 1) for _, s in p.named_sums]

    def feasible(self, values: List[int]) -> bool:
        return all(c.feasible(values) for c in self.constraints)

    def run(self, first: int) -> List[Tuple[int, ...]]:
        values = [-1] * self.n
        values[0] = first
        found: List[Tuple[int, ...]] = []
        if self.feasible(values):
            self._extend(values, 1, found)
        return found

    def _extend(self, values: List[int], k: int, found: List[Tuple[int, ...]]):
        if k == self.n:
            found.append(tuple(values))
            return
        for v in (0, 1):
            values[k] = v
            if self.feasible(values):
                self._extend(values, k + 1, found)
        values[k] = -1


def f1_points(p: PresentedSesquiad) -> List[F1Point]:
    """All F₁-points by pruned search over 0/1 assignments"""
    if len(p.generators) > MAX_GENERATORS:
        raise LimitError("TooManyGenerators", f"{len(p.generators)} generators exceed {MAX_GENERATORS}",
                         generators=len(p.generators), limit=MAX_GENERATORS)
    if not p.generators:
        empty = _PointSearch(p)
        return [F1Point(())] if empty.feasible([]) else []
    q, _ = canonical(p)
    search = _PointSearch(q)
    shards = get_executor().run_shards(search.run, [0, 1])
    points = [F1Point(tuple(zip(q.generators, values))) for shard in shards for values in shard]
    get_logger().log_enumeration("f1_points", model=p.name, generators=len(p.generators),
                                 points=len(points))
    return points


def check_point(p: PresentedSesquiad, point: F1Point) -> bool:
    """Re-evaluate every relation and named sum under the assignment"""
    assignment = dict(point.assignment)
    if set(assignment) != set(p.generators) or any(v not in (0, 1) for v in assignment.values()):
        return False
    values = [assignment[g] for g in p.generators]
    return (all(evaluate(r, values) == 0 for r in p.relations)
            and all(evaluate(s, values) in (0, 1) for _, s in p.named_sums))


# Tits models


def _matrix_symbols(rows: int, cols: int) -> sympy.Matrix:
    return sympy.Matrix(rows, cols, lambda i, j: sympy.Symbol(f"X{i + 1}_{j + 1}"))


def _check_size(count: int):
    if count > MAX_GENERATORS:
        raise LimitError("TooManyGenerators", f"{count} generators exceed {MAX_GENERATORS}",
                         generators=count, limit=MAX_GENERATORS)


def _matrix_relations(x: sympy.Matrix, form: sympy.Matrix, gens, symmetric: bool) -> Tuple[Polynomial, ...]:
    """Entries of X F X^t - F, one per unordered index pair"""
    m = x * form * x.T - form
    out = []
    for i in range(m.rows):
        for j in range(i if symmetric else i + 1, m.cols):
            poly = from_sympy(m[i, j], gens)
            if poly and poly not in out:
                out.append(poly)
    return tuple(out)


def gl_model(n: int) -> PresentedSesquiad:
    """Z[X, Y]/(det(X)^2 Y - 1) with the row sums as named elements"""
    if n < 1:
        raise UsageError("BadDimension", "GL needs n >= 1", n=n)
    _check_size(n * n + 1)
    x = _matrix_symbols(n, n)
    y = sympy.Symbol("Y")
    gens = list(x) + [y]
    relation = from_sympy(x.det(method="berkowitz") ** 2 * y - 1, gens)
    sums = tuple((f"r{i + 1}", from_sympy(sum(x.row(i)), gens)) for i in range(n))
    return PresentedSesquiad(tuple(str(g) for g in gens), (relation,), sums, f"GL{n}")


def sp_model(n: int) -> PresentedSesquiad:
    """X J X^t = J for the 2n x 2n standard form, with row and corner sums"""
    if n < 1:
        raise UsageError("BadDimension", "Sp needs n >= 1", n=n)
    size = 2 * n
    _check_size(size * size)
    x = _matrix_symbols(size, size)
    gens = list(x)
    identity = sympy.eye(n)
    zero = sympy.zeros(n, n)
    j = sympy.Matrix(sympy.BlockMatrix([[zero, -identity], [identity, zero]]))
    relations = _matrix_relations(x, j, gens, symmetric=False)
    sums = [(f"r{i + 1}", from_sympy(sum(x[i, k] for k in range(n)), gens)) for i in range(n)]
    upper_right = sum(x[i, k] for i in range(n) for k in range(n, size))
    lower_left = sum(x[i, k] for i in range(n, size) for k in range(n))
    sums.append(("c1", from_sympy(1 + upper_right, gens)))
    sums.append(("c2", from_sympy(1 + lower_left, gens)))
    return PresentedSesquiad(tuple(str(g) for g in gens), relations, tuple(sums), f"Sp{size}")


def split_form(n: int) -> sympy.Matrix:
    """Q with [[0,1],[1,0]] blocks on the diagonal and a 1 in the corner for odd n"""
    q = sympy.zeros(n, n)
    for k in range(n // 2):
        q[2 * k, 2 * k + 1] = 1
        q[2 * k + 1, 2 * k] = 1
    if n % 2:
        q[n - 1, n - 1] = 1
    return q


def o_model(n: int) -> PresentedSesquiad:
    """X Q X^t = Q for the split form, with the row sums as named elements"""
    if n < 2:
        raise UsageError("BadDimension", "O needs n >= 2", n=n)
    _check_size(n * n)
    x = _matrix_symbols(n, n)
    gens = list(x)
    relations = _matrix_relations(x, split_form(n), gens, symmetric=True)
    sums = tuple((f"r{i + 1}", from_sympy(sum(x.row(i)), gens)) for i in range(n))
    return PresentedSesquiad(tuple(str(g) for g in gens), relations, sums, f"O{n}")


def weyl_order(group: str, n: int) -> int:
    if group == "gl":
        return factorial(n)
    if group == "sp":
        return 2 ** n * factorial(n)
    if group == "o":
        k = n // 2
        return 2 ** k * factorial(k)
    raise UsageError("BadGroup", f"unknown group {group!r}", group=group)


MODELS = {"gl": gl_model, "sp": sp_model, "o": o_model}


def weyl_report(group: str, n: int) -> Dict:
    if group not in MODELS:
        raise UsageError("BadGroup", f"unknown group {group!r}", group=group)
    model = MODELS[group](n)
    points = f1_points(model)
    reference = weyl_order(group, n)
    return {
        "group": group,
        "n": n,
        "model": model.name,
        "generators": len(model.generators),
        "count": len(points),
        "reference": reference,
        "match": len(points) == reference,
    }


def permutation_assignments(n: int) -> List[F1Point]:
    """The permutation matrices with Y = 1, as GL_n assignments"""
    out = []
    for sigma in permutations(range(n)):
        values = {f"X{i + 1}_{j + 1}": int(sigma[i] == j) for i in range(n) for j in range(n)}
        values["Y"] = 1
        out.append(F1Point(tuple(sorted(values.items()))))
    return out
