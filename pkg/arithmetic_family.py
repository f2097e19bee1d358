"""
The X_b family: the free monoid on τ with 1 + ... + 1 = τ (b summands).

Points are studied through their finite quotients: τ ~ 0 gives {0, 1} inside
Z/b, and τ^n ~ 1 gives {0} plus the powers of b inside Z/(b^n - 1).
Also hosts Hasse-Weil zeta factor lists for finite sesquiads and for X_b.
"""

from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import sympy

from engine_errors import DomainError, LimitError, UsageError
from engine_settings import get_settings
from logging_config import get_logger
from parallel_executor import get_executor
from sesquiad import FiniteRingDescriptor, Sesquiad, from_pair, quotient_sesquiad
from sheaf import stalk
from spectrum import Congruence, closed_points, is_simple, spec_c
from universal_ring import is_field, is_integral_ring


class XbKind(Enum):
    TAU_ZERO = "tau_zero"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class XbPoint:
    base: int
    kind: XbKind
    n: Optional[int]
    quotient: Optional[Sesquiad]
    in_spectrum: bool
    is_closed: bool
    is_z_closed: bool
    residue_size: Optional[int]
    gcd_check: Optional[bool] = None

    @property
    def label(self) -> str:
        if self.kind is XbKind.TAU_ZERO:
            return "τ~0"
        return "τ~1" if self.n == 1 else f"τ^{self.n}~1"


def factor_with_budget(n: int, budget: Optional[int] = None) -> Dict[int, int]:
    """Prime factorization of n, refused above the budget"""
    budget = budget if budget is not None else get_settings().budget
    if n > budget:
        raise LimitError("BudgetExceeded", f"{n} exceeds the factorization budget",
                         value=str(n), budget=str(budget))
    if n < 2:
        return {}
    factors = sympy.factorint(n)
    get_logger().debug("Factorized", value=str(n), factors=len(factors))
    return {int(p): int(e) for p, e in factors.items()}


def _check_base(b: int):
    if b < 2:
        raise UsageError("BadBase", "the base must be at least 2", base=b)


def xb_sesquiad_truncation(b: int, n: Optional[int] = None) -> Optional[Sesquiad]:
    """Finite quotient pair of X_b: τ ~ 0 when n is None, else τ^n ~ 1.

    Returns None for τ^n ~ 1 when b^n - 1 = 1, which collapses 1 and 0.
    """
    _check_base(b)
    if n is None:
        return from_pair(FiniteRingDescriptor((b,), ((0,), (1,))))
    if n < 1:
        raise UsageError("BadExponent", "n must be at least 1", n=n)
    modulus = b ** n - 1
    if modulus < 2:
        return None
    subset = ((0,),) + tuple((pow(b, k, modulus),) for k in range(n))
    return from_pair(FiniteRingDescriptor((modulus,), subset))


def gcd_closed(b: int, n: int) -> bool:
    """gcd(b^n - 1, b^k - 1) = 1 for 1 <= k < n"""
    m = b ** n - 1
    return all(gcd(m, b ** k - 1) == 1 for k in range(1, n))


def tau_zero_point(b: int) -> XbPoint:
    quotient = xb_sesquiad_truncation(b)
    closed = is_simple(quotient)
    z_closed = closed and is_field(quotient.ring)
    return XbPoint(b, XbKind.TAU_ZERO, None, quotient, True, closed, z_closed,
                   b if z_closed else None)


def xb_point(b: int, n: int, budget: Optional[int] = None) -> XbPoint:
    _check_base(b)
    modulus = b ** n - 1
    factorization = factor_with_budget(modulus, budget)
    quotient = xb_sesquiad_truncation(b, n)
    if quotient is None:
        return XbPoint(b, XbKind.CYCLIC, n, None, False, False, False, None)
    closed = is_simple(quotient)
    prime = sum(factorization.values()) == 1
    z_closed = closed and prime
    gcd_check = None
    if b == 2:
        gcd_check = gcd_closed(b, n)
        if gcd_check != closed:
            raise DomainError("CrossCheckFailed", "spectrum criterion disagrees with the gcd criterion",
                              base=b, n=n)
    get_logger().debug("X_b point", base=b, n=n, closed=closed, z_closed=z_closed)
    return XbPoint(b, XbKind.CYCLIC, n, quotient, True, closed, z_closed,
                   modulus if z_closed else None, gcd_check)


def xb_points(b: int, max_n: int, budget: Optional[int] = None) -> List[XbPoint]:
    """τ ~ 0 followed by every τ^n ~ 1 for n <= max_n, closed or not"""
    _check_base(b)
    cyclic = get_executor().run_shards(lambda n: xb_point(b, n, budget), range(1, max_n + 1))
    return [tau_zero_point(b)] + cyclic


def xb_closed_points(b: int, max_n: int, budget: Optional[int] = None) -> List[XbPoint]:
    points = [p for p in xb_points(b, max_n, budget) if p.in_spectrum and p.is_closed]
    get_logger().log_enumeration("xb_closed_points", base=b, max_n=max_n, points=len(points))
    return points


# zeta functions


@dataclass(frozen=True)
class ZetaFactor:
    norm: Optional[int]
    point: str


@dataclass(frozen=True)
class ZetaFactorList:
    factors: Tuple[ZetaFactor, ...]
    exact: bool = True
    # closed points with an infinite residue: N(x) = inf, factor 1
    unbounded: Tuple[str, ...] = ()

    def finite(self) -> List[int]:
        return sorted(f.norm for f in self.factors if f.norm is not None)


def residue_stalk(sesquiad: Sesquiad, point: Congruence):
    """res(x) = (A/E)_Δ"""
    quotient = quotient_sesquiad(sesquiad, point.class_of)
    diagonal = Congruence.diagonal(quotient.size)
    return stalk(quotient, diagonal)


def is_z_point(sesquiad: Sesquiad, point: Congruence) -> bool:
    """The ring generated by A/E is integral"""
    return is_integral_ring(quotient_sesquiad(sesquiad, point.class_of).ring)


def zeta_factors(sesquiad: Sesquiad) -> ZetaFactorList:
    """N(x) over the Z-closed points: closed points whose residue ring is a finite field"""
    s = spec_c(sesquiad)
    factors, unbounded = [], []
    for i in sorted(closed_points(s)):
        residue = residue_stalk(sesquiad, s.points[i]).localized.quotient
        if not residue.is_finite():
            unbounded.append(s.label(i))
        elif is_field(residue):
            factors.append(ZetaFactor(residue.cardinality(), s.label(i)))
    get_logger().debug("Zeta factors", factors=len(factors), unbounded=len(unbounded))
    return ZetaFactorList(tuple(factors), unbounded=tuple(unbounded))


def zeta_factors_xb(b: int, max_n: int, budget: Optional[int] = None) -> ZetaFactorList:
    factors = [ZetaFactor(p.residue_size, p.label)
               for p in xb_closed_points(b, max_n, budget) if p.is_z_closed]
    return ZetaFactorList(tuple(factors))


def zeta_eval(z: ZetaFactorList, s, dps: Optional[int] = None):
    """Product of 1/(1 - N^-s) over the finite factors, at dps decimal digits"""
    dps = dps or get_settings().zeta_dps
    with mpmath.workdps(dps):
        value = mpmath.mpf(1)
        exponent = mpmath.mpf(s)
        for norm in z.finite():
            value *= 1 / (1 - mpmath.power(norm, -exponent))
        return +value
