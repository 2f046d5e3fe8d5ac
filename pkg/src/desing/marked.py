"""Marked ideals and the ideal-level constructions of the resolution engine.

A marked ideal is a tuple (chart, ideal, ordered boundary, mark).  Everything
here is chart-local polynomial data: derivative ideals, maximal order,
tangent directions, homogenized/coefficient/companion ideals, marked sums and
products, monomial vs nonmonomial decomposition, and restriction to a
coordinate hypersurface.

Restricted states (after passing to a hypersurface) keep the ambient
variable tuple and simply never mention the dropped variables; the ``active``
argument tells the derivative-based operations which variables are live.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .groebner import DEFAULT_BUDGET, Ideal
from .poly import Polynomial


class ResolutionError(RuntimeError):
    """Structured failure of a resolution-engine operation."""


class NoTangentDirection(ResolutionError):
    """No reduced-basis element has a usable linear part in the chart."""


@dataclass(frozen=True)
class Divisor:
    """One exceptional (or input) divisor, identified globally."""

    id: str
    birth: int

    def __repr__(self):
        return self.id


@dataclass(frozen=True)
class BoundaryEntry:
    """A divisor together with its equation in the current chart.

    The equation is a variable index for coordinate divisors; blow-ups of
    smooth codimension-one loci that are not coordinate hyperplanes carry a
    polynomial equation instead.
    """

    divisor: Divisor
    var: Optional[int] = None
    poly: Optional[Polynomial] = None

    def equation(self, vars: tuple[str, ...]) -> Polynomial:
        if self.var is not None:
            return Polynomial.variable(vars, self.var)
        assert self.poly is not None
        return self.poly


class BoundarySet:
    """Totally ordered list of boundary entries (older first)."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[BoundaryEntry] = ()):
        ents = sorted(entries, key=lambda e: (e.divisor.birth, e.divisor.id))
        seen = set()
        for e in ents:
            if e.divisor.id in seen:
                raise ValueError(f"duplicate divisor {e.divisor.id}")
            seen.add(e.divisor.id)
        vars_used = [e.var for e in ents if e.var is not None]
        if len(vars_used) != len(set(vars_used)):
            raise ValueError("two divisors share a coordinate in this chart")
        self.entries = tuple(ents)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def coordinate_entries(self) -> tuple[BoundaryEntry, ...]:
        return tuple(e for e in self.entries if e.var is not None)

    def ids(self) -> frozenset[str]:
        return frozenset(e.divisor.id for e in self.entries)


@dataclass
class MarkedIdeal:
    """Chart-local marked ideal (chart, ideal, boundary, mark)."""

    ideal: Ideal
    mark: int
    boundary: BoundarySet = field(default_factory=BoundarySet)
    chart: object = None  # optional back-reference used by the resolver

    def __post_init__(self):
        if self.mark < 1:
            raise ValueError("mark must be a positive integer")
        if self.ideal.is_zero():
            raise ValueError("marked ideal requires a nonzero ideal")


# -- derivative ideals ----------------------------------------------------


def derivative_ideal(
    ideal: Ideal, active: Iterable[int] | None = None, budget: int = DEFAULT_BUDGET
) -> Ideal:
    """Ideal generated by the given ideal and all first partials of its
    generators, taken over the active variables of the chart."""
    idx = range(len(ideal.vars)) if active is None else tuple(active)
    gens = list(ideal.reduced_basis(budget))
    out = list(gens)
    for g in gens:
        for i in idx:
            out.append(g.partial(i))
    return Ideal(ideal.vars, out).reduce(budget)


def iterated_derivative(
    ideal: Ideal, i: int, active: Iterable[int] | None = None, budget: int = DEFAULT_BUDGET
) -> Ideal:
    out = ideal.reduce(budget)
    for _ in range(i):
        out = derivative_ideal(out, active, budget)
    return out


_MAX_ORDER_CAP = 512


def max_order(
    ideal: Ideal, active: Iterable[int] | None = None, budget: int = DEFAULT_BUDGET
) -> int:
    """Smallest b with the b-fold derivative ideal equal to (1).

    Equals the maximal multiplicity of the vanishing locus over the algebraic
    closure; 0 for the unit ideal.
    """
    if ideal.is_zero():
        raise ValueError("max_order of the zero ideal")
    cur = ideal.reduce(budget)
    b = 0
    while not cur.is_unit(budget):
        cur = derivative_ideal(cur, active, budget)
        b += 1
        if b > _MAX_ORDER_CAP:
            raise ResolutionError("max_order exceeds cap; ideal order unreasonably large")
    return b


def max_order_on_locus(
    ideal: Ideal,
    locus: Ideal,
    active: Iterable[int] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Maximal multiplicity of the ideal over points of V(locus).

    Largest b such that the (b-1)-st derivative ideal still has a common zero
    with the locus; decided by unit-ideal tests, so exact over the closure.
    """
    if ideal.is_zero():
        raise ValueError("max_order_on_locus of the zero ideal")
    cur = ideal.reduce(budget)
    b = 0
    while not cur.add(locus).is_unit(budget):
        cur = derivative_ideal(cur, active, budget)
        b += 1
        if b > _MAX_ORDER_CAP:
            raise ResolutionError("max_order_on_locus exceeds cap")
    return b


def support_is_empty(
    ideal: Ideal, mark: int, active: Iterable[int] | None = None, budget: int = DEFAULT_BUDGET
) -> bool:
    """True iff no point has multiplicity >= mark."""
    if mark < 1:
        raise ValueError("mark must be >= 1")
    return iterated_derivative(ideal, mark - 1, active, budget).is_unit(budget)


def tangent_directions(
    ideal: Ideal, mark: int, active: Iterable[int] | None = None, budget: int = DEFAULT_BUDGET
) -> Ideal:
    """The (mark-1)-st derivative ideal; cuts out the maximal-multiplicity
    locus and carries the multiplicity-one elements used for descent."""
    if max_order(ideal, active, budget) > mark:
        raise ResolutionError("tangent directions require maximal order <= mark")
    return iterated_derivative(ideal, mark - 1, active, budget)


def select_tangent_direction(
    t_ideal: Ideal,
    active: Iterable[int],
    forbidden: frozenset[int] = frozenset(),
    budget: int = DEFAULT_BUDGET,
) -> tuple[Polynomial, int]:
    """Pick (u, pivot) deterministically from the reduced basis.

    Scans basis elements in canonical order for one of the form
    c*x_p + r with c a nonzero constant, r free of x_p, and x_p an active,
    non-boundary variable; the lowest-index admissible variable is the pivot.
    """
    active = tuple(active)
    for g in t_ideal.reduced_basis(budget):
        for p in active:
            if p in forbidden:
                continue
            c = g.linear_coefficient(p)
            if c == 0:
                continue
            rest = g - Polynomial.variable(g.vars, p).scale(c)
            if rest.involves(p):
                continue  # not triangular in x_p
            return g, p
    raise NoTangentDirection(
        "no reduced-basis element has a triangular linear part in a usable variable"
    )


# -- homogenized and coefficient ideals ------------------------------------


def homogenized_ideal(
    ideal: Ideal, mark: int, active: Iterable[int] | None = None, budget: int = DEFAULT_BUDGET
) -> Ideal:
    """ideal + D(ideal)*T + ... + D^{mark-1}(ideal)*T^{mark-1} where T is the
    tangent-direction ideal; makes descent independent of the direction."""
    if mark == 1:
        return ideal.reduce(budget)
    derivs = [ideal.reduce(budget)]
    for _ in range(mark - 1):
        derivs.append(derivative_ideal(derivs[-1], active, budget))
    t = derivs[mark - 1]
    out = derivs[0]
    t_power = None
    for i in range(1, mark):
        t_power = t if t_power is None else t_power.multiply(t, budget)
        out = out.add(derivs[i].multiply(t_power, budget))
    return out.reduce(budget)


def marked_sum(
    summands: Sequence[tuple[Ideal, int]], budget: int = DEFAULT_BUDGET
) -> tuple[Ideal, int]:
    """m-ary sum: each ideal raised to the product of the other marks, then
    summed; the mark is the product of marks.  Not built from binary sums
    because the binary operation is not associative."""
    if not summands:
        raise ValueError("marked_sum of nothing")
    for _, m in summands:
        if m < 1:
            raise ValueError("marked_sum requires all marks >= 1")
    if len(summands) == 1:
        ideal, m = summands[0]
        return ideal.reduce(budget), m
    total = math.prod(m for _, m in summands)
    vars = summands[0][0].vars
    acc = Ideal(vars, ())
    for ideal, m in summands:
        acc = acc.add(ideal.power(total // m, budget))
    return acc.reduce(budget), total


def marked_product(
    a: tuple[Ideal, int], b: tuple[Ideal, int], budget: int = DEFAULT_BUDGET
) -> tuple[Ideal, int]:
    """Generator-wise product; marks add."""
    ia, ma = a
    ib, mb = b
    if ma == 0:
        return ib.reduce(budget), mb
    if mb == 0:
        return ia.reduce(budget), ma
    return ia.multiply(ib, budget), ma + mb


def coefficient_ideal(
    ideal: Ideal, mark: int, active: Iterable[int] | None = None, budget: int = DEFAULT_BUDGET
) -> tuple[Ideal, int]:
    """Marked sum of (D^i(ideal), mark - i) for i = 0..mark-1.

    The result restricts faithfully to smooth hypersurfaces; its mark is
    mark! (the product mark * (mark-1) * ... * 1).
    """
    derivs = [ideal.reduce(budget)]
    for _ in range(mark - 1):
        derivs.append(derivative_ideal(derivs[-1], active, budget))
    return marked_sum([(derivs[i], mark - i) for i in range(mark)], budget)


# -- monomial decomposition and companion ideal -----------------------------


def monomial_decomposition(
    ideal: Ideal, boundary: BoundarySet, budget: int = DEFAULT_BUDGET
) -> tuple[dict[str, int], Ideal]:
    """Split the ideal as (product of boundary equations)^exponents * rest.

    Exponents are valuations of the reduced basis along each boundary
    equation; the returned rest ideal is not divisible by any of them.
    """
    if ideal.is_zero():
        raise ValueError("monomial decomposition of the zero ideal")
    exps: dict[str, int] = {}
    rest = ideal.reduce(budget)
    for entry in boundary:
        if entry.var is not None:
            k = rest.variable_valuation(entry.var, budget)
            if k:
                gens = [g.divide_by_monomial(entry.var, k) for g in rest.reduced_basis(budget)]
                rest = Ideal(ideal.vars, gens).reduce(budget)
        else:
            k = rest.polynomial_valuation(entry.poly, budget)
            if k:
                gens = []
                for g in rest.reduced_basis(budget):
                    for _ in range(k):
                        g = g.divide_exact(entry.poly)
                    gens.append(g)
                rest = Ideal(ideal.vars, gens).reduce(budget)
        exps[entry.divisor.id] = k
    return exps, rest


def monomial_part_ideal(
    exps: dict[str, int], boundary: BoundarySet, vars: tuple[str, ...]
) -> Ideal:
    """The principal ideal generated by the product of boundary equations."""
    prod = Polynomial.const(vars, 1)
    for entry in boundary:
        k = exps.get(entry.divisor.id, 0)
        if k:
            prod = prod * (entry.equation(vars) ** k)
    return Ideal(vars, (prod,))


def companion_ideal(
    ideal: Ideal,
    mark: int,
    boundary: BoundarySet,
    variant: str = "canonical",
    active: Iterable[int] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> tuple[Ideal, int]:
    """Maximal-order ideal driving one reduction round.

    Canonical: (rest, ord) when ord >= mark, else the marked sum of
    (rest, ord) and (monomial part, mark - ord), with ord the maximal
    multiplicity of the nonmonomial part over the current locus.
    The bravo_villamayor variant returns (monomial part, 1) when ord <= 1,
    mark == 1 and the monomial part is nontrivial.
    """
    if variant not in ("canonical", "bravo_villamayor"):
        raise ValueError(f"unknown companion variant {variant!r}")
    exps, rest = monomial_decomposition(ideal, boundary, budget)
    locus = iterated_derivative(ideal, mark - 1, active, budget)
    ord_rest = max_order_on_locus(rest, locus, active, budget)
    has_monomial = any(exps.values())
    if variant == "bravo_villamayor" and ord_rest <= 1 and mark == 1 and has_monomial:
        return monomial_part_ideal(exps, boundary, ideal.vars), 1
    if ord_rest == 0:
        raise ResolutionError("companion ideal undefined: nonmonomial part is trivial on the locus")
    if ord_rest >= mark:
        return rest.reduce(budget), ord_rest
    m_ideal = monomial_part_ideal(exps, boundary, ideal.vars)
    return marked_sum([(rest, ord_rest), (m_ideal, mark - ord_rest)], budget)


# -- restriction -------------------------------------------------------------


def restrict_to_hypersurface(
    ideal: Ideal, pivot: int, budget: int = DEFAULT_BUDGET
) -> Ideal:
    """Set the pivot coordinate to zero.  A zero result signals that the
    vanishing locus fills the hypersurface (the codimension-one case)."""
    return ideal.set_zero([pivot]).reduce(budget)
