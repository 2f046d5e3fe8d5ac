"""Chart-level blow-ups at coordinate centers and the transform rules.

A chart is an affine patch with a substitution map to its parent.  Blowing up
a coordinate center {x_i = 0 : i in center} produces one child chart per
center variable m, with substitution x_i -> x_i * x_m for the other center
variables; x_m becomes the equation of the new exceptional divisor.  A
one-variable center is an isomorphism that only records a new divisor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .groebner import DEFAULT_BUDGET, Ideal
from .marked import BoundaryEntry, BoundarySet, Divisor, ResolutionError
from .poly import Polynomial


class CenterNotInSupport(ResolutionError):
    """Controlled division was not exact: the center missed the support."""


@dataclass
class Chart:
    id: str
    vars: tuple[str, ...]
    parent: Optional["Chart"] = None
    substitution: dict[int, Polynomial] = field(default_factory=dict)
    exceptional: dict[int, str] = field(default_factory=dict)  # var index -> divisor id
    depth: int = 0

    def substitution_strings(self) -> dict[str, str]:
        return {
            self.vars[i]: str(p) for i, p in sorted(self.substitution.items())
        }

    def pullback(self, f: Polynomial) -> Polynomial:
        """Image of a parent-chart polynomial in this chart."""
        return f.substitute(self.substitution)

    def total_substitution(self, f: Polynomial) -> Polynomial:
        """Image of a root-chart polynomial through the whole chart tower."""
        chain = []
        chart = self
        while chart is not None:
            chain.append(chart)
            chart = chart.parent
        out = f
        for chart in reversed(chain):
            if chart.substitution:
                out = out.substitute(chart.substitution)
        return out


@dataclass(frozen=True)
class Center:
    """A smooth coordinate center: a nonempty set of chart variable indices."""

    variables: tuple[int, ...]

    def __post_init__(self):
        if not self.variables:
            raise ValueError("empty center")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("center lists a variable twice")
        object.__setattr__(self, "variables", tuple(sorted(self.variables)))


@dataclass(frozen=True)
class TransformKind:
    kind: str  # 'total' | 'controlled' | 'weak' | 'strict'
    mark: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("total", "controlled", "weak", "strict"):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.kind == "controlled" and (self.mark is None or self.mark < 0):
            raise ValueError("controlled transform requires a mark")


def blow_up_center(chart: Chart, center: Center, divisor: Divisor) -> list[Chart]:
    """One child chart per center variable; the child where x_m is the
    divisor coordinate substitutes x_i -> x_i * x_m for the other center
    variables.  A single-variable center yields one chart with the identity
    substitution and a fresh divisor flag."""
    cvars = center.variables
    for i in cvars:
        if i >= len(chart.vars):
            raise ValueError("center variable outside chart")
    children = []
    for m in cvars:
        sub = {}
        for i in cvars:
            if i != m:
                sub[i] = Polynomial.variable(chart.vars, i) * Polynomial.variable(
                    chart.vars, m
                )
        exceptional = dict(chart.exceptional)
        # a divisor whose coordinate is the blow-up coordinate leaves the chart
        exceptional.pop(m, None)
        for i in list(exceptional):
            if i == m:
                del exceptional[i]
        exceptional[m] = divisor.id
        children.append(
            Chart(
                id=f"{chart.id}.{chart.vars[m]}{chart.depth + 1}",
                vars=chart.vars,
                parent=chart,
                substitution=sub,
                exceptional=exceptional,
                depth=chart.depth + 1,
            )
        )
    return children


def transform_ideal(
    ideal: Ideal,
    kind: TransformKind,
    child: Chart,
    divisor_var: int,
    budget: int = DEFAULT_BUDGET,
) -> Ideal:
    """Transform an ideal into a child chart of a blow-up.

    total: substituted generators.  controlled(mark): exact division of every
    substituted generator by the divisor coordinate to the mark.  weak:
    division by the full common power.  strict: per-generator full division
    (principal ideals only).
    """
    total = ideal.substituted(child.substitution)
    if kind.kind == "total":
        return total.reduce(budget)
    if kind.kind == "controlled":
        gens = []
        for g in total.gens:
            q = g.divide_by_monomial(divisor_var, kind.mark)
            if q is None:
                raise CenterNotInSupport(
                    f"controlled transform not divisible by "
                    f"{child.vars[divisor_var]}^{kind.mark}"
                )
            gens.append(q)
        return Ideal(ideal.vars, gens).reduce(budget)
    if kind.kind == "weak":
        total = total.reduce(budget)
        if total.is_zero():
            return total
        k = total.variable_valuation(divisor_var, budget)
        gens = [g.divide_by_monomial(divisor_var, k) for g in total.reduced_basis(budget)]
        return Ideal(ideal.vars, gens).reduce(budget)
    # strict: restricted to principal ideals
    if len(ideal.reduced_basis(budget)) != 1:
        raise ResolutionError("strict transform implemented for principal ideals only")
    g = total.reduced_basis(budget)[0]
    k = g.valuation_in(divisor_var)
    return Ideal(ideal.vars, (g.divide_by_monomial(divisor_var, k),)).reduce(budget)


def transform_boundary(
    boundary: BoundarySet, center: Center, divisor_var: int, new_divisor: Divisor
) -> BoundarySet:
    """Strict transforms of the old divisors plus the new one as maximal.

    A coordinate divisor survives with the same coordinate unless its
    coordinate is the chart's division variable, in which case its strict
    transform leaves the chart.  Polynomial-equation divisors never contain
    blow-up centers here, so their equations pull back unchanged up to the
    substitution.
    """
    entries = []
    for e in boundary:
        if e.var is not None:
            if e.var == divisor_var:
                continue  # total transform became purely exceptional
            entries.append(e)
        else:
            entries.append(e)  # transformed by the caller (substitution applied)
    entries.append(BoundaryEntry(new_divisor, var=divisor_var))
    return BoundarySet(entries)


def normalize_tangent_direction(
    u: Polynomial, pivot: int
) -> tuple[dict[int, Polynomial], dict[int, Polynomial]]:
    """Triangular change of coordinates turning u = c*x_p + r (r free of x_p)
    into the coordinate x_p.

    Returns (forward, inverse) substitution maps: forward rewrites existing
    chart data (x_p -> (x_p - r)/c), inverse expresses old coordinates in the
    new ones for chart-map composition.
    """
    c = u.linear_coefficient(pivot)
    if c == 0:
        raise ResolutionError("pivot variable has no linear part in the direction")
    rest = u - Polynomial.variable(u.vars, pivot).scale(c)
    if rest.involves(pivot):
        raise ResolutionError("direction is not triangular in the pivot variable")
    x_p = Polynomial.variable(u.vars, pivot)
    forward = {pivot: (x_p - rest).scale(1 / c)}
    inverse = {pivot: x_p.scale(c) + rest}
    return forward, inverse


def compose_charts_total(chart: Chart, ideal: Ideal) -> Ideal:
    """Total transform of a root-chart ideal in the given chart."""
    return Ideal(
        ideal.vars, tuple(chart.total_substitution(g) for g in ideal.gens)
    )
