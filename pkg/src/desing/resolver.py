"""The canonical resolution driver.

State model: every tree node carries a chart plus a nested stack of
resolution levels.  The top level tracks the controlled transform of the
input marked ideal.  A nonmonomial level runs in rounds: each round fixes
the multiplicity of the nonmonomial part, builds the maximal-order companion
ideal, replaces it by the coefficient ideal of its homogenization, and then
either separates old boundary divisors (restricting to their intersections)
or descends to a hypersurface cut out by a multiplicity-one direction.  Both
separations and descents recurse into a lower-dimensional level whose own
key is spliced into the parent's.

Keys: a nonmonomial level contributes (ord/mark) followed by the boundary
count s(x) and then either infinity (terminal separation or codimension-one
blow-up) or the key of the restricted level.  A purely monomial level
contributes zeros with nu = (sum of exponents)/mark and rho the maximal
boundary subset reaching the mark.  In one-variable restricted levels the
terminal tail collapses: a contact-side restriction contributes a bare
infinity after its leading ratio, a boundary-side restriction contributes
nothing, matching the reference multiplicity-2 curve trace exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .blowup import (
    CenterNotInSupport,
    Center,
    Chart,
    blow_up_center,
    normalize_tangent_direction,
)
from .groebner import BudgetExceeded, DEFAULT_BUDGET, Ideal
from .invariant import INF, InvVector, ResolutionKey, Rho, compute_rho_nu_monomial
from .marked import (
    BoundaryEntry,
    BoundarySet,
    Divisor,
    MarkedIdeal,
    NoTangentDirection,
    ResolutionError,
    coefficient_ideal,
    homogenized_ideal,
    iterated_derivative,
    marked_sum,
    max_order_on_locus,
    monomial_decomposition,
    monomial_part_ideal,
    restrict_to_hypersurface,
    select_tangent_direction,
    support_is_empty,
)
from .poly import Polynomial


class CenterNotMonomializable(ResolutionError):
    """The required center is not a coordinate subspace reachable by
    triangular polynomial coordinate changes in this chart."""


class DepthExceeded(ResolutionError):
    pass


@dataclass
class Config:
    mode: str = "resolve"  # 'resolve' | 'principalize' | 'embedded'
    variant: str = "canonical"  # 'canonical' | 'bravo_villamayor'
    max_depth: int = 64
    budget: int = DEFAULT_BUDGET
    trace: int = 0

    def __post_init__(self):
        if self.mode not in ("resolve", "principalize", "embedded"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.variant not in ("canonical", "bravo_villamayor"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.max_depth < 1:
            raise ValueError("max depth must be >= 1")


def stop_marker(codim: int) -> InvVector:
    """Terminal invariant of embedded desingularization for the given
    codimension: (1,0) repeated codim times, then infinity."""
    entries: list = []
    for _ in range(codim):
        entries.extend([Fraction(1), Fraction(0)])
    entries.append(INF)
    return InvVector(entries)


# -- nested level state -------------------------------------------------


@dataclass
class _Contact:
    pivot: int
    inner: "_Level"


@dataclass
class _Branch:
    s: int
    hvars: tuple[int, ...]
    hids: frozenset[str]
    inner: "_Level"


@dataclass
class _Round:
    ord_level: int
    descent: Ideal
    dmark: int
    frozen: frozenset[str]
    sub: object = None  # _Contact | _Branch | None


@dataclass
class _Level:
    chain: Ideal
    mark: int
    boundary: list[BoundaryEntry]
    active: tuple[int, ...]
    launched: str  # 'top' | 'contact' | 'boundary'
    round: Optional[_Round] = None

    def boundary_set(self) -> BoundarySet:
        return BoundarySet(self.boundary)


@dataclass
class _Outcome:
    status: str  # 'resolved' | 'center'
    key: Optional[ResolutionKey] = None
    center_vars: Optional[tuple[int, ...]] = None
    center_poly: Optional[Polynomial] = None
    kind: str = ""
    stage_path: tuple[str, ...] = ()


@dataclass
class ResolutionNode:
    id: str
    parent: Optional[str]
    depth: int
    seq: int
    chart: Chart
    level: _Level
    status: str = "active"  # -> 'blown'|'resolved'|'stopped'|'monomial'|'error'
    outcome: Optional[_Outcome] = None
    children: list = field(default_factory=list)
    certificate: Optional[dict] = None

    def stage_tag(self) -> str:
        if self.status == "resolved":
            return "resolved"
        if self.outcome is None or not self.outcome.stage_path:
            return self.status
        for tag in self.outcome.stage_path:
            if tag != "2a":
                return tag
        return "2a"


@dataclass
class ResolutionTree:
    mode: str
    variant: str
    vars: tuple[str, ...]
    input_gens: tuple[Polynomial, ...]
    root: ResolutionNode
    nodes: dict[str, ResolutionNode]
    divisors: list[Divisor]
    events: list[dict] = field(default_factory=list)
    status: str = "ok"  # 'ok' | 'depth_exhausted' | 'budget_exhausted'
    error: Optional[str] = None

    def leaves(self):
        return [n for n in self.nodes.values() if not n.children]

    def key_trace(self) -> list[dict]:
        """Distinct maximal-key values in driver order (blow-ups and stops)."""
        out: list[dict] = []
        for ev in self.events:
            k = ev["key"]
            if out and out[-1]["key"] == k:
                continue
            out.append({"key": k, "node": ev["node"], "event": ev["event"]})
        return out


class _Engine:
    def __init__(self, cfg: Config, vars: tuple[str, ...]):
        self.cfg = cfg
        self.vars = vars
        self.divisors: list[Divisor] = []
        self.seq = 0

    # -- small helpers ---------------------------------------------------

    def _fresh_divisor(self) -> Divisor:
        d = Divisor(id=f"D{len(self.divisors) + 1}", birth=len(self.divisors) + 1)
        self.divisors.append(d)
        return d

    def _budget(self) -> int:
        return self.cfg.budget

    def _coordinate_ideal(self, idxs) -> Ideal:
        return Ideal(self.vars, tuple(Polynomial.variable(self.vars, i) for i in idxs))

    def _is_mult_one(self, u: Polynomial, active) -> bool:
        gens = [u] + [u.partial(i) for i in active]
        return Ideal(self.vars, gens).is_unit(self._budget())

    @staticmethod
    def _node_boundary_vars(node: ResolutionNode) -> frozenset[int]:
        """Coordinates carrying a divisor at any nesting level of the node;
        a normalization pivot must avoid all of them."""
        out = set()

        def walk(level: _Level):
            for e in level.boundary:
                if e.var is not None:
                    out.add(e.var)
            if level.round is not None and level.round.sub is not None:
                walk(level.round.sub.inner)

        walk(node.level)
        return frozenset(out)

    # -- key computation ---------------------------------------------------

    def compute(self, node: ResolutionNode, level: _Level) -> _Outcome:
        budget = self._budget()
        exps, rest = monomial_decomposition(level.chain, level.boundary_set(), budget)
        has_mon = any(exps.values())

        def bv_fires(ord_rest: int) -> bool:
            return (
                self.cfg.variant == "bravo_villamayor"
                and level.mark == 1
                and has_mon
                and ord_rest <= 1
            )

        def monomial_route(prefix_three_halves: bool) -> _Outcome:
            level.round = None
            out = self._monomial_outcome(node, level, exps)
            if prefix_three_halves and out.status == "center":
                out.key = ResolutionKey(
                    inv=InvVector([Fraction(3, 2)] + list(out.key.inv.entries)),
                    rho=out.key.rho,
                    nu=out.key.nu,
                )
            return out

        if rest.is_unit(budget):
            # purely monomial: support and centers are combinatorial
            return monomial_route(bv_fires(0))

        if support_is_empty(level.chain, level.mark, level.active, budget):
            return _Outcome(status="resolved")
        locus = iterated_derivative(level.chain, level.mark - 1, level.active, budget)
        ord_rest = max_order_on_locus(rest, locus, level.active, budget)

        if bv_fires(ord_rest):
            return monomial_route(True)

        if ord_rest == 0:
            return monomial_route(False)

        if level.round is not None and support_is_empty(
            level.round.descent, level.round.dmark, level.active, budget
        ):
            level.round = None
        if level.round is None:
            level.round = self._open_round(level, exps, rest, ord_rest)
        rnd = level.round
        prefix = Fraction(rnd.ord_level, level.mark)
        tail = self._step1(node, level, rnd)

        if (
            len(level.active) == 1
            and level.launched != "top"
            and tail.kind in ("1aa", "1ba")
        ):
            # collapsed terminal tail of a one-variable restricted level
            if level.launched == "contact":
                entries = [prefix, INF]
            else:
                entries = [prefix]
            return _Outcome(
                status="center",
                key=ResolutionKey(InvVector(entries), Rho(()), Fraction(0)),
                center_vars=tail.center_vars,
                center_poly=tail.center_poly,
                kind=tail.kind,
                stage_path=("2a",) + tail.stage_path,
            )
        key = ResolutionKey(
            inv=InvVector([prefix] + list(tail.key.inv.entries)),
            rho=tail.key.rho,
            nu=tail.key.nu,
        )
        return _Outcome(
            status="center",
            key=key,
            center_vars=tail.center_vars,
            center_poly=tail.center_poly,
            kind=tail.kind,
            stage_path=("2a",) + tail.stage_path,
        )

    def _open_round(self, level: _Level, exps, rest: Ideal, ord_rest: int) -> _Round:
        budget = self._budget()
        if ord_rest >= level.mark:
            comp, cmark = rest.reduce(budget), ord_rest
        else:
            m_ideal = monomial_part_ideal(exps, level.boundary_set(), self.vars)
            comp, cmark = marked_sum(
                [(rest, ord_rest), (m_ideal, level.mark - ord_rest)], budget
            )
        homog = homogenized_ideal(comp, cmark, level.active, budget)
        descent, dmark = coefficient_ideal(homog, cmark, level.active, budget)
        return _Round(
            ord_level=ord_rest,
            descent=descent,
            dmark=dmark,
            frozen=frozenset(e.divisor.id for e in level.boundary),
            sub=None,
        )

    def _monomial_outcome(self, node, level: _Level, exps) -> _Outcome:
        positive = {
            e.divisor: exps[e.divisor.id]
            for e in level.boundary
            if exps.get(e.divisor.id, 0) > 0 and e.var is not None
        }
        total = sum(positive.values())
        if total < level.mark:
            return _Outcome(status="resolved")
        rho, nu = compute_rho_nu_monomial(positive, level.mark)
        var_of = {e.divisor.id: e.var for e in level.boundary if e.var is not None}
        center = tuple(sorted(var_of[d.id] for d in rho.divisors))
        return _Outcome(
            status="center",
            key=ResolutionKey(InvVector([]), rho, nu),
            center_vars=center,
            kind="2b",
            stage_path=("2b",),
        )

    # -- step 1: boundary separation, then descent ---------------------------

    def _step1(self, node, level: _Level, rnd: _Round) -> _Outcome:
        budget = self._budget()
        t_ideal = iterated_derivative(rnd.descent, rnd.dmark - 1, level.active, budget)
        frozen_coord = [
            e
            for e in level.boundary
            if e.divisor.id in rnd.frozen and e.var is not None
        ]
        s, candidates = self._boundary_level(t_ideal, frozen_coord)

        if isinstance(rnd.sub, _Branch) and rnd.sub.s != s:
            rnd.sub = None
        if s >= 1:
            return self._step1a(node, level, rnd, t_ideal, s, candidates)
        if isinstance(rnd.sub, _Branch):
            rnd.sub = None
        return self._step1b(node, level, rnd, t_ideal)

    def _boundary_level(self, t_ideal: Ideal, frozen_coord):
        """Largest number s of old boundary divisors meeting the locus at a
        common point, with the list of coordinate subsets realizing it."""
        budget = self._budget()
        by_var = sorted(frozen_coord, key=lambda e: e.var)
        for size in range(len(by_var), 0, -1):
            found = []
            for combo in itertools.combinations(by_var, size):
                hvars = tuple(e.var for e in combo)
                probe = t_ideal.add(self._coordinate_ideal(hvars))
                if not probe.is_unit(budget):
                    found.append(combo)
            if found:
                return size, found
        return 0, []

    def _step1a(self, node, level, rnd, t_ideal, s, candidates) -> _Outcome:
        budget = self._budget()
        # terminal separation first: an intersection contained in the locus
        for combo in candidates:
            hvars = tuple(e.var for e in combo)
            if t_ideal.set_zero(hvars).reduce(budget).is_zero():
                return _Outcome(
                    status="center",
                    key=ResolutionKey(
                        InvVector([Fraction(s), INF]), Rho(()), Fraction(0)
                    ),
                    center_vars=hvars,
                    kind="1aa",
                    stage_path=("1aa",),
                )
        # recursive separation: resolve the restriction to each intersection;
        # candidates are stored before being computed so coordinate
        # normalizations requested inside reach the whole node state
        reuse = rnd.sub if isinstance(rnd.sub, _Branch) and rnd.sub.s == s else None
        best = None
        last_out = None
        # compute the persisted branch first: its stored state predates any
        # coordinate change a fresh candidate might request
        def order_key(combo):
            hv = tuple(e.var for e in combo)
            if reuse is not None and reuse.hvars == hv:
                return (0, hv)
            return (1, hv)

        for combo in sorted(candidates, key=order_key):
            hvars = tuple(e.var for e in combo)
            hids = frozenset(e.divisor.id for e in combo)
            if reuse is not None and reuse.hvars == hvars and reuse.hids == hids:
                inner = reuse.inner
            else:
                inner = self._restricted_level(level, rnd, hvars, launched="boundary")
            rnd.sub = _Branch(s=s, hvars=hvars, hids=hids, inner=inner)
            inner_out = self.compute(node, inner)
            last_out = (inner_out, hvars, hids)
            if inner_out.status == "resolved":
                continue
            if best is None or self._tail_sort(inner_out) > self._tail_sort(best[0]):
                best = (inner_out, hvars, hids)
        if best is None:
            # cannot happen when the intersections genuinely meet the locus
            raise ResolutionError(
                "boundary intersections meet the locus but all restrictions resolved"
            )
        inner_out, hvars, hids = best
        if last_out is None or last_out[1:] != (hvars, hids):
            # rebuild the winner against the current (possibly renormalized)
            # state so every stored level is coordinate-consistent
            inner = self._restricted_level(level, rnd, hvars, launched="boundary")
            rnd.sub = _Branch(s=s, hvars=hvars, hids=hids, inner=inner)
            inner_out = self.compute(node, inner)
            if inner_out.status == "resolved":
                raise ResolutionError("winning boundary restriction resolved on rebuild")
        center_vars = None
        if inner_out.center_vars is not None:
            center_vars = tuple(sorted(set(inner_out.center_vars) | set(hvars)))
        return _Outcome(
            status="center",
            key=ResolutionKey(
                inv=InvVector([Fraction(s)] + list(inner_out.key.inv.entries)),
                rho=inner_out.key.rho,
                nu=inner_out.key.nu,
            ),
            center_vars=center_vars,
            center_poly=inner_out.center_poly,
            kind="1ab",
            stage_path=("1ab",) + inner_out.stage_path,
        )

    @staticmethod
    def _tail_sort(out: _Outcome):
        return (out.key.inv.sort_key(), out.key.rho.sort_key())

    def _step1b(self, node, level, rnd, t_ideal) -> _Outcome:
        budget = self._budget()
        if rnd.sub is None:
            probe = self._probe_codim_one(node, level, rnd, t_ideal)
            if probe is not None:
                return probe
            u, pivot = select_tangent_direction(
                t_ideal,
                level.active,
                forbidden=self._node_boundary_vars(node),
                budget=budget,
            )
            if u != Polynomial.variable(self.vars, pivot):
                self._apply_normalization(node, u, pivot)
                rnd = level.round
            restriction = restrict_to_hypersurface(rnd.descent, pivot, budget)
            if restriction.is_zero():
                return _Outcome(
                    status="center",
                    key=ResolutionKey(
                        InvVector([Fraction(0), INF]), Rho(()), Fraction(0)
                    ),
                    center_vars=(pivot,),
                    kind="1ba",
                    stage_path=("1ba",),
                )
            inner = self._restricted_level(level, rnd, (pivot,), launched="contact")
            rnd.sub = _Contact(pivot=pivot, inner=inner)
        sub = rnd.sub
        assert isinstance(sub, _Contact)
        inner_out = self.compute(node, sub.inner)
        if inner_out.status == "resolved":
            # contact hypersurface carries no locus: round should be closed
            rnd.sub = None
            level.round = None
            return self.compute(node, level)
        center_vars = None
        if inner_out.center_vars is not None:
            center_vars = tuple(sorted(set(inner_out.center_vars) | {sub.pivot}))
        return _Outcome(
            status="center",
            key=ResolutionKey(
                inv=InvVector([Fraction(0)] + list(inner_out.key.inv.entries)),
                rho=inner_out.key.rho,
                nu=inner_out.key.nu,
            ),
            center_vars=center_vars,
            center_poly=inner_out.center_poly,
            kind="1bb",
            stage_path=("1bb",) + inner_out.stage_path,
        )

    def _probe_codim_one(self, node, level, rnd, t_ideal) -> Optional[_Outcome]:
        """Codimension-one component: the direction ideal is principal with a
        multiplicity-one generator dividing the whole descent ideal."""
        budget = self._budget()
        rb = t_ideal.reduced_basis(budget)
        if len(rb) != 1 or rb[0].is_constant():
            return None
        u = rb[0]
        if not self._is_mult_one(u, level.active):
            return None
        power = u ** rnd.dmark
        for g in rnd.descent.reduced_basis(budget):
            if g.divide_exact(power) is None:
                return None
        key = ResolutionKey(InvVector([Fraction(0), INF]), Rho(()), Fraction(0))
        if u.support_vars() and len(u.support_vars()) == 1 and u == Polynomial.variable(
            self.vars, next(iter(u.support_vars()))
        ):
            pivot = next(iter(u.support_vars()))
            return _Outcome(
                status="center", key=key, center_vars=(pivot,), kind="1ba",
                stage_path=("1ba",),
            )
        # try to normalize a triangular linear direction into a coordinate
        forbidden = self._node_boundary_vars(node)
        for p in level.active:
            if p in forbidden:
                continue
            c = u.linear_coefficient(p)
            if c == 0:
                continue
            rest = u - Polynomial.variable(self.vars, p).scale(c)
            if rest.involves(p):
                continue
            self._apply_normalization(node, u, p)
            return _Outcome(
                status="center", key=key, center_vars=(p,), kind="1ba",
                stage_path=("1ba",),
            )
        if level.launched == "top":
            return _Outcome(
                status="center", key=key, center_poly=u, kind="1ba",
                stage_path=("1ba",),
            )
        raise CenterNotMonomializable(
            f"codimension-one center {u} inside a restricted level is not "
            f"a coordinate subspace"
        )

    # -- restricted levels ----------------------------------------------------

    def _restricted_level(
        self, level: _Level, rnd: _Round, dropped: tuple[int, ...], launched: str
    ) -> _Level:
        budget = self._budget()
        chain = rnd.descent.set_zero(dropped).reduce(budget)
        if chain.is_zero():
            raise ResolutionError("restriction vanished; should have been terminal")
        boundary = []
        for e in level.boundary:
            if e.divisor.id in rnd.frozen:
                continue
            if e.var is not None:
                if e.var in dropped:
                    continue
                boundary.append(e)
            else:
                p = e.poly.set_zero(dropped)
                if p.is_zero() or p.is_constant():
                    continue
                boundary.append(BoundaryEntry(e.divisor, poly=p))
        active = tuple(i for i in level.active if i not in dropped)
        return _Level(
            chain=chain,
            mark=rnd.dmark,
            boundary=boundary,
            active=active,
            launched=launched,
        )

    # -- normalization ----------------------------------------------------------

    def _apply_normalization(self, node: ResolutionNode, u: Polynomial, pivot: int):
        forward, inverse = normalize_tangent_direction(u, pivot)
        self._substitute_level(node.level, forward)
        # fold the coordinate change into the chart map so total transforms
        # land in the new coordinates
        chart = node.chart
        if chart.substitution:
            chart.substitution = {
                i: p.substitute(forward) for i, p in chart.substitution.items()
            }
        else:
            chart.substitution = dict(forward)

    def _substitute_level(self, level: _Level, sub: dict[int, Polynomial]):
        budget = self._budget()
        level.chain = level.chain.substituted(sub).reduce(budget)
        level.boundary = [
            e
            if e.poly is None
            else BoundaryEntry(e.divisor, poly=e.poly.substitute(sub))
            for e in level.boundary
        ]
        rnd = level.round
        if rnd is not None:
            rnd.descent = rnd.descent.substituted(sub).reduce(budget)
            if isinstance(rnd.sub, _Contact):
                self._substitute_level(rnd.sub.inner, sub)
            elif isinstance(rnd.sub, _Branch):
                self._substitute_level(rnd.sub.inner, sub)

    # -- blow-up transformation ----------------------------------------------

    def _transform_level(
        self,
        level: _Level,
        cvars: tuple[int, ...],
        m: int,
        newdiv: Divisor,
        sub: dict[int, Polynomial],
    ) -> _Level:
        budget = self._budget()
        chain = self._controlled(level.chain, sub, m, level.mark)
        boundary = []
        for e in level.boundary:
            if e.var is not None:
                if e.var == m:
                    continue
                boundary.append(e)
            else:
                p = e.poly.substitute(sub)
                k = p.valuation_in(m)
                if k:
                    p = p.divide_by_monomial(m, k)
                if p.is_constant():
                    continue
                boundary.append(BoundaryEntry(e.divisor, poly=p))
        boundary.append(BoundaryEntry(newdiv, var=m))
        new = _Level(
            chain=chain,
            mark=level.mark,
            boundary=boundary,
            active=level.active,
            launched=level.launched,
        )
        rnd = level.round
        if rnd is not None:
            descent = self._controlled(rnd.descent, sub, m, rnd.dmark)
            new_sub = None
            if isinstance(rnd.sub, _Contact):
                if m != rnd.sub.pivot:
                    inner = self._transform_level(
                        rnd.sub.inner,
                        tuple(i for i in cvars if i != rnd.sub.pivot),
                        m,
                        newdiv,
                        sub,
                    )
                    new_sub = _Contact(pivot=rnd.sub.pivot, inner=inner)
            elif isinstance(rnd.sub, _Branch):
                if m not in rnd.sub.hvars and set(rnd.sub.hvars) <= set(cvars):
                    inner = self._transform_level(
                        rnd.sub.inner,
                        tuple(i for i in cvars if i not in rnd.sub.hvars),
                        m,
                        newdiv,
                        sub,
                    )
                    new_sub = _Branch(
                        s=rnd.sub.s, hvars=rnd.sub.hvars, hids=rnd.sub.hids, inner=inner
                    )
            new.round = _Round(
                ord_level=rnd.ord_level,
                descent=descent,
                dmark=rnd.dmark,
                frozen=rnd.frozen,
                sub=new_sub,
            )
        return new

    def _controlled(self, ideal: Ideal, sub, m: int, mark: int) -> Ideal:
        budget = self._budget()
        total = ideal.substituted(sub) if sub else ideal
        gens = []
        for g in total.gens:
            q = g.divide_by_monomial(m, mark)
            if q is None:
                raise CenterNotInSupport(
                    f"controlled transform not divisible by {self.vars[m]}^{mark}"
                )
            gens.append(q)
        return Ideal(self.vars, gens).reduce(budget)

    def _divide_level_by(self, level: _Level, u: Polynomial, newdiv: Divisor) -> _Level:
        """Codimension-one blow-up along a non-coordinate smooth hypersurface:
        the chart map is the identity; every ideal divides by u to its mark."""
        budget = self._budget()
        power = u ** level.mark
        gens = []
        for g in level.chain.reduced_basis(budget):
            q = g.divide_exact(power)
            if q is None:
                raise CenterNotInSupport("hypersurface center misses the support")
            gens.append(q)
        chain = Ideal(self.vars, gens).reduce(budget)
        boundary = list(level.boundary) + [BoundaryEntry(newdiv, poly=u)]
        new = _Level(
            chain=chain,
            mark=level.mark,
            boundary=boundary,
            active=level.active,
            launched=level.launched,
        )
        rnd = level.round
        if rnd is not None:
            dpower = u ** rnd.dmark
            dgens = []
            for g in rnd.descent.reduced_basis(budget):
                q = g.divide_exact(dpower)
                if q is None:
                    raise CenterNotInSupport("hypersurface center misses the descent ideal")
                dgens.append(q)
            new.round = _Round(
                ord_level=rnd.ord_level,
                descent=Ideal(self.vars, dgens).reduce(budget),
                dmark=rnd.dmark,
                frozen=rnd.frozen,
                sub=None,
            )
        return new

    # -- center validation -------------------------------------------------------

    def _validate_center(self, level: _Level, cvars: tuple[int, ...]):
        """Center inside the support means the chain lies in the center
        ideal's mark-th power: every term must have degree at least the mark
        in the center variables (exact, and it certifies the controlled
        division up front)."""
        budget = self._budget()
        for g in level.chain.reduced_basis(budget):
            for m in g.terms:
                if sum(m[i] for i in cvars) < level.mark:
                    raise CenterNotInSupport(
                        f"center {[self.vars[i] for i in cvars]} not inside the support"
                    )


# -- public drivers --------------------------------------------------------


def resolve_marked_ideal(marked: MarkedIdeal, cfg: Config | None = None) -> ResolutionTree:
    cfg = cfg or Config()
    ideal = marked.ideal.reduce(cfg.budget)
    if ideal.is_zero():
        raise ValueError("cannot resolve the zero ideal")
    vars = ideal.vars
    engine = _Engine(cfg, vars)

    boundary_entries = []
    for e in marked.boundary:
        engine.divisors.append(e.divisor)
        boundary_entries.append(e)
    engine.divisors.sort(key=lambda d: (d.birth, d.id))

    root_chart = Chart(id="r", vars=vars)
    root_level = _Level(
        chain=ideal,
        mark=marked.mark,
        boundary=list(boundary_entries),
        active=tuple(range(len(vars))),
        launched="top",
    )
    root = ResolutionNode(
        id="r", parent=None, depth=0, seq=0, chart=root_chart, level=root_level
    )
    tree = ResolutionTree(
        mode=cfg.mode,
        variant=cfg.variant,
        vars=vars,
        input_gens=tuple(ideal.gens),
        root=root,
        nodes={root.id: root},
        divisors=engine.divisors,
    )
    codim = len(ideal.reduced_basis(cfg.budget))
    marker = stop_marker(codim)

    active: list[ResolutionNode] = []
    try:
        _activate(engine, tree, root, active, cfg, codim)
    except BudgetExceeded as exc:
        tree.status, tree.error = "budget_exhausted", str(exc)
        root.status = "error"
        return tree

    while active:
        active.sort(key=lambda n: (n.outcome.key.sort_key(), -n.seq))
        node = active.pop()
        if cfg.mode == "embedded":
            _, rest_now = monomial_decomposition(
                node.level.chain, node.level.boundary_set(), cfg.budget
            )
            if rest_now.is_unit(cfg.budget):
                # no strict-transform material left in this chart
                node.status = "monomial"
                continue
            if node.outcome.key.inv.compare(marker) == 0:
                node.status = "stopped"
                node.certificate = _embedded_certificate(node, tree, codim, cfg)
                tree.events.append(
                    {"event": "stop", "node": node.id, "key": node.outcome.key.to_json()}
                )
                continue
            # weak-desingularization halt: the strict transform in this chart
            # is already smooth with simple normal crossings, so further
            # blow-ups here would only serve principalization
            cert = _embedded_certificate(node, tree, codim, cfg)
            if cert["ok"]:
                node.status = "stopped"
                node.certificate = cert
                tree.events.append(
                    {"event": "stop", "node": node.id, "key": node.outcome.key.to_json()}
                )
                continue
        if node.depth >= cfg.max_depth:
            node.status = "error"
            tree.status = "depth_exhausted"
            tree.error = f"depth cap {cfg.max_depth} reached at node {node.id}"
            for other in active:
                other.status = "error"
            return tree
        try:
            _expand(engine, tree, node, active, cfg)
        except BudgetExceeded as exc:
            node.status = "error"
            tree.status, tree.error = "budget_exhausted", str(exc)
            return tree
    return tree


def _expand(engine: _Engine, tree: ResolutionTree, node: ResolutionNode, active, cfg):
    out = node.outcome
    newdiv = engine._fresh_divisor()
    tree.events.append(
        {"event": "blowup", "node": node.id, "key": out.key.to_json()}
    )
    children: list[ResolutionNode] = []
    if out.center_poly is not None:
        level = engine._divide_level_by(node.level, out.center_poly, newdiv)
        chart = Chart(
            id=f"{node.chart.id}.h{node.depth + 1}",
            vars=tree.vars,
            parent=node.chart,
            substitution={},
            exceptional=dict(node.chart.exceptional),
            depth=node.depth + 1,
        )
        engine.seq += 1
        children.append(
            ResolutionNode(
                id=chart.id,
                parent=node.id,
                depth=node.depth + 1,
                seq=engine.seq,
                chart=chart,
                level=level,
            )
        )
    else:
        cvars = out.center_vars
        engine._validate_center(node.level, cvars)
        center = Center(cvars)
        charts = blow_up_center(node.chart, center, newdiv)
        for m, chart in zip(center.variables, charts):
            sub = chart.substitution
            engine.seq += 1
            level = engine._transform_level(node.level, center.variables, m, newdiv, sub)
            children.append(
                ResolutionNode(
                    id=chart.id,
                    parent=node.id,
                    depth=node.depth + 1,
                    seq=engine.seq,
                    chart=chart,
                    level=level,
                )
            )
    node.children = [c.id for c in children]
    node.status = "blown"
    codim = len(tree.input_gens)
    for child in children:
        tree.nodes[child.id] = child
        _activate(engine, tree, child, active, cfg, codim)


def _activate(engine: _Engine, tree, node: ResolutionNode, active, cfg: Config, codim: int):
    """Compute the node's outcome and queue it.

    In embedded mode a branch whose next center is not reachable by
    coordinate changes may still be finished work: if its weak transform
    already passes the smooth/SNC certificate the branch halts as a stop
    leaf instead of failing the run.
    """
    try:
        node.outcome = engine.compute(node, node.level)
    except (CenterNotMonomializable, NoTangentDirection):
        if cfg.mode != "embedded":
            raise
        cert = verify_leaf(node, tree, mode="embedded", codim=codim, budget=cfg.budget)
        if not cert["ok"]:
            raise
        node.status = "stopped"
        node.certificate = cert
        return
    if node.outcome.status == "resolved":
        node.status = "resolved"
    else:
        active.append(node)


# -- certificates ------------------------------------------------------------


def total_transform_at(node: ResolutionNode, tree: ResolutionTree, budget=DEFAULT_BUDGET) -> Ideal:
    gens = tuple(node.chart.total_substitution(g) for g in tree.input_gens)
    return Ideal(tree.vars, gens).reduce(budget)


def _embedded_certificate(node, tree, codim: int, cfg: Config) -> dict:
    return verify_leaf(node, tree, mode="embedded", codim=codim, budget=cfg.budget)


def verify_leaf(
    node: ResolutionNode,
    tree: ResolutionTree,
    mode: str,
    codim: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> dict:
    """Certificate checks at a leaf (or stop) node.

    principalize: the total transform decomposes as pure boundary monomial.
    embedded: the weak transform is smooth and meets every boundary divisor
    transversally; the total transform factors as boundary monomial times
    weak transform.
    """
    total = total_transform_at(node, tree, budget)
    boundary = node.level.boundary_set()
    exps, rest_total = monomial_decomposition(total, boundary, budget)
    report: dict = {"node": node.id, "exponents": exps}
    if mode == "principalize":
        report["monomial"] = rest_total.is_unit(budget)
        report["ok"] = report["monomial"]
        return report
    # embedded: weak transform smooth, and simple normal crossings with the
    # boundary (every subset of divisors through a common point of the weak
    # transform must be transversal there, checked by the Jacobian criterion)
    _, weak = monomial_decomposition(node.level.chain, boundary, budget)
    report["smooth"] = weak.jacobian_is_unit_with_minors(codim, budget)
    n = len(tree.vars)
    snc = True
    entries = list(boundary)
    for size in range(1, len(entries) + 1):
        if not snc:
            break
        for combo in itertools.combinations(entries, size):
            eqs = tuple(e.equation(tree.vars) for e in combo)
            joint = Ideal(tree.vars, tuple(weak.gens) + eqs)
            if joint.is_unit(budget):
                continue  # no common point in this chart
            if codim + size > n:
                snc = False  # too many smooth pieces through one point
                break
            if not joint.jacobian_is_unit_with_minors(codim + size, budget):
                snc = False
                break
    report["snc"] = snc
    report["factorization"] = rest_total.equals(weak, budget)
    report["ok"] = report["smooth"] and report["snc"] and report["factorization"]
    return report


def principalize(ideal: Ideal, cfg: Config | None = None) -> ResolutionTree:
    cfg = cfg or Config(mode="principalize")
    if cfg.mode != "principalize":
        cfg = Config(
            mode="principalize",
            variant=cfg.variant,
            max_depth=cfg.max_depth,
            budget=cfg.budget,
            trace=cfg.trace,
        )
    marked = MarkedIdeal(ideal=ideal, mark=1)
    tree = resolve_marked_ideal(marked, cfg)
    if tree.status == "ok":
        for leaf in tree.leaves():
            leaf.certificate = verify_leaf(leaf, tree, mode="principalize", budget=cfg.budget)
    return tree


def embedded_desingularize(ideal: Ideal, cfg: Config | None = None) -> ResolutionTree:
    cfg = cfg or Config(mode="embedded")
    if cfg.mode != "embedded":
        cfg = Config(
            mode="embedded",
            variant=cfg.variant,
            max_depth=cfg.max_depth,
            budget=cfg.budget,
            trace=cfg.trace,
        )
    marked = MarkedIdeal(ideal=ideal, mark=1)
    return resolve_marked_ideal(marked, cfg)
