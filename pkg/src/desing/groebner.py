"""Groebner-basis kernel over Q and the Ideal type built on it.

Buchberger's algorithm with the coprime-lcm pair criterion, fixed graded
reverse lex order, and a step budget so runaway computations surface as a
structured error instead of hanging.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .poly import INF, Polynomial, grevlex_key

DEFAULT_BUDGET = 50_000


class BudgetExceeded(RuntimeError):
    """Raised when a Groebner computation exceeds its step budget."""

    def __init__(self, budget: int, context: str = ""):
        msg = f"groebner step budget of {budget} exhausted"
        if context:
            msg += f" ({context})"
        super().__init__(msg)
        self.budget = budget
        self.context = context


def _lcm(m1: tuple[int, ...], m2: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(max(a, b) for a, b in zip(m1, m2))


def _divides(m1: tuple[int, ...], m2: tuple[int, ...]) -> bool:
    return all(a <= b for a, b in zip(m1, m2))


def normal_form(f: Polynomial, basis: list[Polynomial], counter=None) -> Polynomial:
    """Remainder of f under multivariate division by basis (grevlex)."""
    if f.is_zero() or not basis:
        return f
    lms = [(g.leading_monomial(), g.terms[g.leading_monomial()], g) for g in basis]
    rem_terms: dict[tuple[int, ...], Fraction] = {}
    work = f
    while not work.is_zero():
        if counter is not None:
            counter.tick()
        lm = work.leading_monomial()
        lc = work.terms[lm]
        for gm, gc, g in lms:
            if _divides(gm, lm):
                quot = tuple(a - b for a, b in zip(lm, gm))
                work = work - Polynomial(f.vars, {quot: lc / gc}) * g
                break
        else:
            rem_terms[lm] = lc
            work = Polynomial(f.vars, {m: c for m, c in work.terms.items() if m != lm})
    return Polynomial(f.vars, rem_terms)


class _Counter:
    __slots__ = ("left", "budget", "context")

    def __init__(self, budget: int, context: str):
        self.left = budget
        self.budget = budget
        self.context = context

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded(self.budget, self.context)


def _s_poly(f: Polynomial, g: Polynomial) -> Polynomial:
    mf, mg = f.leading_monomial(), g.leading_monomial()
    m = _lcm(mf, mg)
    tf = Polynomial(f.vars, {tuple(a - b for a, b in zip(m, mf)): 1 / f.terms[mf]})
    tg = Polynomial(g.vars, {tuple(a - b for a, b in zip(m, mg)): 1 / g.terms[mg]})
    return tf * f - tg * g


def _monomial_basis(gens: list[Polynomial]) -> list[Polynomial]:
    """Reduced basis of an ideal generated by single terms: the minimal
    monomial generators, monic."""
    monos = sorted({g.leading_monomial() for g in gens}, key=lambda m: sum(m))
    minimal: list[tuple[int, ...]] = []
    for m in monos:
        if not any(_divides(p, m) for p in minimal):
            minimal.append(m)
    vars = gens[0].vars
    out = [Polynomial(vars, {m: 1}) for m in minimal]
    out.sort(key=lambda g: grevlex_key(g.leading_monomial()), reverse=True)
    return out


def buchberger(gens: list[Polynomial], budget: int = DEFAULT_BUDGET) -> list[Polynomial]:
    """Reduced Groebner basis (grevlex), sorted by descending leading monomial."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    if all(len(g.terms) == 1 for g in gens):
        return _monomial_basis(gens)
    vars = gens[0].vars
    counter = _Counter(budget, f"{len(gens)} generators in {len(vars)} variables")

    basis: list[Polynomial] = []
    for g in gens:
        g = normal_form(g, basis, counter).monic()
        if not g.is_zero():
            basis.append(g)

    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    while pairs:
        counter.tick()
        # normal selection: smallest lcm in grevlex
        i, j = min(
            pairs,
            key=lambda p: grevlex_key(
                _lcm(basis[p[0]].leading_monomial(), basis[p[1]].leading_monomial())
            ),
        )
        pairs.remove((i, j))
        fi, fj = basis[i], basis[j]
        mi, mj = fi.leading_monomial(), fj.leading_monomial()
        if _lcm(mi, mj) == tuple(a + b for a, b in zip(mi, mj)):
            continue  # coprime leading terms: S-poly reduces to zero
        r = normal_form(_s_poly(fi, fj), basis, counter)
        if r.is_zero():
            continue
        r = r.monic()
        basis.append(r)
        k = len(basis) - 1
        pairs.update((i2, k) for i2 in range(k))

    # minimalize: drop generators whose leading term is divisible by another's
    basis.sort(key=lambda g: grevlex_key(g.leading_monomial()))
    minimal: list[Polynomial] = []
    for g in basis:
        if not any(_divides(h.leading_monomial(), g.leading_monomial()) for h in minimal):
            minimal.append(g)
    # interreduce tails
    reduced: list[Polynomial] = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        reduced.append(normal_form(g, others, counter).monic())
    reduced.sort(key=lambda g: grevlex_key(g.leading_monomial()), reverse=True)
    return reduced


class Ideal:
    """Finitely generated ideal of Q[vars] with a cached reduced basis."""

    __slots__ = ("vars", "gens", "_reduced")

    def __init__(self, vars: tuple[str, ...], gens, reduced: list[Polynomial] | None = None):
        self.vars = tuple(vars)
        pruned = tuple(g for g in gens if not g.is_zero())
        for g in pruned:
            if g.vars != self.vars:
                raise ValueError("generator in wrong variable tuple")
        self.gens = pruned
        self._reduced = reduced

    @classmethod
    def from_reduced(cls, vars, basis: list[Polynomial]) -> "Ideal":
        return cls(vars, tuple(basis), reduced=list(basis))

    def reduced_basis(self, budget: int = DEFAULT_BUDGET) -> list[Polynomial]:
        if self._reduced is None:
            self._reduced = buchberger(list(self.gens), budget)
        return self._reduced

    def reduce(self, budget: int = DEFAULT_BUDGET) -> "Ideal":
        """Canonical presentation: generators replaced by the reduced basis."""
        return Ideal.from_reduced(self.vars, self.reduced_basis(budget))

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self, budget: int = DEFAULT_BUDGET) -> bool:
        rb = self.reduced_basis(budget)
        return len(rb) == 1 and rb[0].is_unit_constant()

    def contains(self, f: Polynomial, budget: int = DEFAULT_BUDGET) -> bool:
        return normal_form(f, self.reduced_basis(budget)).is_zero()

    def contains_ideal(self, other: "Ideal", budget: int = DEFAULT_BUDGET) -> bool:
        return all(self.contains(g, budget) for g in other.gens)

    def equals(self, other: "Ideal", budget: int = DEFAULT_BUDGET) -> bool:
        return self.reduced_basis(budget) == other.reduced_basis(budget)

    # -- algebra ---------------------------------------------------------

    def add(self, other: "Ideal") -> "Ideal":
        return Ideal(self.vars, self.gens + other.gens)

    def multiply(self, other: "Ideal", budget: int = DEFAULT_BUDGET) -> "Ideal":
        if self.is_zero() or other.is_zero():
            return Ideal(self.vars, ())
        a = self.reduced_basis(budget)
        b = other.reduced_basis(budget)
        return Ideal(self.vars, tuple(f * g for f in a for g in b)).reduce(budget)

    def power(self, k: int, budget: int = DEFAULT_BUDGET) -> "Ideal":
        if k == 0:
            return Ideal(self.vars, (Polynomial.const(self.vars, 1),))
        out = self.reduce(budget)
        base = self.reduce(budget)
        for _ in range(k - 1):
            out = out.multiply(base, budget)
        return out

    def substituted(self, mapping) -> "Ideal":
        return Ideal(self.vars, tuple(g.substitute(mapping) for g in self.gens))

    def set_zero(self, indices) -> "Ideal":
        return Ideal(self.vars, tuple(g.set_zero(indices) for g in self.gens))

    # -- decision procedures ----------------------------------------------

    def radical_contains(self, f: Polynomial, budget: int = DEFAULT_BUDGET) -> bool:
        """True iff f vanishes on the zero set of the ideal.

        Decided by adjoining a fresh variable t and testing whether the ideal
        together with 1 - t*f generates the unit ideal.
        """
        if f.is_zero():
            return True
        if self.is_zero():
            return False
        ext_vars = self.vars + ("_t_rad",)
        n = len(self.vars)

        def extend(p: Polynomial) -> Polynomial:
            return Polynomial(ext_vars, {m + (0,): c for m, c in p.terms.items()})

        t = Polynomial.variable(ext_vars, n)
        one = Polynomial.const(ext_vars, 1)
        gens = [extend(g) for g in self.gens]
        gens.append(one - t * extend(f))
        return Ideal(ext_vars, gens).is_unit(budget)

    def variable_valuation(self, i: int, budget: int = DEFAULT_BUDGET) -> int:
        """Largest k with the ideal contained in (x_i)^k."""
        if self.is_zero():
            raise ValueError("variable valuation of the zero ideal")
        return min(g.valuation_in(i) for g in self.reduced_basis(budget))

    def polynomial_valuation(self, u: Polynomial, budget: int = DEFAULT_BUDGET) -> int:
        """Largest k with every reduced-basis element divisible by u^k."""
        if self.is_zero():
            raise ValueError("valuation of the zero ideal")
        if u.is_constant():
            raise ValueError("valuation along a constant")
        val = None
        for g in self.reduced_basis(budget):
            k = 0
            h = g
            while True:
                q = h.divide_exact(u)
                if q is None:
                    break
                k += 1
                h = q
                if val is not None and k >= val:
                    break
            val = k if val is None else min(val, k)
            if val == 0:
                return 0
        return val if val is not None else 0

    def jacobian_is_unit_with_minors(self, codim: int, budget: int = DEFAULT_BUDGET) -> bool:
        """Smoothness test: ideal + codim x codim Jacobian minors = (1)."""
        if self.is_unit(budget):
            return True
        basis = self.reduced_basis(budget)
        n = len(self.vars)
        jac = [[g.partial(i) for i in range(n)] for g in basis]
        minors: list[Polynomial] = []
        for rows in itertools.combinations(range(len(basis)), codim):
            for cols in itertools.combinations(range(n), codim):
                minors.append(_det([[jac[r][c] for c in cols] for r in rows]))
        return Ideal(self.vars, tuple(self.gens) + tuple(minors)).is_unit(budget)

    def __repr__(self):
        return "Ideal(" + ", ".join(str(g) for g in self.gens) + ")"


def _det(m: list[list[Polynomial]]) -> Polynomial:
    n = len(m)
    if n == 1:
        return m[0][0]
    vars = m[0][0].vars
    out = Polynomial.zero(vars)
    for j in range(n):
        sub = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _det(sub)
        out = out + term if j % 2 == 0 else out - term
    return out


# -- spec-level operation wrappers ---------------------------------------


def reduced_groebner_basis(ideal: Ideal, budget: int = DEFAULT_BUDGET) -> Ideal:
    return ideal.reduce(budget)


def ideal_is_unit(ideal: Ideal, budget: int = DEFAULT_BUDGET) -> bool:
    return ideal.is_unit(budget)


def radical_membership(f: Polynomial, ideal: Ideal, budget: int = DEFAULT_BUDGET) -> bool:
    return ideal.radical_contains(f, budget)


def variable_valuation(ideal: Ideal, var: int, budget: int = DEFAULT_BUDGET) -> int:
    return ideal.variable_valuation(var, budget)


def jacobian_unit_check(ideal: Ideal, codim: int, budget: int = DEFAULT_BUDGET) -> bool:
    return ideal.jacobian_is_unit_with_minors(codim, budget)
