"""Seeded corpora shared by the property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from desing import Ideal, Polynomial


def random_polynomial(rng: random.Random, vars, max_degree=6, terms=4, min_order=0):
    """Random sparse polynomial with small integer coefficients."""
    n = len(vars)
    chosen = {}
    for _ in range(rng.randint(1, terms)):
        while True:
            exps = tuple(rng.randint(0, max_degree) for _ in range(n))
            if min_order <= sum(exps) <= max_degree:
                break
        coeff = rng.choice([-3, -2, -1, 1, 2, 3])
        chosen[exps] = chosen.get(exps, 0) + coeff
    p = Polynomial(vars, {m: Fraction(c) for m, c in chosen.items() if c})
    if p.is_zero():
        return Polynomial.variable(vars, 0)
    return p


def random_ideal(rng: random.Random, vars, gens=2, max_degree=6, min_order=0) -> Ideal:
    return Ideal(
        vars,
        [
            random_polynomial(rng, vars, max_degree=max_degree, min_order=min_order)
            for _ in range(rng.randint(1, gens))
        ],
    )


def ideal_corpus(seed: int, count: int, vars_options=(("x", "y"), ("x", "y", "z")),
                 max_degree=6, min_order=0):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        vars = rng.choice(vars_options)
        ideal = random_ideal(rng, vars, max_degree=max_degree, min_order=min_order)
        if not ideal.is_zero() and not ideal.is_unit():
            out.append(ideal)
    return out
