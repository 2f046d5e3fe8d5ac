import random

import pytest

from desing import (
    BudgetExceeded,
    Ideal,
    ideal_is_unit,
    jacobian_unit_check,
    parse_polynomial,
    radical_membership,
    reduced_groebner_basis,
    variable_valuation,
)

from corpus import random_ideal

XY = ("x", "y")


def P(text, vars=XY):
    return parse_polynomial(text, vars)


def I(*texts, vars=XY):
    return Ideal(vars, [parse_polynomial(t, vars) for t in texts])


class TestReducedBasis:
    def test_curve_derivative_ideal(self):
        basis = I("x^2 + y^5", "2*x", "5*y^4").reduced_basis()
        assert set(map(str, basis)) == {"x", "y^4"}

    def test_unit_ideal(self):
        assert I("x", "x + 1").reduced_basis() == [P("1")]

    def test_hand_elimination(self):
        basis = I("y^2 - x^3", "x").reduced_basis()
        assert set(map(str, basis)) == {"x", "y^2"}

    def test_idempotent(self):
        ideal = I("x^2 - y", "x*y - 1")
        once = reduced_groebner_basis(ideal)
        twice = reduced_groebner_basis(once)
        assert once.reduced_basis() == twice.reduced_basis()

    def test_presentation_independent(self):
        a = I("x^2 - y", "y^2 - x")
        # same ideal, different presentation
        b = I("x^2 - y", "y^2 - x + 3*(x^2 - y)")
        assert a.reduced_basis() == b.reduced_basis()

    def test_presentation_independent_random(self):
        rng = random.Random(23)
        for _ in range(10):
            ideal = random_ideal(rng, XY, gens=3, max_degree=4)
            gens = list(ideal.gens)
            mixed = list(gens)
            if len(gens) >= 2:
                mixed[0] = gens[0] + gens[1]
            shuffled = Ideal(XY, list(reversed(mixed)))
            assert ideal.reduced_basis() == shuffled.reduced_basis()

    def test_budget_error_is_structured(self):
        ideal = Ideal(
            XY,
            [P("x^5 + y^4 - 2"), P("x^2*y^3 - x + 1"), P("y^5 - x^3 - 1")],
        )
        with pytest.raises(BudgetExceeded):
            ideal.reduced_basis(budget=5)


class TestUnitAndRadical:
    def test_point_support_not_unit(self):
        assert not ideal_is_unit(I("x", "y^4"))

    def test_unit(self):
        assert ideal_is_unit(I("x", "x + 1"))

    def test_zero_ideal_proper(self):
        assert not ideal_is_unit(Ideal(XY, []))

    def test_radical_membership_square(self):
        assert radical_membership(P("x"), I("x^2"))

    def test_radical_membership_negative(self):
        assert not radical_membership(P("y"), I("x^2"))

    def test_radical_membership_origin(self):
        assert radical_membership(P("x + y"), I("x^2", "y^2"))

    def test_radical_agrees_with_evaluation(self):
        # V(x^2 - 1, y) = {(1,0), (-1,0)}: x*y vanishes there, x - 2 does not
        ideal = I("x^2 - 1", "y")
        assert radical_membership(P("x*y"), ideal)
        assert radical_membership(P("x^2 - 1"), ideal)
        assert not radical_membership(P("x - 2"), ideal)


class TestValuation:
    def test_with_cofactor(self):
        assert variable_valuation(I("y^2*(x^2 + y^3)"), 1) == 2

    def test_nonmonomial_generator(self):
        assert variable_valuation(I("x^2 + y^5"), 0) == 0

    def test_min_over_basis(self):
        assert variable_valuation(I("x^3*y^2", "x^4*y^2"), 0) == 3

    def test_shift_property(self):
        rng = random.Random(29)
        for _ in range(10):
            ideal = random_ideal(rng, XY, gens=2, max_degree=4)
            k = rng.randint(1, 3)
            xk = Ideal(XY, [P("x") ** k])
            shifted = ideal.multiply(xk)
            assert variable_valuation(shifted, 0) == variable_valuation(ideal, 0) + k


class TestJacobian:
    def test_cusp_singular(self):
        assert not jacobian_unit_check(I("x^2 + y^3"), 1)

    def test_hyperplane_smooth(self):
        assert jacobian_unit_check(I("x"), 1)

    def test_unit_partial(self):
        assert jacobian_unit_check(I("x^2 + y + 1"), 1)

    def test_point_in_plane(self):
        assert jacobian_unit_check(I("x", "y"), 2)
