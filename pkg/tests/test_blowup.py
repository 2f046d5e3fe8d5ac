import random

import pytest

from desing import (
    BoundaryEntry,
    BoundarySet,
    Center,
    CenterNotInSupport,
    Chart,
    Divisor,
    Ideal,
    TransformKind,
    blow_up_center,
    derivative_ideal,
    iterated_derivative,
    max_order,
    normalize_tangent_direction,
    parse_polynomial,
    transform_boundary,
    transform_ideal,
)

from corpus import random_ideal, random_polynomial

XY = ("x", "y")
XYZ = ("x", "y", "z")


def P(text, vars=XY):
    return parse_polynomial(text, vars)


def I(*texts, vars=XY):
    return Ideal(vars, [parse_polynomial(t, vars) for t in texts])


def fresh_chart(vars=XY):
    return Chart(id="r", vars=vars)


class TestBlowUpCenter:
    def test_point_in_plane(self):
        charts = blow_up_center(fresh_chart(), Center((0, 1)), Divisor("D1", 1))
        assert len(charts) == 2
        first, second = charts
        assert first.substitution == {1: P("x*y")} or first.substitution == {0: P("x*y")}
        # chart where x is the divisor coordinate maps y -> y*x
        by_div = {tuple(c.exceptional.items())[0][0]: c for c in charts}
        assert by_div[0].substitution == {1: P("y*x")}
        assert by_div[1].substitution == {0: P("x*y")}

    def test_codimension_one(self):
        charts = blow_up_center(fresh_chart(), Center((0,)), Divisor("D1", 1))
        assert len(charts) == 1
        assert charts[0].substitution == {}
        assert charts[0].exceptional == {0: "D1"}

    def test_untouched_variable(self):
        charts = blow_up_center(fresh_chart(XYZ), Center((0, 1)), Divisor("D1", 1))
        assert len(charts) == 2
        for c in charts:
            assert 2 not in c.substitution

    def test_duplicate_variable_rejected(self):
        with pytest.raises(ValueError):
            Center((0, 0))


class TestTransformIdeal:
    def chart_xy(self):
        # chart of the point blow-up where y carries the new divisor
        return blow_up_center(fresh_chart(), Center((0, 1)), Divisor("D1", 1))[1]

    def test_controlled_curve(self):
        child = self.chart_xy()
        out = transform_ideal(I("x^2 + y^5"), TransformKind("controlled", 2), child, 1)
        assert out.equals(I("x^2 + y^3"))

    def test_controlled_power(self):
        child = self.chart_xy()
        # one-variable style: (y^5) with mark 2 maps to (y^3)
        out = transform_ideal(I("y^5"), TransformKind("controlled", 2), child, 1)
        assert out.equals(I("y^3"))

    def test_total(self):
        child = self.chart_xy()
        out = transform_ideal(I("x^2 + y^5"), TransformKind("total"), child, 1)
        assert out.equals(I("y^2*x^2 + y^5"))

    def test_controlled_not_divisible(self):
        child = self.chart_xy()
        with pytest.raises(CenterNotInSupport):
            transform_ideal(I("x + y^2"), TransformKind("controlled", 2), child, 1)

    def test_weak_divides_full_power(self):
        child = self.chart_xy()
        out = transform_ideal(I("x^2 + y^5"), TransformKind("weak"), child, 1)
        assert out.equals(I("x^2 + y^3"))

    def test_strict_principal(self):
        child = self.chart_xy()
        out = transform_ideal(I("y^2*(x^2 + y^5)"), TransformKind("strict"), child, 1)
        assert out.equals(I("x^2 + y^3"))

    def test_weak_agrees_with_controlled_on_curve(self):
        child = self.chart_xy()
        weak = transform_ideal(I("x^2 + y^5"), TransformKind("weak"), child, 1)
        controlled = transform_ideal(I("x^2 + y^5"), TransformKind("controlled", 2), child, 1)
        assert weak.equals(controlled)


class TestTransformBoundary:
    def test_first_divisor(self):
        out = transform_boundary(BoundarySet(), Center((0, 1)), 1, Divisor("D1", 1))
        assert [e.divisor.id for e in out] == ["D1"]
        assert out.entries[0].var == 1

    def test_divisor_leaves_chart(self):
        before = BoundarySet([BoundaryEntry(Divisor("D1", 1), var=1)])
        out = transform_boundary(before, Center((0, 1)), 1, Divisor("D2", 2))
        assert [e.divisor.id for e in out] == ["D2"]

    def test_divisor_persists(self):
        before = BoundarySet([BoundaryEntry(Divisor("D1", 1), var=0)])
        out = transform_boundary(before, Center((1, 2)), 1, Divisor("D2", 2))
        assert [(e.divisor.id, e.var) for e in out] == [("D1", 0), ("D2", 1)]


class TestNormalize:
    def test_identity(self):
        forward, inverse = normalize_tangent_direction(P("x"), 0)
        assert forward[0] == P("x") and inverse[0] == P("x")

    def test_shear(self):
        forward, _ = normalize_tangent_direction(P("x + y^2"), 0)
        f = P("x + y^2") ** 3
        assert f.substitute(forward) == P("x^3")

    def test_scaling(self):
        forward, inverse = normalize_tangent_direction(P("2*x"), 0)
        assert P("2*x").substitute(forward) == P("x")
        assert forward[0].substitute(inverse) == P("x")


class TestChartConsistency:
    def test_total_transform_composes(self):
        rng = random.Random(47)
        for _ in range(10):
            f = random_polynomial(rng, XY, max_degree=4)
            c1 = blow_up_center(fresh_chart(), Center((0, 1)), Divisor("D1", 1))[0]
            c2 = blow_up_center(c1, Center((0, 1)), Divisor("D2", 2))[1]
            step = f.substitute(c1.substitution).substitute(c2.substitution)
            assert c2.total_substitution(f) == step


def origin_order(ideal: Ideal) -> int:
    return min(g.order_at_origin() for g in ideal.reduced_basis())


class TestDerivativeTransformInclusion:
    def test_controlled_derivative_inclusion(self):
        # transforms of the derivative ideal land inside the derivative of
        # the transform (mark drops by one)
        rng = random.Random(53)
        done = 0
        while done < 30:
            ideal = random_ideal(rng, XY, gens=1, max_degree=5, min_order=2)
            mu = origin_order(ideal)
            if mu < 2:
                continue
            child = blow_up_center(fresh_chart(), Center((0, 1)), Divisor("D1", 1))[
                rng.randint(0, 1)
            ]
            m = 0 if child.substitution.get(1) is not None else 1
            d_first = derivative_ideal(ideal)
            moved = transform_ideal(d_first, TransformKind("controlled", mu - 1), child, m)
            target = derivative_ideal(
                transform_ideal(ideal, TransformKind("controlled", mu), child, m)
            )
            assert target.contains_ideal(moved)
            done += 1


class TestRestrictionCommutes:
    def test_restriction_vs_controlled(self):
        # restricting to a coordinate hypersurface through the center and
        # then transforming agrees with transforming and then restricting
        rng = random.Random(59)
        done = 0
        while done < 20:
            base = random_polynomial(rng, XY, max_degree=4, min_order=1)
            f = P("x") * base + P("x^2")  # guarantees x divides nothing... keeps S = {x=0} through center
            ideal = Ideal(XY, [f + P("y") ** rng.randint(2, 4)])
            mu = origin_order(ideal)
            if mu < 1:
                continue
            # blow up the origin, chart where y is the divisor coordinate
            child = blow_up_center(fresh_chart(), Center((0, 1)), Divisor("D1", 1))[1]
            transformed = transform_ideal(ideal, TransformKind("controlled", mu), child, 1)
            lhs = transformed.set_zero([0]).reduce()
            restricted = ideal.set_zero([0]).reduce()
            if restricted.is_zero():
                continue
            gens = []
            ok = True
            for g in restricted.gens:
                q = g.substitute(child.substitution).divide_by_monomial(1, mu)
                if q is None:
                    ok = False
                    break
                gens.append(q)
            if not ok:
                continue
            rhs = Ideal(XY, gens).reduce()
            assert lhs.equals(rhs)
            done += 1
