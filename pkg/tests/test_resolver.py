import itertools
import random
from fractions import Fraction

import pytest

from desing import (
    BoundaryEntry,
    BoundarySet,
    Config,
    Divisor,
    Ideal,
    MarkedIdeal,
    embedded_desingularize,
    monomial_decomposition,
    parse_polynomial,
    principalize,
    resolve_marked_ideal,
    stop_marker,
    total_transform_at,
    verify_leaf,
)
from desing.poly import INF, Polynomial

XY = ("x", "y")


def P(text, vars=XY):
    return parse_polynomial(text, vars)


def I(*texts, vars=XY):
    return Ideal(vars, [parse_polynomial(t, vars) for t in texts])


def trace_of(tree):
    return [(tuple(ev["key"]["inv"]), ev["key"]["nu"]) for ev in tree.key_trace()]


def run(gens, vars=XY, mark=1, mode="resolve", boundary=None, variant="canonical",
        max_depth=40):
    ideal = Ideal(vars, [parse_polynomial(t, vars) for t in gens])
    marked = MarkedIdeal(ideal=ideal, mark=mark, boundary=boundary or BoundarySet())
    return resolve_marked_ideal(marked, Config(mode=mode, variant=variant,
                                               max_depth=max_depth))


class TestGoldenCurve:
    def test_key_trace(self):
        tree = run(["x^2 + y^5"], mode="embedded")
        assert tree.status == "ok"
        assert trace_of(tree) == [
            (("2", "0", "5/2", "inf"), "0"),
            (("2",), "3/2"),
            (("1", "1", "2"), "0"),
            (("1", "1"), "1"),
            (("1", "0", "inf"), "0"),
        ]

    def test_strict_transforms(self):
        tree = run(["x^2 + y^5"], mode="embedded")
        seen = []
        for ev in tree.events:
            if ev["event"] != "blowup":
                continue
            node = tree.nodes[ev["node"]]
            _, rest = monomial_decomposition(node.level.chain, node.level.boundary_set())
            seen.append(rest.reduced_basis())
        assert seen[0] == I("x^2 + y^5").reduced_basis()
        assert seen[1] == I("x^2 + y^3").reduced_basis()
        assert seen[2] == I("x^2 + y").reduced_basis()

    def test_stop_certificates(self):
        tree = run(["x^2 + y^5"], mode="embedded")
        stops = [n for n in tree.nodes.values() if n.status == "stopped"]
        assert stops and all(n.certificate["ok"] for n in stops)


class TestResolveBasics:
    def test_coordinate_hyperplane(self):
        tree = run(["x"], vars=("x",))
        assert tree.status == "ok"
        blowups = [e for e in tree.events if e["event"] == "blowup"]
        assert len(blowups) == 1
        assert trace_of(tree) == [(("1", "0", "inf"), "0")]

    def test_translated_hyperplane_resolves(self):
        # support is the point x = -1: one hypersurface blow-up clears it
        tree = run(["1 + x"], vars=("x",))
        assert tree.status == "ok"
        assert sum(1 for e in tree.events if e["event"] == "blowup") == 1

    def test_zero_ideal_rejected(self):
        with pytest.raises(ValueError):
            run(["0"], vars=("x",))

    def test_univariate_cube_mark_two(self):
        tree = run(["x^3"], vars=("x",), mark=2)
        assert tree.status == "ok"
        assert len(tree.nodes) == 2
        leaf = [n for n in tree.nodes.values() if not n.children][0]
        assert leaf.level.chain.reduced_basis() == [
            parse_polynomial("x", ("x",))
        ]  # exponent dropped 3 -> 1, support empty

    def test_monomial_engine_square_cube(self):
        b = BoundarySet([
            BoundaryEntry(Divisor("E1", 0), var=0),
            BoundaryEntry(Divisor("E2", 0), var=1),
        ])
        tree = run(["x^2*y^3"], mark=4, boundary=b)
        assert tree.status == "ok"
        # first center is the origin; one chart needs a second blow-up
        assert sum(1 for e in tree.events if e["event"] == "blowup") == 2

    def test_stage_tags(self):
        tree = run(["x^2 + y^5"], mode="embedded")
        tags = {n.stage_tag() for n in tree.nodes.values()}
        assert "1bb" in tags  # contact descent chooses the first centers
        assert "1ab" in tags  # boundary separation appears later


class TestMonotonicity:
    def cases(self):
        yield ["x^2 + y^5"], XY
        yield ["y^2 - x^3"], XY
        yield ["x*y"], XY
        yield ["x^2 - y^4", "x*y^2"], XY

    def test_keys_never_increase_along_edges(self):
        for gens, vars in self.cases():
            tree = run(gens, vars=vars, mode="embedded")
            assert tree.status == "ok"
            for node in tree.nodes.values():
                if not node.children or node.outcome is None:
                    continue
                parent_key = node.outcome.key
                for cid in node.children:
                    child = tree.nodes[cid]
                    if child.outcome is None or child.outcome.key is None:
                        continue
                    assert child.outcome.key.compare(parent_key) <= 0
                    if child.outcome.key.compare(parent_key) == 0:
                        assert child.outcome.key.nu <= parent_key.nu

    def test_event_keys_non_increasing(self):
        tree = run(["x^2 + y^5"], mode="embedded")
        keys = []
        for ev in tree.events:
            node = tree.nodes[ev["node"]]
            keys.append(node.outcome.key)
        for a, b in zip(keys, keys[1:]):
            assert b.compare(a) <= 0


class TestGiraudContainment:
    def test_centers_inside_contact_hypersurface(self):
        # every center chosen through a contact descent lies inside the
        # strict transform of the contact hypersurface (the pivot coordinate)
        tree = run(["x^2 + y^5"], mode="embedded")
        for node in tree.nodes.values():
            if node.outcome is None or node.outcome.center_vars is None:
                continue
            if node.outcome.stage_path and "1bb" in node.outcome.stage_path:
                lvl = node.level
                pivot = lvl.round.sub.pivot if lvl.round and lvl.round.sub else None
                if pivot is not None:
                    assert pivot in node.outcome.center_vars


class TestStepConsistency:
    def test_restricted_locus_matches(self):
        # at a contact descent the inner locus is the restriction of the
        # outer locus to the contact hypersurface
        from desing.marked import iterated_derivative

        tree = run(["x^2 + y^5"], mode="embedded")
        for node in tree.nodes.values():
            lvl = node.level
            if lvl.round is None or lvl.round.sub is None:
                continue
            sub = lvl.round.sub
            if not hasattr(sub, "pivot"):
                continue
            outer_locus = iterated_derivative(
                lvl.round.descent, lvl.round.dmark - 1, lvl.active
            )
            inner_locus = iterated_derivative(
                sub.inner.chain, sub.inner.mark - 1, sub.inner.active
            )
            restricted = outer_locus.set_zero([sub.pivot]).reduce()
            for g in restricted.gens:
                assert inner_locus.radical_contains(g)
            for g in inner_locus.gens:
                assert restricted.add(Ideal(tree.vars, (Polynomial.variable(tree.vars, sub.pivot),))).radical_contains(g)


class TestPrincipalize:
    def test_single_variable(self):
        tree = principalize(Ideal(("x",), [parse_polynomial("x", ("x",))]))
        assert tree.status == "ok"
        leaves = tree.leaves()
        assert len(leaves) == 1
        assert leaves[0].certificate["ok"]
        assert leaves[0].certificate["exponents"] == {"D1": 1}

    def test_normal_crossing_pair(self):
        tree = principalize(I("x*y"))
        assert tree.status == "ok"
        for leaf in tree.leaves():
            assert leaf.certificate["ok"]
            total = total_transform_at(leaf, tree)
            exps, rest = monomial_decomposition(total, leaf.level.boundary_set())
            assert rest.is_unit()
            assert exps == leaf.certificate["exponents"]

    def test_curve(self):
        tree = principalize(I("x^2 + y^5"))
        assert tree.status == "ok"
        assert all(leaf.certificate["ok"] for leaf in tree.leaves())

    def test_negative_control(self):
        # a truncated run must fail the leaf check
        tree = run(["x^2 + y^5"], mode="resolve", max_depth=40)
        root = tree.root
        report = verify_leaf(root, tree, mode="principalize")
        assert not report["ok"]


class TestEmbedded:
    def test_already_smooth(self):
        tree = run(["x"], mode="embedded")
        assert tree.status == "ok"
        assert sum(1 for e in tree.events if e["event"] == "blowup") == 0
        stops = [n for n in tree.nodes.values() if n.status == "stopped"]
        assert len(stops) == 1 and stops[0].certificate["ok"]

    def test_stop_marker_values(self):
        assert stop_marker(1).entries == (Fraction(1), Fraction(0), INF)
        assert stop_marker(2).entries == (
            Fraction(1), Fraction(0), Fraction(1), Fraction(0), INF,
        )

    def test_whitney_umbrella(self):
        tree = run(["x^2 - y^2*z"], vars=("x", "y", "z"), mode="embedded",
                   max_depth=20)
        assert tree.status == "ok"
        stops = [n for n in tree.nodes.values() if n.status == "stopped"]
        assert stops and all(n.certificate["ok"] for n in stops)


class TestBravoVillamayor:
    def test_two_component_curve(self):
        tree = run(["x*y"], mode="embedded", variant="bravo_villamayor")
        assert tree.status == "ok"
        stops = [n for n in tree.nodes.values() if n.status == "stopped"]
        assert stops and all(n.certificate["ok"] for n in stops)

    def test_monomial_part_first(self):
        # with a nontrivial monomial part at order one the modified driver
        # resolves the boundary part first with leading entry 3/2
        b = BoundarySet([BoundaryEntry(Divisor("E1", 0), var=0)])
        tree = run(["x^2*(1 + y)"], mark=1, boundary=b,
                   variant="bravo_villamayor")
        assert tree.status == "ok"
        first = tree.events[0]
        assert first["key"]["inv"][0] == "3/2"

    def test_canonical_vs_bv_same_input(self):
        b = BoundarySet([BoundaryEntry(Divisor("E1", 0), var=0)])
        canonical = run(["x^2*(1 + y)"], mark=1, boundary=b, variant="canonical")
        assert canonical.status == "ok"
        # the canonical driver reduces the nonmonomial part before the
        # boundary powers, so its first key leads with ord/mark = 1
        assert canonical.events[0]["key"]["inv"][0] == "1"

    def test_depth_cap_partial_tree(self):
        tree = run(["x^2 + y^5"], mode="resolve", max_depth=2)
        assert tree.status == "depth_exhausted"
        assert tree.error is not None
        assert len(tree.nodes) > 1  # partial tree retained


def canonical_shape(tree, node_id):
    node = tree.nodes[node_id]
    label = None
    if node.outcome is not None and node.outcome.key is not None:
        key = node.outcome.key
        label = (tuple(key.inv.render()), str(key.nu))
    children = sorted(canonical_shape(tree, c) for c in node.children)
    return (label, tuple(children))


def keys_by_depth(tree):
    out = {}
    for node in tree.nodes.values():
        if node.outcome is None or node.outcome.key is None:
            continue
        out.setdefault(node.depth, []).append(
            (tuple(node.outcome.key.inv.render()), str(node.outcome.key.nu))
        )
    return {d: sorted(v) for d, v in out.items()}


def apply_linear(ideal: Ideal, matrix):
    vars = ideal.vars
    n = len(vars)
    images = {}
    for i in range(n):
        p = Polynomial.zero(vars)
        for j in range(n):
            if matrix[i][j]:
                p = p + Polynomial.variable(vars, j).scale(matrix[i][j])
        images[i] = p
    return Ideal(vars, [g.substitute(images) for g in ideal.gens])


class TestEquivariance:
    def test_variable_permutation(self):
        base = I("x^2 + y^5")
        swapped = I("y^2 + x^5")
        t1 = resolve_marked_ideal(MarkedIdeal(ideal=base, mark=1), Config(mode="embedded"))
        t2 = resolve_marked_ideal(MarkedIdeal(ideal=swapped, mark=1), Config(mode="embedded"))
        assert keys_by_depth(t1) == keys_by_depth(t2)
        assert canonical_shape(t1, t1.root.id) == canonical_shape(t2, t2.root.id)

    def test_shear(self):
        base = I("x^2 + y^5")
        sheared = apply_linear(base, [[1, 1], [0, 1]])  # x -> x + y
        t1 = resolve_marked_ideal(MarkedIdeal(ideal=base, mark=1), Config(mode="embedded"))
        t2 = resolve_marked_ideal(MarkedIdeal(ideal=sheared, mark=1), Config(mode="embedded"))
        assert keys_by_depth(t1) == keys_by_depth(t2)
        assert canonical_shape(t1, t1.root.id) == canonical_shape(t2, t2.root.id)
