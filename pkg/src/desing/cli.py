"""Batch front-end: read a problem file, run a driver, render the tree.

Problem file (JSON):
    {
      "variables": ["x", "y"],
      "generators": ["x^2 + y^5"],
      "mark": 1,
      "boundary": [{"divisor": "E1", "variable": "y"}],
      "mode": "embedded",
      "variant": "canonical",
      "limits": {"max_depth": 64, "budget": 50000}
    }

Exit codes: 0 success (certificates passing), 1 input error, 2 budget or
depth exhaustion (a partial tree is still emitted).
"""

from __future__ import annotations

import argparse
import json
import sys

from .groebner import BudgetExceeded, Ideal
from .marked import BoundaryEntry, BoundarySet, Divisor, MarkedIdeal, ResolutionError
from .poly import ParseError, parse_polynomial
from .resolver import (
    Config,
    ResolutionTree,
    resolve_marked_ideal,
    verify_leaf,
)


class InputError(ValueError):
    pass


def load_problem(data: dict) -> tuple[MarkedIdeal, dict]:
    if not isinstance(data, dict):
        raise InputError("problem file must be a JSON object")
    try:
        variables = tuple(data["variables"])
        gens_text = list(data["generators"])
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from None
    if not gens_text:
        raise InputError("generators must be nonempty")
    if len(set(variables)) != len(variables):
        raise InputError("duplicate variable names")
    try:
        gens = [parse_polynomial(t, variables) for t in gens_text]
    except ParseError as exc:
        raise InputError(f"bad generator: {exc}") from None
    ideal = Ideal(variables, gens)
    if ideal.is_zero():
        raise InputError("ideal is zero")
    mark = int(data.get("mark", 1))
    if mark < 1:
        raise InputError("mark must be a positive integer")
    entries = []
    seen_vars = set()
    for i, item in enumerate(data.get("boundary", [])):
        name = item.get("variable")
        if name not in variables:
            raise InputError(f"boundary entry {i}: unknown variable {name!r}")
        if name in seen_vars:
            raise InputError(f"boundary entry {i}: duplicate variable {name!r}")
        seen_vars.add(name)
        div_id = item.get("divisor", f"E{i + 1}")
        entries.append(
            BoundaryEntry(Divisor(id=div_id, birth=0), var=variables.index(name))
        )
    marked = MarkedIdeal(ideal=ideal, mark=mark, boundary=BoundarySet(entries))
    meta = {
        "mode": data.get("mode"),
        "variant": data.get("variant"),
        "limits": data.get("limits", {}),
    }
    return marked, meta


def tree_report(tree: ResolutionTree) -> dict:
    nodes = []
    order = sorted(tree.nodes.values(), key=lambda n: (n.depth, n.seq))
    for n in order:
        entry = {
            "id": n.id,
            "parent": n.parent,
            "depth": n.depth,
            "status": n.status,
            "stage": n.stage_tag(),
            "substitution": n.chart.substitution_strings(),
            "ideal": [str(g) for g in n.level.chain.reduced_basis()],
            "mark": n.level.mark,
            "boundary": [
                {
                    "divisor": e.divisor.id,
                    "on": tree.vars[e.var] if e.var is not None else str(e.poly),
                }
                for e in n.level.boundary
            ],
            "key": n.outcome.key.to_json()
            if n.outcome is not None and n.outcome.key is not None
            else None,
            "center": [tree.vars[i] for i in n.outcome.center_vars]
            if n.outcome is not None and n.outcome.center_vars is not None
            else (
                {"hypersurface": str(n.outcome.center_poly)}
                if n.outcome is not None and n.outcome.center_poly is not None
                else None
            ),
            "children": list(n.children),
            "certificate": n.certificate,
        }
        nodes.append(entry)
    return {
        "mode": tree.mode,
        "variant": tree.variant,
        "status": tree.status,
        "error": tree.error,
        "variables": list(tree.vars),
        "input": [str(g) for g in tree.input_gens],
        "divisors": [{"id": d.id, "birth": d.birth} for d in tree.divisors],
        "key_trace": [ev["key"] for ev in tree.key_trace()],
        "nodes": nodes,
    }


def render_text(report: dict) -> str:
    lines = [
        f"mode={report['mode']} variant={report['variant']} status={report['status']}",
        "input: " + ", ".join(report["input"]),
    ]
    if report["error"]:
        lines.append(f"error: {report['error']}")
    lines.append("key trace:")
    for key in report["key_trace"]:
        lines.append(
            "  inv=(" + ",".join(key["inv"] + ["0", "..."]) + ")"
            + f" nu={key['nu']}"
            + (" rho={" + ",".join(key["rho"]) + "}" if key["rho"] else "")
        )
    by_id = {n["id"]: n for n in report["nodes"]}

    def walk(node_id: str, indent: int):
        n = by_id[node_id]
        pad = "  " * indent
        key = n["key"]
        key_s = ""
        if key:
            key_s = " inv=(" + ",".join(key["inv"] + ["0", "..."]) + f") nu={key['nu']}"
            if key["rho"]:
                key_s += " rho={" + ",".join(key["rho"]) + "}"
        center = n["center"]
        center_s = ""
        if isinstance(center, list):
            center_s = " center={" + ",".join(center) + "}"
        elif isinstance(center, dict):
            center_s = f" center=V({center['hypersurface']})"
        lines.append(
            f"{pad}{n['id']} [{n['status']}/{n['stage']}]"
            f" ideal=({'; '.join(n['ideal'])})" + key_s + center_s
        )
        if n["certificate"] is not None:
            ok = n["certificate"].get("ok")
            lines.append(f"{pad}  certificate: {'pass' if ok else 'FAIL'}")
        for c in n["children"]:
            walk(c, indent + 1)

    roots = [n["id"] for n in report["nodes"] if n["parent"] is None]
    lines.append("tree:")
    for r in roots:
        walk(r, 1)
    return "\n".join(lines) + "\n"


def run_cli(argv: list[str]) -> int:
    ap = argparse.ArgumentParser(
        prog="desing",
        description="Exact resolution of singularities over Q at desk scale.",
    )
    ap.add_argument("--input", required=True, help="problem file (JSON)")
    ap.add_argument("--mode", choices=["principalize", "resolve", "embedded"])
    ap.add_argument("--variant", choices=["canonical", "bv"])
    ap.add_argument("--max-depth", type=int)
    ap.add_argument("--format", choices=["text", "json"], default="text")
    ap.add_argument("--trace", type=int, default=0, choices=[0, 1, 2])
    ap.add_argument("--out", help="write the report here instead of stdout")
    args = ap.parse_args(argv)

    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        marked, meta = load_problem(data)
    except (OSError, json.JSONDecodeError, InputError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1

    mode = args.mode or meta["mode"] or "resolve"
    variant = args.variant or meta["variant"] or "canonical"
    if variant == "bv":
        variant = "bravo_villamayor"
    limits = meta["limits"] or {}
    max_depth = args.max_depth or int(limits.get("max_depth", 64))
    budget = int(limits.get("budget", 50_000))
    try:
        cfg = Config(
            mode=mode, variant=variant, max_depth=max_depth, budget=budget,
            trace=args.trace,
        )
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1

    try:
        tree = resolve_marked_ideal(marked, cfg)
    except BudgetExceeded as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return 2
    except ResolutionError as exc:
        print(f"resolution error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1

    certificates_ok = True
    if tree.status == "ok" and mode == "principalize":
        for leaf in tree.leaves():
            leaf.certificate = verify_leaf(leaf, tree, mode="principalize", budget=budget)
            certificates_ok = certificates_ok and leaf.certificate["ok"]
    if mode == "embedded":
        for n in tree.nodes.values():
            if n.status == "stopped" and n.certificate is not None:
                certificates_ok = certificates_ok and n.certificate["ok"]

    report = tree_report(tree)
    if args.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        text = render_text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    if tree.status != "ok":
        return 2
    if not certificates_ok:
        print("certificate verification failed", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    raise SystemExit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
