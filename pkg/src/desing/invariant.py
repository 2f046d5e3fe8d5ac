"""Resolution keys: invariant vectors over Q u {inf}, boundary subsets, and
the lexicographic order used to pick blow-up centers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .marked import Divisor
from .poly import INF


def _entry_key(e) -> tuple[int, Fraction]:
    if e is INF:
        return (1, Fraction(0))
    return (0, Fraction(e))


def _strip(entries: Sequence) -> tuple:
    out = list(entries)
    while out and out[-1] is not INF and Fraction(out[-1]) == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class InvVector:
    """Finite vector over nonnegative rationals and inf, zero-padded to
    infinite length; trailing zeros are normalized away."""

    entries: tuple

    def __init__(self, entries: Iterable):
        object.__setattr__(self, "entries", _strip(tuple(entries)))

    def sort_key(self) -> tuple:
        return tuple(_entry_key(e) for e in self.entries)

    def __len__(self):
        return len(self.entries)

    def compare(self, other: "InvVector") -> int:
        pad = (0, Fraction(0))
        for a, b in itertools.zip_longest(
            self.sort_key(), other.sort_key(), fillvalue=pad
        ):
            if a != b:
                return -1 if a < b else 1
        return 0

    def render(self) -> list[str]:
        return ["inf" if e is INF else _fmt_rat(e) for e in self.entries]

    def __str__(self):
        return "(" + ",".join(self.render() + ["0", "..."]) + ")"


def _fmt_rat(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class Rho:
    """Subset of the boundary, stored as divisors in descending order."""

    divisors: tuple[Divisor, ...]

    def __init__(self, divisors: Iterable[Divisor] = ()):
        ds = sorted(divisors, key=lambda d: (d.birth, d.id), reverse=True)
        object.__setattr__(self, "divisors", tuple(ds))

    def sort_key(self) -> tuple:
        # descending sequence of birth indices, padded with 0 ("0 <= D")
        return tuple(d.birth for d in self.divisors)

    def compare(self, other: "Rho") -> int:
        for a, b in itertools.zip_longest(self.sort_key(), other.sort_key(), fillvalue=0):
            if a != b:
                return -1 if a < b else 1
        return 0

    def render(self) -> list[str]:
        return [d.id for d in self.divisors]

    def __bool__(self):
        return bool(self.divisors)


@dataclass(frozen=True)
class ResolutionKey:
    """(inv, rho) with the invariant compared first; nu rides along."""

    inv: InvVector
    rho: Rho
    nu: Fraction
    ledger: Optional[str] = None  # identity of the divisor ledger, when tracked

    def compare(self, other: "ResolutionKey") -> int:
        if self.ledger is not None and other.ledger is not None and self.ledger != other.ledger:
            raise ValueError("comparing keys over different divisor ledgers")
        c = self.inv.compare(other.inv)
        if c:
            return c
        return self.rho.compare(other.rho)

    def sort_key(self) -> tuple:
        return (self.inv.sort_key(), self.rho.sort_key())

    def to_json(self) -> dict:
        return {
            "inv": self.inv.render(),
            "nu": _fmt_rat(self.nu),
            "rho": self.rho.render(),
        }

    def render(self) -> str:
        body = ",".join(self.inv.render() + ["0", "..."])
        s = f"inv=({body}) nu={_fmt_rat(self.nu)}"
        if self.rho:
            s += " rho={" + ",".join(self.rho.render()) + "}"
        return s


def compare_key(a: ResolutionKey, b: ResolutionKey) -> int:
    return a.compare(b)


def compute_rho_nu_monomial(
    exponents: dict[Divisor, int], mark: int
) -> tuple[Rho, Fraction]:
    """For a purely monomial state at a point lying on the given divisors:
    nu = (sum of exponents)/mark; rho = the maximal subset (in the descending
    sequence order) whose exponents sum to at least the mark while every
    proper subset obtained by dropping one member falls below it."""
    divisors = [d for d, a in exponents.items() if a > 0]
    total = sum(exponents[d] for d in divisors)
    nu = Fraction(total, mark)
    best: Optional[Rho] = None
    for r in range(1, len(divisors) + 1):
        for combo in itertools.combinations(divisors, r):
            s = sum(exponents[d] for d in combo)
            if s < mark:
                continue
            if any(s - exponents[d] >= mark for d in combo):
                continue
            cand = Rho(combo)
            if best is None or cand.compare(best) > 0:
                best = cand
    if best is None:
        raise ValueError("no subset reaches the mark: the point is not in the locus")
    return best, nu
