"""Sparse multivariate polynomials over Q.

Terms are stored as a map from exponent tuples to nonzero Fractions.  The
fixed term order everywhere in this package is graded reverse lexicographic
on the polynomial's variable tuple.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping


class _Infinity:
    """Order sentinel larger than every rational; used for orders and keys."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("desing-INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INF = _Infinity()


def grevlex_key(exps: tuple[int, ...]) -> tuple:
    """Sort key; larger key = larger monomial in graded reverse lex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class Polynomial:
    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple[str, ...], terms: Mapping[tuple[int, ...], Fraction]):
        self.vars = tuple(vars)
        clean = {}
        n = len(self.vars)
        for mono, c in terms.items():
            if c == 0:
                continue
            if len(mono) != n:
                raise ValueError("exponent tuple length mismatch")
            clean[tuple(mono)] = Fraction(c)
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vars: tuple[str, ...]) -> "Polynomial":
        return cls(vars, {})

    @classmethod
    def const(cls, vars: tuple[str, ...], c) -> "Polynomial":
        return cls(vars, {tuple([0] * len(vars)): Fraction(c)})

    @classmethod
    def variable(cls, vars: tuple[str, ...], i: int) -> "Polynomial":
        e = [0] * len(vars)
        e[i] = 1
        return cls(vars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, vars: tuple[str, ...], exps: tuple[int, ...], c=1) -> "Polynomial":
        return cls(vars, {tuple(exps): Fraction(c)})

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def is_unit_constant(self) -> bool:
        return len(self.terms) == 1 and sum(next(iter(self.terms))) == 0

    def constant_term(self) -> Fraction:
        return self.terms.get(tuple([0] * len(self.vars)), Fraction(0))

    # -- term access ---------------------------------------------------

    def leading_monomial(self) -> tuple[int, ...]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=grevlex_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def total_degree(self):
        if not self.terms:
            return INF
        return max(sum(m) for m in self.terms)

    def order_at_origin(self):
        """Minimal total degree among terms; INF for the zero polynomial."""
        if not self.terms:
            return INF
        return min(sum(m) for m in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return 0
        return max(m[i] for m in self.terms)

    def valuation_in(self, i: int) -> int:
        """Largest k with x_i^k dividing the polynomial (0 for the zero poly)."""
        if not self.terms:
            return 0
        return min(m[i] for m in self.terms)

    def linear_coefficient(self, i: int) -> Fraction:
        e = [0] * len(self.vars)
        e[i] = 1
        return self.terms.get(tuple(e), Fraction(0))

    def involves(self, i: int) -> bool:
        return any(m[i] > 0 for m in self.terms)

    def support_vars(self) -> frozenset[int]:
        out = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    out.add(i)
        return frozenset(out)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.vars != other.vars:
            raise ValueError(f"mixed variable tuples: {self.vars} vs {other.vars}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, Fraction(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Polynomial(self.vars, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = terms.get(m, Fraction(0)) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return Polynomial(self.vars, terms)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial.zero(self.vars)
        return Polynomial(self.vars, {m: c * k for m, k in self.terms.items()})

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading_coefficient())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- calculus and substitution --------------------------------------

    def partial(self, i: int) -> "Polynomial":
        terms: dict[tuple[int, ...], Fraction] = {}
        for m, c in self.terms.items():
            if m[i] == 0:
                continue
            e = list(m)
            e[i] -= 1
            mm = tuple(e)
            s = terms.get(mm, Fraction(0)) + c * m[i]
            if s:
                terms[mm] = s
            else:
                terms.pop(mm, None)
        return Polynomial(self.vars, terms)

    def substitute(self, mapping: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Ring-homomorphic substitution x_i -> mapping[i] (identity if absent)."""
        images = []
        for i in range(len(self.vars)):
            if i in mapping:
                img = mapping[i]
                self._check(img)
                images.append(img)
            else:
                images.append(Polynomial.variable(self.vars, i))
        out = Polynomial.zero(self.vars)
        cache: dict[tuple[int, int], Polynomial] = {}

        def power_of(i: int, e: int) -> Polynomial:
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        for m, c in self.terms.items():
            term = Polynomial.const(self.vars, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power_of(i, e)
            out = out + term
        return out

    def set_zero(self, indices: Iterable[int]) -> "Polynomial":
        """Set the named variables to 0, keeping the ambient variable tuple."""
        idx = set(indices)
        terms = {}
        for m, c in self.terms.items():
            if any(m[i] for i in idx):
                continue
            terms[m] = terms.get(m, Fraction(0)) + c
        return Polynomial(self.vars, terms)

    def divide_by_monomial(self, i: int, k: int) -> "Polynomial | None":
        """Exact quotient by x_i^k, or None when some term is not divisible."""
        if k == 0:
            return self
        terms = {}
        for m, c in self.terms.items():
            if m[i] < k:
                return None
            e = list(m)
            e[i] -= k
            terms[tuple(e)] = c
        return Polynomial(self.vars, terms)

    def divide_exact(self, g: "Polynomial") -> "Polynomial | None":
        """Exact quotient by g, or None when g does not divide self."""
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        lm_g = g.leading_monomial()
        lc_g = g.terms[lm_g]
        rem = self
        q_terms: dict[tuple[int, ...], Fraction] = {}
        while not rem.is_zero():
            lm_r = rem.leading_monomial()
            diff = tuple(a - b for a, b in zip(lm_r, lm_g))
            if any(d < 0 for d in diff):
                return None
            c = rem.terms[lm_r] / lc_g
            q_terms[diff] = c
            rem = rem - Polynomial(self.vars, {diff: c}) * g
        return Polynomial(self.vars, q_terms)

    # -- printing -------------------------------------------------------

    def _format_term(self, m: tuple[int, ...], c: Fraction) -> str:
        parts = []
        for name, e in zip(self.vars, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        coeff = abs(c)
        if not parts:
            return str(coeff)
        if coeff != 1:
            parts.insert(0, str(coeff))
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        monos = sorted(self.terms, key=grevlex_key, reverse=True)
        out = []
        for idx, m in enumerate(monos):
            c = self.terms[m]
            if idx == 0:
                sign = "-" if c < 0 else ""
            else:
                sign = " - " if c < 0 else " + "
            out.append(sign + self._format_term(m, c))
        return "".join(out)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, vars={self.vars})"


# -- parser -------------------------------------------------------------

_OPS = set("+-*^()")


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch == "/":
            tokens.append(("/", "/", i))
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """expr := ['-'] term (('+'|'-') term)*
    term := factor ('*' factor)*
    factor := base ('^' uint)?
    base := int ['/' uint] | ident | '(' expr ')'
    """

    def __init__(self, text: str, vars: tuple[str, ...]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.vars = tuple(vars)
        self.index = {name: i for i, name in enumerate(self.vars)}

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return p

    def expr(self) -> Polynomial:
        negate = False
        if self.peek()[0] == "-":
            self.next()
            negate = True
        p = self.term()
        if negate:
            p = -p
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[0] == "*":
            self.next()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        p = self.base()
        if self.peek()[0] == "^":
            self.next()
            tok = self.expect("int")
            p = p ** int(tok[1])
        return p

    def base(self) -> Polynomial:
        tok = self.next()
        if tok[0] == "int":
            num = int(tok[1])
            if self.peek()[0] == "/":
                self.next()
                den_tok = self.expect("int")
                den = int(den_tok[1])
                if den == 0:
                    raise ParseError("zero denominator", den_tok[2])
                return Polynomial.const(self.vars, Fraction(num, den))
            return Polynomial.const(self.vars, num)
        if tok[0] == "ident":
            if tok[1] not in self.index:
                raise ParseError(f"unknown variable {tok[1]!r}", tok[2])
            return Polynomial.variable(self.vars, self.index[tok[1]])
        if tok[0] == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2])


def parse_polynomial(text: str, vars: Iterable[str]) -> Polynomial:
    return _Parser(text, tuple(vars)).parse()
