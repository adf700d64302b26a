"""Boolean expressions and their arithmetization into multilinear polynomials.

Logical operations over {0, 1} are replaced by integer arithmetic::

    not x    ->  1 - x
    x and y  ->  x * y
    x or y   ->  x + y - x * y

Products are reduced with ``x**m == x``, so every polynomial built here is
multilinear and a Boolean function has exactly one such representation.
That uniqueness is what makes polynomial equality a complete equivalence
test for Boolean expressions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterable, Mapping

from .errors import ArityError, NotBooleanValued, ParseError, UnknownVariable

Bit = int

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def check_bit(value) -> Bit:
    if value not in (0, 1) or isinstance(value, float):
        raise ValueError(f"not a bit: {value!r}")
    return int(value)


# ---------------------------------------------------------------------------
# Expression tree


class BoolExpr:
    """Base class of the expression nodes.

    Nodes are immutable and hashable.  The Python operators ``~ & | ^`` build
    ``Not``, ``And``, ``Or`` and ``Xor`` nodes.
    """

    __slots__ = ()

    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __xor__(self, other):
        return Xor((self, other))

    def __str__(self):
        return format_expr(self)


@dataclass(frozen=True)
class Const(BoolExpr):
    value: Bit

    def __post_init__(self):
        check_bit(self.value)


@dataclass(frozen=True)
class Var(BoolExpr):
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not _IDENT.match(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")


@dataclass(frozen=True)
class Not(BoolExpr):
    child: BoolExpr


@dataclass(frozen=True)
class _Nary(BoolExpr):
    children: tuple

    min_arity = 2
    max_arity = None

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        n = len(self.children)
        if n < self.min_arity or (self.max_arity is not None and n > self.max_arity):
            raise ArityError(f"{type(self).__name__} takes {self._arity_text()} operands, got {n}")

    @classmethod
    def _arity_text(cls):
        if cls.max_arity == cls.min_arity:
            return f"exactly {cls.min_arity}"
        return f"at least {cls.min_arity}"


class And(_Nary):
    pass


class Or(_Nary):
    pass


class Nand(_Nary):
    pass


class Nor(_Nary):
    pass


class Xor(_Nary):
    max_arity = 2


def variables(e: BoolExpr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Not):
        return variables(e.child)
    return frozenset().union(*(variables(c) for c in e.children))


def evaluate(e: BoolExpr, assignment: Mapping[str, Bit]) -> Bit:
    """Truth-table semantics of ``e``; independent of the polynomial route."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return check_bit(assignment[e.name])
        except KeyError:
            raise UnknownVariable(e.name) from None
    if isinstance(e, Not):
        return 0 if evaluate(e.child, assignment) else 1
    vals = [evaluate(c, assignment) for c in e.children]
    if isinstance(e, And):
        return int(all(vals))
    if isinstance(e, Or):
        return int(any(vals))
    if isinstance(e, Nand):
        return int(not all(vals))
    if isinstance(e, Nor):
        return int(not any(vals))
    if isinstance(e, Xor):
        return vals[0] ^ vals[1]
    raise TypeError(f"not a BoolExpr: {e!r}")


# ---------------------------------------------------------------------------
# Text form: ! > & > ^ > |


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([01])|([!&|^()]))")


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", 1, col)
        start = m.start(m.lastindex) + 1
        tokens.append((m.group(m.lastindex), m.lastindex, start))
        pos = m.end()
    tokens.append((None, 0, len(text) + 1))
    return tokens


class _ExprParser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[0] != value:
            found = "end of input" if tok[0] is None else repr(tok[0])
            raise ParseError(f"expected {value!r}, found {found}", 1, tok[2])
        self.i += 1
        return tok

    def parse(self):
        e = self.parse_or()
        tok = self.peek()
        if tok[0] is not None:
            raise ParseError(f"unexpected {tok[0]!r}", 1, tok[2])
        return e

    def parse_or(self):
        items = [self.parse_xor()]
        while self.peek()[0] == "|":
            self.take()
            items.append(self.parse_xor())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def parse_xor(self):
        e = self.parse_and()
        while self.peek()[0] == "^":
            self.take()
            e = Xor((e, self.parse_and()))
        return e

    def parse_and(self):
        items = [self.parse_unary()]
        while self.peek()[0] == "&":
            self.take()
            items.append(self.parse_unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def parse_unary(self):
        value, kind, col = self.peek()
        if value == "!":
            self.take()
            return Not(self.parse_unary())
        if value == "(":
            self.take()
            e = self.parse_or()
            self.take(")")
            return e
        if kind == 1:
            self.take()
            return Var(value)
        if kind == 2:
            self.take()
            return Const(int(value))
        found = "end of input" if value is None else repr(value)
        raise ParseError(f"expected operand, found {found}", 1, col)


def parse_expr(text: str) -> BoolExpr:
    """Parse ``!a & (b | c) ^ d`` style text into a :class:`BoolExpr`."""
    return _ExprParser(text).parse()


_PREC = {Or: 1, Xor: 2, And: 3}


def format_expr(e: BoolExpr, _parent: int = 0) -> str:
    """Render ``e`` in the text grammar accepted by :func:`parse_expr`.

    NAND and NOR have no operator of their own and print as ``!(a & b)``.
    """
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Not):
        return "!" + format_expr(e.child, 4)
    if isinstance(e, Nand):
        return "!" + format_expr(And(e.children), 4)
    if isinstance(e, Nor):
        return "!" + format_expr(Or(e.children), 4)
    prec = _PREC[type(e)]
    sym = {Or: " | ", Xor: " ^ ", And: " & "}[type(e)]
    parts = [format_expr(c, prec) for c in e.children]
    if isinstance(e, Xor):
        # left-associative: only a right operand of equal precedence needs parens
        parts[0] = format_expr(e.children[0], prec - 1)
    text = sym.join(parts)
    return f"({text})" if prec <= _parent else text


# ---------------------------------------------------------------------------
# Multilinear polynomials


Monomial = frozenset


class MultilinearPoly:
    """Integer polynomial whose monomials are sets of variable names.

    Multiplication takes the union of monomials, which is the ``x**m == x``
    rule applied eagerly.  Zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Iterable[str], int] | None = None):
        acc: dict[frozenset, int] = {}
        for mono, coef in (terms or {}).items():
            key = frozenset((mono,)) if isinstance(mono, str) else frozenset(mono)
            acc[key] = acc.get(key, 0) + int(coef)
        self._terms = {m: c for m, c in acc.items() if c != 0}
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "MultilinearPoly":
        return cls({frozenset(): c})

    @classmethod
    def var(cls, name: str) -> "MultilinearPoly":
        return cls({frozenset((name,)): 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def variables(self) -> frozenset[str]:
        return frozenset().union(*self._terms) if self._terms else frozenset()

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_term(self) -> int:
        return self._terms.get(frozenset(), 0)

    def _lift(self, other):
        if isinstance(other, MultilinearPoly):
            return other
        if isinstance(other, int):
            return MultilinearPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, 0) + c
        return MultilinearPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return MultilinearPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms: dict[frozenset, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 | m2
                terms[m] = terms.get(m, 0) + c1 * c2
        return MultilinearPoly(terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def cofactor(self, name: str, value: Bit) -> "MultilinearPoly":
        """Substitute ``name := value``."""
        terms: dict[frozenset, int] = {}
        for m, c in self._terms.items():
            if name in m:
                if value == 0:
                    continue
                m = m - {name}
            terms[m] = terms.get(m, 0) + c
        return MultilinearPoly(terms)

    def _sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: (len(mc[0]), sorted(mc[0])))

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self._sorted_terms()):
            mono = "*".join(sorted(m))
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"MultilinearPoly({self})"


def arithmetize(e: BoolExpr) -> MultilinearPoly:
    """Translate ``e`` into its multilinear polynomial.

    >>> str(arithmetize(parse_expr("!(!x | !y)")))
    'x*y'
    """
    if isinstance(e, Const):
        return MultilinearPoly.const(e.value)
    if isinstance(e, Var):
        return MultilinearPoly.var(e.name)
    if isinstance(e, Not):
        return 1 - arithmetize(e.child)
    if not isinstance(e, _Nary):
        raise TypeError(f"not a BoolExpr: {e!r}")
    polys = [arithmetize(c) for c in e.children]
    if isinstance(e, (And, Nand)):
        p = reduce(lambda a, b: a * b, polys)
        return p if isinstance(e, And) else 1 - p
    if isinstance(e, (Or, Nor)):
        p = reduce(lambda a, b: a + b - a * b, polys)
        return p if isinstance(e, Or) else 1 - p
    a, b = polys
    return a + b - 2 * (a * b)


def poly_eval(p: MultilinearPoly, assignment: Mapping[str, Bit]) -> int:
    """Substitute a 0/1 assignment; the result is a bit for arithmetized polys."""
    total = 0
    for mono, coef in p._terms.items():
        for name in mono:
            try:
                v = assignment[name]
            except KeyError:
                raise UnknownVariable(name) from None
            if not v:
                break
        else:
            total += coef
    return total


def truth_table(p: MultilinearPoly, names: Iterable[str] | None = None) -> list[int]:
    """Values of ``p`` on all assignments, first name most significant."""
    names = sorted(p.variables) if names is None else list(names)
    return [poly_eval(p, dict(zip(names, bits))) for bits in product((0, 1), repeat=len(names))]


EXHAUSTIVE_CHECK_LIMIT = 20


def is_boolean_valued(p: MultilinearPoly) -> bool:
    """Exhaustive check via a subset-sum (zeta) transform of the coefficients."""
    names = sorted(p.variables)
    index = {n: i for i, n in enumerate(names)}
    n = len(names)
    values = [0] * (1 << n)
    for mono, coef in p._terms.items():
        mask = 0
        for name in mono:
            mask |= 1 << index[name]
        values[mask] += coef
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if mask & bit:
                values[mask] += values[mask ^ bit]
    return all(v in (0, 1) for v in values)


def poly_to_bool(p: MultilinearPoly) -> BoolExpr:
    """Convert a Boolean-valued polynomial back to a sum-of-products expression.

    Shannon expansion over the sorted variable names.  Unate cofactor pairs
    are folded (``f0 <= f1`` gives ``f0 | x & f1``), which turns
    ``x + y - x*y`` into ``x | y`` rather than ``x | !x & y``.  Implication
    between cofactors is decided exactly as ``f0 * (1 - f1) == 0`` thanks to
    the uniqueness of multilinear forms.
    """
    if len(p.variables) <= EXHAUSTIVE_CHECK_LIMIT and not is_boolean_valued(p):
        raise NotBooleanValued(f"{p} takes values outside {{0, 1}}")
    products = _sop(p, tuple(sorted(p.variables)), {})
    if products is True:
        return Const(1)
    if not products:
        return Const(0)
    terms = [lits[0] if len(lits) == 1 else And(lits) for lits in products]
    return terms[0] if len(terms) == 1 else Or(tuple(terms))


def _sop(p, names, memo):
    """Return ``True`` for the constant-1 function, else a list of products."""
    if p.is_constant():
        c = p.constant_term()
        if c not in (0, 1):
            raise NotBooleanValued(f"constant {c} is not a bit")
        return True if c == 1 else []
    key = p
    if key in memo:
        return memo[key]
    pvars = p.variables
    i = 0
    while names[i] not in pvars:
        i += 1
    x, rest = names[i], names[i + 1:]
    f0, f1 = p.cofactor(x, 0), p.cofactor(x, 1)
    pos, neg = (Var(x),), (Not(Var(x)),)

    def with_lit(lit, sub):
        if sub is True:
            return [lit]
        return [lit + prod for prod in sub]

    def union(a, b):
        if a is True or b is True:
            return True
        return a + [q for q in b if q not in a]

    if f0 * (1 - f1) == MultilinearPoly():
        result = union(with_lit(pos, _sop(f1, rest, memo)), _sop(f0, rest, memo))
    elif f1 * (1 - f0) == MultilinearPoly():
        result = union(_sop(f1, rest, memo), with_lit(neg, _sop(f0, rest, memo)))
    else:
        result = with_lit(neg, _sop(f0, rest, memo)) + with_lit(pos, _sop(f1, rest, memo))
    memo[key] = result
    return result
