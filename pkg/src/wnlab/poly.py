"""Sparse multivariate polynomials over the rings in :mod:`wnlab.coeffs`.

A polynomial is a dict from exponent tuples to nonzero canonical
coefficients, attached to a :class:`PolyRing` that fixes the coefficient
ring, the variable names and the monomial order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .coeffs import CoeffRing, ZZ

Exp = tuple  # tuple[int, ...]


class IncompatibleContextError(ValueError):
    """Operands live in different polynomial rings."""


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------- orders


def _grevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


def _lex_key(e):
    return tuple(e)


_INNER = {"lex": _lex_key, "grevlex": _grevlex_key}


@dataclass(frozen=True)
class MonomialOrder:
    """Lex, GrevLex, or Block(prefix, inner).

    A block order compares the first ``prefix`` exponents with ``inner``
    and breaks ties on the remaining exponents with ``inner``; monomials
    involving the prefix variables are larger than all monomials free of
    them, which is what elimination needs.
    """

    kind: str = "grevlex"
    prefix: int = 0
    inner: str = "grevlex"

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown order {self.kind!r}")
        if self.inner not in _INNER:
            raise ValueError(f"unknown inner order {self.inner!r}")

    def keyfunc(self) -> Callable[[Exp], tuple]:
        if self.kind != "block":
            return _INNER[self.kind]
        k, inner = self.prefix, _INNER[self.inner]
        return lambda e: (inner(e[:k]), inner(e[k:]))

    def __str__(self):
        if self.kind == "block":
            if self.inner == "grevlex":
                return f"block({self.prefix})"
            return f"block({self.prefix}, {self.inner})"
        return self.kind


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def block(prefix: int, inner: str = "grevlex") -> MonomialOrder:
    return MonomialOrder("block", prefix, inner)


# ---------------------------------------------------------------- monomials


def mono_mul(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


# ---------------------------------------------------------------- rings


@dataclass(frozen=True)
class PolyRing:
    coeffs: CoeffRing
    vars: tuple
    order: MonomialOrder = GREVLEX
    _key: Callable = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate variable names in {self.vars}")
        for v in self.vars:
            if not _IDENT.fullmatch(v):
                raise ValueError(f"bad variable name {v!r}")
        if self.order.kind == "block" and not 0 <= self.order.prefix <= len(self.vars):
            raise ValueError("block prefix exceeds variable count")
        cache: dict = {}
        raw = self.order.keyfunc()

        def key(e):
            try:
                return cache[e]
            except KeyError:
                r = cache[e] = raw(e)
                return r

        object.__setattr__(self, "_key", key)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def key(self):
        return self._key

    def zero_exp(self) -> Exp:
        return (0,) * len(self.vars)

    def __call__(self, data) -> "Poly":
        """Coerce an int, Fraction, Poly of an equal ring, or string."""
        if isinstance(data, Poly):
            if data.ring != self:
                raise IncompatibleContextError(f"{data.ring} vs {self}")
            return data
        if isinstance(data, str):
            return parse_poly(data, self)
        if isinstance(data, (int, Fraction)):
            return Poly(self, {self.zero_exp(): data})
        raise TypeError(f"cannot coerce {type(data).__name__} into {self}")

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self(1)

    def gen(self, name_or_index) -> "Poly":
        i = self.vars.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self) -> list["Poly"]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, e: Exp, c=1) -> "Poly":
        return Poly(self, {tuple(e): c})

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.coeffs, self.vars, order)

    def with_coeffs(self, coeffs: CoeffRing) -> "PolyRing":
        return PolyRing(coeffs, self.vars, self.order)

    def with_vars(self, vars, order: MonomialOrder | None = None) -> "PolyRing":
        return PolyRing(self.coeffs, tuple(vars), order or self.order)

    def compatible(self, other: "PolyRing") -> bool:
        return self.coeffs == other.coeffs and self.vars == other.vars

    def __str__(self):
        return f"{self.coeffs}[{','.join(self.vars)}]"


# ---------------------------------------------------------------- polynomials


class Poly:
    """Immutable polynomial. ``terms`` is sorted by descending monomial."""

    __slots__ = ("ring", "_t", "_terms")

    def __init__(self, ring: PolyRing, data: Mapping, normalize: bool = True):
        self.ring = ring
        if normalize:
            K = ring.coeffs
            t = {}
            for e, c in data.items():
                c = K(c)
                if c:
                    t[tuple(e)] = c
            data = t
        self._t = data
        self._terms = None

    # -- access
    @property
    def terms(self) -> list:
        if self._terms is None:
            key = self.ring.key
            self._terms = sorted(self._t.items(), key=lambda it: key(it[0]), reverse=True)
        return self._terms

    def as_dict(self) -> dict:
        return dict(self._t)

    def coeff(self, e: Exp):
        return self._t.get(tuple(e), 0)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        z = self.ring.zero_exp()
        return all(e == z for e in self._t)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._t.get(self.ring.zero_exp(), 0)

    @property
    def LM(self) -> Exp:
        return self.terms[0][0]

    @property
    def LC(self):
        return self.terms[0][1]

    def degree(self) -> int:
        return max((sum(e) for e in self._t), default=-1)

    def support_vars(self) -> set:
        return {i for e in self._t for i, x in enumerate(e) if x}

    def __len__(self):
        return len(self._t)

    # -- equality
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._t == other._t

    def __hash__(self):
        return hash((self.ring, frozenset(self._t.items())))

    # -- arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise IncompatibleContextError(f"{self.ring} ({self.ring.order}) vs {other.ring} ({other.ring.order})")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        t = dict(self._t)
        for e, c in other._t.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        t: dict = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.ring.one(), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_term(self, e: Exp, c) -> "Poly":
        return Poly(self.ring, {mono_mul(e, m): c * d for m, d in self._t.items()})

    def scale(self, c) -> "Poly":
        return Poly(self.ring, {e: c * d for e, d in self._t.items()})

    # -- structure changes
    def diff(self, var) -> "Poly":
        i = self.ring.vars.index(var) if isinstance(var, str) else var
        t = {}
        for e, c in self._t.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        return Poly(self.ring, t)

    def to_ring(self, ring: PolyRing, var_map: Iterable[int] | None = None) -> "Poly":
        """Re-embed into ``ring``; ``var_map[i]`` is the target index of variable i.

        Without ``var_map`` variables are matched by name.
        """
        if var_map is None:
            try:
                var_map = [ring.vars.index(v) for v in self.ring.vars]
            except ValueError as exc:
                raise IncompatibleContextError(f"{self.ring} does not embed in {ring}") from exc
        var_map = list(var_map)
        n = ring.nvars
        t = {}
        for e, c in self._t.items():
            f = [0] * n
            for i, x in enumerate(e):
                if x:
                    f[var_map[i]] += x
            f = tuple(f)
            t[f] = t.get(f, 0) + c
        return Poly(ring, t)

    def subs(self, images: list["Poly"], ring: PolyRing | None = None) -> "Poly":
        """Substitute ``images[i]`` for variable i; result lives in the images' ring."""
        if len(images) != self.ring.nvars:
            raise ValueError("one image per variable required")
        target = ring or (images[0].ring if images else self.ring)
        result = target.zero()
        cache: dict = {}
        for e, c in self._t.items():
            term = target(c)
            for i, x in enumerate(e):
                if x:
                    if (i, x) not in cache:
                        cache[i, x] = images[i] ** x
                    term = term * cache[i, x]
            result = result + term
        return result

    # -- printing
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, {self.ring})"


# ---------------------------------------------------------------- printing


def _format_monomial(e: Exp, names) -> str:
    parts = []
    for v, x in zip(names, e):
        if x == 1:
            parts.append(v)
        elif x > 1:
            parts.append(f"{v}^{x}")
    return "*".join(parts)


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    out = []
    for e, c in f.terms:
        mono = _format_monomial(e, f.ring.vars)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# ---------------------------------------------------------------- parsing

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} at {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg):
        raise ParseError(f"{msg} in {self.text!r}")

    def parse(self) -> Poly:
        if not self.toks:
            self.fail("empty expression")
        f = self.expr()
        if self.i != len(self.toks):
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return f

    def expr(self):
        f = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            g = self.unary()
            if op == "*":
                f = f * g
            else:
                if not g.is_constant() or g.is_zero():
                    self.fail("division only by nonzero constants")
                d = g.constant_value()
                K = self.ring.coeffs
                try:
                    f = Poly(self.ring, {e: K.divide(c, d) for e, c in f.as_dict().items()})
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"coefficient not representable in {K}: {exc} in {self.text!r}") from None
        return f

    def unary(self):
        tok = self.peek()
        if tok == ("op", "-"):
            self.take()
            return -self.unary()
        if tok == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                self.fail("exponent must be a non-negative integer literal")
            base = base**val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring(val)
        if kind == "name":
            if val not in self.ring.vars:
                raise ParseError(f"unknown variable {val!r} (ring {self.ring}) in {self.text!r}")
            return self.ring.gen(val)
        if (kind, val) == ("op", "("):
            f = self.expr()
            if self.take() != ("op", ")"):
                self.fail("missing ')'")
            return f
        self.fail(f"unexpected {'end of input' if kind is None else repr(val)}")


def parse_poly(text: str, ring: PolyRing) -> Poly:
    """Parse ``text`` (``+ - * / ^ **``, integers, variable names) into ``ring``."""
    return _Parser(text, ring).parse()


def split_top(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside any bracket nesting; empty pieces dropped."""
    depth, cur, out = 0, [], []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced brackets in {text!r}")
    out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]


def parse_poly_list(text: str, ring: PolyRing) -> list[Poly]:
    """Parse ``"f, g"``, ``"(f, g)"`` or ``"[f, g]"``."""
    t = text.strip()
    if t[:1] in "([" and _matching_close(t) == len(t) - 1:
        t = t[1:-1]
    return [parse_poly(s, ring) for s in split_top(t)]


def _matching_close(t: str) -> int:
    depth = 0
    for i, ch in enumerate(t):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
            if depth == 0:
                return i
    return -1


def polynomial_ring(coeffs: CoeffRing = ZZ, vars=("x",), order: MonomialOrder = GREVLEX) -> PolyRing:
    if isinstance(vars, str):
        vars = [v for v in re.split(r"[\s,]+", vars) if v]
    return PolyRing(coeffs, tuple(vars), order)
