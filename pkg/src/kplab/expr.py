"""Parser for algebra expressions such as ``2*s(b1 r2)*star(s(r1)) + p(00)``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | atom
    atom   := INT ['/' INT] | 'x' ['^' ['-'] INT]
            | 'p(' vertex ')' | 's(' path ')' | 'star(' expr ')' | '(' expr ')'

A path is a vertex id or edge ids separated by spaces or dots. ``x`` is the
indeterminate of a Laurent ring. Scalars multiply elements; a scalar summand
or a scalar result stands for that multiple of 1.
"""

from __future__ import annotations

import re
from fractions import Fraction

from kplab.algebra import AlgebraElem, gen_p, gen_s, one
from kplab.kgraph import GraphError
from kplab.rings import Laurent


class ExprError(ValueError):
    def __init__(self, message, col=None):
        self.col = col
        super().__init__(f"col {col + 1}: {message}" if col is not None else message)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


class _Parser:
    def __init__(self, text, graph, ring):
        self.text, self.g, self.ring = text, graph, ring
        self.pos = 0

    # tokens

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip()
        m = _TOKEN.match(self.text, self.pos)
        if not m or self.pos >= len(self.text):
            return None, None
        num, word, ch = m.groups()
        return (("int", num) if num else ("word", word) if word else ("op", ch))

    def take(self):
        kind, val = self.peek()
        if kind is None:
            raise ExprError("unexpected end of expression", len(self.text) - 1)
        self.pos = _TOKEN.match(self.text, self.pos).end()
        return kind, val

    def expect(self, ch):
        start = self.pos
        kind, val = self.take()
        if (kind, val) != ("op", ch):
            raise ExprError(f"expected {ch!r}, found {val!r}", start)

    def raw_until_close(self):
        start = self.pos
        depth_end = self.text.find(")", self.pos)
        if depth_end < 0:
            raise ExprError("missing ')'", start)
        body = self.text[self.pos:depth_end]
        self.pos = depth_end + 1
        return body, start

    # grammar

    def parse(self):
        v = self.expr()
        kind, val = self.peek()
        if kind is not None:
            raise ExprError(f"unexpected {val!r}", self.pos)
        return v

    def expr(self):
        v = self.term()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "+"):
                self.take()
                v = _add(self, v, self.term())
            elif (kind, val) == ("op", "-"):
                self.take()
                v = _add(self, v, _neg(self.term()))
            else:
                return v

    def term(self):
        v = self.unary()
        while self.peek() == ("op", "*"):
            self.take()
            v = _mul(self, v, self.unary())
        return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return _neg(self.unary())
        return self.atom()

    def atom(self):
        start = self.pos
        kind, val = self.take()
        if kind == "int":
            if self.peek() == ("op", "/"):
                self.take()
                k2, den = self.take()
                if k2 != "int" or int(den) == 0:
                    raise ExprError("bad denominator", start)
                return self._scalar(Fraction(int(val), int(den)), start)
            return self._scalar(int(val), start)
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect(")")
            return v
        if kind == "word":
            if val == "x":
                if self.ring.kind != "Laurent":
                    raise ExprError(f"x is not defined over {self.ring}", start)
                exp = 1
                if self.peek() == ("op", "^"):
                    self.take()
                    sign = 1
                    if self.peek() == ("op", "-"):
                        self.take()
                        sign = -1
                    k2, e = self.take()
                    if k2 != "int":
                        raise ExprError("exponent must be an integer", start)
                    exp = sign * int(e)
                return Laurent.monomial(self.ring.base, exp)
            if val in ("p", "s", "star"):
                self.expect("(")
                if val == "star":
                    v = self.expr()
                    self.expect(")")
                    return v.star() if isinstance(v, AlgebraElem) else v
                body, at = self.raw_until_close()
                items = [t for t in re.split(r"[\s.]+", body.strip()) if t]
                try:
                    if val == "p":
                        if len(items) != 1:
                            raise ExprError("p() takes one vertex", at)
                        return gen_p(self.g, self.ring, items[0])
                    if not items:
                        raise ExprError("s() needs a path", at)
                    return gen_s(self.g, self.ring, items)
                except GraphError as exc:
                    raise ExprError(str(exc), at) from None
        raise ExprError(f"unexpected {val!r}", start)

    def _scalar(self, v, at):
        try:
            return self.ring.coerce(v)
        except Exception as exc:
            raise ExprError(str(exc), at) from None


def _neg(v):
    return -v


def _add(p, a, b):
    if isinstance(a, AlgebraElem) or isinstance(b, AlgebraElem):
        return _promote(p, a) + _promote(p, b)
    return a + b


def _mul(p, a, b):
    if isinstance(a, AlgebraElem) and isinstance(b, AlgebraElem):
        return a * b
    if isinstance(a, AlgebraElem):
        return a.scale(b)
    if isinstance(b, AlgebraElem):
        return b.scale(a)
    return a * b


def _promote(p, v):
    return v if isinstance(v, AlgebraElem) else one(p.g, p.ring).scale(v)


def parse_expr(text, graph, ring) -> AlgebraElem:
    """Evaluate an expression to a normal-form element."""
    if not text.strip():
        raise ExprError("empty expression")
    p = _Parser(text, graph, ring)
    return _promote(p, p.parse())


__all__ = ["ExprError", "parse_expr"]
