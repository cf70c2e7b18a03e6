"""Words in the free group F_d: parsing, printing, reduction and evaluation.

Grammar (whitespace between terms is optional)::

    word := term { term }
    term := atom [ "^" int ]
    atom := "x" posint | "(" word ")" | "[" word "," word "]" | "1"

``[u,v]`` is sugar for ``u v u^-1 v^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exactnum import ExactMatrix

MAX_EXPONENT = 2**31 - 1
_COND_LIMIT = 1e12


class WordSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int, text: str):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.pos = pos


def _reduce(syllables):
    out: list[list[int]] = []
    for g, e in syllables:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word, stored as ``((generator, exponent), ...)``."""

    syllables: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        syl = tuple((int(g), int(e)) for g, e in self.syllables)
        for g, _ in syl:
            if g < 1:
                raise ValueError("generator indices start at 1")
        object.__setattr__(self, "syllables", _reduce(syl))

    @property
    def arity(self) -> int:
        return max((g for g, _ in self.syllables), default=0)

    def is_trivial(self) -> bool:
        return not self.syllables

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else invert_word(self)
        return Word(base.syllables * abs(k))

    def __str__(self):
        return print_word(self)

    def __repr__(self):
        return f"Word({print_word(self)!r})"


def invert_word(w: Word) -> Word:
    return Word(tuple((g, -e) for g, e in reversed(w.syllables)))


def commutator(u: Word, v: Word) -> Word:
    return u * v * invert_word(u) * invert_word(v)


def print_word(w: Word) -> str:
    if not w.syllables:
        return "1"
    return " ".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in w.syllables)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise WordSyntaxError(msg, self.pos, self.text)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def digits(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected digits")
        return int(self.text[start:self.pos])

    def parse(self) -> Word:
        w = self.word()
        if self.peek():
            self.error("unexpected character")
        return w

    def word(self) -> Word:
        terms = [self.term()]
        while self.peek() and self.peek() not in "),]":
            terms.append(self.term())
        out = Word()
        for t in terms:
            out = out * t
        return out

    def term(self) -> Word:
        a = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            sign = 1
            if self.pos < len(self.text) and self.text[self.pos] == "-":
                sign = -1
                self.pos += 1
            start = self.pos
            e = self.digits()
            if e == 0:
                self.pos = start
                self.error("exponent must be a positive integer")
            if e > MAX_EXPONENT:
                self.pos = start
                self.error("exponent overflow")
            a = a ** (sign * e)
        return a

    def atom(self) -> Word:
        ch = self.peek()
        if ch == "x":
            self.pos += 1
            start = self.pos
            g = self.digits()
            if g == 0:
                self.pos = start
                self.error("generator index 0")
            return Word(((g, 1),))
        if ch == "1":
            self.pos += 1
            return Word()
        if ch == "(":
            self.pos += 1
            w = self.word()
            self.expect(")")
            return w
        if ch == "[":
            self.pos += 1
            u = self.word()
            self.expect(",")
            v = self.word()
            self.expect("]")
            return commutator(u, v)
        self.error("expected a generator, '1', '(' or '['" if ch else "unexpected end of input")


def parse_word(text: str) -> Word:
    """Parse a word expression, e.g. ``"[x1,x2] x1^2"``."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# evaluation

def _backend(args):
    first = args[0]
    if isinstance(first, ExactMatrix):
        n = first.n
        for a in args:
            if not isinstance(a, ExactMatrix) or a.n != n:
                raise ValueError("arguments must share dimension and backend")
        return "exact", n
    arrs = [np.asarray(a) for a in args]
    n = arrs[0].shape[0]
    for a in arrs:
        if a.ndim != 2 or a.shape != (n, n):
            raise ValueError("arguments must be square matrices of one dimension")
    return "numpy", n


def _power(m, e, identity):
    result = identity
    base = m
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def evaluate(w: Word, args):
    """Substitute matrices for the generators of ``w`` and multiply out.

    ``args`` are numpy arrays (float or complex) or :class:`ExactMatrix`
    values; the result has the same backend.  Inverses are only formed for
    generators that occur with a negative exponent.
    """
    args = list(args)
    if len(args) < w.arity:
        raise ValueError(f"word needs {w.arity} arguments, got {len(args)}")
    if not args:
        raise ValueError("cannot infer dimension from an empty argument tuple")
    kind, n = _backend(args)
    if kind == "exact":
        ident = ExactMatrix.identity(n)
        inv = {}
        for g, e in w.syllables:
            if e < 0 and g not in inv:
                inv[g] = args[g - 1].inverse()
    else:
        args = [np.asarray(a) for a in args]
        dtype = np.result_type(*args, float)
        ident = np.eye(n, dtype=dtype)
        inv = {}
        for g, e in w.syllables:
            if e < 0 and g not in inv:
                a = args[g - 1]
                if not np.all(np.isfinite(a)) or np.linalg.cond(a) > _COND_LIMIT:
                    raise np.linalg.LinAlgError(f"argument x{g} is singular to working precision")
                inv[g] = np.linalg.inv(a)
    result = ident
    for g, e in w.syllables:
        base = args[g - 1] if e > 0 else inv[g]
        result = result @ _power(base, abs(e), ident)
    return result
