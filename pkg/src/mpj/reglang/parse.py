"""A small regular-expression syntax over single-character letters.

Grammar (whitespace ignored)::

    union   := inter ( '|' inter | '+' inter )*     '+' is union only when an atom follows
    inter   := unary ( '&' unary )*
    unary   := '~' unary | concat
    concat  := postfix+
    postfix := atom ( '*' | '+' | '?' )*
    atom    := letter | '.' | '[' letters ']' | '(' union ')'
             | '<' word (',' word)* '>_' digits
             | word '-shuffle'
             | ':shuffle(' word ')' | ':factor(' word ')' | ':prefix(' word ')'
             | ':suffix(' word ')' | ':word(' word ')' | ':all' | ':none'

Letters are ASCII letters, digits and ``#``.  ``(a+b)*ac+`` therefore reads as
``(a|b)* a c c*``.
"""

from __future__ import annotations

from ..words import Alphabet
from .expr import (Complement, Concat, ExprError, Factor, Intersection, Letters, Prefix, ShuffleIdeal,
                   SingleWord, Star, Suffix, ThresholdBlock, Union, empty_language, sigma_star)


class ParseError(ExprError):
    pass


def _is_letter(ch):
    return ch.isascii() and (ch.isalnum() or ch == "#")


_NAMED = ("shuffle", "factor", "prefix", "suffix", "word")


class _Parser:
    def __init__(self, text):
        self.s = "".join(text.split())
        self.i = 0
        self.letters = set()

    def peek(self, k=0):
        j = self.i + k
        return self.s[j] if j < len(self.s) else ""

    def eat(self, tok):
        if not self.s.startswith(tok, self.i):
            raise ParseError(f"expected {tok!r} at offset {self.i} in {self.s!r}")
        self.i += len(tok)

    def starts_atom(self, j):
        ch = self.s[j] if j < len(self.s) else ""
        return ch != "" and (_is_letter(ch) or ch in "(.[<:~")

    def word(self):
        j = self.i
        while j < len(self.s) and _is_letter(self.s[j]):
            j += 1
        w = self.s[self.i:j]
        self.i = j
        self.letters.update(w)
        return w

    def union(self):
        parts = [self.inter()]
        while True:
            if self.peek() == "|":
                self.i += 1
                parts.append(self.inter())
            elif self.peek() == "+" and self.starts_atom(self.i + 1):
                self.i += 1
                parts.append(self.inter())
            else:
                break
        return parts[0] if len(parts) == 1 else ("union", parts)

    def inter(self):
        parts = [self.unary()]
        while self.peek() == "&":
            self.i += 1
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else ("inter", parts)

    def unary(self):
        if self.peek() == "~":
            self.i += 1
            return ("not", self.unary())
        return self.concat()

    def concat(self):
        parts = []
        while self.peek() and self.peek() not in "|&)" and self.peek() != "~":
            if self.peek() == "+" and self.starts_atom(self.i + 1) and parts:
                break
            parts.append(self.postfix())
        if not parts:
            raise ParseError(f"expected an expression at offset {self.i} in {self.s!r}")
        return parts[0] if len(parts) == 1 else ("concat", parts)

    def postfix(self):
        node = self.atom()
        while True:
            ch = self.peek()
            if ch == "*":
                self.i += 1
                node = ("star", node)
            elif ch == "+" and not self.starts_atom(self.i + 1):
                self.i += 1
                node = ("concat", [node, ("star", node)])
            elif ch == "?":
                self.i += 1
                node = ("union", [node, ("lit", "")])
            else:
                return node

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.i += 1
            node = self.union()
            self.eat(")")
            return node
        if ch == ".":
            self.i += 1
            return ("any",)
        if ch == "[":
            self.i += 1
            w = self.word()
            self.eat("]")
            return ("class", w)
        if ch == "<":
            self.i += 1
            ws = [self.word()]
            while self.peek() == ",":
                self.i += 1
                ws.append(self.word())
            self.eat(">_")
            j = self.i
            while self.peek().isdigit():
                self.i += 1
            if j == self.i:
                raise ParseError(f"missing threshold after '>_' at offset {j}")
            return ("block", ws, int(self.s[j:self.i]))
        if ch == ":":
            self.i += 1
            for name in ("all", "none"):
                if self.s.startswith(name, self.i):
                    self.i += len(name)
                    return (name,)
            for name in _NAMED:
                if self.s.startswith(name + "(", self.i):
                    self.i += len(name) + 1
                    w = self.word()
                    self.eat(")")
                    return (name, w)
            raise ParseError(f"unknown named atom at offset {self.i} in {self.s!r}")
        if _is_letter(ch):
            j = self.i
            while j < len(self.s) and _is_letter(self.s[j]):
                j += 1
            if self.s.startswith("-shuffle", j):
                w = self.word()
                self.eat("-shuffle")
                return ("shuffle", w)
            self.i += 1
            self.letters.add(ch)
            return ("lit", ch)
        raise ParseError(f"unexpected {ch or 'end of input'!r} at offset {self.i} in {self.s!r}")


def parse_regex(text: str, alphabet=None):
    """Parse the syntax above into a language expression.

    Without an explicit alphabet, the letters occurring in the text (sorted)
    form the alphabet.
    """
    p = _Parser(text)
    tree = p.union()
    if p.i != len(p.s):
        raise ParseError(f"trailing input at offset {p.i} in {p.s!r}")
    if alphabet is None:
        if not p.letters:
            raise ParseError("cannot infer an alphabet from an expression without letters")
        alphabet = Alphabet(tuple(sorted(p.letters)))
    else:
        alphabet = Alphabet.of(alphabet)
    try:
        return _build(tree, alphabet)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(f"{exc} in {text!r}") from exc


def _build(t, A):
    kind = t[0]
    if kind == "lit":
        return SingleWord(t[1], A)
    if kind == "any":
        return Letters(frozenset(A), A)
    if kind == "class":
        return Letters(frozenset(t[1]), A)
    if kind == "all":
        return sigma_star(A)
    if kind == "none":
        return empty_language(A)
    if kind == "block":
        return ThresholdBlock(tuple(t[1]), t[2], A)
    named = {"shuffle": ShuffleIdeal, "factor": Factor, "prefix": Prefix, "suffix": Suffix, "word": SingleWord}
    if kind in named:
        return named[kind](t[1], A)
    if kind == "star":
        return Star(_build(t[1], A))
    if kind == "not":
        return Complement(_build(t[1], A))
    cls = {"union": Union, "inter": Intersection, "concat": Concat}[kind]
    return cls(tuple(_build(c, A) for c in t[1]), A)
